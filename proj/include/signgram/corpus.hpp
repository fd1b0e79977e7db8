#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace signgram {

inline constexpr std::uint32_t kDefaultVocabularySize = 417;
inline constexpr std::size_t kDefaultMaxTextLength = 14;

// Glyph identifier in [1, V]. Id 0 is reserved for the start token inside models.
struct Sign {
  std::uint32_t id = 0;

  friend auto operator<=>(const Sign&, const Sign&) = default;
};

// One position of a stored text: either a legible sign or a gap (lost or
// illegible sign). Boundary tokens exist only inside the model layer.
class Token {
 public:
  enum class Kind : std::uint8_t { sign, gap };

  static Token of(Sign s) { return Token(Kind::sign, s); }
  static Token of(std::uint32_t id) { return Token(Kind::sign, Sign{id}); }
  static Token gap() { return Token(Kind::gap, Sign{}); }

  Kind kind() const noexcept { return kind_; }
  bool is_gap() const noexcept { return kind_ == Kind::gap; }
  // Only meaningful when !is_gap().
  Sign sign() const noexcept { return sign_; }

  friend bool operator==(const Token&, const Token&) = default;

 private:
  Token(Kind k, Sign s) : kind_(k), sign_(s) {}

  Kind kind_;
  Sign sign_;
};

// A single-line inscription in normalized reading order (first-read sign first).
struct Text {
  std::vector<Token> tokens;
  std::optional<std::string> source_id;
  int line_count = 1;

  bool damaged() const noexcept;
  std::size_t size() const noexcept { return tokens.size(); }

  // Sign ids of an undamaged text. Throws DataError if the text has gaps.
  std::vector<Sign> signs() const;

  // Positions of gap tokens, ascending.
  std::vector<std::size_t> gap_positions() const;

  friend bool operator==(const Text&, const Text&) = default;
};

Text make_text(const std::vector<std::uint32_t>& sign_ids);

struct Corpus {
  std::uint32_t vocabulary_size = kDefaultVocabularySize;
  std::vector<Text> texts;
  std::string label = "raw";

  std::size_t size() const noexcept { return texts.size(); }
  bool empty() const noexcept { return texts.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Builds an undamaged corpus directly from sign id lists.
Corpus make_corpus(std::uint32_t vocabulary_size,
                   const std::vector<std::vector<std::uint32_t>>& texts,
                   std::string label = "raw");

struct ParseOptions {
  // Overrides the `#! vocab=` header when set.
  std::optional<std::uint32_t> vocabulary_size;
  std::size_t max_text_length = kDefaultMaxTextLength;
  // Source is transcribed in display order; reverse each text on read.
  bool reverse = false;
};

// Reads the line-oriented corpus format:
//
//   #! vocab=417 label=EBUDS      optional header (first non-empty line)
//   # comment
//   267 99 342 | id=4312 lines=1  one text per line, `?` marks a gap
//
// Throws ParseError (with line number) on malformed fields, sign id 0,
// id > V, over-long texts, unknown metadata and blank lines between texts.
Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});
Corpus parse_corpus_string(const std::string& content, const ParseOptions& options = {});
Corpus read_corpus_file(const std::string& path, const ParseOptions& options = {});

// Inverse of parse_corpus; parse(serialize(c)) == c.
void serialize_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus_string(const Corpus& corpus);

// Parses one whitespace-separated text such as "267 ? 342" (no metadata).
Text parse_text(const std::string& line, std::uint32_t vocabulary_size);
std::string format_text(const Text& text);

struct CleaningOptions {
  bool drop_damaged = true;
  bool drop_multiline = true;
  bool deduplicate = true;
};

struct CleaningReport {
  std::size_t input_texts = 0;
  std::size_t removed_damaged = 0;
  std::size_t removed_multiline = 0;
  std::size_t removed_duplicates = 0;
  std::size_t output_texts = 0;
  // Non-zero when the cleaned corpus ended up empty.
  std::size_t warnings = 0;
};

struct CleaningResult {
  Corpus corpus;
  CleaningReport report;
};

// EBUDS construction: drop damaged and multi-line texts, keep the first copy
// of every repeated sign sequence. Damaged texts are never dedupe candidates.
CleaningResult clean_corpus(const Corpus& raw, const CleaningOptions& options = {});
Corpus build_ebuds(const Corpus& raw);

std::map<std::size_t, std::size_t> length_histogram(const Corpus& corpus);

}  // namespace signgram
