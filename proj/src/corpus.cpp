#include "signgram/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "signgram/error.hpp"

namespace signgram {

bool Text::damaged() const noexcept {
  return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_gap(); });
}

std::vector<Sign> Text::signs() const {
  std::vector<Sign> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (t.is_gap()) throw DataError("text contains a gap; restore or drop it first");
    out.push_back(t.sign());
  }
  return out;
}

std::vector<std::size_t> Text::gap_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].is_gap()) out.push_back(i);
  }
  return out;
}

Text make_text(const std::vector<std::uint32_t>& sign_ids) {
  Text t;
  t.tokens.reserve(sign_ids.size());
  for (std::uint32_t id : sign_ids) t.tokens.push_back(Token::of(id));
  return t;
}

Corpus make_corpus(std::uint32_t vocabulary_size,
                   const std::vector<std::vector<std::uint32_t>>& texts, std::string label) {
  Corpus c;
  c.vocabulary_size = vocabulary_size;
  c.label = std::move(label);
  for (const auto& ids : texts) {
    for (std::uint32_t id : ids) {
      if (id == 0 || id > vocabulary_size)
        throw DataError("sign id " + std::to_string(id) + " outside vocabulary");
    }
    c.texts.push_back(make_text(ids));
  }
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_uint(std::string_view field, std::uint64_t& value) {
  if (field.empty()) return false;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Returns false (with message) instead of throwing so callers can attach line numbers.
bool parse_sign_fields(std::string_view body, std::uint32_t vocabulary_size, Text& text,
                       std::string& error) {
  for (std::string_view field : split_fields(body)) {
    if (field == "?") {
      text.tokens.push_back(Token::gap());
      continue;
    }
    std::uint64_t id = 0;
    if (!parse_uint(field, id)) {
      error = "malformed sign id '" + std::string(field) + "'";
      return false;
    }
    if (id == 0) {
      error = "sign id 0";
      return false;
    }
    if (id > vocabulary_size) {
      error = "sign id " + std::to_string(id) + " exceeds vocabulary size " +
              std::to_string(vocabulary_size);
      return false;
    }
    text.tokens.push_back(Token::of(static_cast<std::uint32_t>(id)));
  }
  if (text.tokens.empty()) {
    error = "empty text";
    return false;
  }
  return true;
}

struct Header {
  std::optional<std::uint32_t> vocabulary_size;
  std::optional<std::string> label;
};

Header parse_header(std::string_view line, std::size_t line_no) {
  Header h;
  for (std::string_view kv : split_fields(line.substr(2))) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "malformed header field");
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    if (key == "vocab") {
      std::uint64_t v = 0;
      if (!parse_uint(value, v) || v == 0 || v > 65534)
        throw ParseError(line_no, "invalid vocabulary size");
      h.vocabulary_size = static_cast<std::uint32_t>(v);
    } else if (key == "label") {
      h.label = std::string(value);
    } else {
      throw ParseError(line_no, "unknown header key '" + std::string(key) + "'");
    }
  }
  return h;
}

void parse_metadata(std::string_view meta, std::size_t line_no, Text& text) {
  for (std::string_view kv : split_fields(meta)) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "malformed metadata field");
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    if (value.empty()) throw ParseError(line_no, "empty metadata value");
    if (key == "id") {
      text.source_id = std::string(value);
    } else if (key == "lines") {
      std::uint64_t n = 0;
      if (!parse_uint(value, n) || n == 0 || n > 1000)
        throw ParseError(line_no, "invalid line count");
      text.line_count = static_cast<int>(n);
    } else {
      throw ParseError(line_no, "unknown metadata key '" + std::string(key) + "'");
    }
  }
}

}  // namespace

Text parse_text(const std::string& line, std::uint32_t vocabulary_size) {
  Text text;
  std::string error;
  if (!parse_sign_fields(trim(line), vocabulary_size, text, error)) throw DataError(error);
  return text;
}

std::string format_text(const Text& text) {
  std::string out;
  for (std::size_t i = 0; i < text.tokens.size(); ++i) {
    if (i) out += ' ';
    const Token& t = text.tokens[i];
    out += t.is_gap() ? std::string("?") : std::to_string(t.sign().id);
  }
  return out;
}

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
  Corpus corpus;
  std::optional<std::uint32_t> header_vocab;
  bool header_allowed = true;
  std::size_t pending_blank = 0;

  // Texts are buffered with their line numbers: the vocabulary is only
  // final once the header has been seen.
  struct RawLine {
    std::size_t line_no;
    std::string content;
  };
  std::vector<RawLine> lines;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) {
      if (!header_allowed) pending_blank = line_no;
      continue;
    }
    if (view.substr(0, 2) == "#!") {
      if (!header_allowed) throw ParseError(line_no, "header must precede all texts");
      Header h = parse_header(view, line_no);
      if (h.vocabulary_size) header_vocab = h.vocabulary_size;
      if (h.label) corpus.label = *h.label;
      continue;
    }
    if (view.front() == '#') continue;
    if (pending_blank) throw ParseError(pending_blank, "empty line between texts");
    header_allowed = false;
    lines.push_back({line_no, std::string(view)});
  }

  corpus.vocabulary_size =
      options.vocabulary_size.value_or(header_vocab.value_or(kDefaultVocabularySize));
  if (corpus.vocabulary_size == 0 || corpus.vocabulary_size > 65534)
    throw DataError("vocabulary size must be in [1, 65534]");

  corpus.texts.reserve(lines.size());
  for (const RawLine& raw : lines) {
    std::string_view body = raw.content;
    std::string_view meta;
    if (const auto bar = body.find('|'); bar != std::string_view::npos) {
      meta = body.substr(bar + 1);
      body = body.substr(0, bar);
    }
    Text text;
    std::string error;
    if (!parse_sign_fields(body, corpus.vocabulary_size, text, error))
      throw ParseError(raw.line_no, error);
    if (text.tokens.size() > options.max_text_length)
      throw ParseError(raw.line_no, "text longer than " + std::to_string(options.max_text_length) +
                                        " signs");
    parse_metadata(meta, raw.line_no, text);
    if (options.reverse) std::reverse(text.tokens.begin(), text.tokens.end());
    corpus.texts.push_back(std::move(text));
  }
  return corpus;
}

Corpus parse_corpus_string(const std::string& content, const ParseOptions& options) {
  std::istringstream in(content);
  return parse_corpus(in, options);
}

Corpus read_corpus_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return parse_corpus(in, options);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  out << "#! vocab=" << corpus.vocabulary_size;
  if (!corpus.label.empty() && corpus.label.find_first_of(" \t\r\n") == std::string::npos)
    out << " label=" << corpus.label;
  out << '\n';
  for (const Text& text : corpus.texts) {
    out << format_text(text);
    if (text.source_id || text.line_count != 1) {
      out << " |";
      if (text.source_id) out << " id=" << *text.source_id;
      if (text.line_count != 1) out << " lines=" << text.line_count;
    }
    out << '\n';
  }
}

std::string serialize_corpus_string(const Corpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

CleaningResult clean_corpus(const Corpus& raw, const CleaningOptions& options) {
  CleaningResult result;
  CleaningReport& report = result.report;
  Corpus& out = result.corpus;
  out.vocabulary_size = raw.vocabulary_size;
  out.label = raw.label;
  report.input_texts = raw.texts.size();

  std::set<std::vector<Sign>> seen;
  for (const Text& text : raw.texts) {
    const bool damaged = text.damaged();
    if (options.drop_damaged && damaged) {
      ++report.removed_damaged;
      continue;
    }
    if (options.drop_multiline && text.line_count > 1) {
      ++report.removed_multiline;
      continue;
    }
    if (options.deduplicate && !damaged && !seen.insert(text.signs()).second) {
      ++report.removed_duplicates;
      continue;
    }
    out.texts.push_back(text);
  }
  if (options.drop_damaged && options.drop_multiline && options.deduplicate) out.label = "EBUDS";
  report.output_texts = out.texts.size();
  if (out.texts.empty()) ++report.warnings;
  return result;
}

Corpus build_ebuds(const Corpus& raw) { return clean_corpus(raw).corpus; }

std::map<std::size_t, std::size_t> length_histogram(const Corpus& corpus) {
  std::map<std::size_t, std::size_t> hist;
  for (const Text& t : corpus.texts) ++hist[t.size()];
  return hist;
}

}  // namespace signgram
