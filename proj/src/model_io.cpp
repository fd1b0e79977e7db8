#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "signgram/error.hpp"
#include "signgram/ngram.hpp"

namespace signgram {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "signgram-ngram";
constexpr int kVersion = 1;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json document_body(const NgramModel& model) {
  const ModelConfig& c = model.config();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["label"] = model.label();
  doc["config"] = {
      {"order", c.order},
      {"smoothing", std::string(to_string(c.smoothing))},
      {"vocabulary_size", c.vocabulary_size},
      {"katz_gt_threshold", c.katz_gt_threshold},
      {"katz_fallback_discount", c.katz_fallback_discount},
  };
  json tables = json::array();
  for (int m = 1; m <= c.order; ++m) {
    json rows = json::array();
    for (const auto& [history, entry] : model.counts().sorted_histories(m)) {
      for (const auto& [follower, n] : entry->followers) {
        json row = json::array();
        for (TokenId t : history) row.push_back(t);
        row.push_back(follower);
        row.push_back(n);
        rows.push_back(std::move(row));
      }
    }
    tables.push_back({{"order", m}, {"ngrams", std::move(rows)}});
  }
  doc["counts"] = std::move(tables);
  return doc;
}

}  // namespace

void save_model(const NgramModel& model, std::ostream& out) {
  json doc = document_body(model);
  doc["checksum"] = hex64(fnv1a64(doc.dump()));
  out << doc.dump() << '\n';
}

std::string save_model_string(const NgramModel& model) {
  std::ostringstream out;
  save_model(model, out);
  return out.str();
}

void save_model_file(const NgramModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  save_model(model, out);
}

NgramModel load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kFormat)
      throw ModelFormatError("not a signgram model file");
    if (doc.at("version").get<int>() != kVersion)
      throw ModelFormatError("unsupported model version " + doc.at("version").dump());
    const std::string checksum = doc.at("checksum").get<std::string>();
    json body = doc;
    body.erase("checksum");
    if (hex64(fnv1a64(body.dump())) != checksum) throw ModelFormatError("model checksum mismatch");

    const json& jc = doc.at("config");
    ModelConfig config;
    config.order = jc.at("order").get<int>();
    config.smoothing = parse_smoothing(jc.at("smoothing").get<std::string>());
    config.vocabulary_size = jc.at("vocabulary_size").get<std::uint32_t>();
    config.katz_gt_threshold = jc.at("katz_gt_threshold").get<int>();
    config.katz_fallback_discount = jc.at("katz_fallback_discount").get<double>();
    config.validate();

    NgramCounts counts(config.order, config.vocabulary_size);
    for (const json& table : doc.at("counts")) {
      const int m = table.at("order").get<int>();
      if (m < 1 || m > config.order) throw ModelFormatError("count table order out of range");
      for (const json& row : table.at("ngrams")) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(m) + 1)
          throw ModelFormatError("malformed n-gram row");
        std::vector<TokenId> history;
        for (int i = 0; i < m - 1; ++i) history.push_back(row[i].get<TokenId>());
        counts.add(history, row[m - 1].get<TokenId>(), row[m].get<std::uint64_t>());
      }
    }
    return NgramModel(config, std::move(counts), doc.at("label").get<std::string>());
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(std::string("invalid model file: ") + e.what());
  }
}

NgramModel load_model_string(const std::string& bytes) {
  std::istringstream in(bytes);
  return load_model(in);
}

NgramModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace signgram
