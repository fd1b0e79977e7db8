#include "signgram/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cmath>

#include "signgram/error.hpp"

namespace signgram {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxGenerateLength = 1000;

ApiError malformed(const std::string& message) { return ApiError(400, "malformed_request", message); }

json parse_body(const std::string& body) {
  json value = json::parse(body, nullptr, false);
  if (value.is_discarded()) throw malformed("request body is not valid JSON");
  if (!value.is_object()) throw malformed("request body must be a JSON object");
  return value;
}

std::uint64_t parse_unsigned(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw malformed(what + " must be a non-negative integer");
  return v;
}

std::size_t top_k_field(const json& body, std::size_t fallback) {
  if (!body.contains("top_k")) return fallback;
  const json& k = body["top_k"];
  if (!k.is_number_integer() || k.get<std::int64_t>() < 1) throw malformed("top_k must be a positive integer");
  return k.get<std::size_t>();
}

Sign sign_from_json(const json& v, std::uint32_t vocabulary_size) {
  if (!v.is_number_integer()) throw malformed("sign ids must be integers");
  const auto id = v.get<std::int64_t>();
  if (id < 1 || id > static_cast<std::int64_t>(vocabulary_size))
    throw ApiError(404, "unknown_sign", "unknown sign id " + std::to_string(id));
  return Sign{static_cast<std::uint32_t>(id)};
}

Commitments commitments_from_json(const json& body, const Text& text, std::uint32_t vocabulary_size) {
  Commitments out;
  if (!body.contains("committed")) return out;
  const json& c = body["committed"];
  if (!c.is_object()) throw malformed("committed must be an object of position -> sign id");
  for (const auto& [key, value] : c.items()) {
    const std::size_t pos = parse_unsigned(key, "committed position");
    const Sign s = sign_from_json(value, vocabulary_size);
    if (pos >= text.size() || !text.tokens[pos].is_gap())
      throw ApiError(422, "not_a_gap", "position " + key + " is not a gap");
    out[pos] = s;
  }
  return out;
}

Text with_commitments(const Text& text, const Commitments& committed) {
  Text out = text;
  for (const auto& [pos, s] : committed) out.tokens[pos] = Token::of(s);
  return out;
}

json error_body(const std::string& code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

template <typename F>
ApiResponse guarded(F&& fn) {
  try {
    return ApiResponse{200, fn()};
  } catch (const ApiError& e) {
    return ApiResponse{e.status(), error_body(e.code(), e.what())};
  } catch (const Error& e) {
    return ApiResponse{422, error_body("invalid_input", e.what())};
  } catch (const json::exception& e) {
    return ApiResponse{400, error_body("malformed_request", e.what())};
  }
}

std::map<std::string, std::string> param_map(const httplib::Request& req) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : req.params) out.emplace(k, v);
  return out;
}

}  // namespace

Text text_from_json(const json& value, std::uint32_t vocabulary_size) {
  if (!value.is_array()) throw malformed("text must be an array of sign ids and \"?\"");
  if (value.empty()) throw ApiError(422, "empty_text", "text is empty");
  Text text;
  for (const json& v : value) {
    if (v.is_string() && v.get<std::string>() == "?")
      text.tokens.push_back(Token::gap());
    else
      text.tokens.push_back(Token::of(sign_from_json(v, vocabulary_size)));
  }
  return text;
}

json text_to_json(const Text& text) {
  json out = json::array();
  for (const Token& t : text.tokens) {
    if (t.is_gap())
      out.push_back("?");
    else
      out.push_back(t.sign().id);
  }
  return out;
}

json restore_json(const NgramModel& model, const TransitionTable* table, const Text& text, std::size_t top_k) {
  const auto gaps = text.gap_positions();
  if (gaps.empty()) throw ApiError(422, "no_gaps", "text has no gaps to restore");
  RestorationResult result;
  if (table != nullptr)
    result = viterbi_restore(*table, text, top_k);
  else if (gaps.size() == 1)
    result = restore_single_gap(model, text, top_k);
  else
    throw ApiError(422, "unsupported_model", "several gaps need a bigram model");

  json assignments = json::array();
  for (const Filling& f : result.assignments) {
    json signs = json::array();
    for (Sign s : f.signs) signs.push_back(s.id);
    assignments.push_back({{"signs", signs}, {"log_prob", f.log_prob}, {"probability", f.probability}});
  }
  return json{{"text", text_to_json(text)},
              {"gaps", result.gap_positions},
              {"method", result.method == RestoreMethod::viterbi ? "viterbi" : "enumeration"},
              {"total_log_prob", result.total_log_prob},
              {"assignments", assignments}};
}

RestorationService::RestorationService(NgramModel model) : model_(std::move(model)) {
  if (!model_.smoothed()) throw DataError("the service needs a smoothed model");
  if (model_.config().order == 2) table_ = std::make_unique<TransitionTable>(model_);
  rows_ = std::make_unique<BigramMatrix>(model_.config().order >= 2 ? bigram_matrix(model_)
                                                                     : independence_matrix(model_));
}

json RestorationService::marginals_json(const Text& text, const Commitments& committed,
                                        std::optional<std::size_t> top_k, std::optional<double> coverage) const {
  const Text filled = with_commitments(text, committed);
  std::vector<GapPosterior> posteriors;
  if (table_) {
    posteriors = gap_marginals(*table_, text, committed);
  } else {
    const auto gaps = filled.gap_positions();
    if (gaps.size() > 1) throw ApiError(422, "unsupported_model", "several gaps need a bigram model");
    if (gaps.size() == 1) {
      const auto r = restore_single_gap(model_, filled, model_.vocabulary_size());
      GapPosterior g;
      g.position = gaps.front();
      g.probabilities.assign(model_.vocabulary_size() + 1, 0.0);
      for (const Filling& f : r.assignments) g.probabilities[f.signs.front().id] = f.probability;
      posteriors.push_back(std::move(g));
    }
  }
  json marginals = json::object();
  json sets = json::object();
  json gaps = json::array();
  for (const GapPosterior& g : posteriors) {
    const auto ranked = ranked_candidates(g);
    json candidates = json::array();
    const std::size_t n = std::min(ranked.size(), top_k.value_or(ranked.size()));
    for (std::size_t i = 0; i < n; ++i)
      candidates.push_back({{"sign", ranked[i].id}, {"probability", g.probabilities[ranked[i].id]}});
    const std::string key = std::to_string(g.position);
    marginals[key] = candidates;
    gaps.push_back(g.position);
    if (coverage) {
      json set = json::array();
      for (Sign s : coverage_set(g, *coverage)) set.push_back(s.id);
      sets[key] = set;
    }
  }
  json out{{"gaps", gaps}, {"marginals", marginals}};
  if (coverage) {
    out["coverage"] = *coverage;
    out["coverage_sets"] = sets;
  }
  return out;
}

ApiResponse RestorationService::restore(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.contains("text")) throw malformed("missing field: text");
    const Text text = text_from_json(req["text"], model_.vocabulary_size());
    return restore_json(model_, table_.get(), text, top_k_field(req, 10));
  });
}

ApiResponse RestorationService::marginals(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.contains("text")) throw malformed("missing field: text");
    const Text text = text_from_json(req["text"], model_.vocabulary_size());
    const Commitments committed = commitments_from_json(req, text, model_.vocabulary_size());
    std::optional<std::size_t> top_k;
    if (req.contains("top_k")) top_k = top_k_field(req, 0);
    std::optional<double> coverage;
    if (req.contains("coverage")) {
      if (!req["coverage"].is_number()) throw malformed("coverage must be a number");
      coverage = req["coverage"].get<double>();
      if (!(*coverage > 0.0 && *coverage <= 1.0)) throw ApiError(422, "invalid_coverage", "coverage must be in (0, 1]");
    }
    return marginals_json(text, committed, top_k, coverage);
  });
}

ApiResponse RestorationService::row(const std::map<std::string, std::string>& params) const {
  return guarded([&] {
    const auto ctx = params.find("context");
    if (ctx == params.end()) throw malformed("missing parameter: context");
    TokenId history = kStartToken;
    if (ctx->second != "<s>") {
      const std::uint64_t id = parse_unsigned(ctx->second, "context");
      if (id < 1 || id > model_.vocabulary_size())
        throw ApiError(404, "unknown_sign", "unknown sign id " + ctx->second);
      history = static_cast<TokenId>(id);
    }
    std::size_t top_k = model_.vocabulary_size() + 1;
    if (const auto k = params.find("top_k"); k != params.end()) {
      top_k = parse_unsigned(k->second, "top_k");
      if (top_k < 1) throw malformed("top_k must be a positive integer");
    }
    const auto values = rows_->row(history);
    std::vector<TokenId> followers;
    for (TokenId t = 1; t < values.size(); ++t) followers.push_back(t);
    std::stable_sort(followers.begin(), followers.end(),
                     [&](TokenId a, TokenId b) { return values[a] > values[b]; });
    if (followers.size() > top_k) followers.resize(top_k);
    json list = json::array();
    for (TokenId t : followers) {
      json follower = t == model_.end() ? json("</s>") : json(t);
      list.push_back({{"follower", follower}, {"probability", values[t]}});
    }
    json context = history == kStartToken ? json("<s>") : json(history);
    return json{{"context", context}, {"followers", list}};
  });
}

ApiResponse RestorationService::score(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.contains("text")) throw malformed("missing field: text");
    const Text text = text_from_json(req["text"], model_.vocabulary_size());
    if (text.damaged()) throw ApiError(422, "has_gaps", "cannot score a text with gaps");
    ScoreOptions options;
    if (req.contains("predict_end")) options.predict_end = req["predict_end"].get<bool>();
    if (req.contains("use_start")) options.use_start = req["use_start"].get<bool>();
    const double lp = sequence_log_prob(model_, text, options);
    return json{{"text", text_to_json(text)}, {"log_prob", lp}};
  });
}

ApiResponse RestorationService::generate(const std::map<std::string, std::string>& params) const {
  return guarded([&] {
    const auto s = params.find("seed");
    if (s == params.end()) throw malformed("missing parameter: seed");
    const std::uint64_t seed = parse_unsigned(s->second, "seed");
    std::size_t max_len = kDefaultMaxTextLength;
    if (const auto m = params.find("max_len"); m != params.end()) {
      max_len = parse_unsigned(m->second, "max_len");
      if (max_len < 1 || max_len > kMaxGenerateLength)
        throw ApiError(422, "invalid_length", "max_len must be in [1, 1000]");
    }
    json text = json::array();
    for (Sign sign : signgram::generate(model_, seed, max_len)) text.push_back(sign.id);
    return json{{"seed", seed}, {"max_len", max_len}, {"text", text}};
  });
}

ApiResponse RestorationService::meta() const {
  return guarded([&] {
    return json{{"api_version", kApiVersion},
                {"vocabulary_size", model_.vocabulary_size()},
                {"order", model_.config().order},
                {"smoothing", std::string(to_string(model_.config().smoothing))},
                {"label", model_.label()},
                {"multi_gap", table_ != nullptr},
                {"endpoints",
                 {"POST /api/restore", "POST /api/marginals", "GET /api/row", "POST /api/score",
                  "GET /api/generate", "GET /api/meta", "POST /api/session", "GET /api/session/{id}",
                  "POST /api/session/{id}/commit", "POST /api/session/{id}/undo", "DELETE /api/session/{id}"}}};
  });
}

json RestorationService::session_json(const std::string& id, const Session& session) const {
  Commitments committed;
  for (const auto& [pos, s] : session.history) committed[pos] = s;
  json c = json::object();
  for (const auto& [pos, s] : committed) c[std::to_string(pos)] = s.id;
  json out{{"session", id}, {"text", text_to_json(session.text)}, {"committed", c}};
  out.update(marginals_json(session.text, committed, std::nullopt, std::nullopt));

  const Text filled = with_commitments(session.text, committed);
  if (!filled.damaged()) {
    out["best"] = {{"text", text_to_json(filled)}, {"log_prob", sequence_log_prob(model_, filled)}};
  } else if (table_ || filled.gap_positions().size() == 1) {
    const json r = restore_json(model_, table_.get(), filled, 1);
    Text best = filled;
    const auto& signs = r["assignments"][0]["signs"];
    for (std::size_t i = 0; i < signs.size(); ++i)
      best.tokens[r["gaps"][i].get<std::size_t>()] = Token::of(signs[i].get<std::uint32_t>());
    out["best"] = {{"text", text_to_json(best)}, {"log_prob", r["assignments"][0]["log_prob"]}};
  }
  return out;
}

ApiResponse RestorationService::create_session(const std::string& body) {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.contains("text")) throw malformed("missing field: text");
    Session session{text_from_json(req["text"], model_.vocabulary_size()), {}};
    std::string id;
    {
      std::lock_guard lock(sessions_mu_);
      id = "s" + std::to_string(next_session_++);
      sessions_.emplace(id, session);
    }
    return session_json(id, session);
  });
}

ApiResponse RestorationService::commit(const std::string& id, const std::string& body) {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.contains("position") || !req["position"].is_number_unsigned())
      throw malformed("position must be a non-negative integer");
    if (!req.contains("sign")) throw malformed("missing field: sign");
    const auto pos = req["position"].get<std::size_t>();
    const Sign sign = sign_from_json(req["sign"], model_.vocabulary_size());
    Session snapshot;
    {
      std::lock_guard lock(sessions_mu_);
      const auto it = sessions_.find(id);
      if (it == sessions_.end()) throw ApiError(404, "unknown_session", "no session " + id);
      Session& s = it->second;
      if (pos >= s.text.size() || !s.text.tokens[pos].is_gap())
        throw ApiError(422, "not_a_gap", "position " + std::to_string(pos) + " is not a gap");
      for (const auto& [p, prev] : s.history) {
        if (p == pos) throw ApiError(422, "already_committed", "gap " + std::to_string(pos) + " is already committed");
      }
      s.history.emplace_back(pos, sign);
      snapshot = s;
    }
    return session_json(id, snapshot);
  });
}

ApiResponse RestorationService::undo(const std::string& id) {
  return guarded([&] {
    Session snapshot;
    {
      std::lock_guard lock(sessions_mu_);
      const auto it = sessions_.find(id);
      if (it == sessions_.end()) throw ApiError(404, "unknown_session", "no session " + id);
      if (it->second.history.empty()) throw ApiError(422, "nothing_to_undo", "no commitment to undo");
      it->second.history.pop_back();
      snapshot = it->second;
    }
    return session_json(id, snapshot);
  });
}

ApiResponse RestorationService::get_session(const std::string& id) const {
  return guarded([&] {
    Session snapshot;
    {
      std::lock_guard lock(sessions_mu_);
      const auto it = sessions_.find(id);
      if (it == sessions_.end()) throw ApiError(404, "unknown_session", "no session " + id);
      snapshot = it->second;
    }
    return session_json(id, snapshot);
  });
}

ApiResponse RestorationService::delete_session(const std::string& id) {
  return guarded([&] {
    std::lock_guard lock(sessions_mu_);
    if (sessions_.erase(id) == 0) throw ApiError(404, "unknown_session", "no session " + id);
    return json{{"deleted", id}};
  });
}

void RestorationService::install_routes(httplib::Server& server, const RouteOptions& options) {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/api/restore", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, restore(req.body));
  });
  server.Post("/api/marginals", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, marginals(req.body));
  });
  server.Get("/api/row", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, row(param_map(req)));
  });
  server.Post("/api/score", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, score(req.body));
  });
  server.Get("/api/generate", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, generate(param_map(req)));
  });
  server.Get("/api/meta", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, meta()); });
  server.Post("/api/session", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, create_session(req.body));
  });
  server.Get(R"(/api/session/([A-Za-z0-9]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_session(req.matches[1]));
  });
  server.Delete(R"(/api/session/([A-Za-z0-9]+))",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, delete_session(req.matches[1]));
                });
  server.Post(R"(/api/session/([A-Za-z0-9]+)/commit)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, commit(req.matches[1], req.body));
              });
  server.Post(R"(/api/session/([A-Za-z0-9]+)/undo)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, undo(req.matches[1]));
              });

  const std::string origin = options.cors_origin;
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(error_body("internal", "internal error").dump(), "application/json");
  });
  if (options.static_dir && !server.set_mount_point("/", *options.static_dir))
    throw DataError("static directory not found: " + *options.static_dir);
}

bool serve(RestorationService& service, const ServeOptions& options) {
  httplib::Server server;
  service.install_routes(server, {options.cors_origin, options.static_dir});
  return server.listen(options.host, options.port);
}

}  // namespace signgram
