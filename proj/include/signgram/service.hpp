#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "signgram/corpus.hpp"
#include "signgram/ngram.hpp"
#include "signgram/restore.hpp"

namespace httplib {
class Server;
}

namespace signgram {

inline constexpr int kApiVersion = 1;

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Request failure carrying the HTTP status and a machine-readable code.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

// Text from a JSON array of sign ids and "?" gaps. Throws ApiError:
// 400 malformed, 404 sign id outside [1, V], 422 empty text.
Text text_from_json(const nlohmann::json& value, std::uint32_t vocabulary_size);
nlohmann::json text_to_json(const Text& text);

// Shared by /api/restore and `signgram restore --json`. `table` may be null
// for models that are not bigram models (single-gap texts only).
nlohmann::json restore_json(const NgramModel& model, const TransitionTable* table, const Text& text,
                            std::size_t top_k);

// The HTTP handlers, callable without a socket. The model is immutable; only
// the session map is guarded by a lock.
class RestorationService {
 public:
  // Requires a smoothed model.
  explicit RestorationService(NgramModel model);

  const NgramModel& model() const noexcept { return model_; }

  ApiResponse restore(const std::string& body) const;
  ApiResponse marginals(const std::string& body) const;
  ApiResponse row(const std::map<std::string, std::string>& params) const;
  ApiResponse score(const std::string& body) const;
  ApiResponse generate(const std::map<std::string, std::string>& params) const;
  ApiResponse meta() const;

  ApiResponse create_session(const std::string& body);
  ApiResponse commit(const std::string& session, const std::string& body);
  ApiResponse undo(const std::string& session);
  ApiResponse get_session(const std::string& session) const;
  ApiResponse delete_session(const std::string& session);

  struct RouteOptions {
    std::string cors_origin = "*";
    std::optional<std::string> static_dir;
  };
  void install_routes(httplib::Server& server, const RouteOptions& options);

 private:
  struct Session {
    Text text;
    std::vector<std::pair<std::size_t, Sign>> history;  // commitments in order
  };

  nlohmann::json marginals_json(const Text& text, const Commitments& committed,
                                std::optional<std::size_t> top_k, std::optional<double> coverage) const;
  nlohmann::json session_json(const std::string& id, const Session& session) const;

  NgramModel model_;
  std::unique_ptr<TransitionTable> table_;
  std::unique_ptr<BigramMatrix> rows_;

  mutable std::mutex sessions_mu_;
  std::map<std::string, Session> sessions_;
  std::uint64_t next_session_ = 1;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  std::optional<std::string> static_dir;
};

// Blocks until the server stops. Returns false if the port could not be bound.
bool serve(RestorationService& service, const ServeOptions& options);

}  // namespace signgram
