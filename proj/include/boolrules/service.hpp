#pragma once

// Local HTTP API over one workflow session. The request handlers are plain
// methods returning (status, body) so they can be exercised without a socket;
// mount() wires them onto a cpp-httplib server.

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "boolrules/documents.hpp"
#include "boolrules/workflow.hpp"

namespace httplib {
class Server;
}

namespace boolrules::service {

using json = nlohmann::json;

inline constexpr const char *kStateSchema = "boolrules.state/1";
inline constexpr const char *kCandidatesSchema = "boolrules.candidates/1";
inline constexpr const char *kPatternSchema = "boolrules.pattern/1";
inline constexpr const char *kErrorSchema = "boolrules.error/1";

struct Response {
  int status = 200;
  json body;
};

struct SessionConfig {
  PatternTable patterns;
  MonomialOrder order;
  std::optional<RecordTable> records; // enables raw values in pattern drill-down
  std::optional<Thresholds> thresholds;
};

class Api {
public:
  Api() = default;
  explicit Api(SessionConfig config) { load(std::move(config)); }

  /// Replaces any current session; the sequence number restarts at 0.
  void load(SessionConfig config);
  bool has_session() const;

  Response state() const;
  Response candidates(std::string_view kind) const;
  /// body: {"kind": "insight"|"exception", "ids": [...], "sequence": n}
  Response decide(const json &body);
  Response report() const;
  Response trace() const;
  Response pattern(const std::string &key) const;

  /// Registers every endpoint on `server`. With `ui_dir` set, static files
  /// are served from it at "/".
  void mount(httplib::Server &server, const std::optional<std::string> &ui_dir = std::nullopt);

private:
  struct Session {
    std::string id;
    SessionConfig config;
    std::shared_ptr<const SessionState> current;
    std::uint64_t sequence = 0;
  };

  std::shared_ptr<const Session> snapshot() const;
  json summary(const Session &s) const;

  mutable std::shared_mutex mutex_; // guards session_ pointer swaps
  std::mutex writer_;               // serializes mutations
  std::shared_ptr<const Session> session_;
  std::atomic<std::uint64_t> loads_{0};
};

/// Decision-source label used for reports of interactive and replayed runs,
/// so both paths render identical documents.
inline constexpr const char *kRecordedDecisions = "recorded decisions";

} // namespace boolrules::service
