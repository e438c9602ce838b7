#pragma once

// Session-oriented request handling behind the HTTP interface. Routing is
// transport independent: handle() takes method, path, query and body and
// returns a status with a json body, so the same code serves HTTP and tests.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "homvcp/engine.hpp"
#include "homvcp/errors.hpp"

namespace homvcp {

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

/// HTTP status for a library error kind.
int http_status(ErrorKind kind);

/// Summary of one approximation run as returned by the service.
nlohmann::json solution_summary(const ApproxSolution& solution, const VcpProblem& problem, int run);

struct Session;

class Service {
 public:
  /// `base` supplies every engine setting except delta, RoI and seed.
  explicit Service(EngineConfig base = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ServiceResponse handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body);

  /// Blocks until no session has an active run.
  void wait_idle();

 private:
  ServiceResponse create_session(const nlohmann::json& doc);
  ServiceResponse curve(const std::map<std::string, std::string>& query) const;
  ServiceResponse approximate(const std::shared_ptr<Session>& s, const nlohmann::json& doc);
  ServiceResponse status(const std::shared_ptr<Session>& s) const;
  ServiceResponse result(const std::shared_ptr<Session>& s, const std::string& k) const;
  ServiceResponse refine(const std::shared_ptr<Session>& s, const nlohmann::json& doc) const;
  ServiceResponse history(const std::shared_ptr<Session>& s) const;
  std::shared_ptr<Session> find(const std::string& id) const;

  EngineConfig base_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// Serves `service` over HTTP until the process is stopped.
void serve_http(Service& service, const std::string& host, int port);

}  // namespace homvcp
