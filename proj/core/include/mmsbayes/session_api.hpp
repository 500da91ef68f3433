#pragma once

#include <map>
#include <string>

#include "mmsbayes/session.hpp"

namespace mmsbayes {

struct ApiRequest {
  std::string method;  // "GET", "POST", "PUT"
  std::string path;    // without the query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Transport-independent router for the session HTTP API:
//
//   POST /sessions
//   GET  /sessions
//   GET  /sessions/{id}
//   PUT  /sessions/{id}/prior            {"alpha": a, "beta": b}
//   POST /sessions/{id}/prior/lock
//   POST /sessions/{id}/bags             see json_io::bag_from_json
//   GET  /sessions/{id}/posterior?scope=class&level=0.95&grid=512
//   POST /sessions/{id}/reveal
//   GET  /sessions/{id}/export.csv
//   GET  /preview?alpha=a&beta=b&grid=512
//   GET  /healthz
//
// Errors come back as {"code", "rule", "message"} with status 400 (bad
// request), 404 (not found), 405 (method not allowed) or 409 (conflict).
class SessionApi {
 public:
  explicit SessionApi(SessionStore& store) : store_(store) {}

  ApiResponse handle(const ApiRequest& request) const;

 private:
  SessionStore& store_;
};

}  // namespace mmsbayes
