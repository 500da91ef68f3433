#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "mmsbayes/session_api.hpp"

namespace mmsbayes {

struct HttpServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;  // served at / when non-empty
};

// Serves SessionApi over HTTP. bind() then run() (blocking) or start()
// (background thread); stop() is safe from any thread.
class HttpServer {
 public:
  HttpServer(SessionStore& store, HttpServerOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port. Throws std::runtime_error when binding fails.
  int bind();
  void run();
  void start();
  void stop();
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mmsbayes
