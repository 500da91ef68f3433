#include "mmsbayes/http_server.hpp"

#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace mmsbayes {

struct HttpServer::Impl {
  SessionApi api;
  HttpServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Impl(SessionStore& store, HttpServerOptions opts)
      : api(store), options(std::move(opts)) {}
};

namespace {

void dispatch(const SessionApi& api, const httplib::Request& req,
              httplib::Response& res) {
  ApiRequest request;
  request.method = req.method;
  request.path = req.path;
  for (const auto& [key, value] : req.params) request.query.emplace(key, value);
  request.body = req.body;
  ApiResponse response = api.handle(request);
  res.status = response.status;
  res.set_content(response.body, response.content_type);
}

}  // namespace

HttpServer::HttpServer(SessionStore& store, HttpServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    dispatch(impl_->api, req, res);
  };
  const std::string any = R"((/sessions(/.*)?|/preview|/healthz))";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.Put(any, handler);
  impl_->server.Delete(any, handler);
  impl_->server.Patch(any, handler);
  if (!impl_->options.static_dir.empty()) {
    if (!impl_->server.set_mount_point("/", impl_->options.static_dir.string())) {
      throw std::runtime_error("static directory not found: " +
                               impl_->options.static_dir.string());
    }
  }
}

HttpServer::~HttpServer() {
  stop();
}

int HttpServer::bind() {
  const auto& o = impl_->options;
  impl_->port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                            : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (impl_->port < 0) {
    throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void HttpServer::run() {
  if (impl_->port < 0) bind();
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (impl_->port < 0) bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const noexcept {
  return impl_->port;
}

}  // namespace mmsbayes
