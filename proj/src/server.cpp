// SPDX-License-Identifier: Apache-2.0
#include "rerisk/server.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

namespace rerisk {

struct Server::Impl {
  Impl(const Engine& e, ServerConfig c) : engine(e), config(std::move(c)) {}

  const Engine& engine;
  ServerConfig config;
  httplib::Server http;
  std::thread worker;
  int bound_port = 0;

  void add_cors(httplib::Response& res) const {
    if (config.cors_origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", config.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Vary", "Origin");
  }

  void forward(const httplib::Request& req, httplib::Response& res) const {
    const std::string query = req.target.find('?') == std::string::npos
                                  ? std::string()
                                  : req.target.substr(req.target.find('?') + 1);
    const HttpResponse out = engine.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
    add_cors(res);
  }
};

Server::Server(const Engine& engine, ServerConfig config)
    : impl_(std::make_unique<Impl>(engine, std::move(config))) {
  Impl* impl = impl_.get();
  // httplib's default also sets SO_REUSEPORT, which lets a second server
  // share the port silently; keep only SO_REUSEADDR.
  impl->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  const auto handler = [impl](const httplib::Request& req, httplib::Response& res) {
    impl->forward(req, res);
  };
  impl->http.Get(".*", handler);
  impl->http.Post(".*", handler);
  impl->http.Put(".*", handler);
  impl->http.Delete(".*", handler);
  impl->http.Options(".*", [impl](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    impl->add_cors(res);
  });
}

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->config.port < 0 || impl_->config.port > 65535) {
    throw Error(ErrorCode::InvalidArgument, "port must be in 0..65535", {}, "port");
  }
  if (impl_->config.port == 0) {
    impl_->bound_port = impl_->http.bind_to_any_port(impl_->config.bind_address);
  } else if (impl_->http.bind_to_port(impl_->config.bind_address, impl_->config.port)) {
    impl_->bound_port = impl_->config.port;
  } else {
    impl_->bound_port = -1;
  }
  if (impl_->bound_port <= 0) {
    throw Error(ErrorCode::Io, "cannot bind " + impl_->config.bind_address + ":" +
                                   std::to_string(impl_->config.port));
  }
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

int Server::port() const noexcept { return impl_->bound_port; }

void Server::wait() {
  while (impl_->http.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace rerisk
