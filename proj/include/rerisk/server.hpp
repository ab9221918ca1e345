// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "rerisk/engine.hpp"

namespace rerisk {

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Value for Access-Control-Allow-Origin; empty disables CORS headers.
  std::string cors_origin;
};

// HTTP transport around Engine::handle. Requests run on a worker pool
// against the shared engine, which must outlive the server.
class Server {
 public:
  Server(const Engine& engine, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving on a background thread; throws Io when the
  // address cannot be bound.
  void start();
  int port() const noexcept;
  // Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rerisk
