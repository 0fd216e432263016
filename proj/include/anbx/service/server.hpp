#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "anbx/service/workbench.hpp"

namespace httplib {
class Server;
}

namespace anbx::service {

/// Local HTTP front end for a Workbench. Bodies are JSON; /api/events is a
/// text/event-stream of scheduler events in sequence order.
class HttpServer {
 public:
  explicit HttpServer(Workbench& workbench);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port. Errors: E-BIND.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Binds and serves on the calling thread until stop(). Errors: E-BIND.
  void run(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  void routes();

  Workbench& workbench_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
  int port_ = 0;
};

}  // namespace anbx::service
