#include "anbx/service/server.hpp"

#include <chrono>

#include "httplib.h"

#include "anbx/error.hpp"
#include "anbx/service/json.hpp"

namespace anbx::service {

namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(250);
constexpr auto kKeepalive = std::chrono::seconds(15);

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(const std::string& code) {
  if (code == "E-NOTASK") return 404;
  if (code == "E-IO") return 404;
  if (code == "E-CONFIG" || code == "E-BADN" || code == "E-PLAN") return 400;
  return 500;
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
  send_json(res, Json{{"error", Json{{"code", code}, {"message", message}}}}, status_for(code));
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("E-CONFIG", std::string("request body is not valid JSON: ") + e.what());
  }
}

/// Wraps a handler so anbx errors become JSON error bodies.
httplib::Server::Handler guarded(std::function<void(const httplib::Request&, httplib::Response&)> fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, "E-INTERNAL", e.what());
    }
  };
}

Json help_json() {
  Json out = Json::array();
  for (const auto& l : help_links()) out.push_back(Json{{"label", l.label}, {"url", l.url}});
  return out;
}

std::string sse_frame(const scheduler::Event& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + scheduler::to_string(e.type) + "\ndata: " + to_json(e).dump() +
         "\n\n";
}

std::uint64_t parse_seq(const std::string& s) {
  if (s.empty()) return 0;
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw Error("E-CONFIG", "invalid event id '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error("E-CONFIG", "invalid event id '" + s + "'");
  }
}

std::string index_page() {
  std::string links;
  for (const auto& l : help_links()) links += "<li><a href=\"" + l.url + "\">" + l.label + "</a></li>\n";
  return "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>AnBx workbench</title></head>\n"
         "<body><h1>AnBx workbench</h1>\n"
         "<p>API: /api/protocols, /api/tasks, /api/results, /api/config, /api/events.</p>\n<ul>\n" +
         links + "</ul></body></html>\n";
}

}  // namespace

HttpServer::HttpServer(Workbench& workbench) : workbench_(workbench), http_(std::make_unique<httplib::Server>()) {
  // No SO_REUSEPORT: a second server on a taken port must fail to bind.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
  auto& http = *http_;
  auto& wb = workbench_;

  http.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(index_page(), "text/html"); });

  http.Get("/api/help", guarded([](const httplib::Request&, httplib::Response& res) { send_json(res, help_json()); }));

  http.Get("/api/protocols", guarded([&wb](const httplib::Request&, httplib::Response& res) {
             Json out = Json::array();
             for (const auto& p : wb.protocols()) out.push_back(to_json(p));
             send_json(res, out);
           }));

  http.Post("/api/check", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
              auto body = parse_body(req);
              auto path = body.value("path", std::string());
              if (path.empty()) throw Error("E-CONFIG", "field 'path' is required");
              auto diags = wb.check(path);
              send_json(res, Json{{"ok", !syntax::has_errors(diags)}, {"diagnostics", to_json(diags)}});
            }));

  http.Post("/api/compile", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
              auto report = wb.compile(compile_request_from_json(parse_body(req)));
              send_json(res, to_json(report), report.ok() ? 200 : 422);
            }));

  http.Post("/api/verify", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
              auto report = wb.verify(verify_request_from_json(parse_body(req)));
              send_json(res, to_json(report), report.ok() ? 200 : 422);
            }));

  http.Get("/api/tasks", guarded([&wb](const httplib::Request&, httplib::Response& res) {
             Json out = Json::array();
             for (const auto& row : wb.scheduler().snapshot()) out.push_back(to_json(row));
             send_json(res, out);
           }));

  http.Post(R"(/api/tasks/(\d+)/kill)", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
              auto id = parse_seq(req.matches[1]);
              wb.scheduler().kill({id});
              send_json(res, Json{{"killed", Json::array({id})}});
            }));

  http.Post("/api/tasks/kill", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
              auto body = parse_body(req);
              std::set<scheduler::TaskId> ids;
              if (body.contains("ids")) {
                for (const auto& v : body.at("ids")) {
                  if (!v.is_number_unsigned()) throw Error("E-CONFIG", "ids must be task numbers");
                  ids.insert(v.get<scheduler::TaskId>());
                }
                wb.scheduler().kill(ids);
              } else {
                wb.scheduler().kill_all();
              }
              send_json(res, Json{{"killed", ids}});
            }));

  http.Get("/api/results", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
             bool alphabetical = req.get_param_value("alphabetical") == "1" || req.get_param_value("alphabetical") == "true";
             send_json(res, to_json(wb.results().snapshot().ordered_view(alphabetical)));
           }));

  http.Delete("/api/results", guarded([&wb](const httplib::Request&, httplib::Response& res) {
                wb.results().clear();
                send_json(res, Json::array());
              }));

  http.Get(R"(/api/consoles/(\d+))", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
             int id = static_cast<int>(parse_seq(req.matches[1]));
             Json chunks = Json::array();
             for (const auto& c : wb.scheduler().console(id)) chunks.push_back(to_json(c));
             send_json(res, Json{{"consoleId", id}, {"chunks", chunks}});
           }));

  http.Get("/api/consoles", guarded([&wb](const httplib::Request&, httplib::Response& res) {
             send_json(res, Json(wb.scheduler().consoles()));
           }));

  http.Get("/api/config", guarded([&wb](const httplib::Request&, httplib::Response& res) {
             auto cfg = wb.config();
             Json issues = Json::array();
             for (const auto& i : validate_config(cfg)) issues.push_back(to_json(i));
             send_json(res, Json{{"config", to_json(cfg)}, {"issues", issues}, {"help", help_json()}});
           }));

  http.Put("/api/config", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
             auto cfg = config_from_json(parse_body(req), wb.config());
             auto found = wb.set_config(cfg);
             Json issues = Json::array();
             for (const auto& i : found) issues.push_back(to_json(i));
             send_json(res, Json{{"config", to_json(wb.config())}, {"issues", issues}, {"help", help_json()}},
                       found.empty() ? 200 : 422);
           }));

  http.Get("/api/events", guarded([this, &wb](const httplib::Request& req, httplib::Response& res) {
             std::uint64_t after = 0;
             if (req.has_header("Last-Event-ID")) after = parse_seq(req.get_header_value("Last-Event-ID"));
             if (req.has_param("since")) after = parse_seq(req.get_param_value("since"));
             bool follow = req.get_param_value("follow") != "0";
             auto cursor = std::make_shared<std::uint64_t>(after);
             auto* hub = &wb.scheduler().events();
             auto* stopping = &stopping_;
             res.set_header("Cache-Control", "no-cache");
             res.set_chunked_content_provider(
                 "text/event-stream", [hub, cursor, follow, stopping](std::size_t, httplib::DataSink& sink) {
                   auto last_write = std::chrono::steady_clock::now();
                   while (!*stopping && sink.is_writable()) {
                     auto events = hub->since(*cursor, follow ? kPollInterval : std::chrono::milliseconds(0));
                     for (const auto& e : events) {
                       auto frame = sse_frame(e);
                       if (!sink.write(frame.data(), frame.size())) return false;
                       *cursor = e.seq;
                     }
                     auto now = std::chrono::steady_clock::now();
                     if (!events.empty()) {
                       last_write = now;
                       if (!follow) continue;
                     } else if (!follow || hub->closed()) {
                       break;
                     } else if (now - last_write >= kKeepalive) {
                       static const std::string ping = ": keepalive\n\n";
                       if (!sink.write(ping.data(), ping.size())) return false;
                       last_write = now;
                     }
                   }
                   sink.done();
                   return true;
                 });
           }));
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("E-BIND", "cannot bind " + host + ":" + std::to_string(port));
  port_ = bound;
  stopping_ = false;
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void HttpServer::run(const std::string& host, int port) {
  if (!http_->bind_to_port(host, port)) throw Error("E-BIND", "cannot bind " + host + ":" + std::to_string(port));
  port_ = port;
  stopping_ = false;
  http_->listen_after_bind();
}

void HttpServer::stop() {
  stopping_ = true;
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace anbx::service
