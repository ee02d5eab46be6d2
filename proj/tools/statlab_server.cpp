// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP front end for statlab::service::handle.
//
// Environment:
//   STATLAB_BIND             bind address (default 127.0.0.1)
//   STATLAB_PORT             port (default 8080)
//   STATLAB_MAX_BODY         request body cap in bytes
//   STATLAB_ALLOWED_ORIGINS  comma-separated CORS origins, or "*"
//
// Each request is logged to stdout as one JSON line.

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>

#include "statlab/service.hpp"

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::set<std::string> split_origins(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.insert(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

int main() {
  using statlab::service::Json;
  const std::string bind = env_or("STATLAB_BIND", "127.0.0.1");
  const int port = std::atoi(env_or("STATLAB_PORT", "8080").c_str());
  const auto origins = split_origins(env_or("STATLAB_ALLOWED_ORIGINS", ""));
  const auto limits = statlab::service::limits_from_env();

  httplib::Server server;
  // Let handle() produce the 413 document rather than httplib.
  server.set_payload_max_length(limits.max_body_bytes + 1);
  std::mutex log_mutex;

  auto allow_origin = [&](const httplib::Request& req, httplib::Response& res) {
    const auto origin = req.get_header_value("Origin");
    if (origin.empty()) return;
    if (origins.count("*") || origins.count(origin)) {
      res.set_header("Access-Control-Allow-Origin",
                     origins.count("*") ? "*" : origin);
      res.set_header("Vary", "Origin");
    }
  };

  auto dispatch = [&](const httplib::Request& req, httplib::Response& res) {
    const auto start = std::chrono::steady_clock::now();
    const auto out =
        statlab::service::handle(req.method, req.target, req.body, limits);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    allow_origin(req, res);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    Json line = {{"method", req.method},
                 {"path", req.path},
                 {"status", out.status},
                 {"bytes_in", req.body.size()},
                 {"bytes_out", out.body.size()},
                 {"ms", ms}};
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cout << line.dump() << std::endl;
  };

  const std::string any = R"(/.*)";
  server.Get(any, dispatch);
  server.Post(any, dispatch);
  server.Put(any, dispatch);
  server.Delete(any, dispatch);
  server.Patch(any, dispatch);
  server.Options(any, [&](const httplib::Request& req, httplib::Response& res) {
    allow_origin(req, res);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  std::cout << Json{{"event", "listening"}, {"bind", bind}, {"port", port}}.dump()
            << std::endl;
  if (!server.listen(bind, port)) {
    std::cerr << "statlab_server: cannot listen on " << bind << ":" << port
              << "\n";
    return 1;
  }
  return 0;
}
