// Copyright 2026 The Readlevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>

#include "httplib.h"
#include "readlevel/service.h"

namespace readlevel {

struct HttpServer::Impl {
  AnnotationService &service;
  httplib::Server server;

  explicit Impl(AnnotationService &s) : service(s) {}

  void Forward(const httplib::Request &req, httplib::Response &res) {
    ApiResponse out = service.Handle(req.method, req.path, req.params,
                                     req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  }
};

HttpServer::HttpServer(AnnotationService &service, std::string static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request &req, httplib::Response &res) {
    impl_->Forward(req, res);
  };
  impl_->server.Get(R"(/api/v1/.*)", forward);
  impl_->server.Post(R"(/api/v1/.*)", forward);
  impl_->server.Put(R"(/api/v1/.*)", forward);
  impl_->server.Delete(R"(/api/v1/.*)", forward);
  if (!static_dir.empty() && std::filesystem::is_directory(static_dir)) {
    impl_->server.set_mount_point("/", static_dir);
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::BindToAnyPort(const std::string &host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::Bind(const std::string &host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace readlevel
