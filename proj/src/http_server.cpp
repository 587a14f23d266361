#include "scalelab/http_server.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>

namespace scalelab {

struct HttpServer::Impl {
    const Service& service;
    httplib::Server server;

    explicit Impl(const Service& s) : service(s) {}
};

namespace {

ApiRequest to_api_request(const httplib::Request& req) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [key, value] : req.params) r.query.emplace(key, value);  // first value wins
    for (const auto& [key, value] : req.headers) {
        std::string name = key;
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        r.headers.emplace(std::move(name), value);
    }
    r.body = req.body;
    return r;
}

}  // namespace

HttpServer::HttpServer(const Service& service, std::size_t max_body_bytes) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse out = impl_->service.handle(to_api_request(req));
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    impl_->server.set_payload_max_length(max_body_bytes);
    impl_->server.Get(".*", handler);
    impl_->server.Post(".*", handler);
    impl_->server.Put(".*", handler);
    impl_->server.Delete(".*", handler);
    impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace scalelab
