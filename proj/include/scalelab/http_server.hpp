#pragma once

#include <memory>
#include <string>

#include "scalelab/api.hpp"

namespace scalelab {

/// HTTP/1.1 front end for a Service. Requests run on a worker pool.
class HttpServer {
public:
    explicit HttpServer(const Service& service, std::size_t max_body_bytes = 16 << 20);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void run();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace scalelab
