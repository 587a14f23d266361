#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalelab/error.hpp"
#include "scalelab/selection.hpp"
#include "scalelab/store.hpp"

namespace scalelab {

struct ApiRequest {
    std::string method;  // GET, POST, ...
    std::string path;    // without the query string
    std::map<std::string, std::string> query;    // decoded
    std::map<std::string, std::string> headers;  // names in lower case
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;

    nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// One status per library error code.
int http_status(ErrorCode code);
nlohmann::json error_body(const Error& e);

struct TokenGrant {
    Role role = Role::Contributor;
    std::string contributor;
};

/// Bearer tokens, one per line: `<token> <ROLE> <contributor>`; '#' starts a comment.
class TokenTable {
public:
    TokenTable() = default;
    static TokenTable parse(std::string_view text);
    static TokenTable load(const std::filesystem::path& file);

    void add(std::string token, TokenGrant grant);
    std::optional<TokenGrant> find(std::string_view token) const;
    std::size_t size() const { return tokens_.size(); }

private:
    std::map<std::string, TokenGrant, std::less<>> tokens_;
};

struct ServiceOptions {
    std::size_t max_body_bytes = 16 << 20;
    /// Built web UI; served for GET requests that match no API route.
    std::optional<std::filesystem::path> static_dir;
    /// recorded_at for uploads whose manifest has none.
    std::function<std::string()> clock;
};

/// Routes requests to the library. Stateless apart from the store, so handle() may run
/// concurrently; writes go through the store's single-writer lock.
class Service {
public:
    Service(Store& store, TokenTable tokens, ServiceOptions options = {});

    ApiResponse handle(const ApiRequest& request) const;

    /// Anonymous without an Authorization header; Unauthorized for an unknown token.
    AccessContext authenticate(const ApiRequest& request) const;

private:
    ApiResponse dispatch(const ApiRequest& request) const;
    std::optional<ApiResponse> serve_static(const ApiRequest& request) const;

    Store& store_;
    TokenTable tokens_;
    ServiceOptions options_;
};

/// DataScope as sent by clients: {"contributor": "...", "include_public": true}.
DataScope data_scope_from_json(const nlohmann::json& j);
nlohmann::json to_json_value(const DataScope& s);

/// Scope a report uses when the request names none: a contributor's own uploads,
/// everything the viewer may see for anonymous viewers and admins.
DataScope default_report_scope(const AccessContext& viewer);

}  // namespace scalelab
