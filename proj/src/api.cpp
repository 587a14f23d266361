#include "scalelab/api.hpp"

#include <fstream>
#include <sstream>

#include "scalelab/compare.hpp"
#include "scalelab/ingest.hpp"
#include "scalelab/report.hpp"
#include "text_util.hpp"

namespace scalelab {

using json = nlohmann::json;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::Unauthorized: return 401;
        case ErrorCode::Forbidden: return 403;
        case ErrorCode::IntegrityError:
        case ErrorCode::DuplicateError:
        case ErrorCode::MergeConflict:
        case ErrorCode::ConflictError: return 409;
        case ErrorCode::EmptyComparison:
        case ErrorCode::EmptySelection:
        case ErrorCode::MissingBaseline: return 422;
        case ErrorCode::PayloadTooLarge: return 413;
        case ErrorCode::MethodNotAllowed: return 405;
        case ErrorCode::RecordCorrupt:
        case ErrorCode::IoError: return 500;
        case ErrorCode::EmptyInput:
        case ErrorCode::InvalidTiming:
        case ErrorCode::InvalidThreadCount:
        case ErrorCode::UndefinedMetric:
        case ErrorCode::ProtocolOrder:
        case ErrorCode::ValidationError:
        case ErrorCode::ManifestError:
        case ErrorCode::RowError:
        case ErrorCode::DuplicateRow:
        case ErrorCode::ProbeFormat:
        case ErrorCode::ScaleError: return 400;
    }
    return 500;
}

json error_body(const Error& e) {
    return {{"code", to_string(e.code())}, {"message", e.what()}, {"detail", e.detail()}};
}

TokenTable TokenTable::parse(std::string_view text) {
    TokenTable t;
    int line_no = 0;
    for (std::string_view raw : text::lines(text)) {
        ++line_no;
        std::string_view line = raw.substr(0, raw.find('#'));
        line = text::trim(line);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        for (std::string_view f : text::split(line, ' ')) {
            if (!text::trim(f).empty()) fields.push_back(text::trim(f));
        }
        const std::string where = "token file line " + std::to_string(line_no);
        if (fields.size() != 3) throw Error(ErrorCode::ValidationError, where + ": expected <token> <role> <contributor>");
        const Role role = parse_role(fields[1]);
        if (role == Role::Anonymous) throw Error(ErrorCode::ValidationError, where + ": tokens cannot be anonymous");
        if (t.find(fields[0])) throw Error(ErrorCode::ValidationError, where + ": duplicate token");
        t.add(std::string(fields[0]), {role, std::string(fields[2])});
    }
    return t;
}

TokenTable TokenTable::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read token file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void TokenTable::add(std::string token, TokenGrant grant) { tokens_[std::move(token)] = std::move(grant); }

std::optional<TokenGrant> TokenTable::find(std::string_view token) const {
    auto it = tokens_.find(token);
    if (it == tokens_.end()) return std::nullopt;
    return it->second;
}

DataScope data_scope_from_json(const json& j) {
    if (j.is_null()) return {};
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "scope must be an object");
    DataScope s;
    for (const auto& [key, value] : j.items()) {
        if (key == "contributor" && value.is_string()) {
            s.contributor = value.get<std::string>();
        } else if (key == "contributor" && value.is_null()) {
        } else if (key == "include_public" && value.is_boolean()) {
            s.include_public = value.get<bool>();
        } else {
            throw Error(ErrorCode::ValidationError, "bad scope field '" + key + "'");
        }
    }
    return s;
}

json to_json_value(const DataScope& s) {
    return {{"contributor", s.contributor ? json(*s.contributor) : json(nullptr)}, {"include_public", s.include_public}};
}

DataScope default_report_scope(const AccessContext& viewer) {
    if (viewer.role != Role::Contributor) return {};
    return {viewer.contributor, false};
}

Service::Service(Store& store, TokenTable tokens, ServiceOptions options)
    : store_(store), tokens_(std::move(tokens)), options_(std::move(options)) {
    if (!options_.clock) options_.clock = utc_timestamp_now;
}

AccessContext Service::authenticate(const ApiRequest& request) const {
    auto it = request.headers.find("authorization");
    if (it == request.headers.end()) return AccessContext::anonymous();
    const std::string_view value = text::trim(it->second);
    constexpr std::string_view kBearer = "Bearer ";
    if (value.substr(0, kBearer.size()) != kBearer) {
        throw Error(ErrorCode::Unauthorized, "Authorization must use the Bearer scheme");
    }
    const std::string_view token = text::trim(value.substr(kBearer.size()));
    const auto grant = tokens_.find(token);
    if (!grant) throw Error(ErrorCode::Unauthorized, "unknown token");
    return {grant->role, std::string(token), grant->contributor};
}

namespace {

json parse_body(const std::string& body) {
    if (text::trim(body).empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationError, std::string("request body is not JSON: ") + e.what());
    }
}

json parse_param(const ApiRequest& r, const std::string& name) {
    auto it = r.query.find(name);
    if (it == r.query.end()) return nullptr;
    try {
        return json::parse(it->second);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationError, "query parameter '" + name + "' is not JSON");
    }
}

void only_keys(const json& j, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "request body must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::ValidationError, "unknown request field '" + key + "'");
        }
    }
}

FilterSelection selection_of(const json& j) {
    if (j.is_null()) throw Error(ErrorCode::ValidationError, "a selection is required");
    return j.get<FilterSelection>();
}

std::optional<EntityId> id_param(const ApiRequest& r, const std::string& name) {
    auto it = r.query.find(name);
    if (it == r.query.end()) return std::nullopt;
    const auto v = text::parse_number<std::uint64_t>(text::trim(it->second));
    if (!v) throw Error(ErrorCode::ValidationError, "query parameter '" + name + "' must be an entity id");
    return EntityId{*v};
}

ApiResponse json_response(const json& j) { return {200, "application/json", j.dump()}; }

std::string_view content_type_for(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    return "application/octet-stream";
}

std::string_view image_content_type(ImageFormat f) {
    return f == ImageFormat::Pdf ? "application/pdf" : "image/svg+xml";
}

}  // namespace

ApiResponse Service::handle(const ApiRequest& request) const {
    try {
        if (request.body.size() > options_.max_body_bytes) {
            throw Error(ErrorCode::PayloadTooLarge, "request body exceeds the size limit",
                        {{"max_bytes", options_.max_body_bytes}});
        }
        return dispatch(request);
    } catch (const Error& e) {
        return {http_status(e.code()), "application/json", error_body(e).dump()};
    } catch (const json::exception& e) {
        const Error err(ErrorCode::ValidationError, std::string("malformed request: ") + e.what());
        return {400, "application/json", error_body(err).dump()};
    }
}

ApiResponse Service::dispatch(const ApiRequest& r) const {
    const AccessContext viewer = authenticate(r);
    const std::string& path = r.path;
    auto route = [&](std::string_view method, std::string_view p) {
        if (path != p) return false;
        if (r.method != method) {
            throw Error(ErrorCode::MethodNotAllowed, std::string(p) + " expects " + std::string(method));
        }
        return true;
    };

    if (route("GET", "/healthz")) return json_response({{"status", "ok"}});

    if (route("GET", "/categories")) return json_response(store_.list<Category>());
    if (route("GET", "/machines")) return json_response(store_.list<Machine>());
    if (route("GET", "/environments")) return json_response(store_.list<Environment>());
    if (route("GET", "/problems")) {
        const auto category = id_param(r, "category");
        return store_.read([&](const StoreView& v) {
            if (!category) return json_response(v.list<Problem>());
            v.get<Category>(*category);
            return json_response(v.problems_of(*category));
        });
    }
    if (route("GET", "/approaches")) {
        const auto problem = id_param(r, "problem");
        return store_.read([&](const StoreView& v) {
            if (!problem) return json_response(v.list<Approach>());
            v.get<Problem>(*problem);
            return json_response(v.approaches_of(*problem));
        });
    }

    if (route("POST", "/options")) {
        return json_response(store_.list_options(parse_body(r.body).get<FilterSelection>(), viewer));
    }

    if (route("POST", "/compare")) {
        const json body = parse_body(r.body);
        only_keys(body, {"selection", "scope"});
        const ComparisonDataset d = resolve_comparison(store_, selection_of(body.value("selection", json())), viewer,
                                                       data_scope_from_json(body.value("scope", json())));
        auto format = r.query.find("format");
        if (format != r.query.end() && format->second == "rows") {
            return {200, "text/csv", export_series(d, ExportFormat::Rows)};
        }
        if (format != r.query.end() && format->second != "document") {
            throw Error(ErrorCode::ValidationError, "format must be 'rows' or 'document'");
        }
        return {200, "application/json", export_series(d, ExportFormat::Document)};
    }

    if (route("GET", "/plot-config")) {
        auto metric = r.query.find("metric");
        const MetricKind kind = metric == r.query.end() ? MetricKind::Time : parse_metric_kind(metric->second);
        return json_response(to_json_value(default_plot_config(kind)));
    }

    if (route("GET", "/plots")) {
        auto metric = r.query.find("metric");
        if (metric == r.query.end()) throw Error(ErrorCode::ValidationError, "query parameter 'metric' is required");
        const MetricKind kind = parse_metric_kind(metric->second);
        const json config = parse_param(r, "config");
        const PlotConfig pc = config.is_null() ? default_plot_config(kind) : plot_config_from_json(config, kind);
        if (pc.metric_kind != kind) throw Error(ErrorCode::ValidationError, "config.metric_kind differs from metric");
        const ComparisonDataset d =
            resolve_comparison(store_, selection_of(parse_param(r, "selection")), viewer,
                               data_scope_from_json(parse_param(r, "scope")));
        return {200, std::string(image_content_type(pc.format)), render_plot(d.of(kind), pc)};
    }

    if (route("POST", "/uploads")) {
        if (!viewer.can_write()) throw Error(ErrorCode::Unauthorized, "uploads need a contributor token");
        const ResultUpload upload = parse_results_file(r.body);
        const std::string& who = upload.manifest.contributor;
        if (who != viewer.contributor && viewer.role != Role::Admin) {
            throw Error(ErrorCode::Forbidden, "token of '" + viewer.contributor + "' cannot upload for '" + who + "'");
        }
        const CommitResult result = commit_upload(upload, store_, options_.clock());
        return json_response(to_json_value(result));
    }

    if (route("GET", "/report-template")) return json_response(to_json_value(default_template()));

    if (route("POST", "/reports/validate")) {
        const json body = parse_body(r.body);
        only_keys(body, {"answers", "template"});
        const ReportTemplate t =
            body.contains("template") ? parse_template(body["template"].dump()) : default_template();
        return json_response(
            to_json_value(validate_answers(answers_from_json(body.value("answers", json::object())), t)));
    }

    if (route("POST", "/reports")) {
        const json body = parse_body(r.body);
        only_keys(body, {"selection", "answers", "template", "scope", "plot_configs"});
        const ReportTemplate t =
            body.contains("template") ? parse_template(body["template"].dump()) : default_template();
        const AnswerSet answers = answers_from_json(body.value("answers", json::object()));
        const DataScope scope =
            body.contains("scope") ? data_scope_from_json(body["scope"]) : default_report_scope(viewer);
        ReportOptions options;
        if (body.contains("plot_configs")) {
            for (const auto& [name, config] : body["plot_configs"].items()) {
                const MetricKind kind = parse_metric_kind(name);
                options.plot_configs[kind] = plot_config_from_json(config, kind);
            }
        }
        const ComparisonDataset d = resolve_comparison(store_, selection_of(body.value("selection", json())), viewer, scope);
        return {200, "application/x-tar", archive_bundle(generate_report(d, answers, t, options))};
    }

    if (r.method == "GET") {
        if (auto file = serve_static(r)) return *file;
    }
    throw Error(ErrorCode::NotFound, "no route for " + r.method + " " + path);
}

std::optional<ApiResponse> Service::serve_static(const ApiRequest& r) const {
    if (!options_.static_dir) return std::nullopt;
    std::filesystem::path rel = r.path == "/" ? "index.html" : r.path.substr(1);
    for (const auto& part : rel) {
        if (part == ".." || part == ".") return std::nullopt;
    }
    const std::filesystem::path file = *options_.static_dir / rel;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(file, ec)) return std::nullopt;
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return ApiResponse{200, std::string(content_type_for(file)), buf.str()};
}

}  // namespace scalelab
