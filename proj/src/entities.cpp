#include "scalelab/entities.hpp"

#include <cctype>

#include "scalelab/error.hpp"

namespace scalelab {

using nlohmann::json;

std::string to_string(EntityId id) {
    return std::to_string(id.value);
}

std::string_view to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::Category: return "category";
        case EntityKind::Problem: return "problem";
        case EntityKind::Approach: return "approach";
        case EntityKind::Machine: return "machine";
        case EntityKind::Environment: return "environment";
        case EntityKind::Configuration: return "configuration";
    }
    return "category";
}

std::string_view to_string(MemoryModel m) {
    return m == MemoryModel::Shared ? "SHARED" : "DISTRIBUTED";
}

std::string_view to_string(Visibility v) {
    switch (v) {
        case Visibility::Public: return "PUBLIC";
        case Visibility::Course: return "COURSE";
        case Visibility::Student: return "STUDENT";
        case Visibility::Private: return "PRIVATE";
    }
    return "PUBLIC";
}

namespace {

std::string upper(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& value) {
    if (value) j[key] = *value;
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& value) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        value.reset();
    } else {
        value = it->get<T>();
    }
}

}  // namespace

MemoryModel parse_memory_model(std::string_view text) {
    const std::string u = upper(text);
    if (u == "SHARED") return MemoryModel::Shared;
    if (u == "DISTRIBUTED") return MemoryModel::Distributed;
    throw Error(ErrorCode::ValidationError, "unknown memory model '" + std::string(text) + "'");
}

Visibility parse_visibility(std::string_view text) {
    const std::string u = upper(text);
    if (u == "PUBLIC") return Visibility::Public;
    if (u == "COURSE") return Visibility::Course;
    if (u == "STUDENT") return Visibility::Student;
    if (u == "PRIVATE") return Visibility::Private;
    throw Error(ErrorCode::ValidationError, "unknown visibility '" + std::string(text) + "'");
}

std::string display_name(const Category& e) { return e.name; }
std::string display_name(const Problem& e) { return e.name; }
std::string display_name(const Approach& e) { return e.title; }
std::string display_name(const Machine& e) { return e.label; }
std::string display_name(const Environment& e) {
    return e.os_name_version + " / " + e.compiler_name_version + " / " + e.parallel_framework_version;
}

void to_json(json& j, const EntityId& id) { j = id.value; }
void from_json(const json& j, EntityId& id) { id.value = j.get<std::uint64_t>(); }

void to_json(json& j, const Category& e) { j = json{{"id", e.id}, {"name", e.name}}; }
void from_json(const json& j, Category& e) {
    j.at("id").get_to(e.id);
    j.at("name").get_to(e.name);
}

void to_json(json& j, const Problem& e) {
    j = json{{"id", e.id}, {"category_id", e.category_id}, {"name", e.name}};
}
void from_json(const json& j, Problem& e) {
    j.at("id").get_to(e.id);
    j.at("category_id").get_to(e.category_id);
    j.at("name").get_to(e.name);
}

void to_json(json& j, const Approach& e) {
    j = json{{"id", e.id}, {"problem_id", e.problem_id}, {"title", e.title}, {"description", e.description}};
    put_optional(j, "serial_source_ref", e.serial_source_ref);
    put_optional(j, "parallel_source_ref", e.parallel_source_ref);
}
void from_json(const json& j, Approach& e) {
    j.at("id").get_to(e.id);
    j.at("problem_id").get_to(e.problem_id);
    j.at("title").get_to(e.title);
    j.at("description").get_to(e.description);
    get_optional(j, "serial_source_ref", e.serial_source_ref);
    get_optional(j, "parallel_source_ref", e.parallel_source_ref);
}

void to_json(json& j, const Machine& e) {
    j = json{{"id", e.id},
             {"label", e.label},
             {"cpu_model", e.cpu_model},
             {"base_clock_ghz", e.base_clock_ghz},
             {"physical_cores", e.physical_cores},
             {"raw_probe_blobs", e.raw_probe_blobs}};
    put_optional(j, "logical_cpus", e.logical_cpus);
    put_optional(j, "l1_kb", e.l1_kb);
    put_optional(j, "l2_kb", e.l2_kb);
    put_optional(j, "l3_kb", e.l3_kb);
    put_optional(j, "max_memory_bandwidth_gbps", e.max_memory_bandwidth_gbps);
    put_optional(j, "vendor_spec_url", e.vendor_spec_url);
}
void from_json(const json& j, Machine& e) {
    j.at("id").get_to(e.id);
    j.at("label").get_to(e.label);
    j.at("cpu_model").get_to(e.cpu_model);
    j.at("base_clock_ghz").get_to(e.base_clock_ghz);
    j.at("physical_cores").get_to(e.physical_cores);
    e.raw_probe_blobs = j.value("raw_probe_blobs", std::map<std::string, std::string>{});
    get_optional(j, "logical_cpus", e.logical_cpus);
    get_optional(j, "l1_kb", e.l1_kb);
    get_optional(j, "l2_kb", e.l2_kb);
    get_optional(j, "l3_kb", e.l3_kb);
    get_optional(j, "max_memory_bandwidth_gbps", e.max_memory_bandwidth_gbps);
    get_optional(j, "vendor_spec_url", e.vendor_spec_url);
}

void to_json(json& j, const Environment& e) {
    j = json{{"id", e.id},
             {"os_name_version", e.os_name_version},
             {"compiler_name_version", e.compiler_name_version},
             {"parallel_framework_version", e.parallel_framework_version}};
}
void from_json(const json& j, Environment& e) {
    j.at("id").get_to(e.id);
    j.at("os_name_version").get_to(e.os_name_version);
    j.at("compiler_name_version").get_to(e.compiler_name_version);
    j.at("parallel_framework_version").get_to(e.parallel_framework_version);
}

void to_json(json& j, const Configuration& e) {
    j = json{{"id", e.id},
             {"problem_id", e.problem_id},
             {"approach_id", e.approach_id},
             {"machine_id", e.machine_id},
             {"environment_id", e.environment_id},
             {"memory_model", to_string(e.memory_model)},
             {"problem_size", e.problem_size},
             {"thread_count", e.thread_count},
             {"visibility", to_string(e.visibility)},
             {"contributor", e.contributor}};
}
void from_json(const json& j, Configuration& e) {
    j.at("id").get_to(e.id);
    j.at("problem_id").get_to(e.problem_id);
    j.at("approach_id").get_to(e.approach_id);
    j.at("machine_id").get_to(e.machine_id);
    j.at("environment_id").get_to(e.environment_id);
    e.memory_model = parse_memory_model(j.at("memory_model").get<std::string>());
    j.at("problem_size").get_to(e.problem_size);
    j.at("thread_count").get_to(e.thread_count);
    e.visibility = parse_visibility(j.at("visibility").get<std::string>());
    j.at("contributor").get_to(e.contributor);
}

void to_json(json& j, const RunSet& r) {
    json samples = json::array();
    for (const TimingSample& s : r.samples) {
        samples.push_back(json{{"run_index", s.run_index}, {"elapsed_seconds", s.elapsed_seconds}});
    }
    j = json{{"timing_kind", to_string(r.timing_kind)}, {"samples", std::move(samples)}};
}
void from_json(const json& j, RunSet& r) {
    r.timing_kind = parse_timing_kind(j.at("timing_kind").get<std::string>());
    r.samples.clear();
    for (const json& s : j.at("samples")) {
        r.samples.push_back({s.at("elapsed_seconds").get<double>(), r.timing_kind, s.at("run_index").get<int>()});
    }
}

void to_json(json& j, const ResultRecord& r) {
    j = json{{"configuration_id", r.configuration_id}, {"recorded_at", r.recorded_at}};
    put_optional(j, "run_set_alg", r.run_set_alg);
    put_optional(j, "run_set_e2e", r.run_set_e2e);
}
void from_json(const json& j, ResultRecord& r) {
    j.at("configuration_id").get_to(r.configuration_id);
    j.at("recorded_at").get_to(r.recorded_at);
    get_optional(j, "run_set_alg", r.run_set_alg);
    get_optional(j, "run_set_e2e", r.run_set_e2e);
}

void to_json(json& j, const TimingSummary& s) {
    j = json{{"mean", s.mean},     {"median", s.median}, {"min", s.min},
             {"max", s.max},       {"stddev", s.stddev}, {"count", s.count}};
}
void from_json(const json& j, TimingSummary& s) {
    j.at("mean").get_to(s.mean);
    j.at("median").get_to(s.median);
    j.at("min").get_to(s.min);
    j.at("max").get_to(s.max);
    j.at("stddev").get_to(s.stddev);
    j.at("count").get_to(s.count);
}

}  // namespace scalelab
