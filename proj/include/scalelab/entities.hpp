#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scalelab/metrics.hpp"

namespace scalelab {

/// Archive-wide identifier. Zero means "not yet assigned".
struct EntityId {
    std::uint64_t value = 0;

    explicit operator bool() const noexcept { return value != 0; }
    friend auto operator<=>(const EntityId&, const EntityId&) = default;
};

std::string to_string(EntityId id);

enum class EntityKind { Category, Problem, Approach, Machine, Environment, Configuration };

std::string_view to_string(EntityKind kind);

enum class MemoryModel { Shared, Distributed };
enum class Visibility { Public, Course, Student, Private };

std::string_view to_string(MemoryModel m);
std::string_view to_string(Visibility v);
MemoryModel parse_memory_model(std::string_view text);
Visibility parse_visibility(std::string_view text);

struct Category {
    static constexpr EntityKind kind = EntityKind::Category;
    EntityId id;
    std::string name;

    friend bool operator==(const Category&, const Category&) = default;
};

struct Problem {
    static constexpr EntityKind kind = EntityKind::Problem;
    EntityId id;
    EntityId category_id;
    std::string name;

    friend bool operator==(const Problem&, const Problem&) = default;
};

struct Approach {
    static constexpr EntityKind kind = EntityKind::Approach;
    EntityId id;
    EntityId problem_id;
    std::string title;
    std::string description;
    std::optional<std::string> serial_source_ref;
    std::optional<std::string> parallel_source_ref;

    friend bool operator==(const Approach&, const Approach&) = default;
};

struct Machine {
    static constexpr EntityKind kind = EntityKind::Machine;
    EntityId id;
    std::string label;
    std::string cpu_model;
    double base_clock_ghz = 0.0;
    int physical_cores = 0;
    std::optional<int> logical_cpus;
    std::optional<std::int64_t> l1_kb;
    std::optional<std::int64_t> l2_kb;
    std::optional<std::int64_t> l3_kb;
    std::optional<double> max_memory_bandwidth_gbps;
    std::optional<std::string> vendor_spec_url;
    std::map<std::string, std::string> raw_probe_blobs;

    friend bool operator==(const Machine&, const Machine&) = default;
};

struct Environment {
    static constexpr EntityKind kind = EntityKind::Environment;
    EntityId id;
    std::string os_name_version;
    std::string compiler_name_version;
    std::string parallel_framework_version;

    friend bool operator==(const Environment&, const Environment&) = default;
};

struct Configuration {
    static constexpr EntityKind kind = EntityKind::Configuration;
    EntityId id;
    EntityId problem_id;
    EntityId approach_id;
    EntityId machine_id;
    EntityId environment_id;
    MemoryModel memory_model = MemoryModel::Shared;
    std::int64_t problem_size = 0;
    int thread_count = 1;
    Visibility visibility = Visibility::Public;
    std::string contributor;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ResultRecord {
    EntityId configuration_id;
    std::optional<RunSet> run_set_alg;
    std::optional<RunSet> run_set_e2e;
    std::string recorded_at;  // ISO-8601 UTC

    const std::optional<RunSet>& runs(TimingKind kind) const { return kind == TimingKind::Alg ? run_set_alg : run_set_e2e; }
    std::optional<RunSet>& runs(TimingKind kind) { return kind == TimingKind::Alg ? run_set_alg : run_set_e2e; }

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Human-readable name used for option lists and curve labels.
std::string display_name(const Category& e);
std::string display_name(const Problem& e);
std::string display_name(const Approach& e);
std::string display_name(const Machine& e);
std::string display_name(const Environment& e);

void to_json(nlohmann::json& j, const EntityId& id);
void from_json(const nlohmann::json& j, EntityId& id);
void to_json(nlohmann::json& j, const Category& e);
void from_json(const nlohmann::json& j, Category& e);
void to_json(nlohmann::json& j, const Problem& e);
void from_json(const nlohmann::json& j, Problem& e);
void to_json(nlohmann::json& j, const Approach& e);
void from_json(const nlohmann::json& j, Approach& e);
void to_json(nlohmann::json& j, const Machine& e);
void from_json(const nlohmann::json& j, Machine& e);
void to_json(nlohmann::json& j, const Environment& e);
void from_json(const nlohmann::json& j, Environment& e);
void to_json(nlohmann::json& j, const Configuration& e);
void from_json(const nlohmann::json& j, Configuration& e);
void to_json(nlohmann::json& j, const RunSet& r);
void from_json(const nlohmann::json& j, RunSet& r);
void to_json(nlohmann::json& j, const ResultRecord& r);
void from_json(const nlohmann::json& j, ResultRecord& r);
void to_json(nlohmann::json& j, const TimingSummary& s);
void from_json(const nlohmann::json& j, TimingSummary& s);

}  // namespace scalelab
