#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scalelab/entities.hpp"
#include "scalelab/store.hpp"

namespace scalelab {

/// Optional machine description carried by an upload; used when the machine label is new.
struct MachineFields {
    std::optional<std::string> cpu_model;
    std::optional<double> base_clock_ghz;
    std::optional<int> physical_cores;
    std::optional<int> logical_cpus;
    std::optional<std::int64_t> l1_kb;
    std::optional<std::int64_t> l2_kb;
    std::optional<std::int64_t> l3_kb;
    std::optional<double> max_memory_bandwidth_gbps;
    std::optional<std::string> vendor_spec_url;

    bool empty() const;
    friend bool operator==(const MachineFields&, const MachineFields&) = default;
};

struct UploadManifest {
    std::string category;
    std::string problem;
    std::string approach_title;
    std::string approach_description;
    std::string machine_label;
    MachineFields machine;
    std::string environment_os;
    std::string environment_compiler;
    std::string environment_framework;
    MemoryModel memory_model = MemoryModel::Shared;
    std::vector<TimingKind> timing_kinds;
    std::string contributor;
    Visibility visibility = Visibility::Public;
    std::optional<std::string> recorded_at;

    friend bool operator==(const UploadManifest&, const UploadManifest&) = default;
};

struct Measurement {
    std::int64_t problem_size = 0;
    int thread_count = 1;
    TimingKind timing_kind = TimingKind::Alg;
    int run_index = 1;
    double elapsed_seconds = 0.0;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct ResultUpload {
    UploadManifest manifest;
    std::vector<Measurement> measurements;

    friend bool operator==(const ResultUpload&, const ResultUpload&) = default;
};

/// Parses the line-oriented upload format (see docs/FORMATS.md).
ResultUpload parse_results_file(std::string_view content);

/// Canonical text form; parse_results_file(serialize_results_file(u)) == u.
std::string serialize_results_file(const ResultUpload& upload);

enum class ProbeSource { Lscpu, ProcCpuinfo, Manual };

std::string_view to_string(ProbeSource s);

struct MachineFacts {
    std::optional<std::string> cpu_model;
    std::optional<double> base_clock_ghz;
    std::optional<int> physical_cores;
    std::optional<int> logical_cpus;
    std::optional<std::int64_t> l1_kb;
    std::optional<std::int64_t> l2_kb;
    std::optional<std::int64_t> l3_kb;
    std::optional<std::string> vendor;
    ProbeSource source_probe = ProbeSource::Manual;
    std::string raw;  // probe text the facts came from

    friend bool operator==(const MachineFacts&, const MachineFacts&) = default;
};

nlohmann::json to_json_value(const MachineFacts& facts);

MachineFacts parse_lscpu(std::string_view text);
MachineFacts parse_proc_cpuinfo(std::string_view text);

/// First line of `uname -a` output, verbatim.
std::string parse_uname(std::string_view text);

struct CompilerInfo {
    std::string first_line;
    std::string name;
    std::optional<std::string> version;

    /// "name version" when a version was found, otherwise the first line.
    std::string name_version() const;
};

CompilerInfo parse_compiler_version(std::string_view text);

/// Values that win over anything the probes report.
struct MachineOverrides {
    std::string label;
    MachineFields fields;
};

/// Field-wise merge. Disagreeing probe values without an override raise MergeConflict.
Machine merge_machine_facts(const std::vector<MachineFacts>& facts, const MachineOverrides& overrides);

struct CommitResult {
    EntityId category;
    EntityId problem;
    EntityId approach;
    EntityId machine;
    EntityId environment;
    std::vector<EntityId> configurations;
    std::vector<EntityId> created;
    std::vector<EntityId> updated;

    friend bool operator==(const CommitResult&, const CommitResult&) = default;
};

nlohmann::json to_json_value(const CommitResult& r);

/// Creates or reuses entities by exact name and stores the run sets. Re-committing the
/// same upload yields the same ids and leaves the store unchanged. `fallback_recorded_at`
/// stamps new records when the manifest has no recorded_at.
CommitResult commit_upload(const ResultUpload& upload, Store& store, std::string_view fallback_recorded_at);

/// Same, for callers that already hold the writer.
CommitResult commit_upload(const ResultUpload& upload, StoreWriter& writer, std::string_view fallback_recorded_at);

/// Current UTC time as ISO-8601, seconds precision.
std::string utc_timestamp_now();

}  // namespace scalelab
