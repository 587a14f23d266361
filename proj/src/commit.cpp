#include <algorithm>
#include <chrono>
#include <ctime>

#include "scalelab/error.hpp"
#include "scalelab/ingest.hpp"

namespace scalelab {

namespace {

[[noreturn]] void conflict(const std::string& what, nlohmann::json detail = nlohmann::json::object()) {
    throw Error(ErrorCode::ConflictError, what, std::move(detail));
}

/// Compares the machine description carried by an upload with the archived machine.
void check_machine_fields(const Machine& m, const MachineFields& f) {
    auto differs = [&](const char* field, const auto& want, const auto& have) {
        if (want && !(*want == have)) {
            conflict("machine '" + m.label + "' already exists with a different " + field,
                     {{"field", field}, {"machine", m.label}});
        }
    };
    differs("cpu_model", f.cpu_model, m.cpu_model);
    differs("base_clock_ghz", f.base_clock_ghz, m.base_clock_ghz);
    differs("physical_cores", f.physical_cores, m.physical_cores);
    differs("logical_cpus", f.logical_cpus, m.logical_cpus);
    differs("l1_kb", f.l1_kb, m.l1_kb);
    differs("l2_kb", f.l2_kb, m.l2_kb);
    differs("l3_kb", f.l3_kb, m.l3_kb);
    differs("max_memory_bandwidth_gbps", f.max_memory_bandwidth_gbps, m.max_memory_bandwidth_gbps);
    differs("vendor_spec_url", f.vendor_spec_url, m.vendor_spec_url);
}

Machine machine_from_manifest(const UploadManifest& manifest) {
    const MachineFields& f = manifest.machine;
    auto need = [&](const char* key, bool present) {
        if (!present) {
            throw Error(ErrorCode::ManifestError,
                        std::string("machine '") + manifest.machine_label + "' is not archived yet; manifest needs '" +
                            key + "'",
                        {{"field", key}});
        }
    };
    need("machine.cpu_model", f.cpu_model.has_value());
    need("machine.base_clock_ghz", f.base_clock_ghz.has_value());
    need("machine.physical_cores", f.physical_cores.has_value());
    Machine m;
    m.label = manifest.machine_label;
    m.cpu_model = *f.cpu_model;
    m.base_clock_ghz = *f.base_clock_ghz;
    m.physical_cores = *f.physical_cores;
    m.logical_cpus = f.logical_cpus;
    m.l1_kb = f.l1_kb;
    m.l2_kb = f.l2_kb;
    m.l3_kb = f.l3_kb;
    m.max_memory_bandwidth_gbps = f.max_memory_bandwidth_gbps;
    m.vendor_spec_url = f.vendor_spec_url;
    return m;
}

/// Runs of one configuration, grouped from the flat measurement list.
struct Group {
    std::int64_t problem_size;
    int thread_count;
    std::optional<RunSet> alg;
    std::optional<RunSet> e2e;
};

std::vector<Group> group_measurements(const std::vector<Measurement>& rows) {
    std::map<std::pair<std::int64_t, int>, Group> groups;
    for (const Measurement& r : rows) {
        Group& g = groups.try_emplace({r.problem_size, r.thread_count}, Group{r.problem_size, r.thread_count, {}, {}})
                       .first->second;
        auto& runs = r.timing_kind == TimingKind::Alg ? g.alg : g.e2e;
        if (!runs) runs = RunSet{r.timing_kind, {}};
        runs->samples.push_back({r.elapsed_seconds, r.timing_kind, r.run_index});
    }
    std::vector<Group> out;
    for (auto& [key, g] : groups) {
        for (auto* runs : {&g.alg, &g.e2e}) {
            if (*runs) {
                std::sort((*runs)->samples.begin(), (*runs)->samples.end(),
                          [](const TimingSample& a, const TimingSample& b) { return a.run_index < b.run_index; });
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace

nlohmann::json to_json_value(const CommitResult& r) {
    return nlohmann::json{{"category", r.category},
                          {"problem", r.problem},
                          {"approach", r.approach},
                          {"machine", r.machine},
                          {"environment", r.environment},
                          {"configurations", r.configurations},
                          {"created", r.created},
                          {"updated", r.updated}};
}

std::string utc_timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

CommitResult commit_upload(const ResultUpload& upload, Store& store, std::string_view fallback_recorded_at) {
    return store.write([&](StoreWriter& w) { return commit_upload(upload, w, fallback_recorded_at); });
}

CommitResult commit_upload(const ResultUpload& upload, StoreWriter& w, std::string_view fallback_recorded_at) {
    const UploadManifest& m = upload.manifest;
    const std::vector<Group> groups = group_measurements(upload.measurements);
    const std::string recorded_at = m.recorded_at.value_or(std::string(fallback_recorded_at));

    // Pass 1 checks every collision against the archive without writing; pass 2 applies.
    auto run = [&](bool apply) {
        CommitResult result;
        auto created = [&](EntityId id) {
            if (apply) result.created.push_back(id);
        };

        std::optional<Category> category = w.find_category(m.category);
        if (!category && apply) {
            category = w.get<Category>(w.put(Category{{}, m.category}));
            created(category->id);
        }

        std::optional<Problem> problem;
        if (category) problem = w.find_problem(category->id, m.problem);
        if (!problem && apply) {
            problem = w.get<Problem>(w.put(Problem{{}, category->id, m.problem}));
            created(problem->id);
        }

        std::optional<Approach> approach;
        if (problem) approach = w.find_approach(problem->id, m.approach_title);
        if (approach && !m.approach_description.empty() && approach->description != m.approach_description) {
            conflict("approach '" + m.approach_title + "' already exists with a different description",
                     {{"field", "approach.description"}});
        }
        if (!approach && apply) {
            approach = w.get<Approach>(w.put(Approach{{}, problem->id, m.approach_title, m.approach_description, {}, {}}));
            created(approach->id);
        }

        std::optional<Machine> machine = w.find_machine(m.machine_label);
        if (machine) {
            check_machine_fields(*machine, m.machine);
        } else {
            Machine fresh = machine_from_manifest(m);
            if (apply) {
                machine = w.get<Machine>(w.put(std::move(fresh)));
                created(machine->id);
            }
        }

        std::optional<Environment> env =
            w.find_environment(m.environment_os, m.environment_compiler, m.environment_framework);
        if (!env && apply) {
            env = w.get<Environment>(
                w.put(Environment{{}, m.environment_os, m.environment_compiler, m.environment_framework}));
            created(env->id);
        }

        const bool parents_exist = problem && approach && machine && env;
        for (const Group& g : groups) {
            std::optional<Configuration> config;
            Configuration probe;
            if (parents_exist) {
                probe.problem_id = problem->id;
                probe.approach_id = approach->id;
                probe.machine_id = machine->id;
                probe.environment_id = env->id;
                probe.memory_model = m.memory_model;
                probe.problem_size = g.problem_size;
                probe.thread_count = g.thread_count;
                probe.visibility = m.visibility;
                probe.contributor = m.contributor;
                config = w.find_configuration(probe);
            }
            if (config && config->visibility != m.visibility) {
                conflict("configuration " + to_string(config->id) + " is archived with a different visibility",
                         {{"configuration", config->id.value}});
            }
            const ResultRecord* existing = config ? w.find_result(config->id) : nullptr;
            ResultRecord record = existing ? *existing : ResultRecord{};
            bool changed = existing == nullptr;
            for (TimingKind kind : {TimingKind::Alg, TimingKind::E2E}) {
                const auto& incoming = kind == TimingKind::Alg ? g.alg : g.e2e;
                if (!incoming) continue;
                if (!apply) incoming->validate();
                auto& have = record.runs(kind);
                if (have && !(*have == *incoming)) {
                    conflict("configuration " + to_string(config->id) + " already holds different " +
                                 std::string(to_string(kind)) + " runs",
                             {{"configuration", config->id.value}, {"timing_kind", to_string(kind)}});
                }
                if (!have) {
                    have = incoming;
                    changed = true;
                }
            }
            if (!apply) continue;

            if (!config) {
                config = w.get<Configuration>(w.put(probe));
                created(config->id);
            }
            result.configurations.push_back(config->id);
            if (changed) {
                record.configuration_id = config->id;
                if (existing == nullptr) record.recorded_at = recorded_at;
                w.put_result(record);
                if (existing != nullptr) result.updated.push_back(config->id);
            }
        }

        if (apply) {
            result.category = category->id;
            result.problem = problem->id;
            result.approach = approach->id;
            result.machine = machine->id;
            result.environment = env->id;
        }
        return result;
    };

    run(false);
    return run(true);
}

}  // namespace scalelab
