#include <doctest.h>

#include <random>

#include "scalelab/ingest.hpp"
#include "support.hpp"

using namespace scalelab;
using namespace scalelab::testing;

namespace {

const char* kMinimal = R"(# matmul, one size
[manifest]
category = Linear Algebra
problem = Matrix Multiplication
approach.title = Approach 2
approach.description = parallel for on the middle loop
machine.label = Lab box
machine.cpu_model = Intel(R) Core(TM) i5-4590 CPU @ 3.30GHz
machine.base_clock_ghz = 3.3
machine.physical_cores = 4
environment.os = Ubuntu 16.04
environment.compiler = gcc 7.4.0
environment.framework = OpenMP 4.5
memory_model = shared
timing_kinds = ALG,E2E
contributor = alice
visibility = public
recorded_at = 2018-03-01T10:00:00Z

[measurements]
problem_size,thread_count,timing_kind,run_index,elapsed_seconds
128,1,ALG,1,0.020
128,1,ALG,2,0.022
128,2,ALG,1,0.011
128,2,ALG,2,0.012
128,1,E2E,1,0.030
)";

std::string probe(const char* name) { return read_file(source_dir() / "data" / "probes" / name); }

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

std::size_t error_line(const std::string& content) {
    try {
        parse_results_file(content);
    } catch (const Error& e) {
        return e.detail().value("line", std::size_t{0});
    }
    return 0;
}

}  // namespace

TEST_CASE("minimal upload parses") {
    const ResultUpload u = parse_results_file(kMinimal);
    CHECK(u.manifest.category == "Linear Algebra");
    CHECK(u.manifest.machine.physical_cores == 4);
    CHECK(u.manifest.timing_kinds == std::vector{TimingKind::Alg, TimingKind::E2E});
    CHECK(u.manifest.visibility == Visibility::Public);
    REQUIRE(u.measurements.size() == 5);
    CHECK(u.measurements[2] == Measurement{128, 2, TimingKind::Alg, 1, 0.011});
    CHECK(u.measurements[4].timing_kind == TimingKind::E2E);
}

TEST_CASE("manifest errors") {
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "contributor = alice\n", "")); }) ==
          ErrorCode::ManifestError);
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "visibility = public", "visibility = world")); }) ==
          ErrorCode::ManifestError);
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "contributor = alice", "contributer = alice")); }) ==
          ErrorCode::ManifestError);
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "timing_kinds = ALG,E2E", "timing_kinds = ALG")); }) ==
          ErrorCode::ManifestError);
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "[manifest]\n", "")); }) ==
          ErrorCode::ManifestError);
    CHECK(error_code_of([] { parse_results_file(replace_line(kMinimal, "machine.physical_cores = 4", "machine.physical_cores = four")); }) ==
          ErrorCode::ManifestError);
}

TEST_CASE("row errors carry the line number") {
    // Line 24 holds the third measurement row.
    const std::string bad_threads = replace_line(kMinimal, "128,2,ALG,1,0.011", "128,0,ALG,1,0.011");
    CHECK(error_code_of([&] { parse_results_file(bad_threads); }) == ErrorCode::RowError);
    CHECK(error_line(bad_threads) == 24);

    const std::string negative = replace_line(kMinimal, "128,2,ALG,2,0.012", "128,2,ALG,2,-0.012");
    CHECK(error_code_of([&] { parse_results_file(negative); }) == ErrorCode::RowError);
    CHECK(error_line(negative) == 25);

    for (const char* row : {"128,2,ALG,1", "x,2,ALG,1,0.1", "128,2,GPU,1,0.1", "128,2,ALG,0,0.1", "128,2,ALG,1,nan",
                            "128,2,ALG,1,0.1,7"}) {
        CAPTURE(row);
        CHECK(error_code_of([&] { parse_results_file(replace_line(kMinimal, "128,2,ALG,1,0.011", row)); }) ==
              ErrorCode::RowError);
    }
    try {
        parse_results_file(bad_threads);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).rfind("line 24:", 0) == 0);
    }
}

TEST_CASE("duplicate rows") {
    const std::string dup = replace_line(kMinimal, "128,2,ALG,2,0.012", "128,2,ALG,1,0.013");
    CHECK(error_code_of([&] { parse_results_file(dup); }) == ErrorCode::DuplicateRow);
    CHECK(error_line(dup) == 25);
}

TEST_CASE("wrong header and empty measurement list") {
    CHECK(error_code_of([] {
              parse_results_file(replace_line(kMinimal, "problem_size,thread_count", "size,thread_count"));
          }) == ErrorCode::RowError);
    const std::string text = kMinimal;
    const std::string no_rows = text.substr(0, text.find("128,1,ALG,1"));
    CHECK(error_code_of([&] { parse_results_file(no_rows); }) == ErrorCode::ValidationError);
}

TEST_CASE("escaped manifest values") {
    const std::string text =
        replace_line(kMinimal, "parallel for on the middle loop", R"(line one\nline two with \\ backslash)");
    const ResultUpload u = parse_results_file(text);
    CHECK(u.manifest.approach_description == "line one\nline two with \\ backslash");
    CHECK(parse_results_file(serialize_results_file(u)) == u);
}

TEST_CASE("parse inverts serialize for generated uploads") {
    std::mt19937_64 rng(20180301);
    std::uniform_real_distribution<double> seconds(1e-6, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        ResultUpload u = parse_results_file(kMinimal);
        u.manifest.visibility = static_cast<Visibility>(trial % 4);
        u.manifest.memory_model = trial % 2 ? MemoryModel::Distributed : MemoryModel::Shared;
        u.manifest.recorded_at.reset();
        if (trial % 3 == 0) u.manifest.machine.max_memory_bandwidth_gbps = seconds(rng);
        u.measurements.clear();
        for (std::int64_t n = 4; n <= 256; n *= 2) {
            for (int p : {1, 2, 4}) {
                for (int r = 1; r <= 3; ++r) {
                    u.measurements.push_back({n, p, trial % 2 ? TimingKind::E2E : TimingKind::Alg, r, seconds(rng)});
                }
            }
        }
        const std::string text = serialize_results_file(u);
        CHECK(parse_results_file(text) == u);
        CHECK(serialize_results_file(parse_results_file(text)) == text);
    }
}

TEST_CASE("lscpu fixtures") {
    const MachineFacts m1 = parse_lscpu(probe("machine1.lscpu"));
    CHECK(m1.cpu_model->find("E5-2620") != std::string::npos);
    CHECK(m1.base_clock_ghz == doctest::Approx(2.4));
    CHECK(m1.physical_cores == 6);
    CHECK(m1.logical_cpus == 12);
    CHECK(m1.l1_kb == 32);
    CHECK(m1.l2_kb == 256);
    CHECK(m1.l3_kb == 20480);
    CHECK(m1.vendor == "GenuineIntel");
    CHECK(m1.source_probe == ProbeSource::Lscpu);

    const MachineFacts m2 = parse_lscpu(probe("machine2.lscpu"));
    CHECK(m2.cpu_model->find("i5-4590") != std::string::npos);
    CHECK(m2.l3_kb == 6144);
    CHECK(m2.physical_cores == 4);

    // Newer util-linux prints unit suffixes and instance counts.
    const MachineFacts sandbox = parse_lscpu(probe("sandbox.lscpu"));
    CHECK(sandbox.l1_kb == 48);
    CHECK(sandbox.l2_kb == 2048);
    CHECK(sandbox.l3_kb == 105 * 1024);
    CHECK(sandbox.logical_cpus == 1);
    CHECK_FALSE(sandbox.base_clock_ghz.has_value());
}

TEST_CASE("lscpu cache with several instances is per instance") {
    const MachineFacts f = parse_lscpu("Model name: X\nL2 cache: 8 MiB (4 instances)\n");
    CHECK(f.l2_kb == 2048);
}

TEST_CASE("proc cpuinfo fixtures") {
    const MachineFacts eight = parse_proc_cpuinfo(probe("eight_way.cpuinfo"));
    CHECK(eight.logical_cpus == 8);
    const MachineFacts single = parse_proc_cpuinfo(probe("single.cpuinfo"));
    CHECK(single.logical_cpus == 1);

    const MachineFacts m1 = parse_proc_cpuinfo(probe("machine1.cpuinfo"));
    CHECK(m1.logical_cpus == 12);
    CHECK(m1.physical_cores == 6);
    CHECK(m1.l3_kb == 20480);
    CHECK(m1.source_probe == ProbeSource::ProcCpuinfo);

    const MachineFacts m2 = parse_proc_cpuinfo(probe("machine2.cpuinfo"));
    CHECK(m2.cpu_model->find("i5-4590") != std::string::npos);
    CHECK(m2.base_clock_ghz == doctest::Approx(3.3));
    CHECK(m2.l3_kb == 6144);
}

TEST_CASE("empty or foreign probe text is rejected") {
    CHECK(error_code_of([] { parse_lscpu(""); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_proc_cpuinfo(""); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_lscpu("hello world\n"); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_uname(""); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_compiler_version("\n"); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_lscpu("CPU(s): many\n"); }) == ErrorCode::ProbeFormat);
    CHECK(error_code_of([] { parse_lscpu("L3 cache: lots\n"); }) == ErrorCode::ProbeFormat);
}

TEST_CASE("uname and compiler banners") {
    CHECK(parse_uname(probe("machine1.uname")).rfind("Linux hpc-node1 4.15.0-45-generic", 0) == 0);
    const CompilerInfo gcc7 = parse_compiler_version(probe("machine1.gcc"));
    CHECK(gcc7.name == "gcc");
    CHECK(gcc7.version == "7.4.0");
    CHECK(gcc7.name_version() == "gcc 7.4.0");
    const CompilerInfo gcc11 = parse_compiler_version(probe("sandbox.gcc"));
    CHECK(gcc11.version == "11.4.0");
    const CompilerInfo clang = parse_compiler_version("clang version 14.0.0-1ubuntu1.1\nTarget: x86_64\n");
    CHECK(clang.name == "clang");
    CHECK_FALSE(clang.version.has_value());  // no clean dotted token
    const CompilerInfo odd = parse_compiler_version("mystery compiler\n");
    CHECK_FALSE(odd.version.has_value());
    CHECK(odd.name_version() == "mystery compiler");
}

TEST_CASE("merging lscpu and cpuinfo for the same machine") {
    const std::vector<MachineFacts> facts = {parse_lscpu(probe("machine1.lscpu")),
                                             parse_proc_cpuinfo(probe("machine1.cpuinfo"))};
    MachineOverrides o{"Machine 1", {}};
    o.fields.max_memory_bandwidth_gbps = 59;
    const Machine m = merge_machine_facts(facts, o);
    CHECK(m.label == "Machine 1");
    CHECK(m.physical_cores == 6);
    CHECK(m.logical_cpus == 12);
    CHECK(m.l3_kb == 20480);
    CHECK(m.l1_kb == 32);
    CHECK(m.max_memory_bandwidth_gbps == 59);
    CHECK(m.raw_probe_blobs.size() == 2);
    CHECK(m.raw_probe_blobs.count("lscpu"));
    CHECK(m.raw_probe_blobs.count("cpuinfo"));
}

TEST_CASE("conflicting probes need an override") {
    const std::vector<MachineFacts> facts = {parse_lscpu(probe("machine1.lscpu")),
                                             parse_proc_cpuinfo(probe("machine2.cpuinfo"))};
    MachineOverrides o{"Mixed", {}};
    try {
        merge_machine_facts(facts, o);
        FAIL("expected MergeConflict");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MergeConflict);
        CHECK(e.detail()["field"] == "cpu_model");
        CHECK(e.detail()["sources"] == nlohmann::json{"LSCPU", "PROC_CPUINFO"});
    }
    o.fields.cpu_model = "Chosen";
    o.fields.base_clock_ghz = 3.0;
    o.fields.physical_cores = 4;
    o.fields.logical_cpus = 4;
    o.fields.l3_kb = 6144;
    const Machine m = merge_machine_facts(facts, o);
    CHECK(m.cpu_model == "Chosen");
    CHECK(m.l3_kb == 6144);
}

TEST_CASE("merge requires the identifying fields") {
    const std::vector<MachineFacts> facts = {parse_lscpu(probe("sandbox.lscpu"))};
    // The sandbox model string carries no clock.
    CHECK(error_code_of([&] { merge_machine_facts(facts, {"Sandbox", {}}); }) == ErrorCode::ValidationError);
    MachineOverrides o{"Sandbox", {}};
    o.fields.base_clock_ghz = 2.0;
    CHECK(merge_machine_facts(facts, o).base_clock_ghz == 2.0);
    CHECK(error_code_of([&] { merge_machine_facts({}, o); }) == ErrorCode::ValidationError);
    o.label.clear();
    CHECK(error_code_of([&] { merge_machine_facts(facts, o); }) == ErrorCode::ValidationError);
}

TEST_CASE("commit creates the hierarchy and is idempotent") {
    Store store;
    const ResultUpload u = parse_results_file(kMinimal);
    const CommitResult first = commit_upload(u, store, "2020-01-01T00:00:00Z");
    CHECK(first.configurations.size() == 2);
    CHECK(first.created.size() == 7);  // category, problem, approach, machine, environment, 2 configurations
    CHECK(first.updated.empty());

    const auto configs = store.list<Configuration>();
    REQUIRE(configs.size() == 2);
    const ResultRecord* r1 = nullptr;
    std::vector<ResultRecord> records = store.read([](const StoreView& v) { return v.results(); });
    REQUIRE(records.size() == 2);
    for (const ResultRecord& r : records) {
        if (store.get<Configuration>(r.configuration_id).thread_count == 1) r1 = &r;
    }
    REQUIRE(r1);
    CHECK(r1->run_set_alg->samples.size() == 2);
    CHECK(r1->run_set_e2e->samples.size() == 1);
    CHECK(r1->recorded_at == "2018-03-01T10:00:00Z");

    const CommitResult again = commit_upload(u, store, "2021-01-01T00:00:00Z");
    CHECK(again.configurations == first.configurations);
    CHECK(again.created.empty());
    CHECK(again.updated.empty());
    CHECK(again.machine == first.machine);
    CHECK(store.read([](const StoreView& v) { return v.results(); }) == records);
}

TEST_CASE("commit reuses archived entities and stamps the fallback time") {
    Store store;
    MicroArchive a(store);
    ResultUpload u = parse_results_file(kMinimal);
    u.manifest.machine_label = "Machine 1";
    u.manifest.machine = {};
    u.manifest.approach_description.clear();
    u.manifest.recorded_at.reset();
    u.manifest.environment_compiler = "gcc 7.4.0";
    const CommitResult r = commit_upload(u, store, "2020-05-05T00:00:00Z");
    CHECK(r.category == a.category);
    CHECK(r.problem == a.problem);
    CHECK(r.approach == a.approach2);
    CHECK(r.machine == a.machine1);
    CHECK(r.environment == a.env);
    CHECK(r.created.size() == 2);
    CHECK(store.read([&](const StoreView& v) { return v.find_result(r.configurations[0])->recorded_at; }) ==
          "2020-05-05T00:00:00Z");
}

TEST_CASE("commit into a new category") {
    Store store;
    MicroArchive a(store);
    ResultUpload u = parse_results_file(kMinimal);
    u.manifest.category = "Graph Algorithms";
    u.manifest.problem = "BFS";
    const CommitResult r = commit_upload(u, store, "x");
    CHECK(r.category != a.category);
    CHECK(store.read([](const StoreView& v) { return v.find_category("Graph Algorithms").has_value(); }));
    CHECK(store.list<Category>().size() == 2);
}

TEST_CASE("commit conflicts leave the store untouched") {
    Store store;
    ResultUpload u = parse_results_file(kMinimal);
    commit_upload(u, store, "x");
    const auto before = store.read([](const StoreView& v) { return v.results(); });

    SUBCASE("different timings for an archived configuration") {
        ResultUpload changed = u;
        changed.measurements[0].elapsed_seconds = 0.5;
        CHECK(error_code_of([&] { commit_upload(changed, store, "x"); }) == ErrorCode::ConflictError);
    }
    SUBCASE("different machine description under the same label") {
        ResultUpload changed = u;
        changed.manifest.machine.physical_cores = 8;
        changed.manifest.category = "Brand New";
        CHECK(error_code_of([&] { commit_upload(changed, store, "x"); }) == ErrorCode::ConflictError);
        CHECK_FALSE(store.read([](const StoreView& v) { return v.find_category("Brand New").has_value(); }));
    }
    SUBCASE("different approach description") {
        ResultUpload changed = u;
        changed.manifest.approach_description = "something else";
        CHECK(error_code_of([&] { commit_upload(changed, store, "x"); }) == ErrorCode::ConflictError);
    }
    SUBCASE("different visibility") {
        ResultUpload changed = u;
        changed.manifest.visibility = Visibility::Private;
        CHECK(error_code_of([&] { commit_upload(changed, store, "x"); }) == ErrorCode::ConflictError);
    }
    SUBCASE("new machine without a description") {
        ResultUpload changed = u;
        changed.manifest.machine_label = "Unknown box";
        changed.manifest.machine = {};
        changed.manifest.category = "Brand New";
        CHECK(error_code_of([&] { commit_upload(changed, store, "x"); }) == ErrorCode::ManifestError);
        CHECK_FALSE(store.read([](const StoreView& v) { return v.find_category("Brand New").has_value(); }));
    }
    CHECK(store.read([](const StoreView& v) { return v.results(); }) == before);
}

TEST_CASE("a later upload may add the other timing kind") {
    Store store;
    ResultUpload alg = parse_results_file(kMinimal);
    alg.manifest.timing_kinds = {TimingKind::Alg};
    std::erase_if(alg.measurements, [](const Measurement& m) { return m.timing_kind == TimingKind::E2E; });
    const CommitResult first = commit_upload(alg, store, "x");

    const ResultUpload both = parse_results_file(kMinimal);
    const CommitResult second = commit_upload(both, store, "y");
    CHECK(second.configurations == first.configurations);
    REQUIRE(second.updated.size() == 1);
    CHECK(store.get<Configuration>(second.updated[0]).thread_count == 1);
}

TEST_CASE("contributors keep separate configurations") {
    Store store;
    ResultUpload u = parse_results_file(kMinimal);
    const CommitResult alice = commit_upload(u, store, "x");
    u.manifest.contributor = "bob";
    const CommitResult bob = commit_upload(u, store, "x");
    CHECK(alice.machine == bob.machine);
    CHECK(alice.configurations != bob.configurations);
    CHECK(store.list<Configuration>().size() == 4);
}

TEST_CASE("timestamp format") {
    const std::string t = utc_timestamp_now();
    CHECK(t.size() == 20);
    CHECK(t[10] == 'T');
    CHECK(t.back() == 'Z');
}
