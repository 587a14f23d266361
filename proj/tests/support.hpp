#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "scalelab/error.hpp"
#include "scalelab/seed.hpp"
#include "scalelab/store.hpp"
#include "selection_walk.hpp"

namespace scalelab::testing {

inline std::filesystem::path source_dir() { return SCALELAB_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() / ("scalelab-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

template <class F>
ErrorCode error_code_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(-1);
}

inline RunSet make_runs(TimingKind kind, std::initializer_list<double> seconds) {
    RunSet r{kind, {}};
    for (double s : seconds) r.samples.push_back({s, kind, int(r.samples.size()) + 1});
    return r;
}

/// Two approaches of one problem on two machines. Approach 2 has no data on Machine 2.
struct MicroArchive {
    EntityId category, problem, approach1, approach2, machine1, machine2, env;

    explicit MicroArchive(Store& store) {
        category = store.put(Category{{}, "Linear Algebra"});
        problem = store.put(Problem{{}, category, "Matrix Multiplication"});
        approach1 = store.put(Approach{{}, problem, "Approach 1", "recursive block", {}, {}});
        approach2 = store.put(Approach{{}, problem, "Approach 2", "middle loop", {}, {}});
        Machine m1;
        m1.label = "Machine 1";
        m1.cpu_model = "Xeon E5-2620";
        m1.base_clock_ghz = 2.4;
        m1.physical_cores = 6;
        machine1 = store.put(m1);
        Machine m2 = m1;
        m2.label = "Machine 2";
        m2.cpu_model = "Core i5-4590";
        machine2 = store.put(m2);
        env = store.put(Environment{{}, "Ubuntu 16.04", "gcc 7.4.0", "OpenMP 4.5"});
    }

    EntityId add(Store& store, EntityId approach, EntityId machine, std::int64_t size, int threads,
                 std::initializer_list<double> alg, Visibility vis = Visibility::Public,
                 std::string contributor = "seed") {
        Configuration c;
        c.problem_id = problem;
        c.approach_id = approach;
        c.machine_id = machine;
        c.environment_id = env;
        c.problem_size = size;
        c.thread_count = threads;
        c.visibility = vis;
        c.contributor = std::move(contributor);
        const EntityId id = store.put(c);
        store.put_result(ResultRecord{id, make_runs(TimingKind::Alg, alg), std::nullopt, "2018-01-01T00:00:00Z"});
        return id;
    }
};

/// Compares against tests/golden/<name>. With SCALELAB_UPDATE_GOLDEN=1 the file is rewritten instead.
inline void check_golden(const std::string& name, const std::string& actual) {
    const auto path = source_dir() / "tests" / "golden" / name;
    if (const char* update = std::getenv("SCALELAB_UPDATE_GOLDEN"); update && std::string(update) == "1") {
        write_file(path, actual);
        return;
    }
    REQUIRE_MESSAGE(std::filesystem::exists(path), "missing golden file " << path.string());
    const std::string expected = read_file(path);
    CHECK_MESSAGE(expected == actual, "output differs from " << path.string());
}

inline Store& seeded_store() {
    static Store store;
    static const bool seeded = (seed_store(store), true);
    (void)seeded;
    return store;
}

/// Approach 1 vs Approach 2 for matrix multiplication on Machine 1 with the gcc 7 environment.
inline FilterSelection approach_selection(const Store& store) {
    return store.read([](const StoreView& v) {
        FilterSelection s;
        const auto la = v.find_category("Linear Algebra");
        const auto mm = v.find_problem(la->id, "Matrix Multiplication");
        s.category_id = la->id;
        s.problem_id = mm->id;
        s.memory_model = MemoryModel::Shared;
        s.basis = Dimension::Approach;
        s.basis_instance_ids = {v.find_approach(mm->id, "Approach 1")->id, v.find_approach(mm->id, "Approach 2")->id};
        s.fixed_choices[Dimension::Machine] = v.find_machine("Machine 1")->id;
        s.fixed_choices[Dimension::Environment] = v.find_environment("Ubuntu 16.04", "gcc 7.4.0", "OpenMP 4.5")->id;
        return s;
    });
}

/// Machine 1 vs Machine 2 for Approach 2, same environment.
inline FilterSelection machine_selection(const Store& store) {
    FilterSelection s = approach_selection(store);
    store.read([&](const StoreView& v) {
        const EntityId a2 = s.basis_instance_ids[1];
        s.basis = Dimension::Machine;
        s.basis_instance_ids = {v.find_machine("Machine 1")->id, v.find_machine("Machine 2")->id};
        const EntityId env = s.fixed_choices.at(Dimension::Environment);
        s.fixed_choices.clear();
        s.fixed_choices[Dimension::Approach] = a2;
        s.fixed_choices[Dimension::Environment] = env;
        return 0;
    });
    return s;
}

}  // namespace scalelab::testing
