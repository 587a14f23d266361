// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and time budgets are fixed here, not taken from the environment.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latex_check.hpp"
#include "scalelab/api.hpp"
#include "scalelab/compare.hpp"
#include "scalelab/ingest.hpp"
#include "scalelab/report.hpp"
#include "scalelab/seed.hpp"
#include "selection_walk.hpp"

using namespace scalelab;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kExactRel = 1e-12;
constexpr double kSaturationRel = 0.15;

const fs::path kSource = SCALELAB_SOURCE_DIR;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double rel_err(double actual, double expected) {
    if (actual == expected) return 0.0;
    return std::fabs(actual - expected) / std::max(std::fabs(expected), std::numeric_limits<double>::min());
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects failures; the first few are reported.
struct Checker {
    int failures = 0;
    std::string first;
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
    }
    std::string summary() const { return failures ? std::to_string(failures) + " failures: " + first : ""; }
};

FilterSelection select_pair(const StoreView& v, Dimension basis, std::vector<EntityId> instances,
                            std::map<Dimension, EntityId> fixed) {
    FilterSelection s;
    s.category_id = v.find_category("Linear Algebra")->id;
    s.problem_id = v.find_problem(*s.category_id, "Matrix Multiplication")->id;
    s.memory_model = MemoryModel::Shared;
    s.basis = basis;
    s.basis_instance_ids = std::move(instances);
    s.fixed_choices = std::move(fixed);
    return s;
}

struct SeedIds {
    EntityId a1, a2, m1, m2, gcc7, gcc9;
};

SeedIds seed_ids(const Store& store) {
    return store.read([](const StoreView& v) {
        const auto la = v.find_category("Linear Algebra");
        const auto mm = v.find_problem(la->id, "Matrix Multiplication");
        return SeedIds{v.find_approach(mm->id, "Approach 1")->id, v.find_approach(mm->id, "Approach 2")->id,
                       v.find_machine("Machine 1")->id, v.find_machine("Machine 2")->id,
                       v.find_environment("Ubuntu 16.04", "gcc 7.4.0", "OpenMP 4.5")->id,
                       v.find_environment("Ubuntu 18.04", "gcc 9.3.0", "OpenMP 4.5")->id};
    });
}

FilterSelection approach_selection(const Store& store, EntityId machine) {
    const SeedIds ids = seed_ids(store);
    return store.read([&](const StoreView& v) {
        return select_pair(v, Dimension::Approach, {ids.a1, ids.a2},
                           {{Dimension::Machine, machine}, {Dimension::Environment, ids.gcc7}});
    });
}

// ---------------------------------------------------------------------------

Outcome metric_identities() {
    std::mt19937_64 rng(20240501);
    double worst = 0;
    int cases = 0;
    for (int p : {2, 4, 8, 16}) {
        std::uniform_real_distribution<double> dist(0.0, 2.0 * p);
        for (int i = 0; i < 10000; ++i) {
            double s = dist(rng);
            if (s == 0.0) s = 2.0 * p;  // keep s in (0, 2p]
            worst = std::max(worst, rel_err(efficiency(s, p) * p, s));
            ++cases;
        }
        worst = std::max(worst, std::fabs(karp_flatt(p, p).serial_fraction));
        worst = std::max(worst, rel_err(karp_flatt(1.0, p).serial_fraction, 1.0));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d random speedups, max error %.3g (limit %.0e)", cases, worst, kExactRel);
    return {worst <= kExactRel, buf};
}

Outcome hand_oracle() {
    // Two approaches, sizes {64, 128}, parallel thread counts {2, 4} plus their serial runs.
    struct Cell {
        int approach;
        std::int64_t n;
        int p;
        std::vector<double> runs;
    };
    const std::vector<Cell> cells = {
        {1, 64, 1, {0.40, 0.44, 0.42}},   {1, 64, 2, {0.25, 0.27}},   {1, 64, 4, {0.16, 0.18, 0.17}},
        {1, 128, 1, {3.2, 3.0}},          {1, 128, 2, {1.7, 1.9}},    {1, 128, 4, {1.0, 1.1, 0.95}},
        {2, 64, 1, {0.38, 0.36}},         {2, 64, 2, {0.21, 0.2}},    {2, 64, 4, {0.09, 0.095}},
        {2, 128, 1, {2.9, 3.1, 3.05}},    {2, 128, 2, {1.52, 1.49}},  {2, 128, 4, {0.7, 0.74, 0.69}},
    };
    Store store;
    EntityId approach[3];
    FilterSelection sel;
    store.write([&](StoreWriter& w) {
        const EntityId cat = w.put(Category{{}, "Linear Algebra"});
        const EntityId prob = w.put(Problem{{}, cat, "Matrix Multiplication"});
        approach[1] = w.put(Approach{{}, prob, "Approach 1", "", {}, {}});
        approach[2] = w.put(Approach{{}, prob, "Approach 2", "", {}, {}});
        Machine m;
        m.label = "Machine 1";
        m.cpu_model = "test";
        m.base_clock_ghz = 2.4;
        m.physical_cores = 6;
        const EntityId mid = w.put(m);
        const EntityId env = w.put(Environment{{}, "Ubuntu 16.04", "gcc 7.4.0", "OpenMP 4.5"});
        for (const Cell& c : cells) {
            Configuration cfg;
            cfg.problem_id = prob;
            cfg.approach_id = approach[c.approach];
            cfg.machine_id = mid;
            cfg.environment_id = env;
            cfg.problem_size = c.n;
            cfg.thread_count = c.p;
            cfg.contributor = "seed";
            const EntityId id = w.put(cfg);
            RunSet runs{TimingKind::Alg, {}};
            for (double t : c.runs) runs.samples.push_back({t, TimingKind::Alg, int(runs.samples.size()) + 1});
            w.put_result(ResultRecord{id, runs, std::nullopt, "2020-01-01T00:00:00Z"});
        }
        sel = select_pair(w, Dimension::Approach, {approach[1], approach[2]},
                          {{Dimension::Machine, mid}, {Dimension::Environment, env}});
        return 0;
    });
    const ComparisonDataset d = resolve_comparison(store, sel, AccessContext::anonymous());

    // Spreadsheet-style: plain averages and the textbook formulas.
    auto mean = [&](int a, std::int64_t n, int p) {
        for (const Cell& c : cells) {
            if (c.approach == a && c.n == n && c.p == p) {
                double sum = 0;
                for (double t : c.runs) sum += t;
                return sum / double(c.runs.size());
            }
        }
        return std::nan("");
    };
    std::map<std::tuple<MetricKind, std::string, int, std::int64_t>, double> expected;
    for (int a : {1, 2}) {
        const std::string inst = "Approach " + std::to_string(a);
        for (std::int64_t n : {64, 128}) {
            for (int p : {2, 4}) {
                const double t1 = mean(a, n, 1), tp = mean(a, n, p);
                const double s = t1 / tp;
                expected[{MetricKind::Time, inst, p, n}] = tp;
                expected[{MetricKind::Speedup, inst, p, n}] = s;
                expected[{MetricKind::Efficiency, inst, p, n}] = s / p;
                expected[{MetricKind::KarpFlatt, inst, p, n}] = (1.0 / s - 1.0 / p) / (1.0 - 1.0 / p);
            }
        }
    }
    Checker check;
    double worst = 0;
    std::size_t seen = 0;
    for (MetricKind k : kAllMetricKinds) {
        for (const MetricSeries& s : d.of(k)) {
            for (const MetricPoint& pt : s.points) {
                auto it = expected.find({k, s.instance, pt.thread_count, pt.problem_size});
                check.expect(it != expected.end(), "unexpected point " + s.label);
                if (it == expected.end()) continue;
                ++seen;
                worst = std::max(worst, rel_err(pt.value, it->second));
            }
        }
    }
    check.expect(seen == expected.size(), "saw " + std::to_string(seen) + " of " + std::to_string(expected.size()));
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu points in 4 families, max rel error %.3g (limit %.0e)", seen, worst, kExactRel);
    return {check.failures == 0 && worst <= kExactRel, check.failures ? check.summary() : buf};
}

Outcome seed_shape(const Store& store) {
    const SeedIds ids = seed_ids(store);
    Checker check;
    int points = 0;
    double worst_saturation = 0;
    for (EntityId machine : {ids.m1, ids.m2}) {
        const ComparisonDataset d = resolve_comparison(store, approach_selection(store, machine), AccessContext::anonymous());
        for (const MetricSeries& s : d.of(MetricKind::Speedup)) {
            for (const MetricPoint& pt : s.points) {
                ++points;
                const bool ok = pt.problem_size < 64 ? pt.value < 1.0 : pt.value >= 1.0;
                check.expect(ok, s.label + " n=" + std::to_string(pt.problem_size) + " speedup " + std::to_string(pt.value));
            }
            if (s.instance == "Approach 1") {
                const std::size_t k = s.points.size();
                const double a = s.points[k - 2].value, b = s.points[k - 1].value;
                const double diff = std::fabs(a - b) / std::min(a, b);
                worst_saturation = std::max(worst_saturation, diff);
                check.expect(diff < kSaturationRel, s.label + " does not saturate");
            }
        }
    }
    check.expect(points > 0, "no speedup points");
    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "%d speedup points on both machines; recursive approach top-two-size spread %.1f%% (limit %.0f%%); "
                  "synthetic seed",
                  points, 100 * worst_saturation, 100 * kSaturationRel);
    return {check.failures == 0, check.failures ? check.summary() : buf};
}

void add_extra_fixtures(Store& store) {
    const std::string upload = read_file(kSource / "data" / "examples" / "student_upload.txt");
    commit_upload(parse_results_file(upload), store, "2024-01-01T00:00:00Z");
    std::string priv = upload;
    priv.replace(priv.find("contributor = alice"), 19, "contributor = bob");
    priv.replace(priv.find("visibility = student"), 20, "visibility = private");
    priv.replace(priv.find("gcc 11.4.0"), 10, "clang 14.0");
    commit_upload(parse_results_file(priv), store, "2024-01-01T00:00:00Z");
}

Outcome filtering_protocol() {
    Store store;
    seed_store(store);
    add_extra_fixtures(store);
    Checker check;
    std::size_t states = 0;
    const AccessContext viewers[] = {AccessContext::anonymous(),
                                     {Role::Contributor, "a", "alice"},
                                     {Role::Contributor, "b", "bob"},
                                     AccessContext::admin()};
    for (const AccessContext& viewer : viewers) {
        for (const FilterSelection& s : testing::reachable_selections(store, viewer)) {
            ++states;
            const OptionSet o = store.list_options(s, viewer);
            if (o.step == SelectionStep::Complete) {
                check.expect(!store.query(s, viewer).empty(), "complete selection with no data");
            } else {
                check.expect(!o.values.empty(), "dead end at step " + std::string(to_string(o.step)));
            }
        }
    }
    return {check.failures == 0 && states > 50,
            check.failures ? check.summary()
                           : std::to_string(states) + " reachable states over 4 viewers, no dead ends"};
}

json snapshot(const Store& store) {
    return store.read([](const StoreView& v) {
        return json{{"categories", v.list<Category>()},   {"problems", v.list<Problem>()},
                    {"approaches", v.list<Approach>()},   {"machines", v.list<Machine>()},
                    {"environments", v.list<Environment>()}, {"configurations", v.list<Configuration>()},
                    {"results", v.results()}};
    });
}

Outcome ingest_round_trip() {
    std::vector<std::pair<std::string, std::string>> fixtures;
    for (const EmbeddedFile& f : seed_upload_files()) fixtures.emplace_back(std::string(f.name), std::string(f.content));
    fixtures.emplace_back("examples/student_upload.txt", read_file(kSource / "data" / "examples" / "student_upload.txt"));

    Store store;
    store.put(seed_machine(1));
    store.put(seed_machine(2));
    Checker check;
    std::size_t measurements = 0;
    auto commit_all = [&] {
        std::vector<CommitResult> out;
        for (const auto& [name, text] : fixtures) out.push_back(commit_upload(parse_results_file(text), store, "2024-01-01T00:00:00Z"));
        return out;
    };
    const std::vector<CommitResult> first = commit_all();
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const ResultUpload u = parse_results_file(fixtures[i].second);
        using Tuple = std::tuple<std::int64_t, int, TimingKind, int, double>;
        std::multiset<Tuple> want, got;
        for (const Measurement& m : u.measurements) {
            want.insert({m.problem_size, m.thread_count, m.timing_kind, m.run_index, m.elapsed_seconds});
        }
        for (TimingKind kind : u.manifest.timing_kinds) {
            FilterSelection s;
            s.category_id = first[i].category;
            s.problem_id = first[i].problem;
            s.memory_model = u.manifest.memory_model;
            s.basis = Dimension::Approach;
            s.basis_instance_ids = {first[i].approach};
            s.fixed_choices = {{Dimension::Machine, first[i].machine}, {Dimension::Environment, first[i].environment}};
            s.timing_kind = kind;
            for (const QueryRow& row : store.query(s, AccessContext::admin(), DataScope{u.manifest.contributor, false})) {
                for (const TimingSample& t : row.record.runs(kind)->samples) {
                    got.insert({row.configuration.problem_size, row.configuration.thread_count, kind, t.run_index,
                                t.elapsed_seconds});
                }
            }
        }
        measurements += want.size();
        check.expect(want == got, fixtures[i].first + ": queried multiset differs");
    }
    const json before = snapshot(store);
    const std::vector<CommitResult> second = commit_all();
    for (std::size_t i = 0; i < second.size(); ++i) {
        check.expect(second[i].created.empty() && second[i].updated.empty(), fixtures[i].first + ": re-commit created data");
        check.expect(second[i].configurations == first[i].configurations, fixtures[i].first + ": ids changed");
    }
    check.expect(snapshot(store) == before, "re-commit changed the store");
    return {check.failures == 0, check.failures ? check.summary()
                                                : std::to_string(fixtures.size()) + " fixtures, " +
                                                      std::to_string(measurements) +
                                                      " measurements round-trip exactly; re-commit is a no-op"};
}

Outcome probe_parsing() {
    struct Expect {
        int index;
        const char* model;
        std::int64_t l3;
        double bandwidth;
    };
    Checker check;
    for (const Expect& e : {Expect{1, "E5-2620", 20480, 59.0}, Expect{2, "i5-4590", 6144, 25.6}}) {
        const std::string stem = "machine" + std::to_string(e.index);
        const MachineFacts lscpu = parse_lscpu(read_file(kSource / "data" / "probes" / (stem + ".lscpu")));
        const MachineFacts cpuinfo = parse_proc_cpuinfo(read_file(kSource / "data" / "probes" / (stem + ".cpuinfo")));
        for (const MachineFacts* f : {&lscpu, &cpuinfo}) {
            const std::string src(to_string(f->source_probe));
            check.expect(f->cpu_model && f->cpu_model->find(e.model) != std::string::npos, stem + " " + src + " cpu_model");
            check.expect(f->l3_kb == e.l3, stem + " " + src + " l3_kb");
        }
        MachineOverrides o;
        o.label = "Machine " + std::to_string(e.index);
        o.fields.max_memory_bandwidth_gbps = e.bandwidth;
        const Machine m = merge_machine_facts({lscpu, cpuinfo}, o);
        check.expect(m.cpu_model.find(e.model) != std::string::npos && m.l3_kb == e.l3, stem + " merged");
        check.expect(m.max_memory_bandwidth_gbps == e.bandwidth, stem + " bandwidth override");
    }
    return {check.failures == 0, check.failures ? check.summary()
                                                : "E5-2620/20480 KB/59 GB/s and i5-4590/6144 KB/25.6 GB/s from lscpu "
                                                  "and cpuinfo"};
}

Outcome report_structure(const Store& store) {
    const ComparisonDataset d =
        resolve_comparison(store, approach_selection(store, seed_ids(store).m1), AccessContext::anonymous());
    const std::vector<std::string> titles = {"Basic Description", "Complexity analysis", "Curve based analysis",
                                             "Further detailed analysis", "Additional analysis"};
    AnswerSet nasty;
    nasty.author = "R&D_#1 100% \\";
    for (const QuestionSpec& q : default_template().questions) {
        if (q.answer_kind != AnswerKind::Numeric) nasty.answers[q.id] = "# % & _ \\ {x} ^ ~ $ \\input{x} %end";
    }
    Checker check;
    for (const AnswerSet* a : {static_cast<const AnswerSet*>(&nasty), static_cast<const AnswerSet*>(nullptr)}) {
        const ReportBundle b = generate_report(d, a ? *a : AnswerSet{});
        std::vector<std::string> seen;
        static const std::regex section(R"(\\section\{([^}]*)\})");
        for (auto it = std::sregex_iterator(b.document.begin(), b.document.end(), section); it != std::sregex_iterator(); ++it) {
            seen.push_back((*it)[1]);
        }
        check.expect(seen == titles, "section list differs");
        std::size_t figures = 0;
        for (auto pos = b.document.find("\\begin{figure}"); pos != std::string::npos;
             pos = b.document.find("\\begin{figure}", pos + 1)) {
            ++figures;
        }
        check.expect(figures == 4, std::to_string(figures) + " figure environments");
        const auto errors = testing::latex_errors(b.document);
        check.expect(errors.empty(), errors.empty() ? "" : "LaTeX check: " + errors.front());
    }
    return {check.failures == 0,
            check.failures ? check.summary()
                           : "5 sections in order, 4 figures, LaTeX check clean with # % & _ \\ answers and with none"};
}

Outcome api_equivalence(Store& store) {
    const Service api(store, TokenTable::parse("tok CONTRIBUTOR alice\n"));
    Checker check;
    int compared = 0;
    auto same = [&](const ApiRequest& r, const std::string& expected, const std::string& what) {
        ++compared;
        const ApiResponse resp = api.handle(r);
        check.expect(resp.status == 200 && resp.body == expected, what + " (status " + std::to_string(resp.status) + ")");
    };
    auto get = [](std::string path, std::map<std::string, std::string> q = {}) {
        return ApiRequest{"GET", std::move(path), std::move(q), {}, {}};
    };
    auto post = [](std::string path, std::string body) { return ApiRequest{"POST", std::move(path), {}, {}, std::move(body)}; };
    const AccessContext anon = AccessContext::anonymous();

    same(get("/healthz"), json{{"status", "ok"}}.dump(), "/healthz");
    same(get("/categories"), json(store.list<Category>()).dump(), "/categories");
    same(get("/machines"), json(store.list<Machine>()).dump(), "/machines");
    same(get("/environments"), json(store.list<Environment>()).dump(), "/environments");
    store.read([&](const StoreView& v) {
        for (const Category& c : v.list<Category>()) same(get("/problems", {{"category", to_string(c.id)}}), json(v.problems_of(c.id)).dump(), "/problems");
        for (const Problem& p : v.list<Problem>()) same(get("/approaches", {{"problem", to_string(p.id)}}), json(v.approaches_of(p.id)).dump(), "/approaches");
        return 0;
    });
    for (const FilterSelection& s : testing::reachable_selections(store, anon)) {
        same(post("/options", json(s).dump()), json(store.list_options(s, anon)).dump(), "/options");
    }
    const SeedIds ids = seed_ids(store);
    std::vector<FilterSelection> selections = {approach_selection(store, ids.m1), approach_selection(store, ids.m2)};
    store.read([&](const StoreView& v) {
        for (EntityId a : {ids.a1, ids.a2}) {
            selections.push_back(select_pair(v, Dimension::Machine, {ids.m1, ids.m2},
                                             {{Dimension::Approach, a}, {Dimension::Environment, ids.gcc7}}));
        }
        return 0;
    });
    for (const FilterSelection& s : selections) {
        const ComparisonDataset d = resolve_comparison(store, s, anon);
        same(post("/compare", json{{"selection", s}}.dump()), export_series(d, ExportFormat::Document), "/compare");
        for (MetricKind k : kAllMetricKinds) {
            same(get("/plots", {{"selection", json(s).dump()}, {"metric", std::string(to_string(k))}}),
                 render_plot(d.of(k), default_plot_config(k)), "/plots");
            same(get("/plot-config", {{"metric", std::string(to_string(k))}}), to_json_value(default_plot_config(k)).dump(),
                 "/plot-config");
        }
    }
    const AnswerSet answers = parse_answers(read_file(kSource / "data" / "examples" / "answers.json"));
    const ComparisonDataset d0 = resolve_comparison(store, selections[0], anon);
    same(post("/reports", json{{"selection", selections[0]}, {"answers", to_json_value(answers)}}.dump()),
         archive_bundle(generate_report(d0, answers)), "/reports");
    same(post("/reports/validate", json{{"answers", to_json_value(answers)}}.dump()),
         to_json_value(validate_answers(answers, default_template())).dump(), "/reports/validate");
    same(get("/report-template"), to_json_value(default_template()).dump(), "/report-template");

    // Uploads mutate, so they run against two fresh seeded stores: one via HTTP, one direct.
    {
        Store served, direct;
        seed_store(served);
        seed_store(direct);
        ServiceOptions o;
        o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
        const Service writer(served, TokenTable::parse("tok CONTRIBUTOR alice\n"), o);
        const std::string upload = read_file(kSource / "data" / "examples" / "student_upload.txt");
        ApiRequest r{"POST", "/uploads", {}, {{"authorization", "Bearer tok"}}, upload};
        ++compared;
        const ApiResponse resp = writer.handle(r);
        const CommitResult expect = commit_upload(parse_results_file(upload), direct, "2024-01-01T00:00:00Z");
        check.expect(resp.status == 200 && resp.body == to_json_value(expect).dump(), "/uploads");
        check.expect(writer.handle(ApiRequest{"POST", "/uploads", {}, {}, upload}).status == 401, "/uploads anonymous");
        check.expect(snapshot(served) == snapshot(direct), "/uploads store state");
    }

    // Golden determinism.
    std::vector<MetricSeries> p4;
    for (const MetricSeries& s : d0.of(MetricKind::Speedup)) {
        if (s.thread_count == 4) p4.push_back(s);
    }
    const std::string svg = render_plot(p4, default_plot_config(MetricKind::Speedup));
    check.expect(svg == render_plot(p4, default_plot_config(MetricKind::Speedup)), "render_plot repeatable");
    check.expect(svg == read_file(kSource / "tests" / "golden" / "speedup_p4.svg"), "render_plot golden");
    const ReportBundle b = generate_report(d0, answers);
    check.expect(b.document == read_file(kSource / "tests" / "golden" / "report.tex"), "generate_report golden");
    check.expect(archive_bundle(b) == archive_bundle(generate_report(d0, answers)), "generate_report repeatable");

    return {check.failures == 0, check.failures ? check.summary()
                                                : std::to_string(compared) +
                                                      " API responses byte-equal to library calls over 14 "
                                                      "routes; plot and report goldens match"};
}

}  // namespace

int main() {
    Store seeded;
    seed_store(seeded);

    struct Criterion {
        const char* name;
        double budget_ms;  // 0: no time limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"metric-identities", 1000, metric_identities},
        {"hand-oracle", 1000, hand_oracle},
        {"seed-shape", 0, [&] { return seed_shape(seeded); }},
        {"filtering-protocol", 5000, filtering_protocol},
        {"ingest-round-trip", 0, ingest_round_trip},
        {"probe-parsing", 0, probe_parsing},
        {"report-structure", 0, [&] { return report_structure(seeded); }},
        {"api-library-equivalence", 0, [&] { return api_equivalence(seeded); }},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::string timing;
        char buf[64];
        if (c.budget_ms > 0) {
            std::snprintf(buf, sizeof buf, "%.0f ms, budget %.0f ms", ms, c.budget_ms);
            if (ms >= c.budget_ms) {
                o.pass = false;
                o.detail += "; over time budget";
            }
        } else {
            std::snprintf(buf, sizeof buf, "%.0f ms", ms);
        }
        timing = buf;
        std::printf("%s %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), timing.c_str());
        failed += !o.pass;
    }
    std::fflush(stdout);
    return failed ? 1 : 0;
}
