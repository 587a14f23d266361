#include "scalelab/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "scalelab/api.hpp"
#include "scalelab/compare.hpp"
#include "scalelab/http_server.hpp"
#include "scalelab/ingest.hpp"
#include "scalelab/report.hpp"
#include "scalelab/seed.hpp"
#include "text_util.hpp"

namespace scalelab {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out.flush()) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::unique_ptr<Store> open_store(const std::string& root, std::ostream& err) {
    std::vector<CorruptRecord> corrupt;
    auto store = Store::open(root, &corrupt);
    for (const CorruptRecord& c : corrupt) err << "warning: skipped corrupt record " << c.file.string() << ": " << c.message << "\n";
    return store;
}

/// Selection given by names on the command line; resolved against the store.
struct SelectionFlags {
    std::string file;
    std::string category, problem, memory_model = "SHARED", basis, timing = "ALG";
    std::vector<std::string> instances;
    std::vector<std::string> fixes;  // DIMENSION=name

    void add_to(CLI::App* cmd) {
        cmd->add_option("--selection-file", file, "Serialized FilterSelection (JSON)");
        cmd->add_option("--category", category, "Problem category name");
        cmd->add_option("--problem", problem, "Problem name");
        cmd->add_option("--memory-model", memory_model, "SHARED or DISTRIBUTED")->capture_default_str();
        cmd->add_option("--basis", basis, "APPROACH, MACHINE or ENVIRONMENT");
        cmd->add_option("--instance,--instances", instances, "Basis instance name (repeat or comma-separate)")
            ->delimiter(',');
        cmd->add_option("--fix", fixes, "DIMENSION=name for each non-basis dimension");
        cmd->add_option("--timing", timing, "ALG or E2E")->capture_default_str();
    }

    std::string upper(std::string s) const {
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }

    FilterSelection resolve(const Store& store) const {
        if (!file.empty()) {
            if (!category.empty() || !problem.empty() || !basis.empty() || !instances.empty() || !fixes.empty()) {
                throw Error(ErrorCode::ValidationError, "--selection-file cannot be combined with selection flags");
            }
            try {
                return json::parse(read_input(file)).get<FilterSelection>();
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::ValidationError, file + ": " + e.what());
            }
        }
        if (category.empty() || problem.empty() || basis.empty() || instances.empty()) {
            throw Error(ErrorCode::ValidationError,
                        "give --selection-file or all of --category, --problem, --basis, --instance, --fix");
        }
        return store.read([&](const StoreView& v) {
            FilterSelection s;
            const auto cat = v.find_category(category);
            if (!cat) throw Error(ErrorCode::NotFound, "no category '" + category + "'");
            const auto prob = v.find_problem(cat->id, problem);
            if (!prob) throw Error(ErrorCode::NotFound, "no problem '" + problem + "' in " + category);
            s.category_id = cat->id;
            s.problem_id = prob->id;
            s.memory_model = parse_memory_model(upper(memory_model));
            s.basis = parse_dimension(upper(basis));
            s.timing_kind = parse_timing_kind(upper(timing));
            auto lookup = [&](Dimension d, const std::string& name) -> EntityId {
                switch (d) {
                    case Dimension::Approach:
                        if (auto a = v.find_approach(prob->id, name)) return a->id;
                        break;
                    case Dimension::Machine:
                        if (auto m = v.find_machine(name)) return m->id;
                        break;
                    case Dimension::Environment:
                        // "os / compiler / framework", as environments are displayed
                        for (const Environment& e : v.list<Environment>()) {
                            if (display_name(e) == name) return e.id;
                        }
                        break;
                }
                throw Error(ErrorCode::NotFound, "no " + std::string(to_string(d)) + " named '" + name + "'");
            };
            for (const std::string& name : instances) s.basis_instance_ids.push_back(lookup(*s.basis, std::string(text::trim(name))));
            for (const std::string& fix : fixes) {
                const auto eq = fix.find('=');
                if (eq == std::string::npos) throw Error(ErrorCode::ValidationError, "--fix expects DIMENSION=name");
                const Dimension d = parse_dimension(upper(std::string(text::trim(fix.substr(0, eq)))));
                s.fixed_choices[d] = lookup(d, std::string(text::trim(fix.substr(eq + 1))));
            }
            return s;
        });
    }
};

/// Whose data a command reads. The operator sees everything; --contributor narrows it.
struct ScopeFlags {
    std::string contributor;
    bool include_public = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--contributor", contributor, "Only this contributor's uploads");
        cmd->add_flag("--include-public", include_public, "With --contributor: also PUBLIC data");
    }
    DataScope scope() const {
        if (contributor.empty()) {
            if (include_public) throw Error(ErrorCode::ValidationError, "--include-public needs --contributor");
            return {};
        }
        return {contributor, include_public};
    }
};

std::string figure_name(MetricKind k) {
    switch (k) {
        case MetricKind::Time: return "time";
        case MetricKind::Speedup: return "speedup";
        case MetricKind::Efficiency: return "efficiency";
        case MetricKind::KarpFlatt: return "karp_flatt";
    }
    return "plot";
}

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void on_stop_signal(int) {
    if (HttpServer* s = g_server.load()) s->stop();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmark archive, comparison plots and lab reports for parallel programs", "scalelab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string storage_root;
    auto add_root = [&](CLI::App* cmd) {
        cmd->add_option("--storage-root", storage_root, "Archive directory")
            ->envname("SCALELAB_STORAGE_ROOT")
            ->required();
    };

    std::function<void()> action;

    auto* seed = app.add_subcommand("seed", "Load the shipped seed dataset into the archive");
    add_root(seed);
    seed->callback([&] {
        action = [&] {
            auto store = open_store(storage_root, err);
            const SeedResult r = seed_store(*store);
            json commits = json::array();
            for (const CommitResult& c : r.commits) commits.push_back(to_json_value(c));
            out << json{{"categories", r.categories}, {"machines", r.machines}, {"commits", commits}}.dump(2) << "\n";
        };
    });

    std::vector<std::string> ingest_files;
    std::string recorded_at;
    auto* ingest = app.add_subcommand("ingest", "Parse and commit result files");
    add_root(ingest);
    ingest->add_option("files", ingest_files, "Result files ('-' for standard input)")->required();
    ingest->add_option("--recorded-at", recorded_at, "Timestamp for files that carry none (default: now)");
    ingest->callback([&] {
        action = [&] {
            auto store = open_store(storage_root, err);
            const std::string fallback = recorded_at.empty() ? utc_timestamp_now() : recorded_at;
            for (const std::string& f : ingest_files) {
                ResultUpload upload;
                try {
                    upload = parse_results_file(read_input(f));
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::IoError) throw;
                    throw Error(e.code(), f + ": " + e.what(), e.detail());
                }
                out << to_json_value(commit_upload(upload, *store, fallback)).dump() << "\n";
            }
        };
    });

    std::string probe_kind, probe_file;
    auto* probe = app.add_subcommand("probe", "Parse captured probe output");
    probe->add_option("kind", probe_kind, "lscpu, cpuinfo, uname or cc")
        ->required()
        ->check(CLI::IsMember({"lscpu", "cpuinfo", "uname", "cc"}));
    probe->add_option("file", probe_file, "Captured output ('-' for standard input)")->required();
    probe->callback([&] {
        action = [&] {
            const std::string text = read_input(probe_file);
            json j;
            if (probe_kind == "lscpu") {
                j = to_json_value(parse_lscpu(text));
            } else if (probe_kind == "cpuinfo") {
                j = to_json_value(parse_proc_cpuinfo(text));
            } else if (probe_kind == "uname") {
                j = {{"os", parse_uname(text)}};
            } else {
                const CompilerInfo c = parse_compiler_version(text);
                j = {{"first_line", c.first_line},
                     {"name", c.name},
                     {"version", c.version ? json(*c.version) : json(nullptr)},
                     {"name_version", c.name_version()}};
            }
            out << j.dump(2) << "\n";
        };
    });

    SelectionFlags compare_sel;
    ScopeFlags compare_scope;
    std::vector<std::string> metrics;
    std::string out_dir, image_format = "SVG", config_file;
    auto* compare = app.add_subcommand("compare", "Render the metric plots and the ROWS export of a selection");
    add_root(compare);
    compare_sel.add_to(compare);
    compare_scope.add_to(compare);
    compare->add_option("--metric", metrics, "TIME, SPEEDUP, EFFICIENCY or KARP_FLATT (default: all four)")
        ->delimiter(',');
    compare->add_option("--format", image_format, "SVG or PDF")->capture_default_str();
    compare->add_option("--config", config_file, "Plot settings (JSON) applied to every metric");
    compare->add_option("--out", out_dir, "Output directory")->required();
    compare->callback([&] {
        action = [&] {
            auto store = open_store(storage_root, err);
            const FilterSelection s = compare_sel.resolve(*store);
            const ComparisonDataset d = resolve_comparison(*store, s, AccessContext::admin(), compare_scope.scope());
            std::vector<MetricKind> kinds;
            for (const std::string& m : metrics) kinds.push_back(parse_metric_kind(compare_sel.upper(m)));
            if (kinds.empty()) kinds.assign(std::begin(kAllMetricKinds), std::end(kAllMetricKinds));
            const json config = config_file.empty() ? json::object() : json::parse(read_input(config_file));
            const ImageFormat format = parse_image_format(compare_sel.upper(image_format));
            for (MetricKind k : kinds) {
                json c = config;
                c["metric_kind"] = to_string(k);
                PlotConfig pc = plot_config_from_json(c, k);
                pc.format = format;
                const fs::path file = fs::path(out_dir) / (figure_name(k) + (format == ImageFormat::Pdf ? ".pdf" : ".svg"));
                if (d.of(k).empty()) {
                    err << "note: no " << to_string(k) << " series (no parallel runs); skipped " << file.string() << "\n";
                    continue;
                }
                write_output(file, render_plot(d.of(k), pc));
                out << file.string() << "\n";
            }
            const fs::path rows = fs::path(out_dir) / "series.csv";
            write_output(rows, export_series(d, ExportFormat::Rows));
            out << rows.string() << "\n";
            const fs::path sel = fs::path(out_dir) / "selection.json";
            write_output(sel, json(s).dump(2) + "\n");
            out << sel.string() << "\n";
        };
    });

    SelectionFlags export_sel;
    ScopeFlags export_scope;
    std::string export_format = "ROWS", export_out;
    auto* exp = app.add_subcommand("export", "Write the comparison series as ROWS (CSV) or DOCUMENT (JSON)");
    add_root(exp);
    export_sel.add_to(exp);
    export_scope.add_to(exp);
    exp->add_option("--format", export_format, "ROWS or DOCUMENT")->capture_default_str();
    exp->add_option("--out", export_out, "Output file (default: standard output)");
    exp->callback([&] {
        action = [&] {
            auto store = open_store(storage_root, err);
            const FilterSelection s = export_sel.resolve(*store);
            const ComparisonDataset d = resolve_comparison(*store, s, AccessContext::admin(), export_scope.scope());
            const std::string f = export_sel.upper(export_format);
            if (f != "ROWS" && f != "DOCUMENT") throw Error(ErrorCode::ValidationError, "--format must be ROWS or DOCUMENT");
            const std::string text = export_series(d, f == "ROWS" ? ExportFormat::Rows : ExportFormat::Document);
            if (export_out.empty()) {
                out << text;
            } else {
                write_output(export_out, text);
            }
        };
    });

    SelectionFlags report_sel;
    ScopeFlags report_scope;
    std::string answers_file, template_file, report_dir, archive_file;
    auto* report = app.add_subcommand("report", "Generate a LaTeX report bundle");
    add_root(report);
    report_sel.add_to(report);
    report_scope.add_to(report);
    report->add_option("--answers-file", answers_file, "Answer set (JSON); omitted means all placeholders");
    report->add_option("--template", template_file, "Question template (JSON; default: built-in)");
    report->add_option("--out-dir", report_dir, "Directory for report.tex, figures/ and manifest.json");
    report->add_option("--archive", archive_file, "Also write the bundle as a tar archive");
    report->callback([&] {
        action = [&] {
            if (report_dir.empty() && archive_file.empty()) {
                throw Error(ErrorCode::ValidationError, "give --out-dir and/or --archive");
            }
            auto store = open_store(storage_root, err);
            const FilterSelection s = report_sel.resolve(*store);
            const ReportTemplate t = template_file.empty() ? default_template() : parse_template(read_input(template_file));
            const AnswerSet answers = answers_file.empty() ? AnswerSet{} : parse_answers(read_input(answers_file));
            const AnswerValidation v = validate_answers(answers, t);
            for (const std::string& id : v.unanswered) err << "note: unanswered question " << id << "\n";
            const ComparisonDataset d = resolve_comparison(*store, s, AccessContext::admin(), report_scope.scope());
            const ReportBundle b = generate_report(d, answers, t);
            if (!report_dir.empty()) {
                write_bundle(b, report_dir);
                for (const ArchiveEntry& f : b.files()) out << (fs::path(report_dir) / f.name).string() << "\n";
            }
            if (!archive_file.empty()) {
                write_output(archive_file, archive_bundle(b));
                out << archive_file << "\n";
            }
        };
    });

    std::string addr = "127.0.0.1:8080", token_file, static_dir;
    std::size_t max_body = 16 << 20;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    add_root(serve);
    serve->add_option("--addr", addr, "host:port to listen on (port 0 picks one)")->capture_default_str();
    serve->add_option("--token-file", token_file, "Bearer tokens: <token> <ROLE> <contributor> per line");
    serve->add_option("--static-dir", static_dir, "Built web UI to serve at /");
    serve->add_option("--max-body-bytes", max_body, "Request size cap")->capture_default_str();
    serve->callback([&] {
        action = [&] {
            const auto colon = addr.rfind(':');
            const auto port = colon == std::string::npos ? std::nullopt : text::parse_number<int>(addr.substr(colon + 1));
            if (!port || *port < 0 || *port > 65535) throw Error(ErrorCode::ValidationError, "--addr must be host:port");
            auto store = open_store(storage_root, err);
            ServiceOptions options;
            options.max_body_bytes = max_body;
            if (!static_dir.empty()) options.static_dir = fs::path(static_dir);
            const Service service(*store, token_file.empty() ? TokenTable{} : TokenTable::load(token_file), options);
            HttpServer server(service, max_body);
            const std::string host = addr.substr(0, colon);
            const int bound = server.bind(host, *port);
            if (bound < 0) throw Error(ErrorCode::IoError, "cannot listen on " + addr);
            g_server = &server;
            std::signal(SIGINT, on_stop_signal);
            std::signal(SIGTERM, on_stop_signal);
            out << "listening on http://" << host << ":" << bound << std::endl;
            server.run();
            g_server = nullptr;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }
    try {
        if (action) action();
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == ErrorCode::IoError ? kExitIo : kExitValidation;
    } catch (const json::exception& e) {
        err << "error: ValidationError: " << e.what() << "\n";
        return kExitValidation;
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace scalelab
