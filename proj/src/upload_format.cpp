#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <tuple>

#include "scalelab/error.hpp"
#include "scalelab/ingest.hpp"
#include "text_util.hpp"

namespace scalelab {

namespace {

constexpr std::string_view kMeasurementHeader = "problem_size,thread_count,timing_kind,run_index,elapsed_seconds";

[[noreturn]] void manifest_error(const std::string& field, const std::string& message, std::size_t line = 0) {
    nlohmann::json detail{{"field", field}};
    if (line) detail["line"] = line;
    throw Error(ErrorCode::ManifestError, message, detail);
}

[[noreturn]] void row_error(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::RowError, "line " + std::to_string(line) + ": " + message, {{"line", line}});
}

std::string unescape(std::string_view raw, std::size_t line, const std::string& key) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '\\') {
            out.push_back(raw[i]);
            continue;
        }
        if (i + 1 == raw.size()) manifest_error(key, "dangling backslash", line);
        const char next = raw[++i];
        if (next == 'n') {
            out.push_back('\n');
        } else if (next == '\\') {
            out.push_back('\\');
        } else {
            manifest_error(key, std::string("unknown escape \\") + next, line);
        }
    }
    return out;
}

std::string escape(std::string_view value) {
    std::string out;
    for (char c : value) {
        if (c == '\\') {
            out += "\\\\";
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

template <class T>
T manifest_number(const std::string& key, const std::string& value, std::size_t line) {
    auto parsed = text::parse_number<T>(value);
    if (!parsed) manifest_error(key, "'" + key + "' is not a number: '" + value + "'", line);
    return *parsed;
}

const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys = {
        "category",        "problem",        "approach.title",        "machine.label", "environment.os",
        "environment.compiler", "environment.framework", "memory_model", "timing_kinds", "contributor",
        "visibility"};
    return keys;
}

const std::vector<std::string>& optional_keys() {
    static const std::vector<std::string> keys = {
        "approach.description", "recorded_at",      "machine.cpu_model",   "machine.base_clock_ghz",
        "machine.physical_cores", "machine.logical_cpus", "machine.l1_kb", "machine.l2_kb",
        "machine.l3_kb",        "machine.max_memory_bandwidth_gbps", "machine.vendor_spec_url"};
    return keys;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

bool MachineFields::empty() const {
    return *this == MachineFields{};
}

ResultUpload parse_results_file(std::string_view content) {
    enum class Section { None, Manifest, Measurements };
    Section section = Section::None;
    bool header_seen = false;
    std::map<std::string, std::pair<std::string, std::size_t>> values;
    ResultUpload upload;
    std::set<std::tuple<std::int64_t, int, TimingKind, int>> keys;
    std::vector<std::size_t> row_lines;
    bool manifest_done = false;

    auto finish_manifest = [&] {
        for (const std::string& key : required_keys()) {
            if (!values.count(key)) manifest_error(key, "manifest is missing '" + key + "'");
        }
        auto get = [&](const std::string& key) { return values.at(key).first; };
        auto line_of = [&](const std::string& key) { return values.at(key).second; };
        UploadManifest& m = upload.manifest;
        m.category = get("category");
        m.problem = get("problem");
        m.approach_title = get("approach.title");
        m.machine_label = get("machine.label");
        m.environment_os = get("environment.os");
        m.environment_compiler = get("environment.compiler");
        m.environment_framework = get("environment.framework");
        m.contributor = get("contributor");
        for (const std::string& key : required_keys()) {
            if (get(key).empty()) manifest_error(key, "'" + key + "' must not be empty", line_of(key));
        }
        try {
            m.memory_model = parse_memory_model(get("memory_model"));
        } catch (const Error&) {
            manifest_error("memory_model", "memory_model must be shared or distributed", line_of("memory_model"));
        }
        try {
            m.visibility = parse_visibility(get("visibility"));
        } catch (const Error&) {
            manifest_error("visibility", "visibility must be public, course, student or private", line_of("visibility"));
        }
        for (std::string_view kind : text::split(get("timing_kinds"), ',')) {
            const std::string k(text::trim(kind));
            TimingKind parsed;
            if (k == "ALG") {
                parsed = TimingKind::Alg;
            } else if (k == "E2E") {
                parsed = TimingKind::E2E;
            } else {
                manifest_error("timing_kinds", "unknown timing kind '" + k + "'", line_of("timing_kinds"));
            }
            if (std::find(m.timing_kinds.begin(), m.timing_kinds.end(), parsed) != m.timing_kinds.end()) {
                manifest_error("timing_kinds", "timing kind listed twice", line_of("timing_kinds"));
            }
            m.timing_kinds.push_back(parsed);
        }
        if (values.count("approach.description")) m.approach_description = get("approach.description");
        if (values.count("recorded_at")) m.recorded_at = get("recorded_at");
        auto opt = [&](const char* key) -> std::optional<std::pair<std::string, std::size_t>> {
            auto it = values.find(key);
            if (it == values.end()) return std::nullopt;
            return it->second;
        };
        MachineFields& f = m.machine;
        if (auto v = opt("machine.cpu_model")) f.cpu_model = v->first;
        if (auto v = opt("machine.vendor_spec_url")) f.vendor_spec_url = v->first;
        if (auto v = opt("machine.base_clock_ghz")) f.base_clock_ghz = manifest_number<double>("machine.base_clock_ghz", v->first, v->second);
        if (auto v = opt("machine.physical_cores")) f.physical_cores = manifest_number<int>("machine.physical_cores", v->first, v->second);
        if (auto v = opt("machine.logical_cpus")) f.logical_cpus = manifest_number<int>("machine.logical_cpus", v->first, v->second);
        if (auto v = opt("machine.l1_kb")) f.l1_kb = manifest_number<std::int64_t>("machine.l1_kb", v->first, v->second);
        if (auto v = opt("machine.l2_kb")) f.l2_kb = manifest_number<std::int64_t>("machine.l2_kb", v->first, v->second);
        if (auto v = opt("machine.l3_kb")) f.l3_kb = manifest_number<std::int64_t>("machine.l3_kb", v->first, v->second);
        if (auto v = opt("machine.max_memory_bandwidth_gbps"))
            f.max_memory_bandwidth_gbps = manifest_number<double>("machine.max_memory_bandwidth_gbps", v->first, v->second);
        manifest_done = true;
    };

    std::size_t line_no = 0;
    for (std::string_view raw_line : text::lines(content)) {
        ++line_no;
        const std::string_view line = text::trim(raw_line);
        if (line.empty() || line.front() == '#') continue;

        if (line == "[manifest]") {
            if (section != Section::None) manifest_error("[manifest]", "manifest section must come first", line_no);
            section = Section::Manifest;
            continue;
        }
        if (line == "[measurements]") {
            if (section != Section::Manifest) manifest_error("[manifest]", "manifest section missing", line_no);
            finish_manifest();
            section = Section::Measurements;
            continue;
        }

        if (section == Section::None) manifest_error("[manifest]", "content before the manifest section", line_no);

        if (section == Section::Manifest) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) manifest_error("", "expected 'key = value'", line_no);
            const std::string key(text::trim(line.substr(0, eq)));
            const bool known = std::find(required_keys().begin(), required_keys().end(), key) != required_keys().end() ||
                               std::find(optional_keys().begin(), optional_keys().end(), key) != optional_keys().end();
            if (!known) manifest_error(key, "unknown manifest key '" + key + "'", line_no);
            if (values.count(key)) manifest_error(key, "manifest key '" + key + "' given twice", line_no);
            values[key] = {unescape(text::trim(line.substr(eq + 1)), line_no, key), line_no};
            continue;
        }

        if (!header_seen) {
            if (line != kMeasurementHeader) row_error(line_no, "expected header '" + std::string(kMeasurementHeader) + "'");
            header_seen = true;
            continue;
        }

        const auto fields = text::split(line, ',');
        if (fields.size() != 5) row_error(line_no, "expected 5 comma-separated fields");
        Measurement m;
        auto size = text::parse_number<std::int64_t>(text::trim(fields[0]));
        auto threads = text::parse_number<int>(text::trim(fields[1]));
        auto run = text::parse_number<int>(text::trim(fields[3]));
        auto elapsed = text::parse_number<double>(text::trim(fields[4]));
        const std::string_view kind = text::trim(fields[2]);
        if (!size || *size < 1) row_error(line_no, "problem_size must be a positive integer");
        if (!threads || *threads < 1) row_error(line_no, "thread_count must be an integer >= 1");
        if (!run || *run < 1) row_error(line_no, "run_index must be an integer >= 1");
        if (!elapsed || !(*elapsed > 0.0) || !std::isfinite(*elapsed)) row_error(line_no, "elapsed_seconds must be a positive number");
        if (kind == "ALG") {
            m.timing_kind = TimingKind::Alg;
        } else if (kind == "E2E") {
            m.timing_kind = TimingKind::E2E;
        } else {
            row_error(line_no, "timing_kind must be ALG or E2E");
        }
        const auto& declared = upload.manifest.timing_kinds;
        if (std::find(declared.begin(), declared.end(), m.timing_kind) == declared.end()) {
            manifest_error("timing_kinds", "row uses timing kind " + std::string(to_string(m.timing_kind)) +
                                               " which the manifest does not list", line_no);
        }
        m.problem_size = *size;
        m.thread_count = *threads;
        m.run_index = *run;
        m.elapsed_seconds = *elapsed;
        if (!keys.insert({m.problem_size, m.thread_count, m.timing_kind, m.run_index}).second) {
            throw Error(ErrorCode::DuplicateRow, "line " + std::to_string(line_no) + ": duplicate measurement",
                        {{"line", line_no}});
        }
        upload.measurements.push_back(m);
    }

    if (section == Section::None) manifest_error("[manifest]", "manifest section missing");
    if (!manifest_done) finish_manifest();
    if (upload.measurements.empty()) {
        throw Error(ErrorCode::ValidationError, "upload contains no measurements");
    }
    return upload;
}

std::string serialize_results_file(const ResultUpload& upload) {
    const UploadManifest& m = upload.manifest;
    std::ostringstream out;
    out << "[manifest]\n";
    auto kv = [&](std::string_view key, std::string_view value) { out << key << " = " << escape(value) << "\n"; };
    kv("category", m.category);
    kv("problem", m.problem);
    kv("approach.title", m.approach_title);
    if (!m.approach_description.empty()) kv("approach.description", m.approach_description);
    kv("machine.label", m.machine_label);
    const MachineFields& f = m.machine;
    if (f.cpu_model) kv("machine.cpu_model", *f.cpu_model);
    if (f.base_clock_ghz) kv("machine.base_clock_ghz", format_double(*f.base_clock_ghz));
    if (f.physical_cores) kv("machine.physical_cores", std::to_string(*f.physical_cores));
    if (f.logical_cpus) kv("machine.logical_cpus", std::to_string(*f.logical_cpus));
    if (f.l1_kb) kv("machine.l1_kb", std::to_string(*f.l1_kb));
    if (f.l2_kb) kv("machine.l2_kb", std::to_string(*f.l2_kb));
    if (f.l3_kb) kv("machine.l3_kb", std::to_string(*f.l3_kb));
    if (f.max_memory_bandwidth_gbps) kv("machine.max_memory_bandwidth_gbps", format_double(*f.max_memory_bandwidth_gbps));
    if (f.vendor_spec_url) kv("machine.vendor_spec_url", *f.vendor_spec_url);
    kv("environment.os", m.environment_os);
    kv("environment.compiler", m.environment_compiler);
    kv("environment.framework", m.environment_framework);
    kv("memory_model", m.memory_model == MemoryModel::Shared ? "shared" : "distributed");
    std::string kinds;
    for (TimingKind k : m.timing_kinds) {
        if (!kinds.empty()) kinds += ",";
        kinds += to_string(k);
    }
    kv("timing_kinds", kinds);
    kv("contributor", m.contributor);
    std::string vis(to_string(m.visibility));
    std::transform(vis.begin(), vis.end(), vis.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    kv("visibility", vis);
    if (m.recorded_at) kv("recorded_at", *m.recorded_at);
    out << "\n[measurements]\n" << kMeasurementHeader << "\n";
    for (const Measurement& r : upload.measurements) {
        out << r.problem_size << ',' << r.thread_count << ',' << to_string(r.timing_kind) << ',' << r.run_index << ','
            << format_double(r.elapsed_seconds) << "\n";
    }
    return out.str();
}

}  // namespace scalelab
