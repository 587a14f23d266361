#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "scalelab/error.hpp"
#include "scalelab/ingest.hpp"
#include "text_util.hpp"

namespace scalelab {

namespace {

[[noreturn]] void probe_error(const std::string& message) {
    throw Error(ErrorCode::ProbeFormat, message);
}

/// "32K", "20480K", "256 KiB", "20 MiB (1 instance)", "1.5 MiB (2 instances)" -> KB per instance.
std::int64_t parse_cache_kb(std::string_view key, std::string_view value) {
    static const std::regex re(R"(^([0-9]+(?:\.[0-9]+)?)\s*([KMG])(?:i?B)?(?:\s*\((\d+) instances?\))?$)",
                               std::regex::icase);
    const std::string v(text::trim(value));
    std::smatch m;
    if (!std::regex_match(v, m, re)) probe_error("cannot read cache size for '" + std::string(key) + "': '" + v + "'");
    const double amount = std::stod(m[1].str());
    const char unit = static_cast<char>(std::toupper(static_cast<unsigned char>(m[2].str()[0])));
    double kb = amount * (unit == 'K' ? 1.0 : unit == 'M' ? 1024.0 : 1024.0 * 1024.0);
    if (m[3].matched) {
        const int instances = std::stoi(m[3].str());
        if (instances < 1) probe_error("bad instance count for '" + std::string(key) + "'");
        kb /= instances;
    }
    const auto rounded = static_cast<std::int64_t>(std::llround(kb));
    if (rounded <= 0) probe_error("cache size for '" + std::string(key) + "' must be positive");
    return rounded;
}

int parse_count(std::string_view key, std::string_view value) {
    auto n = text::parse_number<int>(text::trim(value));
    if (!n || *n < 1) probe_error("'" + std::string(key) + "' is not a positive integer: '" + std::string(value) + "'");
    return *n;
}

/// Nominal clock from model strings such as "... CPU E5-2620 v3 @ 2.40GHz".
std::optional<double> clock_from_model(std::string_view model) {
    static const std::regex re(R"(@\s*([0-9]+(?:\.[0-9]+)?)\s*GHz)", std::regex::icase);
    const std::string s(model);
    std::smatch m;
    if (!std::regex_search(s, m, re)) return std::nullopt;
    return std::stod(m[1].str());
}

struct KeyValue {
    std::string key;
    std::string value;
};

std::optional<KeyValue> split_key_value(std::string_view line) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    return KeyValue{std::string(text::trim(line.substr(0, colon))), std::string(text::trim(line.substr(colon + 1)))};
}

}  // namespace

std::string_view to_string(ProbeSource s) {
    switch (s) {
        case ProbeSource::Lscpu: return "LSCPU";
        case ProbeSource::ProcCpuinfo: return "PROC_CPUINFO";
        case ProbeSource::Manual: return "MANUAL";
    }
    return "MANUAL";
}

nlohmann::json to_json_value(const MachineFacts& f) {
    nlohmann::json j{{"source_probe", to_string(f.source_probe)}};
    auto put = [&](const char* key, const auto& opt) {
        if (opt) j[key] = *opt;
    };
    put("cpu_model", f.cpu_model);
    put("base_clock_ghz", f.base_clock_ghz);
    put("physical_cores", f.physical_cores);
    put("logical_cpus", f.logical_cpus);
    put("l1_kb", f.l1_kb);
    put("l2_kb", f.l2_kb);
    put("l3_kb", f.l3_kb);
    put("vendor", f.vendor);
    return j;
}

MachineFacts parse_lscpu(std::string_view text) {
    MachineFacts facts;
    facts.source_probe = ProbeSource::Lscpu;
    facts.raw = std::string(text);
    std::optional<int> cores_per_socket, sockets;
    bool known = false;

    for (std::string_view line : text::lines(text)) {
        auto kv = split_key_value(line);
        if (!kv) continue;
        const std::string& k = kv->key;
        const std::string& v = kv->value;
        if (k == "Model name") {
            facts.cpu_model = v;
            facts.base_clock_ghz = clock_from_model(v);
        } else if (k == "CPU(s)") {
            facts.logical_cpus = parse_count(k, v);
        } else if (k == "Core(s) per socket") {
            cores_per_socket = parse_count(k, v);
        } else if (k == "Socket(s)") {
            sockets = parse_count(k, v);
        } else if (k == "Vendor ID") {
            facts.vendor = v;
        } else if (k == "L1d cache") {
            facts.l1_kb = parse_cache_kb(k, v);
        } else if (k == "L2 cache") {
            facts.l2_kb = parse_cache_kb(k, v);
        } else if (k == "L3 cache") {
            facts.l3_kb = parse_cache_kb(k, v);
        } else if (k == "Thread(s) per core") {
            parse_count(k, v);
        } else {
            continue;
        }
        known = true;
    }
    if (!known) probe_error("no recognizable lscpu fields");
    if (cores_per_socket) facts.physical_cores = *cores_per_socket * sockets.value_or(1);
    return facts;
}

MachineFacts parse_proc_cpuinfo(std::string_view text) {
    MachineFacts facts;
    facts.source_probe = ProbeSource::ProcCpuinfo;
    facts.raw = std::string(text);

    int stanzas = 0;
    std::set<std::string> physical_ids;
    std::optional<int> cores_per_package;
    bool known = false;

    for (std::string_view line : text::lines(text)) {
        if (text::trim(line).empty()) {
            continue;
        }
        auto kv = split_key_value(line);
        if (!kv) continue;
        const std::string& k = kv->key;
        const std::string& v = kv->value;
        if (k == "processor") {
            if (!text::parse_number<int>(v)) probe_error("'processor' is not an integer: '" + v + "'");
            ++stanzas;
            known = true;
            continue;
        }
        // Everything but the processor count comes from the first stanza.
        const bool first = stanzas <= 1;
        if (k == "physical id") {
            physical_ids.insert(v);
        } else if (!first) {
            continue;
        } else if (k == "model name") {
            facts.cpu_model = v;
            facts.base_clock_ghz = clock_from_model(v);
        } else if (k == "vendor_id") {
            facts.vendor = v;
        } else if (k == "cpu cores") {
            cores_per_package = parse_count(k, v);
        } else if (k == "cache size") {
            // Reported cache is the last-level cache.
            facts.l3_kb = parse_cache_kb(k, v);
        } else {
            continue;
        }
        known = true;
    }
    if (!known) probe_error("no recognizable /proc/cpuinfo fields");
    if (stanzas > 0) facts.logical_cpus = stanzas;
    if (cores_per_package) {
        facts.physical_cores = *cores_per_package * std::max<int>(1, static_cast<int>(physical_ids.size()));
    }
    return facts;
}

std::string parse_uname(std::string_view text) {
    const auto all = text::lines(text);
    if (all.empty() || text::trim(all.front()).empty()) probe_error("empty probe output");
    std::string first(all.front());
    if (!first.empty() && first.back() == '\r') first.pop_back();
    return first;
}

std::string CompilerInfo::name_version() const {
    if (version) return name + " " + *version;
    return first_line;
}

CompilerInfo parse_compiler_version(std::string_view text) {
    CompilerInfo info;
    info.first_line = parse_uname(text);
    const std::string_view first = text::trim(info.first_line);
    info.name = std::string(first.substr(0, first.find_first_of(" \t")));
    // The last dotted token on the line is the release for gcc, clang and icc banners.
    static const std::regex re(R"((?:^|[\s(])(\d+\.\d+(?:\.\d+)*)(?=$|[\s)]))");
    const std::string s(first);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
        info.version = (*it)[1].str();
    }
    return info;
}

namespace {

template <class T>
std::string describe(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else {
        return nlohmann::json(v).dump();
    }
}

/// Picks override, else the agreed probe value; disagreement without an override is an error.
template <class T>
std::optional<T> merge_field(const char* name, const std::vector<MachineFacts>& facts,
                             std::optional<T> MachineFacts::*member, const std::optional<T>& override_value) {
    if (override_value) return override_value;
    std::optional<T> chosen;
    std::string chosen_source;
    for (const MachineFacts& f : facts) {
        const auto& v = f.*member;
        if (!v) continue;
        if (!chosen) {
            chosen = v;
            chosen_source = std::string(to_string(f.source_probe));
        } else if (*chosen != *v) {
            throw Error(ErrorCode::MergeConflict,
                        std::string("conflicting values for ") + name + ": '" + describe(*chosen) + "' vs '" +
                            describe(*v) + "'",
                        {{"field", name},
                         {"values", {describe(*chosen), describe(*v)}},
                         {"sources", {chosen_source, to_string(f.source_probe)}}});
        }
    }
    return chosen;
}

std::string probe_key(ProbeSource s) {
    switch (s) {
        case ProbeSource::Lscpu: return "lscpu";
        case ProbeSource::ProcCpuinfo: return "cpuinfo";
        case ProbeSource::Manual: return "manual";
    }
    return "manual";
}

}  // namespace

Machine merge_machine_facts(const std::vector<MachineFacts>& facts, const MachineOverrides& overrides) {
    if (facts.empty()) throw Error(ErrorCode::ValidationError, "merge needs at least one set of machine facts");
    const MachineFields& o = overrides.fields;
    Machine m;
    m.label = overrides.label;
    auto cpu = merge_field("cpu_model", facts, &MachineFacts::cpu_model, o.cpu_model);
    auto clock = merge_field("base_clock_ghz", facts, &MachineFacts::base_clock_ghz, o.base_clock_ghz);
    auto cores = merge_field("physical_cores", facts, &MachineFacts::physical_cores, o.physical_cores);
    m.logical_cpus = merge_field("logical_cpus", facts, &MachineFacts::logical_cpus, o.logical_cpus);
    m.l1_kb = merge_field("l1_kb", facts, &MachineFacts::l1_kb, o.l1_kb);
    m.l2_kb = merge_field("l2_kb", facts, &MachineFacts::l2_kb, o.l2_kb);
    m.l3_kb = merge_field("l3_kb", facts, &MachineFacts::l3_kb, o.l3_kb);
    merge_field("vendor", facts, &MachineFacts::vendor, std::optional<std::string>{});
    m.max_memory_bandwidth_gbps = o.max_memory_bandwidth_gbps;
    m.vendor_spec_url = o.vendor_spec_url;

    auto missing = [](const char* field) {
        throw Error(ErrorCode::ValidationError, std::string("merged machine has no ") + field, {{"field", field}});
    };
    if (m.label.empty()) missing("label");
    if (!cpu) missing("cpu_model");
    if (!clock) missing("base_clock_ghz");
    if (!cores) missing("physical_cores");
    m.cpu_model = *cpu;
    m.base_clock_ghz = *clock;
    m.physical_cores = *cores;

    for (const MachineFacts& f : facts) {
        if (f.raw.empty()) continue;
        std::string key = probe_key(f.source_probe);
        for (int n = 2; m.raw_probe_blobs.count(key); ++n) key = probe_key(f.source_probe) + "." + std::to_string(n);
        m.raw_probe_blobs[key] = f.raw;
    }
    return m;
}

}  // namespace scalelab
