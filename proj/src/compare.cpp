#include <algorithm>
#include <charconv>
#include <sstream>

#include "scalelab/compare.hpp"
#include "scalelab/error.hpp"

namespace scalelab {

using json = nlohmann::json;

namespace {

const std::vector<MetricSeries> kNoSeries;

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

EntityId instance_of(const Configuration& c, Dimension basis) {
    switch (basis) {
        case Dimension::Approach: return c.approach_id;
        case Dimension::Machine: return c.machine_id;
        case Dimension::Environment: return c.environment_id;
    }
    return {};
}

}  // namespace

const std::vector<MetricSeries>& ComparisonDataset::of(MetricKind kind) const {
    auto it = series.find(kind);
    return it == series.end() ? kNoSeries : it->second;
}

std::size_t ComparisonDataset::point_count() const {
    std::size_t n = 0;
    for (const auto& [kind, list] : series) {
        for (const MetricSeries& s : list) n += s.points.size();
    }
    return n;
}

ComparisonDataset resolve_comparison(const StoreView& view, const FilterSelection& selection,
                                     const AccessContext& viewer, const DataScope& scope) {
    const std::vector<QueryRow> rows = view.query(selection, viewer, scope);
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyComparison, "no visible results match the selection", {{"selection", selection}});
    }

    // Pool runs that describe the same measurement point, keeping query order.
    struct Pooled {
        SummaryEntry entry;
        std::vector<double> seconds;
    };
    std::vector<Pooled> pooled;
    std::map<std::tuple<EntityId, int, std::int64_t>, std::size_t> index;
    for (const QueryRow& row : rows) {
        const Configuration& c = row.configuration;
        const EntityId instance = instance_of(c, *selection.basis);
        auto [it, fresh] = index.try_emplace({instance, c.thread_count, c.problem_size}, pooled.size());
        if (fresh) {
            Pooled p;
            p.entry.instance = view.dimension_label(*selection.basis, instance);
            p.entry.thread_count = c.thread_count;
            p.entry.key = BaselineKey{display_name(view.get<Problem>(c.problem_id)),
                                      display_name(view.get<Approach>(c.approach_id)),
                                      display_name(view.get<Machine>(c.machine_id)),
                                      display_name(view.get<Environment>(c.environment_id)), c.problem_size};
            pooled.push_back(std::move(p));
        }
        for (const TimingSample& s : row.record.runs(selection.timing_kind)->samples) {
            pooled[it->second].seconds.push_back(s.elapsed_seconds);
        }
    }

    ComparisonDataset out;
    out.selection = selection;
    std::vector<SummaryEntry> entries;
    entries.reserve(pooled.size());
    for (Pooled& p : pooled) {
        p.entry.summary = summarize(p.seconds);
        if (p.entry.thread_count == 1) out.baseline_map[p.entry.key] = p.entry.summary;
        entries.push_back(std::move(p.entry));
    }
    for (MetricKind kind : kAllMetricKinds) out.series[kind] = build_metric_series(entries, kind, out.baseline_map);

    // Curves show the parallel runs; the serial runs live on as baselines. A selection
    // with serial runs only keeps its serial time curve.
    auto& time = out.series[MetricKind::Time];
    const bool any_parallel =
        std::any_of(time.begin(), time.end(), [](const MetricSeries& s) { return s.thread_count > 1; });
    if (any_parallel) std::erase_if(time, [](const MetricSeries& s) { return s.thread_count == 1; });
    return out;
}

ComparisonDataset resolve_comparison(const Store& store, const FilterSelection& selection,
                                     const AccessContext& viewer, const DataScope& scope) {
    return store.read([&](const StoreView& v) { return resolve_comparison(v, selection, viewer, scope); });
}

std::string export_series(const ComparisonDataset& dataset, ExportFormat format) {
    if (dataset.point_count() == 0) throw Error(ErrorCode::EmptyComparison, "nothing to export");
    if (format == ExportFormat::Document) return json(dataset).dump(2) + "\n";

    std::ostringstream out;
    out << kRowsHeader << "\n";
    for (MetricKind kind : kAllMetricKinds) {
        for (const MetricSeries& s : dataset.of(kind)) {
            for (const MetricPoint& p : s.points) {
                out << to_string(kind) << ',' << csv_field(s.label) << ',' << csv_field(s.instance) << ','
                    << p.thread_count << ',' << p.problem_size << ',' << format_double(p.value) << "\n";
            }
        }
    }
    return out.str();
}

ComparisonDataset import_document(std::string_view document) {
    try {
        return json::parse(document).get<ComparisonDataset>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationError, std::string("malformed comparison document: ") + e.what());
    }
}

void to_json(json& j, const MetricPoint& p) {
    j = json{{"problem_size", p.problem_size}, {"thread_count", p.thread_count}, {"value", p.value}};
    if (p.superlinear) j["superlinear"] = true;
}

void from_json(const json& j, MetricPoint& p) {
    p.problem_size = j.at("problem_size").get<std::int64_t>();
    p.thread_count = j.at("thread_count").get<int>();
    p.value = j.at("value").get<double>();
    p.superlinear = j.value("superlinear", false);
}

void to_json(json& j, const MetricSeries& s) {
    j = json{{"label", s.label},
             {"instance", s.instance},
             {"thread_count", s.thread_count},
             {"metric_kind", to_string(s.metric_kind)},
             {"points", s.points}};
}

void from_json(const json& j, MetricSeries& s) {
    s.label = j.at("label").get<std::string>();
    s.instance = j.at("instance").get<std::string>();
    s.thread_count = j.at("thread_count").get<int>();
    s.metric_kind = parse_metric_kind(j.at("metric_kind").get<std::string>());
    s.points = j.at("points").get<std::vector<MetricPoint>>();
    for (MetricPoint& p : s.points) p.metric_kind = s.metric_kind;
}

void to_json(json& j, const ComparisonDataset& d) {
    json series = json::object();
    for (MetricKind kind : kAllMetricKinds) series[std::string(to_string(kind))] = d.of(kind);
    json baselines = json::array();
    for (const auto& [key, summary] : d.baseline_map) {
        baselines.push_back({{"problem", key.problem},
                             {"approach", key.approach},
                             {"machine", key.machine},
                             {"environment", key.environment},
                             {"problem_size", key.problem_size},
                             {"summary", summary}});
    }
    j = json{{"selection", d.selection}, {"series", std::move(series)}, {"baselines", std::move(baselines)}};
}

void from_json(const json& j, ComparisonDataset& d) {
    d = ComparisonDataset{};
    d.selection = j.at("selection").get<FilterSelection>();
    for (const auto& [name, list] : j.at("series").items()) {
        d.series[parse_metric_kind(name)] = list.get<std::vector<MetricSeries>>();
    }
    for (MetricKind kind : kAllMetricKinds) d.series.try_emplace(kind);
    for (const json& b : j.at("baselines")) {
        BaselineKey key{b.at("problem").get<std::string>(), b.at("approach").get<std::string>(),
                        b.at("machine").get<std::string>(), b.at("environment").get<std::string>(),
                        b.at("problem_size").get<std::int64_t>()};
        d.baseline_map[key] = b.at("summary").get<TimingSummary>();
    }
}

}  // namespace scalelab
