#include "scalelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scalelab/error.hpp"

namespace scalelab {

std::string_view to_string(TimingKind kind) {
    return kind == TimingKind::Alg ? "ALG" : "E2E";
}

std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Time: return "TIME";
        case MetricKind::Speedup: return "SPEEDUP";
        case MetricKind::Efficiency: return "EFFICIENCY";
        case MetricKind::KarpFlatt: return "KARP_FLATT";
    }
    return "TIME";
}

TimingKind parse_timing_kind(std::string_view text) {
    if (text == "ALG") return TimingKind::Alg;
    if (text == "E2E") return TimingKind::E2E;
    throw Error(ErrorCode::ValidationError, "unknown timing kind '" + std::string(text) + "'");
}

MetricKind parse_metric_kind(std::string_view text) {
    for (MetricKind kind : kAllMetricKinds) {
        if (text == to_string(kind)) return kind;
    }
    throw Error(ErrorCode::ValidationError, "unknown metric kind '" + std::string(text) + "'");
}

void RunSet::validate() const {
    if (samples.empty()) throw Error(ErrorCode::EmptyInput, "run set has no samples");
    for (const TimingSample& s : samples) {
        if (s.timing_kind != timing_kind) {
            throw Error(ErrorCode::ValidationError, "run set mixes timing kinds");
        }
        if (!(s.elapsed_seconds > 0.0) || !std::isfinite(s.elapsed_seconds)) {
            throw Error(ErrorCode::InvalidTiming, "elapsed time must be positive",
                        {{"run_index", s.run_index}, {"elapsed_seconds", s.elapsed_seconds}});
        }
        if (s.run_index < 1) throw Error(ErrorCode::ValidationError, "run index must be >= 1");
    }
}

TimingSummary summarize(std::span<const double> seconds) {
    if (seconds.empty()) throw Error(ErrorCode::EmptyInput, "cannot summarize an empty run set");

    std::vector<double> sorted(seconds.begin(), seconds.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    TimingSummary out;
    out.count = n;
    out.min = sorted.front();
    out.max = sorted.back();
    out.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    // Summing the sorted values keeps the result independent of sample order.
    out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    double sq = 0.0;
    for (double v : sorted) sq += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(sq / static_cast<double>(n));
    // Rounding in the mean can push it a ulp outside [min, max] for constant input.
    out.mean = std::clamp(out.mean, out.min, out.max);
    return out;
}

TimingSummary summarize(const RunSet& runs) {
    runs.validate();
    std::vector<double> seconds;
    seconds.reserve(runs.samples.size());
    for (const TimingSample& s : runs.samples) seconds.push_back(s.elapsed_seconds);
    return summarize(seconds);
}

double speedup(const TimingSummary& serial, const TimingSummary& parallel) {
    if (!(serial.mean > 0.0) || !(parallel.mean > 0.0)) {
        throw Error(ErrorCode::InvalidTiming, "speedup needs positive mean times",
                    {{"serial_mean", serial.mean}, {"parallel_mean", parallel.mean}});
    }
    return serial.mean / parallel.mean;
}

double efficiency(double speedup_value, int thread_count) {
    if (thread_count < 1) {
        throw Error(ErrorCode::InvalidThreadCount, "thread count must be >= 1", {{"thread_count", thread_count}});
    }
    if (!(speedup_value > 0.0)) throw Error(ErrorCode::InvalidTiming, "speedup must be positive");
    return speedup_value / static_cast<double>(thread_count);
}

KarpFlatt karp_flatt(double speedup_value, int thread_count) {
    if (thread_count <= 1) {
        throw Error(ErrorCode::UndefinedMetric, "Karp-Flatt metric needs at least two threads",
                    {{"thread_count", thread_count}});
    }
    if (!(speedup_value > 0.0)) throw Error(ErrorCode::InvalidTiming, "speedup must be positive");
    const double p = static_cast<double>(thread_count);
    // (1/s - 1/p) / (1 - 1/p), multiplied through by p to avoid cancellation at s == p.
    const double fraction = (p / speedup_value - 1.0) / (p - 1.0);
    return {fraction, speedup_value > p};
}

std::string series_label(std::string_view instance, int thread_count) {
    return std::string(instance) + " (p=" + std::to_string(thread_count) + ")";
}

std::vector<MetricSeries> build_metric_series(std::span<const SummaryEntry> result_set, MetricKind metric_kind,
                                              const BaselineMap& serial_baselines) {
    // Curves keep the order in which instances first appear, then ascend by thread count.
    std::vector<std::string> instance_order;
    std::map<std::pair<std::size_t, int>, MetricSeries> by_curve;

    for (const SummaryEntry& entry : result_set) {
        if (entry.thread_count < 1) {
            throw Error(ErrorCode::InvalidThreadCount, "thread count must be >= 1");
        }
        const bool relative = metric_kind != MetricKind::Time;
        if (relative && entry.thread_count == 1) continue;

        auto it = std::find(instance_order.begin(), instance_order.end(), entry.instance);
        const std::size_t rank = static_cast<std::size_t>(it - instance_order.begin());
        if (it == instance_order.end()) instance_order.push_back(entry.instance);

        MetricPoint point;
        point.problem_size = entry.key.problem_size;
        point.thread_count = entry.thread_count;
        point.metric_kind = metric_kind;

        if (!relative) {
            point.value = entry.summary.mean;
        } else {
            auto base = serial_baselines.find(entry.key);
            if (base == serial_baselines.end()) {
                throw Error(ErrorCode::MissingBaseline, "no serial baseline for " + entry.instance + " at size " +
                                                            std::to_string(entry.key.problem_size),
                            {{"instance", entry.instance},
                             {"problem", entry.key.problem},
                             {"approach", entry.key.approach},
                             {"machine", entry.key.machine},
                             {"environment", entry.key.environment},
                             {"problem_size", entry.key.problem_size},
                             {"thread_count", entry.thread_count}});
            }
            const double s = speedup(base->second, entry.summary);
            if (metric_kind == MetricKind::Speedup) {
                point.value = s;
            } else if (metric_kind == MetricKind::Efficiency) {
                point.value = efficiency(s, entry.thread_count);
            } else {
                const KarpFlatt kf = karp_flatt(s, entry.thread_count);
                point.value = kf.serial_fraction;
                point.superlinear = kf.superlinear;
            }
        }

        MetricSeries& series = by_curve[{rank, entry.thread_count}];
        if (series.points.empty()) {
            series.instance = entry.instance;
            series.thread_count = entry.thread_count;
            series.metric_kind = metric_kind;
            series.label = series_label(entry.instance, entry.thread_count);
        }
        series.points.push_back(point);
    }

    std::vector<MetricSeries> out;
    out.reserve(by_curve.size());
    for (auto& [key, series] : by_curve) {
        std::sort(series.points.begin(), series.points.end(),
                  [](const MetricPoint& a, const MetricPoint& b) { return a.problem_size < b.problem_size; });
        for (std::size_t i = 1; i < series.points.size(); ++i) {
            if (series.points[i].problem_size == series.points[i - 1].problem_size) {
                throw Error(ErrorCode::ValidationError,
                            "duplicate problem size " + std::to_string(series.points[i].problem_size) + " in series " +
                                series.label);
            }
        }
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace scalelab
