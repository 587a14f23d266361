#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace scalelab {

enum class TimingKind { Alg, E2E };

enum class MetricKind { Time, Speedup, Efficiency, KarpFlatt };

inline constexpr MetricKind kAllMetricKinds[] = {MetricKind::Time, MetricKind::Speedup, MetricKind::Efficiency,
                                                 MetricKind::KarpFlatt};

std::string_view to_string(TimingKind kind);
std::string_view to_string(MetricKind kind);
TimingKind parse_timing_kind(std::string_view text);
MetricKind parse_metric_kind(std::string_view text);

struct TimingSample {
    double elapsed_seconds = 0.0;
    TimingKind timing_kind = TimingKind::Alg;
    int run_index = 1;

    friend bool operator==(const TimingSample&, const TimingSample&) = default;
};

/// Repeated timings of one configuration, all of the same kind.
struct RunSet {
    TimingKind timing_kind = TimingKind::Alg;
    std::vector<TimingSample> samples;

    /// Throws EmptyInput, InvalidTiming or ValidationError when the invariants do not hold.
    void validate() const;

    friend bool operator==(const RunSet&, const RunSet&) = default;
};

struct TimingSummary {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  // population
    std::size_t count = 0;

    friend bool operator==(const TimingSummary&, const TimingSummary&) = default;
};

TimingSummary summarize(std::span<const double> seconds);
TimingSummary summarize(const RunSet& runs);

double speedup(const TimingSummary& serial, const TimingSummary& parallel);
double efficiency(double speedup_value, int thread_count);

struct KarpFlatt {
    double serial_fraction = 0.0;
    /// Set when speedup exceeds the thread count, which makes the fraction negative.
    bool superlinear = false;
};

KarpFlatt karp_flatt(double speedup_value, int thread_count);

struct MetricPoint {
    std::int64_t problem_size = 0;
    int thread_count = 1;
    double value = 0.0;
    MetricKind metric_kind = MetricKind::Time;
    bool superlinear = false;

    friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

struct MetricSeries {
    std::string label;
    std::string instance;
    int thread_count = 1;
    MetricKind metric_kind = MetricKind::Time;
    std::vector<MetricPoint> points;

    friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

/// Identifies the serial run a parallel measurement is compared against.
struct BaselineKey {
    std::string problem;
    std::string approach;
    std::string machine;
    std::string environment;
    std::int64_t problem_size = 0;

    friend auto operator<=>(const BaselineKey&, const BaselineKey&) = default;
};

/// One summarized measurement of a configuration, labeled by the instance it belongs to.
struct SummaryEntry {
    std::string instance;
    BaselineKey key;
    int thread_count = 1;
    TimingSummary summary;
};

using BaselineMap = std::map<BaselineKey, TimingSummary>;

std::string series_label(std::string_view instance, int thread_count);

/// Builds one curve per (instance, thread count). TIME curves include the serial runs;
/// the relative metrics only cover thread counts of two or more.
std::vector<MetricSeries> build_metric_series(std::span<const SummaryEntry> result_set, MetricKind metric_kind,
                                              const BaselineMap& serial_baselines);

}  // namespace scalelab
