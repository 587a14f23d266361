#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scalelab/metrics.hpp"
#include "scalelab/selection.hpp"
#include "scalelab/store.hpp"

namespace scalelab {

struct ComparisonDataset {
    FilterSelection selection;
    /// Always holds all four metric kinds; a family may be empty when no parallel runs exist.
    std::map<MetricKind, std::vector<MetricSeries>> series;
    /// Serial summaries the relative metrics were computed from.
    BaselineMap baseline_map;

    const std::vector<MetricSeries>& of(MetricKind kind) const;
    std::size_t point_count() const;

    friend bool operator==(const ComparisonDataset&, const ComparisonDataset&) = default;
};

/// Runs the selection against the archive. Runs of the same configuration uploaded by
/// different contributors are pooled before summarizing.
ComparisonDataset resolve_comparison(const StoreView& view, const FilterSelection& selection,
                                     const AccessContext& viewer, const DataScope& scope = {});
ComparisonDataset resolve_comparison(const Store& store, const FilterSelection& selection,
                                     const AccessContext& viewer, const DataScope& scope = {});

enum class AxisScale { Linear, Log2, Log10 };
enum class ImageFormat { Svg, Pdf };

std::string_view to_string(AxisScale s);
AxisScale parse_axis_scale(std::string_view text);
std::string_view to_string(ImageFormat f);
ImageFormat parse_image_format(std::string_view text);

struct PlotConfig {
    MetricKind metric_kind = MetricKind::Time;
    AxisScale x_scale = AxisScale::Log2;
    AxisScale y_scale = AxisScale::Linear;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<std::string> hidden_series;  // by series label
    ImageFormat format = ImageFormat::Svg;

    friend bool operator==(const PlotConfig&, const PlotConfig&) = default;
};

/// Title and axis labels for a metric family.
PlotConfig default_plot_config(MetricKind kind);

/// Keys absent from `j` keep the defaults for j["metric_kind"] (or `kind`).
PlotConfig plot_config_from_json(const nlohmann::json& j, MetricKind kind = MetricKind::Time);
nlohmann::json to_json_value(const PlotConfig& c);

/// Deterministic vector image: identical inputs give byte-identical output.
std::string render_plot(std::span<const MetricSeries> series, const PlotConfig& config);

enum class ExportFormat { Rows, Document };

inline constexpr std::string_view kRowsHeader = "metric,series,instance,thread_count,problem_size,value";

std::string export_series(const ComparisonDataset& dataset, ExportFormat format);
ComparisonDataset import_document(std::string_view document);

void to_json(nlohmann::json& j, const MetricPoint& p);
void from_json(const nlohmann::json& j, MetricPoint& p);
void to_json(nlohmann::json& j, const MetricSeries& s);
void from_json(const nlohmann::json& j, MetricSeries& s);
void to_json(nlohmann::json& j, const ComparisonDataset& d);
void from_json(const nlohmann::json& j, ComparisonDataset& d);

}  // namespace scalelab
