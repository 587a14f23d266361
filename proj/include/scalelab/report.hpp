#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalelab/archive.hpp"
#include "scalelab/compare.hpp"

namespace scalelab {

enum class ReportSection { BasicDescription, ComplexityAnalysis, CurveAnalysis, DetailedAnalysis, AdditionalAnalysis };

inline constexpr ReportSection kAllReportSections[] = {
    ReportSection::BasicDescription, ReportSection::ComplexityAnalysis, ReportSection::CurveAnalysis,
    ReportSection::DetailedAnalysis, ReportSection::AdditionalAnalysis};

std::string_view to_string(ReportSection s);  // BASIC_DESCRIPTION, ...
ReportSection parse_report_section(std::string_view text);
std::string_view section_title(ReportSection s);

enum class AnswerKind { Prose, BigO, Numeric };

std::string_view to_string(AnswerKind k);
AnswerKind parse_answer_kind(std::string_view text);

struct QuestionSpec {
    std::string id;
    ReportSection section = ReportSection::BasicDescription;
    std::string prompt;
    AnswerKind answer_kind = AnswerKind::Prose;
    /// Curve questions name the plot they discuss; the figure is placed right above them.
    std::optional<MetricKind> metric;

    friend bool operator==(const QuestionSpec&, const QuestionSpec&) = default;
};

struct ReportTemplate {
    std::string title;
    std::vector<QuestionSpec> questions;

    friend bool operator==(const ReportTemplate&, const ReportTemplate&) = default;
};

/// Built-in lab questions, grouped in the five report sections.
ReportTemplate default_template();

/// Template files are JSON (see docs/FORMATS.md). Throws ValidationError on unknown keys,
/// duplicate ids, or metrics attached to non-curve questions.
ReportTemplate parse_template(std::string_view text);
nlohmann::json to_json_value(const ReportTemplate& t);

struct AnswerSet {
    std::string author;
    std::string course;
    std::map<std::string, std::string> answers;

    friend bool operator==(const AnswerSet&, const AnswerSet&) = default;
};

AnswerSet parse_answers(std::string_view text);
AnswerSet answers_from_json(const nlohmann::json& j);
nlohmann::json to_json_value(const AnswerSet& a);

struct NumericFailure {
    std::string id;
    std::string answer;

    friend bool operator==(const NumericFailure&, const NumericFailure&) = default;
};

struct AnswerValidation {
    std::vector<std::string> unknown_ids;
    std::vector<std::string> unanswered;  // template order
    std::vector<NumericFailure> numeric_failures;

    /// Unanswered questions do not block generation; they get a placeholder.
    bool ok() const { return unknown_ids.empty() && numeric_failures.empty(); }
};

AnswerValidation validate_answers(const AnswerSet& answers, const ReportTemplate& tmpl);
nlohmann::json to_json_value(const AnswerValidation& v);

struct ReportOptions {
    /// Per-family plot settings; the image format is always PDF so pdflatex can include it.
    std::map<MetricKind, PlotConfig> plot_configs;
};

/// The settings a report uses for a family unless overridden.
PlotConfig report_plot_config(MetricKind kind);

struct ReportBundle {
    std::string document;             // report.tex
    std::vector<ArchiveEntry> assets; // figures/<metric>.pdf
    nlohmann::json manifest;          // manifest.json

    /// report.tex, the figures and manifest.json, in that order.
    std::vector<ArchiveEntry> files() const;
};

inline constexpr std::string_view kNoAnswerPlaceholder = "\\emph{[No answer provided.]}";

ReportBundle generate_report(const ComparisonDataset& dataset, const AnswerSet& answers,
                             const ReportTemplate& tmpl = default_template(), const ReportOptions& options = {});

/// Plain text to LaTeX: special characters escaped, code points LaTeX's utf8 input
/// encoding may not know replaced by '?', blank lines kept as paragraph breaks.
std::string latex_escape(std::string_view text);

void write_bundle(const ReportBundle& bundle, const std::string& directory);
std::string archive_bundle(const ReportBundle& bundle);

}  // namespace scalelab
