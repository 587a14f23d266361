#include "scalelab/report.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "scalelab/error.hpp"
#include "text_util.hpp"

namespace scalelab {

using json = nlohmann::json;

std::string_view to_string(ReportSection s) {
    switch (s) {
        case ReportSection::BasicDescription: return "BASIC_DESCRIPTION";
        case ReportSection::ComplexityAnalysis: return "COMPLEXITY_ANALYSIS";
        case ReportSection::CurveAnalysis: return "CURVE_ANALYSIS";
        case ReportSection::DetailedAnalysis: return "DETAILED_ANALYSIS";
        case ReportSection::AdditionalAnalysis: return "ADDITIONAL_ANALYSIS";
    }
    return "?";
}

ReportSection parse_report_section(std::string_view text) {
    for (ReportSection s : kAllReportSections) {
        if (to_string(s) == text) return s;
    }
    throw Error(ErrorCode::ValidationError, "unknown report section '" + std::string(text) + "'");
}

std::string_view section_title(ReportSection s) {
    switch (s) {
        case ReportSection::BasicDescription: return "Basic Description";
        case ReportSection::ComplexityAnalysis: return "Complexity analysis";
        case ReportSection::CurveAnalysis: return "Curve based analysis";
        case ReportSection::DetailedAnalysis: return "Further detailed analysis";
        case ReportSection::AdditionalAnalysis: return "Additional analysis";
    }
    return "?";
}

std::string_view to_string(AnswerKind k) {
    switch (k) {
        case AnswerKind::Prose: return "PROSE";
        case AnswerKind::BigO: return "BIG_O";
        case AnswerKind::Numeric: return "NUMERIC";
    }
    return "?";
}

AnswerKind parse_answer_kind(std::string_view text) {
    for (AnswerKind k : {AnswerKind::Prose, AnswerKind::BigO, AnswerKind::Numeric}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorCode::ValidationError, "unknown answer kind '" + std::string(text) + "'");
}

// The wordings are our own; each section only comes with a one-line description of
// what its questions should cover.
ReportTemplate default_template() {
    using S = ReportSection;
    using K = AnswerKind;
    ReportTemplate t;
    t.title = "Parallel Performance Lab Report";
    t.questions = {
        {"basic.serial", S::BasicDescription,
         "Describe the serial implementation you used as the baseline.", K::Prose, {}},
        {"basic.parallel", S::BasicDescription,
         "Describe each parallel approach: how is the work divided among threads, and which constructs do you use?",
         K::Prose, {}},
        {"complexity.serial", S::ComplexityAnalysis,
         "What is the time complexity of the serial implementation?", K::BigO, {}},
        {"complexity.parallel", S::ComplexityAnalysis,
         "What is the time complexity of the parallel implementation with p threads?", K::BigO, {}},
        {"complexity.memory", S::ComplexityAnalysis,
         "Estimate the number of memory accesses and of arithmetic operations. Is the code compute bound or "
         "memory bound?",
         K::Prose, {}},
        {"complexity.theoretical_speedup", S::ComplexityAnalysis,
         "What speedup would you expect with 4 threads if overheads are ignored?", K::Numeric, {}},
        {"curve.time", S::CurveAnalysis,
         "Analyse the execution time plot. How does the time grow with the problem size for each series?",
         K::Prose, MetricKind::Time},
        {"curve.speedup", S::CurveAnalysis,
         "Analyse the speedup plot. From which problem size does the parallel version pay off, and where does "
         "the speedup level off?",
         K::Prose, MetricKind::Speedup},
        {"curve.efficiency", S::CurveAnalysis,
         "Analyse the efficiency plot. How well are the threads used as the problem grows?", K::Prose,
         MetricKind::Efficiency},
        {"curve.karp_flatt", S::CurveAnalysis,
         "Analyse the Karp-Flatt plot. What does the experimentally determined serial fraction say about the "
         "source of the overhead?",
         K::Prose, MetricKind::KarpFlatt},
        {"detailed.cache", S::DetailedAnalysis,
         "How do the cache hierarchy and cache coherence traffic affect your results?", K::Prose, {}},
        {"detailed.false_sharing", S::DetailedAnalysis,
         "Can false sharing occur in your implementation? Where, and how would you avoid it?", K::Prose, {}},
        {"detailed.granularity", S::DetailedAnalysis,
         "Discuss the granularity of the parallel tasks and the load balance between threads.", K::Prose, {}},
        {"additional.factors", S::AdditionalAnalysis,
         "Which other factors (compiler, operating system, input and output, machine load) influenced the "
         "measurements?",
         K::Prose, {}},
        {"additional.tradeoffs", S::AdditionalAnalysis,
         "What are the advantages and disadvantages of each approach?", K::Prose, {}},
        {"additional.difficulties", S::AdditionalAnalysis,
         "Which difficulties did you run into while implementing and measuring the approaches?", K::Prose, {}},
    };
    return t;
}

namespace {

constexpr std::string_view kTemplateFormat = "scalelab-report-template/1";
constexpr std::string_view kManifestFormat = "scalelab-report/1";

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, std::string(what) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::ValidationError, "unknown key '" + key + "' in " + std::string(what));
        }
    }
}

std::string string_field(const json& j, const char* key, std::string_view what) {
    if (!j.contains(key)) return {};
    if (!j[key].is_string()) {
        throw Error(ErrorCode::ValidationError, std::string(what) + "." + key + " must be a string");
    }
    return j[key].get<std::string>();
}

bool valid_id(std::string_view id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    });
}

void check_template(const ReportTemplate& t) {
    std::set<std::string> ids;
    for (const QuestionSpec& q : t.questions) {
        if (!valid_id(q.id)) throw Error(ErrorCode::ValidationError, "invalid question id '" + q.id + "'");
        if (!ids.insert(q.id).second) throw Error(ErrorCode::ValidationError, "duplicate question id '" + q.id + "'");
        if (text::trim(q.prompt).empty()) throw Error(ErrorCode::ValidationError, "question '" + q.id + "' has no prompt");
        if (q.metric && q.section != ReportSection::CurveAnalysis) {
            throw Error(ErrorCode::ValidationError, "question '" + q.id + "' names a metric outside CURVE_ANALYSIS");
        }
    }
}

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationError, "malformed " + std::string(what) + ": " + e.what());
    }
}

}  // namespace

ReportTemplate parse_template(std::string_view text) {
    const json j = parse_json(text, "report template");
    reject_unknown_keys(j, {"format", "title", "questions"}, "template");
    if (j.contains("format") && j["format"] != kTemplateFormat) {
        throw Error(ErrorCode::ValidationError, "unsupported template format " + j["format"].dump());
    }
    if (!j.contains("questions") || !j["questions"].is_array()) {
        throw Error(ErrorCode::ValidationError, "template needs a 'questions' array");
    }
    ReportTemplate t;
    t.title = j.contains("title") ? string_field(j, "title", "template") : default_template().title;
    for (const json& q : j["questions"]) {
        reject_unknown_keys(q, {"id", "section", "prompt", "answer_kind", "metric"}, "question");
        QuestionSpec spec;
        spec.id = string_field(q, "id", "question");
        spec.section = parse_report_section(string_field(q, "section", "question"));
        spec.prompt = string_field(q, "prompt", "question");
        spec.answer_kind = q.contains("answer_kind") ? parse_answer_kind(string_field(q, "answer_kind", "question"))
                                                     : AnswerKind::Prose;
        if (q.contains("metric") && !q["metric"].is_null()) {
            try {
                spec.metric = parse_metric_kind(string_field(q, "metric", "question"));
            } catch (const Error& e) {
                throw Error(ErrorCode::ValidationError, e.what());
            }
        }
        t.questions.push_back(std::move(spec));
    }
    check_template(t);
    return t;
}

json to_json_value(const ReportTemplate& t) {
    json questions = json::array();
    for (const QuestionSpec& q : t.questions) {
        json e{{"id", q.id},
               {"section", to_string(q.section)},
               {"prompt", q.prompt},
               {"answer_kind", to_string(q.answer_kind)}};
        if (q.metric) e["metric"] = to_string(*q.metric);
        questions.push_back(std::move(e));
    }
    return {{"format", kTemplateFormat}, {"title", t.title}, {"questions", std::move(questions)}};
}

AnswerSet answers_from_json(const json& j) {
    reject_unknown_keys(j, {"author", "course", "answers"}, "answer set");
    AnswerSet a;
    a.author = string_field(j, "author", "answer set");
    a.course = string_field(j, "course", "answer set");
    if (j.contains("answers")) {
        if (!j["answers"].is_object()) throw Error(ErrorCode::ValidationError, "'answers' must be an object");
        for (const auto& [id, value] : j["answers"].items()) {
            if (value.is_string()) {
                a.answers[id] = value.get<std::string>();
            } else if (value.is_number()) {
                a.answers[id] = value.dump();
            } else {
                throw Error(ErrorCode::ValidationError, "answer '" + id + "' must be a string or a number");
            }
        }
    }
    return a;
}

AnswerSet parse_answers(std::string_view text) { return answers_from_json(parse_json(text, "answer set")); }

json to_json_value(const AnswerSet& a) {
    return {{"author", a.author}, {"course", a.course}, {"answers", a.answers}};
}

AnswerValidation validate_answers(const AnswerSet& answers, const ReportTemplate& tmpl) {
    AnswerValidation v;
    std::map<std::string, const QuestionSpec*> by_id;
    for (const QuestionSpec& q : tmpl.questions) by_id[q.id] = &q;
    for (const auto& [id, text] : answers.answers) {
        if (!by_id.count(id)) v.unknown_ids.push_back(id);
    }
    for (const QuestionSpec& q : tmpl.questions) {
        auto it = answers.answers.find(q.id);
        const std::string_view text = it == answers.answers.end() ? std::string_view{} : text::trim(it->second);
        if (text.empty()) {
            v.unanswered.push_back(q.id);
        } else if (q.answer_kind == AnswerKind::Numeric && !text::parse_number<double>(text)) {
            v.numeric_failures.push_back({q.id, it->second});
        }
    }
    return v;
}

json to_json_value(const AnswerValidation& v) {
    json failures = json::array();
    for (const NumericFailure& f : v.numeric_failures) failures.push_back({{"id", f.id}, {"answer", f.answer}});
    return {{"ok", v.ok()}, {"unknown_ids", v.unknown_ids}, {"unanswered", v.unanswered},
            {"numeric_failures", std::move(failures)}};
}

namespace {

// Next code point of UTF-8 text, or nullopt for a malformed sequence (one byte consumed).
std::optional<char32_t> next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i++]);
    if (b0 < 0x80) return b0;
    int extra;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        return std::nullopt;
    }
    const std::size_t start = i;
    for (int k = 0; k < extra; ++k) {
        if (i >= s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            i = start;
            return std::nullopt;
        }
        cp = (cp << 6) | (static_cast<unsigned char>(s[i++]) & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    // Only Latin-1 reaches here.
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string escape_line(std::string_view line) {
    std::string out;
    std::size_t i = 0;
    while (i < line.size()) {
        const auto cp = next_code_point(line, i);
        if (!cp) {
            out += '?';
            continue;
        }
        switch (*cp) {
            case '\\': out += "\\textbackslash{}"; break;
            case '{': out += "\\{"; break;
            case '}': out += "\\}"; break;
            case '#': out += "\\#"; break;
            case '$': out += "\\$"; break;
            case '%': out += "\\%"; break;
            case '&': out += "\\&"; break;
            case '_': out += "\\_"; break;
            case '^': out += "\\textasciicircum{}"; break;
            case '~': out += "\\textasciitilde{}"; break;
            case '<': out += "\\textless{}"; break;
            case '>': out += "\\textgreater{}"; break;
            case '|': out += "\\textbar{}"; break;
            case '\t': out += ' '; break;
            case 0x2013: out += "--"; break;
            case 0x2014: out += "---"; break;
            case 0x2018: out += '`'; break;
            case 0x2019: out += '\''; break;
            case 0x201C: out += "``"; break;
            case 0x201D: out += "''"; break;
            default:
                if (*cp < 0x20 || *cp == 0x7F || (*cp >= 0x80 && *cp < 0xA0)) break;  // control characters
                if (*cp > 0xFF) {
                    out += '?';
                } else {
                    append_utf8(out, *cp);
                }
        }
    }
    return out;
}

std::string figure_stem(MetricKind kind) {
    switch (kind) {
        case MetricKind::Time: return "time";
        case MetricKind::Speedup: return "speedup";
        case MetricKind::Efficiency: return "efficiency";
        case MetricKind::KarpFlatt: return "karp_flatt";
    }
    return "plot";
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

template <class F>
std::vector<std::string> unique_in_order(const ComparisonDataset& d, F&& field) {
    std::vector<std::string> out;
    for (const auto& [key, summary] : d.baseline_map) {
        std::string v = field(key);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::string> instances_of(const ComparisonDataset& d) {
    std::vector<std::string> out;
    for (MetricKind kind : kAllMetricKinds) {
        for (const MetricSeries& s : d.of(kind)) {
            if (std::find(out.begin(), out.end(), s.instance) == out.end()) out.push_back(s.instance);
        }
    }
    return out;
}

std::string setup_block(const ComparisonDataset& d) {
    std::vector<std::string> items;
    const auto problems = unique_in_order(d, [](const BaselineKey& k) { return k.problem; });
    if (!problems.empty()) {
        std::string item = "Problem: " + join(problems, ", ");
        if (d.selection.memory_model) {
            item += d.selection.memory_model == MemoryModel::Shared ? " (shared memory)" : " (distributed memory)";
        }
        items.push_back(item);
    }
    const std::optional<Dimension> basis = d.selection.basis;
    auto basis_name = [](Dimension dim) {
        switch (dim) {
            case Dimension::Approach: return "Compared approaches";
            case Dimension::Machine: return "Compared machines";
            case Dimension::Environment: return "Compared environments";
        }
        return "Compared";
    };
    if (basis) items.push_back(std::string(basis_name(*basis)) + ": " + join(instances_of(d), ", "));
    auto fixed = [&](Dimension dim, std::string_view name, auto&& field) {
        if (basis == dim) return;
        const auto values = unique_in_order(d, field);
        if (!values.empty()) items.push_back(std::string(name) + ": " + join(values, ", "));
    };
    fixed(Dimension::Approach, "Approach", [](const BaselineKey& k) { return k.approach; });
    fixed(Dimension::Machine, "Machine", [](const BaselineKey& k) { return k.machine; });
    fixed(Dimension::Environment, "Environment", [](const BaselineKey& k) { return k.environment; });
    items.push_back(d.selection.timing_kind == TimingKind::Alg ? "Timing: algorithm only (ALG)"
                                                               : "Timing: end to end, including I/O (E2E)");

    std::set<std::int64_t> sizes;
    std::set<int> threads;
    for (MetricKind kind : kAllMetricKinds) {
        for (const MetricSeries& s : d.of(kind)) {
            threads.insert(s.thread_count);
            for (const MetricPoint& p : s.points) sizes.insert(p.problem_size);
        }
    }
    for (const auto& [key, summary] : d.baseline_map) {
        sizes.insert(key.problem_size);
        threads.insert(1);
    }
    if (!sizes.empty()) {
        std::vector<std::string> t;
        for (int p : threads) t.push_back(std::to_string(p));
        items.push_back("Problem sizes: " + std::to_string(*sizes.begin()) + " to " + std::to_string(*sizes.rbegin()) +
                        " (" + std::to_string(sizes.size()) + " sizes); threads: " + join(t, ", "));
    }

    std::string out = "\\noindent\\textbf{Setup.}\n\\begin{itemize}\n";
    for (const std::string& item : items) out += "  \\item " + latex_escape(item) + "\n";
    return out + "\\end{itemize}\n";
}

std::string render_answer(const QuestionSpec& q, const AnswerSet& answers) {
    auto it = answers.answers.find(q.id);
    if (it == answers.answers.end() || text::trim(it->second).empty()) return std::string(kNoAnswerPlaceholder);
    const std::string_view text = text::trim(it->second);
    switch (q.answer_kind) {
        case AnswerKind::BigO: return "\\texttt{" + latex_escape(text) + "}";
        case AnswerKind::Numeric: return latex_escape(text);
        case AnswerKind::Prose: break;
    }
    return latex_escape(text);
}

}  // namespace

std::string latex_escape(std::string_view text) {
    std::vector<std::string> paragraphs;
    std::string current;
    for (std::string_view line : text::lines(text)) {
        const std::string_view t = text::trim(line);
        if (t.empty()) {
            if (!current.empty()) paragraphs.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (!current.empty()) current += '\n';
        current += escape_line(t);
    }
    if (!current.empty()) paragraphs.push_back(std::move(current));
    return join(paragraphs, "\n\n");
}

PlotConfig report_plot_config(MetricKind kind) {
    PlotConfig c = default_plot_config(kind);
    // Times span several decades over the size range; a linear axis flattens the small sizes.
    if (kind == MetricKind::Time) c.y_scale = AxisScale::Log10;
    c.format = ImageFormat::Pdf;
    return c;
}

std::vector<ArchiveEntry> ReportBundle::files() const {
    std::vector<ArchiveEntry> out;
    out.push_back({"report.tex", document});
    out.insert(out.end(), assets.begin(), assets.end());
    out.push_back({"manifest.json", manifest.dump(2) + "\n"});
    return out;
}

ReportBundle generate_report(const ComparisonDataset& dataset, const AnswerSet& answers, const ReportTemplate& tmpl,
                             const ReportOptions& options) {
    check_template(tmpl);
    const AnswerValidation validation = validate_answers(answers, tmpl);
    if (!validation.ok()) {
        throw Error(ErrorCode::ValidationError, "answers do not match the report template", to_json_value(validation));
    }
    if (dataset.point_count() == 0) throw Error(ErrorCode::EmptyComparison, "the comparison dataset is empty");

    ReportBundle bundle;
    std::map<MetricKind, std::string> figures;
    json figure_manifest = json::array();
    const std::string timing = std::string(to_string(dataset.selection.timing_kind));
    const std::string instances = join(instances_of(dataset), ", ");
    for (MetricKind kind : kAllMetricKinds) {
        PlotConfig config = report_plot_config(kind);
        if (auto it = options.plot_configs.find(kind); it != options.plot_configs.end()) {
            config = it->second;
            config.metric_kind = kind;
            config.format = ImageFormat::Pdf;
        }
        const auto& series = dataset.of(kind);
        const std::string label = "fig:" + figure_stem(kind);
        std::string caption = latex_escape(config.title) + " (" + timing + " timing)";
        std::string fig = "\\begin{figure}[htbp]\n  \\centering\n";
        json entry{{"metric", to_string(kind)}, {"file", nullptr}, {"series", json::array()}};
        const bool any_visible = std::any_of(series.begin(), series.end(), [&](const MetricSeries& s) {
            return std::find(config.hidden_series.begin(), config.hidden_series.end(), s.label) ==
                   config.hidden_series.end();
        });
        if (any_visible) {
            const std::string file = "figures/" + figure_stem(kind) + ".pdf";
            bundle.assets.push_back({file, render_plot(series, config)});
            fig += "  \\includegraphics[width=0.9\\linewidth]{" + file + "}\n";
            caption += ": " + latex_escape(instances);
            entry["file"] = file;
            for (const MetricSeries& s : series) entry["series"].push_back(s.label);
        } else {
            fig += "  \\fbox{\\parbox{0.8\\linewidth}{\\centering No parallel runs in the selection, so this plot "
                   "is empty.}}\n";
        }
        fig += "  \\caption{" + caption + "}\n  \\label{" + label + "}\n\\end{figure}\n\n";
        figures[kind] = std::move(fig);
        figure_manifest.push_back(std::move(entry));
    }

    std::ostringstream tex;
    tex << "\\documentclass[11pt]{article}\n"
           "\\usepackage[T1]{fontenc}\n"
           "\\usepackage[utf8]{inputenc}\n"
           "\\usepackage{graphicx}\n\n";
    tex << "\\title{" << latex_escape(tmpl.title) << "}\n";
    tex << "\\author{" << (text::trim(answers.author).empty() ? "Anonymous" : latex_escape(answers.author)) << "}\n";
    tex << "\\date{" << latex_escape(answers.course) << "}\n\n";
    tex << "\\begin{document}\n\\maketitle\n\n" << setup_block(dataset) << "\n";

    json question_manifest = json::array();
    auto emit_question = [&](const QuestionSpec& q) {
        tex << "% question " << q.id << "\n";
        tex << "\\subsection*{" << latex_escape(q.prompt) << "}\n";
        tex << render_answer(q, answers) << "\n\n";
        auto it = answers.answers.find(q.id);
        const bool answered = it != answers.answers.end() && !text::trim(it->second).empty();
        question_manifest.push_back({{"id", q.id},
                                     {"section", to_string(q.section)},
                                     {"answer_kind", to_string(q.answer_kind)},
                                     {"answer", answered ? json(it->second) : json(nullptr)}});
    };

    for (ReportSection section : kAllReportSections) {
        tex << "\\section{" << section_title(section) << "}\n\n";
        std::vector<const QuestionSpec*> questions;
        for (const QuestionSpec& q : tmpl.questions) {
            if (q.section == section) questions.push_back(&q);
        }
        if (section == ReportSection::CurveAnalysis) {
            // Each figure sits above the questions about it; figures nobody asks about still appear.
            for (MetricKind kind : kAllMetricKinds) {
                tex << figures[kind];
                for (const QuestionSpec* q : questions) {
                    if (q->metric == kind) emit_question(*q);
                }
            }
            for (const QuestionSpec* q : questions) {
                if (!q->metric) emit_question(*q);
            }
        } else {
            for (const QuestionSpec* q : questions) emit_question(*q);
        }
        if (questions.empty() && section != ReportSection::CurveAnalysis) tex << "\\emph{No questions.}\n\n";
    }
    tex << "\\end{document}\n";
    bundle.document = tex.str();

    bundle.manifest = {{"format", kManifestFormat},
                       {"document", "report.tex"},
                       {"title", tmpl.title},
                       {"author", answers.author},
                       {"course", answers.course},
                       {"selection", dataset.selection},
                       {"figures", std::move(figure_manifest)},
                       {"questions", std::move(question_manifest)},
                       {"unanswered", validation.unanswered}};
    return bundle;
}

void write_bundle(const ReportBundle& bundle, const std::string& directory) {
    namespace fs = std::filesystem;
    for (const ArchiveEntry& f : bundle.files()) {
        const fs::path path = fs::path(directory) / f.name;
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary);
        out << f.content;
        if (!out.flush()) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
}

std::string archive_bundle(const ReportBundle& bundle) {
    std::vector<ArchiveEntry> entries = bundle.files();
    for (ArchiveEntry& e : entries) e.name = "report/" + e.name;
    return write_tar(entries);
}

}  // namespace scalelab
