#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <variant>

#include "scalelab/compare.hpp"
#include "scalelab/error.hpp"

// A plot is laid out once as a list of primitives in pixel coordinates (origin top
// left) and then written by one of the backends. Text widths come from the Helvetica
// metrics so both outputs place labels identically.

namespace scalelab {

namespace {

struct Rgb {
    int r, g, b;
};

enum class Shape { Circle, Square, TriangleUp, Diamond, TriangleDown, Cross };
enum class Anchor { Start, Middle, End };

struct Line {
    std::vector<std::pair<double, double>> points;
    Rgb color;
    double width;
    std::vector<double> dash;
};

struct Box {
    double x, y, w, h;
    std::optional<Rgb> fill;
    std::optional<Rgb> stroke;
};

struct Marker {
    double x, y;
    Shape shape;
    Rgb color;
};

struct Label {
    double x, y;  // baseline anchor
    std::string text;
    double size;
    Anchor anchor;
    bool vertical;
};

using Item = std::variant<Line, Box, Marker, Label>;

struct Scene {
    double width = 0;
    double height = 0;
    std::vector<Item> items;
};

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGrid{221, 221, 221};
constexpr Rgb kReference{136, 136, 136};
constexpr std::array<Rgb, 8> kPalette = {{{31, 119, 180},
                                          {214, 39, 40},
                                          {44, 160, 44},
                                          {255, 127, 14},
                                          {148, 103, 189},
                                          {140, 86, 75},
                                          {227, 119, 194},
                                          {23, 190, 207}}};
constexpr std::array<Shape, 6> kShapes = {Shape::Circle,  Shape::Square,       Shape::TriangleUp,
                                          Shape::Diamond, Shape::TriangleDown, Shape::Cross};
const std::array<std::vector<double>, 3> kDashes = {{{}, {6, 3}, {2, 2}}};

constexpr double kMarkerRadius = 3.5;
constexpr double kTickFont = 10;
constexpr double kLabelFont = 12;
constexpr double kTitleFont = 14;

// Helvetica advance widths (1/1000 em) for printable ASCII.
constexpr std::array<int, 95> kHelvetica = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, 556, 556, 556,
    556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556, 1015, 667, 667, 722, 722, 667,
    611, 778, 722, 278, 500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667,
    667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500,
    222, 833, 556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

double text_width(std::string_view s, double size) {
    double units = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c >= 32 && c < 127) {
            units += kHelvetica[c - 32];
        } else if ((c & 0xC0) != 0x80) {  // count each UTF-8 sequence once
            units += 556;
        }
    }
    return units * size / 1000.0;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

// ---------------------------------------------------------------------------
// Axes

struct Axis {
    AxisScale scale;
    double lo, hi;  // data range, in data units
    std::vector<double> ticks;
    std::vector<std::string> tick_labels;

    double transform(double v) const {
        switch (scale) {
            case AxisScale::Linear: return v;
            case AxisScale::Log2: return std::log2(v);
            case AxisScale::Log10: return std::log10(v);
        }
        return v;
    }
    /// Maps a data value onto [0, 1].
    double unit(double v) const { return (transform(v) - transform(lo)) / (transform(hi) - transform(lo)); }
};

std::string tick_text(double v, double step) {
    char buf[32];
    if (v == 0) return "0";
    const double mag = std::fabs(v);
    if (mag >= 1e6 || mag < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    const int decimals = step >= 1 ? 0 : std::min(6, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f <= 1 ? 1 : f <= 2 ? 2 : f <= 2.5 ? 2.5 : f <= 5 ? 5 : 10;
    return nice * mag;
}

Axis make_axis(AxisScale scale, double lo, double hi, bool include_zero) {
    Axis a{scale, lo, hi, {}, {}};
    if (scale == AxisScale::Linear) {
        if (include_zero) {
            lo = std::min(lo, 0.0);
            hi = std::max(hi, 0.0);
        }
        if (lo == hi) {
            const double pad = lo == 0 ? 1 : std::fabs(lo) * 0.5;
            lo -= pad;
            hi += pad;
        }
        const double step = nice_step(hi - lo, 5);
        a.lo = std::floor(lo / step + 1e-9) * step;
        a.hi = std::ceil(hi / step - 1e-9) * step;
        const int n = static_cast<int>(std::lround((a.hi - a.lo) / step));
        for (int i = 0; i <= n; ++i) {
            const double t = a.lo + i * step;
            a.ticks.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
            a.tick_labels.push_back(tick_text(a.ticks.back(), step));
        }
        return a;
    }
    const double base = scale == AxisScale::Log2 ? 2.0 : 10.0;
    auto log_b = [&](double v) { return std::log(v) / std::log(base); };
    int k_lo = static_cast<int>(std::floor(log_b(lo) + 1e-9));
    int k_hi = static_cast<int>(std::ceil(log_b(hi) - 1e-9));
    if (k_lo == k_hi) {
        --k_lo;
        ++k_hi;
    }
    a.lo = std::pow(base, k_lo);
    a.hi = std::pow(base, k_hi);
    const int stride = std::max(1, (k_hi - k_lo + 9) / 10);
    for (int k = k_lo; k <= k_hi; k += stride) {
        const double t = std::pow(base, k);
        a.ticks.push_back(t);
        if (t >= 1 && t < 1e7 && t == std::floor(t)) {
            a.tick_labels.push_back(std::to_string(static_cast<long long>(t)));
        } else if (scale == AxisScale::Log10) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", t);
            a.tick_labels.push_back(buf);
        } else {
            a.tick_labels.push_back("2^" + std::to_string(k));
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Layout

Scene layout(const std::vector<std::pair<std::size_t, const MetricSeries*>>& visible, const PlotConfig& config) {
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& [style, s] : visible) {
        for (const MetricPoint& p : s->points) {
            const auto x = static_cast<double>(p.problem_size);
            if (config.x_scale != AxisScale::Linear && !(x > 0)) {
                throw Error(ErrorCode::ScaleError, "log x axis needs positive problem sizes",
                            {{"series", s->label}, {"problem_size", p.problem_size}});
            }
            if (config.y_scale != AxisScale::Linear && !(p.value > 0)) {
                throw Error(ErrorCode::ScaleError, "log y axis needs positive values",
                            {{"series", s->label}, {"problem_size", p.problem_size}, {"value", p.value}});
            }
            if (!std::isfinite(p.value)) {
                throw Error(ErrorCode::ValidationError, "series " + s->label + " holds a non-finite value");
            }
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, p.value);
            y_hi = std::max(y_hi, p.value);
        }
    }

    const Axis xa = make_axis(config.x_scale, x_lo, x_hi, false);
    const Axis ya = make_axis(config.y_scale, y_lo, y_hi, true);

    double tick_w = 0;
    for (const std::string& t : ya.tick_labels) tick_w = std::max(tick_w, text_width(t, kTickFont));
    double legend_w = 0;
    for (const auto& [style, s] : visible) legend_w = std::max(legend_w, text_width(s->label, kTickFont));
    legend_w += 56;  // sample line plus slack for fonts wider than Helvetica

    const double plot_w = 440, plot_h = 300;
    const double left = std::ceil(tick_w) + 16 + (config.y_label.empty() ? 0 : 22);
    const double top = config.title.empty() ? 16 : 40;
    const double bottom = 28 + (config.x_label.empty() ? 0 : 22);
    const double legend_gap = 16;

    Scene scene;
    scene.width = std::ceil(left + plot_w + legend_gap + legend_w + 12);
    scene.height = std::ceil(std::max(top + plot_h + bottom, top + 12 + 18.0 * visible.size() + 12));
    auto& items = scene.items;

    auto px = [&](double x) { return left + xa.unit(x) * plot_w; };
    auto py = [&](double y) { return top + (1 - ya.unit(y)) * plot_h; };

    items.push_back(Box{0, 0, scene.width, scene.height, Rgb{255, 255, 255}, std::nullopt});
    if (!config.title.empty()) {
        items.push_back(Label{left + plot_w / 2, 26, config.title, kTitleFont, Anchor::Middle, false});
    }

    for (std::size_t i = 0; i < xa.ticks.size(); ++i) {
        const double x = px(xa.ticks[i]);
        items.push_back(Line{{{x, top}, {x, top + plot_h}}, kGrid, 0.5, {}});
        items.push_back(Line{{{x, top + plot_h}, {x, top + plot_h + 4}}, kBlack, 1, {}});
        items.push_back(Label{x, top + plot_h + 16, xa.tick_labels[i], kTickFont, Anchor::Middle, false});
    }
    for (std::size_t i = 0; i < ya.ticks.size(); ++i) {
        const double y = py(ya.ticks[i]);
        items.push_back(Line{{{left, y}, {left + plot_w, y}}, kGrid, 0.5, {}});
        items.push_back(Line{{{left - 4, y}, {left, y}}, kBlack, 1, {}});
        items.push_back(Label{left - 7, y + 3.5, ya.tick_labels[i], kTickFont, Anchor::End, false});
    }
    // Speedup of one separates slowdowns from gains.
    if (config.metric_kind == MetricKind::Speedup && ya.lo < 1 && ya.hi > 1) {
        items.push_back(Line{{{left, py(1)}, {left + plot_w, py(1)}}, kReference, 1, {4, 3}});
    }
    items.push_back(Box{left, top, plot_w, plot_h, std::nullopt, kBlack});

    if (!config.x_label.empty()) {
        items.push_back(Label{left + plot_w / 2, top + plot_h + 40, config.x_label, kLabelFont, Anchor::Middle, false});
    }
    if (!config.y_label.empty()) {
        items.push_back(Label{14, top + plot_h / 2, config.y_label, kLabelFont, Anchor::Middle, true});
    }

    const double lx = left + plot_w + legend_gap;
    items.push_back(Box{lx, top, legend_w, 12 + 18.0 * visible.size(), Rgb{255, 255, 255}, Rgb{170, 170, 170}});
    std::size_t row = 0;
    for (const auto& [style, s] : visible) {
        const Rgb color = kPalette[style % kPalette.size()];
        const Shape shape = kShapes[style % kShapes.size()];
        const auto& dash = kDashes[(style / kPalette.size()) % kDashes.size()];

        std::vector<std::pair<double, double>> path;
        for (const MetricPoint& p : s->points) path.push_back({px(static_cast<double>(p.problem_size)), py(p.value)});
        if (path.size() > 1) items.push_back(Line{path, color, 1.5, dash});
        for (const auto& [x, y] : path) items.push_back(Marker{x, y, shape, color});

        const double ly = top + 15 + 18.0 * row++;
        items.push_back(Line{{{lx + 8, ly}, {lx + 32, ly}}, color, 1.5, dash});
        items.push_back(Marker{lx + 20, ly, shape, color});
        items.push_back(Label{lx + 38, ly + 3.5, s->label, kTickFont, Anchor::Start, false});
    }
    return scene;
}

double anchored_x(const Label& l) {
    const double w = text_width(l.text, l.size);
    return l.anchor == Anchor::Start ? l.x : l.anchor == Anchor::Middle ? l.x - w / 2 : l.x - w;
}

std::vector<std::pair<double, double>> shape_outline(const Marker& m) {
    const double r = kMarkerRadius;
    switch (m.shape) {
        case Shape::Square: return {{m.x - r, m.y - r}, {m.x + r, m.y - r}, {m.x + r, m.y + r}, {m.x - r, m.y + r}};
        case Shape::TriangleUp: return {{m.x, m.y - r * 1.2}, {m.x + r * 1.1, m.y + r * 0.8}, {m.x - r * 1.1, m.y + r * 0.8}};
        case Shape::TriangleDown:
            return {{m.x, m.y + r * 1.2}, {m.x + r * 1.1, m.y - r * 0.8}, {m.x - r * 1.1, m.y - r * 0.8}};
        case Shape::Diamond: return {{m.x, m.y - r * 1.3}, {m.x + r * 1.3, m.y}, {m.x, m.y + r * 1.3}, {m.x - r * 1.3, m.y}};
        default: return {};
    }
}

// ---------------------------------------------------------------------------
// SVG backend

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string svg_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string write_svg(const Scene& scene) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(scene.width) << "\" height=\""
        << num(scene.height) << "\" viewBox=\"0 0 " << num(scene.width) << ' ' << num(scene.height)
        << "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    for (const Item& item : scene.items) {
        if (const auto* l = std::get_if<Line>(&item)) {
            out << "<polyline fill=\"none\" stroke=\"" << svg_color(l->color) << "\" stroke-width=\"" << num(l->width)
                << '"';
            if (!l->dash.empty()) {
                out << " stroke-dasharray=\"";
                for (std::size_t i = 0; i < l->dash.size(); ++i) out << (i ? "," : "") << num(l->dash[i]);
                out << '"';
            }
            out << " points=\"";
            for (std::size_t i = 0; i < l->points.size(); ++i) {
                out << (i ? " " : "") << num(l->points[i].first) << ',' << num(l->points[i].second);
            }
            out << "\"/>\n";
        } else if (const auto* b = std::get_if<Box>(&item)) {
            out << "<rect x=\"" << num(b->x) << "\" y=\"" << num(b->y) << "\" width=\"" << num(b->w) << "\" height=\""
                << num(b->h) << "\" fill=\"" << (b->fill ? svg_color(*b->fill) : "none") << '"';
            if (b->stroke) out << " stroke=\"" << svg_color(*b->stroke) << "\" stroke-width=\"1\"";
            out << "/>\n";
        } else if (const auto* m = std::get_if<Marker>(&item)) {
            const std::string c = svg_color(m->color);
            if (m->shape == Shape::Circle) {
                out << "<circle cx=\"" << num(m->x) << "\" cy=\"" << num(m->y) << "\" r=\"" << num(kMarkerRadius)
                    << "\" fill=\"" << c << "\"/>\n";
            } else if (m->shape == Shape::Cross) {
                const double r = kMarkerRadius;
                out << "<path d=\"M" << num(m->x - r) << ',' << num(m->y - r) << 'L' << num(m->x + r) << ','
                    << num(m->y + r) << 'M' << num(m->x - r) << ',' << num(m->y + r) << 'L' << num(m->x + r) << ','
                    << num(m->y - r) << "\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
            } else {
                out << "<polygon fill=\"" << c << "\" points=\"";
                const auto pts = shape_outline(*m);
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    out << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
                }
                out << "\"/>\n";
            }
        } else if (const auto* t = std::get_if<Label>(&item)) {
            if (t->vertical) {
                // Rotated about the anchor, so the anchor runs along the text.
                const double w = text_width(t->text, t->size);
                out << "<text x=\"" << num(t->x) << "\" y=\"" << num(t->y + w / 2) << "\" font-size=\"" << num(t->size)
                    << "\" transform=\"rotate(-90 " << num(t->x) << ' ' << num(t->y + w / 2) << ")\">"
                    << xml_escape(t->text) << "</text>\n";
            } else {
                out << "<text x=\"" << num(anchored_x(*t)) << "\" y=\"" << num(t->y) << "\" font-size=\""
                    << num(t->size) << "\">" << xml_escape(t->text) << "</text>\n";
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// PDF backend: one page, base-14 Helvetica, no timestamps or ids.

std::string pdf_string(std::string_view s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c == '(' || c == ')' || c == '\\') {
            out += '\\';
            out += static_cast<char>(c);
        } else if (c >= 32 && c < 127) {
            out += static_cast<char>(c);
        } else if ((c & 0xC0) != 0x80) {
            out += '?';
        }
    }
    return out + ")";
}

std::string pdf_color(Rgb c, bool stroke) {
    return num(c.r / 255.0) + ' ' + num(c.g / 255.0) + ' ' + num(c.b / 255.0) + (stroke ? " RG" : " rg");
}

std::string write_pdf(const Scene& scene) {
    const double h = scene.height;
    auto X = [](double x) { return num(x); };
    auto Y = [&](double y) { return num(h - y); };

    std::ostringstream s;
    for (const Item& item : scene.items) {
        if (const auto* l = std::get_if<Line>(&item)) {
            s << pdf_color(l->color, true) << ' ' << num(l->width) << " w [";
            for (std::size_t i = 0; i < l->dash.size(); ++i) s << (i ? " " : "") << num(l->dash[i]);
            s << "] 0 d ";
            for (std::size_t i = 0; i < l->points.size(); ++i) {
                s << X(l->points[i].first) << ' ' << Y(l->points[i].second) << (i ? " l " : " m ");
            }
            s << "S\n";
        } else if (const auto* b = std::get_if<Box>(&item)) {
            const std::string rect =
                X(b->x) + ' ' + Y(b->y + b->h) + ' ' + num(b->w) + ' ' + num(b->h) + " re";
            if (b->fill) s << pdf_color(*b->fill, false) << ' ' << rect << " f\n";
            if (b->stroke) s << pdf_color(*b->stroke, true) << " 1 w [] 0 d " << rect << " S\n";
        } else if (const auto* m = std::get_if<Marker>(&item)) {
            const double r = kMarkerRadius;
            if (m->shape == Shape::Circle) {
                const double k = 0.5523 * r;
                const double cx = m->x, cy = h - m->y;
                s << pdf_color(m->color, false) << ' ' << num(cx + r) << ' ' << num(cy) << " m " << num(cx + r) << ' '
                  << num(cy + k) << ' ' << num(cx + k) << ' ' << num(cy + r) << ' ' << num(cx) << ' ' << num(cy + r)
                  << " c " << num(cx - k) << ' ' << num(cy + r) << ' ' << num(cx - r) << ' ' << num(cy + k) << ' '
                  << num(cx - r) << ' ' << num(cy) << " c " << num(cx - r) << ' ' << num(cy - k) << ' '
                  << num(cx - k) << ' ' << num(cy - r) << ' ' << num(cx) << ' ' << num(cy - r) << " c "
                  << num(cx + k) << ' ' << num(cy - r) << ' ' << num(cx + r) << ' ' << num(cy - k) << ' '
                  << num(cx + r) << ' ' << num(cy) << " c f\n";
            } else if (m->shape == Shape::Cross) {
                s << pdf_color(m->color, true) << " 1.5 w [] 0 d " << X(m->x - r) << ' ' << Y(m->y - r) << " m "
                  << X(m->x + r) << ' ' << Y(m->y + r) << " l " << X(m->x - r) << ' ' << Y(m->y + r) << " m "
                  << X(m->x + r) << ' ' << Y(m->y - r) << " l S\n";
            } else {
                const auto pts = shape_outline(*m);
                s << pdf_color(m->color, false);
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    s << ' ' << X(pts[i].first) << ' ' << Y(pts[i].second) << (i ? " l" : " m");
                }
                s << " h f\n";
            }
        } else if (const auto* t = std::get_if<Label>(&item)) {
            s << "0 0 0 rg BT /F1 " << num(t->size) << " Tf ";
            if (t->vertical) {
                const double w = text_width(t->text, t->size);
                s << "0 1 -1 0 " << X(t->x) << ' ' << Y(t->y + w / 2) << " Tm ";
            } else {
                s << "1 0 0 1 " << X(anchored_x(*t)) << ' ' << Y(t->y) << " Tm ";
            }
            s << pdf_string(t->text) << " Tj ET\n";
        }
    }
    const std::string content = s.str();

    std::vector<std::string> objects = {
        "<< /Type /Catalog /Pages 2 0 R >>",
        "<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + num(scene.width) + ' ' + num(scene.height) +
            "] /Resources << /Font << /F1 5 0 R >> >> /Contents 4 0 R >>",
        "<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content + "endstream",
        "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>"};

    std::string out = "%PDF-1.4\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        offsets.push_back(out.size());
        out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
    }
    const std::size_t xref = out.size();
    out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
    for (std::size_t off : offsets) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
        out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R >>\nstartxref\n" +
           std::to_string(xref) + "\n%%EOF\n";
    return out;
}

}  // namespace

std::string_view to_string(AxisScale s) {
    switch (s) {
        case AxisScale::Linear: return "LINEAR";
        case AxisScale::Log2: return "LOG2";
        case AxisScale::Log10: return "LOG10";
    }
    return "LINEAR";
}

AxisScale parse_axis_scale(std::string_view text) {
    for (AxisScale s : {AxisScale::Linear, AxisScale::Log2, AxisScale::Log10}) {
        if (text == to_string(s)) return s;
    }
    throw Error(ErrorCode::ValidationError, "unknown axis scale '" + std::string(text) + "'");
}

std::string_view to_string(ImageFormat f) { return f == ImageFormat::Svg ? "SVG" : "PDF"; }

ImageFormat parse_image_format(std::string_view text) {
    if (text == "SVG") return ImageFormat::Svg;
    if (text == "PDF") return ImageFormat::Pdf;
    throw Error(ErrorCode::ValidationError, "unknown image format '" + std::string(text) + "'");
}

PlotConfig default_plot_config(MetricKind kind) {
    PlotConfig c;
    c.metric_kind = kind;
    c.x_label = "Problem size";
    switch (kind) {
        case MetricKind::Time:
            c.title = "Execution time";
            c.y_label = "Time (s)";
            break;
        case MetricKind::Speedup:
            c.title = "Speedup";
            c.y_label = "Speedup";
            break;
        case MetricKind::Efficiency:
            c.title = "Efficiency";
            c.y_label = "Efficiency";
            break;
        case MetricKind::KarpFlatt:
            c.title = "Karp-Flatt metric";
            c.y_label = "Experimental serial fraction";
            break;
    }
    return c;
}

PlotConfig plot_config_from_json(const nlohmann::json& j, MetricKind kind) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "plot config must be an object");
    static const std::set<std::string> known = {"metric_kind", "x_scale", "y_scale", "title",
                                                "x_label",     "y_label", "hidden_series", "format"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw Error(ErrorCode::ValidationError, "unknown plot config field '" + key + "'");
    }
    try {
        if (j.contains("metric_kind")) kind = parse_metric_kind(j["metric_kind"].get<std::string>());
        PlotConfig c = default_plot_config(kind);
        if (j.contains("x_scale")) c.x_scale = parse_axis_scale(j["x_scale"].get<std::string>());
        if (j.contains("y_scale")) c.y_scale = parse_axis_scale(j["y_scale"].get<std::string>());
        if (j.contains("title")) c.title = j["title"].get<std::string>();
        if (j.contains("x_label")) c.x_label = j["x_label"].get<std::string>();
        if (j.contains("y_label")) c.y_label = j["y_label"].get<std::string>();
        if (j.contains("hidden_series")) c.hidden_series = j["hidden_series"].get<std::vector<std::string>>();
        if (j.contains("format")) c.format = parse_image_format(j["format"].get<std::string>());
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ValidationError, std::string("malformed plot config: ") + e.what());
    }
}

nlohmann::json to_json_value(const PlotConfig& c) {
    return {{"metric_kind", to_string(c.metric_kind)},
            {"x_scale", to_string(c.x_scale)},
            {"y_scale", to_string(c.y_scale)},
            {"title", c.title},
            {"x_label", c.x_label},
            {"y_label", c.y_label},
            {"hidden_series", c.hidden_series},
            {"format", to_string(c.format)}};
}

std::string render_plot(std::span<const MetricSeries> series, const PlotConfig& config) {
    // Styles follow the position in the full list, so hiding a curve does not recolor the rest.
    std::vector<std::pair<std::size_t, const MetricSeries*>> visible;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const MetricSeries& s = series[i];
        if (std::find(config.hidden_series.begin(), config.hidden_series.end(), s.label) != config.hidden_series.end())
            continue;
        if (s.metric_kind != config.metric_kind) {
            throw Error(ErrorCode::ValidationError, "series " + s.label + " holds " +
                                                        std::string(to_string(s.metric_kind)) + " values, plot is " +
                                                        std::string(to_string(config.metric_kind)));
        }
        if (!s.points.empty()) visible.push_back({i, &s});
    }
    if (visible.empty()) throw Error(ErrorCode::EmptySelection, "no visible series to plot");
    const Scene scene = layout(visible, config);
    return config.format == ImageFormat::Svg ? write_svg(scene) : write_pdf(scene);
}

}  // namespace scalelab
