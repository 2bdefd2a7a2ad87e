#include "ringform/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ringform/errors.hpp"

namespace ringform::plot {

namespace {

constexpr double kMarginLeft = 78.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 46.0;
constexpr std::size_t kMaxPoints = 2000;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log_axis) {
    char buf[32];
    if (log_axis)
        std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
    else
        std::snprintf(buf, sizeof buf, "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi))) {
            const double pad = std::max(0.5, 0.05 * std::fabs(hi));
            lo -= pad;
            hi += pad;
        }
    }
    double span() const { return hi - lo; }
};

std::vector<double> nice_ticks(Range r, bool log_axis) {
    std::vector<double> ticks;
    if (log_axis) {
        const int lo = static_cast<int>(std::ceil(r.lo));
        const int hi = static_cast<int>(std::floor(r.hi));
        const int step = std::max(1, (hi - lo) / 8 + 1);
        for (int d = lo; d <= hi; d += step) ticks.push_back(d);
        return ticks;
    }
    const double raw = r.span() / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-9 * step; t += step) ticks.push_back(t);
    return ticks;
}

double transform_y(double y, bool log_y) { return log_y ? std::log10(std::max(std::fabs(y), kLogFloor)) : y; }

void render_panel(std::string& out, const Panel& p, double x0, double y0, double w, double h) {
    Range xr, yr;
    for (const Series& s : p.series) {
        for (double x : s.x) xr.add(x);
        for (double y : s.y) yr.add(transform_y(y, p.log_y));
    }
    xr.finish();
    yr.finish();
    if (!p.log_y) {
        const double pad = 0.04 * yr.span();
        yr.lo -= pad;
        yr.hi += pad;
    }
    const double pw = w - kMarginLeft - kMarginRight;
    const double ph = h - kMarginTop - kMarginBottom;
    if (p.equal_aspect) {
        const double scale = std::max(xr.span() / pw, yr.span() / ph);
        const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
        xr.lo = cx - 0.5 * scale * pw;
        xr.hi = cx + 0.5 * scale * pw;
        yr.lo = cy - 0.5 * scale * ph;
        yr.hi = cy + 0.5 * scale * ph;
    }
    const double left = x0 + kMarginLeft, top = y0 + kMarginTop;
    const auto px = [&](double x) { return left + (x - xr.lo) / xr.span() * pw; };
    const auto py = [&](double y) { return top + ph - (y - yr.lo) / yr.span() * ph; };

    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(y0 + 20) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + escape(p.title) + "</text>\n";
    out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(top + ph + 38) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(p.xlabel) + "</text>\n";
    out += "<text x=\"" + num(x0 + 14) + "\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\"" +
           " transform=\"rotate(-90 " + num(x0 + 14) + " " + num(top + ph / 2) + ")\">" + escape(p.ylabel) +
           "</text>\n";
    for (double t : nice_ticks(xr, false)) {
        out += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
               num(top + ph + 5) + "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + num(px(t)) + "\" y=\"" + num(top + ph + 18) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(t, false) + "</text>\n";
    }
    for (double t : nice_ticks(yr, p.log_y)) {
        out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
               num(py(t)) + "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(t) + 3) +
               "\" text-anchor=\"end\" font-size=\"10\">" + tick_label(t, p.log_y) + "</text>\n";
    }

    out += "<defs><clipPath id=\"clip" + num(y0) + "\"><rect x=\"" + num(left) + "\" y=\"" + num(top) +
           "\" width=\"" + num(pw) + "\" height=\"" + num(ph) + "\"/></clipPath></defs>\n";
    std::size_t legend = 0;
    for (std::size_t si = 0; si < p.series.size(); ++si) {
        const Series& s = p.series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        const std::size_t m = std::min(s.x.size(), s.y.size());
        if (m == 0) continue;
        const std::size_t stride = (m + kMaxPoints - 1) / kMaxPoints;
        std::string pts;
        for (std::size_t k = 0; k < m; k += stride) {
            pts += num(px(s.x[k])) + "," + num(py(transform_y(s.y[k], p.log_y))) + " ";
        }
        if ((m - 1) % stride != 0) pts += num(px(s.x[m - 1])) + "," + num(py(transform_y(s.y[m - 1], p.log_y)));
        out += "<polyline clip-path=\"url(#clip" + num(y0) + ")\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts +
               "\"/>\n";
        if (s.markers) {
            for (std::size_t k = 0; k < m; ++k)
                out += "<circle cx=\"" + num(px(s.x[k])) + "\" cy=\"" + num(py(transform_y(s.y[k], p.log_y))) +
                       "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        if (!s.label.empty()) {
            const double ly = top + 10 + 16.0 * static_cast<double>(legend++);
            out += "<line x1=\"" + num(left + pw + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(left + pw + 34) +
                   "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
                   (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
            out += "<text x=\"" + num(left + pw + 40) + "\" y=\"" + num(ly + 4) + "\" font-size=\"11\">" +
                   escape(s.label) + "</text>\n";
        }
    }
}

}  // namespace

std::string render_svg(std::span<const Panel> panels, double width, double panel_height) {
    const double height = panel_height * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < panels.size(); ++k)
        render_panel(out, panels[k], 0.0, panel_height * static_cast<double>(k), width, panel_height);
    out += "</svg>\n";
    return out;
}

PlotSet render_plots(const TrajectoryLog& log) {
    if (log.samples.empty() || log.states.empty()) throw DomainError("render_plots needs a nonempty log");
    const std::size_t n = log.states.front().size();
    PlotSet set;

    Panel formation{"Formation evolution", "x", "y", false, true, {}};
    for (std::size_t i = 0; i < n; ++i) {
        Series path;
        for (const FormationState& st : log.states) {
            path.x.push_back(st.positions[i].x);
            path.y.push_back(st.positions[i].y);
        }
        formation.series.push_back(std::move(path));
    }
    const auto polygon = [&](const FormationState& st, std::string label, bool dashed) {
        Series s{std::move(label), {}, {}, dashed, true};
        for (std::size_t i = 0; i <= n; ++i) {
            s.x.push_back(st.positions[i % n].x);
            s.y.push_back(st.positions[i % n].y);
        }
        return s;
    };
    formation.series.push_back(polygon(log.states.front(), "initial", true));
    formation.series.push_back(polygon(log.states.back(), "final", false));
    set.formation = render_svg(std::span<const Panel>(&formation, 1), 720.0, 640.0);

    std::vector<double> t;
    for (const DiagnosticsSample& d : log.samples) t.push_back(d.time);
    Panel errors{"Angle error and Lyapunov function", "t", "magnitude", true, false, {}};
    for (std::size_t i = 0; i < n; ++i) {
        Series s{"|eps" + std::to_string(i + 1) + "|", t, {}, false, false};
        for (const DiagnosticsSample& d : log.samples) s.y.push_back(d.eps[i]);
        errors.series.push_back(std::move(s));
    }
    Series v{"V", t, {}, true, false};
    for (const DiagnosticsSample& d : log.samples) v.y.push_back(d.V);
    errors.series.push_back(std::move(v));
    set.errors = render_svg(std::span<const Panel>(&errors, 1), 720.0, 420.0);

    Series rho{"rho", t, {}, false, false}, sum{"theta sum", t, {}, false, false},
        dist{"min distance", t, {}, false, false};
    for (const DiagnosticsSample& d : log.samples) {
        rho.y.push_back(d.rho);
        sum.y.push_back(d.theta_sum);
        dist.y.push_back(d.min_pair_dist);
    }
    const Panel diag[] = {
        {"Perimeter", "t", "rho", false, false, {rho}},
        {"Angle sum", "t", "sum theta (rad)", false, false, {sum}},
        {"Minimum pairwise distance", "t", "distance", false, false, {dist}},
    };
    set.diagnostics = render_svg(diag, 720.0, 260.0);
    return set;
}

}  // namespace ringform::plot
