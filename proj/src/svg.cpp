#include "beliefsim/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace beliefsim {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#8c564b"};

// Fixed two-decimal coordinates keep the files byte-stable and compact.
std::string coord(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
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

std::string tick_label(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf.data();
}

std::string header(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) + "\" height=\"" +
           coord(height) + "\" viewBox=\"0 0 " + coord(width) + ' ' + coord(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect x=\"0\" y=\"0\" width=\"" + coord(width) + "\" height=\"" + coord(height) +
           "\" fill=\"white\"/>\n";
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "middle",
                 std::string_view extra = {}) {
    return "<text x=\"" + coord(x) + "\" y=\"" + coord(y) + "\" text-anchor=\"" + std::string(anchor) +
           "\"" + (extra.empty() ? "" : " " + std::string(extra)) + ">" + escape(s) + "</text>\n";
}

struct Frame {
    double x0 = kLeft;
    double x1 = kWidth - kRight;
    double y0 = kTop;
    double y1 = kHeight - kBottom;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double px(double x) const { return x0 + (x - x_min) / (x_max - x_min) * (x1 - x0); }
    double py(double y) const { return y1 - (y - y_min) / (y_max - y_min) * (y1 - y0); }
};

std::string axes(const Frame& f, std::string_view title, std::string_view x_label,
                 std::string_view y_label, int x_ticks, int y_ticks) {
    std::string out;
    out += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    out += "<line x1=\"" + coord(f.x0) + "\" y1=\"" + coord(f.y1) + "\" x2=\"" + coord(f.x1) +
           "\" y2=\"" + coord(f.y1) + "\"/>\n";
    out += "<line x1=\"" + coord(f.x0) + "\" y1=\"" + coord(f.y0) + "\" x2=\"" + coord(f.x0) +
           "\" y2=\"" + coord(f.y1) + "\"/>\n";
    out += "</g>\n";
    for (int k = 0; k <= x_ticks; ++k) {
        const double v = f.x_min + (f.x_max - f.x_min) * k / x_ticks;
        out += text(f.px(v), f.y1 + 18, tick_label(v));
    }
    for (int k = 0; k <= y_ticks; ++k) {
        const double v = f.y_min + (f.y_max - f.y_min) * k / y_ticks;
        out += text(f.x0 - 8, f.py(v) + 4, tick_label(v), "end");
    }
    out += text((f.x0 + f.x1) / 2, kTop - 14, title, "middle", "font-size=\"14\"");
    out += text((f.x0 + f.x1) / 2, kHeight - 16, x_label);
    out += text(18, (f.y0 + f.y1) / 2, y_label, "middle",
                "transform=\"rotate(-90 18 " + coord((f.y0 + f.y1) / 2) + ")\"");
    return out;
}

// Piecewise-linear viridis approximation for t in [0, 1].
std::string viridis(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops = {{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
    }};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - static_cast<double>(k);
    std::array<char, 8> buf{};
    std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return buf.data();
}

}  // namespace

std::string render_line_plot(const LinePlot& plot) {
    if (plot.series.empty()) {
        throw std::invalid_argument("render_line_plot: no series");
    }
    Frame f;
    f.y_min = plot.y_min;
    f.y_max = plot.y_max;
    f.x_min = plot.series.front().x.front();
    f.x_max = f.x_min;
    for (const auto& s : plot.series) {
        if (s.x.empty() || s.x.size() != s.y.size()) {
            throw std::invalid_argument("render_line_plot: series '" + s.label + "' is empty or ragged");
        }
        f.x_min = std::min(f.x_min, *std::min_element(s.x.begin(), s.x.end()));
        f.x_max = std::max(f.x_max, *std::max_element(s.x.begin(), s.x.end()));
    }
    if (f.x_max == f.x_min) {
        f.x_max = f.x_min + 1.0;
    }

    std::string out = header(kWidth, kHeight);
    out += axes(f, plot.title, plot.x_label, plot.y_label, 5, 4);
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kPalette[k % kPalette.size()];
        out += "<polyline class=\"series\" fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color) +
               "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out += (i ? " " : "") + coord(f.px(s.x[i])) + ',' + coord(f.py(std::clamp(s.y[i], f.y_min, f.y_max)));
        }
        out += "\"/>\n";
        const double ly = kTop + 12 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + coord(f.x1 - 120) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(f.x1 - 100) +
               "\" y2=\"" + coord(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += text(f.x1 - 94, ly + 4, s.label, "start");
    }
    out += "</svg>\n";
    return out;
}

std::string render_histogram(const BarPlot& plot) {
    if (plot.histograms.empty() || plot.histograms.size() != plot.labels.size()) {
        throw std::invalid_argument("render_histogram: need one label per histogram");
    }
    const int bins = plot.histograms.front().bin_count();
    double peak = 0.0;
    for (const auto& h : plot.histograms) {
        if (h.bin_count() != bins || bins < 1) {
            throw std::invalid_argument("render_histogram: histograms must share a non-empty bin layout");
        }
        if (h.total() > 0) {
            peak = std::max(peak, static_cast<double>(h.counts.maxCoeff()) / h.total());
        }
    }

    Frame f;
    f.x_min = -1.0;
    f.x_max = 1.0;
    f.y_max = peak > 0.0 ? std::ceil(peak * 10.0) / 10.0 : 1.0;

    std::string out = header(kWidth, kHeight);
    out += axes(f, plot.title, plot.x_label, "fraction", 4, 4);
    const double group_width = (f.x1 - f.x0) / bins;
    const double bar_width = group_width / static_cast<double>(plot.histograms.size());
    for (std::size_t s = 0; s < plot.histograms.size(); ++s) {
        const auto& h = plot.histograms[s];
        const char* color = kPalette[s % kPalette.size()];
        for (int k = 0; k < bins; ++k) {
            const double frac = h.total() > 0 ? static_cast<double>(h.counts(k)) / h.total() : 0.0;
            const double x = f.x0 + k * group_width + static_cast<double>(s) * bar_width;
            out += "<rect class=\"bar\" x=\"" + coord(x) + "\" y=\"" + coord(f.py(frac)) + "\" width=\"" +
                   coord(bar_width) + "\" height=\"" + coord(f.y1 - f.py(frac)) + "\" fill=\"" + color +
                   "\" fill-opacity=\"0.8\"/>\n";
        }
        const double ly = kTop + 12 + 16 * static_cast<double>(s);
        out += "<rect x=\"" + coord(f.x0 + 10) + "\" y=\"" + coord(ly - 6) + "\" width=\"12\" height=\"10\" fill=\"" +
               color + "\"/>\n";
        out += text(f.x0 + 28, ly + 4, plot.labels[s], "start");
    }
    out += "</svg>\n";
    return out;
}

std::string render_heatmap(const HeatmapPlot& plot) {
    const auto rows = static_cast<Eigen::Index>(plot.alphas.size());
    const auto cols = static_cast<Eigen::Index>(plot.betas.size());
    if (rows == 0 || cols == 0 || plot.values.rows() != rows || plot.values.cols() != cols) {
        throw std::invalid_argument("render_heatmap: value grid does not match the axes");
    }
    const double x0 = kLeft;
    const double x1 = kWidth - kRight - 80;  // room for the color bar
    const double y0 = kTop;
    const double y1 = kHeight - kBottom;
    const double cw = (x1 - x0) / static_cast<double>(cols);
    const double ch = (y1 - y0) / static_cast<double>(rows);

    std::string out = header(kWidth, kHeight);
    // alpha increases upward, beta to the right.
    for (Eigen::Index a = 0; a < rows; ++a) {
        for (Eigen::Index b = 0; b < cols; ++b) {
            const double v = plot.values(a, b);
            const double t = (v - plot.v_min) / (plot.v_max - plot.v_min);
            out += "<rect class=\"cell\" x=\"" + coord(x0 + b * cw) + "\" y=\"" + coord(y1 - (a + 1) * ch) +
                   "\" width=\"" + coord(cw) + "\" height=\"" + coord(ch) + "\" fill=\"" + viridis(t) +
                   "\"><title>alpha=" + tick_label(plot.alphas[a]) + " beta=" + tick_label(plot.betas[b]) +
                   " value=" + format_number(v) + "</title></rect>\n";
        }
    }
    for (Eigen::Index b = 0; b < cols; ++b) {
        out += text(x0 + (b + 0.5) * cw, y1 + 18, tick_label(plot.betas[b]));
    }
    for (Eigen::Index a = 0; a < rows; ++a) {
        out += text(x0 - 8, y1 - (a + 0.5) * ch + 4, tick_label(plot.alphas[a]), "end");
    }
    out += text((x0 + x1) / 2, kTop - 14, plot.title, "middle", "font-size=\"14\"");
    out += text((x0 + x1) / 2, kHeight - 16, "beta (coherence)");
    out += text(18, (y0 + y1) / 2, "alpha (social influence)", "middle",
                "transform=\"rotate(-90 18 " + coord((y0 + y1) / 2) + ")\"");

    // Color bar over [v_min, v_max].
    constexpr int kSteps = 50;
    const double bx = kWidth - kRight - 50;
    const double bh = (y1 - y0) / kSteps;
    for (int k = 0; k < kSteps; ++k) {
        out += "<rect class=\"scale\" x=\"" + coord(bx) + "\" y=\"" + coord(y1 - (k + 1) * bh) +
               "\" width=\"16\" height=\"" + coord(bh + 0.5) + "\" fill=\"" + viridis((k + 0.5) / kSteps) + "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = plot.v_min + (plot.v_max - plot.v_min) * k / 4.0;
        out += text(bx + 22, y1 - (y1 - y0) * k / 4.0 + 4, tick_label(v), "start");
    }
    out += "</svg>\n";
    return out;
}

std::vector<std::filesystem::path> emit_run_plots(const RunResult& run, const std::filesystem::path& out_dir) {
    const auto& s = run.series;
    if (s.empty()) {
        throw std::invalid_argument("emit_run_plots: empty series");
    }
    const std::vector<double> x(s.steps.begin(), s.steps.end());
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& svg) {
        write_text(out_dir / name, svg);
        written.push_back(out_dir / name);
    };

    emit("polarization.svg",
         render_line_plot({"Opinion and affective polarization", "time step", "polarization", 0.0, 2.0,
                           {{"P_O (latte)", x, s.opinion_polarization}, {"P_A", x, s.affective_polarization}}}));
    emit("dissonance.svg", render_line_plot({"Mean internal dissonance", "time step", "<d(B_i)>", -1.0, 0.0,
                                             {{"mean dissonance", x, s.mean_dissonance}}}));

    auto hist = [&](const char* stem, const HistogramSet& h, const char* when) {
        emit(std::string("latte_by_group_") + stem + ".svg",
             render_histogram({std::string("Belief toward latte by group (") + when + ")", "b_i(self, latte)",
                               {"Group A", "Group B"}, {h.latte_group_a, h.latte_group_b}}));
        emit(std::string("group_a_latte_") + stem + ".svg",
             render_histogram({std::string("Group A / latte association (") + when + ")", "b_i(Group A, latte)",
                               {"all agents"}, {h.group_a_latte}}));
        emit(std::string("ingroup_outgroup_") + stem + ".svg",
             render_histogram({std::string("Beliefs toward neighbors (") + when + ")", "b_i(self, j)",
                               {"ingroup", "outgroup"}, {h.ingroup, h.outgroup}}));
    };
    hist("initial", run.initial_histograms, "initial");
    hist("final", run.final_histograms, "final");
    return written;
}

std::vector<std::filesystem::path> emit_sweep_plots(const SweepGrid& grid, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const std::array<std::pair<const char*, const Eigen::MatrixXd*>, 2> metrics = {{
        {"P_O", &grid.opinion_polarization},
        {"P_A", &grid.affective_polarization},
    }};
    for (const auto& [name, values] : metrics) {
        const auto path = out_dir / (std::string("heatmap_") + name + ".svg");
        write_text(path, render_heatmap({std::string("Mean final ") + name, grid.alphas, grid.betas, *values}));
        written.push_back(path);
    }
    return written;
}

}  // namespace beliefsim
