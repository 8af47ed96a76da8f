#include "beliefsim/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace beliefsim {

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return {buf.data(), ptr};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

void emit_timeseries_csv(const MetricsSeries& series, const std::filesystem::path& path) {
    if (series.empty()) {
        throw std::invalid_argument("emit_timeseries_csv: empty series");
    }
    std::string out = "step,P_O,P_A,mean_dissonance\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out += std::to_string(series.steps[k]) + ',' + format_number(series.opinion_polarization[k]) + ',' +
               format_number(series.affective_polarization[k]) + ',' +
               format_number(series.mean_dissonance[k]) + '\n';
    }
    write_text(path, out);
}

MetricsSeries read_timeseries_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path.string() + ": cannot open");
    }
    std::string line;
    if (!std::getline(in, line) || line != "step,P_O,P_A,mean_dissonance") {
        throw std::runtime_error(path.string() + ": unexpected header");
    }
    auto field = [&](std::string_view text, auto& value) {
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw std::runtime_error(path.string() + ": malformed field '" + std::string(text) + "'");
        }
    };
    MetricsSeries series;
    while (std::getline(in, line)) {
        std::array<std::string_view, 4> cols;
        std::string_view rest = line;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (c + 1 == cols.size())) {
                throw std::runtime_error(path.string() + ": expected 4 columns");
            }
            cols[c] = rest.substr(0, comma);
            rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
        }
        long long step = 0;
        double po = 0.0;
        double pa = 0.0;
        double d = 0.0;
        field(cols[0], step);
        field(cols[1], po);
        field(cols[2], pa);
        field(cols[3], d);
        series.steps.push_back(step);
        series.opinion_polarization.push_back(po);
        series.affective_polarization.push_back(pa);
        series.mean_dissonance.push_back(d);
    }
    return series;
}

void emit_sweep_csv(const SweepGrid& grid, const std::filesystem::path& path) {
    std::string out = "alpha,beta,P_O,P_A,mean_dissonance\n";
    for (std::size_t a = 0; a < grid.alphas.size(); ++a) {
        for (std::size_t b = 0; b < grid.betas.size(); ++b) {
            const auto ai = static_cast<Eigen::Index>(a);
            const auto bi = static_cast<Eigen::Index>(b);
            out += format_number(grid.alphas[a]) + ',' + format_number(grid.betas[b]) + ',' +
                   format_number(grid.opinion_polarization(ai, bi)) + ',' +
                   format_number(grid.affective_polarization(ai, bi)) + ',' +
                   format_number(grid.mean_dissonance(ai, bi)) + '\n';
        }
    }
    write_text(path, out);
}

void emit_histograms_csv(const HistogramSet& h, const std::filesystem::path& path) {
    const std::array<std::pair<const char*, const Histogram*>, 5> named = {{
        {"latte_group_a", &h.latte_group_a},
        {"latte_group_b", &h.latte_group_b},
        {"group_a_latte", &h.group_a_latte},
        {"ingroup", &h.ingroup},
        {"outgroup", &h.outgroup},
    }};
    std::string out = "histogram,bin_lower,bin_upper,count\n";
    for (const auto& [name, hist] : named) {
        for (int k = 0; k < hist->bin_count(); ++k) {
            out += std::string(name) + ',' + format_number(hist->bin_lower(k)) + ',' +
                   format_number(hist->bin_upper(k)) + ',' + std::to_string(hist->counts(k)) + '\n';
        }
    }
    write_text(path, out);
}

}  // namespace beliefsim
