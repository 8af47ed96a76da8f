#include "beliefsim/config.hpp"

#include "beliefsim/io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace beliefsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(std::string(key) + ": cannot parse '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_grid(std::string_view key, std::string_view text) {
    std::vector<double> grid;
    while (!text.empty()) {
        const auto comma = text.find(',');
        grid.push_back(parse_number<double>(key, trim(text.substr(0, comma))));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return grid;
}

using Setter = std::function<void(ParsedConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"n_agents", [](ParsedConfig& c, auto k, auto v) { c.sim.n_agents = parse_number<int>(k, v); }},
        {"n_edges", [](ParsedConfig& c, auto k, auto v) { c.sim.n_edges = parse_number<int>(k, v); }},
        {"steps", [](ParsedConfig& c, auto k, auto v) { c.sim.steps = parse_number<long long>(k, v); }},
        {"alpha", [](ParsedConfig& c, auto k, auto v) { c.sim.alpha = parse_number<double>(k, v); }},
        {"beta", [](ParsedConfig& c, auto k, auto v) { c.sim.beta = parse_number<double>(k, v); }},
        {"sigma", [](ParsedConfig& c, auto k, auto v) { c.sim.sigma = parse_number<double>(k, v); }},
        {"influence_mode",
         [](ParsedConfig& c, auto k, auto v) {
             try {
                 c.sim.influence_mode = parse_mode(v);
             } catch (const ConfigError& e) {
                 throw ConfigError(std::string(k) + ": " + e.what());
             }
         }},
        {"init_sigma", [](ParsedConfig& c, auto k, auto v) { c.sim.init_sigma = parse_number<double>(k, v); }},
        {"sample_interval",
         [](ParsedConfig& c, auto k, auto v) { c.sim.sample_interval = parse_number<long long>(k, v); }},
        {"bin_count", [](ParsedConfig& c, auto k, auto v) { c.sim.bin_count = parse_number<int>(k, v); }},
        {"seed", [](ParsedConfig& c, auto k, auto v) { c.sim.seed = parse_number<std::uint64_t>(k, v); }},
        {"record_histograms",
         [](ParsedConfig& c, auto k, auto v) { c.sim.record_histograms = parse_bool(k, v); }},
        {"alpha_grid", [](ParsedConfig& c, auto k, auto v) { c.sweep.alpha_grid = parse_grid(k, v); }},
        {"beta_grid", [](ParsedConfig& c, auto k, auto v) { c.sweep.beta_grid = parse_grid(k, v); }},
        {"runs_per_cell",
         [](ParsedConfig& c, auto k, auto v) { c.sweep.runs_per_cell = parse_number<int>(k, v); }},
    };
    return table;
}

}  // namespace

InfluenceMode parse_mode(std::string_view text) {
    if (text == "convergent") {
        return InfluenceMode::Convergent;
    }
    if (text == "reinforcing") {
        return InfluenceMode::Reinforcing;
    }
    throw ConfigError("unknown influence mode '" + std::string(text) +
                      "' (expected convergent or reinforcing)");
}

std::string_view mode_name(InfluenceMode mode) {
    return mode == InfluenceMode::Convergent ? "convergent" : "reinforcing";
}

ParsedConfig parse_config_text(std::string_view text, const ConfigOverrides& overrides) {
    ParsedConfig config;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(std::string(key) + ": unknown key (line " + std::to_string(line_no) + ")");
        }
        if (!seen.emplace(key).second) {
            throw ConfigError(std::string(key) + ": duplicate key (line " + std::to_string(line_no) + ")");
        }
        it->second(config, key, value);
    }

    if (overrides.seed) config.sim.seed = *overrides.seed;
    if (overrides.alpha) config.sim.alpha = *overrides.alpha;
    if (overrides.beta) config.sim.beta = *overrides.beta;
    if (overrides.sigma) config.sim.sigma = *overrides.sigma;
    if (overrides.steps) config.sim.steps = *overrides.steps;
    if (overrides.mode) config.sim.influence_mode = *overrides.mode;

    config.sim.validate();
    config.sweep.base = config.sim;
    config.sweep.validate();
    return config;
}

ParsedConfig parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    if (path.empty()) {
        return parse_config_text({}, overrides);
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), overrides);
}

std::string format_config(const SweepConfig& sweep) {
    const SimConfig& s = sweep.base;
    auto grid = [](const std::vector<double>& values) {
        std::string out;
        for (std::size_t k = 0; k < values.size(); ++k) {
            out += (k ? "," : "") + format_number(values[k]);
        }
        return out;
    };
    std::ostringstream out;
    out << "n_agents = " << s.n_agents << '\n'
        << "n_edges = " << s.n_edges << '\n'
        << "steps = " << s.steps << '\n'
        << "alpha = " << format_number(s.alpha) << '\n'
        << "beta = " << format_number(s.beta) << '\n'
        << "sigma = " << format_number(s.sigma) << '\n'
        << "influence_mode = " << mode_name(s.influence_mode) << '\n'
        << "init_sigma = " << format_number(s.init_sigma) << '\n'
        << "sample_interval = " << s.sample_interval << '\n'
        << "bin_count = " << s.bin_count << '\n'
        << "seed = " << s.seed << '\n'
        << "record_histograms = " << (s.record_histograms ? "true" : "false") << '\n'
        << "alpha_grid = " << grid(sweep.alpha_grid) << '\n'
        << "beta_grid = " << grid(sweep.beta_grid) << '\n'
        << "runs_per_cell = " << sweep.runs_per_cell << '\n';
    return out.str();
}

}  // namespace beliefsim
