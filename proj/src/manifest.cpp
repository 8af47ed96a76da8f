#include "beliefsim/io.hpp"

#include "beliefsim/config.hpp"

#include "json.hpp"

#include <array>
#include <chrono>
#include <ctime>

namespace beliefsim {

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["tool_version"] = m.tool_version;
    j["seed"] = m.seed;
    j["config"] = m.config;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["outputs"] = m.outputs;
    write_text(path, j.dump(2) + '\n');
}

std::string utc_timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

namespace {

std::vector<std::filesystem::path> finish(const std::string& command, const SweepConfig& config,
                                          const std::filesystem::path& out_dir,
                                          std::vector<std::filesystem::path> files,
                                          const std::string& started_at) {
    write_text(out_dir / "config.txt", format_config(config));
    files.push_back(out_dir / "config.txt");

    RunManifest m;
    m.command = command;
    m.config = format_config(config);
    m.seed = config.base.seed;
    m.tool_version = std::string(kToolVersion);
    m.started_at = started_at;
    m.finished_at = utc_timestamp();
    files.push_back(out_dir / "manifest.json");
    for (const auto& f : files) {
        m.outputs.push_back(f.filename().generic_string());
    }
    write_manifest(m, files.back());
    return files;
}

}  // namespace

std::vector<std::filesystem::path> write_run_outputs(const RunResult& run, const SweepConfig& config,
                                                     const std::filesystem::path& out_dir,
                                                     const std::string& started_at) {
    std::vector<std::filesystem::path> files;
    emit_timeseries_csv(run.series, out_dir / "timeseries.csv");
    files.push_back(out_dir / "timeseries.csv");
    emit_histograms_csv(run.initial_histograms, out_dir / "histograms_initial.csv");
    files.push_back(out_dir / "histograms_initial.csv");
    emit_histograms_csv(run.final_histograms, out_dir / "histograms_final.csv");
    files.push_back(out_dir / "histograms_final.csv");
    for (auto& f : emit_run_plots(run, out_dir)) {
        files.push_back(std::move(f));
    }
    return finish("run", config, out_dir, std::move(files), started_at);
}

std::vector<std::filesystem::path> write_sweep_outputs(const SweepGrid& grid, const SweepConfig& config,
                                                       const std::filesystem::path& out_dir,
                                                       const std::string& started_at) {
    std::vector<std::filesystem::path> files;
    emit_sweep_csv(grid, out_dir / "sweep.csv");
    files.push_back(out_dir / "sweep.csv");
    for (auto& f : emit_sweep_plots(grid, out_dir)) {
        files.push_back(std::move(f));
    }
    return finish("sweep", config, out_dir, std::move(files), started_at);
}

}  // namespace beliefsim
