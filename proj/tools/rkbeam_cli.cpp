// SPDX-License-Identifier: Apache-2.0
// rkbeam: scenario runs, property self-tests and single-frequency beam patterns.
//
// Exit codes: 0 success, 1 self-test failure, 2 configuration or usage error,
// 3 numerical failure (singular C without regularization).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "rkbeam/config.hpp"
#include "rkbeam/selftest.hpp"
#include "rkbeam/simharness.hpp"

namespace fs = std::filesystem;
using namespace rkbeam;
using namespace rkbeam::sim;

namespace
{

constexpr int kExitSelftest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options
{
    std::string config_path;
    std::optional<std::string> seed;
    std::optional<std::string> freq_list;
    std::optional<std::string> lambda;
    std::optional<std::string> snr;
    std::optional<std::string> freq;
    std::string out_dir = ".";
};

unsigned thread_budget()
{
    if (const char* env = std::getenv("RKBEAM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("RKBEAM_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioConfig effective_config(const Options& o)
{
    ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
    if (o.seed)
        set_config_value(cfg, "seed", *o.seed);
    if (o.freq_list)
        set_config_value(cfg, "frequencies", *o.freq_list);
    if (o.lambda)
        set_config_value(cfg, "lambda", *o.lambda);
    if (o.snr)
        set_config_value(cfg, "snr_db", *o.snr);
    if (o.freq)
        set_config_value(cfg, "pattern_freq", *o.freq);
    return cfg;
}

// temp file + rename so readers never see a partial CSV
void write_atomic(const fs::path& path, const std::string& text)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write '" + tmp.string() + "'");
        out << text;
        out.close();
        if (!out)
            throw ConfigError("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

void emit(const Options& o, const std::string& name, const CsvTable& table, const ScenarioConfig& cfg,
          const std::string& scenario)
{
    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir))
        throw ConfigError("output directory '" + o.out_dir + "' is not usable");
    const fs::path csv = dir / (name + ".csv");
    write_atomic(csv, table.to_string());
    write_atomic(dir / (name + ".meta"), metadata(cfg, scenario));
    std::cout << "wrote " << csv.string() << "\n";
}

int cmd_reconstruct(const Options& o)
{
    const auto cfg = effective_config(o);
    const auto res = run_reconstruction(cfg, thread_budget());
    for (const auto& r : res.records)
        std::cout << "f=" << format_double(r.freq_hz) << " Hz  proposed=" << r.mne_proposed_db
                  << " dB  omni=" << r.mne_omni_db << " dB  cond=" << r.cond_c << "\n";
    emit(o, "reconstruction", to_table(res), cfg, "reconstruction");
    return 0;
}

int cmd_beamform(const Options& o)
{
    const auto cfg = effective_config(o);
    const auto res = run_beamforming(cfg, thread_budget());
    for (const auto& r : res.records)
        std::cout << "f=" << format_double(r.freq_hz) << " Hz  DI=" << r.di_db << " dB  peak=" << r.peak_angle_deg
                  << " deg\n";
    emit(o, "beamforming", to_table(res), cfg, "beamforming");
    emit(o, "beamforming_patterns", pattern_table(res), cfg, "beamforming");
    return 0;
}

int cmd_extract(const Options& o)
{
    const auto cfg = effective_config(o);
    const auto res = run_extraction(cfg, thread_budget());
    for (const auto& r : res.records)
        std::cout << "f=" << format_double(r.freq_hz) << " Hz  mne=" << r.mne_db << " dB  amplitude=" << r.amplitude
                  << "  phase=" << r.phase_rad << " rad\n";
    emit(o, "extraction", to_table(res), cfg, "extraction");
    return 0;
}

int cmd_pattern(const Options& o)
{
    const auto cfg = effective_config(o);
    const auto rec = run_pattern(cfg);
    std::cout << "f=" << format_double(rec.freq_hz) << " Hz  DI=" << rec.di_db << " dB  peak=" << rec.peak_angle_deg
              << " deg\n";
    emit(o, "pattern", pattern_table(rec), cfg, "pattern");
    return 0;
}

int cmd_selftest()
{
    bool ok = true;
    for (const auto& r : selftest::run_all()) {
        std::cout << selftest::format(r) << "\n";
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all suites passed" : "self-test FAILED") << "\n";
    return ok ? 0 : kExitSelftest;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reproducing-kernel beamforming for arrays of directional microphones"};
    app.require_subcommand(1);
    Options o;

    auto add_scenario_flags = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "key = value scenario file");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--freq-list", o.freq_list, "comma-separated frequencies in Hz");
        sub->add_option("--lambda", o.lambda, "Tikhonov parameter (0 solves exactly)");
        sub->add_option("--snr", o.snr, "SNR in dB, or inf for noiseless");
        sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    };

    auto* reconstruct = app.add_subcommand("reconstruct", "plane-wave reconstruction error sweep");
    auto* beamform = app.add_subcommand("beamform", "directivity index and beam patterns sweep");
    auto* extract = app.add_subcommand("extract", "directional field extraction sweep");
    auto* pattern = app.add_subcommand("pattern", "beam pattern at one frequency");
    auto* selftest = app.add_subcommand("selftest", "run the numerical property suites");
    for (auto* sub : {reconstruct, beamform, extract, pattern})
        add_scenario_flags(sub);
    pattern->add_option("--freq", o.freq, "frequency in Hz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*reconstruct)
            return cmd_reconstruct(o);
        if (*beamform)
            return cmd_beamform(o);
        if (*extract)
            return cmd_extract(o);
        if (*pattern)
            return cmd_pattern(o);
        return cmd_selftest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SingularMatrixError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
