// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rkbeam/rkbeam.hpp"
#include "rkbeam/selftest.hpp"
#include "rkbeam/simharness.hpp"

using namespace rkbeam;
using namespace rkbeam::sim;
using std::numbers::pi;

namespace
{

constexpr int kSeeds = 10;

struct Outcome
{
    bool passed;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, double limit_s, const std::function<Outcome()>& check)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = limit_s <= 0 || secs < limit_s;
    const bool ok = out.passed && in_time;
    if (!ok)
        ++failures;
    std::printf("%s %-5s %s: %s [%.2fs%s]\n", ok ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs,
                in_time ? "" : " over time limit");
    std::fflush(stdout);
}

Outcome suite(const selftest::SuiteResult& r)
{
    std::ostringstream os;
    os << "max error " << r.max_error << " (tol " << r.tolerance << ") over " << r.cases << " cases";
    return {r.passed, os.str()};
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ScenarioConfig table2(std::uint64_t seed, std::vector<double> freqs)
{
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.frequencies = std::move(freqs);
    return cfg;
}

double angle_gap_deg(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), 360.0);
    return std::min(d, 360.0 - d);
}

Outcome reproducing_property()
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    double worst = 0;
    int arrays = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Microphone<double>> mics;
        for (int n = 0; n < 15; ++n) {
            const double x = u(rng);
            mics.push_back({point_2d(x, u(rng)), omnidirectional<double>(2)});
        }
        const MicArray<double> array(2, mics);
        const double k = wavenumber(2000.0, 343.0);
        const auto c = build_c(array, k, 0);
        if (condition_number(c.entries) >= 1e10)
            continue;
        ++arrays;
        const auto centers = array.positions();
        const Pt src = centers[static_cast<std::size_t>(trial) % centers.size()];
        CVec s(array.size());
        for (Eigen::Index n = 0; n < s.size(); ++n)
            s(n) = rk_directional_derivative(array[n].directivity, k, array[n].position, src);
        const KernelField<double> field{2, k, centers, solve_coeffs(c, s, 0.0)};
        std::vector<Pt> eval;
        for (int m = 0; m < 100; ++m) {
            const double x = u(rng);
            eval.push_back(point_2d(x, u(rng)));
        }
        const CVec got = reconstruct(field, eval);
        for (std::size_t m = 0; m < eval.size(); ++m)
            worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(m)) - kernel(2, k, eval[m], src)) /
                                        surface_area<double>(2));
    }
    std::ostringstream os;
    os << "max relative error " << worst << " over " << arrays << " condition-guarded arrays";
    return {arrays >= 5 && worst <= 1e-8, os.str()};
}

Outcome reconstruction_vs_omni()
{
    int wins = 0;
    std::vector<double> low_gap;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto res = run_reconstruction(table2(static_cast<std::uint64_t>(seed), {100.0, 1000.0}), 2);
        low_gap.push_back(std::abs(res.records[0].mne_proposed_db - res.records[0].mne_omni_db));
        if (res.records[1].mne_proposed_db < res.records[1].mne_omni_db)
            ++wins;
    }
    const double gap = median(low_gap);
    std::ostringstream os;
    os << "1 kHz proposed < omni for " << wins << "/" << kSeeds << " seeds (need 8); 100 Hz median |diff| " << gap
       << " dB (need <= 3)";
    return {wins >= 8 && gap <= 3.0, os.str()};
}

Outcome di_trend()
{
    int good = 0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto res = run_beamforming(table2(static_cast<std::uint64_t>(seed), {250.0, 1000.0, 2000.0, 8000.0}), 2);
        const auto& r = res.records;
        if (r[0].di_db < r[1].di_db && r[1].di_db < r[2].di_db && r[3].di_db < r[2].di_db)
            ++good;
    }
    return {good >= 8, "DI(250) < DI(1k) < DI(2k) > DI(8k) for " + std::to_string(good) + "/10 seeds"};
}

Outcome main_lobe()
{
    int good = 0;
    double worst = 0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto res = run_beamforming(table2(static_cast<std::uint64_t>(seed), {1000.0}), 1);
        const double gap = angle_gap_deg(res.records[0].peak_angle_deg, res.config.look_angle * 180 / pi);
        worst = std::max(worst, gap);
        if (gap <= 5.0)
            ++good;
    }
    std::ostringstream os;
    os << "peak within 5 deg of look for " << good << "/10 seeds, worst offset " << worst << " deg";
    return {good >= 8, os.str()};
}

Outcome extraction_accuracy()
{
    bool clean_ok = true;
    double worst_amp = 0;
    double worst_phase = 0;
    int noisy_ok = 0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        auto cfg = table2(static_cast<std::uint64_t>(seed), {1000.0});
        cfg.snr_db = std::numeric_limits<double>::infinity();
        const auto clean = run_extraction(cfg, 1).records[0];
        worst_amp = std::max(worst_amp, std::abs(clean.amplitude - 1));
        worst_phase = std::max(worst_phase, std::abs(clean.phase_rad));
        clean_ok = clean_ok && clean.amplitude >= 0.9 && clean.amplitude <= 1.1 && std::abs(clean.phase_rad) <= 0.1;
        cfg.snr_db = 30.0;
        const auto noisy = run_extraction(cfg, 1).records[0];
        if (noisy.amplitude >= 0.8 && noisy.amplitude <= 1.2)
            ++noisy_ok;
    }
    std::ostringstream os;
    os << "noiseless max |A-1| " << worst_amp << ", max |phase| " << worst_phase << " rad; 30 dB amplitude in range for "
       << noisy_ok << "/10 seeds";
    return {clean_ok && noisy_ok >= 8, os.str()};
}

Outcome sh_consistency()
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1, 1);
    std::normal_distribution<double> g;
    auto unit = [&] {
        Pt v(3);
        v << g(rng), g(rng), g(rng);
        return Pt(v / v.norm());
    };
    double worst = 0;
    int cases = 0;
    for (int max_degree = 0; max_degree <= 3; ++max_degree)
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<double> dnu;
            std::vector<Complex<double>> b;
            for (int nu = 0; nu <= max_degree; ++nu) {
                dnu.push_back(u(rng));
                const double re = u(rng);
                b.push_back(std::polar(0.2 + std::abs(re), u(rng) * pi));
            }
            const Pt look = unit();
            const Pt dir = unit();
            const auto w = sh_domain_weights<double>(AxisymmetricBeam<double>{dnu, look}, b);
            const auto s = plane_wave_sh_signal<double>(3, max_degree, dir, b);
            const Complex<double> y = apply_sh_weights(w, s);
            const double angle = std::acos(std::clamp(look.dot(dir), -1.0, 1.0));
            worst = std::max(worst, std::abs(y - axisymmetric_pattern(dnu, angle)));
            ++cases;
        }
    std::ostringstream os;
    os << "max |w.s - closed form| " << worst << " over " << cases << " cases";
    return {worst <= 1e-10, os.str()};
}

Outcome determinism()
{
    ScenarioConfig cfg;
    cfg.seed = 3;
    bool same = true;
    std::vector<std::string> differing;
    auto compare = [&](const std::string& name, const std::string& a, const std::string& b) {
        if (a != b) {
            same = false;
            differing.push_back(name);
        }
    };
    compare("reconstruction", to_table(run_reconstruction(cfg, 1)).to_string(),
            to_table(run_reconstruction(cfg, 1)).to_string());
    compare("reconstruction threads", to_table(run_reconstruction(cfg, 1)).to_string(),
            to_table(run_reconstruction(cfg, 4)).to_string());
    const auto b1 = run_beamforming(cfg, 1);
    const auto b2 = run_beamforming(cfg, 4);
    compare("beamforming", to_table(b1).to_string(), to_table(run_beamforming(cfg, 1)).to_string());
    compare("beamforming threads", to_table(b1).to_string() + pattern_table(b1).to_string(),
            to_table(b2).to_string() + pattern_table(b2).to_string());
    compare("extraction", to_table(run_extraction(cfg, 1)).to_string(), to_table(run_extraction(cfg, 1)).to_string());
    compare("extraction threads", to_table(run_extraction(cfg, 1)).to_string(),
            to_table(run_extraction(cfg, 4)).to_string());
    compare("pattern", pattern_table(run_pattern(cfg)).to_string(), pattern_table(run_pattern(cfg)).to_string());
    std::string detail = "reconstruction, beamforming, extraction and pattern CSVs byte-identical across runs and thread counts";
    if (!same) {
        detail = "differs:";
        for (const auto& d : differing)
            detail += " " + d;
    }
    return {same, detail};
}

} // namespace

int main()
{
    report("AC1", "induced operator on plane waves", 5, [] { return suite(selftest::appendix_a()); });
    report("AC2", "nested radial derivative identity", 5, [] { return suite(selftest::appendix_b()); });
    report("AC3", "mode coefficients at the origin", 10, [] { return suite(selftest::appendix_c()); });
    report("AC4", "kernel derivative vs finite differences", 10, [] { return suite(selftest::hobson_corollary()); });
    report("AC5", "reproducing property round trip", 1, reproducing_property);
    report("AC6", "reconstruction error, proposed vs omni", 120, reconstruction_vs_omni);
    report("AC7", "directivity index vs frequency", 120, di_trend);
    report("AC8", "main lobe toward the look direction", 0, main_lobe);
    report("AC9", "extracted amplitude and phase", 0, extraction_accuracy);
    report("AC10", "harmonic-domain weights vs closed form", 1, sh_consistency);
    report("AC11", "deterministic CSV output", 0, determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
