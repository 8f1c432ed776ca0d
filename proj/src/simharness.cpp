// SPDX-License-Identifier: Apache-2.0
#include "rkbeam/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rkbeam/config.hpp"

#ifndef RKBEAM_VERSION
#define RKBEAM_VERSION "unknown"
#endif

namespace rkbeam::sim
{

namespace
{

constexpr double kPi = std::numbers::pi;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written by index,
// so the output never depends on the schedule.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

void validate(const ScenarioConfig& cfg)
{
    if (cfg.dim != 2)
        throw std::invalid_argument("scenarios are defined for d = 2 only");
    if (cfg.num_mics < 1)
        throw std::invalid_argument("num_mics must be at least 1");
    if (!(cfg.side > 0) || !(cfg.eval_side > 0))
        throw std::invalid_argument("side and eval_side must be positive");
    if (cfg.max_degree < 0)
        throw std::invalid_argument("max_degree must be non-negative");
    if (cfg.eval_grid_n < 1)
        throw std::invalid_argument("eval_grid_n must be at least 1");
    if (!(cfg.c_sound > 0))
        throw std::invalid_argument("c_sound must be positive");
    if (cfg.pattern_points < 1)
        throw std::invalid_argument("pattern_points must be at least 1");
    if (cfg.di_quad_points < 360)
        throw std::invalid_argument("di_quad_points must be at least 360");
    for (double f : cfg.frequencies)
        if (!(f > 0) || !std::isfinite(f))
            throw std::invalid_argument("frequencies must be positive and finite");
    if (cfg.explicit_array && cfg.explicit_array->dim() != cfg.dim)
        throw std::invalid_argument("explicit array dimension differs from dim");
}

Array scenario_array(const ScenarioConfig& cfg)
{
    validate(cfg);
    return cfg.explicit_array ? *cfg.explicit_array : gen_array(cfg);
}

double wrap_degrees(double deg)
{
    deg = std::fmod(deg, 360.0);
    return deg < 0 ? deg + 360.0 : deg;
}

std::vector<Pt> circle(int n, double start)
{
    std::vector<Pt> dirs;
    dirs.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        dirs.push_back(direction_2d(start + 2 * kPi * j / n));
    return dirs;
}

bool noisy(const ScenarioConfig& cfg)
{
    return std::isfinite(cfg.snr_db);
}

// Beam pattern and DI at one frequency; noise (if any) is drawn per incidence direction.
BeamformingRecord beamform_one(const ScenarioConfig& cfg, const Array& array, double freq, std::size_t index)
{
    const double k = wavenumber(freq, cfg.c_sound);
    auto rng = stream_rng(cfg.seed, kNoiseStream, index);
    const auto c = build_c(array, k, array.max_degree());
    const Pt origin = Pt::Zero(cfg.dim);
    const Pt look = direction_2d(cfg.look_angle);
    const auto w = simple_weights(c, array, k, look, origin, cfg.lambda, cfg.lambda_mode());

    auto response = [&](const Pt& dir) {
        CVec s = plane_wave_signals(array, k, dir);
        if (noisy(cfg))
            s = add_noise(s, cfg.snr_db, rng);
        return rkbeam::apply(w, s);
    };

    BeamformingRecord rec{freq, k, 0, 0, CVec(cfg.pattern_points), {}};

    // DI grid anchored at the look direction so sample 0 is y(look)
    CVec quad(cfg.di_quad_points);
    const auto quad_dirs = circle(cfg.di_quad_points, cfg.look_angle);
    for (int j = 0; j < cfg.di_quad_points; ++j)
        quad(j) = response(quad_dirs[static_cast<std::size_t>(j)]);
    rec.look_response = quad(0);
    rec.di_db = directivity_index_from_pattern(rec.look_response, quad);

    const auto dirs = circle(cfg.pattern_points, 0.0);
    Eigen::Index peak = 0;
    for (int j = 0; j < cfg.pattern_points; ++j) {
        rec.pattern(j) = response(dirs[static_cast<std::size_t>(j)]);
        if (std::abs(rec.pattern(j)) > std::abs(rec.pattern(peak)))
            peak = j;
    }
    rec.peak_angle_deg = 360.0 * static_cast<double>(peak) / cfg.pattern_points;
    return rec;
}

std::string header_line(const std::vector<std::string>& names)
{
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i)
        out += (i ? "," : "") + names[i];
    return out;
}

} // namespace

std::vector<double> default_frequencies()
{
    constexpr int n = 40;
    std::vector<double> f(n);
    const double lo = std::log10(100.0);
    const double hi = std::log10(8000.0);
    for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
    f.front() = 100.0;
    f.back() = 8000.0;
    return f;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

Array gen_array(const ScenarioConfig& cfg)
{
    if (cfg.num_mics < 1)
        throw std::invalid_argument("num_mics must be at least 1");
    require_dimension(cfg.dim);
    auto rng = stream_rng(cfg.seed, kArrayStream, 0);
    std::uniform_real_distribution<double> pos(-cfg.side / 2, cfg.side / 2);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double omni = std::sqrt(surface_area<double>(cfg.dim));

    std::vector<Microphone<double>> mics;
    mics.reserve(static_cast<std::size_t>(cfg.num_mics));
    for (int n = 0; n < cfg.num_mics; ++n) {
        Pt r(cfg.dim);
        for (int c = 0; c < cfg.dim; ++c)
            r(c) = pos(rng);
        Directivity<double> zeta(cfg.dim, cfg.max_degree);
        for (Eigen::Index i = 0; i < zeta.size(); ++i) {
            const double re = coef(rng);
            const double im = coef(rng);
            zeta.coeffs()(i) = {re, im};
        }
        // map |c_0| from [0, sqrt 2] linearly onto [0.5, 1.5] sqrt|S|, keeping the phase
        auto& c0 = zeta.coeffs()(0);
        const double mag = std::abs(c0);
        const double phase = mag > 0 ? std::arg(c0) : 0.0;
        c0 = std::polar(omni * (0.5 + std::min(mag / std::sqrt(2.0), 1.0)), phase);
        mics.push_back({std::move(r), std::move(zeta)});
    }
    return Array(cfg.dim, std::move(mics));
}

Complex<double> field_value(const FieldSpec& field, int d, double k, const Pt& r)
{
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double phase = pw->phase - k * pw->direction.dot(r);
        return std::polar(pw->amplitude, phase);
    }
    if (std::holds_alternative<KernelAtOrigin>(field))
        return kernel<double>(d, k, r, Pt::Zero(d));
    const auto& mode = std::get<ModeField>(field).coeffs;
    const double rho = r.norm();
    const auto radial = big_j_sequence<double>(d, mode.max_degree(), k * rho);
    Pt dir = Pt::Zero(d);
    if (rho > 0)
        dir = r / rho;
    else
        dir(0) = 1; // only degree 0 survives at the origin
    const Vector<double> y = sph_harm_all<double>(d, mode.max_degree(), dir);
    Complex<double> sum(0, 0);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        sum += mode.coeffs()(i) * radial[static_cast<std::size_t>(index_from_flat(d, static_cast<int>(i)).degree)] * y(i);
    return sum;
}

CVec sample_field(const FieldSpec& field, const Array& array, double k)
{
    detail::require_wavenumber(k);
    const int d = array.dim();
    CVec s(array.size());
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double norm = pw->direction.norm();
        if (pw->direction.size() != d || std::abs(norm - 1) > 1e-12)
            throw std::invalid_argument("plane-wave direction must be a unit vector in R^d");
        const Complex<double> scale = std::polar(pw->amplitude, pw->phase);
        for (Eigen::Index n = 0; n < array.size(); ++n)
            s(n) = scale * plane_wave_response(array[n].directivity, pw->direction, k, array[n].position);
        return s;
    }
    if (std::holds_alternative<KernelAtOrigin>(field)) {
        const Pt origin = Pt::Zero(d);
        for (Eigen::Index n = 0; n < array.size(); ++n)
            s(n) = rk_directional_derivative(array[n].directivity, k, array[n].position, origin);
        return s;
    }
    // Mode field: angular spectrum P(theta) = sum p_nu^mu i^nu Y_nu^mu(theta); sensor output is
    // int P zeta exp(-i k theta.r) dtheta. The integrand is band-limited, so a fine rule is exact.
    const auto& mode = std::get<ModeField>(field).coeffs;
    if (mode.dim() != d)
        throw std::invalid_argument("mode field dimension differs from the array");
    HarmonicCoeffs<double> spectrum = mode;
    for (int nu = 0; nu <= mode.max_degree(); ++nu)
        spectrum.coeffs().segment(harmonic_offset(d, nu), dim_y(d, nu)) *= std::conj(detail::inverse_i_power<double>(nu));
    double extent = 0;
    for (const auto& m : array)
        extent = std::max(extent, m.position.norm());
    const int deg = mode.max_degree() + array.max_degree() + static_cast<int>(std::ceil(k * extent)) + 16;
    const auto quad = sphere_quadrature<double>(d, d == 2 ? 2 * deg + 1 : deg + 1);
    s.setZero();
    for (const auto& q : quad) {
        const Complex<double> p = synthesize(spectrum, q.direction);
        for (Eigen::Index n = 0; n < array.size(); ++n)
            s(n) += q.weight * p * plane_wave_response(array[n].directivity, q.direction, k, array[n].position);
    }
    return s;
}

CVec add_noise(const CVec& s, double snr_db, std::mt19937_64& rng)
{
    if (std::isinf(snr_db) && snr_db > 0)
        return s;
    if (std::isnan(snr_db))
        throw std::invalid_argument("snr_db is NaN");
    if (s.size() == 0 || s.squaredNorm() == 0)
        throw DegenerateError("cannot calibrate noise against an all-zero signal");
    const double power = s.squaredNorm() / static_cast<double>(s.size());
    const double sigma2 = power * std::pow(10.0, -snr_db / 10.0);
    // circular: real and imaginary parts each carry half the variance
    std::normal_distribution<double> g(0.0, std::sqrt(sigma2 / 2));
    CVec out = s;
    for (Eigen::Index n = 0; n < out.size(); ++n) {
        const double re = g(rng);
        const double im = g(rng);
        out(n) += Complex<double>(re, im);
    }
    return out;
}

MneResult mne(const CVec& ref, const CVec& est)
{
    if (ref.size() != est.size())
        throw std::invalid_argument("mne: reference and estimate lengths differ");
    MneResult r;
    double sum = 0;
    for (Eigen::Index m = 0; m < ref.size(); ++m) {
        const double a = std::abs(ref(m));
        if (a < kMneExcludeBelow) {
            ++r.excluded;
            continue;
        }
        const double ratio = std::abs(ref(m) - est(m)) / a;
        sum += ratio > 0 ? std::max(20 * std::log10(ratio), kMneFloorDb) : kMneFloorDb;
        ++r.used;
    }
    if (r.used == 0)
        throw DegenerateError("mne: every reference point was excluded");
    r.db = sum / r.used;
    return r;
}

std::vector<Pt> eval_grid(const ScenarioConfig& cfg)
{
    const int n = cfg.eval_grid_n;
    std::vector<Pt> pts;
    pts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    auto coord = [&](int i) { return n == 1 ? 0.0 : -cfg.eval_side / 2 + cfg.eval_side * i / (n - 1); };
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            pts.push_back(point_2d(coord(ix), coord(iy)));
    return pts;
}

ReconstructionResult run_reconstruction(const ScenarioConfig& cfg, unsigned threads)
{
    const Array array = scenario_array(cfg);
    const Array omni = array.assume_omnidirectional();
    const auto grid = eval_grid(cfg);
    const auto centers = array.positions();
    const PlaneWave wave{direction_2d(cfg.look_angle), 1.0, 0.0};

    ReconstructionResult out{cfg, std::vector<ReconstructionRecord>(cfg.frequencies.size())};
    parallel_for(cfg.frequencies.size(), threads, [&](std::size_t i) {
        const double freq = cfg.frequencies[i];
        const double k = wavenumber(freq, cfg.c_sound);
        auto rng = stream_rng(cfg.seed, kNoiseStream, i);
        CVec s = sample_field(wave, array, k);
        if (noisy(cfg))
            s = add_noise(s, cfg.snr_db, rng);

        CVec ref(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t m = 0; m < grid.size(); ++m)
            ref(static_cast<Eigen::Index>(m)) = field_value(wave, cfg.dim, k, grid[m]);

        const auto c_prop = build_c(array, k, array.max_degree());
        const auto c_omni = build_c(omni, k, 0);
        const KernelField<double> prop{cfg.dim, k, centers, solve_coeffs(c_prop, s, cfg.lambda, cfg.lambda_mode())};
        const KernelField<double> base{cfg.dim, k, centers, solve_coeffs(c_omni, s, cfg.lambda, cfg.lambda_mode())};
        const auto e_prop = mne(ref, reconstruct(prop, grid));
        const auto e_omni = mne(ref, reconstruct(base, grid));
        out.records[i] = {freq, k, e_prop.db, e_omni.db, condition_number(c_prop.entries), e_prop.excluded};
    });
    return out;
}

BeamformingResult run_beamforming(const ScenarioConfig& cfg, unsigned threads)
{
    const Array array = scenario_array(cfg);
    BeamformingResult out{cfg, std::vector<BeamformingRecord>(cfg.frequencies.size())};
    parallel_for(cfg.frequencies.size(), threads,
                 [&](std::size_t i) { out.records[i] = beamform_one(cfg, array, cfg.frequencies[i], i); });
    return out;
}

BeamformingRecord run_pattern(const ScenarioConfig& cfg)
{
    if (!(cfg.pattern_freq > 0) || !std::isfinite(cfg.pattern_freq))
        throw std::invalid_argument("pattern_freq must be positive and finite");
    return beamform_one(cfg, scenario_array(cfg), cfg.pattern_freq, 0);
}

ExtractionResult run_extraction(const ScenarioConfig& cfg, unsigned threads)
{
    const Array array = scenario_array(cfg);
    const auto grid = eval_grid(cfg);
    const auto centers = array.positions();
    const Pt look = direction_2d(cfg.look_angle);

    ExtractionResult out{cfg, std::vector<ExtractionRecord>(cfg.frequencies.size())};
    parallel_for(cfg.frequencies.size(), threads, [&](std::size_t i) {
        const double freq = cfg.frequencies[i];
        const double k = wavenumber(freq, cfg.c_sound);
        auto rng = stream_rng(cfg.seed, kNoiseStream, i);
        CVec s = sample_field(KernelAtOrigin{}, array, k);
        if (noisy(cfg))
            s = add_noise(s, cfg.snr_db, rng);

        const auto c = build_c(array, k, array.max_degree());
        const auto e = extraction_matrix(c, array, k, BeamTarget<double>{LookDirection<double>{look}}, grid, cfg.lambda,
                                         cfg.lambda_mode());
        const CVec got = extract(e, s);
        CVec desired(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t m = 0; m < grid.size(); ++m)
            desired(static_cast<Eigen::Index>(m)) = std::polar(1.0, -k * look.dot(grid[m]));
        const auto err = mne(desired, got);

        const KernelField<double> field{cfg.dim, k, centers, solve_coeffs(c, s, cfg.lambda, cfg.lambda_mode())};
        const Complex<double> p = estimate_spectrum(field, look);
        out.records[i] = {freq, k, err.db, std::abs(p), std::arg(p), err.excluded};
    });
    return out;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string CsvTable::to_string() const
{
    std::string out = header_line(header) + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

CsvTable to_table(const ReconstructionResult& result)
{
    CsvTable t{{"freq_hz", "k", "mne_proposed_db", "mne_omni_db", "cond_c", "excluded_points"}, {}};
    for (const auto& r : result.records)
        t.rows.push_back({r.freq_hz, r.k, r.mne_proposed_db, r.mne_omni_db, r.cond_c, double(r.excluded_points)});
    return t;
}

CsvTable to_table(const BeamformingResult& result)
{
    CsvTable t{{"freq_hz", "k", "di_db", "peak_angle_deg"}, {}};
    for (const auto& r : result.records)
        t.rows.push_back({r.freq_hz, r.k, r.di_db, r.peak_angle_deg});
    return t;
}

CsvTable to_table(const ExtractionResult& result)
{
    CsvTable t{{"freq_hz", "k", "mne_db", "amplitude", "phase_rad", "excluded_points"}, {}};
    for (const auto& r : result.records)
        t.rows.push_back({r.freq_hz, r.k, r.mne_db, r.amplitude, r.phase_rad, double(r.excluded_points)});
    return t;
}

CsvTable pattern_table(const BeamformingRecord& record)
{
    CsvTable t{{"angle_deg", "re", "im", "magnitude_db"}, {}};
    const auto n = record.pattern.size();
    const double ref = std::abs(record.look_response);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex<double> y = record.pattern(j);
        const double mag = std::abs(y);
        const double db = ref > 0 && mag > 0 ? 20 * std::log10(mag / ref) : -std::numeric_limits<double>::infinity();
        t.rows.push_back({wrap_degrees(360.0 * static_cast<double>(j) / static_cast<double>(n)), y.real(), y.imag(), db});
    }
    return t;
}

CsvTable pattern_table(const BeamformingResult& result)
{
    CsvTable t{{"freq_hz", "angle_deg", "re", "im", "magnitude_db"}, {}};
    for (const auto& r : result.records)
        for (auto row : pattern_table(r).rows) {
            row.insert(row.begin(), r.freq_hz);
            t.rows.push_back(std::move(row));
        }
    return t;
}

std::string metadata(const ScenarioConfig& cfg, std::string_view scenario)
{
    std::ostringstream os;
    os << "# rkbeam " << RKBEAM_VERSION << "\n";
    os << "# scenario: " << scenario << "\n";
    os << "# k = 2 pi freq_hz / c_sound\n";
    os << format_config(cfg);
    return os.str();
}

} // namespace rkbeam::sim
