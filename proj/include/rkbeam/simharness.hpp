// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic 2-D scenarios: random directional arrays, analytic test fields, calibrated
// noise, and the reconstruction / beamforming / extraction sweeps with their CSV tables.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rkbeam/rkbeam.hpp"

namespace rkbeam::sim
{

using Array = MicArray<double>;
using CVec = ComplexVector<double>;
using Pt = Point<double>;

/// 40 log-spaced frequencies in [100, 8000] Hz.
std::vector<double> default_frequencies();

struct ScenarioConfig
{
    std::uint64_t seed = 1;
    int dim = 2;
    int num_mics = 30;
    double side = 0.4;       // m, microphones uniform in the centred square
    int max_degree = 2;
    double snr_db = 30.0;    // +inf disables noise
    double lambda = 1e-3;
    bool lambda_relative = false;
    double c_sound = 343.0;  // m/s
    std::vector<double> frequencies = default_frequencies();
    double eval_side = 0.5;  // m
    int eval_grid_n = 51;
    double look_angle = std::numbers::pi / 4; // rad; also the plane-wave arrival direction
    int pattern_points = 360;
    int di_quad_points = 3600;
    double pattern_freq = 1000.0; // Hz, single-frequency `pattern` runs
    // replaces the random array when set (config `mic` entries)
    std::optional<Array> explicit_array;

    LambdaMode lambda_mode() const { return lambda_relative ? LambdaMode::relative : LambdaMode::absolute; }
};

inline double wavenumber(double freq_hz, double c_sound)
{
    return 2.0 * std::numbers::pi * freq_hz / c_sound;
}

struct PlaneWave
{
    Pt direction;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// kappa_k(., 0): equal-amplitude, equal-phase plane waves from every direction.
struct KernelAtOrigin
{
};

/// sum p_nu^mu big_j(d, nu, k|r|) Y_nu^mu(r/|r|)
struct ModeField
{
    HarmonicCoeffs<double> coeffs;
};

using FieldSpec = std::variant<PlaneWave, KernelAtOrigin, ModeField>;

/// Independent stream for (seed, purpose, index); streams never overlap across frequencies.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index);

inline constexpr std::uint64_t kArrayStream = 0;
inline constexpr std::uint64_t kNoiseStream = 1;

Array gen_array(const ScenarioConfig& cfg);

/// Field value at a point (the reference for error metrics).
Complex<double> field_value(const FieldSpec& field, int d, double k, const Pt& r);

/// Output of every sensor for the field, in array order.
CVec sample_field(const FieldSpec& field, const Array& array, double k);

/// Adds circular complex Gaussian noise with per-element variance mean|s|^2 10^{-snr/10}.
CVec add_noise(const CVec& s, double snr_db, std::mt19937_64& rng);

struct MneResult
{
    double db = 0;
    int excluded = 0;
    int used = 0;
};

inline constexpr double kMneFloorDb = -300.0;
inline constexpr double kMneExcludeBelow = 1e-12;

/// Mean over points of 20 log10(|ref - est| / |ref|); points with |ref| < 1e-12 are skipped.
MneResult mne(const CVec& ref, const CVec& est);

/// eval_grid_n x eval_grid_n points over the centred eval_side square, row-major in y then x.
std::vector<Pt> eval_grid(const ScenarioConfig& cfg);

struct ReconstructionRecord
{
    double freq_hz;
    double k;
    double mne_proposed_db;
    double mne_omni_db;
    double cond_c;
    int excluded_points;
};

struct BeamformingRecord
{
    double freq_hz;
    double k;
    double di_db;
    double peak_angle_deg;
    CVec pattern; // pattern_points samples at angles 360 j / pattern_points degrees
    Complex<double> look_response;
};

struct ExtractionRecord
{
    double freq_hz;
    double k;
    double mne_db;
    double amplitude;
    double phase_rad;
    int excluded_points;
};

template <typename Record>
struct ScenarioResult
{
    ScenarioConfig config;
    std::vector<Record> records;
};

using ReconstructionResult = ScenarioResult<ReconstructionRecord>;
using BeamformingResult = ScenarioResult<BeamformingRecord>;
using ExtractionResult = ScenarioResult<ExtractionRecord>;

/// Plane wave from look_angle; Proposed (true directivities) and Omni (zeta == 1) models.
ReconstructionResult run_reconstruction(const ScenarioConfig& cfg, unsigned threads = 1);

/// Simple beamformer at the origin toward look_angle; DI and the sampled beam pattern.
BeamformingResult run_beamforming(const ScenarioConfig& cfg, unsigned threads = 1);

/// Field kappa_k(., 0), simple beam toward look_angle swept over the evaluation grid.
ExtractionResult run_extraction(const ScenarioConfig& cfg, unsigned threads = 1);

/// Single-frequency beam pattern at cfg.pattern_freq.
BeamformingRecord run_pattern(const ScenarioConfig& cfg);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string to_string() const;
};

CsvTable to_table(const ReconstructionResult& result);
CsvTable to_table(const BeamformingResult& result);
CsvTable to_table(const ExtractionResult& result);
/// angle_deg, re, im, magnitude_db (normalized to the look direction)
CsvTable pattern_table(const BeamformingRecord& record);
/// freq_hz followed by pattern_table columns, all frequencies
CsvTable pattern_table(const BeamformingResult& result);

/// Round-trippable config text plus commented provenance lines.
std::string metadata(const ScenarioConfig& cfg, std::string_view scenario);

/// Formats a double with 17 significant digits ("inf"/"-inf"/"nan" for non-finite values).
std::string format_double(double v);

} // namespace rkbeam::sim
