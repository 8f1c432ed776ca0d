// SPDX-License-Identifier: Apache-2.0
#pragma once

// Beamformers in the reproducing-kernel domain. Every beamformer here is a linear functional
// of the kernel-model coefficients, rho(p) ~ v^T a with a = R s, so its weights are
// w^* = R^T v and the output is w^H s. The steering vector v decides the beam:
//   simple (look direction phi at r):  v_n = exp(i k phi.(r_n - r))
//   general (directivity zeta at r):   v_n = zeta'(d_1) kappa_k(r, r_n)

#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rkbeam/common.hpp"
#include "rkbeam/directivity.hpp"
#include "rkbeam/harmonics.hpp"
#include "rkbeam/kernelfield.hpp"

namespace rkbeam
{

template <typename Scalar>
struct LookDirection
{
    Point<Scalar> direction;
};

template <typename Scalar>
using BeamTarget = std::variant<LookDirection<Scalar>, Directivity<Scalar>>;

template <typename Scalar>
struct BeamWeights
{
    ComplexVector<Scalar> w;
    Scalar k;
    BeamTarget<Scalar> target;
    Point<Scalar> position;
    // |w^H s - v^T solve_coeffs(C, s)| relative to sum |v_n a_n|, on a fixed probe input
    Scalar probe_residual = 0;
};

template <typename Scalar>
struct ExtractionMatrix
{
    ComplexMatrix<Scalar> W; // column m: weights for points[m]
    std::vector<Point<Scalar>> points;
    Scalar k;
    Scalar probe_residual = 0;
};

/// Sensor outputs for the unit plane wave from dir.
template <typename Scalar>
ComplexVector<Scalar> plane_wave_signals(const MicArray<Scalar>& array, Scalar k, const Point<Scalar>& dir)
{
    ComplexVector<Scalar> s(array.size());
    for (Eigen::Index n = 0; n < array.size(); ++n)
        s(n) = plane_wave_response(array[n].directivity, dir, k, array[n].position);
    return s;
}

template <typename Scalar>
ComplexVector<Scalar> steering_vector(const MicArray<Scalar>& array, Scalar k, const BeamTarget<Scalar>& target,
                                      const Point<Scalar>& r)
{
    ComplexVector<Scalar> v(array.size());
    if (const auto* look = std::get_if<LookDirection<Scalar>>(&target)) {
        for (Eigen::Index n = 0; n < array.size(); ++n) {
            const Scalar phase = k * look->direction.dot(array[n].position - r);
            v(n) = Complex<Scalar>(std::cos(phase), std::sin(phase));
        }
    } else {
        const auto& zeta = std::get<Directivity<Scalar>>(target);
        for (Eigen::Index n = 0; n < array.size(); ++n)
            v(n) = rk_directional_derivative(zeta, k, r, array[n].position);
    }
    return v;
}

/// w^H s
template <typename Scalar>
Complex<Scalar> apply(const BeamWeights<Scalar>& w, const ComplexVector<Scalar>& s)
{
    if (w.w.size() != s.size())
        throw std::invalid_argument("weight and signal lengths differ");
    return w.w.dot(s);
}

namespace detail
{

template <typename Scalar>
ComplexVector<Scalar> probe_signal(Eigen::Index n)
{
    ComplexVector<Scalar> s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s(i) = std::polar(Scalar(1) + Scalar(0.1) * Scalar(i % 7), Scalar(0.7) * Scalar(i + 1));
    return s;
}

template <typename Scalar>
void require_matching(const CMatrix<Scalar>& c, const MicArray<Scalar>& array, Scalar k)
{
    if (c.entries.rows() != array.size())
        throw std::invalid_argument("C and the array disagree on the sensor count");
    if (c.k != k)
        throw std::invalid_argument("C was assembled for a different wavenumber");
}

// relative mismatch of w^H s against v^T a on the probe input
template <typename Scalar>
Scalar probe_residual(const CMatrix<Scalar>& c, const ComplexVector<Scalar>& w, const ComplexVector<Scalar>& v,
                      Scalar lambda, LambdaMode mode)
{
    const ComplexVector<Scalar> s = probe_signal<Scalar>(c.entries.rows());
    const ComplexVector<Scalar> a = solve_coeffs(c, s, lambda, mode);
    const Complex<Scalar> expected = (v.array() * a.array()).sum();
    const Scalar scale = (v.array().abs() * a.array().abs()).sum();
    const Scalar diff = std::abs(w.dot(s) - expected);
    return scale > 0 ? diff / scale : diff;
}

} // namespace detail

template <typename Scalar>
BeamWeights<Scalar> beam_weights(const CMatrix<Scalar>& c, const MicArray<Scalar>& array, Scalar k,
                                 const BeamTarget<Scalar>& target, const Point<Scalar>& r, Scalar lambda,
                                 LambdaMode mode = LambdaMode::absolute)
{
    detail::require_matching(c, array, k);
    const ComplexMatrix<Scalar> inv = regularized_inverse(c, lambda, mode);
    const ComplexVector<Scalar> v = steering_vector(array, k, target, r);
    BeamWeights<Scalar> out{(inv.transpose() * v).conjugate(), k, target, r, 0};
    out.probe_residual = detail::probe_residual(c, out.w, v, lambda, mode);
    return out;
}

/// Beam toward phi evaluated at r: output ~ P_b(k phi) exp(-i k phi.r).
template <typename Scalar>
BeamWeights<Scalar> simple_weights(const CMatrix<Scalar>& c, const MicArray<Scalar>& array, Scalar k,
                                   const Point<Scalar>& look, const Point<Scalar>& r, Scalar lambda,
                                   LambdaMode mode = LambdaMode::absolute)
{
    return beam_weights<Scalar>(c, array, k, LookDirection<Scalar>{look}, r, lambda, mode);
}

/// Virtual sensor with directivity zeta at r: output ~ zeta'(D) p(r).
template <typename Scalar>
BeamWeights<Scalar> general_weights(const CMatrix<Scalar>& c, const MicArray<Scalar>& array, Scalar k,
                                    const Directivity<Scalar>& zeta, const Point<Scalar>& r, Scalar lambda,
                                    LambdaMode mode = LambdaMode::absolute)
{
    if (zeta.dim() != array.dim())
        throw std::invalid_argument("beam directivity has the wrong dimension");
    return beam_weights<Scalar>(c, array, k, zeta, r, lambda, mode);
}

/// Stacked weights for a fixed beam moved over points; p = W^H s is the directional field.
template <typename Scalar>
ExtractionMatrix<Scalar> extraction_matrix(const CMatrix<Scalar>& c, const MicArray<Scalar>& array, Scalar k,
                                           const BeamTarget<Scalar>& target, const std::vector<Point<Scalar>>& points,
                                           Scalar lambda, LambdaMode mode = LambdaMode::absolute)
{
    detail::require_matching(c, array, k);
    if (points.empty())
        throw std::invalid_argument("extraction needs at least one point");
    const ComplexMatrix<Scalar> inv = regularized_inverse(c, lambda, mode);
    ComplexMatrix<Scalar> v(array.size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t m = 0; m < points.size(); ++m)
        v.col(static_cast<Eigen::Index>(m)) = steering_vector(array, k, target, points[m]);
    ExtractionMatrix<Scalar> out{(inv.transpose() * v).conjugate(), points, k, 0};
    out.probe_residual = detail::probe_residual<Scalar>(c, out.W.col(0), v.col(0), lambda, mode);
    return out;
}

template <typename Scalar>
ComplexVector<Scalar> extract(const ExtractionMatrix<Scalar>& e, const ComplexVector<Scalar>& s)
{
    if (e.W.rows() != s.size())
        throw std::invalid_argument("extraction matrix and signal lengths differ");
    return e.W.adjoint() * s;
}

/// y(theta) = w^H s(theta) for unit plane waves from each direction.
template <typename Scalar>
ComplexVector<Scalar> beam_pattern(const BeamWeights<Scalar>& w, const MicArray<Scalar>& array, Scalar k,
                                   const std::vector<Point<Scalar>>& directions)
{
    ComplexVector<Scalar> y(static_cast<Eigen::Index>(directions.size()));
    for (std::size_t j = 0; j < directions.size(); ++j)
        y(static_cast<Eigen::Index>(j)) = rkbeam::apply(w, plane_wave_signals(array, k, directions[j]));
    return y;
}

/// DI in dB from a look-direction response and pattern samples on a uniform circle
/// (trapezoid weights 2 pi / n). -infinity when the look response vanishes.
template <typename Scalar>
Scalar directivity_index_from_pattern(Complex<Scalar> look_response, const ComplexVector<Scalar>& uniform_pattern)
{
    const Scalar n = Scalar(uniform_pattern.size());
    const Scalar integral = uniform_pattern.squaredNorm() * 2 * pi_v<Scalar> / n;
    if (!(integral >= Scalar(1e-300)))
        throw DegenerateError("beam pattern has no power; directivity index undefined");
    const Scalar look = std::norm(look_response);
    if (look == 0)
        return -std::numeric_limits<Scalar>::infinity();
    return 10 * std::log10(2 * pi_v<Scalar> * look / integral);
}

/// 10 log10(|S^{d-1}| |y(phi)|^2 / int |y|^2) by angular quadrature of the array response.
/// n_quad counts uniform angles for d = 2 (at least 360) and Gauss-Legendre rings for d = 3.
template <typename Scalar>
Scalar directivity_index(const BeamWeights<Scalar>& w, const MicArray<Scalar>& array, Scalar k,
                         const Point<Scalar>& look, int n_quad)
{
    const int d = array.dim();
    if (d == 2 && n_quad < 360)
        throw std::invalid_argument("directivity_index needs n_quad >= 360");
    const auto quad = sphere_quadrature<Scalar>(d, n_quad);
    Scalar integral = 0;
    for (const auto& q : quad)
        integral += q.weight * std::norm(rkbeam::apply(w, plane_wave_signals(array, k, q.direction)));
    if (!(integral >= Scalar(1e-300)))
        throw DegenerateError("beam pattern has no power; directivity index undefined");
    const Scalar peak = std::norm(rkbeam::apply(w, plane_wave_signals(array, k, look)));
    if (peak == 0)
        return -std::numeric_limits<Scalar>::infinity();
    return 10 * std::log10(surface_area<Scalar>(d) * peak / integral);
}

// ---------------------------------------------------------------------------------------
// Spherical-harmonic-domain weights

/// Axisymmetric beam sum_nu d_nu Psi_nu(theta, look).
template <typename Scalar>
struct AxisymmetricBeam
{
    std::vector<Scalar> degree_weights;
    Point<Scalar> look;
};

template <typename Scalar>
using ShBeamSpec = std::variant<AxisymmetricBeam<Scalar>, HarmonicCoeffs<Scalar>>;

/// w_nu^mu = i^nu d_nu Y_nu^mu(look) / b_nu (axisymmetric) or i^nu c_nu^mu / b_nu (general).
/// radial holds the caller-supplied b_nu(ka) for nu = 0..max_degree; none may vanish.
template <typename Scalar>
HarmonicCoeffs<Scalar> sh_domain_weights(const ShBeamSpec<Scalar>& spec, const std::vector<Complex<Scalar>>& radial)
{
    HarmonicCoeffs<Scalar> w;
    if (const auto* axi = std::get_if<AxisymmetricBeam<Scalar>>(&spec)) {
        if (axi->degree_weights.empty())
            throw std::invalid_argument("axisymmetric beam needs at least one degree weight");
        const int d = static_cast<int>(axi->look.size());
        const int max_degree = static_cast<int>(axi->degree_weights.size()) - 1;
        const Vector<Scalar> y = sph_harm_all<Scalar>(d, max_degree, axi->look);
        w = HarmonicCoeffs<Scalar>(d, max_degree);
        for (int flat = 0; flat < y.size(); ++flat)
            w.coeffs()(flat) = y(flat) * axi->degree_weights[static_cast<std::size_t>(index_from_flat(d, flat).degree)];
    } else {
        w = std::get<HarmonicCoeffs<Scalar>>(spec);
    }

    if (radial.size() < static_cast<std::size_t>(w.max_degree()) + 1)
        throw std::invalid_argument("need one radial value b_nu per degree");
    for (int nu = 0; nu <= w.max_degree(); ++nu) {
        const Complex<Scalar> b = radial[static_cast<std::size_t>(nu)];
        if (b == Complex<Scalar>(0, 0))
            throw DegenerateError("radial function b_" + std::to_string(nu) + " vanishes");
        // i^nu = conj(i^{-nu})
        const Complex<Scalar> factor = std::conj(detail::inverse_i_power<Scalar>(nu)) / b;
        w.coeffs().segment(harmonic_offset(w.dim(), nu), dim_y(w.dim(), nu)) *= factor;
    }
    return w;
}

/// Spherical-harmonic-domain array signal for a unit plane wave from dir:
/// s_nu^mu = i^{-nu} Y_nu^mu(dir) b_nu.
template <typename Scalar>
HarmonicCoeffs<Scalar> plane_wave_sh_signal(int d, int max_degree, const Point<Scalar>& dir,
                                            const std::vector<Complex<Scalar>>& radial)
{
    if (radial.size() < static_cast<std::size_t>(max_degree) + 1)
        throw std::invalid_argument("need one radial value b_nu per degree");
    const Vector<Scalar> y = sph_harm_all<Scalar>(d, max_degree, dir);
    HarmonicCoeffs<Scalar> s(d, max_degree);
    for (int flat = 0; flat < y.size(); ++flat) {
        const int nu = index_from_flat(d, flat).degree;
        s.coeffs()(flat) = detail::inverse_i_power<Scalar>(nu) * y(flat) * radial[static_cast<std::size_t>(nu)];
    }
    return s;
}

/// Beamformer output sum w_nu^mu s_nu^mu in the harmonic domain.
template <typename Scalar>
Complex<Scalar> apply_sh_weights(const HarmonicCoeffs<Scalar>& w, const HarmonicCoeffs<Scalar>& s)
{
    if (w.dim() != s.dim() || w.size() != s.size())
        throw std::invalid_argument("harmonic weight and signal layouts differ");
    return (w.coeffs().array() * s.coeffs().array()).sum();
}

/// sum_nu d_nu (2 nu + 1)/(4 pi) P_nu(cos angle), the d = 3 axisymmetric beam pattern.
template <typename Scalar>
Scalar axisymmetric_pattern(const std::vector<Scalar>& degree_weights, Scalar angle)
{
    const Scalar t = std::cos(angle);
    Scalar sum = 0;
    for (std::size_t nu = 0; nu < degree_weights.size(); ++nu)
        sum += degree_weights[nu] * Scalar(2 * nu + 1) / (4 * pi_v<Scalar>)*legendre_p(static_cast<int>(nu), t);
    return sum;
}

} // namespace rkbeam
