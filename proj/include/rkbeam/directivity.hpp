// SPDX-License-Identifier: Apache-2.0
#pragma once

// Directivity functions as harmonic coefficient vectors and the differential operators they
// induce. A sensor with directivity zeta maps the plane wave exp(-i k theta.r) to
// zeta(theta) exp(-i k theta.r); equivalently it applies the polynomial operator
// sum c'_nu^mu y_nu^mu(D) with c'_nu^mu = (-i k)^{-nu} c_nu^mu to the field.

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rkbeam/common.hpp"
#include "rkbeam/harmonics.hpp"
#include "rkbeam/specialfn.hpp"

namespace rkbeam
{

template <typename Scalar>
using Directivity = HarmonicCoeffs<Scalar>;

/// Coefficients of the operator induced by a directivity at wavenumber k.
template <typename Scalar>
struct InducedCoeffs
{
    HarmonicCoeffs<Scalar> coeffs;
    Scalar k;
};

namespace detail
{

// i^{-nu}
template <typename Scalar>
Complex<Scalar> inverse_i_power(int nu)
{
    switch (((nu % 4) + 4) % 4) {
    case 0:
        return {1, 0};
    case 1:
        return {0, -1};
    case 2:
        return {-1, 0};
    default:
        return {0, 1};
    }
}

template <typename Scalar>
void require_wavenumber(Scalar k)
{
    if (!(k > 0) || !std::isfinite(k))
        throw DomainError("wavenumber must be positive and finite");
}

} // namespace detail

/// zeta == 1: c_0^0 = sqrt(|S^{d-1}|), everything else zero.
template <typename Scalar>
Directivity<Scalar> omnidirectional(int d, int max_degree = 0)
{
    Directivity<Scalar> z(d, max_degree);
    z(0, 0) = std::sqrt(surface_area<Scalar>(d));
    return z;
}

/// Copy with a different truncation degree; new coefficients are zero.
template <typename Scalar>
Directivity<Scalar> with_max_degree(const Directivity<Scalar>& zeta, int max_degree)
{
    Directivity<Scalar> out(zeta.dim(), max_degree);
    const Eigen::Index n = std::min(out.size(), zeta.size());
    out.coeffs().head(n) = zeta.coeffs().head(n);
    return out;
}

template <typename Scalar>
InducedCoeffs<Scalar> induce(const Directivity<Scalar>& zeta, Scalar k)
{
    detail::require_wavenumber(k);
    InducedCoeffs<Scalar> out{zeta, k};
    // (-i k)^{-1} = i / k
    const Complex<Scalar> step(0, 1 / k);
    Complex<Scalar> factor(1, 0);
    for (int nu = 0; nu <= zeta.max_degree(); ++nu) {
        const int off = harmonic_offset(zeta.dim(), nu);
        out.coeffs.coeffs().segment(off, dim_y(zeta.dim(), nu)) *= factor;
        factor *= step;
    }
    return out;
}

template <typename Scalar>
Complex<Scalar> evaluate(const Directivity<Scalar>& zeta, const Point<Scalar>& dir)
{
    return synthesize(zeta, dir);
}

/// Sensor output for the unit plane wave exp(-i k dir.r) arriving from dir.
template <typename Scalar>
Complex<Scalar> plane_wave_response(const Directivity<Scalar>& zeta, const Point<Scalar>& dir, Scalar k,
                                    const Point<Scalar>& r)
{
    const Scalar phase = -k * dir.dot(r);
    return evaluate(zeta, dir) * Complex<Scalar>(std::cos(phase), std::sin(phase));
}

/// The induced operator applied to the reproducing kernel in its first argument:
///   sum i^{-nu} c_nu^mu big_j(d, nu, k|r - r'|) Y_nu^mu((r - r')/|r - r'|).
/// This is also the output of a sensor zeta at r for the field kappa_k(., r').
/// At r = r' only the degree-0 term survives and the result is c_0^0 |S^{d-1}|^{1/2}.
template <typename Scalar>
Complex<Scalar> rk_directional_derivative(const Directivity<Scalar>& zeta, Scalar k, const Point<Scalar>& r,
                                          const Point<Scalar>& r_prime)
{
    detail::require_wavenumber(k);
    const int d = zeta.dim();
    const Point<Scalar> s = r - r_prime;
    const Scalar rho = s.norm();
    if (rho == 0)
        return zeta.coeffs()(0) * std::sqrt(surface_area<Scalar>(d));

    const auto radial = big_j_sequence<Scalar>(d, zeta.max_degree(), k * rho);
    const Vector<Scalar> y = sph_harm_all<Scalar>(d, zeta.max_degree(), Point<Scalar>(s / rho));
    Complex<Scalar> sum(0, 0);
    for (int nu = 0; nu <= zeta.max_degree(); ++nu) {
        const int off = harmonic_offset(d, nu);
        const int n = dim_y(d, nu);
        Complex<Scalar> partial(0, 0);
        for (int mu = 0; mu < n; ++mu)
            partial += zeta.coeffs()(off + mu) * y(off + mu);
        sum += detail::inverse_i_power<Scalar>(nu) * radial[nu] * partial;
    }
    return sum;
}

/// Flat text record "d max_degree re im re im ..." in basis order, 17 significant digits.
template <typename Scalar>
std::string to_record(const Directivity<Scalar>& zeta)
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << zeta.dim() << ' ' << zeta.max_degree();
    for (Eigen::Index i = 0; i < zeta.size(); ++i)
        os << ' ' << static_cast<double>(zeta.coeffs()(i).real()) << ' ' << static_cast<double>(zeta.coeffs()(i).imag());
    return os.str();
}

template <typename Scalar>
Directivity<Scalar> directivity_from_record(const std::string& record)
{
    std::istringstream is(record);
    int d = 0;
    int max_degree = -1;
    if (!(is >> d >> max_degree))
        throw std::invalid_argument("directivity record needs 'd max_degree' header");
    require_dimension(d);
    if (max_degree < 0)
        throw std::invalid_argument("directivity record has negative max_degree");
    ComplexVector<Scalar> c(harmonic_count(d, max_degree));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        double re = 0;
        double im = 0;
        if (!(is >> re >> im))
            throw std::invalid_argument("directivity record expects " + std::to_string(c.size()) +
                                        " (re, im) pairs");
        c(i) = Complex<Scalar>(Scalar(re), Scalar(im));
    }
    std::string extra;
    if (is >> extra)
        throw std::invalid_argument("trailing data in directivity record: " + extra);
    return Directivity<Scalar>(d, max_degree, std::move(c));
}

} // namespace rkbeam
