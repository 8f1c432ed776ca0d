// SPDX-License-Identifier: Apache-2.0
#pragma once

// Real orthonormal spherical harmonics on S^1 and S^2.
//
// Flattened basis order (fixed; matrix assembly and the serialization format rely on it):
//   d = 2: degree 0 -> [1/sqrt(2 pi)], degree nu >= 1 -> [cos(nu t)/sqrt(pi), sin(nu t)/sqrt(pi)],
//          so order 0 is the cosine and order 1 the sine term.
//   d = 3: order mu = 0..2 nu maps to m = mu - nu in [-nu, nu]; m < 0 carries sin(|m| phi),
//          m > 0 carries cos(m phi). The Condon-Shortley phase is not applied.

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rkbeam/common.hpp"
#include "rkbeam/specialfn.hpp"

namespace rkbeam
{

struct HarmonicIndex
{
    int degree = 0;
    int order = 0;
};

inline long long factorial_ll(int n)
{
    long long f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

/// Dimension of the space of degree-nu spherical harmonics on S^{d-1}.
inline int dim_y(int d, int degree)
{
    require_dimension(d);
    if (degree < 0)
        throw DomainError("harmonic degree must be non-negative");
    if (degree == 0)
        return 1;
    return static_cast<int>((d + 2 * degree - 2) * factorial_ll(d + degree - 3) /
                            (factorial_ll(d - 2) * factorial_ll(degree)));
}

/// Dimension of the space of homogeneous degree-nu polynomials on R^d.
inline int dim_p(int d, int degree)
{
    require_dimension(d);
    if (degree < 0)
        throw DomainError("polynomial degree must be non-negative");
    return static_cast<int>(factorial_ll(d + degree - 1) / (factorial_ll(degree) * factorial_ll(d - 1)));
}

/// Flat position of (degree, 0).
inline int harmonic_offset(int d, int degree)
{
    require_dimension(d);
    if (d == 2)
        return degree == 0 ? 0 : 2 * degree - 1;
    return degree * degree;
}

/// Number of basis functions with degree <= max_degree.
inline int harmonic_count(int d, int max_degree)
{
    return harmonic_offset(d, max_degree + 1);
}

inline int flat_index(int d, HarmonicIndex idx)
{
    if (idx.degree < 0 || idx.order < 0 || idx.order >= dim_y(d, idx.degree))
        throw std::out_of_range("harmonic order " + std::to_string(idx.order) + " out of range for degree " +
                                std::to_string(idx.degree));
    return harmonic_offset(d, idx.degree) + idx.order;
}

inline HarmonicIndex index_from_flat(int d, int flat)
{
    int degree = 0;
    while (harmonic_offset(d, degree + 1) <= flat)
        ++degree;
    return {degree, flat - harmonic_offset(d, degree)};
}

/// All basis values Y_nu^mu(dir) for nu <= max_degree, in flat order.
template <typename Scalar>
Vector<Scalar> sph_harm_all(int d, int max_degree, const Point<Scalar>& dir)
{
    require_dimension(d);
    if (dir.size() != d)
        throw std::invalid_argument("direction has wrong dimension");
    Vector<Scalar> out(harmonic_count(d, max_degree));

    if (d == 2) {
        const Scalar theta = std::atan2(dir(1), dir(0));
        const Scalar inv_sqrt_pi = 1 / std::sqrt(pi_v<Scalar>);
        out(0) = 1 / std::sqrt(2 * pi_v<Scalar>);
        for (int nu = 1; nu <= max_degree; ++nu) {
            out(2 * nu - 1) = std::cos(nu * theta) * inv_sqrt_pi;
            out(2 * nu) = std::sin(nu * theta) * inv_sqrt_pi;
        }
        return out;
    }

    // d == 3: normalized associated Legendre functions by the standard column recurrence
    const Scalar x = std::clamp(dir(2), Scalar(-1), Scalar(1));
    const Scalar s = std::sqrt(std::max(Scalar(0), (1 - x) * (1 + x)));
    const Scalar phi = std::atan2(dir(1), dir(0));
    const Scalar sqrt2 = std::sqrt(Scalar(2));

    // plm(l, m) stored per column
    Matrix<Scalar> plm = Matrix<Scalar>::Zero(max_degree + 1, max_degree + 1);
    plm(0, 0) = 1 / std::sqrt(4 * pi_v<Scalar>);
    for (int m = 1; m <= max_degree; ++m)
        plm(m, m) = std::sqrt(Scalar(2 * m + 1) / Scalar(2 * m)) * s * plm(m - 1, m - 1);
    for (int m = 0; m < max_degree; ++m)
        plm(m + 1, m) = std::sqrt(Scalar(2 * m + 3)) * x * plm(m, m);
    for (int m = 0; m <= max_degree; ++m) {
        for (int l = m + 2; l <= max_degree; ++l) {
            const Scalar a = std::sqrt(Scalar(4 * l * l - 1) / Scalar(l * l - m * m));
            const Scalar b = std::sqrt(Scalar((l - 1) * (l - 1) - m * m) / Scalar(4 * (l - 1) * (l - 1) - 1));
            plm(l, m) = a * (x * plm(l - 1, m) - b * plm(l - 2, m));
        }
    }

    for (int l = 0; l <= max_degree; ++l) {
        const int base = l * l + l; // position of m = 0
        out(base) = plm(l, 0);
        for (int m = 1; m <= l; ++m) {
            out(base + m) = sqrt2 * plm(l, m) * std::cos(m * phi);
            out(base - m) = sqrt2 * plm(l, m) * std::sin(m * phi);
        }
    }
    return out;
}

/// Real orthonormal spherical harmonic Y_nu^mu at a unit direction.
template <typename Scalar>
Scalar sph_harm(int d, HarmonicIndex idx, const Point<Scalar>& dir)
{
    const int flat = flat_index(d, idx);
    return sph_harm_all<Scalar>(d, idx.degree, dir)(flat);
}

/// Solid harmonic y_nu^mu(r) = |r|^nu Y_nu^mu(r/|r|), a homogeneous harmonic polynomial.
template <typename Scalar>
Scalar solid_harm(int d, HarmonicIndex idx, const Point<Scalar>& r)
{
    const int flat = flat_index(d, idx);
    const Scalar rho = r.norm();
    if (rho == 0)
        return idx.degree == 0 ? 1 / std::sqrt(surface_area<Scalar>(d)) : Scalar(0);
    const Point<Scalar> dir = r / rho;
    return std::pow(rho, idx.degree) * sph_harm_all<Scalar>(d, idx.degree, dir)(flat);
}

/// Reproducing kernel of the degree-nu harmonic space, via the addition theorem:
/// (2 nu + 1)/(4 pi) P_nu(cos) for d = 3 and cos(nu dtheta)/pi (1/(2 pi) at nu = 0) for d = 2.
template <typename Scalar>
Scalar zonal_kernel(int d, int degree, const Point<Scalar>& a, const Point<Scalar>& b)
{
    require_dimension(d);
    if (degree < 0)
        throw DomainError("harmonic degree must be non-negative");
    const Scalar t = std::clamp(a.dot(b), Scalar(-1), Scalar(1));
    if (d == 3)
        return Scalar(2 * degree + 1) / (4 * pi_v<Scalar>)*legendre_p(degree, t);
    if (degree == 0)
        return 1 / (2 * pi_v<Scalar>);
    // Chebyshev T_nu(t) = cos(nu * angle)
    Scalar prev = 1;
    Scalar cur = t;
    for (int n = 1; n < degree; ++n) {
        const Scalar next = 2 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur / pi_v<Scalar>;
}

template <typename Scalar>
struct DirectionSample
{
    Point<Scalar> direction;
    Scalar weight;
};

namespace detail
{

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
template <typename Scalar>
void gauss_legendre(int n, std::vector<Scalar>& nodes, std::vector<Scalar>& weights)
{
    // P_n(x) and P_n'(x)
    auto legendre_with_derivative = [n](Scalar x) {
        Scalar p0 = 1;
        Scalar p1 = x;
        for (int k = 2; k <= n; ++k) {
            const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair<Scalar, Scalar>{p1, n * (x * p1 - p0) / (x * x - 1)};
    };

    nodes.assign(n, 0);
    weights.assign(n, 0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Scalar x = std::cos(pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre_with_derivative(x);
            const Scalar dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon())
                break;
        }
        const Scalar dp = legendre_with_derivative(x).second;
        const Scalar w = 2 / ((1 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

} // namespace detail

/// Quadrature on S^{d-1}. d = 2: n uniform angles (trapezoid, exact for trigonometric
/// polynomials of degree < n). d = 3: n Gauss-Legendre nodes in cos(polar) times 2n uniform
/// azimuths (exact for spherical polynomials of degree <= 2n - 1).
template <typename Scalar>
std::vector<DirectionSample<Scalar>> sphere_quadrature(int d, int n)
{
    require_dimension(d);
    if (n < 1)
        throw std::invalid_argument("quadrature needs at least one node");
    std::vector<DirectionSample<Scalar>> out;
    if (d == 2) {
        out.reserve(n);
        const Scalar w = 2 * pi_v<Scalar> / n;
        for (int j = 0; j < n; ++j)
            out.push_back({direction_2d<Scalar>(2 * pi_v<Scalar> * j / n), w});
        return out;
    }
    std::vector<Scalar> nodes;
    std::vector<Scalar> weights;
    detail::gauss_legendre<Scalar>(n, nodes, weights);
    const int n_az = 2 * n;
    out.reserve(static_cast<std::size_t>(n) * n_az);
    for (int i = 0; i < n; ++i) {
        const Scalar polar = std::acos(nodes[i]);
        for (int j = 0; j < n_az; ++j)
            out.push_back({direction_3d<Scalar>(polar, 2 * pi_v<Scalar> * j / n_az), weights[i] * 2 * pi_v<Scalar> / n_az});
    }
    return out;
}

/// Complex expansion coefficients c_nu^mu over the real basis, degree <= max_degree.
template <typename Scalar>
class HarmonicCoeffs
{
public:
    HarmonicCoeffs() = default;

    HarmonicCoeffs(int dim, int max_degree)
        : dim_(dim), max_degree_(max_degree), coeffs_(ComplexVector<Scalar>::Zero(harmonic_count(dim, max_degree)))
    {
        if (max_degree < 0)
            throw DomainError("max_degree must be non-negative");
    }

    HarmonicCoeffs(int dim, int max_degree, ComplexVector<Scalar> coeffs)
        : dim_(dim), max_degree_(max_degree), coeffs_(std::move(coeffs))
    {
        if (max_degree < 0)
            throw DomainError("max_degree must be non-negative");
        if (coeffs_.size() != harmonic_count(dim, max_degree))
            throw std::invalid_argument("coefficient vector has length " + std::to_string(coeffs_.size()) +
                                        ", expected " + std::to_string(harmonic_count(dim, max_degree)));
        if (!coeffs_.allFinite())
            throw std::invalid_argument("coefficients must be finite");
    }

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    Eigen::Index size() const { return coeffs_.size(); }

    Complex<Scalar>& operator()(int degree, int order) { return coeffs_(flat_checked(degree, order)); }
    const Complex<Scalar>& operator()(int degree, int order) const { return coeffs_(flat_checked(degree, order)); }

    const ComplexVector<Scalar>& coeffs() const { return coeffs_; }
    ComplexVector<Scalar>& coeffs() { return coeffs_; }

    HarmonicCoeffs& operator+=(const HarmonicCoeffs& other)
    {
        if (other.dim_ != dim_ || other.max_degree_ != max_degree_)
            throw std::invalid_argument("coefficient sets differ in dimension or degree");
        coeffs_ += other.coeffs_;
        return *this;
    }

    friend HarmonicCoeffs operator+(HarmonicCoeffs a, const HarmonicCoeffs& b) { return a += b; }

    friend HarmonicCoeffs operator*(Complex<Scalar> s, HarmonicCoeffs a)
    {
        a.coeffs_ *= s;
        return a;
    }

    friend bool operator==(const HarmonicCoeffs& a, const HarmonicCoeffs& b)
    {
        return a.dim_ == b.dim_ && a.max_degree_ == b.max_degree_ && a.coeffs_ == b.coeffs_;
    }

private:
    int flat_checked(int degree, int order) const
    {
        if (degree > max_degree_)
            throw std::out_of_range("degree " + std::to_string(degree) + " exceeds max_degree");
        return flat_index(dim_, {degree, order});
    }

    int dim_ = 2;
    int max_degree_ = 0;
    ComplexVector<Scalar> coeffs_ = ComplexVector<Scalar>::Zero(1);
};

/// sum c_nu^mu Y_nu^mu(dir)
template <typename Scalar>
Complex<Scalar> synthesize(const HarmonicCoeffs<Scalar>& c, const Point<Scalar>& dir)
{
    const Vector<Scalar> y = sph_harm_all<Scalar>(c.dim(), c.max_degree(), dir);
    return (c.coeffs().array() * y.array().template cast<Complex<Scalar>>()).sum();
}

template <typename Scalar>
struct ProjectionResult
{
    HarmonicCoeffs<Scalar> coeffs;
    // relative L2 norm of (fn - truncated synthesis) over the quadrature
    Scalar residual = 0;
};

/// Projects an angular function onto the harmonic basis by quadrature, c = int fn Y.
/// n_quad counts uniform angles for d = 2 and Gauss-Legendre rings for d = 3.
template <typename Scalar>
ProjectionResult<Scalar> project_directivity(int d, const std::function<Complex<Scalar>(const Point<Scalar>&)>& fn,
                                             int max_degree, int n_quad)
{
    require_dimension(d);
    const int needed = d == 2 ? 2 * max_degree + 1 : max_degree + 1;
    if (n_quad < needed)
        throw std::invalid_argument("n_quad = " + std::to_string(n_quad) + " cannot resolve degree " +
                                    std::to_string(max_degree));
    const auto quad = sphere_quadrature<Scalar>(d, n_quad);
    HarmonicCoeffs<Scalar> c(d, max_degree);
    std::vector<Complex<Scalar>> values;
    values.reserve(quad.size());
    for (const auto& q : quad) {
        const Complex<Scalar> f = fn(q.direction);
        values.push_back(f);
        const Vector<Scalar> y = sph_harm_all<Scalar>(d, max_degree, q.direction);
        c.coeffs() += (q.weight * f) * y.template cast<Complex<Scalar>>();
    }
    Scalar err2 = 0;
    Scalar norm2 = 0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
        err2 += quad[i].weight * std::norm(values[i] - synthesize(c, quad[i].direction));
        norm2 += quad[i].weight * std::norm(values[i]);
    }
    return {std::move(c), norm2 > 0 ? std::sqrt(err2 / norm2) : Scalar(0)};
}

} // namespace rkbeam
