// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite-difference application of constant-coefficient polynomial differential operators.
// This is an oracle path: it never touches the Bessel/harmonic closed forms it is used to
// check, only point evaluations of the function being differentiated.

#include <array>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rkbeam/common.hpp"
#include "rkbeam/harmonics.hpp"

namespace rkbeam::fd
{

using MultiIndex = std::vector<int>;

/// All multi-indices alpha in Z_+^d with |alpha| = degree.
inline std::vector<MultiIndex> multi_indices(int d, int degree)
{
    std::vector<MultiIndex> out;
    MultiIndex alpha(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d - 1) {
            alpha[static_cast<std::size_t>(pos)] = left;
            out.push_back(alpha);
            return;
        }
        for (int a = left; a >= 0; --a) {
            alpha[static_cast<std::size_t>(pos)] = a;
            rec(pos + 1, left - a);
        }
    };
    rec(0, degree);
    return out;
}

template <typename Scalar>
Scalar monomial(const MultiIndex& alpha, const Point<Scalar>& r)
{
    Scalar v = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (int p = 0; p < alpha[i]; ++p)
            v *= r(static_cast<Eigen::Index>(i));
    return v;
}

/// Polynomial sum c_alpha r^alpha, also read as the operator sum c_alpha D^alpha.
template <typename Scalar>
struct Polynomial
{
    std::vector<std::pair<MultiIndex, Complex<Scalar>>> terms;

    Polynomial& add(const Polynomial& other, Complex<Scalar> scale)
    {
        for (const auto& [alpha, c] : other.terms)
            terms.emplace_back(alpha, scale * c);
        return *this;
    }
};

/// Monomial coefficients of the solid harmonic y_nu^mu, recovered by least squares from point
/// evaluations (the fit is exact because y_nu^mu is a homogeneous degree-nu polynomial).
template <typename Scalar>
Polynomial<Scalar> solid_harmonic_polynomial(int d, HarmonicIndex idx)
{
    const auto alphas = multi_indices(d, idx.degree);
    const auto m = static_cast<Eigen::Index>(alphas.size());
    const Eigen::Index rows = 4 * m + 4;
    Matrix<Scalar> A(rows, m);
    Vector<Scalar> b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        Point<Scalar> r(d);
        for (int c = 0; c < d; ++c)
            r(c) = std::sin(Scalar(1.3) * Scalar(i + 1) * Scalar(c + 1) + Scalar(0.4) * Scalar(c)) +
                   Scalar(0.1) * Scalar(c);
        for (Eigen::Index j = 0; j < m; ++j)
            A(i, j) = monomial<Scalar>(alphas[static_cast<std::size_t>(j)], r);
        b(i) = solid_harm<Scalar>(d, idx, r);
    }
    const Vector<Scalar> coef = A.colPivHouseholderQr().solve(b);
    Polynomial<Scalar> p;
    for (Eigen::Index j = 0; j < m; ++j)
        if (std::abs(coef(j)) > Scalar(1e-13))
            p.terms.emplace_back(alphas[static_cast<std::size_t>(j)], Complex<Scalar>(coef(j), 0));
    return p;
}

namespace detail
{

// second-order central stencil for the n-th derivative (n <= 4), offsets -2..2, unit step
inline const std::array<double, 5>& stencil(int n)
{
    static const std::array<std::array<double, 5>, 5> table = {{
        {0, 0, 1, 0, 0},
        {0, -0.5, 0, 0.5, 0},
        {0, 1, -2, 1, 0},
        {-0.5, 1, 0, -1, 0.5},
        {1, -4, 6, -4, 1},
    }};
    if (n < 0 || n > 4)
        throw std::invalid_argument("finite-difference stencils support derivative orders up to 4");
    return table[static_cast<std::size_t>(n)];
}

} // namespace detail

/// D^alpha f(r) by tensor-product central differences with step h.
template <typename Scalar>
Complex<Scalar> partial(const std::function<Complex<Scalar>(const Point<Scalar>&)>& f, const MultiIndex& alpha,
                        const Point<Scalar>& r, Scalar h)
{
    const int d = static_cast<int>(alpha.size());
    Complex<Scalar> sum(0, 0);
    std::vector<int> off(static_cast<std::size_t>(d), -2);
    Scalar scale = 1;
    for (int a : alpha)
        for (int p = 0; p < a; ++p)
            scale /= h;
    while (true) {
        Scalar w = 1;
        for (int c = 0; c < d && w != 0; ++c)
            w *= Scalar(detail::stencil(alpha[static_cast<std::size_t>(c)])[static_cast<std::size_t>(off[static_cast<std::size_t>(c)] + 2)]);
        if (w != 0) {
            Point<Scalar> x = r;
            for (int c = 0; c < d; ++c)
                x(c) += h * Scalar(off[static_cast<std::size_t>(c)]);
            sum += w * f(x);
        }
        int c = 0;
        while (c < d && ++off[static_cast<std::size_t>(c)] > 2)
            off[static_cast<std::size_t>(c++)] = -2;
        if (c == d)
            break;
    }
    return sum * scale;
}

/// sum c_alpha D^alpha f(r)
template <typename Scalar>
Complex<Scalar> apply_operator(const Polynomial<Scalar>& op, const std::function<Complex<Scalar>(const Point<Scalar>&)>& f,
                               const Point<Scalar>& r, Scalar h)
{
    Complex<Scalar> sum(0, 0);
    for (const auto& [alpha, c] : op.terms)
        sum += c * partial(f, alpha, r, h);
    return sum;
}

} // namespace rkbeam::fd
