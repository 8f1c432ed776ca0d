// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bessel functions of the first kind for integer and half-integer order, the
// dimension-generic radial kernel big_j(d, nu, z) = (2 pi)^{d/2} J_{nu+d/2-1}(z) / z^{d/2-1},
// unit-sphere areas and Legendre polynomials.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rkbeam/common.hpp"

namespace rkbeam
{

namespace detail
{

// Below this argument the power series converges without meaningful cancellation.
inline constexpr double kSeriesLimit = 4.0;

template <typename Scalar>
bool is_half_integer_order(Scalar order)
{
    const Scalar twice = 2 * order;
    return twice == std::floor(twice) && static_cast<long long>(twice) % 2 != 0;
}

template <typename Scalar>
void check_order(Scalar order)
{
    if (!(order >= 0) || !std::isfinite(order) || 2 * order != std::floor(2 * order))
        throw DomainError("Bessel order must be a non-negative integer or half-integer");
}

template <typename Scalar>
Scalar bessel_j_series(Scalar order, Scalar z)
{
    const Scalar half = z / 2;
    const Scalar q = -half * half;
    Scalar term = order <= 150 ? std::pow(half, order) / std::tgamma(order + 1)
                               : std::exp(order * std::log(half) - std::lgamma(order + 1));
    Scalar sum = term;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int m = 1; m < 1000; ++m) {
        term *= q / (Scalar(m) * (Scalar(m) + order));
        sum += term;
        if (std::abs(term) <= eps * std::abs(sum) * Scalar(0.125))
            break;
    }
    return sum;
}

// Hankel asymptotic expansion; terminates exactly for half-integer orders.
template <typename Scalar>
Scalar bessel_j_hankel(Scalar order, Scalar z)
{
    const Scalar mu = 4 * order * order;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar p = 1;
    Scalar q = 0;
    Scalar term = 1;
    Scalar last = std::numeric_limits<Scalar>::infinity();
    for (int k = 1; k < 400; ++k) {
        const Scalar odd = Scalar(2 * k - 1);
        term *= (mu - odd * odd) / (Scalar(k) * 8 * z);
        if (term == 0)
            break;
        if (std::abs(term) > last)
            break; // asymptotic series started to diverge
        const int j = (k - 1) / 2;
        if (k % 2 == 1)
            q += (j % 2 == 0 ? term : -term);
        else
            p += ((k / 2) % 2 == 0 ? term : -term);
        if (std::abs(term) < eps * Scalar(0.125))
            break;
        last = std::abs(term);
    }
    // chi = z - (order/2 + 1/4) pi, expanded so that z itself is never rounded
    const Scalar c = (order / 2 + Scalar(0.25)) * pi_v<Scalar>;
    const Scalar cz = std::cos(z);
    const Scalar sz = std::sin(z);
    const Scalar cos_chi = cz * std::cos(c) + sz * std::sin(c);
    const Scalar sin_chi = sz * std::cos(c) - cz * std::sin(c);
    return std::sqrt(2 / (pi_v<Scalar> * z)) * (p * cos_chi - q * sin_chi);
}

// Miller backward recurrence: J_{base+j}(z) for j = 0..top where base is 0 or -1/2.
// Integer orders are normalized with J_0 + 2 sum J_{2m} = 1, half-integer orders with the
// closed forms of J_{-1/2} and J_{1/2}.
template <typename Scalar>
std::vector<Scalar> bessel_j_miller(bool half_integer, int top, Scalar z)
{
    int start = top + static_cast<int>(z) + static_cast<int>(14 * std::cbrt(z)) + 40;
    start += start % 2;
    const Scalar base = half_integer ? Scalar(-0.5) : Scalar(0);
    const Scalar big = Scalar(1e200);
    std::vector<Scalar> f(static_cast<std::size_t>(start) + 2, Scalar(0));
    f[start] = Scalar(1e-30);
    for (int j = start; j >= 1; --j) {
        f[j - 1] = (2 * (base + j) / z) * f[j] - f[j + 1];
        if (std::abs(f[j - 1]) > big) {
            for (int i = j - 1; i <= start; ++i)
                f[i] /= big;
        }
    }

    Scalar scale;
    if (!half_integer) {
        Scalar norm = f[0];
        for (int j = 2; j <= start; j += 2)
            norm += 2 * f[j];
        scale = 1 / norm;
    } else {
        const Scalar amp = std::sqrt(2 / (pi_v<Scalar> * z));
        const Scalar exact_minus = amp * std::cos(z); // J_{-1/2}
        const Scalar exact_plus = amp * std::sin(z);  // J_{1/2}
        scale = (f[0] * exact_minus + f[1] * exact_plus) / (f[0] * f[0] + f[1] * f[1]);
    }

    std::vector<Scalar> out(static_cast<std::size_t>(top) + 1);
    for (int j = 0; j <= top; ++j)
        out[j] = f[j] * scale;
    return out;
}

} // namespace detail

// J_nu(z) for nu = first_order, first_order + 1, ..., first_order + count - 1.
template <typename Scalar>
std::vector<Scalar> bessel_j_sequence(Scalar first_order, int count, Scalar z)
{
    detail::check_order(first_order);
    if (!(z >= 0) || !std::isfinite(z))
        throw DomainError("Bessel argument must be finite and non-negative");
    if (count < 1)
        throw DomainError("bessel_j_sequence needs count >= 1");

    std::vector<Scalar> out(static_cast<std::size_t>(count));
    const Scalar top_order = first_order + Scalar(count - 1);

    if (z == 0) {
        for (int i = 0; i < count; ++i)
            out[i] = (first_order + Scalar(i) == 0) ? Scalar(1) : Scalar(0);
        return out;
    }

    if (z <= Scalar(detail::kSeriesLimit)) {
        for (int i = 0; i < count; ++i)
            out[i] = detail::bessel_j_series(first_order + Scalar(i), z);
        return out;
    }

    if (z > 25 + top_order * top_order) {
        // upward recurrence is stable while the order stays below z
        out[0] = detail::bessel_j_hankel(first_order, z);
        if (count > 1)
            out[1] = detail::bessel_j_hankel(first_order + 1, z);
        for (int i = 2; i < count; ++i) {
            const Scalar nu = first_order + Scalar(i - 1);
            out[i] = (2 * nu / z) * out[i - 1] - out[i - 2];
        }
        return out;
    }

    const bool half = detail::is_half_integer_order(first_order);
    // index j in the recurrence corresponds to order base + j
    const int offset = half ? static_cast<int>(first_order + Scalar(0.5)) : static_cast<int>(first_order);
    const auto all = detail::bessel_j_miller(half, offset + count - 1, z);
    for (int i = 0; i < count; ++i)
        out[i] = all[offset + i];
    return out;
}

/// Bessel function of the first kind J_order(z); order must be an integer or half-integer.
template <typename Scalar>
Scalar bessel_j(Scalar order, Scalar z)
{
    return bessel_j_sequence(order, 1, z)[0];
}

/// Area of the unit sphere S^{d-1} in R^d.
template <typename Scalar = double>
Scalar surface_area(int d)
{
    if (d < 2)
        throw DomainError("surface_area needs d >= 2");
    const Scalar half_d = Scalar(d) / 2;
    return 2 * std::pow(pi_v<Scalar>, half_d) / std::tgamma(half_d);
}

/// big_j(d, nu, z) for nu = 0..max_degree. At z = 0 the limit is taken exactly:
/// |S^{d-1}| for nu = 0 and 0 otherwise.
template <typename Scalar>
std::vector<Scalar> big_j_sequence(int d, int max_degree, Scalar z)
{
    if (d < 2)
        throw DomainError("big_j needs d >= 2, got d = " + std::to_string(d));
    if (max_degree < 0)
        throw DomainError("big_j needs a non-negative degree");
    if (!(z >= 0) || !std::isfinite(z))
        throw DomainError("big_j argument must be finite and non-negative");

    std::vector<Scalar> out(static_cast<std::size_t>(max_degree) + 1, Scalar(0));
    if (z == 0) {
        out[0] = surface_area<Scalar>(d);
        return out;
    }
    const Scalar shift = Scalar(d - 2) / 2;
    const auto j = bessel_j_sequence(shift, max_degree + 1, z);
    const Scalar scale = std::pow(2 * pi_v<Scalar>, Scalar(d) / 2) / std::pow(z, shift);
    for (int nu = 0; nu <= max_degree; ++nu)
        out[nu] = scale * j[nu];
    return out;
}

template <typename Scalar>
Scalar big_j(int d, int degree, Scalar z)
{
    return big_j_sequence(d, degree, z)[degree];
}

/// Legendre polynomial P_degree(x) by the three-term recurrence.
template <typename Scalar>
Scalar legendre_p(int degree, Scalar x)
{
    if (degree < 0)
        throw DomainError("Legendre degree must be non-negative");
    if (!(std::abs(x) <= 1 + Scalar(1e-12)))
        throw DomainError("Legendre argument must lie in [-1, 1]");
    x = std::clamp(x, Scalar(-1), Scalar(1));
    if (degree == 0)
        return 1;
    Scalar prev = 1;
    Scalar cur = x;
    for (int n = 1; n < degree; ++n) {
        const Scalar next = ((2 * n + 1) * x * cur - n * prev) / (n + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace rkbeam
