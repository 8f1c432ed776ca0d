// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rkbeam
{

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Vector<Complex<Scalar>>;

template <typename Scalar>
using ComplexMatrix = Matrix<Complex<Scalar>>;

// A position or direction in R^d (d = rows()).
template <typename Scalar>
using Point = Vector<Scalar>;

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Dense factorization found the system rank deficient; the caller must regularize.
class SingularMatrixError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A quantity that must be nonzero (integrated power, signal energy, radial mode) vanished.
class DegenerateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
Point<Scalar> direction_2d(Scalar angle)
{
    Point<Scalar> u(2);
    u << std::cos(angle), std::sin(angle);
    return u;
}

// polar angle from +z, azimuth from +x
template <typename Scalar>
Point<Scalar> direction_3d(Scalar polar, Scalar azimuth)
{
    Point<Scalar> u(3);
    u << std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar);
    return u;
}

template <typename Scalar>
Point<Scalar> point_2d(Scalar x, Scalar y)
{
    Point<Scalar> p(2);
    p << x, y;
    return p;
}

inline void require_dimension(int d)
{
    if (d != 2 && d != 3)
        throw DomainError("only d = 2 and d = 3 are supported, got d = " + std::to_string(d));
}

} // namespace rkbeam
