// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reproducing kernel kappa_k(r, r') = big_j(d, 0, k|r - r'|) of the space of interior fields
// band-limited to the wavenumber sphere, Gram / C matrix assembly, Tikhonov solves,
// reconstruction and angular-spectrum estimation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "rkbeam/common.hpp"
#include "rkbeam/directivity.hpp"
#include "rkbeam/specialfn.hpp"

namespace rkbeam
{

template <typename Scalar>
struct Microphone
{
    Point<Scalar> position;
    Directivity<Scalar> directivity;
};

/// Ordered sensors sharing the spatial dimension and truncation degree. The order is the
/// contract between sampled signals and the rows of C.
template <typename Scalar>
class MicArray
{
public:
    MicArray() = default;

    MicArray(int dim, std::vector<Microphone<Scalar>> mics) : dim_(dim), mics_(std::move(mics))
    {
        require_dimension(dim);
        if (mics_.empty())
            throw std::invalid_argument("a microphone array needs at least one sensor");
        max_degree_ = mics_.front().directivity.max_degree();
        for (const auto& m : mics_) {
            if (m.position.size() != dim || !m.position.allFinite())
                throw std::invalid_argument("microphone positions must be finite points in R^d");
            if (m.directivity.dim() != dim)
                throw std::invalid_argument("microphone directivity has the wrong dimension");
            if (m.directivity.max_degree() != max_degree_)
                throw std::invalid_argument("all directivities must share one max_degree");
        }
    }

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(mics_.size()); }
    const Microphone<Scalar>& operator[](Eigen::Index i) const { return mics_[static_cast<std::size_t>(i)]; }
    const std::vector<Microphone<Scalar>>& mics() const { return mics_; }
    auto begin() const { return mics_.begin(); }
    auto end() const { return mics_.end(); }

    std::vector<Point<Scalar>> positions() const
    {
        std::vector<Point<Scalar>> out;
        out.reserve(mics_.size());
        for (const auto& m : mics_)
            out.push_back(m.position);
        return out;
    }

    /// Same positions, every sensor modelled as zeta == 1.
    MicArray assume_omnidirectional() const
    {
        std::vector<Microphone<Scalar>> mics;
        mics.reserve(mics_.size());
        for (const auto& m : mics_)
            mics.push_back({m.position, omnidirectional<Scalar>(dim_, 0)});
        return MicArray(dim_, std::move(mics));
    }

private:
    int dim_ = 2;
    int max_degree_ = 0;
    std::vector<Microphone<Scalar>> mics_;
};

template <typename Scalar>
Scalar kernel(int d, Scalar k, const Point<Scalar>& r, const Point<Scalar>& r_prime)
{
    detail::require_wavenumber(k);
    return big_j<Scalar>(d, 0, k * (r - r_prime).norm());
}

/// kappa_k(eval_i, center_j)
template <typename Scalar>
Matrix<Scalar> kernel_matrix(int d, Scalar k, const std::vector<Point<Scalar>>& eval_points,
                             const std::vector<Point<Scalar>>& centers)
{
    detail::require_wavenumber(k);
    Matrix<Scalar> K(static_cast<Eigen::Index>(eval_points.size()), static_cast<Eigen::Index>(centers.size()));
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = 0; j < K.cols(); ++j)
            K(i, j) = big_j<Scalar>(d, 0, k * (eval_points[i] - centers[j]).norm());
    return K;
}

template <typename Scalar>
Matrix<Scalar> gram(const std::vector<Point<Scalar>>& positions, int d, Scalar k)
{
    detail::require_wavenumber(k);
    const auto n = static_cast<Eigen::Index>(positions.size());
    Matrix<Scalar> G(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        G(i, i) = surface_area<Scalar>(d);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            G(i, j) = big_j<Scalar>(d, 0, k * (positions[i] - positions[j]).norm());
            G(j, i) = G(i, j);
        }
    }
    return G;
}

template <typename Scalar>
struct CMatrix
{
    ComplexMatrix<Scalar> entries;
    Scalar k;
    int max_degree;
};

/// C_ij = induced operator of sensor i applied to kappa_k(r_i, r_j).
template <typename Scalar>
CMatrix<Scalar> build_c(const MicArray<Scalar>& array, Scalar k, int max_degree)
{
    detail::require_wavenumber(k);
    if (max_degree < array.max_degree())
        throw std::invalid_argument("max_degree " + std::to_string(max_degree) +
                                    " is below the array's directivity degree " + std::to_string(array.max_degree()));
    const Eigen::Index n = array.size();
    CMatrix<Scalar> c{ComplexMatrix<Scalar>(n, n), k, max_degree};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            c.entries(i, j) = rk_directional_derivative(array[i].directivity, k, array[i].position, array[j].position);
    return c;
}

enum class LambdaMode
{
    absolute,
    // lambda scaled by the largest eigenvalue of C^H C
    relative,
};

inline constexpr double kSingularPivotThreshold = 1e-12;

template <typename Scalar>
Scalar effective_lambda(const ComplexMatrix<Scalar>& c, Scalar lambda, LambdaMode mode)
{
    if (!(lambda >= 0) || !std::isfinite(lambda))
        throw DomainError("regularization parameter must be finite and non-negative");
    if (mode == LambdaMode::absolute || lambda == 0)
        return lambda;
    Eigen::JacobiSVD<ComplexMatrix<Scalar>> svd(c);
    const Scalar smax = svd.singularValues()(0);
    return lambda * smax * smax;
}

template <typename Scalar>
Scalar condition_number(const ComplexMatrix<Scalar>& c)
{
    Eigen::JacobiSVD<ComplexMatrix<Scalar>> svd(c);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0)
        return Scalar(1);
    const Scalar smin = sv(sv.size() - 1);
    return smin > 0 ? sv(0) / smin : std::numeric_limits<Scalar>::infinity();
}

namespace detail
{

template <typename Scalar>
Eigen::FullPivLU<ComplexMatrix<Scalar>> checked_lu(const ComplexMatrix<Scalar>& c)
{
    Eigen::FullPivLU<ComplexMatrix<Scalar>> lu(c);
    lu.setThreshold(Scalar(kSingularPivotThreshold));
    if (!lu.isInvertible())
        throw SingularMatrixError("C is rank deficient (rank " + std::to_string(lu.rank()) + " of " +
                                  std::to_string(c.rows()) + "); use lambda > 0");
    return lu;
}

template <typename Scalar>
Eigen::LLT<ComplexMatrix<Scalar>> checked_normal(const ComplexMatrix<Scalar>& c, Scalar lambda)
{
    ComplexMatrix<Scalar> normal = c.adjoint() * c;
    normal.diagonal().array() += Complex<Scalar>(lambda, 0);
    Eigen::LLT<ComplexMatrix<Scalar>> llt(normal);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError("regularized normal matrix is not positive definite");
    return llt;
}

} // namespace detail

/// a = C^{-1} s for lambda = 0, otherwise (C^H C + lambda I)^{-1} C^H s.
template <typename Scalar>
ComplexVector<Scalar> solve_coeffs(const CMatrix<Scalar>& c, const ComplexVector<Scalar>& s, Scalar lambda,
                                   LambdaMode mode = LambdaMode::absolute)
{
    if (s.size() != c.entries.rows())
        throw std::invalid_argument("signal length does not match C");
    const Scalar lam = effective_lambda(c.entries, lambda, mode);
    if (lam == 0)
        return detail::checked_lu(c.entries).solve(s);
    return detail::checked_normal(c.entries, lam).solve(c.entries.adjoint() * s);
}

/// R with a = R s; the matrix form of solve_coeffs, used to precompute beamformer weights.
template <typename Scalar>
ComplexMatrix<Scalar> regularized_inverse(const CMatrix<Scalar>& c, Scalar lambda, LambdaMode mode = LambdaMode::absolute)
{
    const Scalar lam = effective_lambda(c.entries, lambda, mode);
    if (lam == 0)
        return detail::checked_lu(c.entries).inverse();
    return detail::checked_normal(c.entries, lam).solve(c.entries.adjoint());
}

/// p_est = sum a_n kappa_k(., r_n)
template <typename Scalar>
struct KernelField
{
    int dim;
    Scalar k;
    std::vector<Point<Scalar>> centers;
    ComplexVector<Scalar> a;
};

template <typename Scalar>
ComplexVector<Scalar> reconstruct(const KernelField<Scalar>& field, const std::vector<Point<Scalar>>& eval_points)
{
    if (field.a.size() != static_cast<Eigen::Index>(field.centers.size()))
        throw std::invalid_argument("coefficient count does not match kernel centers");
    const Matrix<Scalar> K = kernel_matrix(field.dim, field.k, eval_points, field.centers);
    return K.template cast<Complex<Scalar>>() * field.a;
}

/// Angular spectrum estimate P_b(k dir) ~ sum a_n exp(i k dir.r_n).
template <typename Scalar>
Complex<Scalar> estimate_spectrum(const KernelField<Scalar>& field, const Point<Scalar>& dir)
{
    Complex<Scalar> sum(0, 0);
    for (std::size_t n = 0; n < field.centers.size(); ++n) {
        const Scalar phase = field.k * dir.dot(field.centers[n]);
        sum += field.a(static_cast<Eigen::Index>(n)) * Complex<Scalar>(std::cos(phase), std::sin(phase));
    }
    return sum;
}

} // namespace rkbeam
