#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rkbeam/harmonics.hpp"

using namespace rkbeam;
using std::numbers::pi;
using Pt = Point<double>;

namespace
{

Pt random_unit(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Pt u(d);
    for (int c = 0; c < d; ++c)
        u(c) = g(rng);
    return u / u.norm();
}

} // namespace

TEST_CASE("dimension formulas")
{
    CHECK(dim_y(3, 2) == 5);
    CHECK(dim_y(3, 4) == 9);
    CHECK(dim_y(2, 3) == 2);
    CHECK(dim_y(2, 0) == 1);
    CHECK(dim_p(3, 2) == 6);
    CHECK(dim_p(3, 0) == 1);
    CHECK(dim_p(2, 4) == 5);
    CHECK(harmonic_count(2, 2) == 5);
    CHECK(harmonic_count(3, 2) == 9);
    CHECK_THROWS_AS(dim_y(5, 1), DomainError);
}

TEST_CASE("flat index round trip")
{
    for (int d : {2, 3})
        for (int flat = 0; flat < harmonic_count(d, 5); ++flat) {
            const auto idx = index_from_flat(d, flat);
            CHECK(flat_index(d, idx) == flat);
            CHECK(idx.order < dim_y(d, idx.degree));
        }
    CHECK_THROWS_AS(flat_index(2, {1, 2}), std::out_of_range);
}

TEST_CASE("basis values")
{
    const Pt e1 = direction_2d(0.0);
    CHECK(sph_harm(2, {0, 0}, direction_2d(1.3)) == doctest::Approx(1 / std::sqrt(2 * pi)));
    CHECK(sph_harm(2, {1, 0}, e1) == doctest::Approx(1 / std::sqrt(pi)));
    CHECK(sph_harm(2, {3, 1}, direction_2d(0.4)) == doctest::Approx(std::sin(1.2) / std::sqrt(pi)));
    CHECK(sph_harm(3, {0, 0}, direction_3d(0.7, 2.0)) == doctest::Approx(1 / std::sqrt(4 * pi)));
    // degree 1 in d = 3 is sqrt(3/4pi) times a coordinate
    const Pt u = direction_3d(0.7, 2.0);
    const Vector<double> y = sph_harm_all(3, 1, u);
    Vector<double> sorted = y.tail(3).cwiseAbs();
    Vector<double> coords = u.cwiseAbs();
    std::sort(sorted.data(), sorted.data() + 3);
    std::sort(coords.data(), coords.data() + 3);
    for (int i = 0; i < 3; ++i)
        CHECK(sorted(i) == doctest::Approx(std::sqrt(3 / (4 * pi)) * coords(i)).epsilon(1e-14));
}

TEST_CASE("solid harmonics")
{
    CHECK(solid_harm(2, {1, 0}, point_2d(2.0, 0.0)) == doctest::Approx(2 / std::sqrt(pi)));
    CHECK(solid_harm(2, {2, 1}, point_2d(0.0, 0.0)) == 0.0);
    CHECK(solid_harm(2, {1, 1}, point_2d(1.0, 1.0)) == doctest::Approx(1 / std::sqrt(pi)));
    CHECK(solid_harm(3, {0, 0}, Pt(Pt::Zero(3))) == doctest::Approx(1 / std::sqrt(4 * pi)));
}

TEST_CASE("solid harmonics are homogeneous and harmonic")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    const double h = 1e-3;
    for (int d : {2, 3})
        for (int flat = 0; flat < harmonic_count(d, 3); ++flat) {
            const auto idx = index_from_flat(d, flat);
            for (int trial = 0; trial < 20; ++trial) {
                Pt r(d);
                do {
                    for (int c = 0; c < d; ++c)
                        r(c) = u(rng);
                } while (r.norm() > 1);
                const double base = solid_harm(d, idx, r);
                for (double t : {0.5, 2.0})
                    CHECK(std::abs(solid_harm(d, idx, Pt(t * r)) - std::pow(t, idx.degree) * base) < 1e-12);
                double lap = 0;
                for (int c = 0; c < d; ++c) {
                    Pt a = r;
                    Pt b = r;
                    a(c) += h;
                    b(c) -= h;
                    lap += (solid_harm(d, idx, a) - 2 * base + solid_harm(d, idx, b)) / (h * h);
                }
                CHECK(std::abs(lap) <= 1e-4);
            }
        }
}

TEST_CASE("quadrature weights and orthonormality")
{
    for (int d : {2, 3}) {
        const auto quad = sphere_quadrature<double>(d, 14);
        double total = 0;
        for (const auto& q : quad) {
            CHECK(std::abs(q.direction.norm() - 1) < 1e-12);
            CHECK(q.weight > 0);
            total += q.weight;
        }
        CHECK(total == doctest::Approx(surface_area(d)).epsilon(1e-12));

        const int n = harmonic_count(d, 4);
        Matrix<double> g = Matrix<double>::Zero(n, n);
        for (const auto& q : quad) {
            const Vector<double> y = sph_harm_all(d, 4, q.direction);
            g += q.weight * y * y.transpose();
        }
        CHECK((g - Matrix<double>::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("zonal kernel closed forms")
{
    const Pt a = direction_3d(0.4, 1.1);
    CHECK(zonal_kernel(3, 1, a, a) == doctest::Approx(3 / (4 * pi)));
    CHECK(zonal_kernel(2, 2, direction_2d(0.0), direction_2d(pi / 2)) == doctest::Approx(-1 / pi));
    CHECK(zonal_kernel(2, 0, direction_2d(0.3), direction_2d(2.0)) == doctest::Approx(1 / (2 * pi)));

    std::mt19937_64 rng(5);
    for (int d : {2, 3})
        for (int trial = 0; trial < 100; ++trial) {
            const Pt x = random_unit(d, rng);
            const Pt y = random_unit(d, rng);
            const Vector<double> yx = sph_harm_all(d, 4, x);
            const Vector<double> yy = sph_harm_all(d, 4, y);
            for (int nu = 0; nu <= 4; ++nu) {
                const int off = harmonic_offset(d, nu);
                const double sum = yx.segment(off, dim_y(d, nu)).dot(yy.segment(off, dim_y(d, nu)));
                // independent closed forms: Legendre by its explicit polynomials, cosine of the angle
                const double t = std::clamp(x.dot(y), -1.0, 1.0);
                double closed = 0;
                if (d == 3) {
                    const double p[5] = {1, t, (3 * t * t - 1) / 2, (5 * t * t * t - 3 * t) / 2,
                                         (35 * std::pow(t, 4) - 30 * t * t + 3) / 8};
                    closed = (2 * nu + 1) / (4 * pi) * p[nu];
                } else {
                    closed = nu == 0 ? 1 / (2 * pi) : std::cos(nu * std::acos(t)) / pi;
                }
                CHECK(std::abs(sum - closed) < 1e-12);
            }
        }
}

TEST_CASE("HarmonicCoeffs arithmetic and access")
{
    HarmonicCoeffs<double> a(2, 1);
    a(0, 0) = {1, 2};
    a(1, 1) = {0, -1};
    HarmonicCoeffs<double> b = a + a;
    CHECK(b(0, 0) == Complex<double>(2, 4));
    const auto c = Complex<double>(0, 1) * a;
    CHECK(c(1, 1) == Complex<double>(1, 0));
    CHECK(a == a);
    CHECK_FALSE(a == b);
    CHECK_THROWS_AS(a(2, 0), std::out_of_range);
    CHECK_THROWS_AS(a += HarmonicCoeffs<double>(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicCoeffs<double>(2, 1, ComplexVector<double>::Zero(4)), std::invalid_argument);
}

TEST_CASE("project_directivity examples")
{
    using Fn = std::function<Complex<double>(const Pt&)>;
    auto one = project_directivity<double>(2, Fn([](const Pt&) { return Complex<double>(1, 0); }), 3, 16);
    CHECK(std::abs(one.coeffs(0, 0) - std::sqrt(2 * pi)) < 1e-12);
    CHECK(one.coeffs.coeffs().tail(one.coeffs.size() - 1).cwiseAbs().maxCoeff() < 1e-12);

    auto cosine = project_directivity<double>(2, Fn([](const Pt& u) { return Complex<double>(u(0), 0); }), 3, 16);
    CHECK(std::abs(cosine.coeffs(1, 0) - std::sqrt(pi)) < 1e-12);
    CHECK(std::abs(cosine.coeffs(0, 0)) < 1e-12);

    auto square = project_directivity<double>(2, Fn([](const Pt& u) { return Complex<double>(u(0) * u(0), 0); }), 2, 16);
    CHECK(std::abs(square.coeffs(0, 0) - std::sqrt(2 * pi) / 2) < 1e-12);
    CHECK(std::abs(square.coeffs(2, 0) - std::sqrt(pi) / 2) < 1e-12);
    CHECK(std::abs(square.coeffs(1, 0)) < 1e-12);
    CHECK(square.residual < 1e-12);

    // a degree-3 function truncated at degree 1 leaves a residual
    auto cut = project_directivity<double>(2, Fn([](const Pt& u) { return Complex<double>(u(0) * u(0) * u(0), 0); }), 1, 16);
    CHECK(cut.residual > 0.1);
    CHECK_THROWS_AS(project_directivity<double>(2, Fn([](const Pt&) { return Complex<double>(1, 0); }), 3, 4),
                    std::invalid_argument);
}

TEST_CASE("projection inverts synthesis")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1, 1);
    using Fn = std::function<Complex<double>(const Pt&)>;
    for (int d : {2, 3}) {
        HarmonicCoeffs<double> c(d, 3);
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const double re = u(rng);
            c.coeffs()(i) = {re, u(rng)};
        }
        const auto back = project_directivity<double>(d, Fn([&](const Pt& x) { return synthesize(c, x); }), 3, 12);
        CHECK((back.coeffs.coeffs() - c.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
    }
}
