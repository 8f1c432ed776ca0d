#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rkbeam/specialfn.hpp"

using namespace rkbeam;
using std::numbers::pi;

namespace
{

// sum (-1)^m (z/2)^{nu+2m} / (m! Gamma(nu+m+1)) in long double, until terms stop mattering
double series_oracle(double nu, double z)
{
    long double term = std::pow(static_cast<long double>(z) / 2, nu) / std::tgamma(static_cast<long double>(nu) + 1);
    long double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -(static_cast<long double>(z) * z / 4) / (m * (nu + m));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum))
            break;
    }
    return static_cast<double>(sum);
}

double j0_root()
{
    double lo = 2.0;
    double hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (series_oracle(0, mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("bessel_j at the origin")
{
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(1.0, 0.0) == 0.0);
    CHECK(bessel_j(1.5, 0.0) == 0.0);
}

TEST_CASE("bessel_j matches the power series for moderate arguments")
{
    CHECK(bessel_j(1.0, 1.0) == doctest::Approx(0.44005058574493355).epsilon(1e-15));
    CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 7.5})
        for (double z : {0.01, 0.3, 1.0, 2.5, 4.0, 6.0, 9.0, 12.0}) {
            CAPTURE(nu);
            CAPTURE(z);
            CHECK(std::abs(bessel_j(nu, z) - series_oracle(nu, z)) < 1e-13);
        }
}

TEST_CASE("bessel_j agrees with the standard library at large arguments")
{
    for (double nu : {0.0, 1.0, 2.0, 4.0, 0.5, 2.5})
        for (double z : {15.0, 33.3, 80.0, 150.0, 777.0, 1e4}) {
            CAPTURE(nu);
            CAPTURE(z);
            CHECK(std::abs(bessel_j(nu, z) - std::cyl_bessel_j(nu, z)) < 1e-12);
        }
}

TEST_CASE("half-integer orders follow the spherical closed forms")
{
    for (double z : {0.2, 1.0, 3.7, 11.0, 40.0}) {
        const double a = std::sqrt(2 / (pi * z));
        CHECK(bessel_j(0.5, z) == doctest::Approx(a * std::sin(z)).epsilon(1e-13));
        CHECK(bessel_j(1.5, z) == doctest::Approx(a * (std::sin(z) / z - std::cos(z))).epsilon(1e-12));
    }
}

TEST_CASE("three-term recurrence holds across regimes")
{
    for (double z : {0.7, 3.9, 4.1, 18.0, 30.0, 120.0})
        for (double nu : {1.0, 2.0, 3.0, 1.5, 2.5}) {
            const double lhs = bessel_j(nu - 1, z) + bessel_j(nu + 1, z);
            CHECK(std::abs(lhs - 2 * nu / z * bessel_j(nu, z)) < 1e-13);
        }
}

TEST_CASE("bessel_j sequence equals single evaluations")
{
    const auto seq = bessel_j_sequence(0.0, 6, 7.25);
    for (int n = 0; n < 6; ++n)
        CHECK(seq[static_cast<std::size_t>(n)] == doctest::Approx(bessel_j(double(n), 7.25)).epsilon(1e-14));
}

TEST_CASE("bessel_j rejects invalid input")
{
    CHECK_THROWS_AS(bessel_j(0.0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0.3, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(-1.0, 1.0), DomainError);
}

TEST_CASE("J_0 derivative identity by central differences")
{
    const double h = 1e-5;
    for (double z : {0.5, 1.0, 2.0, 5.0}) {
        const double d = (bessel_j(0.0, z + h) - bessel_j(0.0, z - h)) / (2 * h);
        CHECK(std::abs(d / z + bessel_j(1.0, z) / z) <= 1e-6);
    }
}

TEST_CASE("surface_area")
{
    CHECK(surface_area(2) == doctest::Approx(2 * pi));
    CHECK(surface_area(3) == doctest::Approx(4 * pi));
    CHECK(surface_area(4) == doctest::Approx(2 * pi * pi));
}

TEST_CASE("big_j values")
{
    CHECK(big_j(2, 0, 0.0) == doctest::Approx(2 * pi));
    CHECK(big_j(3, 0, 0.0) == doctest::Approx(4 * pi));
    CHECK(big_j(3, 1, 0.0) == 0.0);
    CHECK(big_j(2, 1, 1.0) == doctest::Approx(2 * pi * series_oracle(1, 1.0)).epsilon(1e-15));
    CHECK(big_j(2, 1, 1.0) == doctest::Approx(2.7649193747683372).epsilon(1e-15));
    // d = 3: (2 pi)^{3/2} J_{nu+1/2}(z) / sqrt z = 4 pi j_nu(z)
    for (double z : {0.3, 2.0, 17.0})
        CHECK(big_j(3, 0, z) == doctest::Approx(4 * pi * std::sin(z) / z).epsilon(1e-13));
    CHECK_THROWS_AS(big_j(1, 0, 1.0), DomainError);
    // the radial kernel itself is dimension-generic
    CHECK(big_j(4, 0, 0.0) == doctest::Approx(2 * pi * pi));
    CHECK(big_j(4, 0, 1.5) == doctest::Approx(4 * pi * pi * std::cyl_bessel_j(1.0, 1.5) / 1.5).epsilon(1e-13));
}

TEST_CASE("big_j is continuous at the origin")
{
    for (int d : {2, 3})
        for (int nu = 0; nu <= 4; ++nu)
            CHECK(std::abs(big_j(d, nu, 1e-8) - big_j(d, nu, 0.0)) <= 1e-6);
}

TEST_CASE("big_j_sequence matches big_j")
{
    for (int d : {2, 3})
        for (double z : {0.0, 0.5, 4.5, 60.0}) {
            const auto seq = big_j_sequence(d, 5, z);
            for (int nu = 0; nu <= 5; ++nu)
                CHECK(seq[static_cast<std::size_t>(nu)] == doctest::Approx(big_j(d, nu, z)).epsilon(1e-14));
        }
}

TEST_CASE("first zero of J_0 gives a vanishing kernel")
{
    const double z = j0_root();
    CHECK(z == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(std::abs(big_j(2, 0, z)) < 1e-9);
}

TEST_CASE("legendre_p")
{
    CHECK(legendre_p(0, 0.3) == 1.0);
    CHECK(legendre_p(1, -0.5) == -0.5);
    CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125));
    for (double x : {-1.0, -0.3, 0.2, 0.9, 1.0})
        CHECK(legendre_p(3, x) == doctest::Approx((5 * x * x * x - 3 * x) / 2).epsilon(1e-14));
    CHECK_THROWS_AS(legendre_p(2, 1.5), DomainError);
}
