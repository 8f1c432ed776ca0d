// SPDX-License-Identifier: Apache-2.0
#include "rkbeam/selftest.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "rkbeam/fdcheck.hpp"
#include "rkbeam/rkbeam.hpp"

namespace rkbeam::selftest
{

namespace
{

using Pt = Point<double>;
using Field = std::function<Complex<double>(const Pt&)>;

struct Tracker
{
    SuiteResult result;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Tracker(std::string name, double tol)
    {
        result.name = std::move(name);
        result.tolerance = tol;
    }

    void record(double err)
    {
        // NaN must fail, so compare through !(err <= max)
        if (!(err <= result.max_error))
            result.max_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
        ++result.cases;
    }

    SuiteResult finish()
    {
        result.passed = result.cases > 0 && result.max_error <= result.tolerance;
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    }
};

Pt random_direction(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Pt u(d);
    do {
        for (int c = 0; c < d; ++c)
            u(c) = g(rng);
    } while (u.norm() < 1e-6);
    return u / u.norm();
}

Pt random_point(int d, double half, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-half, half);
    Pt r(d);
    for (int c = 0; c < d; ++c)
        r(c) = u(rng);
    return r;
}

Directivity<double> random_directivity(int d, int max_degree, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    Directivity<double> z(d, max_degree);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double re = u(rng);
        const double im = u(rng);
        z.coeffs()(i) = {re, im};
    }
    return z;
}

// sum c'_nu^mu y_nu^mu as a monomial polynomial
fd::Polynomial<double> operator_polynomial(const HarmonicCoeffs<double>& c)
{
    fd::Polynomial<double> op;
    for (int flat = 0; flat < c.size(); ++flat)
        if (c.coeffs()(flat) != Complex<double>(0, 0))
            op.add(fd::solid_harmonic_polynomial<double>(c.dim(), index_from_flat(c.dim(), flat)), c.coeffs()(flat));
    return op;
}

double rel_error(Complex<double> got, Complex<double> want, double floor)
{
    return std::abs(got - want) / std::max(std::abs(want), floor);
}

} // namespace

SuiteResult appendix_a()
{
    Tracker t("appendix_a", 1e-5);
    std::mt19937_64 rng(0xA11CE);
    for (int d : {2, 3})
        for (double k : {1.0, 10.0})
            for (int trial = 0; trial < 10; ++trial) {
                const auto zeta = random_directivity(d, 2, rng);
                const Pt theta = random_direction(d, rng);
                const Pt r = random_point(d, 1.0, rng);
                const auto op = operator_polynomial(induce(zeta, k).coeffs);
                const Field wave = [&](const Pt& x) { return std::polar(1.0, -k * theta.dot(x)); };
                const Complex<double> got = fd::apply_operator(op, wave, r, 1e-4 / k);
                const Complex<double> want = evaluate(zeta, theta) * wave(r);
                // floor: typical |zeta| for these coefficient draws
                t.record(rel_error(got, want, zeta.coeffs().norm() / std::sqrt(surface_area<double>(d))));
            }
    return t.finish();
}

SuiteResult appendix_b()
{
    Tracker t("appendix_b", 1e-4);
    const double h = 1e-4;
    for (int d : {2, 3})
        for (double z : {0.5, 1.0, 2.0}) {
            // g_{m+1}(x) = g_m'(x) / x, starting from big_j(d, 0, x)
            std::function<double(double)> g = [d](double x) { return big_j<double>(d, 0, x); };
            for (int nu = 1; nu <= 2; ++nu) {
                g = [g, h](double x) { return (g(x + h) - g(x - h)) / (2 * h * x); };
                const double want = (nu % 2 ? -1.0 : 1.0) * big_j<double>(d, nu, z) / std::pow(z, nu);
                t.record(std::abs(g(z) - want) / std::abs(want));
            }
        }
    return t.finish();
}

SuiteResult appendix_c()
{
    Tracker t("appendix_c", 1e-4);
    std::mt19937_64 rng(0xC0DE);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    const int field_degree = 3;
    for (int d : {2, 3})
        for (double k : {1.0, 4.0}) {
            HarmonicCoeffs<double> p(d, field_degree);
            for (Eigen::Index i = 0; i < p.size(); ++i) {
                const double m = mag(rng);
                p.coeffs()(i) = std::polar(m, phase(rng));
            }
            const Field field = [&](const Pt& r) {
                const double rho = r.norm();
                const auto radial = big_j_sequence<double>(d, field_degree, k * rho);
                Pt dir = Pt::Zero(d);
                dir(0) = 1;
                if (rho > 0)
                    dir = r / rho;
                const Vector<double> y = sph_harm_all<double>(d, field_degree, dir);
                Complex<double> s(0, 0);
                for (int flat = 0; flat < y.size(); ++flat)
                    s += p.coeffs()(flat) * radial[static_cast<std::size_t>(index_from_flat(d, flat).degree)] * y(flat);
                return s;
            };
            const Pt origin = Pt::Zero(d);
            for (int flat = 0; flat < harmonic_count(d, 2); ++flat) {
                const auto idx = index_from_flat(d, flat);
                fd::Polynomial<double> op = fd::solid_harmonic_polynomial<double>(d, idx);
                const Complex<double> got = fd::apply_operator(op, field, origin, 1e-3 / k);
                const Complex<double> want = std::pow(k, idx.degree) * p.coeffs()(flat);
                t.record(std::abs(got - want) / std::abs(want));
            }
        }
    return t.finish();
}

SuiteResult hobson_corollary()
{
    Tracker t("hobson_corollary", 1e-4);
    std::mt19937_64 rng(0x4B0B);
    std::uniform_real_distribution<double> wavenumber(1.0, 10.0);
    std::uniform_real_distribution<double> reach(0.5, 20.0);
    for (int geometry = 0; geometry < 20; ++geometry) {
        const int d = geometry % 2 ? 3 : 2;
        const double k = wavenumber(rng);
        const Pt r_prime = random_point(d, 1.0, rng);
        const Pt r = r_prime + random_direction(d, rng) * (reach(rng) / k);
        const Field kern = [&](const Pt& x) { return Complex<double>(kernel<double>(d, k, x, r_prime), 0); };
        for (int flat = 0; flat < harmonic_count(d, 2); ++flat) {
            Directivity<double> zeta(d, 2);
            zeta.coeffs()(flat) = 1;
            const auto op = operator_polynomial(induce(zeta, k).coeffs);
            const Complex<double> got = fd::apply_operator(op, kern, r, 1e-3 / k);
            const Complex<double> want = rk_directional_derivative(zeta, k, r, r_prime);
            // kernel values are O(1); the floor keeps Bessel zeros from dominating
            t.record(rel_error(got, want, 0.1));
        }
    }
    return t.finish();
}

SuiteResult addition_theorem()
{
    Tracker t("addition_theorem", 1e-12);
    std::mt19937_64 rng(0xADD);
    for (int d : {2, 3})
        for (int trial = 0; trial < 100; ++trial) {
            const Pt a = random_direction(d, rng);
            const Pt b = random_direction(d, rng);
            const Vector<double> ya = sph_harm_all<double>(d, 4, a);
            const Vector<double> yb = sph_harm_all<double>(d, 4, b);
            for (int nu = 0; nu <= 4; ++nu) {
                const int off = harmonic_offset(d, nu);
                const double sum = ya.segment(off, dim_y(d, nu)).dot(yb.segment(off, dim_y(d, nu)));
                t.record(std::abs(sum - zonal_kernel<double>(d, nu, a, b)));
            }
        }
    return t.finish();
}

SuiteResult orthonormality()
{
    Tracker t("orthonormality", 1e-12);
    for (int d : {2, 3}) {
        const int max_degree = 6;
        const auto quad = sphere_quadrature<double>(d, d == 2 ? 2 * max_degree + 2 : max_degree + 2);
        const int n = harmonic_count(d, max_degree);
        Matrix<double> gram = Matrix<double>::Zero(n, n);
        for (const auto& q : quad) {
            const Vector<double> y = sph_harm_all<double>(d, max_degree, q.direction);
            gram += q.weight * y * y.transpose();
        }
        t.record((gram - Matrix<double>::Identity(n, n)).cwiseAbs().maxCoeff());
    }
    return t.finish();
}

std::vector<SuiteResult> run_all()
{
    return {appendix_a(), appendix_b(), appendix_c(), hobson_corollary(), addition_theorem(), orthonormality()};
}

std::string format(const SuiteResult& r)
{
    std::ostringstream os;
    os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(18) << r.name << std::right
       << " max_error=" << std::scientific << std::setprecision(3) << r.max_error << " tol=" << r.tolerance
       << " cases=" << r.cases << std::fixed << std::setprecision(3) << " time=" << r.seconds << "s";
    return os.str();
}

} // namespace rkbeam::selftest
