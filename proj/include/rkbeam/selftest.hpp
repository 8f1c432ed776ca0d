// SPDX-License-Identifier: Apache-2.0
#pragma once

// Property suites that check the closed forms against independent numerical routes
// (finite differences, quadrature, explicit sums).

#include <string>
#include <vector>

namespace rkbeam::selftest
{

struct SuiteResult
{
    std::string name;
    bool passed = false;
    double max_error = 0;
    double tolerance = 0;
    int cases = 0;
    double seconds = 0;
};

/// induced operator applied to exp(-i k theta.r) by finite differences equals zeta(theta) exp(...)
SuiteResult appendix_a();
/// (1/z d/dz)^nu big_j(d, 0, z) = (-1)^nu big_j(d, nu, z) / z^nu by nested differences
SuiteResult appendix_b();
/// conjugate-harmonic operator at the origin of a mode field recovers k^nu p_nu^mu
SuiteResult appendix_c();
/// rk_directional_derivative against finite-difference y(d) kappa_k
SuiteResult hobson_corollary();
/// explicit sum_mu Y Y against the Legendre / cosine closed form
SuiteResult addition_theorem();
/// quadrature Gram matrix of the basis is the identity
SuiteResult orthonormality();

std::vector<SuiteResult> run_all();

std::string format(const SuiteResult& r);

} // namespace rkbeam::selftest
