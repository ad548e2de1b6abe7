// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace nfis {

/// Values of the Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2) dt and
/// S(x) = int_0^x sin(pi t^2 / 2) dt.
struct FresnelPair {
  double c_val = 0.0;
  double s_val = 0.0;
};

/// Fresnel integrals with absolute error below 1e-9 for every finite input.
/// Throws std::domain_error on NaN or infinity.
FresnelPair fresnel(double xi);

/// Focusing function F(xi) = (C(xi) + j S(xi)) / xi, with F(0) = 1.
/// Throws std::domain_error for negative or non-finite xi.
std::complex<double> fresnel_f(double xi);

/// Periodic sinc sin(n u) / (n sin u). The removable singularities at
/// u = k pi evaluate to (-1)^(k (n - 1)).
double dirichlet_ratio(double u, int n);

/// Rounded half-power point of |F|^2 quoted in the literature.
inline constexpr double kXi3dbNominal = 1.318;

/// Root of |F(xi)|^2 = 1/2, solved to machine precision.
double solve_xi_3db();

}  // namespace nfis
