#pragma once

#include <iosfwd>
#include <string>

#include "levy/distlog.hpp"
#include "levy/types.hpp"

namespace levy {

enum class GridKind {
  rho_hat,    // transform of rho(dx) = 2 (1 - sin x / x) U(dx)
  neg_psi2,   // transform of x^2 U(dx), i.e. -(psi'' + sigma^2)
};

// Samples of the Fourier transform of a nonnegative finite measure on a
// symmetric uniform z-grid, with per-point error estimates.
struct RhoHatGrid {
  Vector z;
  ComplexVector values;
  Vector err;
  int quad_nodes = 0;
  double step = 0.0;
  GridKind kind = GridKind::rho_hat;

  double zmax() const { return z.size() ? z[z.size() - 1] : 0.0; }
  // Index of z = 0.
  Eigen::Index center() const { return z.size() / 2; }
};

inline constexpr int kDefaultLambdaNodes = 64;
// Slack allowed for the positive-definiteness bound and for rho_hat(0) < 0.
inline constexpr double kGridSlack = 1e-9;

struct RhoHatPoint {
  Complex value;
  double error = 0.0;
};

// Gauss-Legendre over lambda in [-1, 1] of log phi(z) - log phi(z + lambda)
// on the distinguished branch, minus sigma2 / 3. The lambda interval is
// split where z + lambda hits a declared kink. The error estimate compares
// against the rule with half the nodes.
RhoHatPoint rho_hat_point(const UnwrappedLog& u, double sigma2, double z,
                          int nodes = kDefaultLambdaNodes);

inline Complex rho_hat(const UnwrappedLog& u, double sigma2, double z,
                       int nodes = kDefaultLambdaNodes) {
  return rho_hat_point(u, sigma2, z, nodes).value;
}

// rho_hat on {-zmax, ..., zmax} with spacing `step`; zmax is rounded to a
// multiple of step. Throws InvariantError when the grid fails the
// checks in check_grid_invariants.
RhoHatGrid rho_hat_grid(const UnwrappedLog& u, double sigma2, double zmax, double step,
                        int nodes = kDefaultLambdaNodes, bool enforce_invariants = true);

// -(psi''(z) + sigma2) on the grid: the closed form psi'' when the
// characteristic function carries one, psi2_numeric otherwise.
RhoHatGrid neg_psi2_grid(const UnwrappedLog& u, double sigma2, double zmax, double step,
                         double fd_step = 1e-3, bool enforce_invariants = true);
// Closed-form psi'' only; no unwrapping needed, so any zmax is reachable.
RhoHatGrid neg_psi2_grid(const CharFn& phi, double sigma2, double zmax, double step,
                         bool enforce_invariants = true);

// Hermitian symmetry, real nonnegative value at 0, and |g(z)| <= g(0) up to
// slack plus the error estimates. Throws InvariantError naming the first
// offending z.
void check_grid_invariants(const RhoHatGrid& g);

// Number of grid points violating |g(z)| <= g(0) + slack + error estimates.
Eigen::Index count_pd_violations(const RhoHatGrid& g);

// CSV with header "z,re,im,err".
void write_csv(std::ostream& os, const RhoHatGrid& g);

}  // namespace levy
