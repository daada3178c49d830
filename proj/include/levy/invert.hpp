#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "levy/rho.hpp"
#include "levy/types.hpp"

namespace levy {

// Closed interval [a, b] with finite a < b.
struct Interval {
  double a, b;
};

void validate(const Interval& b);

enum class Route { eq1, eq2, eq3, eq4 };
std::string to_string(Route r);
Route route_from_string(const std::string& s);

enum class DampingKind { none, fejer, gaussian };

// Multiplier d(z / Z) applied before truncating at |z| = Z.
struct Damping {
  DampingKind kind = DampingKind::none;
  double width = 0.5;  // gaussian only

  double operator()(double t) const {
    switch (kind) {
      case DampingKind::fejer: return std::max(0.0, 1.0 - std::abs(t));
      case DampingKind::gaussian: return std::exp(-t * t / (2.0 * width * width));
      default: return 1.0;
    }
  }
  static Damping none() { return {DampingKind::none, 0.5}; }
  static Damping fejer() { return {DampingKind::fejer, 0.5}; }
  static Damping gaussian(double w = 0.5) { return {DampingKind::gaussian, w}; }
};

std::string to_string(const Damping& d);

// How the symmetric-limit integral over the real line is realised.
struct RegSpec {
  // Truncation levels, increasing. Each is rounded to a multiple of quad_step.
  std::vector<double> Zlist{40.0, 60.0, 80.0};
  Damping damping = Damping::none();
  // Simpson step in z; 0 means the grid step. Must be a multiple of the grid step.
  double quad_step = 0.0;
  // Requested absolute tolerance on the returned quantity.
  double tol = 1e-3;
  // Add the two-term integration-by-parts estimate of the integral beyond
  // +-Z. Density routes only, undamped only.
  bool tail_correction = true;

  static RegSpec for_masses() {
    RegSpec r;
    r.damping = Damping::gaussian(0.5);
    r.tail_correction = false;
    return r;
  }
  static RegSpec for_densities() { return RegSpec{}; }
};

struct MassResult {
  Interval interval;
  double weighted_mass = 0.0;
  double err = 0.0;
  Route route = Route::eq1;
  Damping damping;
  double Z_used = 0.0;
  bool converged = false;
  // Raw truncated values per Z level, before extrapolation.
  std::vector<double> levels;
};

struct DensityPoint {
  double x = 0.0;
  double u = 0.0;
  double err = 0.0;
  Route route = Route::eq3;
  double imag_residual = 0.0;
  bool converged = false;
};

struct DensityEstimate {
  Vector x;
  Vector u;
  Vector err;
  Route route = Route::eq3;
  bool converged = true;
};

// (x - sin x) / x; a series below |x| = 0.1 avoids the cancellation.
template <typename Scalar>
Scalar weight(Scalar x) {
  using std::abs;
  using std::sin;
  if (abs(x) < Scalar(0.1)) {
    // sum_{k>=1} (-1)^{k+1} x^{2k} / (2k+1)!
    const Scalar x2 = x * x;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar term = x2 / 6, sum = 0;
    for (int k = 1; k < 200 && abs(term) > eps * abs(sum); ++k) {
      sum += term;
      term *= -x2 / Scalar((2 * k + 2) * (2 * k + 3));
    }
    return sum;
  }
  return (x - sin(x)) / x;
}

// x / (x - sin x); throws DomainError at 0.
double weight_inv(double x);

// Integral of e^{-izx} over [a, b]: (e^{-iza} - e^{-izb}) / (iz), Taylor
// expanded for |z| < 1e-4.
template <typename Scalar>
std::complex<Scalar> interval_kernel(const Interval& B, Scalar z) {
  using C = std::complex<Scalar>;
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar len = Scalar(B.b) - Scalar(B.a);
  const C lead = std::polar(Scalar(1), -z * Scalar(B.a));
  if (abs(z) < Scalar(1e-4)) {
    // len * e^{-iza} * (1 - iw/2 - w^2/6 + iw^3/24 + w^4/120), w = z len
    const Scalar w = z * len;
    const C series(Scalar(1) - w * w / 6 + w * w * w * w / 120, -w / 2 + w * w * w / 24);
    return lead * len * series;
  }
  // (1 - e^{-iw}) / (iw) with 1 - e^{-iw} = 2 sin^2(w/2) + i sin w
  const Scalar w = z * len;
  const Scalar s = sin(w / 2);
  const C numer(2 * s * s, sin(w));
  return lead * len * numer / C(0, w);
}

// Weighted mass of (x - sin x)/x U(dx) over B from a rho_hat grid.
MassResult invert_mass_eq1(const RhoHatGrid& rg, const Interval& B,
                           const RegSpec& reg = RegSpec::for_masses());
// x^2 U(dx) over B from a neg_psi2 grid.
MassResult invert_mass_eq2(const RhoHatGrid& ng, const Interval& B,
                           const RegSpec& reg = RegSpec::for_masses());

// Density at x != 0 from a rho_hat grid.
DensityPoint invert_density_eq3(const RhoHatGrid& rg, double x,
                                const RegSpec& reg = RegSpec::for_densities());
// Density at x != 0 from a neg_psi2 grid.
DensityPoint invert_density_eq4(const RhoHatGrid& ng, double x,
                                const RegSpec& reg = RegSpec::for_densities());

DensityEstimate invert_density(const RhoHatGrid& g, const std::vector<double>& xs, Route route,
                               const RegSpec& reg = RegSpec::for_densities());

struct AtomEstimate {
  int k = 0;
  double mass = 0.0;
  double err = 0.0;
  bool converged = false;
};

// U({k}) for k = 1..kmax from Eq. (1) masses over [k - 1/2, k + 1/2].
std::vector<AtomEstimate> lattice_atoms(const RhoHatGrid& rg, int kmax,
                                        const RegSpec& reg = RegSpec::for_masses());

// CSV writers: densities "x,u,err,route", masses "a,b,mass,err,route".
void write_csv(std::ostream& os, const DensityEstimate& d);
void write_csv(std::ostream& os, const std::vector<MassResult>& masses);

}  // namespace levy
