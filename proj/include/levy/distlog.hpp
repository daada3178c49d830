#pragma once

#include "levy/charfn.hpp"
#include "levy/types.hpp"

namespace levy {

// Continuous branch of log phi on the symmetric grid {-zmax, ..., zmax},
// pinned to 0 at z = 0. Values at -z are conjugates of values at +z.
class UnwrappedLog {
 public:
  const Vector& grid() const { return grid_; }
  const ComplexVector& values() const { return values_; }
  double step() const { return step_; }
  double zmax() const { return zmax_; }
  // Largest |phase increment| seen between adjacent grid points.
  double phase_jump_budget() const { return phase_jump_budget_; }
  const CharFn& charfn() const { return phi_; }

 private:
  friend UnwrappedLog unwrap_log(const CharFn& phi, double zmax, double step);

  CharFn phi_;
  Vector grid_;
  ComplexVector values_;
  double step_ = 0.0;
  double zmax_ = 0.0;
  double phase_jump_budget_ = 0.0;
};

// Characteristic functions whose modulus drops below this are rejected.
inline constexpr double kVanishingModulus = 1e-12;
// Largest phase increment accepted between neighbouring grid points.
inline constexpr double kMaxPhaseStep = 0.5 * kPi;

// Follows arg phi outward from 0 by nearest-branch continuation. Throws
// UnwrapError on a vanishing phi or a phase step above kMaxPhaseStep, and
// DomainError if phi(0) != 1. The grid extends to the first multiple of
// `step` at or beyond zmax.
UnwrappedLog unwrap_log(const CharFn& phi, double zmax, double step = 1e-3);

// Cubic (4-point Lagrange) interpolation of the grid values. Stencils do not
// straddle declared kinks of log phi.
Complex log_phi_at(const UnwrappedLog& u, double z);

// log|phi(z)| + i arg phi(z) on the branch selected by the interpolated
// phase: exact to rounding wherever the interpolant is within pi of the
// true phase.
Complex distinguished_log(const UnwrappedLog& u, double z);

struct Psi2Estimate {
  Complex value;
  double error = 0.0;
};

// psi''(z) from 5-point central differences at steps fd_step and fd_step/2
// combined by one Richardson step. The error estimate is the size of the
// Richardson correction.
Psi2Estimate psi2_numeric(const UnwrappedLog& u, double z, double fd_step = 1e-3);

}  // namespace levy
