#include "levy/distlog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levy/error.hpp"

namespace levy {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void require_in_range(const UnwrappedLog& u, double z, const char* what) {
  if (!(std::abs(z) <= u.zmax() * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << what << ": z=" << z << " outside unwrapped range [-" << u.zmax() << ", " << u.zmax()
       << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

UnwrappedLog unwrap_log(const CharFn& phi, double zmax, double step) {
  if (!(step > 0.0) || !(zmax > 0.0) || !std::isfinite(zmax))
    throw DomainError("unwrap_log: need positive zmax and step");
  const Complex at0 = phi(0.0);
  if (std::abs(at0 - 1.0) > 1e-12) throw DomainError("unwrap_log: phi(0) != 1");

  const auto n = static_cast<Eigen::Index>(std::ceil(zmax / step - 1e-9));
  Vector half_z(n + 1);
  ComplexVector half(n + 1);
  half_z[0] = 0.0;
  half[0] = 0.0;
  double phase = 0.0, budget = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double z = static_cast<double>(k) * step;
    const Complex v = phi(z);
    const double modulus = std::abs(v);
    if (!(modulus >= kVanishingModulus)) {
      std::ostringstream os;
      os << "unwrap_log: |phi(" << z << ")| = " << modulus << " below " << kVanishingModulus
         << " for " << phi.label;
      throw UnwrapError(os.str());
    }
    const double principal = std::arg(v);
    const double next = principal + kTwoPi * std::round((phase - principal) / kTwoPi);
    const double jump = std::abs(next - phase);
    if (jump > kMaxPhaseStep) {
      std::ostringstream os;
      os << "unwrap_log: phase step " << jump << " at z=" << z << " exceeds " << kMaxPhaseStep
         << "; refine the grid step (" << step << ")";
      throw UnwrapError(os.str());
    }
    budget = std::max(budget, jump);
    phase = next;
    half_z[k] = z;
    half[k] = Complex(std::log(modulus), phase);
  }

  UnwrappedLog u;
  u.phi_ = phi;
  u.step_ = step;
  u.zmax_ = static_cast<double>(n) * step;
  u.phase_jump_budget_ = budget;
  u.grid_.resize(2 * n + 1);
  u.values_.resize(2 * n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    u.grid_[n + k] = half_z[k];
    u.grid_[n - k] = -half_z[k];
    u.values_[n + k] = half[k];
    u.values_[n - k] = std::conj(half[k]);
  }
  return u;
}

Complex log_phi_at(const UnwrappedLog& u, double z) {
  require_in_range(u, z, "log_phi_at");
  const Vector& grid = u.grid();
  const ComplexVector& vals = u.values();
  const Eigen::Index last = grid.size() - 1;
  const double h = u.step();
  const double pos = (z - grid[0]) / h;
  auto j = static_cast<Eigen::Index>(std::floor(pos));
  j = std::clamp<Eigen::Index>(j, 0, last);
  const double t_exact = pos - static_cast<double>(j);
  if (j == last || std::abs(t_exact) < 1e-13) return vals[j];
  if (last < 3) {
    // too few points for a cubic
    return vals[j] + t_exact * (vals[j + 1] - vals[j]);
  }

  // stencil [s, s+3] containing [j, j+1]; prefer [j-1, j+2]
  Eigen::Index s = j - 1;
  for (double kink : u.charfn().kinks) {
    const double kp = (kink - grid[0]) / h;
    if (kp > static_cast<double>(j - 1) + 1e-9 && kp <= static_cast<double>(j) + 1e-9)
      s = j;  // kink at or just left of z_j: stay on the right
    else if (kp >= static_cast<double>(j + 1) - 1e-9 && kp < static_cast<double>(j + 2) - 1e-9)
      s = j - 2;  // kink at z_{j+1}: stay on the left
  }
  s = std::clamp<Eigen::Index>(s, 0, last - 3);
  const double t = pos - static_cast<double>(s);
  Complex sum{};
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (t - b) / static_cast<double>(a - b);
    sum += w * vals[s + a];
  }
  return sum;
}

Complex distinguished_log(const UnwrappedLog& u, double z) {
  if (z < 0.0) return std::conj(distinguished_log(u, -z));
  const Complex guide = log_phi_at(u, z);
  const Complex v = u.charfn()(z);
  const double modulus = std::abs(v);
  if (!(modulus > 0.0)) {
    std::ostringstream os;
    os << "distinguished_log: phi(" << z << ") vanishes";
    throw UnwrapError(os.str());
  }
  const double principal = std::arg(v);
  return {std::log(modulus),
          principal + kTwoPi * std::round((guide.imag() - principal) / kTwoPi)};
}

Psi2Estimate psi2_numeric(const UnwrappedLog& u, double z, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("psi2_numeric: fd_step must be positive");
  require_in_range(u, z - 2.0 * fd_step, "psi2_numeric stencil");
  require_in_range(u, z + 2.0 * fd_step, "psi2_numeric stencil");
  const double h = fd_step;
  const Complex f0 = distinguished_log(u, z);
  const Complex fp1 = distinguished_log(u, z + 0.5 * h), fm1 = distinguished_log(u, z - 0.5 * h);
  const Complex fp2 = distinguished_log(u, z + h), fm2 = distinguished_log(u, z - h);
  const Complex fp4 = distinguished_log(u, z + 2.0 * h), fm4 = distinguished_log(u, z - 2.0 * h);
  // D(s) = (-f(z+2s) + 16 f(z+s) - 30 f(z) + 16 f(z-s) - f(z-2s)) / (12 s^2), error O(s^4)
  const Complex coarse = (-fp4 + 16.0 * fp2 - 30.0 * f0 + 16.0 * fm2 - fm4) / (12.0 * h * h);
  const double s = 0.5 * h;
  const Complex fine = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * s * s);
  const Complex extrapolated = (16.0 * fine - coarse) / 15.0;
  // rounding in phi and in the log values, amplified by 1/s^2
  const double m = 1.0 + std::max({std::abs(f0), std::abs(fp1), std::abs(fm1), std::abs(fp2),
                             std::abs(fm2), std::abs(fp4), std::abs(fm4)});
  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * m * (64.0 / 12.0) / (s * s);
  return {extrapolated, std::abs(extrapolated - fine) + roundoff};
}

}  // namespace levy
