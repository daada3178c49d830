#include "levy/invert.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "levy/csv.hpp"
#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {

void validate(const Interval& B) {
  if (!std::isfinite(B.a) || !std::isfinite(B.b) || !(B.a < B.b))
    throw DomainError("interval needs finite a < b");
}

std::string to_string(Route r) {
  switch (r) {
    case Route::eq1: return "eq1";
    case Route::eq2: return "eq2";
    case Route::eq3: return "eq3";
    case Route::eq4: return "eq4";
  }
  return "?";
}

Route route_from_string(const std::string& s) {
  if (s == "eq1") return Route::eq1;
  if (s == "eq2") return Route::eq2;
  if (s == "eq3") return Route::eq3;
  if (s == "eq4") return Route::eq4;
  throw DomainError("unknown route '" + s + "'");
}

std::string to_string(const Damping& d) {
  switch (d.kind) {
    case DampingKind::fejer: return "fejer";
    case DampingKind::gaussian: return "gaussian(" + csv::num(d.width) + ")";
    default: return "none";
  }
}

double weight_inv(double x) {
  if (x == 0.0) throw DomainError("weight_inv: x = 0");
  return 1.0 / weight(x);
}

namespace {

using StridedConst = Eigen::Map<const ComplexVector, 0, Eigen::InnerStride<>>;
using StridedReal = Eigen::Map<const Vector, 0, Eigen::InnerStride<>>;

// Truncated, damped Simpson integrals of g(z) k(z) over |z| <= Z for each
// Z in the regularisation ladder.
struct Ladder {
  std::vector<double> Z;
  std::vector<Complex> value;
  std::vector<double> grid_err;  // propagated per-point grid error
  std::vector<double> tail_rem;  // size of the first neglected tail term
};

Eigen::Index stride_of(const RhoHatGrid& g, const RegSpec& reg) {
  if (reg.quad_step == 0.0) return 1;
  const double ratio = reg.quad_step / g.step;
  const auto s = static_cast<Eigen::Index>(std::llround(ratio));
  if (s < 1 || std::abs(ratio - static_cast<double>(s)) > 1e-6 * ratio)
    throw DomainError("quad_step must be a positive multiple of the grid step");
  return s;
}

void validate_reg(const RegSpec& reg) {
  if (reg.Zlist.empty()) throw DomainError("Zlist is empty");
  for (std::size_t i = 0; i < reg.Zlist.size(); ++i) {
    if (!(reg.Zlist[i] > 0.0)) throw DomainError("Zlist entries must be positive");
    if (i > 0 && !(reg.Zlist[i] > reg.Zlist[i - 1]))
      throw DomainError("Zlist must be increasing");
  }
  if (reg.damping.kind == DampingKind::gaussian && !(reg.damping.width > 0.0))
    throw DomainError("gaussian damping width must be positive");
  if (!(reg.tol > 0.0)) throw DomainError("tol must be positive");
}

// kernel: k(z) sampled on the full grid
Ladder integrate_ladder(const RhoHatGrid& g, const ComplexVector& kernel, const RegSpec& reg,
                        bool tail, double x) {
  validate_reg(reg);
  const Eigen::Index s = stride_of(g, reg);
  const Eigen::Index n = g.center();
  const double h = g.step * static_cast<double>(s);
  Ladder out;
  for (double Zreq : reg.Zlist) {
    const auto m = static_cast<Eigen::Index>(std::llround(Zreq / h));
    if (m < 1 || m * s > n) {
      std::ostringstream os;
      os << "insufficient grid coverage: Z=" << Zreq << " with grid zmax " << g.zmax();
      throw DomainError(os.str());
    }
    const double Z = static_cast<double>(m) * h;
    const Eigen::Index first = n - m * s, count = 2 * m + 1;
    const StridedConst vals(g.values.data() + first, count, Eigen::InnerStride<>(s));
    const StridedConst kern(kernel.data() + first, count, Eigen::InnerStride<>(s));
    const StridedReal err(g.err.data() + first, count, Eigen::InnerStride<>(s));
    Vector w = quad::simpson_weights(count, h);
    for (Eigen::Index j = 0; j < count; ++j)
      w[j] *= reg.damping(static_cast<double>(j - m) * h / Z);
    const ComplexVector terms = vals.cwiseProduct(kern);
    Complex I = (w.cast<Complex>().array() * terms.array()).sum();
    const double gerr = (w.array() * kern.cwiseAbs().array() * err.array()).sum();
    double rem = 0.0;

    if (tail && reg.damping.kind == DampingKind::none) {
      // Integration by parts past +-Z: needs F smooth and non-oscillating there.
      const double hg = g.step;
      const Eigen::Index hi = n + m * s, lo = n - m * s;
      const Complex Fp = g.values[hi], Fm = g.values[lo];
      const Complex dFp = (3.0 * g.values[hi] - 4.0 * g.values[hi - 1] + g.values[hi - 2]) / (2.0 * hg);
      const Complex dFm = -(3.0 * g.values[lo] - 4.0 * g.values[lo + 1] + g.values[lo + 2]) / (2.0 * hg);
      const Complex ix(0.0, x);
      I += std::polar(1.0, -Z * x) * (Fp / ix + dFp / (ix * ix));
      I -= std::polar(1.0, Z * x) * (Fm / ix + dFm / (ix * ix));
      const auto d2 = [&](Eigen::Index i, Eigen::Index dir) {
        return std::abs(2.0 * g.values[i] - 5.0 * g.values[i + dir] + 4.0 * g.values[i + 2 * dir] -
                        g.values[i + 3 * dir]) / (hg * hg);
      };
      rem = (d2(hi, -1) + d2(lo, 1)) / std::pow(std::abs(x), 3);
    }
    out.Z.push_back(Z);
    out.value.push_back(I);
    out.grid_err.push_back(gerr);
    out.tail_rem.push_back(rem);
  }
  return out;
}

struct Extrapolated {
  Complex value;
  double err;
  double Z;
  std::vector<double> levels;
};

Extrapolated extrapolate(const Ladder& L, const Damping& d) {
  Extrapolated e{L.value.back(), L.grid_err.back() + L.tail_rem.back(), L.Z.back(), {}};
  for (const Complex& v : L.value) e.levels.push_back(v.real());
  const std::size_t k = L.value.size();
  if (k < 2) return e;
  const Complex last = L.value[k - 1], prev = L.value[k - 2];
  e.err += std::abs(last - prev);
  // Damped truncations carry an algebraic bias in 1/Z: order 2 for the
  // gaussian taper, 1 for Fejer. Undamped ladders are left as is.
  double order = 0.0;
  if (d.kind == DampingKind::gaussian) order = 2.0;
  if (d.kind == DampingKind::fejer) order = 1.0;
  if (order > 0.0) {
    const double r = std::pow(L.Z[k - 1] / L.Z[k - 2], order);
    e.value = last + (last - prev) / (r - 1.0);
  }
  return e;
}

void require_kind(const RhoHatGrid& g, GridKind want, const char* op) {
  if (g.kind != want) {
    std::ostringstream os;
    os << op << ": expects a "
       << (want == GridKind::rho_hat ? "rho_hat grid" : "neg_psi2 grid");
    throw DomainError(os.str());
  }
}

MassResult invert_mass(const RhoHatGrid& g, const Interval& B, const RegSpec& reg, Route route,
                       double prefactor) {
  validate(B);
  ComplexVector kernel(g.z.size());
  for (Eigen::Index i = 0; i < g.z.size(); ++i) kernel[i] = interval_kernel(B, g.z[i]);
  const Ladder L = integrate_ladder(g, kernel, reg, false, 0.0);
  const Extrapolated e = extrapolate(L, reg.damping);
  MassResult r;
  r.interval = B;
  r.weighted_mass = prefactor * e.value.real();
  r.err = prefactor * e.err;
  r.route = route;
  r.damping = reg.damping;
  r.Z_used = e.Z;
  r.converged = r.err <= reg.tol;
  for (double v : e.levels) r.levels.push_back(prefactor * v);
  return r;
}

DensityPoint invert_point(const RhoHatGrid& g, double x, const RegSpec& reg, Route route,
                          double prefactor) {
  ComplexVector kernel(g.z.size());
  for (Eigen::Index i = 0; i < g.z.size(); ++i) kernel[i] = std::polar(1.0, -g.z[i] * x);
  const Ladder L = integrate_ladder(g, kernel, reg, reg.tail_correction, x);
  const Extrapolated e = extrapolate(L, reg.damping);
  DensityPoint p;
  p.x = x;
  p.u = prefactor * e.value.real();
  p.err = std::abs(prefactor) * e.err;
  p.route = route;
  p.imag_residual = std::abs(prefactor * e.value.imag());
  p.converged = p.err <= reg.tol;
  if (p.imag_residual > p.err + 1e-9) {
    std::ostringstream os;
    os << "density at x=" << x << " has imaginary residual " << p.imag_residual
       << " above its error estimate " << p.err;
    throw ConvergenceError(os.str(), p.imag_residual);
  }
  return p;
}

}  // namespace

MassResult invert_mass_eq1(const RhoHatGrid& rg, const Interval& B, const RegSpec& reg) {
  require_kind(rg, GridKind::rho_hat, "invert_mass_eq1");
  return invert_mass(rg, B, reg, Route::eq1, 1.0 / (4.0 * kPi));
}

MassResult invert_mass_eq2(const RhoHatGrid& ng, const Interval& B, const RegSpec& reg) {
  require_kind(ng, GridKind::neg_psi2, "invert_mass_eq2");
  return invert_mass(ng, B, reg, Route::eq2, 1.0 / (2.0 * kPi));
}

DensityPoint invert_density_eq3(const RhoHatGrid& rg, double x, const RegSpec& reg) {
  require_kind(rg, GridKind::rho_hat, "invert_density_eq3");
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("invert_density_eq3: x must be nonzero");
  return invert_point(rg, x, reg, Route::eq3, weight_inv(x) / (4.0 * kPi));
}

DensityPoint invert_density_eq4(const RhoHatGrid& ng, double x, const RegSpec& reg) {
  require_kind(ng, GridKind::neg_psi2, "invert_density_eq4");
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("invert_density_eq4: x must be nonzero");
  return invert_point(ng, x, reg, Route::eq4, 1.0 / (2.0 * kPi * x * x));
}

DensityEstimate invert_density(const RhoHatGrid& g, const std::vector<double>& xs, Route route,
                               const RegSpec& reg) {
  if (route != Route::eq3 && route != Route::eq4)
    throw DomainError("densities use route eq3 or eq4");
  DensityEstimate d;
  d.route = route;
  const auto n = static_cast<Eigen::Index>(xs.size());
  d.x.resize(n);
  d.u.resize(n);
  d.err.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const DensityPoint p = route == Route::eq3 ? invert_density_eq3(g, xs[i], reg)
                                               : invert_density_eq4(g, xs[i], reg);
    d.x[i] = p.x;
    d.u[i] = p.u;
    d.err[i] = p.err;
    d.converged = d.converged && p.converged;
  }
  return d;
}

std::vector<AtomEstimate> lattice_atoms(const RhoHatGrid& rg, int kmax, const RegSpec& reg) {
  if (kmax < 1) throw DomainError("lattice_atoms: kmax must be positive");
  std::vector<AtomEstimate> out;
  for (int k = 1; k <= kmax; ++k) {
    const double kk = static_cast<double>(k);
    const MassResult m = invert_mass_eq1(rg, {kk - 0.5, kk + 0.5}, reg);
    const double w = weight(kk);
    out.push_back({k, m.weighted_mass / w, m.err / w, m.err / w <= reg.tol});
  }
  return out;
}

void write_csv(std::ostream& os, const DensityEstimate& d) {
  os << "x,u,err,route\n";
  const std::string route = to_string(d.route);
  for (Eigen::Index i = 0; i < d.x.size(); ++i)
    os << csv::num(d.x[i]) << ',' << csv::num(d.u[i]) << ',' << csv::num(d.err[i]) << ','
       << route << '\n';
}

void write_csv(std::ostream& os, const std::vector<MassResult>& masses) {
  os << "a,b,mass,err,route\n";
  for (const MassResult& m : masses)
    os << csv::num(m.interval.a) << ',' << csv::num(m.interval.b) << ','
       << csv::num(m.weighted_mass) << ',' << csv::num(m.err) << ',' << to_string(m.route)
       << '\n';
}

}  // namespace levy
