#include "levy/rho.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "levy/csv.hpp"
#include "levy/error.hpp"
#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

struct LambdaRules {
  quad::GaussLegendreRule<double> full, half;
  explicit LambdaRules(int nodes)
      : full(quad::gauss_legendre(nodes)), half(quad::gauss_legendre(std::max(1, nodes / 2))) {}
};

RhoHatPoint rho_hat_with(const UnwrappedLog& u, double sigma2, double z, const LambdaRules& r) {
  std::ostringstream os;
  if (!(std::abs(z) + 1.0 <= u.zmax() * (1.0 + 1e-12))) {
    os << "rho_hat: z=" << z << " needs the log unwrapped to |z|+1=" << std::abs(z) + 1.0
       << " but range is " << u.zmax();
    throw DomainError(os.str());
  }
  std::vector<double> cuts{-1.0};
  for (double k : u.charfn().kinks) {
    const double lambda = k - z;
    if (lambda > -1.0 + 1e-14 && lambda < 1.0 - 1e-14) cuts.push_back(lambda);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());

  const Complex at_z = log_phi_at(u, z);
  auto integrand = [&](double lambda) { return at_z - log_phi_at(u, z + lambda); };
  Complex full{}, half{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    full += quad::integrate(r.full, integrand, cuts[i], cuts[i + 1]);
    half += quad::integrate(r.half, integrand, cuts[i], cuts[i + 1]);
  }
  // interpolation error, probed halfway between unwrap nodes; the lambda range has length 2
  const double probe = z + 0.5 * u.step();
  const double interp = std::abs(log_phi_at(u, probe) - distinguished_log(u, probe));
  return {full - sigma2 / 3.0, std::abs(full - half) + 4.0 * interp};
}

Eigen::Index half_count(double zmax, double step) {
  if (!(step > 0.0) || !(zmax > 0.0)) throw DomainError("grid needs positive zmax and step");
  const double ratio = zmax / step;
  const auto n = static_cast<Eigen::Index>(std::llround(ratio));
  if (n < 1) throw DomainError("grid zmax must be at least one step");
  return n;
}

RhoHatGrid make_grid(Eigen::Index n, double step, GridKind kind, int nodes) {
  RhoHatGrid g;
  g.z.resize(2 * n + 1);
  g.values.resize(2 * n + 1);
  g.err.resize(2 * n + 1);
  for (Eigen::Index k = -n; k <= n; ++k) g.z[n + k] = static_cast<double>(k) * step;
  g.step = step;
  g.kind = kind;
  g.quad_nodes = nodes;
  return g;
}

// Fill from the z >= 0 half and mirror: values at -z are conjugates.
template <typename PointFn>
void fill_hermitian(RhoHatGrid& g, Eigen::Index n, PointFn&& point) {
  parallel_for(n + 1, [&](std::ptrdiff_t k) {
    const auto [value, error] = point(g.z[n + k]);
    g.values[n + k] = value;
    g.err[n + k] = error;
  });
  for (Eigen::Index k = 1; k <= n; ++k) {
    g.values[n - k] = std::conj(g.values[n + k]);
    g.err[n - k] = g.err[n + k];
  }
}

}  // namespace

RhoHatPoint rho_hat_point(const UnwrappedLog& u, double sigma2, double z, int nodes) {
  if (nodes < 16) throw DomainError("rho_hat: at least 16 lambda nodes required");
  return rho_hat_with(u, sigma2, z, LambdaRules(nodes));
}

RhoHatGrid rho_hat_grid(const UnwrappedLog& u, double sigma2, double zmax, double step,
                        int nodes, bool enforce_invariants) {
  if (nodes < 16) throw DomainError("rho_hat_grid: at least 16 lambda nodes required");
  const Eigen::Index n = half_count(zmax, step);
  const LambdaRules rules(nodes);
  RhoHatGrid g = make_grid(n, step, GridKind::rho_hat, nodes);
  fill_hermitian(g, n, [&](double z) {
    const RhoHatPoint p = rho_hat_with(u, sigma2, z, rules);
    return std::pair{p.value, p.error};
  });
  if (enforce_invariants) check_grid_invariants(g);
  return g;
}

RhoHatGrid neg_psi2_grid(const UnwrappedLog& u, double sigma2, double zmax, double step,
                         double fd_step, bool enforce_invariants) {
  const CharFn& phi = u.charfn();
  if (phi.has_psi2()) return neg_psi2_grid(phi, sigma2, zmax, step, enforce_invariants);
  const Eigen::Index n = half_count(zmax, step);
  if (!(zmax + 2.0 * fd_step <= u.zmax() * (1.0 + 1e-12)))
    throw DomainError("neg_psi2_grid: finite-difference stencil leaves the unwrapped range");
  RhoHatGrid g = make_grid(n, step, GridKind::neg_psi2, 0);
  fill_hermitian(g, n, [&](double z) {
    const Psi2Estimate p = psi2_numeric(u, z, fd_step);
    return std::pair{-(p.value + sigma2), p.error};
  });
  if (enforce_invariants) check_grid_invariants(g);
  return g;
}

RhoHatGrid neg_psi2_grid(const CharFn& phi, double sigma2, double zmax, double step,
                         bool enforce_invariants) {
  if (!phi.has_psi2())
    throw DomainError("neg_psi2_grid: " + phi.label + " has no closed-form psi''");
  const Eigen::Index n = half_count(zmax, step);
  RhoHatGrid g = make_grid(n, step, GridKind::neg_psi2, 0);
  fill_hermitian(g, n, [&](double z) {
    const Complex v = -(phi.psi2(z) + sigma2);
    return std::pair{v, 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(v) + sigma2)};
  });
  if (enforce_invariants) check_grid_invariants(g);
  return g;
}

void check_grid_invariants(const RhoHatGrid& g) {
  const Eigen::Index n = g.center();
  if (g.z.size() % 2 != 1 || g.z[n] != 0.0)
    throw InvariantError("grid is not symmetric about z = 0");
  const Complex at0 = g.values[n];
  std::ostringstream os;
  if (std::abs(at0.imag()) > kGridSlack + g.err[n]) {
    os << "value at z=0 is not real (imaginary part " << at0.imag() << ")";
    throw InvariantError(os.str());
  }
  if (at0.real() < -(kGridSlack + g.err[n])) {
    os << "value at z=0 is negative (" << at0.real()
       << "): not the transform of a nonnegative measure";
    throw InvariantError(os.str());
  }
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Complex plus = g.values[n + k], minus = g.values[n - k];
    if (std::abs(plus - std::conj(minus)) > kGridSlack + g.err[n + k] + g.err[n - k]) {
      os << "Hermitian symmetry fails at z=" << g.z[n + k];
      throw InvariantError(os.str());
    }
  }
  for (Eigen::Index i = 0; i < g.z.size(); ++i) {
    if (std::abs(g.values[i]) > at0.real() + kGridSlack + g.err[i] + g.err[n]) {
      os << "positive-definiteness bound fails at z=" << g.z[i] << ": |g(z)|="
         << std::abs(g.values[i]) << " > g(0)=" << at0.real();
      throw InvariantError(os.str());
    }
  }
}

Eigen::Index count_pd_violations(const RhoHatGrid& g) {
  const Eigen::Index n = g.center();
  const double bound = g.values[n].real() + kGridSlack + g.err[n];
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < g.z.size(); ++i)
    if (std::abs(g.values[i]) > bound + g.err[i]) ++count;
  return count;
}

void write_csv(std::ostream& os, const RhoHatGrid& g) {
  os << "z,re,im,err\n";
  for (Eigen::Index i = 0; i < g.z.size(); ++i)
    os << csv::num(g.z[i]) << ',' << csv::num(g.values[i].real()) << ','
       << csv::num(g.values[i].imag()) << ',' << csv::num(g.err[i]) << '\n';
}

}  // namespace levy
