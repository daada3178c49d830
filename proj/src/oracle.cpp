#include "levy/oracle.hpp"

#include <cmath>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy::oracle {

namespace {

// 1 - sin(x)/x in extended precision; kept separate from the library's weight().
double one_minus_sinc(double xd) {
  const long double x = xd;
  if (std::fabs(x) < 1e-2L) {
    const long double x2 = x * x;
    return static_cast<double>(x2 / 6.0L - x2 * x2 / 120.0L + x2 * x2 * x2 / 5040.0L -
                               x2 * x2 * x2 * x2 / 362880.0L);
  }
  return static_cast<double>(1.0L - std::sin(x) / x);
}

constexpr double kFarCycles = 1000.0;

// Integral over [start, inf) of a(x) e^{i w x}; a smooth and decaying.
Complex fourier_tail(const std::function<double(double)>& a, double w, double start) {
  const quad::AdaptiveOptions opt{1e-13, 0.0, 4000};
  if (w == 0.0) return quad::integrate_adaptive(a, start, kInf, opt).value;
  const double far = std::max(start, kFarCycles / std::abs(w));
  Complex near{};
  if (far > start)
    near = quad::integrate_adaptive([&](double x) { return a(x) * std::polar(1.0, w * x); }, start,
                                    far, opt)
               .value;
  const double d = 1e-4 * far;
  const double a0 = a(far), ap = a(far + d), am = a(far - d);
  const double a1 = (ap - am) / (2.0 * d), a2 = (ap - 2.0 * a0 + am) / (d * d);
  const Complex iw(0.0, w);
  return near + std::polar(1.0, w * far) * (-a0 / iw + a1 / (iw * iw) - a2 / (iw * iw * iw));
}

// Transform of rho over [L, inf) (or (-inf, -L] when mirrored) for density u.
Complex rho_tail(const std::function<double(double)>& u, double z, double L, bool mirrored) {
  const double s = mirrored ? -1.0 : 1.0;
  auto uu = [&](double y) { return u(s * y); };
  const double zz = s * z;  // e^{izx} with x = s y
  // 2u(x)(1 - sin x/x) e^{izx} = 2u e^{izx} - (u/x)(e^{i(z+1)x} - e^{i(z-1)x}) / i
  // and u(x)/x = s u(sy)/y.
  auto over_x = [&](double y) { return s * uu(y) / y; };
  const Complex two_u = 2.0 * fourier_tail(uu, zz, L);
  const Complex plus = fourier_tail(over_x, zz + s, L);
  const Complex minus = fourier_tail(over_x, zz - s, L);
  return two_u - (plus - minus) / Complex(0.0, 1.0);
}

}  // namespace

OracleCase normal_case(double m, double sigma) {
  OracleCase c;
  c.name = "normal";
  c.charfn = normal(m, sigma);
  c.zero_measure = true;
  c.rho_hat_closed = [](double) { return Complex{}; };
  c.routes = {Route::eq1, Route::eq2, Route::eq3, Route::eq4};
  return c;
}

OracleCase cauchy_case(double cc) {
  OracleCase c;
  c.name = "cauchy";
  c.charfn = cauchy(cc, 0.0);
  c.levy_density = [cc](double x) { return cc / (kPi * x * x); };
  c.support = {{-50.0, 0.0}, {0.0, 50.0}};
  c.infinite_tails = true;
  c.rho_hat_closed = [cc](double z) {
    const double az = std::abs(z);
    return Complex(az <= 1.0 ? cc * (az - 1.0) * (az - 1.0) : 0.0, 0.0);
  };
  c.routes = {Route::eq1, Route::eq3};
  return c;
}

namespace {

std::function<Complex(double)> atoms_rho_hat(std::vector<Atom> atoms) {
  return [atoms = std::move(atoms)](double z) {
    Complex s{};
    for (const Atom& a : atoms) {
      const double x = a.location;
      s += 2.0 * a.mass * std::polar(1.0, z * x) * ((x - std::sin(x)) / x);
    }
    return s;
  };
}

}  // namespace

OracleCase compound_point_case(double cc, double x0) {
  OracleCase c;
  c.name = "compound_poisson_point";
  c.charfn = compound_poisson(cc, PointMassJump{x0});
  c.atoms = {{x0, cc}};
  c.rho_hat_closed = atoms_rho_hat(c.atoms);
  c.routes = {Route::eq1};
  return c;
}

OracleCase compound_two_point_case(double cc, TwoPointJump j) {
  OracleCase c;
  c.name = "compound_poisson_two_point";
  c.charfn = compound_poisson(cc, j);
  c.atoms = {{j.x1, cc * j.p1}, {j.x2, cc * j.p2}};
  c.rho_hat_closed = atoms_rho_hat(c.atoms);
  c.routes = {Route::eq1};
  return c;
}

OracleCase compound_uniform_case(double cc, double a, double b) {
  OracleCase c;
  c.name = "compound_poisson_uniform";
  c.charfn = compound_poisson(cc, UniformJump{a, b});
  const double height = cc / (b - a);
  c.levy_density = [height, a, b](double x) { return (x >= a && x <= b) ? height : 0.0; };
  if (a < 0.0 && b > 0.0)
    c.support = {{a, 0.0}, {0.0, b}};
  else
    c.support = {{a, b}};
  c.routes = {Route::eq1};
  return c;
}

OracleCase negative_binomial_case(double cc, double p) {
  OracleCase c;
  c.name = "negative_binomial";
  c.charfn = negative_binomial(cc, p);
  const double q = 1.0 - p;
  for (int k = 1; std::pow(q, k) >= 1e-18; ++k)
    c.atoms.push_back({static_cast<double>(k), cc * std::pow(q, k) / k});
  // 2c sum_k q^k (k - sin k) / k^2 e^{ikz}
  c.rho_hat_closed = [cc, q](double z) {
    Complex s{};
    for (int k = 1; std::pow(q, k) >= 1e-18; ++k) {
      const double kk = k;
      s += std::pow(q, k) * (kk - std::sin(kk)) / (kk * kk) * std::polar(1.0, kk * z);
    }
    return 2.0 * cc * s;
  };
  c.routes = {Route::eq1};
  return c;
}

OracleCase hyperbolic_cosine_case() {
  OracleCase c;
  c.name = "hyperbolic_cosine";
  c.charfn = hyperbolic_cosine();
  c.levy_density = [](double x) { return 1.0 / (x * (std::exp(x) - std::exp(-x))); };
  c.support = {{-40.0, 0.0}, {0.0, 40.0}};
  c.routes = {Route::eq1, Route::eq2, Route::eq3, Route::eq4};
  return c;
}

OracleCase gamma_case(double cc, double alpha) {
  OracleCase c;
  c.name = "gamma";
  c.charfn = gamma(cc, alpha);
  c.levy_density = [cc, alpha](double x) { return x > 0.0 ? cc / x * std::exp(-alpha * x) : 0.0; };
  c.support = {{0.0, 60.0 / alpha}};
  c.routes = {Route::eq1, Route::eq2, Route::eq3, Route::eq4};
  return c;
}

std::vector<OracleCase> oracle_corpus() {
  return {normal_case(0.5, 1.5),
          cauchy_case(1.0),
          compound_point_case(2.0, 1.0),
          compound_two_point_case(1.5, {-1.0, 0.5, 2.0, 0.5}),
          compound_uniform_case(1.0, 0.0, 1.0),
          negative_binomial_case(1.0, 0.5),
          hyperbolic_cosine_case(),
          gamma_case(1.0, 1.0)};
}

Complex brute_rho_hat(const OracleCase& c, double z, Scheme scheme) {
  if (c.zero_measure) return {};
  Complex total{};
  for (const Atom& a : c.atoms)
    total += 2.0 * a.mass * one_minus_sinc(a.location) * std::polar(1.0, z * a.location);
  if (!c.has_density()) return total;
  if (scheme == Scheme::composite && c.infinite_tails)
    throw DomainError("composite scheme needs a finite support");

  auto integrand = [&](double x) -> Complex {
    if (x == 0.0) return {};
    return 2.0 * one_minus_sinc(x) * c.levy_density(x) * std::polar(1.0, z * x);
  };
  static const auto rule = quad::gauss_legendre(20);
  for (const auto& [a, b] : c.support) {
    if (scheme == Scheme::adaptive) {
      const auto r = quad::integrate_adaptive(integrand, a, b, {1e-13, 0.0, 20000});
      if (!r.converged)
        throw ConvergenceError("brute_rho_hat: quadrature did not converge", r.error);
      total += r.value;
    } else {
      const int panels = static_cast<int>(std::ceil((b - a) * (std::abs(z) + 4.0)));
      total += quad::integrate_composite(rule, integrand, a, b, std::max(panels, 64));
    }
  }
  if (c.infinite_tails) {
    total += rho_tail(c.levy_density, z, c.support.back().second, false);
    total += rho_tail(c.levy_density, z, -c.support.front().first, true);
  }
  return total;
}

double brute_measure(const OracleCase& c, const Interval& B,
                     const std::function<double(double)>& f) {
  validate(B);
  double total = 0.0;
  for (const Atom& a : c.atoms)
    if (a.location >= B.a && a.location <= B.b) total += a.mass * f(a.location);
  if (!c.has_density()) return total;
  std::vector<double> cuts{B.a};
  if (B.a < 0.0 && B.b > 0.0) cuts.push_back(0.0);
  cuts.push_back(B.b);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto r = quad::integrate_adaptive(
        [&](double x) { return x == 0.0 ? 0.0 : f(x) * c.levy_density(x); }, cuts[i], cuts[i + 1],
        {1e-13, 1e-13, 4000});
    total += r.value;
  }
  return total;
}

}  // namespace levy::oracle
