#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "levy/charfn.hpp"
#include "levy/invert.hpp"

namespace levy::oracle {

// One closed-form reference case: the characteristic function together with
// its known Levy measure and, where available, the closed form of rho_hat.
struct OracleCase {
  std::string name;
  CharFn charfn;
  // Levy density and the (finite) region it is integrated over.
  std::function<double(double)> levy_density;
  std::vector<std::pair<double, double>> support;
  // Extends the last support piece to +inf (and the first to -inf) with an
  // asymptotic tail; needed for heavy tails.
  bool infinite_tails = false;
  std::vector<Atom> atoms;
  std::function<Complex(double)> rho_hat_closed;
  std::set<Route> routes;
  bool zero_measure = false;

  bool has_density() const { return static_cast<bool>(levy_density); }
};

OracleCase normal_case(double m, double sigma);
OracleCase cauchy_case(double c);
OracleCase compound_point_case(double c, double x0);
OracleCase compound_two_point_case(double c, TwoPointJump jump);
OracleCase compound_uniform_case(double c, double a, double b);
OracleCase negative_binomial_case(double c, double p);
OracleCase hyperbolic_cosine_case();
OracleCase gamma_case(double c, double alpha);

// The reference corpus: normal, Cauchy, three compound Poisson laws,
// negative binomial, hyperbolic cosine, Gamma.
std::vector<OracleCase> oracle_corpus();

enum class Scheme { adaptive, composite };

// Fourier transform of rho(dx) = 2 (1 - sin x / x) U(dx) straight from the
// known Levy measure. `adaptive` uses Gauss-Kronrod subdivision; `composite`
// a fixed high-order panel rule (finite supports only).
Complex brute_rho_hat(const OracleCase& c, double z, Scheme scheme = Scheme::adaptive);

// Integral of f(x) u(x) over B under the known measure (densities and atoms).
double brute_measure(const OracleCase& c, const Interval& B,
                     const std::function<double(double)>& f);

}  // namespace levy::oracle
