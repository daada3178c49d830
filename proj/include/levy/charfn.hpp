#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levy/measure.hpp"
#include "levy/quadrature.hpp"
#include "levy/types.hpp"

namespace levy {

// Characteristic function phi(z) of an infinitely divisible law, with the
// metadata the inversion formulas need. Immutable once built; copies share
// the underlying evaluators.
struct CharFn {
  std::function<Complex(double)> evaluate;
  // Gaussian variance, taken as known.
  double sigma2 = 0.0;
  // Closed-form psi''(z) when available; empty otherwise.
  std::function<Complex(double)> psi2;
  std::string label;
  // Real z where log phi is not differentiable (Cauchy: 0).
  std::vector<double> kinks;
  // Whether the integral of x^2 U(dx) over |x| > 1 is finite.
  bool finite_second_moment = false;

  Complex operator()(double z) const { return evaluate(z); }
  bool has_psi2() const { return static_cast<bool>(psi2); }
};

CharFn normal(double m, double sigma);
CharFn cauchy(double c, double gamma);
CharFn compound_poisson(double c, const JumpLaw& jump);
CharFn negative_binomial(double c, double p);
CharFn hyperbolic_cosine();
CharFn gamma(double c, double alpha);

struct QuadSpec {
  double abs_tol = 1e-10;
  int max_intervals = 4000;
  // Density supports extending past this radius get an asymptotic tail treatment.
  double tail_start = 50.0;
};

// Cumulant psi(z) of a triplet under truncation h, by numerical integration
// for density measures. Throws ConvergenceError when abs_tol is not reached.
Complex triplet_cumulant(const LevyTriplet& t, const TruncationFn& h, double z,
                         const QuadSpec& q = {});

// phi = exp(psi) for the triplet. Quadrature failures surface on evaluation.
CharFn charfn_from_triplet(const LevyTriplet& t, const TruncationFn& h = indicator_truncation(),
                           const QuadSpec& q = {});

// e^{it} - 1 - it without cancellation for small t.
Complex expm1_i_minus_linear(double t);

}  // namespace levy
