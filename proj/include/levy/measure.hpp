#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "levy/types.hpp"

namespace levy {

// Compensator weight h(x) in the Levy-Khintchine cumulant. Admissible
// choices satisfy h(x) = 1 + o(x) at the origin and h(x) = O(1/x) at infinity.
struct TruncationFn {
  std::function<double(double)> evaluate;
  std::string name;
  // Points where h is not smooth; quadrature splits there.
  std::vector<double> breakpoints;

  double operator()(double x) const { return evaluate(x); }
};

// h(x) = 1 on |x| <= 1, 0 elsewhere. The default.
TruncationFn indicator_truncation();
// h(x) = 1 / (1 + x^2)
TruncationFn rational_truncation();
TruncationFn truncation_by_name(const std::string& name);

// Throws DomainError when h fails the admissibility checks at sample points.
void validate_truncation(const TruncationFn& h);

// Jump-size laws for compound Poisson: an atom, two atoms, or a uniform law.
struct PointMassJump {
  double x;
};
struct TwoPointJump {
  double x1, p1, x2, p2;
};
struct UniformJump {
  double a, b;
};
using JumpLaw = std::variant<PointMassJump, TwoPointJump, UniformJump>;

void validate_jump_law(const JumpLaw& law);
// Characteristic function of the jump law.
Complex jump_cf(const JumpLaw& law, double z);
// E[x^2 e^{izx}] under the jump law.
Complex jump_x2_transform(const JumpLaw& law, double z);
// E[x h(x)] under the jump law.
double jump_compensator(const JumpLaw& law, const TruncationFn& h);
std::string describe(const JumpLaw& law);

struct Atom {
  double location;
  double mass;
};

// Absolutely continuous Levy measure u(x) dx over a union of intervals (ends may be infinite).
struct DensityMeasure {
  std::function<double(double)> u;
  std::vector<std::pair<double, double>> support;
  std::string name;
  // z where the resulting cumulant is not smooth (e.g. 0 for heavy tails).
  std::vector<double> cumulant_kinks;
  bool finite_second_moment = false;
};

struct AtomMeasure {
  std::vector<Atom> atoms;
};

struct CompoundMeasure {
  double intensity;
  JumpLaw jump;
};

using LevyMeasureSpec = std::variant<DensityMeasure, AtomMeasure, CompoundMeasure>;

// Named Levy densities of the catalog laws.
DensityMeasure gamma_levy_density(double c, double alpha);
DensityMeasure cauchy_levy_density(double c);
DensityMeasure hyperbolic_cosine_levy_density();

void validate_measure(const LevyMeasureSpec& m);
// Numerical value of the integral of min(1, x^2) against U.
double integrate_min1_x2(const LevyMeasureSpec& m);

struct LevyTriplet {
  double gamma = 0.0;
  double sigma2 = 0.0;
  LevyMeasureSpec measure = AtomMeasure{};
};

// Throws DomainError on negative sigma2, invalid measure, or a divergent
// integral of min(1, x^2) U(dx).
void validate_triplet(const LevyTriplet& t);

}  // namespace levy
