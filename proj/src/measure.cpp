#include "levy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {

TruncationFn indicator_truncation() {
  return {[](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; }, "indicator", {-1.0, 1.0}};
}

TruncationFn rational_truncation() {
  return {[](double x) { return 1.0 / (1.0 + x * x); }, "rational", {}};
}

TruncationFn truncation_by_name(const std::string& name) {
  if (name == "indicator") return indicator_truncation();
  if (name == "rational") return rational_truncation();
  throw DomainError("unknown truncation function '" + name + "'");
}

void validate_truncation(const TruncationFn& h) {
  if (!h.evaluate) throw DomainError("truncation function is empty");
  // h(x) - 1 = o(x): the ratio must shrink toward the origin.
  for (double x : {1e-3, 1e-4, 1e-5}) {
    for (double s : {-1.0, 1.0}) {
      const double v = h(s * x);
      if (!std::isfinite(v) || std::abs(v - 1.0) > 1e-2 * x)
        throw DomainError("truncation '" + h.name + "' is not 1 + o(x) near the origin");
    }
  }
  // x h(x) = O(1) at infinity.
  for (double x : {1e1, 1e2, 1e3, 1e4, 1e6}) {
    for (double s : {-1.0, 1.0}) {
      const double v = h(s * x);
      if (!std::isfinite(v) || std::abs(x * v) > 10.0)
        throw DomainError("truncation '" + h.name + "' is not O(1/x) at infinity");
    }
  }
}

void validate_jump_law(const JumpLaw& law) {
  std::visit(
      [](const auto& j) {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, PointMassJump>) {
          if (!std::isfinite(j.x)) throw DomainError("point-mass jump must be finite");
          if (j.x == 0.0) throw DomainError("jump law has an atom at 0");
        } else if constexpr (std::is_same_v<T, TwoPointJump>) {
          if (!(j.p1 > 0.0 && j.p2 > 0.0) || std::abs(j.p1 + j.p2 - 1.0) > 1e-12)
            throw DomainError("two-point jump probabilities must be positive and sum to 1");
          if (j.x1 == 0.0 || j.x2 == 0.0) throw DomainError("jump law has an atom at 0");
          if (j.x1 == j.x2) throw DomainError("two-point jump locations must differ");
          if (!std::isfinite(j.x1) || !std::isfinite(j.x2))
            throw DomainError("two-point jump locations must be finite");
        } else {
          if (!(j.a < j.b) || !std::isfinite(j.a) || !std::isfinite(j.b))
            throw DomainError("uniform jump law needs finite a < b");
        }
      },
      law);
}

namespace {

// (e^w - 1) / w for purely imaginary w = i t.
Complex exprel_i(double t) {
  if (std::abs(t) < 1e-4) {
    const Complex w(0.0, t);
    return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0;
  }
  return (std::exp(Complex(0.0, t)) - 1.0) / Complex(0.0, t);
}

}  // namespace

Complex jump_cf(const JumpLaw& law, double z) {
  return std::visit(
      [z](const auto& j) -> Complex {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, PointMassJump>) {
          return std::polar(1.0, z * j.x);
        } else if constexpr (std::is_same_v<T, TwoPointJump>) {
          return j.p1 * std::polar(1.0, z * j.x1) + j.p2 * std::polar(1.0, z * j.x2);
        } else {
          return std::polar(1.0, z * j.a) * exprel_i(z * (j.b - j.a));
        }
      },
      law);
}

Complex jump_x2_transform(const JumpLaw& law, double z) {
  return std::visit(
      [z](const auto& j) -> Complex {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, PointMassJump>) {
          return j.x * j.x * std::polar(1.0, z * j.x);
        } else if constexpr (std::is_same_v<T, TwoPointJump>) {
          return j.p1 * j.x1 * j.x1 * std::polar(1.0, z * j.x1) +
                 j.p2 * j.x2 * j.x2 * std::polar(1.0, z * j.x2);
        } else {
          static const auto rule = quad::gauss_legendre<double>(16);
          const int panels = 1 + static_cast<int>(std::abs(z) * (j.b - j.a));
          const auto f = [z](double x) { return x * x * std::polar(1.0, z * x); };
          return quad::integrate_composite(rule, f, j.a, j.b, panels) / (j.b - j.a);
        }
      },
      law);
}

double jump_compensator(const JumpLaw& law, const TruncationFn& h) {
  return std::visit(
      [&h](const auto& j) -> double {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, PointMassJump>) {
          return j.x * h(j.x);
        } else if constexpr (std::is_same_v<T, TwoPointJump>) {
          return j.p1 * j.x1 * h(j.x1) + j.p2 * j.x2 * h(j.x2);
        } else {
          std::vector<double> cuts{j.a};
          for (double bp : h.breakpoints)
            if (bp > j.a && bp < j.b) cuts.push_back(bp);
          cuts.push_back(j.b);
          double sum = 0.0;
          for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            sum += quad::integrate_adaptive([&h](double x) { return x * h(x); }, cuts[i],
                                            cuts[i + 1], {1e-13, 0.0, 200})
                       .value;
          return sum / (j.b - j.a);
        }
      },
      law);
}

std::string describe(const JumpLaw& law) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& j) {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, PointMassJump>)
          os << "point(" << j.x << ")";
        else if constexpr (std::is_same_v<T, TwoPointJump>)
          os << "two_point(" << j.x1 << ":" << j.p1 << "," << j.x2 << ":" << j.p2 << ")";
        else
          os << "uniform(" << j.a << "," << j.b << ")";
      },
      law);
  return os.str();
}

DensityMeasure gamma_levy_density(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw DomainError("gamma Levy density needs c > 0, alpha > 0");
  return {[c, alpha](double x) { return x > 0.0 ? c / x * std::exp(-alpha * x) : 0.0; },
          {{0.0, kInf}},
          "gamma",
          {},
          true};
}

DensityMeasure cauchy_levy_density(double c) {
  if (!(c > 0.0)) throw DomainError("cauchy Levy density needs c > 0");
  return {[c](double x) { return c / (kPi * x * x); }, {{-kInf, 0.0}, {0.0, kInf}}, "cauchy", {0.0},
          false};
}

DensityMeasure hyperbolic_cosine_levy_density() {
  return {[](double x) {
            const double ax = std::abs(x);
            // 1 / (x (e^x - e^-x)) = e^{-|x|} / (|x| (1 - e^{-2|x|}))
            return std::exp(-ax) / (ax * -std::expm1(-2.0 * ax));
          },
          {{-kInf, 0.0}, {0.0, kInf}},
          "hyperbolic_cosine",
          {},
          true};
}

void validate_measure(const LevyMeasureSpec& m) {
  std::visit(
      [](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, AtomMeasure>) {
          for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
            const Atom& a = spec.atoms[i];
            if (!(a.mass > 0.0) || !std::isfinite(a.mass))
              throw DomainError("atom masses must be strictly positive");
            if (a.location == 0.0 || !std::isfinite(a.location))
              throw DomainError("atom locations must be finite and nonzero");
            for (std::size_t k = 0; k < i; ++k)
              if (spec.atoms[k].location == a.location)
                throw DomainError("atom locations must be distinct");
          }
        } else if constexpr (std::is_same_v<T, CompoundMeasure>) {
          if (!(spec.intensity > 0.0)) throw DomainError("compound intensity must be positive");
          validate_jump_law(spec.jump);
        } else {
          if (!spec.u) throw DomainError("density measure has no density");
          if (spec.support.empty()) throw DomainError("density measure has empty support");
          for (const auto& [a, b] : spec.support) {
            if (!(a < b)) throw DomainError("support intervals need a < b");
            // spot-check nonnegativity on the support
            const double lo = std::isinf(a) ? std::min(b, 0.0) - 50.0 : a;
            const double hi = std::isinf(b) ? std::max(a, 0.0) + 50.0 : b;
            for (int k = 1; k < 64; ++k) {
              const double x = lo + (hi - lo) * k / 64.0;
              if (x == 0.0) continue;
              const double v = spec.u(x);
              if (!(v >= 0.0)) throw DomainError("Levy density is negative or NaN on its support");
            }
          }
        }
      },
      m);
}

double integrate_min1_x2(const LevyMeasureSpec& m) {
  return std::visit(
      [](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        auto w = [](double x) { return std::min(1.0, x * x); };
        if constexpr (std::is_same_v<T, AtomMeasure>) {
          double s = 0.0;
          for (const Atom& a : spec.atoms) s += a.mass * w(a.location);
          return s;
        } else if constexpr (std::is_same_v<T, CompoundMeasure>) {
          return std::visit(
              [&](const auto& j) -> double {
                using J = std::decay_t<decltype(j)>;
                if constexpr (std::is_same_v<J, PointMassJump>)
                  return spec.intensity * w(j.x);
                else if constexpr (std::is_same_v<J, TwoPointJump>)
                  return spec.intensity * (j.p1 * w(j.x1) + j.p2 * w(j.x2));
                else
                  return spec.intensity *
                         quad::integrate_adaptive(w, j.a, j.b, {1e-12, 0.0, 200}).value /
                         (j.b - j.a);
              },
              spec.jump);
        } else {
          double total = 0.0;
          for (const auto& [a, b] : spec.support) {
            std::vector<double> cuts{a};
            for (double bp : {-1.0, 0.0, 1.0})
              if (bp > a && bp < b) cuts.push_back(bp);
            cuts.push_back(b);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
              auto r = quad::integrate_adaptive(
                  [&](double x) { return x == 0.0 ? 0.0 : w(x) * spec.u(x); }, cuts[i],
                  cuts[i + 1], {1e-9, 1e-9, 2000});
              if (!r.converged || !std::isfinite(r.value))
                throw DomainError("integral of min(1, x^2) U(dx) does not converge for '" +
                                  spec.name + "'");
              total += r.value;
            }
          }
          return total;
        }
      },
      m);
}

void validate_triplet(const LevyTriplet& t) {
  if (!(t.sigma2 >= 0.0) || !std::isfinite(t.sigma2))
    throw DomainError("triplet sigma2 must be nonnegative");
  if (!std::isfinite(t.gamma)) throw DomainError("triplet gamma must be finite");
  validate_measure(t.measure);
  integrate_min1_x2(t.measure);
}

}  // namespace levy
