#include "levy/charfn.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "levy/error.hpp"

namespace levy {

namespace {

std::string fmt(const char* name, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << name << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    os << (first ? "" : ",") << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

}  // namespace

Complex expm1_i_minus_linear(double t) {
  const double s = std::sin(0.5 * t);
  double im;
  if (std::abs(t) < 0.1) {
    // sin t - t by its alternating series
    const double t2 = t * t;
    im = -t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0 * (1.0 - t2 / 110.0))));
  } else {
    im = std::sin(t) - t;
  }
  return {-2.0 * s * s, im};
}

CharFn normal(double m, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(m)) throw DomainError("normal: need sigma > 0 and finite m");
  const double s2 = sigma * sigma;
  CharFn f;
  f.evaluate = [m, s2](double z) { return std::exp(Complex(-0.5 * s2 * z * z, m * z)); };
  f.sigma2 = s2;
  f.psi2 = [s2](double) { return Complex(-s2, 0.0); };
  f.label = fmt("normal", {{"m", m}, {"sigma", sigma}});
  f.finite_second_moment = true;
  return f;
}

CharFn cauchy(double c, double gamma) {
  if (!(c > 0.0) || !std::isfinite(gamma)) throw DomainError("cauchy: need c > 0");
  CharFn f;
  f.evaluate = [c, gamma](double z) { return std::exp(Complex(-c * std::abs(z), gamma * z)); };
  f.label = fmt("cauchy", {{"c", c}, {"gamma", gamma}});
  f.kinks = {0.0};
  return f;
}

CharFn compound_poisson(double c, const JumpLaw& jump) {
  if (!(c > 0.0)) throw DomainError("compound_poisson: need c > 0");
  validate_jump_law(jump);
  CharFn f;
  f.evaluate = [c, jump](double z) { return std::exp(c * (jump_cf(jump, z) - 1.0)); };
  f.psi2 = [c, jump](double z) { return -c * jump_x2_transform(jump, z); };
  f.label = "compound_poisson(c=" + std::to_string(c) + "," + describe(jump) + ")";
  f.finite_second_moment = true;
  return f;
}

CharFn negative_binomial(double c, double p) {
  if (!(c > 0.0) || !(p > 0.0 && p < 1.0))
    throw DomainError("negative_binomial: need c > 0 and 0 < p < 1");
  const double q = 1.0 - p;
  CharFn f;
  // p^c (1 - q e^{iz})^{-c}; the base stays in the right half plane so the
  // principal log is continuous.
  f.evaluate = [c, p, q](double z) {
    return std::exp(c * (std::log(p) - std::log(1.0 - q * std::polar(1.0, z))));
  };
  f.psi2 = [c, q](double z) {
    const Complex e = q * std::polar(1.0, z);
    return -c * e / ((1.0 - e) * (1.0 - e));
  };
  f.label = fmt("negative_binomial", {{"c", c}, {"p", p}});
  f.finite_second_moment = true;
  return f;
}

CharFn hyperbolic_cosine() {
  CharFn f;
  f.evaluate = [](double z) { return Complex(1.0 / std::cosh(0.5 * kPi * z), 0.0); };
  f.psi2 = [](double z) {
    const double phi = 1.0 / std::cosh(0.5 * kPi * z);
    return Complex(-0.25 * kPi * kPi * phi * phi, 0.0);
  };
  f.label = "hyperbolic_cosine";
  f.finite_second_moment = true;
  return f;
}

CharFn gamma(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw DomainError("gamma: need c > 0 and alpha > 0");
  CharFn f;
  f.evaluate = [c, alpha](double z) { return std::exp(-c * std::log(Complex(1.0, -z / alpha))); };
  f.psi2 = [c, alpha](double z) {
    const Complex d(z, alpha);
    return c / (d * d);
  };
  f.label = fmt("gamma", {{"c", c}, {"alpha", alpha}});
  f.finite_second_moment = true;
  return f;
}

namespace {

constexpr double kTailCycles = 200.0;

struct DensityCumulant {
  const DensityMeasure& m;
  const TruncationFn& h;
  const QuadSpec& q;

  // Integral over [lo, hi] of (e^{izx} - 1 - izx h(x)) u(x), with the sign
  // of x flipped when `reflect` is set.
  quad::QuadResult<Complex> piece(double z, double lo, double hi, bool reflect, double tol) const {
    auto g = [&](double y) -> Complex {
      const double x = reflect ? -y : y;
      if (x == 0.0) return {};
      const double ux = m.u(x);
      if (ux == 0.0) return {};
      return (expm1_i_minus_linear(z * x) + Complex(0.0, z * x * (1.0 - h(x)))) * ux;
    };
    return quad::integrate_adaptive(g, lo, hi, {tol, 0.0, q.max_intervals});
  }

  // Integral over [start, inf) in the (possibly reflected) variable y.
  quad::QuadResult<Complex> tail(double z, double start, bool reflect, double tol) const {
    const double zs = reflect ? -z : z;  // e^{izx} = e^{i zs y}
    if (z == 0.0) return {Complex{}, 0.0, 0, true};
    auto uy = [&](double y) { return m.u(reflect ? -y : y); };
    auto hy = [&](double y) { return h(reflect ? -y : y); };
    const double far = std::max(start, kTailCycles / std::abs(z));
    quad::QuadResult<Complex> near{Complex{}, 0.0, 0, true};
    if (far > start) near = piece(z, start, far, reflect, 0.5 * tol);

    // Oscillatory part past `far` by two steps of integration by parts.
    const double du_step = 1e-4 * far;
    const double u0 = uy(far);
    const double u1 = (uy(far + du_step) - uy(far - du_step)) / (2.0 * du_step);
    const Complex iz(0.0, zs);
    const Complex e = std::polar(1.0, zs * far);
    const Complex osc = e * (-u0 / iz + u1 / (iz * iz));

    auto mass = quad::integrate_adaptive(uy, far, kInf, {0.25 * tol, 0.0, q.max_intervals});
    auto comp = quad::integrate_adaptive([&](double y) { return y * hy(y) * uy(y); }, far, kInf,
                                         {0.25 * tol / std::max(1.0, std::abs(z)), 0.0,
                                          q.max_intervals});
    // reflected variable: x h(x) = -y h(-y)
    const double comp_sign = reflect ? -1.0 : 1.0;
    const Complex value = near.value + osc - mass.value - Complex(0.0, z) * comp_sign * comp.value;
    const double err = near.error + mass.error + std::abs(z) * comp.error;
    return {value, err, near.intervals + mass.intervals + comp.intervals,
            near.converged && mass.converged && comp.converged};
  }

  quad::QuadResult<Complex> operator()(double z) const {
    // Cut points: 0, +-1, h breakpoints, and the tail radius.
    std::vector<std::pair<double, double>> finite_pieces;
    std::vector<std::pair<double, bool>> tails;  // (start, reflect)
    for (const auto& [a, b] : m.support) {
      double lo = a, hi = b;
      if (std::isinf(a)) {
        lo = std::min(-q.tail_start, b);
        tails.emplace_back(-lo, true);
      }
      if (std::isinf(b)) {
        hi = std::max(q.tail_start, a);
        tails.emplace_back(hi, false);
      }
      std::vector<double> cuts{lo};
      std::vector<double> extra{-1.0, 0.0, 1.0};
      extra.insert(extra.end(), h.breakpoints.begin(), h.breakpoints.end());
      std::sort(extra.begin(), extra.end());
      for (double c : extra)
        if (c > lo && c < hi && c != cuts.back()) cuts.push_back(c);
      cuts.push_back(hi);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i] < cuts[i + 1]) finite_pieces.emplace_back(cuts[i], cuts[i + 1]);
    }
    const double n = static_cast<double>(finite_pieces.size() + tails.size());
    const double tol = q.abs_tol / std::max(1.0, n);
    quad::QuadResult<Complex> total{Complex{}, 0.0, 0, true};
    auto add = [&total](const quad::QuadResult<Complex>& r) {
      total.value += r.value;
      total.error += r.error;
      total.intervals += r.intervals;
      total.converged = total.converged && r.converged;
    };
    for (const auto& [lo, hi] : finite_pieces) add(piece(z, lo, hi, false, tol));
    for (const auto& [start, reflect] : tails) add(tail(z, start, reflect, tol));
    return total;
  }
};

}  // namespace

Complex triplet_cumulant(const LevyTriplet& t, const TruncationFn& h, double z, const QuadSpec& q) {
  Complex psi(-0.5 * t.sigma2 * z * z, t.gamma * z);
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, AtomMeasure>) {
          for (const Atom& a : spec.atoms)
            psi += a.mass * (expm1_i_minus_linear(z * a.location) +
                             Complex(0.0, z * a.location * (1.0 - h(a.location))));
        } else if constexpr (std::is_same_v<T, CompoundMeasure>) {
          psi += spec.intensity *
                 (jump_cf(spec.jump, z) - 1.0 - Complex(0.0, z * jump_compensator(spec.jump, h)));
        } else {
          const auto r = DensityCumulant{spec, h, q}(z);
          if (!r.converged || !std::isfinite(r.value.real()) || !std::isfinite(r.value.imag())) {
            std::ostringstream os;
            os << "cumulant quadrature for '" << spec.name << "' did not converge at z=" << z
               << " (error estimate " << r.error << ")";
            throw ConvergenceError(os.str(), r.error);
          }
          psi += r.value;
        }
      },
      t.measure);
  return psi;
}

CharFn charfn_from_triplet(const LevyTriplet& t, const TruncationFn& h, const QuadSpec& q) {
  validate_triplet(t);
  validate_truncation(h);
  auto state = std::make_shared<const std::tuple<LevyTriplet, TruncationFn, QuadSpec>>(t, h, q);
  CharFn f;
  f.evaluate = [state](double z) {
    const auto& [tt, hh, qq] = *state;
    return std::exp(triplet_cumulant(tt, hh, z, qq));
  };
  f.sigma2 = t.sigma2;
  f.label = "triplet(" + h.name + ")";
  std::visit(
      [&f](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, DensityMeasure>) {
          f.kinks = spec.cumulant_kinks;
          f.finite_second_moment = spec.finite_second_moment;
        } else {
          f.finite_second_moment = true;
        }
      },
      t.measure);
  return f;
}

}  // namespace levy
