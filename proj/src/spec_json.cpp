#include "levy/spec_json.hpp"

#include "levy/error.hpp"

namespace levy {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw DomainError(std::string("missing numeric field '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return number(obj, key);
}

// parameters live under "params" or directly beside "family"
const json& params_of(const json& doc) {
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) throw DomainError("'params' must be an object");
    return doc.at("params");
  }
  return doc;
}

}  // namespace

JumpLaw jump_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
    throw DomainError("jump law needs a string 'type'");
  const std::string type = doc.at("type").get<std::string>();
  JumpLaw law;
  if (type == "point")
    law = PointMassJump{number(doc, "x")};
  else if (type == "two_point")
    law = TwoPointJump{number(doc, "x1"), number(doc, "p1"), number(doc, "x2"), number(doc, "p2")};
  else if (type == "uniform")
    law = UniformJump{number(doc, "a"), number(doc, "b")};
  else
    throw DomainError("unknown jump law type '" + type + "'");
  validate_jump_law(law);
  return law;
}

LevyMeasureSpec measure_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string())
    throw DomainError("measure needs a string 'kind'");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "atoms") {
    AtomMeasure m;
    if (!doc.contains("atoms") || !doc.at("atoms").is_array())
      throw DomainError("atoms measure needs an 'atoms' array");
    for (const json& a : doc.at("atoms")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw DomainError("each atom is [location, mass]");
      m.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    validate_measure(m);
    return m;
  }
  if (kind == "compound") {
    if (!doc.contains("jump")) throw DomainError("compound measure needs 'jump'");
    CompoundMeasure m{number(doc, "c"), jump_from_json(doc.at("jump"))};
    validate_measure(m);
    return m;
  }
  if (kind == "density") {
    if (!doc.contains("name") || !doc.at("name").is_string())
      throw DomainError("density measure needs a string 'name'");
    const std::string name = doc.at("name").get<std::string>();
    const json& p = params_of(doc);
    if (name == "gamma") return gamma_levy_density(number(p, "c"), number(p, "alpha"));
    if (name == "cauchy") return cauchy_levy_density(number(p, "c"));
    if (name == "hyperbolic_cosine") return hyperbolic_cosine_levy_density();
    throw DomainError("unknown named density '" + name + "'");
  }
  throw DomainError("unknown measure kind '" + kind + "'");
}

LevyTriplet triplet_from_json(const json& params) {
  LevyTriplet t;
  t.gamma = number_or(params, "gamma", 0.0);
  t.sigma2 = number_or(params, "sigma2", 0.0);
  if (!params.contains("measure")) throw DomainError("triplet needs a 'measure'");
  t.measure = measure_from_json(params.at("measure"));
  validate_triplet(t);
  return t;
}

CharFn charfn_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("family") || !doc.at("family").is_string())
    throw DomainError("distribution needs a string 'family'");
  const std::string family = doc.at("family").get<std::string>();
  const json& p = params_of(doc);
  if (family == "normal") return normal(number_or(p, "m", 0.0), number_or(p, "sigma", 1.0));
  if (family == "cauchy") return cauchy(number(p, "c"), number_or(p, "gamma", 0.0));
  if (family == "compound_poisson") {
    if (!p.contains("jump")) throw DomainError("compound_poisson needs 'jump'");
    return compound_poisson(number(p, "c"), jump_from_json(p.at("jump")));
  }
  if (family == "negative_binomial") return negative_binomial(number(p, "c"), number(p, "p"));
  if (family == "hyperbolic_cosine") return hyperbolic_cosine();
  if (family == "gamma") return gamma(number(p, "c"), number(p, "alpha"));
  if (family == "triplet") {
    const json& src = p;
    const LevyTriplet t = triplet_from_json(src);
    TruncationFn h = indicator_truncation();
    if (src.contains("truncation")) {
      if (!src.at("truncation").is_string()) throw DomainError("'truncation' must be a string");
      h = truncation_by_name(src.at("truncation").get<std::string>());
    }
    return charfn_from_triplet(t, h);
  }
  throw DomainError("unknown family '" + family + "'");
}

}  // namespace levy
