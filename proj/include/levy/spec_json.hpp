#pragma once

#include <json.hpp>

#include "levy/charfn.hpp"

namespace levy {

// Distribution documents:
//   {"family": "normal", "params": {"m": 0, "sigma": 1}}
//   {"family": "cauchy", "params": {"c": 1, "gamma": 0}}
//   {"family": "compound_poisson", "params": {"c": 2, "jump": {"type": "point", "x": 1}}}
//       jump types: point {x}, two_point {x1, p1, x2, p2}, uniform {a, b}
//   {"family": "negative_binomial", "params": {"c": 1, "p": 0.5}}
//   {"family": "hyperbolic_cosine"}
//   {"family": "gamma", "params": {"c": 1, "alpha": 1}}
//   {"family": "triplet", "params": {"gamma": 0, "sigma2": 0, "measure": {...},
//                                    "truncation": "indicator"}}
//       measure kinds: {"kind": "atoms", "atoms": [[location, mass], ...]}
//                      {"kind": "compound", "c": 2, "jump": {...}}
//                      {"kind": "density", "name": "gamma" | "cauchy" |
//                       "hyperbolic_cosine", "params": {...}}
// Parameters may also sit at the top level: {"family": "cauchy", "c": 1}.
// Throws DomainError on unknown families, missing or out-of-range fields.
CharFn charfn_from_json(const nlohmann::json& doc);

JumpLaw jump_from_json(const nlohmann::json& doc);
LevyMeasureSpec measure_from_json(const nlohmann::json& doc);
LevyTriplet triplet_from_json(const nlohmann::json& params);

}  // namespace levy
