#pragma once

#include <string>

#include "tamegeo/exponents_types.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/implicit.hpp"
#include "tamegeo/multifunction.hpp"
#include "tamegeo/piecewise.hpp"
#include "tamegeo/tangent_cone.hpp"

namespace tamegeo {

// Parsers for the on-disk JSON formats. Malformed documents raise
// ValidationError naming the problem and, for syntax errors, the byte
// offset. Expression trees are nested arrays, e.g.
//   ["*", ["abs", ["var", 0]], ["var", 1]]
// with numbers as constants and operators
//   + - * / abs min max sqrt pow (pow takes a numeric exponent; "^" and
//   "neg" are accepted aliases).
ExprFn expr_from_json(const std::string& text, int arity);

PointCloud point_cloud_from_json(const std::string& text);
ImplicitSetSpec implicit_spec_from_json(const std::string& text);

// Accepts either kind of set document: a point_cloud is loaded as is, an
// implicit_set must carry "grid_step" (and may carry "seed") and is sampled
// on load.
PointCloud set_from_json(const std::string& text);

// {"kind": "multifunction_graph", ...}. The "graph" member is either a
// point_cloud document or an implicit_set document; in the latter case the
// graph object must carry "grid_step" (and may carry "seed") so the spec can
// be sampled on load.
MultifunctionGraph graph_from_json(const std::string& text);

// {"kind": "piecewise_function", ...} or {"kind": "expr_function",
// "arity": m, "lipschitz_bound": L, "tree": [...]} for the smooth case.
PiecewiseFn piecewise_from_json(const std::string& text);

// Kind of a JSON document ("point_cloud", ...); throws on syntax errors.
std::string json_kind(const std::string& text);

// Fixed-format serializers: doubles at 17 significant digits, no locale
// dependence, byte-stable across runs.
std::string format_double(double v);
std::string point_to_json(const Point& p);
std::string point_cloud_to_json(const PointCloud& c);
std::string exponent_fit_to_json(const ExponentFit& fit);
std::string cone_to_json(const ConePresentation& cone);

}  // namespace tamegeo
