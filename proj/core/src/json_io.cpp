#include "tamegeo/json_io.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "json.hpp"
#include "tamegeo/errors.hpp"

namespace tamegeo {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON at byte " + std::to_string(e.byte) +
                          ": " + e.what());
  }
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string("missing JSON member \"") + key + "\"");
  return j.at(key);
}

double num(const json& j, const char* what) {
  if (!j.is_number())
    throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw ValidationError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string kind_of(const json& j) {
  const json& k = member(j, "kind");
  if (!k.is_string()) throw ValidationError("\"kind\" must be a string");
  return k.get<std::string>();
}

ExprFn expr_from(const json& j, int arity) {
  if (j.is_number()) return ExprFn::constant(arity, j.get<double>());
  if (!j.is_array() || j.empty() || !j[0].is_string())
    throw ValidationError(
        "expression node must be a number or [\"op\", ...] array");
  const std::string op = j[0].get<std::string>();
  const std::size_t args = j.size() - 1;
  auto arg = [&](std::size_t i) { return expr_from(j[i + 1], arity); };

  if (op == "var") {
    if (args != 1) throw ValidationError("\"var\" takes one index");
    return ExprFn::var(arity, integer(j[1], "var index"));
  }
  if (op == "+") {
    if (args != 2) throw ValidationError("\"+\" takes two operands");
    return arg(0) + arg(1);
  }
  if (op == "-") {
    if (args == 1) return -arg(0);
    if (args != 2) throw ValidationError("\"-\" takes one or two operands");
    return arg(0) - arg(1);
  }
  if (op == "neg") {
    if (args != 1) throw ValidationError("\"neg\" takes one operand");
    return -arg(0);
  }
  if (op == "*") {
    if (args != 2) throw ValidationError("\"*\" takes two operands");
    return arg(0) * arg(1);
  }
  if (op == "/") {
    if (args != 2) throw ValidationError("\"/\" takes two operands");
    return arg(0) / arg(1);
  }
  if (op == "abs") {
    if (args != 1) throw ValidationError("\"abs\" takes one operand");
    return abs(arg(0));
  }
  if (op == "min") {
    if (args != 2) throw ValidationError("\"min\" takes two operands");
    return min(arg(0), arg(1));
  }
  if (op == "max") {
    if (args != 2) throw ValidationError("\"max\" takes two operands");
    return max(arg(0), arg(1));
  }
  if (op == "sqrt") {
    if (args != 1) throw ValidationError("\"sqrt\" takes one operand");
    return sqrt(arg(0));
  }
  if (op == "pow" || op == "^") {
    if (args != 2) throw ValidationError("\"pow\" takes a base and an exponent");
    return pow(arg(0), num(j[2], "pow exponent"));
  }
  throw ValidationError("unknown operator \"" + op + "\"");
}

Point point_from(const json& j, const char* what) {
  if (!j.is_array())
    throw ValidationError(std::string(what) + " must be an array of numbers");
  Point p;
  p.reserve(j.size());
  for (const auto& c : j) p.push_back(num(c, what));
  return p;
}

PointCloud cloud_from(const json& j) {
  if (kind_of(j) != "point_cloud")
    throw ValidationError("expected a point_cloud document");
  PointCloud c;
  c.dim = integer(member(j, "dim"), "\"dim\"");
  c.resolution = num(member(j, "resolution"), "\"resolution\"");
  c.window_radius = num(member(j, "window_radius"), "\"window_radius\"");
  const json& pts = member(j, "points");
  if (!pts.is_array()) throw ValidationError("\"points\" must be an array");
  c.points.reserve(pts.size());
  for (const auto& p : pts) c.points.push_back(point_from(p, "point"));
  validate_cloud(c);
  return c;
}

ImplicitSetSpec spec_from(const json& j) {
  if (kind_of(j) != "implicit_set")
    throw ValidationError("expected an implicit_set document");
  ImplicitSetSpec s;
  s.dim = integer(member(j, "dim"), "\"dim\"");
  if (s.dim <= 0) throw ValidationError("\"dim\" must be positive");
  for (const auto& e : member(j, "equalities"))
    s.equalities.push_back(expr_from(e, s.dim));
  for (const auto& g : member(j, "inequalities"))
    s.inequalities.push_back(expr_from(g, s.dim));
  const json& box = member(j, "box");
  if (!box.is_array()) throw ValidationError("\"box\" must be an array");
  for (const auto& axis : box) {
    if (!axis.is_array() || axis.size() != 2)
      throw ValidationError("box axes must be [lo, hi] pairs");
    s.box.push_back({num(axis[0], "box bound"), num(axis[1], "box bound")});
  }
  if (j.contains("equality_tolerance"))
    s.equality_tolerance = num(j.at("equality_tolerance"), "\"equality_tolerance\"");
  validate_spec(s);
  return s;
}

PiecewiseFn piecewise_from(const json& j) {
  const std::string kind = kind_of(j);
  const int arity = integer(member(j, "arity"), "\"arity\"");
  if (arity <= 0) throw ValidationError("\"arity\" must be positive");
  const double lip = num(member(j, "lipschitz_bound"), "\"lipschitz_bound\"");

  if (kind == "expr_function")
    return PiecewiseFn::from_expr(expr_from(member(j, "tree"), arity), lip);
  if (kind != "piecewise_function")
    throw ValidationError("expected a piecewise_function or expr_function document");

  const json& pieces = member(j, "pieces");
  if (!pieces.is_array() || pieces.empty())
    throw ValidationError("\"pieces\" must be a nonempty array");
  std::vector<Piece> out;
  for (const auto& pj : pieces) {
    Piece p;
    if (pj.contains("region")) {
      for (const auto& g : pj.at("region"))
        p.region.push_back(expr_from(g, arity));
    }
    p.value = expr_from(member(pj, "value"), arity);
    if (pj.contains("gradient")) {
      for (const auto& g : pj.at("gradient"))
        p.gradient.push_back(expr_from(g, arity));
    }
    out.push_back(std::move(p));
  }
  return PiecewiseFn(arity, lip, std::move(out));
}

void append_point(std::string& s, const Point& p) {
  s += '[';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += format_double(p[i]);
  }
  s += ']';
}

}  // namespace

ExprFn expr_from_json(const std::string& text, int arity) {
  if (arity <= 0) throw ValidationError("expression arity must be positive");
  return expr_from(parse_text(text), arity);
}

PointCloud point_cloud_from_json(const std::string& text) {
  return cloud_from(parse_text(text));
}

ImplicitSetSpec implicit_spec_from_json(const std::string& text) {
  return spec_from(parse_text(text));
}

namespace {

PointCloud set_from(const json& g) {
  const std::string gkind = kind_of(g);
  if (gkind == "point_cloud") return cloud_from(g);
  if (gkind == "implicit_set") {
    const double step = num(member(g, "grid_step"), "\"grid_step\"");
    std::uint64_t seed = 0;
    if (g.contains("seed")) {
      const json& s = g.at("seed");
      if (!s.is_number_integer() || s.get<long long>() < 0)
        throw ValidationError("\"seed\" must be a non-negative integer");
      seed = s.get<std::uint64_t>();
    }
    return sample(spec_from(g), step, seed);
  }
  throw ValidationError("expected a point_cloud or implicit_set document");
}

}  // namespace

PointCloud set_from_json(const std::string& text) {
  return set_from(parse_text(text));
}

MultifunctionGraph graph_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (kind_of(j) != "multifunction_graph")
    throw ValidationError("expected a multifunction_graph document");
  MultifunctionGraph f;
  f.m = integer(member(j, "m"), "\"m\"");
  f.n = integer(member(j, "n"), "\"n\"");
  f.slab = num(member(j, "slab"), "\"slab\"");
  f.graph = set_from(member(j, "graph"));
  validate_graph(f);
  return f;
}

PiecewiseFn piecewise_from_json(const std::string& text) {
  return piecewise_from(parse_text(text));
}

std::string json_kind(const std::string& text) {
  return kind_of(parse_text(text));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string point_to_json(const Point& p) {
  std::string s;
  append_point(s, p);
  return s;
}

std::string point_cloud_to_json(const PointCloud& c) {
  std::string s = "{\"kind\":\"point_cloud\",\"dim\":" + std::to_string(c.dim);
  s += ",\"resolution\":" + format_double(c.resolution);
  s += ",\"window_radius\":" + format_double(c.window_radius);
  s += ",\"points\":[";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (i) s += ',';
    append_point(s, c.points[i]);
  }
  s += "]}";
  return s;
}

std::string exponent_fit_to_json(const ExponentFit& fit) {
  std::string s = "{\"exponent\":" + format_double(fit.exponent);
  s += ",\"constant\":" + format_double(fit.constant);
  s += ",\"window\":[" + format_double(fit.window.first) + ',' +
       format_double(fit.window.second) + ']';
  s += ",\"bins\":" + std::to_string(fit.bins);
  s += ",\"max_residual\":" + format_double(fit.max_residual);
  s += ",\"envelope\":[";
  for (std::size_t i = 0; i < fit.envelope.size(); ++i) {
    if (i) s += ',';
    s += '[' + format_double(fit.envelope[i].first) + ',' +
         format_double(fit.envelope[i].second) + ']';
  }
  s += "]}";
  return s;
}

std::string cone_to_json(const ConePresentation& cone) {
  std::string s = "{\"dim\":" + std::to_string(cone.dim);
  s += ",\"cluster_tol\":" + format_double(cone.cluster_tol);
  s += ",\"base_point_in_closure\":";
  s += cone.base_point_in_closure ? "true" : "false";
  s += ",\"directions\":[";
  for (std::size_t i = 0; i < cone.directions.size(); ++i) {
    if (i) s += ',';
    append_point(s, cone.directions[i]);
  }
  s += "]}";
  return s;
}

}  // namespace tamegeo
