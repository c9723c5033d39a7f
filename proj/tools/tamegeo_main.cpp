// tamegeo command line tool. JSON documents in, one JSON document on stdout
// on success, diagnostics on stderr. Exit codes: 0 success, 2 invalid
// input, 3 numeric failure. Output is byte-identical for identical argv and
// input files; TAMEGEO_THREADS caps worker threads.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tamegeo/errors.hpp"
#include "tamegeo/exponents.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/implicit.hpp"
#include "tamegeo/json_io.hpp"
#include "tamegeo/metrics.hpp"
#include "tamegeo/multifunction.hpp"
#include "tamegeo/piecewise.hpp"
#include "tamegeo/subgradient.hpp"
#include "tamegeo/tangent_cone.hpp"

namespace {

using namespace tamegeo;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Re-throws load-time validation errors with the file path prepended.
template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

PointCloud load_set(const std::string& path) {
  return with_path(path, [&] { return set_from_json(read_file(path)); });
}

MultifunctionGraph load_graph(const std::string& path) {
  return with_path(path, [&] { return graph_from_json(read_file(path)); });
}

PiecewiseFn load_fn(const std::string& path) {
  return with_path(path, [&] { return piecewise_from_json(read_file(path)); });
}

ImplicitSetSpec load_spec(const std::string& path) {
  return with_path(path,
                   [&] { return implicit_spec_from_json(read_file(path)); });
}

Point parse_point(const std::string& text, const char* flag) {
  Point p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      p.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace((unsigned char)tok[used]))
        ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": invalid coordinate \"" +
                            tok + "\" in \"" + text + "\"");
    }
    pos = comma + 1;
  }
  return p;
}

Point parse_point_dim(const std::string& text, int dim, const char* flag) {
  Point p = parse_point(text, flag);
  if ((int)p.size() != dim)
    throw ValidationError(std::string(flag) + ": expected " +
                          std::to_string(dim) + " coordinates, got " +
                          std::to_string(p.size()));
  return p;
}

std::string bool_json(bool b) { return b ? "true" : "false"; }

std::string graph_to_json(const MultifunctionGraph& f) {
  std::string s = "{\"kind\":\"multifunction_graph\",\"m\":" +
                  std::to_string(f.m) + ",\"n\":" + std::to_string(f.n);
  s += ",\"slab\":" + format_double(f.slab);
  s += ",\"graph\":" + point_cloud_to_json(f.graph) + "}";
  return s;
}

std::string klim_to_json(const KuratowskiLimit& lim) {
  std::string s = "{\"points\":" + point_cloud_to_json(lim.points);
  s += ",\"truncated\":" + bool_json(lim.truncated);
  s += ",\"finest_ball\":" + std::to_string(lim.finest_ball);
  s += ",\"ball_counts\":[";
  for (std::size_t i = 0; i < lim.ball_counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(lim.ball_counts[i]);
  }
  s += "]}";
  return s;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << body;
  if (!out) throw ValidationError("write failed: " + path);
}

void write_envelope_csv(const std::string& path, const EnvelopeDump& dump) {
  std::string body = "log_u,log_v,bin,is_min\n";
  for (const auto& r : dump.rows) {
    body += format_double(r.log_u) + ',' + format_double(r.log_v) + ',' +
            std::to_string(r.bin) + ',' + (r.is_min ? "1" : "0") + '\n';
  }
  write_text_file(path, body);
}

void write_cone_csv(const std::string& path, const TangentConeDiagnostics& d) {
  std::string body = "step,t,annulus_count,drift\n";
  for (std::size_t k = 0; k < d.t_values.size(); ++k) {
    body += std::to_string(k) + ',' + format_double(d.t_values[k]) + ',' +
            std::to_string(d.annulus_counts[k]) + ',' +
            format_double(d.drift[k]) + '\n';
  }
  write_text_file(path, body);
}

void emit(const std::string& json) { std::cout << json << "\n"; }

// ---- shared option blocks -------------------------------------------------

struct SubgradientFlags {
  SubgradientConfig cfg;
  std::string radii_text;

  void attach(CLI::App* cmd, double default_hull_tol) {
    cfg.hull_tol = default_hull_tol;
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    cmd->add_option("--samples", cfg.samples_per_radius,
                    "gradient samples per ball radius");
    cmd->add_option("--seam-margin", cfg.seam_margin,
                    "rejected fraction of the radius around seams");
    cmd->add_option("--hull-tol", cfg.hull_tol,
                    "hull membership / criticality tolerance");
    cmd->add_option("--radii", radii_text,
                    "comma separated decreasing ball radii");
  }

  SubgradientConfig resolve(int arity) const {
    SubgradientConfig c = cfg;
    if (!radii_text.empty()) {
      c.radius_schedule = parse_point(radii_text, "--radii");
    }
    validate_config(c, arity);
    return c;
  }
};

PointCloud translate_to_origin(const PointCloud& e, const Point& a) {
  PointCloud out = e;
  bool zero = true;
  for (double v : a) zero = zero && v == 0.0;
  if (zero) return out;
  for (auto& p : out.points)
    for (int i = 0; i < out.dim; ++i) p[i] -= a[i];
  return out;
}

std::vector<double> geometric_schedule(double r0, double ratio, int steps,
                                       const char* what) {
  if (!(r0 > 0) || !(ratio > 0) || !(ratio < 1))
    throw ValidationError(std::string(what) +
                          ": need r0 > 0 and ratio in (0, 1)");
  if (steps < 2)
    throw ValidationError(std::string(what) + ": need at least 2 steps");
  std::vector<double> r(steps);
  for (int k = 0; k < steps; ++k) r[k] = r0 * std::pow(ratio, k);
  return r;
}

// ---- subcommands ----------------------------------------------------------

void setup_sample(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "sample", "sample an implicit_set document to a point cloud");
  auto path = std::make_shared<std::string>();
  auto step = std::make_shared<double>(0.0);
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("spec", *path, "implicit_set JSON file")->required();
  cmd->add_option("--grid-step", *step, "sampling grid step")->required();
  cmd->add_option("--seed", *seed, "jitter seed (default 0)");
  cmd->callback([=] {
    const ImplicitSetSpec spec = load_spec(*path);
    emit(point_cloud_to_json(sample(spec, *step, *seed)));
  });
}

void setup_metric(CLI::App& app, const char* name, bool kuratowski) {
  auto cmd = app.add_subcommand(
      name, kuratowski
                ? "Kuratowski (compactified Hausdorff) distance of two sets"
                : "Hausdorff distance of two sets");
  auto a = std::make_shared<std::string>();
  auto b = std::make_shared<std::string>();
  cmd->add_option("A", *a, "first set (point_cloud or implicit_set JSON)")
      ->required();
  cmd->add_option("B", *b, "second set")->required();
  cmd->callback([=] {
    const PointCloud ca = load_set(*a);
    const PointCloud cb = load_set(*b);
    const double v = kuratowski ? kuratowski_dist(ca, cb) : hausdorff(ca, cb);
    emit("{\"value\":" + format_double(v) + ",\"resolution_bound\":" +
         format_double(ca.resolution + cb.resolution) + "}");
  });
}

void setup_section(CLI::App& app) {
  auto cmd =
      app.add_subcommand("section", "section F(x) of a multifunction graph");
  auto path = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  cmd->add_option("graph", *path, "multifunction_graph JSON file")->required();
  cmd->add_option("--at", *at, "argument x, comma separated")->required();
  cmd->callback([=] {
    const MultifunctionGraph f = load_graph(*path);
    const Point x = parse_point_dim(*at, f.m, "--at");
    const PointCloud sec = section(f, x);
    if (section_truncated(f, sec))
      std::cerr << "note: section reaches the sampling window edge and may "
                   "be truncated\n";
    emit(point_cloud_to_json(sec));
  });
}

void setup_domain(CLI::App& app) {
  auto cmd =
      app.add_subcommand("domain", "sampled domain of a multifunction graph");
  auto path = std::make_shared<std::string>();
  cmd->add_option("graph", *path, "multifunction_graph JSON file")->required();
  cmd->callback([=] { emit(point_cloud_to_json(domain(load_graph(*path)))); });
}

void setup_preimage(CLI::App& app) {
  auto cmd = app.add_subcommand("preimage",
                                "pre-images of F(a) (or of a single output "
                                "point) under a multifunction");
  auto path = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>();
  cmd->add_option("graph", *path, "multifunction_graph JSON file")->required();
  cmd->add_option("--mode", *mode, "strong | lower | upper | weak | point")
      ->required()
      ->check(CLI::IsMember({"strong", "lower", "upper", "weak", "point"}));
  cmd->add_option("--at", *at,
                  "base argument a (modes strong/lower/upper/weak) or output "
                  "point y (mode point)")
      ->required();
  cmd->callback([=] {
    const MultifunctionGraph f = load_graph(*path);
    PointCloud out;
    if (*mode == "point") {
      out = pre_image_point(f, parse_point_dim(*at, f.n, "--at"));
    } else {
      const Point a = parse_point_dim(*at, f.m, "--at");
      if (*mode == "strong") out = pre_image_strong(f, a);
      else if (*mode == "lower") out = pre_image_lower(f, a);
      else if (*mode == "upper") out = pre_image_upper(f, a);
      else out = pre_image_weak(f, a);
    }
    emit(point_cloud_to_json(out));
  });
}

void setup_klim(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "klim", "sampled Kuratowski limsup/liminf of F(x) as x -> a");
  auto path = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>();
  auto r0 = std::make_shared<double>(0.5);
  cmd->add_option("graph", *path, "multifunction_graph JSON file")->required();
  cmd->add_option("--at", *at, "limit point a")->required();
  cmd->add_option("--mode", *mode, "sup | inf")
      ->required()
      ->check(CLI::IsMember({"sup", "inf"}));
  cmd->add_option("--r0", *r0,
                  "largest ball radius; the schedule is r0 * 2^-k, k = 0..10");
  cmd->callback([=] {
    const MultifunctionGraph f = load_graph(*path);
    const Point a = parse_point_dim(*at, f.m, "--at");
    if (!(*r0 > 0)) throw ValidationError("--r0 must be positive");
    std::vector<double> radii(11);
    for (int k = 0; k <= 10; ++k) radii[k] = *r0 * std::pow(2.0, -k);
    const KuratowskiLimit lim = (*mode == "sup")
                                    ? kuratowski_limsup(f, a, radii)
                                    : kuratowski_liminf(f, a, radii);
    emit(klim_to_json(lim));
  });
}

void setup_delta(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "delta", "graph gauge delta(F, x, y) = d(y, F(x)) of a multifunction");
  auto path = std::make_shared<std::string>();
  auto xs = std::make_shared<std::string>();
  auto ys = std::make_shared<std::string>();
  cmd->add_option("graph", *path, "multifunction_graph JSON file")->required();
  cmd->add_option("--x", *xs, "argument x")->required();
  cmd->add_option("--y", *ys, "output point y")->required();
  cmd->callback([=] {
    const MultifunctionGraph f = load_graph(*path);
    const double v = delta(f, parse_point_dim(*xs, f.m, "--x"),
                           parse_point_dim(*ys, f.n, "--y"));
    emit("{\"value\":" + format_double(v) + "}");
  });
}

void setup_cone(CLI::App& app) {
  auto cmd =
      app.add_subcommand("cone", "sampled tangent cone of a set at a point");
  auto path = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  auto t0 = std::make_shared<double>(0.5);
  auto gamma = std::make_shared<double>(0.7);
  auto steps = std::make_shared<int>(16);
  auto ctol = std::make_shared<double>(0.0);
  auto csv = std::make_shared<std::string>();
  cmd->add_option("set", *path, "point_cloud or implicit_set JSON file")
      ->required();
  cmd->add_option("--at", *at, "base point")->required();
  cmd->add_option("--t0", *t0, "largest dilation scale");
  cmd->add_option("--gamma", *gamma, "scale ratio in (0, 1)");
  cmd->add_option("--steps", *steps, "number of dilation steps");
  cmd->add_option("--cluster-tol", *ctol,
                  "direction cluster tolerance (0 = automatic)");
  cmd->add_option("--csv", *csv, "write per-step diagnostics CSV here");
  cmd->callback([=] {
    const PointCloud e = load_set(*path);
    const Point a = parse_point_dim(*at, e.dim, "--at");
    const TangentConeResult r = tangent_cone(e, a, *t0, *gamma, *steps, *ctol);
    if (!csv->empty()) write_cone_csv(*csv, r.diag);
    std::string s = "{\"cone\":" + cone_to_json(r.cone);
    s += ",\"t_values\":[";
    for (std::size_t i = 0; i < r.diag.t_values.size(); ++i) {
      if (i) s += ',';
      s += format_double(r.diag.t_values[i]);
    }
    s += "],\"annulus_counts\":[";
    for (std::size_t i = 0; i < r.diag.annulus_counts.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(r.diag.annulus_counts[i]);
    }
    s += "],\"drift\":[";
    for (std::size_t i = 0; i < r.diag.drift.size(); ++i) {
      if (i) s += ',';
      s += format_double(r.diag.drift[i]);
    }
    s += "],\"resolution_limited\":" + bool_json(r.diag.resolution_limited);
    s += "}";
    emit(s);
  });
}

struct ConicOpts {
  std::string path;
  std::string at;
  double r0 = 0.4;
  double ratio = 0.75;
  int steps = 10;
};

void attach_conic(CLI::App* cmd, const std::shared_ptr<ConicOpts>& o,
                  bool standalone) {
  if (standalone) {
    cmd->add_option("set", o->path, "point_cloud or implicit_set JSON file")
        ->required();
    cmd->add_option("--at", o->at, "cone vertex (default origin)");
  }
  cmd->add_option("--r0", o->r0, "largest comparison radius");
  cmd->add_option("--ratio", o->ratio, "radius ratio in (0, 1)");
  cmd->add_option("--steps", o->steps, "number of comparison radii");
}

void run_conic(const ConicOpts& o) {
  PointCloud e = load_set(o.path);
  if (!o.at.empty())
    e = translate_to_origin(e, parse_point_dim(o.at, e.dim, "--at"));
  const std::vector<double> radii =
      geometric_schedule(o.r0, o.ratio, o.steps, "conic radius schedule");
  emit(exponent_fit_to_json(conic_exponent(e, radii)));
}

void setup_conic(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "conic-exponent",
      "convergence exponent of a set toward its tangent cone");
  auto o = std::make_shared<ConicOpts>();
  attach_conic(cmd, o, true);
  cmd->callback([=] { run_conic(*o); });
}

void setup_nearest(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "nearest",
      "nearest-point multifunction of a set, sampled at the given arguments");
  auto path = std::make_shared<std::string>();
  auto ats = std::make_shared<std::vector<std::string>>();
  cmd->add_option("set", *path, "point_cloud or implicit_set JSON file")
      ->required();
  cmd->add_option("--at", *ats, "argument point (repeatable)")
      ->required()
      ->take_all();
  cmd->callback([=] {
    const PointCloud m = load_set(*path);
    std::vector<Point> xs;
    xs.reserve(ats->size());
    for (const auto& t : *ats)
      xs.push_back(parse_point_dim(t, m.dim, "--at"));
    emit(graph_to_json(nearest_point_multifunction(m, xs)));
  });
}

void setup_subgradient(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "subgradient", "Clarke subgradient of a piecewise function at a point");
  auto path = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  auto flags = std::make_shared<SubgradientFlags>();
  cmd->add_option("fn", *path, "piecewise_function or expr_function JSON")
      ->required();
  cmd->add_option("--at", *at, "evaluation point")->required();
  flags->attach(cmd, 1e-9);
  cmd->callback([=] {
    const PiecewiseFn f = load_fn(*path);
    const Point x = parse_point_dim(*at, f.arity(), "--at");
    const SubgradientConfig cfg = flags->resolve(f.arity());
    const Polytope p = clarke_subgradient(f, x, cfg);
    const auto [mn, h] = min_norm_point(p);
    std::string s = "{\"vertices\":[";
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      if (i) s += ',';
      s += point_to_json(p.vertices[i]);
    }
    s += "],\"min_norm_point\":" + point_to_json(mn);
    s += ",\"h\":" + format_double(h) + "}";
    emit(s);
  });
}

void setup_critical(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "critical-set",
      "sampled Clarke-critical set of a piecewise function on a window");
  auto path = std::make_shared<std::string>();
  auto window = std::make_shared<double>(0.0);
  auto step = std::make_shared<double>(0.0);
  auto flags = std::make_shared<SubgradientFlags>();
  cmd->add_option("fn", *path, "piecewise_function or expr_function JSON")
      ->required();
  cmd->add_option("--window", *window, "half width of the [-w, w]^m window")
      ->required();
  cmd->add_option("--grid-step", *step, "grid step")->required();
  flags->attach(cmd, 1e-6);
  cmd->callback([=] {
    const PiecewiseFn f = load_fn(*path);
    if (!(*window > 0)) throw ValidationError("--window must be positive");
    const SubgradientConfig cfg = flags->resolve(f.arity());
    const std::vector<std::pair<double, double>> box(f.arity(),
                                                     {-*window, *window});
    emit(point_cloud_to_json(critical_set_sample(f, box, *step, cfg)));
  });
}

void setup_exponent(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "exponent",
      "regularity exponents: function-value (loj), set separation (sep), "
      "subgradient descent (subgrad), conic convergence (conic), "
      "one-dimensional profile (onedim)");
  auto mode = std::make_shared<std::string>();
  auto in1 = std::make_shared<std::string>();
  auto in2 = std::make_shared<std::string>();
  auto at = std::make_shared<std::string>();
  auto window = std::make_shared<double>(0.0);
  auto step = std::make_shared<double>(0.0);
  auto tlo = std::make_shared<double>(0.0);
  auto thi = std::make_shared<double>(0.0);
  auto csv = std::make_shared<std::string>();
  auto conic = std::make_shared<ConicOpts>();
  auto flags = std::make_shared<SubgradientFlags>();
  cmd->add_option("--mode", *mode, "loj | sep | subgrad | conic | onedim")
      ->required()
      ->check(CLI::IsMember({"loj", "sep", "subgrad", "conic", "onedim"}));
  cmd->add_option("input", *in1, "primary input JSON file")->required();
  cmd->add_option("input2", *in2, "second set (mode sep only)");
  cmd->add_option("--at", *at, "base point (modes loj, sep, conic)");
  cmd->add_option("--window", *window,
                  "window half width (modes loj, sep, subgrad)");
  cmd->add_option("--grid-step", *step, "grid step (modes loj, subgrad)");
  cmd->add_option("--t-lo", *tlo, "profile window start (mode onedim)");
  cmd->add_option("--t-hi", *thi, "profile window end (mode onedim)");
  cmd->add_option("--csv", *csv,
                  "write the envelope sample dump CSV here (modes loj, sep, "
                  "subgrad)");
  attach_conic(cmd, conic, false);
  flags->attach(cmd, 1e-6);

  cmd->callback([=] {
    const auto need = [&](bool ok, const char* what) {
      if (!ok)
        throw ValidationError("mode " + *mode + ": " + what);
    };
    EnvelopeDump dump;
    EnvelopeDump* dp = csv->empty() ? nullptr : &dump;

    if (*mode == "loj") {
      need(!at->empty(), "--at is required");
      need(*window > 0, "--window must be positive");
      need(*step > 0, "--grid-step must be positive");
      const PiecewiseFn f = load_fn(*in1);
      const Point a = parse_point_dim(*at, f.arity(), "--at");
      const ExponentFit fit =
          loj_function_exponent(f, a, *window, *step, dp);
      if (dp) write_envelope_csv(*csv, dump);
      emit(exponent_fit_to_json(fit));
    } else if (*mode == "sep") {
      need(!in2->empty(), "a second set file is required");
      need(!at->empty(), "--at is required");
      need(*window > 0, "--window must be positive");
      const PointCloud x = load_set(*in1);
      const PointCloud y = load_set(*in2);
      const Point a = parse_point_dim(*at, x.dim, "--at");
      const ExponentFit fit = separation_exponent(x, y, a, *window, dp);
      if (dp) write_envelope_csv(*csv, dump);
      emit(exponent_fit_to_json(fit));
    } else if (*mode == "subgrad") {
      need(*window > 0, "--window must be positive");
      need(*step > 0, "--grid-step must be positive");
      const PiecewiseFn f = load_fn(*in1);
      const SubgradientConfig cfg = flags->resolve(f.arity());
      const SubgradientExponentResult r =
          subgradient_exponent(f, *window, *step, cfg, dp);
      if (dp) write_envelope_csv(*csv, dump);
      std::string s = exponent_fit_to_json(r.fit);
      s.pop_back();
      s += ",\"h_at_zero\":" + format_double(r.h_at_zero);
      s += ",\"hypothesis_ok\":" + bool_json(r.hypothesis_ok);
      s += ",\"theta_in_range\":" + bool_json(r.theta_in_range) + "}";
      emit(s);
    } else if (*mode == "conic") {
      need(csv->empty(), "--csv is not available here");
      conic->path = *in1;
      conic->at = *at;
      run_conic(*conic);
    } else {  // onedim
      need(csv->empty(), "--csv is not available here");
      need(*tlo > 0 && *thi > *tlo,
           "--t-lo and --t-hi with 0 < t-lo < t-hi are required");
      const nlohmann::json j = with_path(*in1, [&] {
        try {
          return nlohmann::json::parse(read_file(*in1));
        } catch (const nlohmann::json::parse_error& e) {
          throw ValidationError("malformed JSON at byte " +
                                std::to_string(e.byte) + ": " + e.what());
        }
      });
      if (!j.is_object() || j.value("kind", "") != "expr_function" ||
          !j.contains("tree") || j.value("arity", 0) != 1)
        throw ValidationError(*in1 +
                              ": mode onedim needs an expr_function document "
                              "with arity 1");
      const ExprFn phi = with_path(
          *in1, [&] { return expr_from_json(j.at("tree").dump(), 1); });
      const OneDimExponentResult r =
          one_dim_gradient_exponent(phi, {*tlo, *thi});
      std::string s = "{\"exponent\":" + format_double(r.theta);
      s += ",\"alpha\":" + format_double(r.alpha);
      s += ",\"theta_envelope\":" + format_double(r.theta_envelope);
      s += ",\"cross_check_applicable\":" +
           bool_json(r.cross_check_applicable);
      s += ",\"envelope_fit\":";
      s += r.cross_check_applicable ? exponent_fit_to_json(r.envelope_fit)
                                    : "null";
      s += "}";
      emit(s);
    }
  });
}

void setup_phi(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "phi-profile",
      "min subgradient norm over level shells |f| = t on a ball");
  auto path = std::make_shared<std::string>();
  auto radius = std::make_shared<double>(0.0);
  auto step = std::make_shared<double>(0.0);
  auto ts = std::make_shared<std::string>();
  auto tlo = std::make_shared<double>(0.0);
  auto thi = std::make_shared<double>(0.0);
  auto tcount = std::make_shared<int>(12);
  auto flags = std::make_shared<SubgradientFlags>();
  cmd->add_option("fn", *path, "piecewise_function or expr_function JSON")
      ->required();
  cmd->add_option("--ball-radius", *radius, "radius of the sampled ball")
      ->required();
  cmd->add_option("--grid-step", *step, "grid step")->required();
  cmd->add_option("--t", *ts, "explicit level values, comma separated");
  cmd->add_option("--t-lo", *tlo, "smallest level of a log-spaced grid");
  cmd->add_option("--t-hi", *thi, "largest level of a log-spaced grid");
  cmd->add_option("--t-count", *tcount, "points of the log-spaced grid");
  flags->attach(cmd, 1e-6);
  cmd->callback([=] {
    const PiecewiseFn f = load_fn(*path);
    std::vector<double> grid;
    if (!ts->empty()) {
      grid = parse_point(*ts, "--t");
    } else {
      if (!(*tlo > 0 && *thi > *tlo && *tcount >= 2))
        throw ValidationError(
            "need --t, or --t-lo/--t-hi/--t-count with 0 < t-lo < t-hi");
      for (int i = 0; i < *tcount; ++i)
        grid.push_back(*tlo *
                       std::pow(*thi / *tlo, double(i) / (*tcount - 1)));
    }
    const SubgradientConfig cfg = flags->resolve(f.arity());
    const PhiProfile prof = phi_profile(f, *radius, grid, *step, cfg);
    std::string s = "{\"rows\":[";
    for (std::size_t i = 0; i < prof.rows.size(); ++i) {
      if (i) s += ',';
      const PhiRow& r = prof.rows[i];
      s += "{\"t\":" + format_double(r.t) + ",\"phi\":" + format_double(r.phi);
      s += ",\"shell_count\":" + std::to_string(r.shell_count);
      s += ",\"ok\":" + bool_json(r.ok) + "}";
    }
    s += "],\"monotone\":" + bool_json(prof.monotone);
    s += ",\"vanishes_at_zero\":" + bool_json(prof.vanishes_at_zero) + "}";
    emit(s);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical tame geometry toolkit"};
  app.require_subcommand(1);
  setup_sample(app);
  setup_metric(app, "hausdorff", false);
  setup_metric(app, "kuratowski", true);
  setup_section(app);
  setup_domain(app);
  setup_preimage(app);
  setup_klim(app);
  setup_delta(app);
  setup_cone(app);
  setup_conic(app);
  setup_nearest(app);
  setup_subgradient(app);
  setup_critical(app);
  setup_exponent(app);
  setup_phi(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
