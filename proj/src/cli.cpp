#include "circlepat/cli.hpp"

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "circlepat/io.hpp"

namespace circlepat::cli {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string theta_file;
  std::string init_file;
  std::string field = "complex";
  std::string pairs = "basis";
  double tol = -1.0; // command-specific default when negative
  int max_iter = 100;
  int max_cycle_len = 12;
  int seed_face = 0;
};

double tol_or(const Options& o, double fallback) { return o.tol > 0.0 ? o.tol : fallback; }

Pattern load_pattern(const Options& o) { return pattern_from_json(read_json_file(o.input)); }

DevelopedPattern develop_pattern(const Pattern& p, const Options& o) {
  const Triangulation& tri = *p.tri;
  if (o.seed_face < 0 || o.seed_face >= tri.n_faces()) {
    throw Error(ErrorKind::InvalidInput, "--seed-face out of range");
  }
  const FundamentalDomain domain = p.cut.empty() ? fundamental_domain(tri, o.seed_face)
                                                 : fundamental_domain(tri, o.seed_face, p.cut);
  DevelopOptions d;
  if (o.seed_face == 0 && p.seed) {
    d.seed = p.seed;
  }
  return develop(p.X, domain, d);
}

Json summary(const Triangulation& tri) {
  return {{"genus", tri.genus()},
          {"n_vertices", tri.n_vertices()},
          {"n_edges", tri.n_edges()},
          {"n_faces", tri.n_faces()},
          {"edge_count_identity", tri.n_edges() == 6 * tri.genus() - 6 + 3 * tri.n_vertices()}};
}

Json residual_json(const CrossRatioSystem& X) {
  double prod = 0.0;
  double sum = 0.0;
  for (int i = 0; i < X.triangulation().n_vertices(); ++i) {
    prod = std::max(prod, std::abs(product_residual(X, i)));
    sum = std::max(sum, std::abs(sum_residual(X, i)));
  }
  return {{"max_product_residual", prod}, {"max_sum_residual", sum}, {"max_residual", std::max(prod, sum)}};
}

struct Outcome {
  Json body;
  int code = 0;
  std::string summary;
};

Outcome cmd_example(const std::string& name) {
  Pattern p = [&] {
    if (name == "hex-torus") {
      return example_hex_torus();
    }
    if (name == "bolza") {
      return example_bolza();
    }
    if (name == "octahedron") {
      return example_octahedron();
    }
    throw Error(ErrorKind::InvalidInput, "unknown example \"" + name + "\" (hex-torus, bolza, octahedron)");
  }();
  const Triangulation& tri = *p.tri;
  return {to_json(p), 0,
          name + ": genus " + std::to_string(tri.genus()) + ", " + std::to_string(tri.n_edges()) + " edges"};
}

Outcome cmd_validate(const Options& o) {
  const Json doc = read_json_file(o.input);
  Json body;
  bool ok = true;
  if (doc.is_object() && doc.contains("triangulation")) {
    const Pattern p = pattern_from_json(doc);
    const Json res = residual_json(p.X);
    const DelaunayReport del = is_delaunay(*p.tri, p.X.theta(), o.max_cycle_len);
    const double tol = tol_or(o, 1e-10);
    ok = res["max_residual"].get<double>() <= tol && del.ok();
    body = {{"triangulation", summary(*p.tri)}, {"residuals", res}, {"delaunay", to_json(del)}, {"residual_tol", tol}};
  } else {
    body = {{"triangulation", summary(triangulation_from_json(doc))}};
  }
  body["valid"] = ok;
  return {body, ok ? 0 : 1, ok ? "valid" : "validation failed"};
}

std::vector<double> read_array(const std::string& path, int n, const char* what) {
  const Json j = read_json_file(path);
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw Error(ErrorKind::Format, std::string(what) + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorKind::Format, std::string(what) + " must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Outcome cmd_solve(const Options& o) {
  const Json doc = read_json_file(o.input);
  const bool is_pattern = doc.is_object() && doc.contains("triangulation");
  auto tri = std::make_shared<const Triangulation>(triangulation_from_json(is_pattern ? doc.at("triangulation") : doc));
  const int ne = tri->n_edges();
  std::vector<double> theta;
  std::vector<double> u0(ne, 0.0);
  std::vector<bool> cut;
  if (is_pattern) {
    const Pattern p = pattern_from_json(doc);
    theta = p.X.theta();
    u0 = p.X.log_mag();
    cut = p.cut;
  }
  if (!o.theta_file.empty()) {
    theta = read_array(o.theta_file, ne, "theta");
  }
  if (!o.init_file.empty()) {
    u0 = read_array(o.init_file, ne, "init");
  }
  if (theta.empty()) {
    throw Error(ErrorKind::InvalidInput, "no angles: pass a pattern or --theta");
  }
  SolveOptions so;
  so.tol = tol_or(o, 1e-12);
  so.max_iter = o.max_iter;
  const SolveResult r = solve_pattern(tri, theta, u0, so);
  Pattern solved{tri, CrossRatioSystem(tri, r.log_mag, theta), cut, std::nullopt};
  Json body{{"pattern", to_json(solved)},
            {"solver", {{"iterations", r.iterations}, {"residual", r.residual}, {"residual_history", r.residual_history},
                        {"tol", so.tol}, {"max_iter", so.max_iter}}}};
  return {body, 0, "converged in " + std::to_string(r.iterations) + " iterations"};
}

Outcome cmd_tangent(const Options& o) {
  const Pattern p = load_pattern(o);
  const double tol = tol_or(o, 1e-9);
  KernelBasis k;
  int lower = 0;
  if (o.field == "complex") {
    k = kernel_complex(p.X, tol);
    lower = p.tri->n_edges() - 2 * p.tri->n_vertices();
  } else if (o.field == "real") {
    k = kernel_real(p.X, tol);
    lower = p.tri->n_edges() - 3 * p.tri->n_vertices();
  } else {
    throw Error(ErrorKind::InvalidInput, "--field must be real or complex");
  }
  Json body = to_json(k);
  body["dims"] = {{o.field, k.dim()}, {"lower_bound", lower}};
  return {body, 0, o.field + " kernel dimension " + std::to_string(k.dim())};
}

Outcome cmd_holonomy(const Options& o) {
  const Pattern p = load_pattern(o);
  const DevelopedPattern P = develop_pattern(p, o);
  return {holonomy_json(P), 0, "relator defect " + format_value(P.relator_defect())};
}

Outcome cmd_forms(const Options& o) {
  if (o.pairs != "basis") {
    throw Error(ErrorKind::InvalidInput, "--pairs supports only \"basis\"");
  }
  const Pattern p = load_pattern(o);
  const DevelopedPattern P = develop_pattern(p, o);
  TheoremOptions to;
  to.kernel_tol = 1e-9;
  const TheoremReport r = check_theorem(P, to);
  Json body;
  if (o.field == "real") {
    body = {{"field", "real"},
            {"dim", r.real_kernel.dim()},
            {"omega_G", to_json(r.goldman_real)},
            {"omega_P", to_json(Eigen::MatrixXcd(2.0 * r.half_penner_real))}};
  } else {
    body = {{"field", "complex"},
            {"dim", r.complex_kernel.dim()},
            {"omega_G", to_json(r.goldman)},
            {"omega_cup", to_json(r.cup)},
            {"omega_P", to_json(Eigen::MatrixXcd(2.0 * r.half_penner))}};
  }
  return {body, 0, "Gram matrices on a " + std::to_string(body["dim"].get<int>()) + "-dimensional basis"};
}

Outcome cmd_check_theorem(const Options& o) {
  const Pattern p = load_pattern(o);
  const DevelopedPattern P = develop_pattern(p, o);
  TheoremOptions to;
  to.tol = tol_or(o, 1e-9);
  const TheoremReport r = check_theorem(P, to);
  return {to_json(r), r.passed ? 0 : 1,
          std::string(r.passed ? "passed" : "FAILED") + ", max discrepancy " + format_value(r.max_discrepancy)};
}

Outcome cmd_rigidity(const Options& o) {
  const Pattern p = load_pattern(o);
  const DevelopedPattern P = develop_pattern(p, o);
  const RigidityReport r = rigidity_check(P, tol_or(o, 1e-9));
  std::string s = r.degenerate ? "degenerate input: " + r.reason
                               : (r.rigid ? "infinitesimally rigid" : "not shown rigid") + std::string(", rank ") +
                                     std::to_string(r.rank) + "/" + std::to_string(r.n_fields);
  return {to_json(r), 0, s};
}

} // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::NoConvergence:
  case ErrorKind::DivergedToInfinity:
    return 2;
  case ErrorKind::Io:
  case ErrorKind::Format:
    return 3;
  default:
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circle patterns, tangent spaces, holonomy and symplectic forms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;
  std::string example_name;

  auto common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) {
      sub->add_option("input", o.input, "Pattern or triangulation JSON file")->required();
    }
    sub->add_option("--output", o.output, "Write the JSON report to this path");
  };

  auto* ex = app.add_subcommand("example", "Emit a built-in example pattern");
  ex->add_option("name", example_name, "hex-torus, bolza or octahedron")->required();
  common(ex, false);

  auto* va = app.add_subcommand("validate", "Check a triangulation or pattern");
  common(va, true);
  va->add_option("--tol", o.tol, "Residual tolerance (default 1e-10)");
  va->add_option("--max-cycle-len", o.max_cycle_len, "Dual-cycle length bound for the Delaunay check");

  auto* so = app.add_subcommand("solve", "Solve for magnitudes with the angles held fixed");
  common(so, true);
  so->add_option("--theta", o.theta_file, "JSON array of per-edge angles");
  so->add_option("--init", o.init_file, "JSON array of initial per-edge log-magnitudes");
  so->add_option("--tol", o.tol, "Residual tolerance (default 1e-12)");
  so->add_option("--max-iter", o.max_iter, "Gauss-Newton iteration limit");

  auto* ta = app.add_subcommand("tangent", "Kernel of the linearized equations");
  common(ta, true);
  ta->add_option("--field", o.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  ta->add_option("--tol", o.tol, "Relative singular-value threshold (default 1e-9)");

  auto* ho = app.add_subcommand("holonomy", "Develop the pattern and report generator holonomies");
  common(ho, true);
  ho->add_option("--seed-face", o.seed_face, "Root face of the fundamental domain");

  auto* fo = app.add_subcommand("forms", "Gram matrices of the three forms on a kernel basis");
  common(fo, true);
  fo->add_option("--pairs", o.pairs, "Pairs to evaluate (basis)");
  fo->add_option("--field", o.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  fo->add_option("--seed-face", o.seed_face, "Root face of the fundamental domain");

  auto* ct = app.add_subcommand("check-theorem", "Compare the Goldman, cup-product and Penner forms");
  common(ct, true);
  ct->add_option("--tol", o.tol, "Agreement tolerance (default 1e-9)");
  ct->add_option("--seed-face", o.seed_face, "Root face of the fundamental domain");

  auto* ri = app.add_subcommand("rigidity", "Independence of the vertex-move fields");
  common(ri, true);
  ri->add_option("--tol", o.tol, "Relative singular-value threshold (default 1e-9)");
  ri->add_option("--seed-face", o.seed_face, "Root face of the fundamental domain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    out << Json{{"version", kVersion}, {"error", {{"kind", "Usage"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 3;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Json report{{"command", command}, {"version", kVersion}};
  int code = 0;
  try {
    Outcome r;
    if (command == "example") {
      r = cmd_example(example_name);
    } else if (command == "validate") {
      r = cmd_validate(o);
    } else if (command == "solve") {
      r = cmd_solve(o);
    } else if (command == "tangent") {
      r = cmd_tangent(o);
    } else if (command == "holonomy") {
      r = cmd_holonomy(o);
    } else if (command == "forms") {
      r = cmd_forms(o);
    } else if (command == "check-theorem") {
      r = cmd_check_theorem(o);
    } else {
      r = cmd_rigidity(o);
    }
    // Pattern documents stay bare so they can be fed back in.
    if (command == "example") {
      report = r.body;
    } else {
      report.update(r.body);
    }
    code = r.code;
    err << command << ": " << r.summary << '\n';
  } catch (const Error& e) {
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    code = exit_code(e.kind());
    err << command << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    report["error"] = {{"kind", "Internal"}, {"message", e.what()}};
    code = 1;
    err << command << ": " << e.what() << '\n';
  }

  if (!o.output.empty()) {
    try {
      write_json_file(o.output, report);
    } catch (const Error& e) {
      err << command << ": " << e.what() << '\n';
      out << Json{{"command", command}, {"error", {{"kind", "Io"}, {"message", e.what()}}}}.dump(2) << '\n';
      return 3;
    }
  } else {
    out << report.dump(2) << '\n';
  }
  return code;
}

} // namespace circlepat::cli
