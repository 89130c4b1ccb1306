#include "circlepat/io.hpp"

#include <fstream>
#include <sstream>

#include "circlepat/error.hpp"

namespace circlepat {

Json to_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out.push_back(to_json(v(k)));
  }
  return out;
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(to_json(m(r, c)));
    }
    out.push_back(row);
  }
  return out;
}

Json to_json(const Mat2& m) { return to_json(Eigen::MatrixXcd(m)); }

Cplx complex_from_json(const Json& j) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::Format, "complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Triangulation& tri) {
  Json faces = Json::array();
  for (const Face& f : tri.faces()) {
    faces.push_back({f[0], f[1], f[2]});
  }
  Json gluing = Json::array();
  for (const auto& [h, g] : tri.corner_gluing()) {
    gluing.push_back({h, g});
  }
  return {{"n_vertices", tri.n_vertices()}, {"faces", faces}, {"corner_gluing", gluing}};
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Format, std::string(what) + ": " + e.what());
  }
}

std::vector<double> double_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorKind::Format, std::string("missing array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number()) {
      throw Error(ErrorKind::Format, std::string("\"") + key + "\" must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

} // namespace

Triangulation triangulation_from_json(const Json& j) {
  const auto [n, faces, gluing] = guarded("triangulation", [&] {
    if (!j.is_object()) {
      throw Error(ErrorKind::Format, "triangulation must be an object");
    }
    const int nv = j.at("n_vertices").get<int>();
    std::vector<Face> fs;
    for (const Json& f : j.at("faces")) {
      if (!f.is_array() || f.size() != 3) {
        throw Error(ErrorKind::Format, "faces are triples of vertex indices");
      }
      fs.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
    }
    std::optional<std::vector<HalfedgePair>> gl;
    if (j.contains("corner_gluing") && !j.at("corner_gluing").is_null()) {
      gl.emplace();
      for (const Json& p : j.at("corner_gluing")) {
        if (!p.is_array() || p.size() != 2) {
          throw Error(ErrorKind::Format, "corner_gluing entries are half-edge pairs");
        }
        gl->emplace_back(p[0].get<int>(), p[1].get<int>());
      }
    }
    return std::make_tuple(nv, fs, gl);
  });
  return build(faces, n, gluing);
}

Json to_json(const Pattern& p) {
  Json out{{"triangulation", to_json(*p.tri)}, {"theta", p.X.theta()}, {"log_mag", p.X.log_mag()}};
  if (!p.cut.empty()) {
    Json cut = Json::array();
    for (int e = 0; e < static_cast<int>(p.cut.size()); ++e) {
      if (p.cut[e]) {
        cut.push_back(e);
      }
    }
    out["cut_edges"] = cut;
  }
  if (p.seed) {
    Json seed = Json::array();
    for (const ProjPoint& q : *p.seed) {
      seed.push_back(is_infinite(q) ? Json(nullptr) : to_json(affine(q)));
    }
    out["developing_seed"] = seed;
  }
  return out;
}

Pattern pattern_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("triangulation")) {
    throw Error(ErrorKind::Format, "pattern needs a \"triangulation\" object");
  }
  auto tri = std::make_shared<const Triangulation>(triangulation_from_json(j.at("triangulation")));
  Pattern p{tri, CrossRatioSystem(tri, double_array(j, "log_mag"), double_array(j, "theta")), {}, std::nullopt};
  guarded("pattern", [&] {
    if (j.contains("cut_edges")) {
      p.cut.assign(tri->n_edges(), false);
      for (const Json& e : j.at("cut_edges")) {
        const int k = e.get<int>();
        if (k < 0 || k >= tri->n_edges()) {
          throw Error(ErrorKind::Format, "cut edge out of range");
        }
        p.cut[k] = true;
      }
    }
    if (j.contains("developing_seed") && !j.at("developing_seed").is_null()) {
      const Json& s = j.at("developing_seed");
      if (!s.is_array() || s.size() != 3) {
        throw Error(ErrorKind::Format, "developing_seed holds three points");
      }
      std::array<ProjPoint, 3> seed;
      for (int k = 0; k < 3; ++k) {
        seed[k] = s[k].is_null() ? proj_infinity() : proj(complex_from_json(s[k]));
      }
      p.seed = seed;
    }
    return 0;
  });
  return p;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Format, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot write " + path);
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorKind::Io, "write failed for " + path);
  }
}

Json to_json(const DelaunayReport& r) {
  Json vertex = Json::array();
  for (const auto& v : r.vertex_violations) {
    vertex.push_back({{"vertex", v.vertex}, {"angle_sum", v.angle_sum}});
  }
  Json cycles = Json::array();
  for (const auto& c : r.cycle_violations) {
    cycles.push_back({{"edges", c.edges}, {"angle_sum", c.angle_sum}});
  }
  return {{"ok", r.ok()},
          {"range_ok", r.range_ok},
          {"vertex_sums_ok", r.vertex_sums_ok},
          {"cycles_ok", r.cycles_ok},
          {"max_cycle_len", r.max_cycle_len},
          {"cycles_enumerated", r.cycles_enumerated},
          {"contractible_cycles", r.contractible_cycles},
          {"range_violations", r.range_violations},
          {"vertex_violations", vertex},
          {"cycle_violations", cycles}};
}

Json to_json(const KernelBasis& k) {
  Json basis = Json::array();
  for (int c = 0; c < k.dim(); ++c) {
    if (k.real) {
      std::vector<double> col(k.basis.rows());
      for (Eigen::Index r = 0; r < k.basis.rows(); ++r) {
        col[r] = k.basis(r, c).real();
      }
      basis.push_back(col);
    } else {
      basis.push_back(to_json(Eigen::VectorXcd(k.basis.col(c))));
    }
  }
  return {{"field", k.real ? "real" : "complex"},
          {"dim", k.dim()},
          {"tol", k.tol},
          {"ill_conditioned", k.ill_conditioned},
          {"singular_values", k.singular_values},
          {"basis", basis}};
}

Json to_json(const RigidityReport& r) {
  return {{"degenerate", r.degenerate},
          {"reason", r.reason},
          {"n_fields", r.n_fields},
          {"rank", r.rank},
          {"singular_values", r.singular_values},
          {"rigid", r.rigid},
          {"implied_real_dim", r.rigid ? Json(r.implied_real_dim) : Json(nullptr)},
          {"measured_real_dim", r.measured_real_dim}};
}

Json to_json(const TheoremReport& r) {
  return {{"passed", r.passed},
          {"tol", r.tol},
          {"max_discrepancy", r.max_discrepancy},
          {"max_real_discrepancy", r.max_real_discrepancy},
          {"max_imag_real", r.max_imag_real},
          {"complex_dim", r.complex_kernel.dim()},
          {"real_dim", r.real_kernel.dim()},
          {"real_gram_rank", r.real_gram_rank},
          {"real_gram_singular_values", r.real_gram_singular_values},
          {"omega_G", to_json(r.goldman)},
          {"omega_cup", to_json(r.cup)},
          {"half_omega_P", to_json(r.half_penner)},
          {"omega_G_real", to_json(r.goldman_real)}};
}

Json holonomy_json(const DevelopedPattern& P) {
  Json gens = Json::array();
  for (int r = 0; r < P.n_generators(); ++r) {
    const Generator& g = P.domain().generators[r];
    gens.push_back({{"edge", g.edge},
                    {"halfedge", g.halfedge},
                    {"from_face", g.from_face},
                    {"to_face", g.to_face},
                    {"matrix", to_json(P.generator(r))}});
  }
  return {{"root_face", P.domain().root},
          {"generators", gens},
          {"relator_defect", P.relator_defect()},
          {"vertex_cycle_defects", P.vertex_cycle_defects()},
          {"cross_ratio_defect", P.cross_ratio_defect()},
          {"pairing_defect", P.pairing_defect()}};
}

} // namespace circlepat
