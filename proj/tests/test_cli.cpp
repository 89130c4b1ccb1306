#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "circlepat/cli.hpp"
#include "circlepat/io.hpp"

using namespace circlepat;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "circlepat");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "circlepat_cli_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string example_file(const std::string& name) {
  const Run r = run({"example", name});
  REQUIRE(r.code == 0);
  return write_file(name + ".json", r.out);
}

} // namespace

TEST_CASE("example hex-torus emits the pattern") {
  const Run r = run({"example", "hex-torus"});
  CHECK(r.code == 0);
  const Json j = r.json();
  CHECK(j.at("triangulation").at("n_vertices") == 1);
  CHECK(j.at("triangulation").at("faces").size() == 2);
  CHECK(j.at("triangulation").at("corner_gluing").size() == 3);
  REQUIRE(j.at("theta").size() == 3);
  for (const Json& t : j.at("theta")) {
    CHECK(t.get<double>() == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-15));
  }
  CHECK(r.err.find("hex-torus") != std::string::npos);
}

TEST_CASE("example documents round-trip through the parser") {
  for (const char* name : {"hex-torus", "bolza", "octahedron"}) {
    const Json j = run({"example", name}).json();
    const Pattern p = pattern_from_json(j);
    CHECK(to_json(p) == j);
    CHECK(max_residual(p.X) < 1e-10);
  }
}

TEST_CASE("unknown example is an input error") {
  const Run r = run({"example", "klein-bottle"});
  CHECK(r.code == 1);
  CHECK(r.json().at("error").at("kind") == "InvalidInput");
}

TEST_CASE("validate accepts the examples") {
  for (const char* name : {"hex-torus", "bolza", "octahedron"}) {
    const Run r = run({"validate", example_file(name)});
    CHECK(r.code == 0);
    const Json j = r.json();
    CHECK(j.at("valid") == true);
    CHECK(j.at("command") == "validate");
    CHECK(j.at("version") == cli::kVersion);
    CHECK(j.at("triangulation").at("edge_count_identity") == true);
    CHECK(j.at("delaunay").at("ok") == true);
  }
}

TEST_CASE("validate accepts a bare triangulation") {
  const Json j = run({"example", "bolza"}).json();
  const Run r = run({"validate", write_file("bolza_tri.json", j.at("triangulation").dump())});
  CHECK(r.code == 0);
  CHECK(r.json().at("triangulation").at("genus") == 2);
}

TEST_CASE("validate fails on broken angles") {
  Json j = run({"example", "hex-torus"}).json();
  j["theta"] = {0.0, 0.0, 0.0};
  const Run r = run({"validate", write_file("flat.json", j.dump())});
  CHECK(r.code == 1);
  CHECK(r.json().at("valid") == false);
}

TEST_CASE("malformed JSON exits 3 with an error object") {
  const Run r = run({"validate", write_file("bad.json", "{\"n_vertices\": 1, \"faces\": [")});
  CHECK(r.code == 3);
  const Json j = r.json();
  CHECK(j.at("error").at("kind") == "Format");
  CHECK_FALSE(j.at("error").at("message").get<std::string>().empty());
}

TEST_CASE("structurally wrong documents exit 3") {
  CHECK(run({"validate", write_file("wrong1.json", "[1, 2, 3]")}).code == 3);
  CHECK(run({"validate", write_file("wrong2.json", "{\"n_vertices\": 1, \"faces\": [[0, 0]]}")}).code == 3);
  CHECK(run({"holonomy", write_file("wrong3.json", "{\"triangulation\": {\"n_vertices\": 1}}")}).code == 3);
}

TEST_CASE("missing input file exits 3") {
  const Run r = run({"validate", (scratch_dir() / "does_not_exist.json").string()});
  CHECK(r.code == 3);
  CHECK(r.json().at("error").at("kind") == "Io");
}

TEST_CASE("usage errors exit 3") {
  CHECK(run({}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({"tangent", example_file("hex-torus"), "--field", "quaternion"}).code == 3);
}

TEST_CASE("version flag") {
  const Run r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(cli::kVersion) != std::string::npos);
}

TEST_CASE("check-theorem on Bolza") {
  const Run r = run({"check-theorem", example_file("bolza"), "--tol", "1e-8"});
  CHECK(r.code == 0);
  const Json j = r.json();
  CHECK(j.at("passed") == true);
  CHECK(j.at("max_discrepancy").get<double>() < 1e-8);
  CHECK(j.at("complex_dim") == 7);
  CHECK(j.at("real_dim") == 6);
  CHECK(j.at("omega_G").size() == 7);
}

TEST_CASE("check-theorem exits 1 when the tolerance is unattainable") {
  const Run r = run({"check-theorem", example_file("bolza"), "--tol", "1e-30"});
  CHECK(r.code == 1);
  CHECK(r.json().at("passed") == false);
}

TEST_CASE("tangent reports dimensions") {
  const std::string f = example_file("bolza");
  const Json c = run({"tangent", f}).json();
  CHECK(c.at("dims").at("complex") == 7);
  CHECK(c.at("dims").at("lower_bound") == 7);
  CHECK(c.at("basis").size() == 7);
  const Json r = run({"tangent", f, "--field", "real"}).json();
  CHECK(r.at("dims").at("real") == 6);
  CHECK(r.at("basis").at(0).at(0).is_number());
  CHECK(r.at("singular_values").size() == 3);
}

TEST_CASE("holonomy reports generators and defects") {
  const Json j = run({"holonomy", example_file("bolza")}).json();
  CHECK(j.at("generators").size() == 4);
  CHECK(j.at("relator_defect").get<double>() < 1e-8);
  CHECK(j.at("vertex_cycle_defects").size() == 1);
  CHECK(j.at("generators").at(0).at("matrix").size() == 2);
  const Run other = run({"holonomy", example_file("bolza"), "--seed-face", "3"});
  CHECK(other.code == 0);
  CHECK(other.json().at("root_face") == 3);
  CHECK(run({"holonomy", example_file("bolza"), "--seed-face", "6"}).code == 1);
}

TEST_CASE("forms reports Gram matrices") {
  const Json c = run({"forms", example_file("hex-torus"), "--pairs", "basis"}).json();
  CHECK(c.at("field") == "complex");
  CHECK(c.at("dim") == 2);
  CHECK(c.at("omega_P").size() == 2);
  const Json r = run({"forms", example_file("bolza"), "--field", "real"}).json();
  CHECK(r.at("dim") == 6);
  for (const Json& row : r.at("omega_G")) {
    for (const Json& z : row) {
      CHECK(std::abs(z.at(1).get<double>()) < 1e-8);
    }
  }
}

TEST_CASE("rigidity") {
  const Json j = run({"rigidity", example_file("bolza")}).json();
  CHECK(j.at("rigid") == true);
  CHECK(j.at("rank") == 2);
  CHECK(j.at("implied_real_dim") == 6);
  CHECK(j.at("measured_real_dim") == 6);
}

TEST_CASE("solve re-converges and keeps the angles") {
  Json j = run({"example", "bolza"}).json();
  std::vector<double> theta = j.at("theta");
  std::vector<double> u = j.at("log_mag");
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] += 0.01 * std::sin(3.0 * k + 1.0);
  }
  j["log_mag"] = u;
  const Run r = run({"solve", write_file("noisy.json", j.dump())});
  CHECK(r.code == 0);
  const Json s = r.json();
  CHECK(s.at("solver").at("residual").get<double>() <= 1e-12);
  CHECK(s.at("pattern").at("theta").get<std::vector<double>>() == theta);
  CHECK(s.at("pattern").at("cut_edges") == j.at("cut_edges"));

  const Run capped = run({"solve", write_file("noisy.json", j.dump()), "--max-iter", "0"});
  CHECK(capped.code == 2);
  CHECK(capped.json().at("error").at("kind") == "NoConvergence");
}

TEST_CASE("solve takes angles and start from separate files") {
  const Json j = run({"example", "hex-torus"}).json();
  const std::string tri = write_file("hex_tri.json", j.at("triangulation").dump());
  const std::string theta = write_file("hex_theta.json", j.at("theta").dump());
  const std::string init = write_file("hex_init.json", "[0.01, -0.02, 0.005]");
  const Run r = run({"solve", tri, "--theta", theta, "--init", init, "--tol", "1e-13"});
  CHECK(r.code == 0);
  CHECK(r.json().at("solver").at("residual").get<double>() <= 1e-13);
  CHECK(run({"solve", tri}).code == 1);
  CHECK(run({"solve", tri, "--theta", write_file("short.json", "[1.0]")}).code == 3);
}

TEST_CASE("reports are deterministic") {
  const std::string f = example_file("bolza");
  for (const char* cmd : {"validate", "tangent", "holonomy", "forms", "check-theorem", "rigidity"}) {
    CHECK(run({cmd, f}).out == run({cmd, f}).out);
  }
}

TEST_CASE("output flag writes the report to a file") {
  const auto path = (scratch_dir() / "report.json").string();
  std::filesystem::remove(path);
  const Run r = run({"tangent", example_file("hex-torus"), "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const Json j = read_json_file(path);
  CHECK(j.at("dims").at("complex") == 2);
  CHECK(run({"tangent", example_file("hex-torus"), "--output", "/nonexistent/dir/x.json"}).code == 3);
}
