#pragma once

// JSON formats for triangulations, patterns and reports.
//
// Complex numbers are [re, im] pairs; matrices are row-major nested arrays of them.

#include <string>

#include "json.hpp"

#include "circlepat/crossratio.hpp"
#include "circlepat/forms.hpp"
#include "circlepat/holonomy.hpp"
#include "circlepat/tangent.hpp"

namespace circlepat {

using Json = nlohmann::json;

Json to_json(Cplx z);
Json to_json(const Eigen::VectorXcd& v);
Json to_json(const Eigen::MatrixXcd& m);
Json to_json(const Mat2& m);
Cplx complex_from_json(const Json& j);

// {"n_vertices", "faces", "corner_gluing"}; the gluing is always written.
Json to_json(const Triangulation& tri);
// Throws Format for malformed documents, and the build errors for invalid surfaces.
Triangulation triangulation_from_json(const Json& j);

// {"triangulation", "theta", "log_mag"} plus optional "cut_edges" and "developing_seed".
Json to_json(const Pattern& p);
Pattern pattern_from_json(const Json& j);

Json read_json_file(const std::string& path);  // Io, Format
void write_json_file(const std::string& path, const Json& j);  // Io

Json to_json(const DelaunayReport& r);
Json to_json(const KernelBasis& k);
Json to_json(const RigidityReport& r);
Json to_json(const TheoremReport& r);
Json holonomy_json(const DevelopedPattern& P);

} // namespace circlepat
