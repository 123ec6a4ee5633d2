#include "lriga/geometry_io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lriga/errors.hpp"

namespace lriga {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ValidationError("geometry file: field '" + field + "': " + msg);
}

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) fail(field, "missing");
  return j.at(field);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "expected a finite number");
  return x;
}

// Flattens a nested array with the given shape in row-major order.
void flatten(const json& v, const std::vector<std::size_t>& shape, std::size_t depth, const std::string& field,
             std::vector<double>& out) {
  if (depth == shape.size()) {
    out.push_back(number(v, field));
    return;
  }
  if (!v.is_array()) fail(field, "expected a nested array at depth " + std::to_string(depth));
  if (v.size() != shape[depth]) {
    std::ostringstream os;
    os << "expected " << shape[depth] << " entries at depth " << depth << ", got " << v.size();
    fail(field, os.str());
  }
  for (const auto& e : v) flatten(e, shape, depth + 1, field, out);
}

json nest(const std::vector<double>& flat, const std::vector<std::size_t>& shape, std::size_t depth,
          std::size_t& pos) {
  if (depth == shape.size()) return flat[pos++];
  json arr = json::array();
  for (std::size_t i = 0; i < shape[depth]; ++i) arr.push_back(nest(flat, shape, depth + 1, pos));
  return arr;
}

// Coefficients on single-span degree-p bases of a map that is affine in every variable:
// the control value at a Greville point equals the map there.
GeometryMap multiaffine(int degree, const std::function<std::array<double, 3>(double, double, double)>& g) {
  if (degree < 1) throw ValidationError("built-in geometry: degree must be at least 1");
  const UnivariateSpline s = UnivariateSpline::bernstein(degree);
  const std::vector<double> gr = greville_abscissae(s);
  std::vector<double> cp;
  for (double x : gr)
    for (double y : gr)
      for (double z : gr) {
        const auto v = g(x, y, z);
        cp.insert(cp.end(), v.begin(), v.end());
      }
  return GeometryMap(TensorSpace({s, s, s}), std::move(cp));
}

}  // namespace

GeometryMap parse_geometry_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("geometry file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("geometry file: top level must be an object");
  const json& dim = require(j, "dimension");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) fail("dimension", "expected a positive integer");
  const auto D = dim.get<std::size_t>();

  const json& degrees = require(j, "degrees");
  if (!degrees.is_array() || degrees.size() != D) fail("degrees", "expected " + std::to_string(D) + " integers");
  const json& knots = require(j, "knots");
  if (!knots.is_array() || knots.size() != D) fail("knots", "expected " + std::to_string(D) + " knot vectors");

  std::vector<UnivariateSpline> factors;
  for (std::size_t d = 0; d < D; ++d) {
    const std::string kf = "knots[" + std::to_string(d) + "]";
    if (!degrees[d].is_number_integer() || degrees[d].get<long long>() < 0) {
      fail("degrees[" + std::to_string(d) + "]", "expected a nonnegative integer");
    }
    if (!knots[d].is_array()) fail(kf, "expected an array");
    std::vector<double> kv;
    for (const auto& k : knots[d]) kv.push_back(number(k, kf));
    try {
      factors.emplace_back(std::move(kv), degrees[d].get<int>());
    } catch (const ValidationError& e) {
      fail(kf, e.what());
    }
  }
  TensorSpace space(std::move(factors));
  std::vector<std::size_t> shape = space.dims();

  std::vector<double> weights_flat;
  std::optional<std::vector<double>> weights;
  if (j.contains("weights") && !j.at("weights").is_null()) {
    flatten(j.at("weights"), shape, 0, "weights", weights_flat);
    for (double w : weights_flat)
      if (!(w > 0.0)) fail("weights", "weights must be positive");
    weights = std::move(weights_flat);
  }
  shape.push_back(D);
  std::vector<double> cp;
  flatten(require(j, "control_points"), shape, 0, "control_points", cp);
  return GeometryMap(std::move(space), std::move(cp), std::move(weights));
}

GeometryMap parse_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("geometry file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_geometry_json(ss.str());
}

std::string geometry_to_json(const GeometryMap& geo) {
  json j;
  const std::size_t D = geo.dimension();
  j["dimension"] = D;
  json degrees = json::array();
  json knots = json::array();
  for (const auto& f : geo.space().factors()) {
    degrees.push_back(f.degree());
    knots.push_back(f.knots().values());
  }
  j["degrees"] = degrees;
  j["knots"] = knots;
  std::vector<std::size_t> shape = geo.space().dims();
  if (geo.weights()) {
    std::size_t pos = 0;
    j["weights"] = nest(*geo.weights(), shape, 0, pos);
  }
  shape.push_back(D);
  std::size_t pos = 0;
  j["control_points"] = nest(geo.control_points(), shape, 0, pos);
  return j.dump(2);
}

void write_geometry(const std::filesystem::path& path, const GeometryMap& geo) {
  std::ofstream out(path);
  if (!out) throw ValidationError("geometry file: cannot open " + path.string() + " for writing");
  out << geometry_to_json(geo) << '\n';
}

GeometryMap unit_cube(int degree) {
  return multiaffine(degree, [](double x, double y, double z) { return std::array<double, 3>{x, y, z}; });
}

GeometryMap twisted_cuboid(int degree) {
  return multiaffine(degree, [](double x, double y, double z) {
    const double X = 2.0 * x;
    const double Y = y - 0.5;
    const double Z = z - 0.5;
    const double a = kTwistAlpha * x;
    return std::array<double, 3>{X + kTwistKappa * Y * Z, Y - a * Z + 0.5, Z + a * Y + 0.5};
  });
}

GeometryMap quarter_annulus_3d(int degree) {
  if (degree < 2) throw ValidationError("quarter_annulus_3d: degree must be at least 2");
  // homogeneous arc (w x, w y, w), elevated from degree 2 to p
  const double h = std::sqrt(0.5);
  std::vector<std::array<double, 3>> arc{{1.0, 0.0, 1.0}, {h, h, h}, {0.0, 1.0, 1.0}};
  for (int k = 2; k < degree; ++k) {
    std::vector<std::array<double, 3>> up(arc.size() + 1);
    const double kp1 = static_cast<double>(k + 1);
    for (std::size_t i = 0; i < up.size(); ++i) {
      const double t = static_cast<double>(i) / kp1;
      for (std::size_t c = 0; c < 3; ++c) {
        const double lo = i > 0 ? arc[i - 1][c] : 0.0;
        const double hi = i < arc.size() ? arc[i][c] : 0.0;
        up[i][c] = t * lo + (1.0 - t) * hi;
      }
    }
    arc = std::move(up);
  }
  const UnivariateSpline s = UnivariateSpline::bernstein(degree);
  const std::vector<double> gr = greville_abscissae(s);
  std::vector<double> cp;
  std::vector<double> w;
  for (double r : gr)
    for (const auto& a : arc)
      for (double z : gr) {
        const double rho = 1.0 + r;
        cp.push_back(rho * a[0] / a[2]);
        cp.push_back(rho * a[1] / a[2]);
        cp.push_back(z);
        w.push_back(a[2]);
      }
  return GeometryMap(TensorSpace({s, s, s}), std::move(cp), std::move(w));
}

const std::vector<std::string>& builtin_geometry_names() {
  static const std::vector<std::string> names{"unit_cube", "quarter_annulus_3d", "twisted_cuboid"};
  return names;
}

GeometryMap builtin_geometry(std::string_view name, int degree) {
  if (name == "unit_cube") return unit_cube(degree);
  if (name == "quarter_annulus_3d") return quarter_annulus_3d(degree);
  if (name == "twisted_cuboid") return twisted_cuboid(degree);
  throw ValidationError("unknown built-in geometry '" + std::string(name) + "'");
}

}  // namespace lriga
