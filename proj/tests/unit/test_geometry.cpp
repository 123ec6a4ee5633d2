#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lriga/errors.hpp"
#include "lriga/geometry.hpp"
#include "lriga/geometry_io.hpp"
#include "lriga/quadrature.hpp"

namespace {

std::vector<std::array<double, 3>> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts)
    for (double& x : p) x = u(rng);
  return pts;
}

Eigen::MatrixXd fd_jacobian(const lriga::GeometryMap& g, std::array<double, 3> x) {
  const double h = 1e-6;
  Eigen::MatrixXd j(3, 3);
  for (int d = 0; d < 3; ++d) {
    auto xp = x;
    auto xm = x;
    xp[static_cast<std::size_t>(d)] = std::min(1.0, x[static_cast<std::size_t>(d)] + h);
    xm[static_cast<std::size_t>(d)] = std::max(0.0, x[static_cast<std::size_t>(d)] - h);
    j.col(d) = (g.eval(xp) - g.eval(xm)) / (xp[static_cast<std::size_t>(d)] - xm[static_cast<std::size_t>(d)]);
  }
  return j;
}

double volume(const lriga::GeometryMap& g, int m) {
  const auto rule = lriga::gauss_legendre(m);
  double v = 0.0;
  for (std::size_t a = 0; a < rule.size(); ++a)
    for (std::size_t b = 0; b < rule.size(); ++b)
      for (std::size_t c = 0; c < rule.size(); ++c) {
        const std::array<double, 3> x{rule.nodes[a], rule.nodes[b], rule.nodes[c]};
        v += rule.weights[a] * rule.weights[b] * rule.weights[c] * g.omega(x);
      }
  return v;
}

}  // namespace

TEST(TensorSpace, FlatIndexIsRowMajor) {
  const lriga::TensorSpace s({lriga::UnivariateSpline::bernstein(1), lriga::UnivariateSpline::bernstein(2),
                              lriga::UnivariateSpline::bernstein(3)});
  EXPECT_EQ(s.total_size(), 24u);
  const std::array<std::size_t, 3> m{1, 2, 3};
  EXPECT_EQ(s.flat_index(m), 1u * 12 + 2u * 4 + 3u);
}

TEST(UnitCube, IsTheIdentity) {
  for (int p : {1, 2, 3}) {
    const auto g = lriga::unit_cube(p);
    for (const auto& x : random_points(20, 1)) {
      const Eigen::VectorXd v = g.eval(x);
      for (int d = 0; d < 3; ++d) EXPECT_NEAR(v(d), x[static_cast<std::size_t>(d)], 1e-14);
      EXPECT_NEAR(g.omega(x), 1.0, 1e-13);
      EXPECT_NEAR((g.q(x) - Eigen::MatrixXd::Identity(3, 3)).norm(), 0.0, 1e-13);
    }
  }
}

TEST(QuarterAnnulus, CornerAndRadius) {
  const auto g = lriga::quarter_annulus_3d(2);
  const std::array<double, 3> o{0, 0, 0};
  const Eigen::VectorXd v0 = g.eval(o);
  EXPECT_NEAR(v0(0), 1.0, 1e-15);
  EXPECT_NEAR(v0(1), 0.0, 1e-15);
  EXPECT_NEAR(v0(2), 0.0, 1e-15);
  const std::array<double, 3> top{1, 1, 1};
  const Eigen::VectorXd v1 = g.eval(top);
  EXPECT_NEAR(v1(0), 0.0, 1e-14);
  EXPECT_NEAR(v1(1), 2.0, 1e-14);
  EXPECT_NEAR(v1(2), 1.0, 1e-14);
  for (const auto& x : random_points(50, 2)) {
    const Eigen::VectorXd v = g.eval(x);
    EXPECT_NEAR(std::hypot(v(0), v(1)), 1.0 + x[0], 1e-14);
    EXPECT_NEAR(v(2), x[2], 1e-14);
    EXPECT_GE(v(0), -1e-15);
    EXPECT_GE(v(1), -1e-15);
  }
}

TEST(QuarterAnnulus, DegreeElevationKeepsTheMap) {
  const auto g2 = lriga::quarter_annulus_3d(2);
  const auto g4 = lriga::quarter_annulus_3d(4);
  for (const auto& x : random_points(30, 3)) {
    EXPECT_NEAR((g2.eval(x) - g4.eval(x)).norm(), 0.0, 1e-13);
    EXPECT_NEAR(g2.omega(x), g4.omega(x), 1e-12);
  }
  EXPECT_THROW((void)lriga::quarter_annulus_3d(1), lriga::ValidationError);
}

TEST(QuarterAnnulus, VolumeIsThreeQuarterPi) {
  EXPECT_NEAR(volume(lriga::quarter_annulus_3d(2), 12), 3.0 * std::numbers::pi / 4.0, 1e-10);
}

TEST(TwistedCuboid, MatchesClosedForm) {
  const auto g = lriga::twisted_cuboid(2);
  for (const auto& x : random_points(30, 4)) {
    const double X = 2.0 * x[0];
    const double Y = x[1] - 0.5;
    const double Z = x[2] - 0.5;
    const double a = lriga::kTwistAlpha * x[0];
    const Eigen::VectorXd v = g.eval(x);
    EXPECT_NEAR(v(0), X + lriga::kTwistKappa * Y * Z, 1e-14);
    EXPECT_NEAR(v(1), Y - a * Z + 0.5, 1e-14);
    EXPECT_NEAR(v(2), Z + a * Y + 0.5, 1e-14);
  }
}

TEST(GeometryMap, JacobianMatchesFiniteDifferences) {
  for (const auto& name : lriga::builtin_geometry_names()) {
    const auto g = lriga::builtin_geometry(name, 2);
    for (const auto& x : random_points(10, 5)) EXPECT_NEAR((g.jacobian(x) - fd_jacobian(g, x)).norm(), 0.0, 1e-7) << name;
  }
}

TEST(GeometryMap, QTimesMetricIsOmegaIdentity) {
  for (const auto& name : lriga::builtin_geometry_names()) {
    const auto g = lriga::builtin_geometry(name, 2);
    for (const auto& x : random_points(10, 6)) {
      const Eigen::MatrixXd j = g.jacobian(x);
      const Eigen::MatrixXd lhs = g.q(x) * (j.transpose() * j);
      EXPECT_NEAR((lhs - g.omega(x) * Eigen::MatrixXd::Identity(3, 3)).norm(), 0.0, 1e-12) << name;
      EXPECT_NEAR(g.omega(x), std::abs(j.determinant()), 1e-13) << name;
    }
  }
}

TEST(GeometryMap, RefinementKeepsTheMap) {
  for (const auto& name : lriga::builtin_geometry_names()) {
    const auto g = lriga::builtin_geometry(name, 2);
    const auto f = g.refined(3);
    EXPECT_EQ(f.space().factor(0).size(), 6u);
    for (const auto& x : random_points(10, 7)) EXPECT_NEAR((g.eval(x) - f.eval(x)).norm(), 0.0, 1e-13) << name;
  }
}

TEST(GeometryMap, SingularJacobianCarriesThePoint) {
  // Collapse the last control coordinate: G_3 == 0.
  const auto cube = lriga::unit_cube(1);
  auto cp = cube.control_points();
  for (std::size_t i = 2; i < cp.size(); i += 3) cp[i] = 0.0;
  const lriga::GeometryMap flat(cube.space(), cp);
  const std::array<double, 3> x{0.25, 0.5, 0.75};
  try {
    (void)flat.q(x);
    FAIL() << "expected SingularJacobianError";
  } catch (const lriga::SingularJacobianError& e) {
    ASSERT_EQ(e.point().size(), 3u);
    EXPECT_DOUBLE_EQ(e.point()[0], 0.25);
    EXPECT_DOUBLE_EQ(e.point()[2], 0.75);
  }
}

TEST(GeometryMap, RejectsBadInput) {
  const auto cube = lriga::unit_cube(1);
  auto cp = cube.control_points();
  cp.pop_back();
  EXPECT_THROW(lriga::GeometryMap(cube.space(), cp), lriga::ValidationError);
  std::vector<double> w(8, 1.0);
  w[3] = -1.0;
  EXPECT_THROW(lriga::GeometryMap(cube.space(), cube.control_points(), w), lriga::ValidationError);
  const std::array<double, 3> out{0.5, 1.2, 0.5};
  EXPECT_THROW((void)cube.eval(out), lriga::DomainError);
}

TEST(GeometryJson, RoundTrip) {
  for (const auto& name : lriga::builtin_geometry_names()) {
    const auto g = lriga::builtin_geometry(name, 3);
    const auto back = lriga::parse_geometry_json(lriga::geometry_to_json(g));
    EXPECT_EQ(back.space(), g.space());
    EXPECT_EQ(back.control_points(), g.control_points());
    EXPECT_EQ(back.weights(), g.weights());
  }
}

TEST(GeometryJson, ReportsTheOffendingField) {
  auto expect_field = [](const char* text, const char* field) {
    try {
      (void)lriga::parse_geometry_json(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const lriga::ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  expect_field("{not json", "geometry");
  expect_field(R"({"degrees": [1,1,1], "knots": [[0,0,1,1],[0,0,1,1],[0,0,1,1]], "control_points": []})", "dimension");
  expect_field(R"({"dimension": 3, "degrees": [1,1], "knots": [[0,0,1,1],[0,0,1,1],[0,0,1,1]], "control_points": []})",
               "degrees");
  expect_field(R"({"dimension": 3, "degrees": [1,1,1], "knots": [[0,0,1,1],[0,0,1,1],[0,1,1]], "control_points": []})",
               "knots");
  expect_field(R"({"dimension": 3, "degrees": [1,1,1], "knots": [[0,0,1,1],[0,0,1,1],[0,0,1,1]], "control_points": [1,2]})",
               "control_points");
}

TEST(BuiltinGeometry, UnknownNameThrows) {
  EXPECT_THROW((void)lriga::builtin_geometry("torus", 2), lriga::ValidationError);
  EXPECT_EQ(lriga::builtin_geometry_names().size(), 3u);
}
