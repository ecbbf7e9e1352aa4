#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ltp/flatness.hpp"
#include "ltp/models.hpp"
#include "ltp/transport.hpp"
#include "oracles.hpp"

using namespace ltp;

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

RegionGrid grid_for(const models::ModelSetup& m, int nx = 3, int ny = 3) {
  return RegionGrid(m.region_lo, m.region_hi, nx, ny);
}

}  // namespace

TEST_CASE("region grids sample an inclusive lattice") {
  RegionGrid grid(pt(-1.0, 0.0), pt(1.0, 4.0), 3, 5);
  CHECK(grid.node_count() == 15);
  CHECK((grid.node(0, 0) - pt(-1.0, 0.0)).norm() == 0.0);
  CHECK((grid.node(2, 4) - pt(1.0, 4.0)).norm() == 0.0);
  CHECK((grid.node(1, 2) - pt(0.0, 2.0)).norm() <= 1e-15);
  CHECK((grid.center() - pt(0.0, 2.0)).norm() <= 1e-15);
  CHECK(grid.nodes().size() == 15);

  CHECK_THROWS_AS(RegionGrid(pt(1.0, 0.0), pt(-1.0, 4.0), 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(RegionGrid(pt(-1.0, 0.0), pt(1.0, 4.0), 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(RegionGrid(pt(-1.0, 0.0), pt(1.0, 4.0), 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(RegionGrid(Vec::Zero(3), Vec::Ones(3), 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(grid.node(3, 0), std::invalid_argument);
}

TEST_CASE("route catalogues share endpoints and bend axis by axis") {
  Vec from = pt(-1.0, -1.0);
  Vec to = pt(1.0, 0.5);
  std::vector<Path> routes = route_catalogue(from, to);
  REQUIRE(routes.size() == 3);
  CHECK(routes[0].label() == "segment");
  CHECK(routes[1].label() == "polyline");
  CHECK(routes[2].label() == "arc");
  for (const Path& route : routes) {
    CHECK((route.point(route.domain().a) - from).norm() <= 1e-12);
    CHECK((route.point(route.domain().b) - to).norm() <= 1e-12);
  }
  CHECK(routes[1].leg_count() == 2);
  CHECK((routes[1].point(1.0) - pt(1.0, -1.0)).norm() <= 1e-12);

  std::vector<Path> aligned = route_catalogue(pt(0.0, 0.0), pt(0.0, 1.0));
  CHECK(aligned[1].leg_count() == 1);

  CHECK_THROWS_AS(route_catalogue(from, from), std::invalid_argument);
}

TEST_CASE("transports along different routes agree on flat models") {
  models::ModelSetup flat = models::make_model("flat");
  std::vector<Path> flat_routes = route_catalogue(pt(0.0, 0.0), pt(1.0, 0.0));
  CHECK(path_independence_defect(flat.provider, flat_routes[0], flat_routes[2]) <= 1e-10);

  models::ModelSetup tp = models::make_model("torsion_plane");
  std::vector<Path> tp_routes = route_catalogue(pt(-0.5, -0.5), pt(0.5, 0.8));
  CHECK(path_independence_defect(tp.provider, tp_routes[0], tp_routes[1]) <= 1e-9);
  CHECK(path_independence_defect(tp.provider, tp_routes[0], tp_routes[2]) <= 1e-9);
}

TEST_CASE("reparametrizing a route does not change its transport") {
  models::ModelSetup sphere = models::make_model("sphere");
  Path arc = Path::quadratic_arc(pt(1.0, 0.2), pt(1.6, 0.9), pt(2.0, 0.8));

  Path affine = arc.reparametrized(-1.0, 3.0);
  CHECK(path_independence_defect(sphere.provider, arc, affine, 4000) <= 1e-8);

  const double scale = std::expm1(1.0);
  auto phi = [scale](double u) { return std::expm1(u) / scale; };
  auto dphi = [scale](double u) { return std::exp(u) / scale; };
  Path smooth(
      Interval{0.0, 1.0}, [arc, phi](double u) { return arc.point(phi(u)); },
      [arc, phi, dphi](double u) { return Vec(arc.velocity(phi(u)) * dphi(u)); },
      "smooth reparam");
  CHECK(path_independence_defect(sphere.provider, arc, smooth, 4000) <= 1e-8);
}

TEST_CASE("endpoint mismatches are rejected with both offending points") {
  models::ModelSetup flat = models::make_model("flat");
  Path a = Path::segment(pt(0.0, 0.0), pt(1.0, 0.0));
  Path b = Path::segment(pt(0.0, 0.0), pt(1.0, 0.5));
  Path c = Path::segment(pt(0.25, 0.0), pt(1.0, 0.0));

  try {
    path_independence_defect(flat.provider, a, b);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& err) {
    std::string msg = err.what();
    CHECK(msg.find("(1, 0)") != std::string::npos);
    CHECK(msg.find("(1, 0.5)") != std::string::npos);
  }
  try {
    path_independence_defect(flat.provider, a, c);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& err) {
    std::string msg = err.what();
    CHECK(msg.find("start") != std::string::npos);
    CHECK(msg.find("(0.25, 0)") != std::string::npos);
  }
}

TEST_CASE("the sphere connection transports depend on the route") {
  models::ModelSetup sphere = models::make_model("sphere");
  Path route_a = Path::polyline({pt(1.0, 0.0), pt(1.5, 0.0), pt(1.5, 1.0)});
  Path route_b = Path::polyline({pt(1.0, 0.0), pt(1.0, 1.0), pt(1.5, 1.0)});

  double defect = path_independence_defect(sphere.provider, route_a, route_b);
  CHECK(defect >= 1e-3);

  Mat ha = oracle::sphere_parallel_circle_transport(1.5, 0.0, 1.0) *
           oracle::sphere_meridian_transport(1.0, 1.5);
  Mat hb = oracle::sphere_meridian_transport(1.0, 1.5) *
           oracle::sphere_parallel_circle_transport(1.0, 0.0, 1.0);
  CHECK(defect == doctest::Approx((ha - hb).norm()).epsilon(1e-6));
}

TEST_CASE("flatness verdicts separate the model zoo") {
  for (const char* name : {"flat", "torsion_plane"}) {
    models::ModelSetup m = models::make_model(name);
    FlatnessVerdict v = flatness_verdict(m.provider, grid_for(m));
    CAPTURE(name);
    CHECK(v.curvature_sup <= 1e-8);
    CHECK(v.max_defect <= 1e-7);
    CHECK(v.flat_by_curvature);
    CHECK(v.flat_by_transport);
    CHECK(v.consistent);
  }

  models::ModelSetup sphere = models::make_model("sphere");
  FlatnessVerdict sv = flatness_verdict(sphere.provider, grid_for(sphere));
  CHECK(sv.curvature_sup >= 0.9);
  CHECK(sv.curvature_sup <= 2.0);
  CHECK(sv.max_defect >= 1e-3);
  CHECK_FALSE(sv.flat_by_curvature);
  CHECK_FALSE(sv.flat_by_transport);
  CHECK(sv.consistent);
  CHECK(!sv.worst_pair.empty());

  // Parameter-dependent path functionals: curvature-free yet route-dependent,
  // so the two criteria disagree and the verdict records it without raising.
  for (const char* name : {"constant", "frame"}) {
    models::ModelSetup m = models::make_model(name);
    REQUIRE(!m.provider.is_connection_induced());
    FlatnessVerdict v = flatness_verdict(m.provider, grid_for(m));
    CAPTURE(name);
    CHECK(v.curvature_sup <= 1e-10);
    CHECK(v.max_defect >= 1e-2);
    CHECK(v.flat_by_curvature);
    CHECK_FALSE(v.flat_by_transport);
    CHECK_FALSE(v.consistent);
  }

  CHECK_THROWS_AS(flatness_verdict(sphere.provider, grid_for(sphere), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(flatness_verdict(sphere.provider, grid_for(sphere), 1e-8, 1e-7, 0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("a flat frame reduces transports to the identity") {
  models::ModelSetup tp = models::make_model("torsion_plane");
  RegionGrid grid = grid_for(tp);
  FrameField frame =
      construct_flat_frame(tp.provider, grid, tp.basepoint, Mat::Identity(2, 2));

  CHECK((frame.basis_at(tp.basepoint) - Mat::Identity(2, 2)).norm() == 0.0);

  std::vector<Vec> nodes = grid.nodes();
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      Path direct = Path::segment(nodes[i], nodes[j]);
      Mat h = transport_matrix(tp.provider, direct, 0.0, 1.0, 1000).value;
      Mat in_frame =
          frame.basis_at(nodes[j]).partialPivLu().solve(h * frame.basis_at(nodes[i]));
      CHECK((in_frame - Mat::Identity(2, 2)).norm() <= 1e-7);
    }
  }
}

TEST_CASE("flat frames start from the seed basis") {
  models::ModelSetup flat = models::make_model("flat");
  RegionGrid grid = grid_for(flat);
  Mat seed(2, 2);
  seed << 2.0, 1.0, 0.0, 1.0;
  FrameField frame = construct_flat_frame(flat.provider, grid, flat.basepoint, seed);
  for (const Vec& x : grid.nodes()) CHECK((frame.basis_at(x) - seed).norm() <= 1e-12);
}

TEST_CASE("path-dependent transports fail the frame spot-check") {
  models::ModelSetup constant = models::make_model("constant");
  RegionGrid grid = grid_for(constant);
  Mat g = oracle::rotation_generator();

  try {
    construct_flat_frame(constant.provider, grid, constant.basepoint, Mat::Identity(2, 2));
    FAIL("expected not_flat_error");
  } catch (const not_flat_error& err) {
    double expected = (oracle::expm(-g) - oracle::expm(-2.0 * g)).norm();
    CHECK(std::abs(err.defect - expected) <= 1e-9);
    CHECK(std::string(err.what()).find("path-dependent") != std::string::npos);
  }

  models::ModelSetup sphere = models::make_model("sphere");
  CHECK_THROWS_AS(construct_flat_frame(sphere.provider, grid_for(sphere), sphere.basepoint,
                                       Mat::Identity(2, 2)),
                  not_flat_error);
}

TEST_CASE("frame construction validates the seed basis") {
  models::ModelSetup flat = models::make_model("flat");
  RegionGrid grid = grid_for(flat);
  CHECK_THROWS_AS(
      construct_flat_frame(flat.provider, grid, flat.basepoint, Mat::Identity(3, 3)),
      std::invalid_argument);
  Mat singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(construct_flat_frame(flat.provider, grid, flat.basepoint, singular),
                  numeric_error);
  CHECK_THROWS_AS(construct_flat_frame(flat.provider, grid, flat.basepoint,
                                       Mat::Identity(2, 2), 0, -1.0),
                  std::invalid_argument);
}
