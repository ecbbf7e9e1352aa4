#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ltp/curvature.hpp"
#include "ltp/derivation.hpp"
#include "ltp/holonomy.hpp"
#include "ltp/identities.hpp"
#include "ltp/models.hpp"
#include "oracles.hpp"

using namespace ltp;

namespace {

double random_int(std::uint64_t& state) { return std::floor(oracle::uniform(state, -9.0, 10.0)); }

IndexedValues<double> random_int_table(int arity, int k, std::uint64_t seed) {
  IndexedValues<double> table(arity);
  std::uint64_t state = oracle::seed_state(seed);
  std::vector<int> idx(arity, 0);
  while (true) {
    table.set(idx, random_int(state));
    int pos = arity - 1;
    while (pos >= 0 && ++idx[pos] == k) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return table;
}

}  // namespace

TEST_SUITE("identities") {

TEST_CASE("two-point combinators cancel exactly on integer tables") {
  std::uint64_t state = oracle::seed_state(3);
  IndexedValues<double> sym(2);
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const double r = random_int(state);
      sym.set({a, b}, r);
      sym.set({b, a}, r);
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(antisym2(sym, a, b) == 0.0);
    }
  }

  const auto table = random_int_table(2, 3, 4);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(antisym2(table, a, b) + antisym2(table, b, a) == 0.0);
      CHECK(cyclic2(table, a, b) == table.at({a, b}) + table.at({b, a}));
    }
  }
}

TEST_CASE("three-point combinators match their hand sums") {
  IndexedValues<double> delta(3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        delta.set({a, b, c}, a == 0 ? 1.0 : 0.0);
      }
    }
  }
  CHECK(cyclic3(delta, 0, 1, 2) == 1.0);
  CHECK(cyclic3(delta, 1, 2, 0) == 1.0);
  CHECK(cyclic3(delta, 2, 2, 2) == 0.0);

  const auto table = random_int_table(3, 3, 9);
  const double manual = table.at({0, 1, 2}) - table.at({1, 2, 0}) - table.at({0, 2, 1}) +
                        table.at({2, 1, 0});
  CHECK(nested3(table, 0, 1, 2) == manual);
  const double signed_sum = table.at({0, 1, 2}) + table.at({1, 2, 0}) + table.at({2, 0, 1}) -
                            table.at({0, 2, 1}) - table.at({2, 1, 0}) - table.at({1, 0, 2});
  CHECK(antisym3(table, 0, 1, 2) == signed_sum);
}

TEST_CASE("cyclic sums of nested brackets vanish exactly") {
  for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto t3 = random_int_table(3, 3, seed);
    CHECK(nested3(t3, 0, 1, 2) + nested3(t3, 1, 2, 0) + nested3(t3, 2, 0, 1) == 0.0);

    const auto t4 = random_int_table(4, 4, seed + 100);
    auto grand = [&t4](int a, int b, int c, int d) {
      return nested4(t4, a, b, c, d) + nested4(t4, a, d, c, b);
    };
    CHECK(grand(0, 1, 2, 3) + grand(1, 2, 3, 0) + grand(2, 3, 0, 1) + grand(3, 0, 1, 2) == 0.0);
  }
}

TEST_CASE("cyclization halves the bracket on antisymmetric tables") {
  std::uint64_t state = oracle::seed_state(21);
  IndexedValues<double> table(3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = b; c < 3; ++c) {
        const double r = (b == c) ? 0.0 : random_int(state);
        table.set({a, b, c}, r);
        table.set({a, c, b}, -r);
      }
    }
  }
  CHECK(antisym3(table, 0, 1, 2) == 2.0 * cyclic3(table, 0, 1, 2));
  CHECK(antisym3(table, 2, 0, 1) == 2.0 * cyclic3(table, 2, 0, 1));
  CHECK(antisym3(table, 1, 0, 2) == 2.0 * cyclic3(table, 1, 0, 2));

  const auto setup = models::make_model("sphere");
  const MultiFamily mf = setup.make_chart_bundle(3).with_basepoint({0.1, -0.05, 0.04});
  Vec v(2);
  v << 0.4, -0.9;
  IndexedValues<Vec> geo(3);
  for (int a = 0; a < 3; ++a) {
    const Mat gamma_a = setup.provider.coeff(mf.axis_path(a), mf.basepoint()[a]);
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        if (b == c) continue;
        const Mat r_bc = curvature_matrix(setup.provider, extract_pair_family(mf, b, c),
                                          mf.basepoint()[b], mf.basepoint()[c]);
        geo.set({a, b, c}, Vec(gamma_a * (r_bc * v)));
      }
    }
  }
  CHECK((antisym3(geo, 0, 1, 2) - 2.0 * cyclic3(geo, 0, 1, 2)).norm() <= 1e-10);
}

TEST_CASE("missing tuples are reported by name") {
  IndexedValues<double> table(2);
  table.set({0, 1}, 1.0);
  CHECK_THROWS_WITH_AS(table.at({1, 0}), "no value stored for index tuple (1, 0)",
                       std::invalid_argument);
  CHECK_THROWS_AS(table.at({0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(table.set({0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(IndexedValues<double>(1), std::invalid_argument);
  CHECK_THROWS_AS(IndexedValues<double>(5), std::invalid_argument);
}

TEST_CASE("commutator cycle cancels for any matrix table") {
  std::uint64_t state = oracle::seed_state(33);
  IndexedValues<Mat> table(2);
  for (const auto& [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}}) {
    Mat r(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) r(i, j) = oracle::uniform(state, -1.0, 1.0);
    }
    table.set({a, b}, r);
    table.set({b, a}, Mat(-r));
  }
  CHECK(commutator_cycle4(table, 0, 1, 2, 3).norm() <= 1e-13);
}

TEST_CASE("exchange antisymmetry holds across the model zoo") {
  std::uint64_t state = oracle::seed_state(11);
  for (const std::string& name : models::model_names()) {
    CAPTURE(name);
    const auto setup = models::make_model(name);
    const MultiFamily mf = setup.make_chart_bundle(3);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> base(3);
      for (auto& x : base) x = oracle::uniform(state, -0.2, 0.2);
      const MultiFamily shifted = mf.with_basepoint(base);
      const auto [residual_r, residual_t] = check_antisymmetry(setup.provider, shifted, 0, 1);
      CHECK(residual_r <= 1e-10);
      CHECK(residual_t <= 1e-10);
      const auto [r2, t2] = check_antisymmetry(setup.provider, shifted, 1, 2);
      CHECK(r2 <= 1e-10);
      CHECK(t2 <= 1e-10);
    }
  }
}

TEST_CASE("second identity residual vanishes at quadratic rate") {
  const auto sphere = models::make_model("sphere");
  // Off the bundle centre: at theta = pi/2 every coefficient vanishes and the
  // curvature is stationary, so all terms cancel exactly there.
  const MultiFamily mf = sphere.make_chart_bundle(3).with_basepoint({0.1, -0.05, 0.04});
  Vec v(2);
  v << 0.7, -0.4;
  CHECK(check_bianchi_second(sphere.provider, mf, v, 1e-3) <= 1e-4);
  CHECK(check_bianchi_second(sphere.provider, mf, v, 1e-3, 0, 2, 1) <= 1e-4);

  std::vector<std::pair<double, double>> samples;
  for (const double fd : {4e-3, 2e-3, 1e-3, 5e-4}) {
    samples.emplace_back(fd, check_bianchi_second(sphere.provider, mf, v, fd));
  }
  const OrderFit fit = convergence_order(samples);
  CHECK(!fit.at_floor);
  CHECK(fit.slope >= 1.7);
  CHECK(fit.slope <= 2.3);

  const auto flat = models::make_model("flat");
  CHECK(check_bianchi_second(flat.provider, flat.make_chart_bundle(3), v, 1e-3) <= 1e-12);
  const auto constant = models::make_model("constant");
  CHECK(check_bianchi_second(constant.provider, constant.make_chart_bundle(3), v, 1e-3) <= 1e-10);

  CHECK_THROWS_AS(check_bianchi_second(sphere.provider, mf, v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(check_bianchi_second(sphere.provider, mf, v, 1e-3, 0, 1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_bianchi_second(sphere.provider, mf, v, 1e-3, 0, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_bianchi_second(sphere.provider, mf, Vec(Vec::Zero(3)), 1e-3),
                  std::invalid_argument);
  Mat d2 = Mat::Identity(2, 2);
  const MultiFamily two_param = models::affine_chart_family(sphere.basepoint, d2, 0.25);
  CHECK_THROWS_AS(check_bianchi_second(sphere.provider, two_param, v, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("curvature and torsion sides of the first identity") {
  const auto sphere = models::make_model("sphere");
  const MultiFamily mf = sphere.make_chart_bundle(3).with_basepoint({0.1, -0.05, 0.04});
  const auto sides = check_bianchi_first(sphere.provider, mf, 1e-3);
  CHECK(sides.rhs.norm() <= 1e-9);
  CHECK(sides.residual <= 1e-4);

  // The chart coefficients depend on theta alone and the connection is
  // symmetric, so the discrete fd^2 errors of the pair curvatures satisfy the
  // cyclic identity exactly: the residual sits at the roundoff floor at every
  // step.  The quadratic decay is only required where the floor is not
  // already reached.
  std::vector<std::pair<double, double>> samples;
  for (const double fd : {4e-3, 2e-3, 1e-3, 5e-4}) {
    const double residual = check_bianchi_first(sphere.provider, mf, fd).residual;
    CHECK(residual <= 1e-10);
    samples.emplace_back(fd, residual);
  }
  const OrderFit fit = convergence_order(samples);
  CHECK((fit.at_floor || (fit.slope >= 1.7 && fit.slope <= 2.3)));

  const auto plane = models::make_model("torsion_plane");
  const auto plane_sides = check_bianchi_first(plane.provider, plane.make_chart_bundle(3), 1e-3);
  CHECK(plane_sides.lhs.norm() <= 1e-6);
  CHECK(plane_sides.rhs.norm() <= 1e-6);
  CHECK(plane_sides.residual <= 1e-6);

  const auto flat = models::make_model("flat");
  const auto flat_sides = check_bianchi_first(flat.provider, flat.make_chart_bundle(3), 1e-3);
  CHECK(flat_sides.lhs.norm() <= 1e-12);
  CHECK(flat_sides.rhs.norm() <= 1e-12);

  const auto tall = models::make_flat(3, 2);
  CHECK_THROWS_WITH_AS(
      check_bianchi_first(tall, mf, 1e-3),
      "first-identity check requires a tangent-bundle chart (fibre_dim == base_dim)",
      std::invalid_argument);
}

TEST_CASE("four-point commutator sum cancels on chart bundles") {
  const auto sphere = models::make_model("sphere");
  const MultiFamily mf4 = sphere.make_chart_bundle(4);
  Vec v(2);
  v << 0.3, 0.9;
  CHECK(check_four_point(sphere.provider, mf4, v) <= 1e-8);

  const auto flat = models::make_model("flat");
  CHECK(check_four_point(flat.provider, flat.make_chart_bundle(4), v) <= 1e-15);

  const MultiFamily mf3 = sphere.make_chart_bundle(3);
  CHECK_THROWS_AS(check_four_point(sphere.provider, mf3, v), std::invalid_argument);
}

TEST_CASE("matrix-field and operator forms of the curvature derivation agree") {
  const auto sphere = models::make_model("sphere");
  const MultiFamily mf = sphere.make_chart_bundle(3);
  Vec v(2);
  v << 0.5, 0.8;
  const double fd = 1e-3;
  const double sigma0 = mf.basepoint()[0];

  auto r_12 = [&](double sigma) -> Mat {
    std::vector<double> base = mf.basepoint();
    base[0] = sigma;
    const MultiFamily shifted = mf.with_basepoint(base);
    return curvature_matrix(sphere.provider, extract_pair_family(shifted, 1, 2),
                            shifted.basepoint()[1], shifted.basepoint()[2], fd);
  };
  const Mat gamma_0 = sphere.provider.coeff(mf.axis_path(0), sigma0);
  const Mat d_r = (r_12(sigma0 + fd) - r_12(sigma0 - fd)) / (2.0 * fd);
  const Vec field_term = (d_r + gamma_0 * r_12(sigma0) - r_12(sigma0) * gamma_0) * v;

  const Section composite([&](double sigma) -> Vec { return r_12(sigma) * v; });
  const Vec d_composite = derive_section(sphere.provider, mf.axis_path(0), composite, sigma0);
  const Vec operator_term = d_composite - r_12(sigma0) * (gamma_0 * v);

  CHECK((field_term - operator_term).norm() <= 1e-5);
}

}  // TEST_SUITE
