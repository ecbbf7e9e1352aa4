#include "ltp/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "ltp/fd.hpp"

namespace ltp::models {

namespace {

constexpr double kPi = 3.141592653589793;

Mat default_constant_g() {
  Mat g(2, 2);
  g << 0, -1, 1, 0;
  return g;
}

void check_sphere_point(const Vec& x) {
  if (x.size() != 2) {
    throw std::invalid_argument("sphere chart expects base points (theta, phi)");
  }
  const double theta = x(0);
  if (!(theta >= kSphereThetaMin && theta <= kSphereThetaMax)) {
    throw std::domain_error("sphere chart: theta = " + format_double(theta) + " outside [" +
                            format_double(kSphereThetaMin) + ", " +
                            format_double(kSphereThetaMax) + "]");
  }
}

ModelSetup base_setup(std::string name, CoefficientProvider provider, Family family) {
  return ModelSetup{std::move(name), std::move(provider), std::move(family),
                    0.0,  0.0,       false,               false,
                    Vec(), Vec(),    Vec(),               nullptr,
                    std::nullopt};
}

std::function<MultiFamily(int)> plane_chart_bundle(const Vec& center) {
  // Generic direction entries: with 0/1 columns the finite-difference
  // operators are exactly linear in the directions, and every cyclic identity
  // residual cancels to roundoff instead of decaying at its quadratic rate.
  return [center](int k) {
    Mat d(2, k);
    if (k == 3) {
      d << 1.0, 0.4, -0.3,
           0.2, 1.0, 0.5;
    } else if (k == 4) {
      d << 1.0, 0.4, -0.3, 0.6,
           0.2, 1.0, 0.5, -0.7;
    } else {
      throw std::invalid_argument("chart bundle supports k = 3 or 4");
    }
    return affine_chart_family(center, d, 0.25, "chart_bundle");
  };
}

}  // namespace

CoefficientProvider make_flat(int fibre_dim, int base_dim) {
  if (fibre_dim < 1 || base_dim < 1) {
    throw std::invalid_argument("make_flat: dimensions must be >= 1");
  }
  const BundleChart chart{base_dim, fibre_dim};
  auto gamma3 = [fibre_dim, base_dim](const Vec&) {
    Gamma3 g;
    g.by_direction.assign(base_dim, Mat::Zero(fibre_dim, fibre_dim));
    return g;
  };
  auto grad = [fibre_dim, base_dim](const Vec&) {
    Gamma3Grad g;
    g.by_direction.assign(base_dim,
                          std::vector<Mat>(base_dim, Mat::Zero(fibre_dim, fibre_dim)));
    return g;
  };
  return CoefficientProvider::connection_induced(chart, gamma3, "flat", grad);
}

CoefficientProvider make_constant_coefficient(const Mat& g, int base_dim) {
  if (g.rows() < 1 || g.rows() != g.cols()) {
    throw std::invalid_argument("make_constant_coefficient: G must be square");
  }
  require_finite(g, "make_constant_coefficient");
  const BundleChart chart{base_dim, static_cast<int>(g.rows())};
  const Mat gc = g;
  auto coeff = [gc](const Path&, double) { return gc; };
  auto d_coeff = [n = gc.rows()](const Path&, double) { return Mat(Mat::Zero(n, n)); };
  return CoefficientProvider::path_functional(chart, coeff, "constant", d_coeff);
}

CoefficientProvider make_sphere_levi_civita() {
  const BundleChart chart{2, 2};
  auto gamma3 = [](const Vec& x) {
    check_sphere_point(x);
    const double theta = x(0);
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    Gamma3 g;
    g.by_direction.assign(2, Mat::Zero(2, 2));
    g.by_direction[0](1, 1) = cs / sn;
    g.by_direction[1](0, 1) = -sn * cs;
    g.by_direction[1](1, 0) = cs / sn;
    return g;
  };
  auto grad = [](const Vec& x) {
    check_sphere_point(x);
    const double theta = x(0);
    const double sn = std::sin(theta);
    const double inv_sn2 = 1.0 / (sn * sn);
    Gamma3Grad g;
    g.by_direction.assign(2, std::vector<Mat>(2, Mat::Zero(2, 2)));
    g.by_direction[0][0](1, 1) = -inv_sn2;
    g.by_direction[0][1](0, 1) = -std::cos(2.0 * theta);
    g.by_direction[0][1](1, 0) = -inv_sn2;
    return g;
  };
  return CoefficientProvider::connection_induced(chart, gamma3, "sphere", grad);
}

CoefficientProvider make_constant_torsion_plane(double c) {
  if (!std::isfinite(c)) {
    throw std::invalid_argument("make_constant_torsion_plane: c must be finite");
  }
  const BundleChart chart{2, 2};
  auto gamma3 = [c](const Vec& x) {
    if (x.size() != 2) {
      throw std::invalid_argument("torsion plane expects 2-dimensional base points");
    }
    Gamma3 g;
    g.by_direction.assign(2, Mat::Zero(2, 2));
    g.by_direction[1](0, 0) = c;
    return g;
  };
  auto grad = [](const Vec&) {
    Gamma3Grad g;
    g.by_direction.assign(2, std::vector<Mat>(2, Mat::Zero(2, 2)));
    return g;
  };
  return CoefficientProvider::connection_induced(chart, gamma3, "torsion_plane", grad);
}

FrameMap make_frame(const std::string& name) {
  if (name == "identity") {
    return FrameMap(
        2, [](const Path&, double) { return Mat(Mat::Identity(2, 2)); },
        [](const Path&, double) { return Mat(Mat::Zero(2, 2)); }, "identity");
  }
  if (name == "rotation") {
    auto frame = [](const Path&, double s) {
      Mat f(2, 2);
      f << std::cos(s), -std::sin(s), std::sin(s), std::cos(s);
      return f;
    };
    auto d_frame = [](const Path&, double s) {
      Mat f(2, 2);
      f << -std::sin(s), -std::cos(s), std::cos(s), -std::sin(s);
      return f;
    };
    return FrameMap(2, frame, d_frame, "rotation");
  }
  if (name == "diag_exp") {
    auto frame = [](const Path&, double s) {
      Mat f = Mat::Zero(2, 2);
      f(0, 0) = std::exp(s);
      f(1, 1) = std::exp(2.0 * s);
      return f;
    };
    auto d_frame = [](const Path&, double s) {
      Mat f = Mat::Zero(2, 2);
      f(0, 0) = std::exp(s);
      f(1, 1) = 2.0 * std::exp(2.0 * s);
      return f;
    };
    return FrameMap(2, frame, d_frame, "diag_exp");
  }
  throw std::invalid_argument("make_frame: unknown frame '" + name +
                              "' (expected identity, rotation, or diag_exp)");
}

CoefficientProvider make_frame_map_transport(const FrameMap& fm, int base_dim) {
  const BundleChart chart{base_dim, fm.fibre_dim()};
  const FrameMap f = fm;
  auto coeff = [f](const Path& path, double s) -> Mat {
    const Mat fr = f.frame(path, s);
    const double cond = condition_number(fr);
    if (cond > kConditionLimit) {
      throw numeric_error("frame coefficient: frame at s = " + format_double(s) +
                          " has condition number " + format_double(cond));
    }
    Mat dfr;
    if (f.has_d_frame()) {
      dfr = f.d_frame(path, s);
    } else {
      dfr = fd_derivative1_central([&](double u) { return f.frame(path, u); }, s,
                                   1e-6 * (1.0 + std::abs(s)), path.domain());
    }
    return fr.partialPivLu().solve(dfr);
  };
  return CoefficientProvider::path_functional(chart, coeff, "frame:" + f.name());
}

Family coordinate_family(const Vec& origin, Interval s_dom, Interval t_dom) {
  if (origin.size() < 2) {
    throw std::invalid_argument("coordinate_family: base dimension must be >= 2");
  }
  const int m = static_cast<int>(origin.size());
  const Vec o = origin;
  Vec e0 = Vec::Zero(m);
  e0(0) = 1.0;
  Vec e1 = Vec::Zero(m);
  e1(1) = 1.0;
  Family fam(
      s_dom, t_dom, [o, e0, e1](double s, double t) { return Vec(o + s * e0 + t * e1); },
      [e0](double, double) { return e0; }, [e1](double, double) { return e1; }, "coordinate");
  return fam.with_mixed_partial([m](double, double) { return Vec(Vec::Zero(m)); });
}

Family bilinear_family(const Vec& origin, const Vec& a, const Vec& b, const Vec& w,
                       Interval s_dom, Interval t_dom) {
  const auto m = origin.size();
  if (a.size() != m || b.size() != m || w.size() != m) {
    throw std::invalid_argument("bilinear_family: all vectors must share one dimension");
  }
  const Vec o = origin, av = a, bv = b, wv = w;
  Family fam(
      s_dom, t_dom,
      [o, av, bv, wv](double s, double t) { return Vec(o + s * av + t * bv + s * t * wv); },
      [av, wv](double, double t) { return Vec(av + t * wv); },
      [bv, wv](double s, double) { return Vec(bv + s * wv); }, "bilinear");
  return fam.with_mixed_partial([wv](double, double) { return wv; });
}

Family exp_orbit_family(const Mat& g, const Vec& p, Interval s_dom, Interval t_dom) {
  if (g.rows() < 1 || g.rows() != g.cols() || p.size() != g.rows()) {
    throw std::invalid_argument("exp_orbit_family: G must be square and match p");
  }
  const Mat gc = g;
  const Vec pc = p;
  auto at = [gc, pc](double s, double t) { return Vec(Mat((-(s + t) * gc).exp()) * pc); };
  auto vel = [gc, at](double s, double t) { return Vec(-gc * at(s, t)); };
  Family fam(s_dom, t_dom, at, vel, vel, "exp_orbit");
  return fam.with_mixed_partial(
      [gc, at](double s, double t) { return Vec(gc * (gc * at(s, t))); });
}

MultiFamily affine_chart_family(const Vec& center, const Mat& directions, double half_range,
                                std::string label) {
  const int k = static_cast<int>(directions.cols());
  if (directions.rows() != center.size()) {
    throw std::invalid_argument("affine_chart_family: direction rows must match base dim");
  }
  if (k < 2) throw std::invalid_argument("affine_chart_family: need at least 2 parameters");
  if (!(half_range > 0.0)) {
    throw std::invalid_argument("affine_chart_family: half_range must be > 0");
  }
  const Vec c = center;
  const Mat d = directions;
  const std::vector<Interval> domain(static_cast<std::size_t>(k),
                                     Interval{-half_range, half_range});
  auto point = [c, d](const std::vector<double>& s) {
    Vec out = c;
    for (int a = 0; a < d.cols(); ++a) out += s[static_cast<std::size_t>(a)] * d.col(a);
    return out;
  };
  auto partial = [d](int a, const std::vector<double>&) { return Vec(d.col(a)); };
  MultiFamily mf(domain, point, partial, std::vector<double>(static_cast<std::size_t>(k), 0.0),
                 std::move(label));
  return mf.with_second_partial(
      [m = static_cast<int>(center.size())](int, int, const std::vector<double>&) {
        return Vec(Vec::Zero(m));
      });
}

ModelSetup make_model(const std::string& name, const ModelOptions& options) {
  const Interval box{-0.6, 0.6};
  const Vec origin2 = Vec::Zero(2);
  Vec lo(2), hi(2);

  if (name == "flat") {
    ModelSetup m = base_setup(name, make_flat(2, 2), coordinate_family(origin2, box, box));
    m.tangent_bundle = true;
    m.expect_zero_curvature = true;
    lo << -1, -1;
    hi << 1, 1;
    m.region_lo = lo;
    m.region_hi = hi;
    m.basepoint = origin2;
    m.make_chart_bundle = plane_chart_bundle(origin2);
    return m;
  }
  if (name == "constant") {
    const Mat g = options.constant_g.size() > 0 ? options.constant_g : default_constant_g();
    ModelSetup m =
        base_setup(name, make_constant_coefficient(g), coordinate_family(origin2, box, box));
    m.tangent_bundle = m.provider.fibre_dim() == m.provider.base_dim();
    m.expect_zero_curvature = true;
    lo << -1, -1;
    hi << 1, 1;
    m.region_lo = lo;
    m.region_hi = hi;
    m.basepoint = origin2;
    m.make_chart_bundle = plane_chart_bundle(origin2);
    return m;
  }
  if (name == "sphere") {
    Vec center(2);
    center << kPi / 2.0, 1.0;
    ModelSetup m =
        base_setup(name, make_sphere_levi_civita(), coordinate_family(center, box, box));
    m.tangent_bundle = true;
    m.expect_zero_curvature = false;
    lo << 0.5, 0.0;
    hi << 2.5, 1.0;
    m.region_lo = lo;
    m.region_hi = hi;
    m.basepoint = 0.5 * (lo + hi);
    m.make_chart_bundle = plane_chart_bundle(center);
    return m;
  }
  if (name == "torsion_plane") {
    ModelSetup m = base_setup(name, make_constant_torsion_plane(options.torsion_c),
                              coordinate_family(origin2, box, box));
    m.tangent_bundle = true;
    m.expect_zero_curvature = true;
    lo << -1, -1;
    hi << 1, 1;
    m.region_lo = lo;
    m.region_hi = hi;
    m.basepoint = origin2;
    m.make_chart_bundle = plane_chart_bundle(origin2);
    return m;
  }
  if (name == "frame") {
    FrameMap fm = make_frame(options.frame_name);
    ModelSetup m =
        base_setup(name, make_frame_map_transport(fm), coordinate_family(origin2, box, box));
    m.tangent_bundle = m.provider.fibre_dim() == m.provider.base_dim();
    m.expect_zero_curvature = true;
    lo << -1, -1;
    hi << 1, 1;
    m.region_lo = lo;
    m.region_hi = hi;
    m.basepoint = origin2;
    m.make_chart_bundle = plane_chart_bundle(origin2);
    m.frame = fm;
    return m;
  }
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected flat, constant, sphere, torsion_plane, or frame)");
}

std::vector<std::string> model_names() {
  return {"flat", "constant", "sphere", "torsion_plane", "frame"};
}

}  // namespace ltp::models
