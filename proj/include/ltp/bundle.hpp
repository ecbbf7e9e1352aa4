#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltp/types.hpp"

namespace ltp {

// Chart of a real vector bundle: base coordinates in R^m, fibre components
// in R^n.  All geometry below works in one fixed chart and frame.
struct BundleChart {
  int base_dim = 0;   // m
  int fibre_dim = 0;  // n
};

// C1/C2 piecewise-smooth path in base coordinates.  A path is a chain of one
// or more smooth legs over contiguous parameter ranges; velocity is analytic
// per leg (finite differences are used only to cross-check it, never to
// define it).  Immutable after construction.
class Path {
 public:
  struct Leg {
    Interval range;
    std::function<Vec(double)> point;
    std::function<Vec(double)> velocity;
  };

  Path(Interval domain, std::function<Vec(double)> point,
       std::function<Vec(double)> velocity, std::string label = "");
  static Path from_legs(std::vector<Leg> legs, std::string label = "");

  // Straight segment from x to y over [0, 1].
  static Path segment(const Vec& x, const Vec& y, std::string label = "segment");
  // Axis-aligned or general polyline through the given nodes; leg k covers
  // [k, k+1], so the parameter length equals the number of legs.
  static Path polyline(const std::vector<Vec>& nodes, std::string label = "polyline");
  // Quadratic Bezier arc x -> via -> y over [0, 1].
  static Path quadratic_arc(const Vec& x, const Vec& via, const Vec& y,
                            std::string label = "arc");

  const Interval& domain() const;
  Vec point(double s) const;
  Vec velocity(double s) const;
  int base_dim() const;
  const std::string& label() const;

  int leg_count() const;
  // The k-th smooth leg as a standalone path over its own parameter range.
  // Evaluating a leg at its endpoints uses that leg's analytic functions, so
  // one-sided values at interior kinks are exact.
  Path leg(int k) const;
  // Leg boundaries strictly inside (domain.a, domain.b).
  std::vector<double> interior_breaks() const;

  // Affine reparametrization onto [c, d] (orientation preserved).
  Path reparametrized(double c, double d, std::string label = "") const;

  void require_param(double s, const char* what) const;

 private:
  struct Impl;
  explicit Path(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Max over sampled parameters of |velocity - central difference of point|,
// used to validate that declared velocities match the point map.
double path_velocity_defect(const Path& path, int samples = 17);

// Two-parameter C2 family of paths eta(s, t).  d_s and d_t are the partial
// velocity maps; d_st (optional) is the mixed second partial, needed only by
// closed-form curvature derivatives.
class Family {
 public:
  using Fn2 = std::function<Vec(double, double)>;

  Family(Interval s_domain, Interval t_domain, Fn2 point, Fn2 d_s, Fn2 d_t,
         std::string label = "");
  Family with_mixed_partial(Fn2 d_st) const;

  const Interval& s_domain() const;
  const Interval& t_domain() const;
  Vec point(double s, double t) const;
  Vec d_s(double s, double t) const;
  Vec d_t(double s, double t) const;
  bool has_mixed_partial() const;
  Vec d_st(double s, double t) const;
  const std::string& label() const;
  int base_dim() const;

  void require_params(double s, double t, const char* what) const;

 private:
  struct Impl;
  explicit Family(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Row path s -> eta(s, t) for frozen t; velocity is d_s.
Path extract_row_path(const Family& family, double t);
// Column path t -> eta(s, t) for frozen s; velocity is d_t.
Path extract_col_path(const Family& family, double s);

// k-parameter family tau(s^1..s^k) with a distinguished basepoint.  Axis
// paths and parameter-pair families are extracted by freezing all other
// parameters at the basepoint.
class MultiFamily {
 public:
  using PointFn = std::function<Vec(const std::vector<double>&)>;
  using PartialFn = std::function<Vec(int, const std::vector<double>&)>;
  using SecondPartialFn = std::function<Vec(int, int, const std::vector<double>&)>;

  MultiFamily(std::vector<Interval> domain, PointFn point, PartialFn partial,
              std::vector<double> basepoint, std::string label = "");
  MultiFamily with_second_partial(SecondPartialFn second) const;
  MultiFamily with_basepoint(std::vector<double> basepoint) const;

  int k() const;
  const std::vector<Interval>& domain() const;
  const std::vector<double>& basepoint() const;
  Vec point(const std::vector<double>& s) const;
  Vec partial(int a, const std::vector<double>& s) const;
  const std::string& label() const;

  // Path sigma -> tau(..., s^a = sigma, ...) through the basepoint.
  Path axis_path(int a) const;

 private:
  struct Impl;
  explicit MultiFamily(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
  friend Family extract_pair_family(const MultiFamily&, int, int);
};

// Family (sigma1, sigma2) -> tau(..., s^a = sigma1, ..., s^b = sigma2, ...)
// through the basepoint; a != b, both in [0, k).
Family extract_pair_family(const MultiFamily& mf, int a, int b);

// Fibre-vector section along a path: components per parameter value, with an
// optional analytic parameter derivative.
class Section {
 public:
  explicit Section(std::function<Vec(double)> components,
                   std::function<Vec(double)> derivative = nullptr);
  Vec components(double s) const;
  bool has_derivative() const;
  Vec derivative(double s) const;

 private:
  std::function<Vec(double)> comp_;
  std::function<Vec(double)> deriv_;
};

// Fibre-vector section over a family's parameter rectangle, with optional
// analytic partials.
class FamilySection {
 public:
  using Fn2 = std::function<Vec(double, double)>;
  explicit FamilySection(Fn2 components, Fn2 d_s = nullptr, Fn2 d_t = nullptr);
  Vec components(double s, double t) const;
  bool has_d_s() const;
  bool has_d_t() const;
  Vec d_s(double s, double t) const;
  Vec d_t(double s, double t) const;

 private:
  Fn2 comp_, ds_, dt_;
};

// Section over a k-parameter family.
using MultiSection = std::function<Vec(const std::vector<double>&)>;

// Christoffel-style coefficient array at a base point: m matrices G_k with
// (G_k)(i, j) = Gamma^i_{j k}; the coefficient matrix along a path is the
// contraction sum_k G_k(x(s)) * xdot^k(s).
struct Gamma3 {
  std::vector<Mat> by_direction;
};
// Spatial gradient of Gamma3: grad[l][k] = d(G_k)/d(x^l).
struct Gamma3Grad {
  std::vector<std::vector<Mat>> by_direction;
};

// Produces the n x n coefficient matrix Gamma_gamma(s) of a linear transport
// along a given path.  Two kinds:
//  - connection-induced: contraction of a Christoffel array with the path
//    velocity (local in the base point and velocity);
//  - path-functional: an arbitrary rule in (path, s).
// The transport it induces solves dH/du = -Gamma(u) H (see transport.hpp).
class CoefficientProvider {
 public:
  using CoeffFn = std::function<Mat(const Path&, double)>;
  using Gamma3Fn = std::function<Gamma3(const Vec&)>;
  using Gamma3GradFn = std::function<Gamma3Grad(const Vec&)>;

  static CoefficientProvider connection_induced(BundleChart chart, Gamma3Fn gamma3,
                                                std::string name,
                                                Gamma3GradFn gamma3_grad = nullptr);
  static CoefficientProvider path_functional(BundleChart chart, CoeffFn coeff,
                                             std::string name,
                                             CoeffFn d_coeff = nullptr);

  const BundleChart& chart() const;
  int fibre_dim() const;
  int base_dim() const;
  const std::string& name() const;
  bool is_connection_induced() const;
  bool has_gamma3_grad() const;

  Mat coeff(const Path& path, double s) const;
  // d(Gamma_gamma(s))/ds along the path: analytic when declared, otherwise a
  // central difference with step max(1e-6, 1e-6 |s|), one-sided at the
  // domain ends.
  Mat coeff_param_derivative(const Path& path, double s) const;
  bool has_analytic_param_derivative() const;

  Gamma3 gamma3(const Vec& x) const;
  Gamma3Grad gamma3_grad(const Vec& x) const;

 private:
  struct Impl;
  explicit CoefficientProvider(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Field of invertible frame matrices along paths; transports of the form
// F(t)^-1 F(s) (see transport.hpp).  d_frame optional; when absent the
// coefficient matrix F^-1 dF/ds falls back to a central difference of F.
class FrameMap {
 public:
  using FrameFn = std::function<Mat(const Path&, double)>;
  FrameMap(int fibre_dim, FrameFn frame, FrameFn d_frame = nullptr,
           std::string name = "frame");

  int fibre_dim() const;
  const std::string& name() const;
  Mat frame(const Path& path, double s) const;
  bool has_d_frame() const;
  Mat d_frame(const Path& path, double s) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Field of bases over base points (used by the flat-frame construction).
class FrameField {
 public:
  explicit FrameField(std::function<Mat(const Vec&)> basis_at, std::string name = "");
  Mat basis_at(const Vec& x) const;
  const std::string& name() const;

 private:
  std::function<Mat(const Vec&)> basis_;
  std::string name_;
};

// Condition number estimate (2-norm, via SVD); frames above 1e12 are treated
// as numerically singular.
double condition_number(const Mat& m);
inline constexpr double kConditionLimit = 1e12;

}  // namespace ltp
