#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ltp/bundle.hpp"

namespace ltp::models {

// Built-in providers with known closed-form behavior.  Names addressable
// from configs: "flat", "constant", "sphere", "torsion_plane", "frame".

// Zero coefficients on an n-fibre over an m-base; every transport is I.
CoefficientProvider make_flat(int fibre_dim, int base_dim);

// Same constant coefficient matrix G for every path and parameter, so
// H(t, s) = exp(-(t - s) G).  Curvature vanishes identically, yet the
// transport depends on parameter length, not just endpoints.
CoefficientProvider make_constant_coefficient(const Mat& g, int base_dim = 2);

// Levi-Civita connection of the unit sphere in the colatitude/longitude
// chart (theta, phi), theta restricted to [0.2, pi - 0.2] away from the
// cot(theta) singularities at the poles.  Nonzero Christoffel entries:
// Gamma^theta_{phi phi} = -sin(theta) cos(theta),
// Gamma^phi_{theta phi} = Gamma^phi_{phi theta} = cot(theta).
// Carries analytic spatial gradients.
CoefficientProvider make_sphere_levi_civita();
inline constexpr double kSphereThetaMin = 0.2;
inline constexpr double kSphereThetaMax = 3.141592653589793 - 0.2;

// Plane with the single constant Christoffel entry Gamma^1_{1 2} = c
// (0-based: Gamma^0_{0 1} = c): flat but with constant torsion (-c, 0)
// on the coordinate family.
CoefficientProvider make_constant_torsion_plane(double c);

// Named invertible frame maps on a 2-fibre:
//   "identity"  F = I
//   "rotation"  F(s) = plane rotation by s, coefficient matrix [[0,-1],[1,0]]
//   "diag_exp"  F(s) = diag(e^s, e^{2s}), coefficient matrix diag(1, 2)
FrameMap make_frame(const std::string& name);

// The coefficient provider induced by a frame map, Gamma = F^-1 dF/ds
// (analytic derivative when declared, else a central difference of F), with
// the sign fixed so the integrated transport reproduces F(t)^-1 F(s).
CoefficientProvider make_frame_map_transport(const FrameMap& fm, int base_dim = 2);

// eta(s, t) = origin + s e_0 + t e_1 with zero mixed partial.
Family coordinate_family(const Vec& origin, Interval s_dom, Interval t_dom);

// eta(s, t) = origin + s a + t b + s t w; mixed partial w.
Family bilinear_family(const Vec& origin, const Vec& a, const Vec& b, const Vec& w,
                       Interval s_dom, Interval t_dom);

// eta(s, t) = exp(-(s + t) G) p with analytic partials.  The two tangent
// fields coincide, so its torsion vanishes for any provider whose row and
// column coefficients agree.
Family exp_orbit_family(const Mat& g, const Vec& p, Interval s_dom, Interval t_dom);

// k-parameter family tau(s) = center + D s for an m x k direction matrix D,
// each parameter ranging over [-half_range, half_range], basepoint 0.  All
// second partials vanish.  This is the composite of an affine map into the
// parameter rectangle of a coordinate family ("chart-curve bundle").
MultiFamily affine_chart_family(const Vec& center, const Mat& directions, double half_range,
                                std::string label = "affine");

// A provider together with the default geometry experiments run on.
struct ModelSetup {
  std::string name;
  CoefficientProvider provider;
  Family family;                // 2-parameter family through the point of interest
  double s0 = 0.0;              // default family parameters
  double t0 = 0.0;
  bool tangent_bundle = false;  // torsion is defined
  bool expect_zero_curvature = false;
  Vec region_lo, region_hi;                          // base-chart box for grids
  Vec basepoint;                                     // flat-frame anchor
  std::function<MultiFamily(int)> make_chart_bundle; // k in {3, 4}
  std::optional<FrameMap> frame;                     // set for "frame"
};

struct ModelOptions {
  Mat constant_g;                      // default [[0,-1],[1,0]]
  double torsion_c = 0.4;
  std::string frame_name = "rotation";
};

ModelSetup make_model(const std::string& name, const ModelOptions& options = {});
std::vector<std::string> model_names();

}  // namespace ltp::models
