#pragma once

#include <string>

#include "ltp/bundle.hpp"

namespace ltp {

// Transport matrix H(t, s) along a path: components of the linear transport
// taking fibre vectors at parameter s to parameter t.
//
// The matrix solves the initial value problem
//
//     dH(u, s)/du = -Gamma(u) H(u, s),    H(s, s) = I,
//
// which follows from the two defining properties of the transport family:
// composing transports concatenates parameter ranges (H(t, r) H(r, s) =
// H(t, s)), and for small steps H(s + e, s) = I - e Gamma(s) + O(e^2), which
// is what it means for Gamma to be the coefficient matrix of the transport.
// Differentiating the composition law in its left parameter and inserting
// the small-step behavior gives the ODE; uniqueness of linear IVP solutions
// makes this the transport.
struct TransportMatrix {
  Mat value;
  std::string path_id;
  double s = 0.0;
  double t = 0.0;
  int steps = 0;
};

// Fixed-step classical 4th-order Runge-Kutta integration of the IVP above
// from s to t (either direction).  `steps` >= 1 is the total step count; on
// piecewise paths it is distributed across the smooth legs proportionally to
// parameter length and each leg is integrated with that leg's one-sided
// velocities, so kinks cost no accuracy.  s == t short-circuits to the
// identity.  Non-finite coefficient samples raise numeric_error naming the
// parameter.
TransportMatrix transport_matrix(const CoefficientProvider& provider, const Path& path,
                                 double s, double t, int steps);

// H(t, s) u for a fibre vector u at parameter s.
Vec transport_vector(const CoefficientProvider& provider, const Path& path, double s,
                     double t, const Vec& u, int steps);

// Transport induced by a frame map: H(t, s) = F(t)^-1 F(s).  Frames with
// condition number above kConditionLimit raise numeric_error carrying the
// estimate.
TransportMatrix transport_from_frame_map(const FrameMap& fm, const Path& path, double s,
                                         double t);

// Recovers the coefficient matrix from transports: the derivative of
// H(s, t) in t at t = s, estimated by the central difference
// (H(s, s+h) - H(s, s-h)) / (2h); converges at O(h^2).
Mat coefficients_from_transport(const CoefficientProvider& provider, const Path& path,
                                double s, double h);

// Residual of the 2nd-order small-step expansion
//   H(s+e, s) = I - e Gamma + e^2/2 (Gamma Gamma - dGamma/ds) + O(e^3);
// the returned norm decays like e^3 wherever the 3rd-order coefficient is
// nonzero.
double expansion_check(const CoefficientProvider& provider, const Path& path, double s,
                       double eps);

// Step-count heuristic: 1000 steps per unit of parameter span, at least 16.
int default_steps(double span);

}  // namespace ltp
