#pragma once

#include <utility>
#include <vector>

#include "ltp/bundle.hpp"
#include "ltp/transport.hpp"

namespace ltp {

// Least-squares slope of log(residual) against log(h).  Requires >= 3
// samples with positive h.  If any residual sits at or below ten times
// machine epsilon the fit is meaningless and `at_floor` is set instead.
struct OrderFit {
  bool at_floor = false;
  double slope = 0.0;
  double intercept = 0.0;  // log(residual) at log(h) = 0
  int points = 0;
};

OrderFit convergence_order(const std::vector<std::pair<double, double>>& h_and_residual);

// Pentagon defect at (s, t) of a family: transports the scaled tangents
//   A = delta * eta'(s, t),   B = eps * eta''(s, t)
// one step each across the parameter rectangle and returns
//   [L_row(s -> s+delta) B - L_col(t -> t+eps) A] - (B - A),
// which equals -delta*eps*T(s, t) up to O(delta eps^2) + O(delta^2 eps):
// comparing the two routes across the corner loses exactly the torsion at
// second order.  steps <= 0 selects the default step heuristic per leg.
Vec pentagon_defect(const CoefficientProvider& provider, const Family& family, double s,
                    double t, double delta, double eps, int steps = 0);

// Two-leg refinement of the pentagon: composed transports of B and A around
// the rectangle corner minus the single-leg bracket, plus the torsion term.
struct DoubleTransportDefect {
  Vec composed_difference;  // L_col(s+delta) L_row(t) B - L_row(t+eps) L_col(s) A
  Vec bracket;              // L_col(s) B - L_row(t) A
  Vec torsion_term;         // delta * eps * T(s, t)
  Vec remainder;            // composed_difference - bracket + torsion_term, O(h^3)
};

DoubleTransportDefect double_transport_defect(const CoefficientProvider& provider,
                                              const Family& family, double s, double t,
                                              double delta, double eps, int steps = 0);

// Transport around the parameter rectangle [s, s+delta] x [t, t+eps]:
// row at t forward, column at s+delta forward, row at t+eps backward,
// column at s backward.  Every leg uses the same step count.  The result is
// I - delta*eps*R(s, t) + O(h^3) for delta = eps = h.
Mat loop_holonomy(const CoefficientProvider& provider, const Family& family, double s,
                  double t, double delta, double eps, int steps = 0);
Vec loop_holonomy_vector(const CoefficientProvider& provider, const Family& family, double s,
                         double t, double delta, double eps, const Vec& u, int steps = 0);

// Curvature from shrinking loops: est(h) = -(Hol(h) - I)/h^2 over a
// decreasing h sequence, finished by one Richardson step on the two finest
// levels.  The leading error order of est is fitted from successive
// differences (generic families give order 1; symmetric points can start at
// 2) and the extrapolation uses that order.
struct HolonomyEstimate {
  Mat value;                                       // extrapolated curvature
  std::vector<std::pair<double, Mat>> estimates;   // (h, est(h))
  OrderFit residual_fit;                           // ||est(h) - value|| vs h
  double fitted_order = 0.0;                       // order used by the Richardson step
};

HolonomyEstimate holonomy_curvature_estimate(const CoefficientProvider& provider,
                                             const Family& family, double s, double t,
                                             const std::vector<double>& h_sequence,
                                             int steps = 0);

}  // namespace ltp
