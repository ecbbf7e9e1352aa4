#pragma once

#include <vector>

#include "ltp/bundle.hpp"

namespace ltp {

// Conventions for a two-parameter family eta(s, t):
//   row path at t:  s -> eta(s, t), velocity eta' = d_s;
//   column path at s:  t -> eta(s, t), velocity eta'' = d_t;
//   Gamma_row(s; t) = coefficient matrix along the row path at s;
//   Gamma_col(t; s) = coefficient matrix along the column path at t.

// Torsion vector at (s, t), in components:
//   T^i = Gamma_row(s)^i_j (eta'')^j - Gamma_col(t)^i_j (eta')^j.
// Requires a tangent-bundle chart (fibre_dim == base_dim).
Vec torsion_components(const CoefficientProvider& provider, const Family& family, double s,
                       double t);

// Torsion as a difference of derivations: the row derivation applied to the
// section sigma -> eta''(sigma, t) minus the column derivation applied to
// tau -> eta'(s, tau).  The mixed second partials of eta cancel, so this
// equals torsion_components up to the finite differences used for the
// section derivatives (analytic when the family declares d_st).
Vec torsion_operator(const CoefficientProvider& provider, const Family& family, double s,
                     double t);

// Curvature matrix at (s, t):
//   R = d/ds Gamma_col(t) - d/dt Gamma_row(s)
//     + Gamma_row(s) Gamma_col(t) - Gamma_col(t) Gamma_row(s),
// where d/ds re-extracts column paths at s +/- fd_step (and d/dt row paths
// at t +/- fd_step) and differences the coefficient matrices; the family
// parameters select which path, so these are derivatives across the family.
// Central differences, one-sided 2nd-order at the domain edges; converges at
// O(fd_step^2).
Mat curvature_matrix(const CoefficientProvider& provider, const Family& family, double s,
                     double t, double fd_step = 1e-4);

// Closed-form parameter derivatives instead of finite differences; needs a
// connection-induced provider with a declared coefficient-array gradient and
// a family with a declared mixed partial.
Mat curvature_matrix_analytic(const CoefficientProvider& provider, const Family& family,
                              double s, double t);

// Curvature as a commutator of derivations applied to a two-parameter
// section: (D_row D_col - D_col D_row) sigma evaluated at (s, t).  Equals
// curvature_matrix * sigma(s, t) up to finite-difference error.
Vec curvature_commutator(const CoefficientProvider& provider, const Family& family,
                         const FamilySection& sec, double s, double t,
                         double fd_step = 1e-4);

// Grid sample of a field over the family rectangle.  Samples are keyed by
// the parameter pair; coincident base points (self-intersecting families)
// keep their distinct parameter keys.
template <class V>
struct FieldSample {
  double s = 0.0;
  double t = 0.0;
  Vec base;
  V value;
};

std::vector<FieldSample<Mat>> curvature_field(const CoefficientProvider& provider,
                                              const Family& family, int s_count, int t_count,
                                              double fd_step = 1e-4);
std::vector<FieldSample<Vec>> torsion_field(const CoefficientProvider& provider,
                                            const Family& family, int s_count, int t_count);

}  // namespace ltp
