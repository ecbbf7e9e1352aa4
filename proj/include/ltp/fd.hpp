#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ltp/types.hpp"

namespace ltp {

// Finite-difference weights for the m-th derivative at x0 from arbitrary
// nodes (Fornberg's recurrence).  Used to shift stencils inside a closed
// interval near its endpoints, where a centered stencil would step outside.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

// First derivative of f at s from a 5-point stencil of spacing h whose nodes
// are kept inside [domain.a, domain.b]; centered when possible (4th order
// either way).
Vec fd_derivative1(const std::function<Vec(double)>& f, double s, double h,
                   const Interval& domain);

// Central 2nd-order first derivative, one-sided 2nd-order fallback at the
// interval ends.
Mat fd_derivative1_central(const std::function<Mat(double)>& f, double s, double h,
                           const Interval& domain);

}  // namespace ltp
