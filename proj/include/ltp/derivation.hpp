#pragma once

#include "ltp/bundle.hpp"

namespace ltp {

// Derivation of a section along a path, in components:
//
//     (D sigma)(s) = sigma'(s) + Gamma(s) sigma(s).
//
// This is the parameter derivative of back-transported section values: sigma
// is constant along the path exactly when its transports reproduce it, and D
// measures the first-order failure of that.  sigma' uses the declared
// derivative when present, otherwise a 4th-order finite difference with step
// 1e-4 (stencil shifted inward at the domain ends).
Vec derive_section(const CoefficientProvider& provider, const Path& path,
                   const Section& sec, double s);

// Symmetric-limit form: transports sigma(s +/- eps) back to s and takes the
// centered quotient
//
//     [L_{s+eps -> s} sigma(s+eps) - L_{s-eps -> s} sigma(s-eps)] / (2 eps);
//
// converges to derive_section at O(eps^2).
Vec derive_section_limit(const CoefficientProvider& provider, const Path& path,
                         const Section& sec, double s, double eps);

}  // namespace ltp
