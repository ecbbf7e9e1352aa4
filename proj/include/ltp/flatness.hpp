#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ltp/bundle.hpp"
#include "ltp/transport.hpp"

namespace ltp {

// Rectangular sample grid over a 2-d base-chart box [lo, hi]: nx x ny nodes
// including the box edges, nx and ny at least 2.
class RegionGrid {
 public:
  RegionGrid(Vec lo, Vec hi, int nx, int ny);

  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int node_count() const { return nx_ * ny_; }

  Vec node(int i, int j) const;
  std::vector<Vec> nodes() const;
  Vec center() const;

 private:
  Vec lo_, hi_;
  int nx_ = 2, ny_ = 2;
};

// Norm of the difference between the transport matrices along two paths that
// share both endpoints, each integrated over its full parameter range.  The
// start points and the end points must each agree within 1e-10; a mismatch
// raises invalid_argument quoting both endpoint tuples.  steps == 0 picks
// default_steps from each path's own parameter span.
double path_independence_defect(const CoefficientProvider& provider, const Path& path1,
                                const Path& path2, int steps = 0);

// Raised when transports fail a path-independence spot-check; carries the
// offending defect alongside the message naming the disagreeing routes.
class not_flat_error : public std::runtime_error {
 public:
  not_flat_error(const std::string& msg, double defect_value)
      : std::runtime_error(msg), defect(defect_value) {}

  double defect = 0.0;
};

// The route triple between two points used by the independence catalogue: a
// straight segment, a single-bend axis-aligned polyline (first coordinate
// changes first), and a quadratic arc bowed 0.1 chord lengths off the
// midpoint.  Degenerate bends collapse to the segment they duplicate.
std::vector<Path> route_catalogue(const Vec& from, const Vec& to);

struct FlatnessVerdict {
  double curvature_sup = 0.0;  // sup of the curvature-matrix norm over grid nodes
  double max_defect = 0.0;     // max transport defect over the route catalogue
  std::string worst_pair;      // route pair and endpoints achieving max_defect
  double curvature_tolerance = 1e-8;
  double defect_tolerance = 1e-7;
  bool flat_by_curvature = false;  // curvature_sup <= curvature_tolerance
  bool flat_by_transport = false;  // max_defect <= defect_tolerance
  bool consistent = false;         // the two criteria agree
};

// Tests flatness two ways over the region: pointwise curvature at every grid
// node, and path-independence defects over a fixed catalogue of route pairs
// between box corners and the center.  Both verdicts are reported together
// with a consistency flag; a disagreement (possible for path-functional
// transports, which can be curvature-free yet path-dependent) is recorded,
// never raised.  Catalogue entries and grid nodes are evaluated in parallel.
FlatnessVerdict flatness_verdict(const CoefficientProvider& provider,
                                 const RegionGrid& region,
                                 double curvature_tolerance = 1e-8,
                                 double defect_tolerance = 1e-7, int steps = 0,
                                 double fd_step = 1e-4);

// Frame of fibre bases over the region, built by transporting seed_basis
// from x0 along canonical axis-aligned polylines (coordinates updated in
// index order).  Path independence is spot-checked over the region's route
// catalogue first; a defect above defect_tolerance raises not_flat_error
// carrying it.  seed_basis must be square with the fibre dimension and
// invertible.  In the returned frame, transports between region points
// reduce to the identity up to integrator error.
FrameField construct_flat_frame(const CoefficientProvider& provider,
                                const RegionGrid& region, const Vec& x0,
                                const Mat& seed_basis, int steps = 0,
                                double defect_tolerance = 1e-7);

}  // namespace ltp
