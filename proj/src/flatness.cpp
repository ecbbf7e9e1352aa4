#include "ltp/flatness.hpp"

#include <algorithm>
#include <utility>

#include "ltp/curvature.hpp"
#include "ltp/models.hpp"
#include "ltp/parallel.hpp"

namespace ltp {

namespace {

std::string fmt_point(const Vec& x) {
  std::string out = "(";
  for (int i = 0; i < x.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(x[i]);
  }
  return out + ")";
}

Mat full_range_transport(const CoefficientProvider& provider, const Path& path,
                         int steps) {
  const Interval& dom = path.domain();
  int n = steps > 0 ? steps : default_steps(dom.length());
  return transport_matrix(provider, path, dom.a, dom.b, n).value;
}

struct RouteDefect {
  double defect = 0.0;
  std::string description;
};

// Endpoint pairs spanning the region: corner to corner both ways, plus the
// two half-diagonals through the center.
std::vector<std::pair<Vec, Vec>> endpoint_pairs(const RegionGrid& region) {
  Vec c00 = region.lo();
  Vec c11 = region.hi();
  Vec c10(2), c01(2);
  c10 << region.hi()[0], region.lo()[1];
  c01 << region.lo()[0], region.hi()[1];
  Vec mid = region.center();
  return {{c00, c11}, {c10, c01}, {c00, mid}, {mid, c11}};
}

std::vector<RouteDefect> catalogue_defects(const CoefficientProvider& provider,
                                           const RegionGrid& region, int steps) {
  struct Job {
    Path a;
    Path b;
    std::string description;
  };
  std::vector<Job> jobs;
  for (const auto& [from, to] : endpoint_pairs(region)) {
    std::vector<Path> routes = route_catalogue(from, to);
    std::string where = " from " + fmt_point(from) + " to " + fmt_point(to);
    for (size_t i = 0; i < routes.size(); ++i)
      for (size_t j = i + 1; j < routes.size(); ++j)
        jobs.push_back({routes[i], routes[j],
                        routes[i].label() + " vs " + routes[j].label() + where});
  }

  std::vector<RouteDefect> out(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int k) {
    out[k].defect = path_independence_defect(provider, jobs[k].a, jobs[k].b, steps);
    out[k].description = jobs[k].description;
  });
  return out;
}

// Polyline nodes from x0 to x updating one coordinate at a time, in index
// order; size 1 means x == x0.
std::vector<Vec> axis_route_nodes(const Vec& x0, const Vec& x) {
  std::vector<Vec> nodes{x0};
  Vec cur = x0;
  for (int a = 0; a < x.size(); ++a) {
    if (cur[a] != x[a]) {
      cur[a] = x[a];
      nodes.push_back(cur);
    }
  }
  return nodes;
}

}  // namespace

RegionGrid::RegionGrid(Vec lo, Vec hi, int nx, int ny)
    : lo_(std::move(lo)), hi_(std::move(hi)), nx_(nx), ny_(ny) {
  if (lo_.size() != 2 || hi_.size() != 2)
    throw std::invalid_argument("region grid: lo and hi must be 2-d points");
  for (int k = 0; k < 2; ++k)
    if (!(lo_[k] < hi_[k]))
      throw std::invalid_argument("region grid: box needs lo < hi on every axis");
  if (nx_ < 2 || ny_ < 2)
    throw std::invalid_argument("region grid: resolution must be at least 2 per axis");
}

Vec RegionGrid::node(int i, int j) const {
  if (i < 0 || i >= nx_ || j < 0 || j >= ny_)
    throw std::invalid_argument("region grid: node index out of range");
  Vec x(2);
  x[0] = lo_[0] + (hi_[0] - lo_[0]) * static_cast<double>(i) / (nx_ - 1);
  x[1] = lo_[1] + (hi_[1] - lo_[1]) * static_cast<double>(j) / (ny_ - 1);
  return x;
}

std::vector<Vec> RegionGrid::nodes() const {
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(nx_) * ny_);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) out.push_back(node(i, j));
  return out;
}

Vec RegionGrid::center() const { return 0.5 * (lo_ + hi_); }

double path_independence_defect(const CoefficientProvider& provider, const Path& path1,
                                const Path& path2, int steps) {
  Vec start1 = path1.point(path1.domain().a);
  Vec start2 = path2.point(path2.domain().a);
  Vec end1 = path1.point(path1.domain().b);
  Vec end2 = path2.point(path2.domain().b);
  if ((start1 - start2).norm() > 1e-10)
    throw std::invalid_argument("paths start at different points: " + fmt_point(start1) +
                                " vs " + fmt_point(start2));
  if ((end1 - end2).norm() > 1e-10)
    throw std::invalid_argument("paths end at different points: " + fmt_point(end1) +
                                " vs " + fmt_point(end2));

  Mat h1 = full_range_transport(provider, path1, steps);
  Mat h2 = full_range_transport(provider, path2, steps);
  return (h1 - h2).norm();
}

std::vector<Path> route_catalogue(const Vec& from, const Vec& to) {
  Vec chord = to - from;
  if (chord.norm() == 0.0)
    throw std::invalid_argument("route catalogue needs distinct endpoints");

  std::vector<Path> routes;
  routes.push_back(Path::segment(from, to));

  routes.push_back(Path::polyline(axis_route_nodes(from, to)));

  Vec via = 0.5 * (from + to);
  if (chord.size() == 2) {
    Vec offset(2);
    offset << -chord[1], chord[0];
    via += 0.1 * offset;
  }
  routes.push_back(Path::quadratic_arc(from, via, to));
  return routes;
}

FlatnessVerdict flatness_verdict(const CoefficientProvider& provider,
                                 const RegionGrid& region, double curvature_tolerance,
                                 double defect_tolerance, int steps, double fd_step) {
  if (!(curvature_tolerance > 0.0) || !(defect_tolerance > 0.0))
    throw std::invalid_argument("flatness verdict: tolerances must be positive");
  if (!(fd_step > 0.0))
    throw std::invalid_argument("flatness verdict: fd_step must be positive");

  std::vector<Vec> nodes = region.nodes();
  double half = std::max(0.05, 4.0 * fd_step);
  std::vector<double> curvature_norms(nodes.size(), 0.0);
  parallel_for(static_cast<int>(nodes.size()), [&](int k) {
    Family fam =
        models::coordinate_family(nodes[k], Interval{-half, half}, Interval{-half, half});
    curvature_norms[k] = curvature_matrix(provider, fam, 0.0, 0.0, fd_step).norm();
  });

  std::vector<RouteDefect> defects = catalogue_defects(provider, region, steps);

  FlatnessVerdict verdict;
  verdict.curvature_tolerance = curvature_tolerance;
  verdict.defect_tolerance = defect_tolerance;
  verdict.curvature_sup =
      *std::max_element(curvature_norms.begin(), curvature_norms.end());
  for (const RouteDefect& entry : defects) {
    if (entry.defect >= verdict.max_defect) {
      verdict.max_defect = entry.defect;
      verdict.worst_pair = entry.description;
    }
  }
  verdict.flat_by_curvature = verdict.curvature_sup <= curvature_tolerance;
  verdict.flat_by_transport = verdict.max_defect <= defect_tolerance;
  verdict.consistent = verdict.flat_by_curvature == verdict.flat_by_transport;
  return verdict;
}

FrameField construct_flat_frame(const CoefficientProvider& provider,
                                const RegionGrid& region, const Vec& x0,
                                const Mat& seed_basis, int steps,
                                double defect_tolerance) {
  int n = provider.fibre_dim();
  if (seed_basis.rows() != n || seed_basis.cols() != n)
    throw std::invalid_argument("flat frame: seed basis must be " + std::to_string(n) +
                                "x" + std::to_string(n));
  double cond = condition_number(seed_basis);
  if (!(cond < kConditionLimit))
    throw numeric_error("flat frame: seed basis is singular or near-singular, condition " +
                        format_double(cond));
  if (!(defect_tolerance > 0.0))
    throw std::invalid_argument("flat frame: defect tolerance must be positive");

  for (const RouteDefect& entry : catalogue_defects(provider, region, steps)) {
    if (entry.defect > defect_tolerance)
      throw not_flat_error("transports are path-dependent: defect " +
                               format_double(entry.defect) + " between " +
                               entry.description + "; cannot build a flat frame",
                           entry.defect);
  }

  Vec anchor = x0;
  Mat seed = seed_basis;
  auto basis = [provider, anchor, seed, steps](const Vec& x) -> Mat {
    std::vector<Vec> nodes = axis_route_nodes(anchor, x);
    if (nodes.size() < 2) return seed;
    Path route = Path::polyline(nodes, "frame route");
    return full_range_transport(provider, route, steps) * seed;
  };
  return FrameField(basis, "flat frame from " + fmt_point(x0));
}

}  // namespace ltp
