#include "ltp/transport.hpp"

#include <algorithm>
#include <cmath>

namespace ltp {

namespace {

void check_sample(const Mat& g, double u) {
  if (!g.allFinite())
    throw numeric_error("transport: non-finite coefficient sample at u = " + format_double(u));
}

// One RK4 sweep over [u0, u1] (u1 may be below u0) with `steps` equal steps,
// sampling coefficients through `leg` so endpoint evaluations stay on this
// smooth piece.
Mat integrate_leg(const CoefficientProvider& provider, const Path& leg, double u0, double u1,
                  int steps, Mat h) {
  const double du = (u1 - u0) / steps;
  const int n = h.rows();
  Mat next_start = -provider.coeff(leg, u0);
  check_sample(next_start, u0);
  for (int i = 0; i < steps; ++i) {
    const double u = u0 + i * du;
    const Mat a1 = next_start;
    const Mat amid = -provider.coeff(leg, u + 0.5 * du);
    check_sample(amid, u + 0.5 * du);
    const Mat aend = -provider.coeff(leg, u + du);
    check_sample(aend, u + du);
    const Mat k1 = a1 * h;
    const Mat k2 = amid * (h + 0.5 * du * k1);
    const Mat k3 = amid * (h + 0.5 * du * k2);
    const Mat k4 = aend * (h + du * k3);
    h += (du / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next_start = aend;
  }
  (void)n;
  return h;
}

}  // namespace

int default_steps(double span) {
  return std::max(16, static_cast<int>(std::ceil(1000.0 * std::abs(span))));
}

TransportMatrix transport_matrix(const CoefficientProvider& provider, const Path& path,
                                 double s, double t, int steps) {
  path.require_param(s, "transport_matrix");
  path.require_param(t, "transport_matrix");
  if (steps < 1) throw std::invalid_argument("transport_matrix: steps must be >= 1");
  const int n = provider.fibre_dim();
  TransportMatrix out;
  out.path_id = path.label();
  out.s = s;
  out.t = t;
  if (s == t) {
    out.value = Mat::Identity(n, n);
    return out;
  }

  // Split [s, t] at interior leg boundaries, preserving direction.
  std::vector<double> cuts{s};
  const double lo = std::min(s, t), hi = std::max(s, t);
  std::vector<double> breaks = path.interior_breaks();
  if (t < s) std::reverse(breaks.begin(), breaks.end());
  for (double br : breaks)
    if (br > lo && br < hi) cuts.push_back(br);
  cuts.push_back(t);

  const double total = std::abs(t - s);
  Mat h = Mat::Identity(n, n);
  int used = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u0 = cuts[i], u1 = cuts[i + 1];
    int leg_steps;
    if (i + 2 == cuts.size()) {
      leg_steps = std::max(1, steps - used);
    } else {
      leg_steps = std::max(1, static_cast<int>(std::lround(steps * std::abs(u1 - u0) / total)));
      leg_steps = std::min(leg_steps, steps - used - static_cast<int>(cuts.size() - i - 2));
      leg_steps = std::max(1, leg_steps);
    }
    used += leg_steps;
    // Locate the smooth leg containing (u0, u1).
    const double mid = 0.5 * (u0 + u1);
    Path leg = path;
    if (path.leg_count() > 1) {
      for (int k = 0; k < path.leg_count(); ++k) {
        const Path cand = path.leg(k);
        if (mid >= cand.domain().a && mid <= cand.domain().b) {
          leg = cand;
          break;
        }
      }
    }
    h = integrate_leg(provider, leg, u0, u1, leg_steps, std::move(h));
  }
  out.steps = used;
  out.value = std::move(h);
  require_finite(out.value, "transport_matrix");
  return out;
}

Vec transport_vector(const CoefficientProvider& provider, const Path& path, double s,
                     double t, const Vec& u, int steps) {
  if (u.size() != provider.fibre_dim())
    throw std::invalid_argument("transport_vector: fibre dim mismatch");
  if (s == t) return u;
  return transport_matrix(provider, path, s, t, steps).value * u;
}

TransportMatrix transport_from_frame_map(const FrameMap& fm, const Path& path, double s,
                                         double t) {
  path.require_param(s, "transport_from_frame_map");
  path.require_param(t, "transport_from_frame_map");
  const Mat fs = fm.frame(path, s);
  const Mat ft = fm.frame(path, t);
  const double cond = condition_number(ft);
  if (cond > kConditionLimit)
    throw numeric_error("transport_from_frame_map: frame at t = " + format_double(t) +
                        " has condition number " + format_double(cond));
  TransportMatrix out;
  out.path_id = path.label();
  out.s = s;
  out.t = t;
  out.steps = 0;
  out.value = ft.partialPivLu().solve(fs);
  require_finite(out.value, "transport_from_frame_map");
  return out;
}

Mat coefficients_from_transport(const CoefficientProvider& provider, const Path& path,
                                double s, double h) {
  if (h <= 0.0) throw std::invalid_argument("coefficients_from_transport: h must be > 0");
  path.require_param(s + h, "coefficients_from_transport");
  path.require_param(s - h, "coefficients_from_transport");
  const int steps = std::max(16, default_steps(h) / 50);
  const Mat plus = transport_matrix(provider, path, s + h, s, steps).value;
  const Mat minus = transport_matrix(provider, path, s - h, s, steps).value;
  return (plus - minus) / (2.0 * h);
}

double expansion_check(const CoefficientProvider& provider, const Path& path, double s,
                       double eps) {
  if (eps <= 0.0) throw std::invalid_argument("expansion_check: eps must be > 0");
  path.require_param(s + eps, "expansion_check");
  const Mat g = provider.coeff(path, s);
  const Mat dg = provider.coeff_param_derivative(path, s);
  const int n = provider.fibre_dim();
  const Mat predicted = Mat::Identity(n, n) - eps * g + 0.5 * eps * eps * (g * g - dg);
  const Mat h = transport_matrix(provider, path, s, s + eps, default_steps(eps)).value;
  return (h - predicted).norm();
}

}  // namespace ltp
