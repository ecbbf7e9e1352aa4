#include "ltp/holonomy.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "ltp/curvature.hpp"

namespace ltp {

OrderFit convergence_order(const std::vector<std::pair<double, double>>& h_and_residual) {
  if (h_and_residual.size() < 3) {
    throw std::invalid_argument("convergence_order needs at least 3 (h, residual) samples");
  }
  OrderFit fit;
  fit.points = static_cast<int>(h_and_residual.size());
  for (const auto& [h, r] : h_and_residual) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("convergence_order: step sizes must be positive");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("convergence_order: residuals must be nonnegative");
    }
    if (r <= 10.0 * DBL_EPSILON) fit.at_floor = true;
  }
  if (fit.at_floor) return fit;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [h, r] : h_and_residual) {
    const double x = std::log(h);
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(fit.points);
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) {
    throw std::invalid_argument("convergence_order: step sizes must not repeat");
  }
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

namespace {

int leg_steps_for(double span, int requested) {
  return requested > 0 ? requested : default_steps(span);
}

}  // namespace

Vec pentagon_defect(const CoefficientProvider& provider, const Family& family, double s,
                    double t, double delta, double eps, int steps) {
  family.require_params(s, t, "pentagon_defect");
  family.require_params(s + delta, t + eps, "pentagon_defect");
  const Vec a = delta * family.d_s(s, t);
  const Vec b = eps * family.d_t(s, t);
  const Path row = extract_row_path(family, t);
  const Path col = extract_col_path(family, s);
  const Vec lb = transport_vector(provider, row, s, s + delta, b, leg_steps_for(delta, steps));
  const Vec la = transport_vector(provider, col, t, t + eps, a, leg_steps_for(eps, steps));
  return (lb - la) - (b - a);
}

DoubleTransportDefect double_transport_defect(const CoefficientProvider& provider,
                                              const Family& family, double s, double t,
                                              double delta, double eps, int steps) {
  family.require_params(s, t, "double_transport_defect");
  family.require_params(s + delta, t + eps, "double_transport_defect");
  const Vec a = delta * family.d_s(s, t);
  const Vec b = eps * family.d_t(s, t);
  const Path row_t = extract_row_path(family, t);
  const Path row_te = extract_row_path(family, t + eps);
  const Path col_s = extract_col_path(family, s);
  const Path col_sd = extract_col_path(family, s + delta);
  const int row_steps = leg_steps_for(delta, steps);
  const int col_steps = leg_steps_for(eps, steps);

  const Vec b_row = transport_vector(provider, row_t, s, s + delta, b, row_steps);
  const Vec b_around = transport_vector(provider, col_sd, t, t + eps, b_row, col_steps);
  const Vec a_col = transport_vector(provider, col_s, t, t + eps, a, col_steps);
  const Vec a_around = transport_vector(provider, row_te, s, s + delta, a_col, row_steps);

  DoubleTransportDefect out;
  out.composed_difference = b_around - a_around;
  out.bracket = transport_vector(provider, col_s, t, t + eps, b, col_steps) -
                transport_vector(provider, row_t, s, s + delta, a, row_steps);
  out.torsion_term = delta * eps * torsion_components(provider, family, s, t);
  out.remainder = out.composed_difference - out.bracket + out.torsion_term;
  return out;
}

Mat loop_holonomy(const CoefficientProvider& provider, const Family& family, double s,
                  double t, double delta, double eps, int steps) {
  family.require_params(s, t, "loop_holonomy");
  family.require_params(s + delta, t + eps, "loop_holonomy");
  const int leg_steps =
      steps > 0 ? steps : std::max(default_steps(delta), default_steps(eps));
  const Path row_t = extract_row_path(family, t);
  const Path col_sd = extract_col_path(family, s + delta);
  const Path row_te = extract_row_path(family, t + eps);
  const Path col_s = extract_col_path(family, s);
  const Mat h1 = transport_matrix(provider, row_t, s, s + delta, leg_steps).value;
  const Mat h2 = transport_matrix(provider, col_sd, t, t + eps, leg_steps).value;
  const Mat h3 = transport_matrix(provider, row_te, s + delta, s, leg_steps).value;
  const Mat h4 = transport_matrix(provider, col_s, t + eps, t, leg_steps).value;
  return h4 * h3 * h2 * h1;
}

Vec loop_holonomy_vector(const CoefficientProvider& provider, const Family& family, double s,
                         double t, double delta, double eps, const Vec& u, int steps) {
  family.require_params(s, t, "loop_holonomy_vector");
  family.require_params(s + delta, t + eps, "loop_holonomy_vector");
  const int leg_steps =
      steps > 0 ? steps : std::max(default_steps(delta), default_steps(eps));
  Vec v = transport_vector(provider, extract_row_path(family, t), s, s + delta, u, leg_steps);
  v = transport_vector(provider, extract_col_path(family, s + delta), t, t + eps, v, leg_steps);
  v = transport_vector(provider, extract_row_path(family, t + eps), s + delta, s, v, leg_steps);
  v = transport_vector(provider, extract_col_path(family, s), t + eps, t, v, leg_steps);
  return v;
}

HolonomyEstimate holonomy_curvature_estimate(const CoefficientProvider& provider,
                                             const Family& family, double s, double t,
                                             const std::vector<double>& h_sequence,
                                             int steps) {
  if (h_sequence.size() < 2) {
    throw std::invalid_argument("holonomy_curvature_estimate needs at least 2 loop sizes");
  }
  for (std::size_t i = 0; i < h_sequence.size(); ++i) {
    if (!(h_sequence[i] > 0.0)) {
      throw std::invalid_argument("holonomy_curvature_estimate: loop sizes must be positive");
    }
    if (i > 0 && !(h_sequence[i] < h_sequence[i - 1])) {
      throw std::invalid_argument(
          "holonomy_curvature_estimate: loop sizes must strictly decrease");
    }
  }

  const int n = provider.fibre_dim();
  const Mat eye = Mat::Identity(n, n);
  HolonomyEstimate out;
  out.estimates.reserve(h_sequence.size());
  for (const double h : h_sequence) {
    const Mat hol = loop_holonomy(provider, family, s, t, h, h, steps);
    out.estimates.emplace_back(h, Mat(-(hol - eye) / (h * h)));
  }

  const int levels = static_cast<int>(out.estimates.size());
  const Mat& fine = out.estimates[levels - 1].second;
  const Mat& coarse = out.estimates[levels - 2].second;
  const double hf = out.estimates[levels - 1].first;
  const double hc = out.estimates[levels - 2].first;

  double p = 1.0;
  if (levels >= 3) {
    const double d_prev =
        (out.estimates[levels - 2].second - out.estimates[levels - 3].second).norm();
    const double d_last = (fine - coarse).norm();
    const double rho = hf / hc;
    if (d_prev > 0.0 && d_last > 0.0) {
      p = std::clamp(std::log(d_last / d_prev) / std::log(rho), 0.5, 4.0);
    }
  }
  out.fitted_order = p;

  const double scale = 1.0 + fine.norm();
  if ((fine - coarse).norm() <= 100.0 * DBL_EPSILON * scale) {
    out.value = fine;
  } else {
    const double wc = std::pow(hc, p);
    const double wf = std::pow(hf, p);
    out.value = (wc * fine - wf * coarse) / (wc - wf);
  }

  if (levels >= 3) {
    std::vector<std::pair<double, double>> res;
    res.reserve(out.estimates.size());
    for (const auto& [h, est] : out.estimates) {
      res.emplace_back(h, (est - out.value).norm());
    }
    out.residual_fit = convergence_order(res);
  } else {
    out.residual_fit.points = levels;
  }
  return out;
}

}  // namespace ltp
