#include "ltp/identities.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ltp/curvature.hpp"

namespace ltp {
namespace {

void require_axes(const MultiFamily& mf, const std::vector<int>& axes, int needed) {
  if (mf.k() < needed) {
    std::ostringstream msg;
    msg << "identity check needs at least " << needed << " family parameters, got " << mf.k();
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] < 0 || axes[i] >= mf.k()) {
      throw std::invalid_argument("family axis out of range");
    }
    for (std::size_t j = i + 1; j < axes.size(); ++j) {
      if (axes[i] == axes[j]) throw std::invalid_argument("family axes must be distinct");
    }
  }
}

void require_fd_step(double fd_step) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    throw std::invalid_argument("fd_step must be positive and finite");
  }
}

Mat axis_coefficient(const CoefficientProvider& provider, const MultiFamily& mf, int a) {
  return provider.coeff(mf.axis_path(a), mf.basepoint()[a]);
}

Mat pair_curvature(const CoefficientProvider& provider, const MultiFamily& mf, int a, int b,
                   double fd_step) {
  return curvature_matrix(provider, extract_pair_family(mf, a, b), mf.basepoint()[a],
                          mf.basepoint()[b], fd_step);
}

MultiFamily shifted_along(const MultiFamily& mf, int a, double sigma) {
  std::vector<double> base = mf.basepoint();
  base[a] = sigma;
  return mf.with_basepoint(std::move(base));
}

}  // namespace

Mat commutator_cycle4(const IndexedValues<Mat>& v, int a, int b, int c, int d) {
  auto comm = [&v](int p, int q, int r, int s) -> Mat {
    const Mat& left = v.at({p, q});
    const Mat& right = v.at({r, s});
    return left * right - right * left;
  };
  return comm(a, b, c, d) + comm(b, c, d, a) + comm(c, d, a, b) + comm(d, a, b, c);
}

std::pair<double, double> check_antisymmetry(const CoefficientProvider& provider,
                                             const MultiFamily& mf, int a, int b,
                                             double fd_step) {
  require_axes(mf, {a, b}, 2);
  require_fd_step(fd_step);
  const Mat r_ab = pair_curvature(provider, mf, a, b, fd_step);
  const Mat r_ba = pair_curvature(provider, mf, b, a, fd_step);
  const double residual_r = (r_ab + r_ba).norm();

  double residual_t = 0.0;
  if (provider.fibre_dim() == provider.base_dim()) {
    const Vec t_ab = torsion_components(provider, extract_pair_family(mf, a, b),
                                        mf.basepoint()[a], mf.basepoint()[b]);
    const Vec t_ba = torsion_components(provider, extract_pair_family(mf, b, a),
                                        mf.basepoint()[b], mf.basepoint()[a]);
    residual_t = (t_ab + t_ba).norm();
  }
  return {residual_r, residual_t};
}

double check_bianchi_second(const CoefficientProvider& provider, const MultiFamily& mf,
                            const Vec& test_vec, double fd_step, int a, int b, int c) {
  require_axes(mf, {a, b, c}, 3);
  require_fd_step(fd_step);
  if (test_vec.size() != provider.fibre_dim()) {
    throw std::invalid_argument("test vector size must match the fibre dimension");
  }

  Vec sum = Vec::Zero(provider.fibre_dim());
  const std::array<std::array<int, 3>, 3> shifts{{{a, b, c}, {b, c, a}, {c, a, b}}};
  for (const auto& [p, q, r] : shifts) {
    const double sigma0 = mf.basepoint()[p];
    const Mat r_plus = pair_curvature(provider, shifted_along(mf, p, sigma0 + fd_step), q, r,
                                      fd_step);
    const Mat r_minus = pair_curvature(provider, shifted_along(mf, p, sigma0 - fd_step), q, r,
                                       fd_step);
    const Mat d_r = (r_plus - r_minus) / (2.0 * fd_step);
    const Mat r_qr = pair_curvature(provider, mf, q, r, fd_step);
    const Mat gamma_p = axis_coefficient(provider, mf, p);
    sum += (d_r + gamma_p * r_qr - r_qr * gamma_p) * test_vec;
  }
  return sum.norm();
}

BianchiFirstSides check_bianchi_first(const CoefficientProvider& provider, const MultiFamily& mf,
                                      double fd_step, int a, int b, int c) {
  require_axes(mf, {a, b, c}, 3);
  require_fd_step(fd_step);
  if (provider.fibre_dim() != provider.base_dim()) {
    throw std::invalid_argument(
        "first-identity check requires a tangent-bundle chart (fibre_dim == base_dim)");
  }

  Vec lhs = Vec::Zero(provider.fibre_dim());
  Vec rhs = Vec::Zero(provider.fibre_dim());
  const std::array<std::array<int, 3>, 3> shifts{{{a, b, c}, {b, c, a}, {c, a, b}}};
  for (const auto& [p, q, r] : shifts) {
    const Vec tau_dot_r = mf.partial(r, mf.basepoint());
    lhs += pair_curvature(provider, mf, p, q, fd_step) * tau_dot_r;

    auto torsion_at = [&](double sigma) -> Vec {
      const MultiFamily shifted = shifted_along(mf, p, sigma);
      return torsion_components(provider, extract_pair_family(shifted, q, r),
                                shifted.basepoint()[q], shifted.basepoint()[r]);
    };
    const double sigma0 = mf.basepoint()[p];
    const Vec d_t = (torsion_at(sigma0 + fd_step) - torsion_at(sigma0 - fd_step)) /
                    (2.0 * fd_step);
    rhs += d_t + axis_coefficient(provider, mf, p) * torsion_at(sigma0);
  }
  return BianchiFirstSides{lhs, rhs, (lhs - rhs).norm()};
}

double check_four_point(const CoefficientProvider& provider, const MultiFamily& mf,
                        const Vec& test_vec, double fd_step, int a, int b, int c, int d) {
  require_axes(mf, {a, b, c, d}, 4);
  require_fd_step(fd_step);
  if (test_vec.size() != provider.fibre_dim()) {
    throw std::invalid_argument("test vector size must match the fibre dimension");
  }

  IndexedValues<Mat> table(2);
  const std::array<std::array<int, 2>, 4> pairs{{{a, b}, {b, c}, {c, d}, {d, a}}};
  for (const auto& [p, q] : pairs) {
    table.set({p, q}, pair_curvature(provider, mf, p, q, fd_step));
  }
  return (commutator_cycle4(table, a, b, c, d) * test_vec).norm();
}

}  // namespace ltp
