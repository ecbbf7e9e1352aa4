#include "ltp/curvature.hpp"

#include <cmath>

#include "ltp/derivation.hpp"
#include "ltp/fd.hpp"

namespace ltp {

namespace {

void require_tangent_bundle(const CoefficientProvider& provider, const char* what) {
  if (provider.fibre_dim() != provider.base_dim())
    throw std::invalid_argument(std::string(what) +
                                ": torsion requires a tangent-bundle chart "
                                "(fibre_dim == base_dim)");
}

Mat gamma_row(const CoefficientProvider& provider, const Family& family, double s, double t) {
  return provider.coeff(extract_row_path(family, t), s);
}

Mat gamma_col(const CoefficientProvider& provider, const Family& family, double s, double t) {
  return provider.coeff(extract_col_path(family, s), t);
}

// Section partial with analytic fallback: d/ds of sec at (s, t).
Vec section_ds(const FamilySection& sec, const Family& family, double s, double t) {
  if (sec.has_d_s()) return sec.d_s(s, t);
  return fd_derivative1([&sec, t](double u) { return sec.components(u, t); }, s, 1e-4,
                        family.s_domain());
}

Vec section_dt(const FamilySection& sec, const Family& family, double s, double t) {
  if (sec.has_d_t()) return sec.d_t(s, t);
  return fd_derivative1([&sec, s](double u) { return sec.components(s, u); }, t, 1e-4,
                        family.t_domain());
}

}  // namespace

Vec torsion_components(const CoefficientProvider& provider, const Family& family, double s,
                       double t) {
  require_tangent_bundle(provider, "torsion_components");
  family.require_params(s, t, "torsion_components");
  return gamma_row(provider, family, s, t) * family.d_t(s, t) -
         gamma_col(provider, family, s, t) * family.d_s(s, t);
}

Vec torsion_operator(const CoefficientProvider& provider, const Family& family, double s,
                     double t) {
  require_tangent_bundle(provider, "torsion_operator");
  family.require_params(s, t, "torsion_operator");

  // Row derivation of sigma -> eta''(sigma, t) at s.
  const Path row = extract_row_path(family, t);
  Section row_sec = family.has_mixed_partial()
                        ? Section([&family, t](double u) { return family.d_t(u, t); },
                                  [&family, t](double u) { return family.d_st(u, t); })
                        : Section([&family, t](double u) { return family.d_t(u, t); });
  const Vec along_row = derive_section(provider, row, row_sec, s);

  // Column derivation of tau -> eta'(s, tau) at t.
  const Path col = extract_col_path(family, s);
  Section col_sec = family.has_mixed_partial()
                        ? Section([&family, s](double u) { return family.d_s(s, u); },
                                  [&family, s](double u) { return family.d_st(s, u); })
                        : Section([&family, s](double u) { return family.d_s(s, u); });
  const Vec along_col = derive_section(provider, col, col_sec, t);

  return along_row - along_col;
}

Mat curvature_matrix(const CoefficientProvider& provider, const Family& family, double s,
                     double t, double fd_step) {
  if (fd_step <= 0.0) throw std::invalid_argument("curvature_matrix: fd_step must be > 0");
  family.require_params(s, t, "curvature_matrix");

  const Mat g_row = gamma_row(provider, family, s, t);
  const Mat g_col = gamma_col(provider, family, s, t);

  const auto col_of = [&](double sigma) { return gamma_col(provider, family, sigma, t); };
  const auto row_of = [&](double tau) { return gamma_row(provider, family, s, tau); };
  const Mat dcol_ds = fd_derivative1_central(col_of, s, fd_step, family.s_domain());
  const Mat drow_dt = fd_derivative1_central(row_of, t, fd_step, family.t_domain());

  return dcol_ds - drow_dt + g_row * g_col - g_col * g_row;
}

Mat curvature_matrix_analytic(const CoefficientProvider& provider, const Family& family,
                              double s, double t) {
  if (!provider.is_connection_induced() || !provider.has_gamma3_grad())
    throw std::logic_error(
        "curvature_matrix_analytic: needs a connection-induced provider with a declared "
        "coefficient gradient");
  if (!family.has_mixed_partial())
    throw std::logic_error("curvature_matrix_analytic: family lacks a mixed partial");
  family.require_params(s, t, "curvature_matrix_analytic");

  const Vec x = family.point(s, t);
  const Vec vs = family.d_s(s, t);
  const Vec vt = family.d_t(s, t);
  const Vec vst = family.d_st(s, t);
  const Gamma3 g3 = provider.gamma3(x);
  const Gamma3Grad grad = provider.gamma3_grad(x);
  const int n = provider.fibre_dim();
  const int m = provider.base_dim();

  // d/ds [ sum_k G_k(eta(s,t)) vt^k ] = sum_{l,k} dG_k/dx^l vs^l vt^k
  //                                     + sum_k G_k vst^k, and symmetrically.
  Mat dcol_ds = Mat::Zero(n, n);
  Mat drow_dt = Mat::Zero(n, n);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k) {
      dcol_ds += grad.by_direction[l][k] * vs[l] * vt[k];
      drow_dt += grad.by_direction[l][k] * vt[l] * vs[k];
    }
  Mat g_row = Mat::Zero(n, n), g_col = Mat::Zero(n, n);
  for (int k = 0; k < m; ++k) {
    dcol_ds += g3.by_direction[k] * vst[k];
    drow_dt += g3.by_direction[k] * vst[k];
    g_row += g3.by_direction[k] * vs[k];
    g_col += g3.by_direction[k] * vt[k];
  }
  return dcol_ds - drow_dt + g_row * g_col - g_col * g_row;
}

Vec curvature_commutator(const CoefficientProvider& provider, const Family& family,
                         const FamilySection& sec, double s, double t, double fd_step) {
  if (fd_step <= 0.0) throw std::invalid_argument("curvature_commutator: fd_step must be > 0");
  family.require_params(s, t, "curvature_commutator");
  const int n = provider.fibre_dim();
  const Vec probe = sec.components(s, t);
  if (probe.size() != n)
    throw std::invalid_argument("curvature_commutator: section has wrong component count");

  // Column derivation at (sigma, t), as a function of sigma.
  const auto d_col = [&](double sigma) -> Vec {
    return section_dt(sec, family, sigma, t) +
           gamma_col(provider, family, sigma, t) * sec.components(sigma, t);
  };
  // Row derivation at (s, tau), as a function of tau.
  const auto d_row = [&](double tau) -> Vec {
    return section_ds(sec, family, s, tau) +
           gamma_row(provider, family, s, tau) * sec.components(s, tau);
  };

  const auto fd1 = [&](const std::function<Vec(double)>& f, double at, const Interval& dom) {
    return Vec((f(std::min(at + fd_step, dom.b)) - f(std::max(at - fd_step, dom.a))) /
               (std::min(at + fd_step, dom.b) - std::max(at - fd_step, dom.a)));
  };

  // D_row (D_col sigma) at (s, t).
  const Vec row_of_col = fd1(d_col, s, family.s_domain()) +
                         gamma_row(provider, family, s, t) * d_col(s);
  // D_col (D_row sigma) at (s, t).
  const Vec col_of_row = fd1(d_row, t, family.t_domain()) +
                         gamma_col(provider, family, s, t) * d_row(t);
  return row_of_col - col_of_row;
}

std::vector<FieldSample<Mat>> curvature_field(const CoefficientProvider& provider,
                                              const Family& family, int s_count, int t_count,
                                              double fd_step) {
  if (s_count < 2 || t_count < 2)
    throw std::invalid_argument("curvature_field: grid needs >= 2 samples per axis");
  std::vector<FieldSample<Mat>> out;
  out.reserve(static_cast<std::size_t>(s_count) * t_count);
  const Interval sd = family.s_domain(), td = family.t_domain();
  for (int i = 0; i < s_count; ++i)
    for (int j = 0; j < t_count; ++j) {
      const double s = sd.a + sd.length() * i / (s_count - 1.0);
      const double t = td.a + td.length() * j / (t_count - 1.0);
      out.push_back(FieldSample<Mat>{s, t, family.point(s, t),
                                     curvature_matrix(provider, family, s, t, fd_step)});
    }
  return out;
}

std::vector<FieldSample<Vec>> torsion_field(const CoefficientProvider& provider,
                                            const Family& family, int s_count, int t_count) {
  if (s_count < 2 || t_count < 2)
    throw std::invalid_argument("torsion_field: grid needs >= 2 samples per axis");
  std::vector<FieldSample<Vec>> out;
  out.reserve(static_cast<std::size_t>(s_count) * t_count);
  const Interval sd = family.s_domain(), td = family.t_domain();
  for (int i = 0; i < s_count; ++i)
    for (int j = 0; j < t_count; ++j) {
      const double s = sd.a + sd.length() * i / (s_count - 1.0);
      const double t = td.a + td.length() * j / (t_count - 1.0);
      out.push_back(FieldSample<Vec>{s, t, family.point(s, t),
                                     torsion_components(provider, family, s, t)});
    }
  return out;
}

}  // namespace ltp
