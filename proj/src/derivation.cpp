#include "ltp/derivation.hpp"

#include "ltp/fd.hpp"
#include "ltp/transport.hpp"

namespace ltp {

namespace {

Vec section_value(const Section& sec, double s, int n) {
  Vec v = sec.components(s);
  if (v.size() != n)
    throw std::invalid_argument("derive_section: section has " + std::to_string(v.size()) +
                                " components, fibre dim is " + std::to_string(n));
  return v;
}

}  // namespace

Vec derive_section(const CoefficientProvider& provider, const Path& path, const Section& sec,
                   double s) {
  path.require_param(s, "derive_section");
  const int n = provider.fibre_dim();
  const Vec value = section_value(sec, s, n);
  Vec deriv;
  if (sec.has_derivative()) {
    deriv = sec.derivative(s);
  } else {
    deriv = fd_derivative1([&sec](double u) { return sec.components(u); }, s, 1e-4,
                           path.domain());
  }
  return deriv + provider.coeff(path, s) * value;
}

Vec derive_section_limit(const CoefficientProvider& provider, const Path& path,
                         const Section& sec, double s, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("derive_section_limit: eps must be > 0");
  path.require_param(s + eps, "derive_section_limit");
  path.require_param(s - eps, "derive_section_limit");
  const int n = provider.fibre_dim();
  const int steps = std::max(4, default_steps(eps) / 100);
  const Vec ahead = transport_matrix(provider, path, s + eps, s, steps).value *
                    section_value(sec, s + eps, n);
  const Vec behind = transport_matrix(provider, path, s - eps, s, steps).value *
                     section_value(sec, s - eps, n);
  return (ahead - behind) / (2.0 * eps);
}

}  // namespace ltp
