#include "ltp/fd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ltp {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < order) throw std::invalid_argument("fd_weights: not enough nodes");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][order];
  return w;
}

namespace {

// Offsets of a 5-point spacing-h stencil kept inside the domain, centered
// at s when possible.
int stencil_start(double s, double h, const Interval& domain) {
  int start = -2;
  if (s + (start + 0) * h < domain.a)
    start = static_cast<int>(std::ceil((domain.a - s) / h - 1e-12));
  if (s + (start + 4) * h > domain.b)
    start = static_cast<int>(std::floor((domain.b - s) / h + 1e-12)) - 4;
  return start;
}

}  // namespace

Vec fd_derivative1(const std::function<Vec(double)>& f, double s, double h,
                   const Interval& domain) {
  double step = h;
  if (5.0 * step > domain.length()) step = domain.length() / 8.0;
  const int start = stencil_start(s, step, domain);
  std::vector<double> nodes(5);
  for (int k = 0; k < 5; ++k) nodes[k] = s + (start + k) * step;
  const std::vector<double> w = fd_weights(s, nodes, 1);
  Vec acc = w[0] * f(nodes[0]);
  for (int k = 1; k < 5; ++k) acc += w[k] * f(nodes[k]);
  return acc;
}

Mat fd_derivative1_central(const std::function<Mat(double)>& f, double s, double h,
                           const Interval& domain) {
  double step = h;
  if (2.0 * step > domain.length()) step = domain.length() / 4.0;
  if (s - step >= domain.a && s + step <= domain.b)
    return (f(s + step) - f(s - step)) / (2.0 * step);
  if (s + 2.0 * step <= domain.b)
    return (-3.0 * f(s) + 4.0 * f(s + step) - f(s + 2.0 * step)) / (2.0 * step);
  return (3.0 * f(s) - 4.0 * f(s - step) + f(s - 2.0 * step)) / (2.0 * step);
}

}  // namespace ltp
