#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ltp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Closed parameter interval [a, b] with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  bool contains(double s) const { return s >= a && s <= b; }
  double clamp(double s) const { return s < a ? a : (s > b ? b : s); }
};

inline void require_interval(const Interval& iv, const char* what) {
  if (!(iv.a < iv.b))
    throw std::invalid_argument(std::string(what) + ": interval needs a < b");
}

// Raised when a numeric quantity is unusable: non-finite samples, singular or
// ill-conditioned frames, residuals that cannot be computed.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) throw numeric_error(what + ": non-finite entries");
}

inline void require_finite(const Vec& v, const std::string& what) {
  if (!v.allFinite()) throw numeric_error(what + ": non-finite entries");
}

std::string format_double(double x);

}  // namespace ltp
