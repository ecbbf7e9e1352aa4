#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ltp/bundle.hpp"
#include "ltp/types.hpp"

namespace ltp {

// Finite table of values indexed by tuples of small integers; the additive
// raw material for the bracket combinators below.  Values must share one
// shape so that sums and differences are defined.
template <typename T>
class IndexedValues {
 public:
  explicit IndexedValues(int arity) : arity_(arity) {
    if (arity < 2 || arity > 4) {
      throw std::invalid_argument("IndexedValues arity must be 2, 3, or 4");
    }
  }

  int arity() const { return arity_; }

  void set(const std::vector<int>& idx, T value) {
    check_arity(idx);
    table_[idx] = std::move(value);
  }

  const T& at(const std::vector<int>& idx) const {
    check_arity(idx);
    const auto it = table_.find(idx);
    if (it == table_.end()) {
      std::ostringstream msg;
      msg << "no value stored for index tuple (";
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) msg << ", ";
        msg << idx[i];
      }
      msg << ")";
      throw std::invalid_argument(msg.str());
    }
    return it->second;
  }

 private:
  void check_arity(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != arity_) {
      std::ostringstream msg;
      msg << "index tuple has " << idx.size() << " entries, table arity is " << arity_;
      throw std::invalid_argument(msg.str());
    }
  }

  int arity_;
  std::map<std::vector<int>, T> table_;
};

// A_ab - A_ba.
template <typename T>
T antisym2(const IndexedValues<T>& v, int a, int b) {
  return v.at({a, b}) - v.at({b, a});
}

// A_ab + A_ba.
template <typename T>
T cyclic2(const IndexedValues<T>& v, int a, int b) {
  return v.at({a, b}) + v.at({b, a});
}

// A_abc + A_bca + A_cab.
template <typename T>
T cyclic3(const IndexedValues<T>& v, int a, int b, int c) {
  return v.at({a, b, c}) + v.at({b, c, a}) + v.at({c, a, b});
}

// A_abcd + A_bcda + A_cdab + A_dabc.
template <typename T>
T cyclic4(const IndexedValues<T>& v, int a, int b, int c, int d) {
  return v.at({a, b, c, d}) + v.at({b, c, d, a}) + v.at({c, d, a, b}) + v.at({d, a, b, c});
}

// Nested bracket [a,[b,c]]: the cyclic defect A_abc - A_bca, antisymmetrized
// in (b, c).
template <typename T>
T nested3(const IndexedValues<T>& v, int a, int b, int c) {
  return v.at({a, b, c}) - v.at({b, c, a}) - v.at({a, c, b}) + v.at({c, b, a});
}

// Nested bracket [a,[b,[c,d]]]: the cyclic defect A_abcd - A_bcda with the
// three-index bracket applied to the remaining slots.
template <typename T>
T nested4(const IndexedValues<T>& v, int a, int b, int c, int d) {
  return v.at({a, b, c, d}) - v.at({b, c, d, a}) - v.at({a, c, d, b}) + v.at({c, d, b, a}) -
         v.at({a, b, d, c}) + v.at({b, d, c, a}) + v.at({a, d, c, b}) - v.at({d, c, b, a});
}

// Signed sum over all six permutations of (a, b, c): the three cyclic shifts
// minus the three shifts with the last two indices swapped.
template <typename T>
T antisym3(const IndexedValues<T>& v, int a, int b, int c) {
  return cyclic3(v, a, b, c) - cyclic3(v, a, c, b);
}

// Cyclic-4 sum of commutators [B_ab, B_cd] over the shifts of (a, b, c, d),
// for an arity-2 table of square matrices.  Opposite shifts contribute the
// same commutator with reversed order, so the sum cancels to roundoff for
// any table.
Mat commutator_cycle4(const IndexedValues<Mat>& v, int a, int b, int c, int d);

// Residuals of the exchange antisymmetries at the bundle basepoint:
//   first  = || R_ab(s_a, s_b) + R_ba(s_b, s_a) ||
//   second = || T_ab(s_a, s_b) + T_ba(s_b, s_a) ||
// where ab and ba are the axis-pair families of mf.  The torsion residual is
// reported as zero for non tangent-bundle charts, where torsion is not
// defined.
std::pair<double, double> check_antisymmetry(const CoefficientProvider& provider,
                                             const MultiFamily& mf, int a, int b,
                                             double fd_step = 1e-4);

// Norm of the cyclic sum, over the shifts of (a, b, c), of the derivation of
// the curvature field applied to a test vector:
//   sum_cyc [ d/dsigma_a R_bc + Gamma_a R_bc - R_bc Gamma_a ] v.
// The sigma_a-derivative differences the curvature of the (b, c) pair family
// across basepoints shifted along axis a by +/- fd_step.  Vanishes at
// O(fd_step^2) for twice-differentiable coefficients.
double check_bianchi_second(const CoefficientProvider& provider, const MultiFamily& mf,
                            const Vec& test_vec, double fd_step = 1e-3, int a = 0, int b = 1,
                            int c = 2);

struct BianchiFirstSides {
  Vec lhs;
  Vec rhs;
  double residual;
};

// Both sides of the cyclic curvature-torsion exchange identity over the
// shifts of (a, b, c):
//   lhs = sum_cyc R_ab(s_a, s_b) tau_dot_c,
//   rhs = sum_cyc D_a T_bc,
// with D_a the derivation along the axis-a path (central differences of
// step fd_step for the parameter derivative, plus the Gamma_a term).
// Requires a tangent-bundle chart.
BianchiFirstSides check_bianchi_first(const CoefficientProvider& provider, const MultiFamily& mf,
                                      double fd_step = 1e-3, int a = 0, int b = 1, int c = 2);

// Norm of the cyclic-4 sum of curvature commutators applied to a test
// vector: the axis-pair curvature matrices of mf enter commutator_cycle4
// over the shifts of (a, b, c, d).  The cancellation is algebraic, so only
// roundoff and shared finite-difference noise remain.
double check_four_point(const CoefficientProvider& provider, const MultiFamily& mf,
                        const Vec& test_vec, double fd_step = 1e-4, int a = 0, int b = 1,
                        int c = 2, int d = 3);

}  // namespace ltp
