#pragma once

#include <optional>

#include "haarkit/groupoid.hpp"
#include "haarkit/potential.hpp"
#include "haarkit/symbolic.hpp"

namespace haarkit {

// Holder data (C, alpha) for log T' together with the expansion bound
// lambda > 1; controls the tail of truncated infinite-product cocycles.
struct HolderBound {
  double C;
  double alpha;
  double lambda;
};

// |log(true delta) - log(truncated delta)| <= C * sum_{n>N} lambda^{-n alpha},
// in closed form C * lambda^{-(N+1) alpha} / (1 - lambda^{-alpha}).
double product_tail_bound(const HolderBound& holder, int N);

// Modular functions, all following the single sign convention
//   c(x,y) = phi(y) - phi(x),   delta(x,y) = e^{-beta c(y,x)} = e^{beta (phi(y) - phi(x))},
// where phi is the generator named below.
//   PotentialDiff(phi)        phi itself (a level-m function on G^0)
//   BirkhoffSum(A, k)         phi = A + A o sigma + ... + A o sigma^{k-1}
//   TruncatedProduct(A, N)    log delta = beta * sum_{j=0}^{N} [A(sigma^j y) - A(sigma^j x)];
//                             exact on eventually-equal pairs once the orbits merge.
class Cocycle {
 public:
  enum class Kind { PotentialDiff, BirkhoffSum, TruncatedProduct };

  static Cocycle potential_diff(LocallyConstantFunction phi, double beta);
  static Cocycle birkhoff_sum(Potential A, int k, double beta);
  static Cocycle truncated_product(Potential A, int N, HolderBound holder,
                                   double beta);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  int alphabet() const { return d_; }

  // log delta(x,y), beta included.
  double log_modular(const Point& x, const Point& y) const;

  // Smallest word length at which delta is constant on cylinder pairs of a
  // relation with the given depth.
  int constancy_level(int relation_depth) const;

  // Truncation tail (0 for the exact kinds).
  double tail_bound() const;

 private:
  Cocycle(Kind kind, double beta, int d);
  Kind kind_;
  double beta_;
  int d_;
  std::optional<LocallyConstantFunction> phi_;
  std::optional<Potential> gen_;
  int steps_ = 0;  // k for BirkhoffSum, N for TruncatedProduct
  std::optional<HolderBound> holder_;
};

// delta(x,y); errors if the pair is not related.
double modular_eval(const Cocycle& coc, const Point& x, const Point& y,
                    const Relation& rel);
// Unchecked variant for callers that already know x ~ y.
double modular_eval(const Cocycle& coc, const Point& x, const Point& y);

}  // namespace haarkit
