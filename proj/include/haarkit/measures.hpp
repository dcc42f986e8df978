#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "haarkit/potential.hpp"
#include "haarkit/symbolic.hpp"

namespace haarkit {

// Exact cylinder-weight oracle. weight(empty) = 1 and, for genuinely
// countably-additive measures, weight(w) = sum_a weight(w.a).
class CylinderMeasure {
 public:
  using Oracle = std::function<double(std::span<const Symbol>)>;

  CylinderMeasure(int d, std::string descriptor, Oracle oracle);

  int alphabet() const { return d_; }
  const std::string& descriptor() const { return descriptor_; }

  double weight(std::span<const Symbol> w) const { return oracle_(w); }
  double weight(const Word& w) const { return oracle_(w); }

 private:
  int d_;
  std::string descriptor_;
  Oracle oracle_;
};

// Column-stochastic d x d matrix: sum_i P(i,j) = 1 for each column j.
class StochasticMatrix {
 public:
  StochasticMatrix(int d, std::vector<double> entries);  // row-major

  int dim() const { return d_; }
  double operator()(int i, int j) const { return entries_[(i - 1) * d_ + (j - 1)]; }
  double row_sum(int i) const;

 private:
  int d_;
  std::vector<double> entries_;
};

CylinderMeasure bernoulli(const std::vector<double>& p);

// Markov cylinder weights in the column-stochastic convention:
//   weight([x_1..x_n]) = P(x_1,x_2) P(x_2,x_3) ... P(x_{n-1},x_n) pi_{x_n}.
// Additive consistency holds exactly when P pi = pi; a non-stationary pi
// (e.g. uniform) yields the boundary-condition family used by the
// counterexample machinery.
CylinderMeasure markov(const StochasticMatrix& P, const std::vector<double>& pi);

// Unique probability vector with P pi = pi; requires irreducible P.
std::vector<double> stationary_vector(const StochasticMatrix& P);

// Thermodynamic-limit weights at level n:
//   p_w = exp(-[phi(w,1^inf) + phi(sigma w,1^inf) + ... + phi(w_n,1^inf)]) / Z_n.
// Returned as a table indexed by word_index, summing to 1.
std::vector<double> thermo_weights(const Potential& phi, int n);

// Density reweighting by a nonnegative level-m function; weights become
//   weight'(w) = sum over length-max(|w|,m) refinements of v * weight,
// divided by the total mass when `normalize` is set.
CylinderMeasure reweight(const CylinderMeasure& mu,
                         const LocallyConstantFunction& v, bool normalize);

}  // namespace haarkit
