#pragma once

#include <string>
#include <vector>

#include "haarkit/algebra.hpp"
#include "haarkit/cocycle.hpp"
#include "haarkit/groupoid.hpp"
#include "haarkit/measures.hpp"
#include "haarkit/potential.hpp"
#include "haarkit/ruelle.hpp"

namespace haarkit {

struct KmsReport {
  std::string test;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  int depth = 0;
  bool pass = false;
};

std::string to_json_line(const KmsReport& report);

inline constexpr double kKmsDefaultTol = 1e-10;

// Both sides of the quasi-invariance identity by exact finite summation:
//   lhs = sum_{|w|=D} sum_{s in fiber} h(s,w) nu^w(s) mu(w)
//   rhs = sum_{|w|=D'} sum_{s in fiber} h(w,s) e^{-beta c(w,s)} nu^w(s) mu(w)
// Each side is expanded at the smallest depth >= `depth` making its own
// integrand cylinder-constant, so boundary-condition weight families that
// are only finitely additive reproduce their stated values. For truncated
// cocycles the tail bound widens the pass tolerance.
KmsReport kms_residual(const CylinderMeasure& mu, const KernelObject& kernel,
                       const Relation& rel, const Cocycle& coc,
                       const GroupoidFunction& h, int depth,
                       double tol = kKmsDefaultTol,
                       const std::string& test_name = "kms");

// All rank-one indicator pairs I[x prefix=u] I[y prefix=v] with u ~ v at
// the given level.
std::vector<GroupoidFunction> indicator_family(int d, const Relation& rel,
                                               int level);

LocallyConstantFunction as_function(const Potential& A);

// mu = eigenprobability of L_{-beta phi}; checks the full indicator family
// at each requested depth for the modular function c(x,y) = phi(y) - phi(x).
std::vector<KmsReport> verify_eigen_kms(const Potential& phi, double beta,
                                           const std::vector<int>& depths,
                                           int family_level,
                                           double tol = kKmsDefaultTol);

// Runs mu and the normalized reweighting v*mu through the same indicator
// family; v must not depend on the first coordinate.
struct NonuniquenessWitness {
  std::vector<KmsReport> base;
  std::vector<KmsReport> reweighted;
  double max_cylinder_difference;  // between the two measures, at v's level
};
NonuniquenessWitness nonuniqueness_witness(const CylinderMeasure& mu,
                                           const LocallyConstantFunction& v,
                                           const KernelObject& kernel,
                                           const Relation& rel,
                                           const Cocycle& coc, int depth,
                                           int family_level,
                                           double tol = kKmsDefaultTol);

// The closing computation of the column-stochastic counterexample:
// lhs = 1/d and rhs = (sum_k P(j0,k))/d, failing exactly when row j0 does
// not sum to 1. i0 drops out of the arithmetic.
struct CounterexampleResult {
  double lhs;
  double rhs;
  bool pass;
};
CounterexampleResult markov_counterexample(const StochasticMatrix& P, int i0,
                                           int j0);

// Extremes over sampled (x, m) of
//   rho([x_1..x_m]) / exp(-P m - sum_{k=1}^{m} phi(sigma^k x)).
struct BowenRatio {
  double c1;
  double c2;
  int excluded;  // zero-weight cylinders skipped
};
BowenRatio bowen_ratio(const CylinderMeasure& rho, const Potential& phi,
                       double pressure, const std::vector<Point>& points,
                       int m_max);

// The analytic continuation alpha_{i beta}(f) = e^{-beta c} f.
GroupoidFunction twist(const GroupoidFunction& f, const Cocycle& coc);

// Gibbs vector rho_i = e^{-beta U_i} / sum_j e^{-beta U_j}.
std::vector<double> matrix_kms_state(const std::vector<double>& U, double beta);

// Level-m function of a two-sided point <a|b>, tabulated over
// (past word, future word) pairs of length m. The past word reads outward:
// a = (x_{-1}, x_{-2}, ...).
class TwoSidedFunction {
 public:
  TwoSidedFunction(int d, int level, std::vector<double> table);
  int alphabet() const { return d_; }
  int level() const { return level_; }
  double at(std::span<const Symbol> past, std::span<const Symbol> future) const;
  std::vector<double>& table() { return table_; }

 private:
  int d_;
  int level_;
  std::vector<double> table_;
};

// f(<a|b>, <a|b~>) for same-past pairs, tabulated over (a, b, b~).
class TwoSidedPairFunction {
 public:
  TwoSidedPairFunction(int d, int level, std::vector<double> table);
  int alphabet() const { return d_; }
  int level() const { return level_; }
  double at(std::span<const Symbol> past, std::span<const Symbol> b,
            std::span<const Symbol> bt) const;
  std::vector<double>& table() { return table_; }

 private:
  int d_;
  int level_;
  std::vector<double> table_;
};

// Exact triple sum over past x future x future cylinders of both sides of
// the product-construction identity: with
//   mu(g) = int int g(<a|b>) e^{V(<a|b>)} nu(db) m(da),
// lhs integrates f(x,y) e^{V(x)} nu^y(dx) dmu(y) and rhs swaps the
// arguments of f; equality is the b <-> b~ exchange.
KmsReport twosided_check(const CylinderMeasure& past_m,
                         const CylinderMeasure& future_nu,
                         const TwoSidedFunction& V,
                         const TwoSidedPairFunction& f, int depth,
                         double tol = 1e-12);

}  // namespace haarkit
