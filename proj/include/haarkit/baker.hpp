#pragma once

#include <functional>
#include <string>
#include <vector>

#include "haarkit/cocycle.hpp"
#include "haarkit/kms.hpp"

namespace haarkit {

// Degree-2 expanding circle map T with branch point x0 (T(x0) = 1),
// inverse branches psi_1: [0,1) -> [0,x0) and psi_2: [0,1) -> [x0,1),
// expansion bound lambda > 1 and Holder data for log T'.
class CircleMap {
 public:
  static CircleMap doubling();
  // T(x) = 2x + (eps/2pi) sin(2pi x) mod 1, eps in [0, 0.5).
  static CircleMap perturbed(double eps);

  const std::string& name() const { return name_; }
  double branch_point() const { return x0_; }
  double expansion() const { return lambda_; }
  const HolderBound& holder() const { return holder_; }

  double lift(double x) const { return lift_(x); }
  double apply(double x) const;       // T(x) on [0,1)
  double derivative(double x) const { return deriv_(x); }
  int branch_of(double x) const { return x < x0_ ? 1 : 2; }
  // Inverse branch i in {1,2}; Newton with bisection fallback, tol 1e-14.
  double inverse_branch(int i, double y) const;

 private:
  CircleMap(std::string name, std::function<double(double)> lift,
            std::function<double(double)> deriv, double lambda,
            HolderBound holder);
  std::string name_;
  std::function<double(double)> lift_;
  std::function<double(double)> deriv_;
  double x0_;
  double lambda_;
  HolderBound holder_;
};

struct BakerState {
  double a;
  double b;
};

// F(a,b) = (psi_1(a), T(b)) if b < x0, else (psi_2(a), T(b)).
BakerState baker_apply(const CircleMap& map, const BakerState& z);

// n-step backward orbits of b and b0 under the branch sequence dictated by
// F^{-n}, i.e. by the forward T-orbit of a. Both orbits share each step's
// injectivity domain.
struct BackwardOrbit {
  std::vector<double> b;       // b^n, n = 1..N
  std::vector<double> s;       // s^n, n = 1..N
  std::vector<int> branches;   // branch index used at each step
};
BackwardOrbit backward_fiber_orbit(const CircleMap& map, const BakerState& z,
                                   double b0, int N);

// Truncated product V = prod_{n=1..N} T'(b^n) / T'(s^n) with its
// geometric tail bound on |log V - log V_N|.
struct VProduct {
  double value;
  double tail_bound;
};
VProduct v_product(const CircleMap& map, const BakerState& z, double b0, int N);

// Max over sampled horizontal coordinates of |log V(a,b) - log V(a',b)|:
// zero exactly when T' is constant, O(eps) otherwise.
double v_a_dependence(const CircleMap& map, double b, double b0, int N,
                      const std::vector<double>& a_samples);

// Leafwise density field psi(a,b) = V(a,b) / int_c V(a,c) dc on a midpoint
// grid, with the normalizers of the image leaves psi_i(a) precomputed.
struct BakerDensityResult {
  int grid;
  int truncation;
  double max_residual;      // the checked functional equation
  double declared_budget;   // truncation + quadrature allowance
  bool pass;
};

// Residual of psi(a,b) * (deg / T'(b)) = psi(F(a,b)) over the grid. The
// degree factor makes the identity exact for constant-derivative maps.
BakerDensityResult density_conformality_residual(const CircleMap& map, int grid, int N);

// Residual of the per-branch transport law: for each horizontal a and each
// branch, psi(F(a,b)) / (psi(a,b) T'(b)) is constant in b; reports the max
// spread of that quotient. This is the sharp identity the leafwise density
// satisfies, limited only by truncation + quadrature.
BakerDensityResult leaf_transport_residual(const CircleMap& map, int grid, int N);

// Residual of the invariant-density transport psi(a,b) T'(a~)/T'(b) =
// psi(F(a,b)); a large value certifies the quasi-invariant density is not
// the absolutely continuous invariant one.
BakerDensityResult sbr_discrepancy(const CircleMap& map, int grid, int N);

// Both sides of the fiber-exchange identity for M(da,db) = W(b) db da with
// Lebesgue fiber measures, by tensor-product midpoint quadrature of the
// given order; W is the normalized V along the reference leaf a = b0.
using FiberTestFunction = std::function<double(double a, double b, double s)>;
KmsReport baker_kms_residual(const CircleMap& map, const FiberTestFunction& f,
                             int order, int N, double b0 = 0.3,
                             double tol = 1e-6);

// max |T(psi_i(y)) - y| over a uniform grid, both branches.
double branch_consistency_residual(const CircleMap& map, int grid);

}  // namespace haarkit
