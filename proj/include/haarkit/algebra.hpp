#pragma once

#include <complex>
#include <functional>

#include "haarkit/cocycle.hpp"
#include "haarkit/groupoid.hpp"
#include "haarkit/measures.hpp"

namespace haarkit {

// (f *_nu g)(x,y) = sum_s g(x,s) f(s,y) nu^y(s) over the fiber of y.
GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& g,
                          const KernelObject& kernel);

// f~(x,y) = conjugate of f(y,x).
GroupoidFunction involution(const GroupoidFunction& f);

// Hanh's I-norm: the larger of the two fiber-sup expressions
//   sup_y int |f(x,y)| nu^y(dx)  and  sup_y int |f(y,x)| nu^y(dx),
// evaluated exactly over every class at the function's level.
double i_norm(const GroupoidFunction& f, const KernelObject& kernel);

struct PositivityVerdict {
  bool hermitian;
  bool positive;
  double min_eigenvalue;  // of the Hermitian part; meaningless if not hermitian
};

// Builds the fiber matrix H[x][y] = h(x,y) on the class selected by `tail`
// and eigenchecks it. For strictly positive kernel weights, plain Hermitian
// positive semidefiniteness of H is equivalent to h = g * g~ for some g.
PositivityVerdict is_positive(const GroupoidFunction& h, std::size_t tail,
                              double tol = 1e-10);

// w(f) = int f(x,x) dmu(x), exact at the function's level.
std::complex<double> state_eval(const CylinderMeasure& mu,
                                const GroupoidFunction& f);

// Kernel scaled by a two-argument weight: (f nu)^y(x) = f(x,y) nu^y(x).
using PairWeight = std::function<double(std::span<const Symbol> x,
                                        std::span<const Symbol> y)>;
KernelObject scale_kernel(const std::string& name, PairWeight f, int f_level,
                          const KernelObject& nu);

// (delta nu)^y(x) = delta(x,y) nu^y(x).
KernelObject scale_by_cocycle(const Cocycle& coc, const KernelObject& nu,
                              int relation_depth);

// Convolution of kernels: (l1 * l2)^y(s) = sum_x l2^x(s) l1^y(x).
KernelObject kernel_convolve(const KernelObject& l1, const KernelObject& l2);

// Max abs difference of two kernels' weights over all depth-n base words.
double kernel_distance(const KernelObject& a, const KernelObject& b, int depth);

// A quasi-invariance pattern: base probability mu and modular function.
struct TransverseMeasureSpec {
  CylinderMeasure base;
  Cocycle modular;
};

// Lambda(nu) = sum_x sum_s delta(s,x)^{-1} nu^x(s) mu(x), exact at cylinder
// depth (automatically raised to cover the kernel and cocycle levels).
double transverse_measure_eval(const TransverseMeasureSpec& spec,
                               const KernelObject& nu, int depth);

}  // namespace haarkit
