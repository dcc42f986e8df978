#pragma once

#include "haarkit/measures.hpp"
#include "haarkit/potential.hpp"

namespace haarkit {

// Perron data of the transfer operator L_A for a finite-memory potential:
// L_A(eigfn) = lambda * eigfn and L_A^*(eigmeasure) = lambda * eigmeasure.
struct EigenData {
  double lambda;
  LocallyConstantFunction eigfn;  // level k-1, positive, sup-normalized
  CylinderMeasure eigmeasure;     // total mass 1
};

// (L_A v)(x) = sum_a e^{A(a,x_1,...,x_{k-1})} v(a,x_1,...,x_{m-1}),
// exact on the level grid; the result lives at level max(k-1, m-1, 1).
LocallyConstantFunction apply_transfer(const Potential& A,
                                       const LocallyConstantFunction& v);

// Power iteration on the d^{k-1} transfer matrix, sup-norm renormalized;
// stops when successive lambda estimates differ by < 1e-14 (cap 1e5 steps).
EigenData eigendata(const Potential& A);

// B = A + log h - log(h o sigma) - log lambda, so that L_B(1) = 1.
Potential normalize(const Potential& A);

// Density transfer along a coboundary B = A + log h - log(h o sigma) - c:
// returns the normalized reweighting h * M. The additive constant c only
// rescales the density and is absorbed by the normalization.
CylinderMeasure coboundary_transfer(const CylinderMeasure& M,
                                    const LocallyConstantFunction& h,
                                    double c = 0.0);

}  // namespace haarkit
