#include "haarkit/cocycle.hpp"

#include <cmath>
#include <stdexcept>

namespace haarkit {

double product_tail_bound(const HolderBound& holder, int N) {
  if (holder.lambda <= 1.0)
    throw std::invalid_argument("tail bound needs expansion lambda > 1");
  if (holder.C < 0.0 || holder.alpha <= 0.0)
    throw std::invalid_argument("tail bound needs C >= 0 and alpha > 0");
  const double q = std::pow(holder.lambda, -holder.alpha);
  return holder.C * std::pow(q, N + 1) / (1.0 - q);
}

Cocycle::Cocycle(Kind kind, double beta, int d)
    : kind_(kind), beta_(beta), d_(d) {}

Cocycle Cocycle::potential_diff(LocallyConstantFunction phi, double beta) {
  Cocycle c(Kind::PotentialDiff, beta, phi.alphabet());
  c.phi_ = std::move(phi);
  return c;
}

Cocycle Cocycle::birkhoff_sum(Potential A, int k, double beta) {
  if (k < 1) throw std::invalid_argument("birkhoff sum needs k >= 1");
  Cocycle c(Kind::BirkhoffSum, beta, A.alphabet());
  c.gen_ = std::move(A);
  c.steps_ = k;
  return c;
}

Cocycle Cocycle::truncated_product(Potential A, int N, HolderBound holder,
                                   double beta) {
  if (N < 0) throw std::invalid_argument("truncation N must be >= 0");
  if (holder.lambda <= 1.0)
    throw std::invalid_argument("truncated product needs lambda > 1");
  Cocycle c(Kind::TruncatedProduct, beta, A.alphabet());
  c.gen_ = std::move(A);
  c.steps_ = N;
  c.holder_ = holder;
  return c;
}

double Cocycle::log_modular(const Point& x, const Point& y) const {
  switch (kind_) {
    case Kind::PotentialDiff:
      return beta_ * (phi_->at_point(y) - phi_->at_point(x));
    case Kind::BirkhoffSum: {
      double s = 0.0;
      Point xs = x, ys = y;
      for (int j = 0; j < steps_; ++j) {
        s += gen_->at_point(ys) - gen_->at_point(xs);
        xs = shift(xs);
        ys = shift(ys);
      }
      return beta_ * s;
    }
    case Kind::TruncatedProduct: {
      double s = 0.0;
      Point xs = x, ys = y;
      for (int j = 0; j <= steps_; ++j) {
        if (xs == ys) break;  // orbits merged; remaining factors are 1
        s += gen_->at_point(ys) - gen_->at_point(xs);
        xs = shift(xs);
        ys = shift(ys);
      }
      return beta_ * s;
    }
  }
  throw std::logic_error("unreachable");
}

int Cocycle::constancy_level(int relation_depth) const {
  switch (kind_) {
    case Kind::PotentialDiff:
      return phi_->level();
    case Kind::BirkhoffSum:
      return steps_ + gen_->memory() - 1;
    case Kind::TruncatedProduct:
      // factors with j >= relation depth cancel on related representatives
      return relation_depth + gen_->memory() - 1;
  }
  throw std::logic_error("unreachable");
}

double Cocycle::tail_bound() const {
  if (kind_ != Kind::TruncatedProduct) return 0.0;
  return std::abs(beta_) * product_tail_bound(*holder_, steps_);
}

double modular_eval(const Cocycle& coc, const Point& x, const Point& y,
                    const Relation& rel) {
  if (!rel.related(x, y))
    throw std::invalid_argument("modular_eval: pair is not related");
  return std::exp(coc.log_modular(x, y));
}

double modular_eval(const Cocycle& coc, const Point& x, const Point& y) {
  return std::exp(coc.log_modular(x, y));
}

}  // namespace haarkit
