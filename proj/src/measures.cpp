#include "haarkit/measures.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace haarkit {

namespace {
constexpr double kProbTol = 1e-12;
}

CylinderMeasure::CylinderMeasure(int d, std::string descriptor, Oracle oracle)
    : d_(d), descriptor_(std::move(descriptor)), oracle_(std::move(oracle)) {
  if (d_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
}

StochasticMatrix::StochasticMatrix(int d, std::vector<double> entries)
    : d_(d), entries_(std::move(entries)) {
  if (d_ < 2) throw std::invalid_argument("matrix dimension must be >= 2");
  if (entries_.size() != static_cast<std::size_t>(d_) * d_)
    throw std::invalid_argument("matrix needs d*d entries");
  for (double e : entries_)
    if (e < 0.0) throw std::invalid_argument("matrix entries must be >= 0");
  for (int j = 1; j <= d_; ++j) {
    double col = 0.0;
    for (int i = 1; i <= d_; ++i) col += (*this)(i, j);
    if (std::abs(col - 1.0) > kProbTol)
      throw std::invalid_argument("matrix is not column-stochastic");
  }
}

double StochasticMatrix::row_sum(int i) const {
  double s = 0.0;
  for (int j = 1; j <= d_; ++j) s += (*this)(i, j);
  return s;
}

static void check_probability_vector(const std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::invalid_argument("probability entries must be >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw std::invalid_argument("probability vector does not sum to 1");
}

CylinderMeasure bernoulli(const std::vector<double>& p) {
  check_probability_vector(p);
  int d = static_cast<int>(p.size());
  return CylinderMeasure(d, "bernoulli",
                         [p](std::span<const Symbol> w) {
                           double m = 1.0;
                           for (Symbol a : w) m *= p[a - 1];
                           return m;
                         });
}

CylinderMeasure markov(const StochasticMatrix& P,
                       const std::vector<double>& pi) {
  check_probability_vector(pi);
  if (static_cast<int>(pi.size()) != P.dim())
    throw std::invalid_argument("markov: dimension mismatch");
  return CylinderMeasure(
      P.dim(), "markov", [P, pi](std::span<const Symbol> w) {
        if (w.empty()) return 1.0;
        double m = 1.0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) m *= P(w[i], w[i + 1]);
        return m * pi[w.back() - 1];
      });
}

std::vector<double> stationary_vector(const StochasticMatrix& P) {
  const int d = P.dim();
  // Irreducibility: the directed graph with an edge j -> i whenever
  // P(i,j) > 0 must be strongly connected.
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(d, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int j = stack.back();
      stack.pop_back();
      for (int i = 0; i < d; ++i) {
        double e = transpose ? P(j + 1, i + 1) : P(i + 1, j + 1);
        if (e > 0.0 && !seen[i]) {
          seen[i] = true;
          stack.push_back(i);
        }
      }
    }
    for (bool s : seen)
      if (!s) return false;
    return true;
  };
  if (!reach(false) || !reach(true))
    throw std::invalid_argument("stationary_vector: matrix is reducible");

  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = P(i + 1, j + 1) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < d; ++j) A(0, j) = 1.0;  // replaces one redundant row
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  b(0) = 1.0;
  Eigen::VectorXd x = A.fullPivLu().solve(b);

  double residual = 0.0;
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) row += P(i + 1, j + 1) * x(j);
    residual = std::max(residual, std::abs(row - x(i)));
  }
  if (residual > kProbTol)
    throw std::runtime_error("stationary_vector: residual exceeds 1e-12");
  return std::vector<double>(x.data(), x.data() + d);
}

std::vector<double> thermo_weights(const Potential& phi, int n) {
  const int d = phi.alphabet();
  if (n < phi.memory())
    throw std::invalid_argument("thermo_weights: n must be >= potential memory");
  std::size_t count = word_count(n, d);
  std::vector<double> weights(count);
  double z = 0.0;
  for (std::size_t idx = 0; idx < count; ++idx) {
    Word w = word_at(idx, n, d);
    Point p(d, w, 1);
    double s = 0.0;
    Point q = p;
    for (int i = 0; i < n; ++i) {
      s += phi.at_point(q);
      q = shift(q);
    }
    weights[idx] = std::exp(-s);
    z += weights[idx];
  }
  for (double& w : weights) w /= z;
  return weights;
}

CylinderMeasure reweight(const CylinderMeasure& mu,
                         const LocallyConstantFunction& v, bool normalize) {
  const int d = mu.alphabet();
  if (v.alphabet() != d)
    throw std::invalid_argument("reweight: alphabet mismatch");
  for (double x : v.table())
    if (x < 0.0) throw std::invalid_argument("reweight: v must be >= 0");
  const int m = v.level();

  double z = 1.0;
  if (normalize) {
    z = 0.0;
    for (std::size_t idx = 0; idx < word_count(m, d); ++idx) {
      Word u = word_at(idx, m, d);
      z += v.at_word(u) * mu.weight(u);
    }
    if (z <= 0.0) throw std::invalid_argument("reweight: zero total mass");
  }

  return CylinderMeasure(
      d, "reweighted", [mu, v, m, d, z](std::span<const Symbol> w) {
        if (static_cast<int>(w.size()) >= m) return v.at_word(w) * mu.weight(w) / z;
        // refine to level m
        int extra = m - static_cast<int>(w.size());
        double total = 0.0;
        for (std::size_t e = 0; e < word_count(extra, d); ++e) {
          Word u(w.begin(), w.end());
          Word suffix = word_at(e, extra, d);
          u.insert(u.end(), suffix.begin(), suffix.end());
          total += v.at_word(u) * mu.weight(u);
        }
        return total / z;
      });
}

}  // namespace haarkit
