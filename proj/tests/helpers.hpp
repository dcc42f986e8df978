#pragma once

#include <random>
#include <vector>

#include "haarkit/groupoid.hpp"
#include "haarkit/measures.hpp"
#include "haarkit/potential.hpp"
#include "haarkit/symbolic.hpp"

namespace haarkit::testing {

inline std::mt19937_64 rng(std::uint64_t seed = 0) {
  return std::mt19937_64(seed);
}

inline Point random_point(std::mt19937_64& gen, int d, int max_head = 6) {
  std::uniform_int_distribution<int> len(0, max_head);
  std::uniform_int_distribution<int> sym(1, d);
  int n = len(gen);
  Word head(n);
  for (int i = 0; i < n; ++i) head[i] = sym(gen);
  return Point(d, std::move(head), sym(gen));
}

inline Word random_word(std::mt19937_64& gen, int d, int n) {
  std::uniform_int_distribution<int> sym(1, d);
  Word w(n);
  for (int i = 0; i < n; ++i) w[i] = sym(gen);
  return w;
}

inline std::vector<double> random_probability(std::mt19937_64& gen, int d) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> p(d);
  double total = 0.0;
  for (double& x : p) {
    x = u(gen);
    total += x;
  }
  for (double& x : p) x /= total;
  // remove rounding drift so the sum is exactly 1
  double s = 0.0;
  for (int i = 0; i < d - 1; ++i) s += p[i];
  p[d - 1] = 1.0 - s;
  return p;
}

inline StochasticMatrix random_column_stochastic(std::mt19937_64& gen, int d) {
  std::vector<double> entries(d * d);
  for (int j = 0; j < d; ++j) {
    auto col = random_probability(gen, d);
    for (int i = 0; i < d; ++i) entries[i * d + j] = col[i];
  }
  return StochasticMatrix(d, std::move(entries));
}

inline Potential random_potential(std::mt19937_64& gen, int d, int k,
                                  double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> table(word_count(k, d));
  for (double& x : table) x = u(gen);
  return Potential(d, k, std::move(table));
}

inline LocallyConstantFunction random_function(std::mt19937_64& gen, int d,
                                               int level, double lo = 0.2,
                                               double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> table(word_count(level, d));
  for (double& x : table) x = u(gen);
  return LocallyConstantFunction(d, level, std::move(table));
}

inline GroupoidFunction random_groupoid_function(std::mt19937_64& gen, int d,
                                                 int level, const Relation& rel,
                                                 bool complex_valued = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GroupoidFunction f(d, level, rel);
  for (std::size_t t = 0; t < f.tail_count(); ++t)
    for (std::size_t a = 0; a < f.block_dim(); ++a)
      for (std::size_t b = 0; b < f.block_dim(); ++b)
        f.block(t, a, b) = {u(gen), complex_valued ? u(gen) : 0.0};
  return f;
}

// A random kernel with strictly positive weights (not transverse).
inline KernelObject random_kernel(std::mt19937_64& gen, int d,
                                  const Relation& rel, int level,
                                  bool normalized = false) {
  const int r = rel.depth();
  std::size_t fsize = word_count(r, d);
  std::size_t bases = word_count(level, d);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  std::vector<std::vector<double>> table(bases, std::vector<double>(fsize));
  for (auto& row : table) {
    double total = 0.0;
    for (double& x : row) {
      x = u(gen);
      total += x;
    }
    if (normalized)
      for (double& x : row) x /= total;
  }
  return KernelObject(
      "random", d, r, level,
      [table, level, d](std::span<const Symbol> y) {
        return table[word_index(y.subspan(0, level), d)];
      });
}

inline double measure_consistency_defect(const CylinderMeasure& mu,
                                         std::mt19937_64& gen, int samples,
                                         int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Word w = random_word(gen, mu.alphabet(), len(gen));
    double total = 0.0;
    for (Symbol a = 1; a <= mu.alphabet(); ++a) {
      Word wa = w;
      wa.push_back(a);
      total += mu.weight(wa);
    }
    worst = std::max(worst, std::abs(total - mu.weight(w)));
  }
  return worst;
}

}  // namespace haarkit::testing
