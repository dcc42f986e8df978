#include "haarkit/ruelle.hpp"

#include <cmath>
#include <stdexcept>

namespace haarkit {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kLambdaTol = 1e-14;
constexpr double kResidualTol = 1e-12;

struct SquareMatrix {
  std::size_t n;
  std::vector<double> a;  // row-major

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += at(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  SquareMatrix transposed() const {
    SquareMatrix t{n, std::vector<double>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t.at(j, i) = at(i, j);
    return t;
  }
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Perron eigenpair by power iteration with sup-norm renormalization.
std::pair<double, std::vector<double>> perron(const SquareMatrix& M) {
  std::vector<double> v(M.n, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    std::vector<double> w = M.apply(v);
    double next = sup_norm(w);
    if (next == 0.0) throw std::runtime_error("power iteration hit zero vector");
    for (double& x : w) x /= next;
    bool lambda_ok = std::abs(next - lambda) < kLambdaTol;
    lambda = next;
    v = std::move(w);
    if (lambda_ok) {
      std::vector<double> r = M.apply(v);
      double res = 0.0;
      for (std::size_t i = 0; i < M.n; ++i)
        res = std::max(res, std::abs(r[i] - lambda * v[i]));
      if (res < kResidualTol) return {lambda, v};
    }
  }
  throw std::runtime_error("power iteration did not converge");
}

// Transfer matrix on length-(k-1) words: state w receives, from a = 1..d,
// weight e^{A(a.w)} placed at the predecessor state (a, w_1..w_{k-2}).
SquareMatrix transfer_matrix(const Potential& A) {
  const int d = A.alphabet();
  const int k = A.memory();
  const std::size_t n = word_count(k - 1, d);
  SquareMatrix M{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t wi = 0; wi < n; ++wi) {
    Word w = word_at(wi, k - 1, d);
    for (Symbol a = 1; a <= d; ++a) {
      Word aw;
      aw.reserve(k);
      aw.push_back(a);
      aw.insert(aw.end(), w.begin(), w.end());
      Word u(aw.begin(), aw.begin() + (k - 1));
      M.at(wi, word_index(u, d)) += std::exp(A.at_word(aw));
    }
  }
  return M;
}

}  // namespace

LocallyConstantFunction apply_transfer(const Potential& A,
                                       const LocallyConstantFunction& v) {
  const int d = A.alphabet();
  if (v.alphabet() != d)
    throw std::invalid_argument("apply_transfer: alphabet mismatch");
  const int k = A.memory();
  const int m = v.level();
  const int out_level = std::max({k - 1, m - 1, 1});
  std::vector<double> table(word_count(out_level, d));
  for (std::size_t wi = 0; wi < table.size(); ++wi) {
    Word w = word_at(wi, out_level, d);
    double s = 0.0;
    for (Symbol a = 1; a <= d; ++a) {
      Word aw;
      aw.reserve(out_level + 1);
      aw.push_back(a);
      aw.insert(aw.end(), w.begin(), w.end());
      s += std::exp(A.at_word(aw)) * v.at_word(aw);
    }
    table[wi] = s;
  }
  return LocallyConstantFunction(d, out_level, std::move(table));
}

EigenData eigendata(const Potential& A) {
  const int d = A.alphabet();
  const int k = A.memory();

  SquareMatrix M = transfer_matrix(A);
  auto [lambda, h] = perron(M);
  auto [lambda_t, q] = perron(M.transposed());
  (void)lambda_t;  // same Perron root; q is the left eigenvector

  double qmass = 0.0;
  for (double x : q) qmass += x;
  for (double& x : q) x /= qmass;

  LocallyConstantFunction eigfn(d, k - 1, h);

  // Cylinder weights of the eigenmeasure: unroll m([w]) =
  // e^{A(w_1..w_k)} m([w_2..w_n]) / lambda down to the level-(k-1) base q.
  std::vector<double> base = q;
  auto oracle = [A, d, k, lambda = lambda, base](std::span<const Symbol> w) {
    const int n = static_cast<int>(w.size());
    if (n < k - 1) {
      // marginal over all length-(k-1) extensions
      int extra = (k - 1) - n;
      double total = 0.0;
      for (std::size_t e = 0; e < word_count(extra, d); ++e) {
        Word u(w.begin(), w.end());
        Word suffix = word_at(e, extra, d);
        u.insert(u.end(), suffix.begin(), suffix.end());
        total += base[word_index(u, d)];
      }
      return total;
    }
    double log_top = 0.0;
    for (int i = 0; i + k <= n; ++i) log_top += A.at_word(w.subspan(i, k));
    double value = std::exp(log_top) / std::pow(lambda, n - k + 1);
    return value * base[word_index(w.subspan(n - k + 1), d)];
  };

  return EigenData{lambda, std::move(eigfn),
                   CylinderMeasure(d, "eigenmeasure", std::move(oracle))};
}

Potential normalize(const Potential& A) {
  const int d = A.alphabet();
  const int k = A.memory();
  EigenData eig = eigendata(A);
  const double log_lambda = std::log(eig.lambda);
  std::vector<double> table(word_count(k, d));
  for (std::size_t wi = 0; wi < table.size(); ++wi) {
    Word w = word_at(wi, k, d);
    std::span<const Symbol> ws(w);
    double hx = eig.eigfn.at_word(ws.subspan(0, k - 1));
    double hsx = eig.eigfn.at_word(ws.subspan(1, k - 1));
    table[wi] = A.at_word(w) + std::log(hx) - std::log(hsx) - log_lambda;
  }
  return Potential(d, k, std::move(table));
}

CylinderMeasure coboundary_transfer(const CylinderMeasure& M,
                                    const LocallyConstantFunction& h,
                                    double /*c*/) {
  for (double x : h.table())
    if (x <= 0.0)
      throw std::invalid_argument("coboundary_transfer: h must be > 0");
  return reweight(M, h, true);
}

}  // namespace haarkit
