#include "haarkit/algebra.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace haarkit {

namespace {

GroupoidFunction promote(const GroupoidFunction& f, int level) {
  if (f.level() == level) return f;
  GroupoidFunction out(f.alphabet(), level, f.relation());
  const int d = f.alphabet();
  const int r = f.relation().depth();
  for (std::size_t t = 0; t < out.tail_count(); ++t) {
    Word tail = word_at(t, level - r, d);
    std::size_t src_tail = word_index(
        std::span<const Symbol>(tail).subspan(0, f.level() - r), d);
    for (std::size_t u = 0; u < out.block_dim(); ++u)
      for (std::size_t v = 0; v < out.block_dim(); ++v)
        out.block(t, u, v) = f.block(src_tail, u, v);
  }
  return out;
}

}  // namespace

GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& g,
                          const KernelObject& kernel) {
  if (f.alphabet() != g.alphabet() ||
      f.relation().depth() != g.relation().depth())
    throw std::invalid_argument("convolve: incompatible operands");
  const int level = std::max({f.level(), g.level(), kernel.level()});
  GroupoidFunction ff = promote(f, level);
  GroupoidFunction gg = promote(g, level);
  GroupoidFunction out(f.alphabet(), level, f.relation());
  const int d = f.alphabet();
  const int r = f.relation().depth();
  const std::size_t B = out.block_dim();
  for (std::size_t t = 0; t < out.tail_count(); ++t) {
    Word tail = word_at(t, level - r, d);
    for (std::size_t v = 0; v < B; ++v) {
      Word y = word_at(v, r, d);
      y.insert(y.end(), tail.begin(), tail.end());
      std::vector<double> nu = kernel.weights(y);
      for (std::size_t u = 0; u < B; ++u) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t s = 0; s < B; ++s)
          acc += gg.block(t, u, s) * ff.block(t, s, v) * nu[s];
        out.block(t, u, v) = acc;
      }
    }
  }
  return out;
}

GroupoidFunction involution(const GroupoidFunction& f) {
  GroupoidFunction out(f.alphabet(), f.level(), f.relation());
  for (std::size_t t = 0; t < f.tail_count(); ++t)
    for (std::size_t u = 0; u < f.block_dim(); ++u)
      for (std::size_t v = 0; v < f.block_dim(); ++v)
        out.block(t, u, v) = std::conj(f.block(t, v, u));
  return out;
}

double i_norm(const GroupoidFunction& f, const KernelObject& kernel) {
  const int d = f.alphabet();
  const int r = f.relation().depth();
  const int level = std::max(f.level(), kernel.level());
  GroupoidFunction ff = promote(f, level);
  double into = 0.0, outof = 0.0;
  for (std::size_t t = 0; t < ff.tail_count(); ++t) {
    Word tail = word_at(t, level - r, d);
    for (std::size_t v = 0; v < ff.block_dim(); ++v) {
      Word y = word_at(v, r, d);
      y.insert(y.end(), tail.begin(), tail.end());
      std::vector<double> nu = kernel.weights(y);
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t u = 0; u < ff.block_dim(); ++u) {
        s1 += std::abs(ff.block(t, u, v)) * nu[u];
        s2 += std::abs(ff.block(t, v, u)) * nu[u];
      }
      into = std::max(into, s1);
      outof = std::max(outof, s2);
    }
  }
  return std::max(into, outof);
}

PositivityVerdict is_positive(const GroupoidFunction& h, std::size_t tail,
                              double tol) {
  const std::size_t B = h.block_dim();
  Eigen::MatrixXcd H(B, B);
  for (std::size_t u = 0; u < B; ++u)
    for (std::size_t v = 0; v < B; ++v) H(u, v) = h.block(tail, u, v);
  double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) return PositivityVerdict{false, false, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  double min_ev = es.eigenvalues().minCoeff();
  return PositivityVerdict{true, min_ev >= -tol, min_ev};
}

std::complex<double> state_eval(const CylinderMeasure& mu,
                                const GroupoidFunction& f) {
  const int d = f.alphabet();
  const int r = f.relation().depth();
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t t = 0; t < f.tail_count(); ++t) {
    Word tail = word_at(t, f.level() - r, d);
    for (std::size_t u = 0; u < f.block_dim(); ++u) {
      Word w = word_at(u, r, d);
      w.insert(w.end(), tail.begin(), tail.end());
      acc += f.block(t, u, u) * mu.weight(w);
    }
  }
  return acc;
}

KernelObject scale_kernel(const std::string& name, PairWeight f, int f_level,
                          const KernelObject& nu) {
  const int d = nu.alphabet();
  const int r = nu.depth();
  const int level = std::max(nu.level(), f_level);
  return KernelObject(
      name, d, r, level, [f, nu, d, r](std::span<const Symbol> y) {
        std::vector<double> w = nu.weights(y);
        for (std::size_t ui = 0; ui < w.size(); ++ui) {
          Word x = word_at(ui, r, d);
          x.insert(x.end(), y.begin() + r, y.end());
          w[ui] *= f(x, y);
        }
        return w;
      });
}

KernelObject scale_by_cocycle(const Cocycle& coc, const KernelObject& nu,
                              int relation_depth) {
  const int d = nu.alphabet();
  auto weight = [coc, d](std::span<const Symbol> x, std::span<const Symbol> y) {
    Point px(d, Word(x.begin(), x.end()), 1);
    Point py(d, Word(y.begin(), y.end()), 1);
    return std::exp(coc.log_modular(px, py));
  };
  return scale_kernel("delta*" + nu.name(), weight,
                      coc.constancy_level(relation_depth), nu);
}

KernelObject kernel_convolve(const KernelObject& l1, const KernelObject& l2) {
  if (l1.alphabet() != l2.alphabet() || l1.depth() != l2.depth())
    throw std::invalid_argument("kernel_convolve: incompatible kernels");
  const int d = l1.alphabet();
  const int r = l1.depth();
  const int level = std::max(l1.level(), l2.level());
  return KernelObject(
      "(" + l1.name() + "*" + l2.name() + ")", d, r, level,
      [l1, l2, d, r](std::span<const Symbol> y) {
        std::vector<double> w1 = l1.weights(y);
        std::vector<double> out(w1.size(), 0.0);
        for (std::size_t xi = 0; xi < w1.size(); ++xi) {
          if (w1[xi] == 0.0) continue;
          Word x = word_at(xi, r, d);
          x.insert(x.end(), y.begin() + r, y.end());
          std::vector<double> w2 = l2.weights(x);
          for (std::size_t s = 0; s < out.size(); ++s)
            out[s] += w2[s] * w1[xi];
        }
        return out;
      });
}

double kernel_distance(const KernelObject& a, const KernelObject& b,
                       int depth) {
  if (a.alphabet() != b.alphabet() || a.depth() != b.depth())
    throw std::invalid_argument("kernel_distance: incompatible kernels");
  const int d = a.alphabet();
  const int n = std::max({depth, a.level(), b.level()});
  double dist = 0.0;
  for (std::size_t wi = 0; wi < word_count(n, d); ++wi) {
    Word w = word_at(wi, n, d);
    auto wa = a.weights(w);
    auto wb = b.weights(w);
    for (std::size_t i = 0; i < wa.size(); ++i)
      dist = std::max(dist, std::abs(wa[i] - wb[i]));
  }
  return dist;
}

double transverse_measure_eval(const TransverseMeasureSpec& spec,
                               const KernelObject& nu, int depth) {
  const int d = spec.base.alphabet();
  const int r = nu.depth();
  const int n = std::max({depth, nu.level(),
                          spec.modular.constancy_level(r), r});
  double acc = 0.0;
  for (std::size_t wi = 0; wi < word_count(n, d); ++wi) {
    Word w = word_at(wi, n, d);
    double mw = spec.base.weight(w);
    if (mw == 0.0) continue;
    Point pw(d, w, 1);
    std::vector<double> weights = nu.weights(w);
    double inner = 0.0;
    for (std::size_t si = 0; si < weights.size(); ++si) {
      if (weights[si] == 0.0) continue;
      Word s = word_at(si, r, d);
      s.insert(s.end(), w.begin() + r, w.end());
      Point ps(d, s, 1);
      // delta(s,x)^{-1} = delta(x,s)
      inner += std::exp(spec.modular.log_modular(pw, ps)) * weights[si];
    }
    acc += inner * mw;
  }
  return acc;
}

}  // namespace haarkit
