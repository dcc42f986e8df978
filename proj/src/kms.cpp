#include "haarkit/kms.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace haarkit {

namespace {

double rel_residual(double abs_res, double lhs, double rhs) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? abs_res / scale : 0.0;
}

std::string format_number(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string to_json_line(const KmsReport& r) {
  std::ostringstream os;
  os << "{\"test\": \"" << r.test << "\", \"lhs\": " << format_number(r.lhs)
     << ", \"rhs\": " << format_number(r.rhs)
     << ", \"abs_residual\": " << format_number(r.abs_residual)
     << ", \"rel_residual\": " << format_number(r.rel_residual)
     << ", \"depth\": " << r.depth << ", \"pass\": " << (r.pass ? "true" : "false")
     << "}";
  return os.str();
}

KmsReport kms_residual(const CylinderMeasure& mu, const KernelObject& kernel,
                       const Relation& rel, const Cocycle& coc,
                       const GroupoidFunction& h, int depth, double tol,
                       const std::string& test_name) {
  const int d = mu.alphabet();
  const int r = rel.depth();
  if (h.level() > depth)
    throw std::invalid_argument("kms_residual: h level exceeds depth");
  const int lhs_depth = std::max({depth, h.level(), kernel.level(), r});
  const int rhs_depth =
      std::max({lhs_depth, coc.constancy_level(r)});

  double lhs = 0.0;
  for (std::size_t wi = 0; wi < word_count(lhs_depth, d); ++wi) {
    Word w = word_at(wi, lhs_depth, d);
    double mw = mu.weight(w);
    if (mw == 0.0) continue;
    std::vector<double> nu = kernel.weights(w);
    double inner = 0.0;
    for (std::size_t si = 0; si < nu.size(); ++si) {
      if (nu[si] == 0.0) continue;
      Word s = word_at(si, r, d);
      s.insert(s.end(), w.begin() + r, w.end());
      inner += h.eval(s, w).real() * nu[si];
    }
    lhs += inner * mw;
  }

  double rhs = 0.0;
  for (std::size_t wi = 0; wi < word_count(rhs_depth, d); ++wi) {
    Word w = word_at(wi, rhs_depth, d);
    double mw = mu.weight(w);
    if (mw == 0.0) continue;
    std::vector<double> nu = kernel.weights(w);
    Point pw(d, w, 1);
    double inner = 0.0;
    for (std::size_t si = 0; si < nu.size(); ++si) {
      if (nu[si] == 0.0) continue;
      Word s = word_at(si, r, d);
      s.insert(s.end(), w.begin() + r, w.end());
      Point ps(d, s, 1);
      // e^{-beta c(w,s)} = delta(s,w)
      inner += h.eval(w, s).real() * std::exp(coc.log_modular(ps, pw)) * nu[si];
    }
    rhs += inner * mw;
  }

  KmsReport report;
  report.test = test_name;
  report.lhs = lhs;
  report.rhs = rhs;
  report.abs_residual = std::abs(lhs - rhs);
  report.rel_residual = rel_residual(report.abs_residual, lhs, rhs);
  report.depth = rhs_depth;
  double allowance = tol + std::abs(rhs) * std::expm1(coc.tail_bound());
  report.pass = report.abs_residual <= allowance;
  return report;
}

std::vector<GroupoidFunction> indicator_family(int d, const Relation& rel,
                                               int level) {
  std::vector<GroupoidFunction> family;
  const int r = rel.depth();
  if (level < r)
    throw std::invalid_argument("indicator_family: level below relation depth");
  for (std::size_t t = 0; t < word_count(level - r, d); ++t) {
    Word tail = word_at(t, level - r, d);
    for (std::size_t ui = 0; ui < word_count(r, d); ++ui) {
      Word u = word_at(ui, r, d);
      u.insert(u.end(), tail.begin(), tail.end());
      for (std::size_t vi = 0; vi < word_count(r, d); ++vi) {
        Word v = word_at(vi, r, d);
        v.insert(v.end(), tail.begin(), tail.end());
        family.push_back(GroupoidFunction::indicator_pair(d, rel, u, v));
      }
    }
  }
  return family;
}

LocallyConstantFunction as_function(const Potential& A) {
  return LocallyConstantFunction(A.alphabet(), A.memory(), A.table());
}

std::vector<KmsReport> verify_eigen_kms(const Potential& phi, double beta,
                                           const std::vector<int>& depths,
                                           int family_level, double tol) {
  const int d = phi.alphabet();
  Relation rel = Relation::bigger_than_two();
  KernelObject counting = HaarKernel::counting().to_kernel(rel, d);
  EigenData eig = eigendata(phi.scaled(-beta));
  Cocycle coc = Cocycle::potential_diff(as_function(phi), beta);
  auto family = indicator_family(d, rel, family_level);

  std::vector<KmsReport> reports;
  reports.reserve(depths.size() * family.size());
  for (int depth : depths) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      std::ostringstream name;
      name << "eigen depth=" << depth << " pair=" << i;
      reports.push_back(kms_residual(eig.eigmeasure, counting, rel, coc,
                                     family[i], depth, tol, name.str()));
    }
  }
  return reports;
}

NonuniquenessWitness nonuniqueness_witness(const CylinderMeasure& mu,
                                           const LocallyConstantFunction& v,
                                           const KernelObject& kernel,
                                           const Relation& rel,
                                           const Cocycle& coc, int depth,
                                           int family_level, double tol) {
  const int d = mu.alphabet();
  // v must not depend on the first coordinate (level 0 is trivially fine)
  for (std::size_t ti = 0; v.level() >= 1 && ti < word_count(v.level() - 1, d);
       ++ti) {
    Word tail = word_at(ti, v.level() - 1, d);
    Word w0;
    w0.push_back(1);
    w0.insert(w0.end(), tail.begin(), tail.end());
    double ref = v.at_word(w0);
    for (Symbol a = 2; a <= d; ++a) {
      w0[0] = a;
      if (std::abs(v.at_word(w0) - ref) > 0.0)
        throw std::invalid_argument(
            "nonuniqueness: v depends on the first coordinate");
    }
  }

  CylinderMeasure reweighted = reweight(mu, v, true);
  double max_diff = 0.0;
  for (std::size_t wi = 0; wi < word_count(v.level(), d); ++wi) {
    Word w = word_at(wi, v.level(), d);
    max_diff = std::max(max_diff,
                        std::abs(reweighted.weight(w) - mu.weight(w)));
  }

  auto family = indicator_family(d, rel, family_level);
  NonuniquenessWitness out;
  out.max_cylinder_difference = max_diff;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::ostringstream base_name, rw_name;
    base_name << "base pair=" << i;
    rw_name << "reweighted pair=" << i;
    out.base.push_back(kms_residual(mu, kernel, rel, coc, family[i], depth,
                                    tol, base_name.str()));
    out.reweighted.push_back(kms_residual(reweighted, kernel, rel, coc,
                                          family[i], depth, tol,
                                          rw_name.str()));
  }
  return out;
}

CounterexampleResult markov_counterexample(const StochasticMatrix& P, int i0,
                                           int j0) {
  (void)i0;
  const int d = P.dim();
  if (j0 < 1 || j0 > d)
    throw std::invalid_argument("markov_counterexample: j0 out of range");
  double lhs = 1.0 / d;
  double rhs = P.row_sum(j0) / d;
  return CounterexampleResult{lhs, rhs, std::abs(lhs - rhs) <= 1e-12};
}

BowenRatio bowen_ratio(const CylinderMeasure& rho, const Potential& phi,
                       double pressure, const std::vector<Point>& points,
                       int m_max) {
  BowenRatio out{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity(), 0};
  for (const Point& x : points) {
    for (int m = 1; m <= m_max; ++m) {
      Word w = cylinder_prefix(x, m);
      double num = rho.weight(w);
      if (num <= 0.0) {
        ++out.excluded;
        continue;
      }
      double birkhoff = 0.0;
      Point q = shift(x);
      for (int k = 1; k <= m; ++k) {
        birkhoff += phi.at_point(q);
        q = shift(q);
      }
      double ratio = num / std::exp(-pressure * m - birkhoff);
      out.c1 = std::min(out.c1, ratio);
      out.c2 = std::max(out.c2, ratio);
    }
  }
  return out;
}

GroupoidFunction twist(const GroupoidFunction& f, const Cocycle& coc) {
  const int d = f.alphabet();
  const Relation& rel = f.relation();
  const int r = rel.depth();
  const int level = std::max(f.level(), coc.constancy_level(r));
  GroupoidFunction out(d, level, rel);
  for (std::size_t t = 0; t < out.tail_count(); ++t) {
    Word tail = word_at(t, level - r, d);
    for (std::size_t u = 0; u < out.block_dim(); ++u) {
      Word x = word_at(u, r, d);
      x.insert(x.end(), tail.begin(), tail.end());
      Point px(d, x, 1);
      for (std::size_t v = 0; v < out.block_dim(); ++v) {
        Word y = word_at(v, r, d);
        y.insert(y.end(), tail.begin(), tail.end());
        Point py(d, y, 1);
        // e^{-beta c(x,y)} = delta(y,x)
        double factor = std::exp(coc.log_modular(py, px));
        out.block(t, u, v) = factor * f.eval(x, y);
      }
    }
  }
  return out;
}

std::vector<double> matrix_kms_state(const std::vector<double>& U,
                                     double beta) {
  std::vector<double> rho(U.size());
  double z = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    rho[i] = std::exp(-beta * U[i]);
    z += rho[i];
  }
  for (double& x : rho) x /= z;
  return rho;
}

TwoSidedFunction::TwoSidedFunction(int d, int level, std::vector<double> table)
    : d_(d), level_(level), table_(std::move(table)) {
  std::size_t n = word_count(level_, d_);
  if (table_.size() != n * n)
    throw std::invalid_argument("two-sided function table must be d^m x d^m");
}

double TwoSidedFunction::at(std::span<const Symbol> past,
                            std::span<const Symbol> future) const {
  std::size_t pi = word_index(past.subspan(0, level_), d_);
  std::size_t fi = word_index(future.subspan(0, level_), d_);
  return table_[pi * word_count(level_, d_) + fi];
}

TwoSidedPairFunction::TwoSidedPairFunction(int d, int level,
                                           std::vector<double> table)
    : d_(d), level_(level), table_(std::move(table)) {
  std::size_t n = word_count(level_, d_);
  if (table_.size() != n * n * n)
    throw std::invalid_argument("two-sided pair table must be d^m cubed");
}

double TwoSidedPairFunction::at(std::span<const Symbol> past,
                                std::span<const Symbol> b,
                                std::span<const Symbol> bt) const {
  std::size_t n = word_count(level_, d_);
  std::size_t pi = word_index(past.subspan(0, level_), d_);
  std::size_t bi = word_index(b.subspan(0, level_), d_);
  std::size_t ti = word_index(bt.subspan(0, level_), d_);
  return table_[(pi * n + bi) * n + ti];
}

KmsReport twosided_check(const CylinderMeasure& past_m,
                         const CylinderMeasure& future_nu,
                         const TwoSidedFunction& V,
                         const TwoSidedPairFunction& f, int depth,
                         double tol) {
  const int d = past_m.alphabet();
  if (future_nu.alphabet() != d || V.alphabet() != d || f.alphabet() != d)
    throw std::invalid_argument("twosided_check: alphabet mismatch");
  const int D = std::max({depth, V.level(), f.level()});

  double lhs = 0.0, rhs = 0.0;
  const std::size_t count = word_count(D, d);
  for (std::size_t ai = 0; ai < count; ++ai) {
    Word a = word_at(ai, D, d);
    double ma = past_m.weight(a);
    if (ma == 0.0) continue;
    double acc_lhs = 0.0, acc_rhs = 0.0;
    for (std::size_t bi = 0; bi < count; ++bi) {
      Word b = word_at(bi, D, d);
      double nb = future_nu.weight(b);
      if (nb == 0.0) continue;
      double eb = std::exp(V.at(a, b));
      for (std::size_t ti = 0; ti < count; ++ti) {
        Word bt = word_at(ti, D, d);
        double nt = future_nu.weight(bt);
        if (nt == 0.0) continue;
        double et = std::exp(V.at(a, bt));
        // x = <a|b~> is the fiber variable, y = <a|b> the measure variable
        acc_lhs += f.at(a, bt, b) * et * nt * eb * nb;
        acc_rhs += f.at(a, b, bt) * et * nt * eb * nb;
      }
    }
    lhs += acc_lhs * ma;
    rhs += acc_rhs * ma;
  }

  KmsReport report;
  report.test = "twosided";
  report.lhs = lhs;
  report.rhs = rhs;
  report.abs_residual = std::abs(lhs - rhs);
  report.rel_residual = rel_residual(report.abs_residual, lhs, rhs);
  report.depth = D;
  report.pass = report.abs_residual <= tol;
  return report;
}

}  // namespace haarkit
