#include "haarkit/baker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace haarkit {

namespace {

constexpr double kBranchTol = 1e-14;

int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw ? static_cast<int>(hw) : 1;
  if (const char* env = std::getenv("HAARKIT_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

void parallel_for(int count, const std::function<void(int)>& body) {
  int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

CircleMap::CircleMap(std::string name, std::function<double(double)> lift,
                     std::function<double(double)> deriv, double lambda,
                     HolderBound holder)
    : name_(std::move(name)),
      lift_(std::move(lift)),
      deriv_(std::move(deriv)),
      lambda_(lambda),
      holder_(holder) {
  if (lambda_ <= 1.0) throw std::invalid_argument("expansion bound must exceed 1");
  // Branch point: lift(x0) = 1, bracketed in (0,1).
  double lo = 0.0, hi = 1.0, x = 0.5;
  for (int it = 0; it < 200; ++it) {
    double f = lift_(x) - 1.0;
    if (std::abs(f) < kBranchTol) break;
    double step = f / deriv_(x);
    double next = x - step;
    if (!(next > lo && next < hi)) {
      if (f > 0)
        hi = x;
      else
        lo = x;
      next = 0.5 * (lo + hi);
    } else {
      if (f > 0)
        hi = x;
      else
        lo = x;
    }
    x = next;
  }
  x0_ = x;
}

CircleMap CircleMap::doubling() {
  return CircleMap(
      "doubling", [](double x) { return 2.0 * x; },
      [](double) { return 2.0; }, 2.0, HolderBound{0.0, 1.0, 2.0});
}

CircleMap CircleMap::perturbed(double eps) {
  if (eps < 0.0 || eps >= 0.5)
    throw std::invalid_argument("perturbed map needs eps in [0, 0.5)");
  if (eps == 0.0) return doubling();
  const double two_pi = 2.0 * std::numbers::pi;
  // Lipschitz constant of log T': sup |T''| / inf T'.
  HolderBound holder{two_pi * eps / (2.0 - eps), 1.0, 2.0 - eps};
  return CircleMap(
      "perturbed:" + std::to_string(eps),
      [eps, two_pi](double x) { return 2.0 * x + eps / two_pi * std::sin(two_pi * x); },
      [eps, two_pi](double x) { return 2.0 + eps * std::cos(two_pi * x); },
      2.0 - eps, holder);
}

double CircleMap::apply(double x) const {
  double y = lift_(x);
  y -= std::floor(y);
  return y;
}

double CircleMap::inverse_branch(int i, double y) const {
  if (i != 1 && i != 2) throw std::invalid_argument("branch must be 1 or 2");
  const double target = y + (i - 1);
  double lo = (i == 1) ? 0.0 : x0_;
  double hi = (i == 1) ? x0_ : 1.0;
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double f = lift_(u) - target;
    if (f > 0)
      hi = u;
    else
      lo = u;
    double next = u - f / deriv_(u);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) < kBranchTol) return next;
    u = next;
  }
  return u;
}

BakerState baker_apply(const CircleMap& map, const BakerState& z) {
  int i = map.branch_of(z.b);
  return BakerState{map.inverse_branch(i, z.a), map.apply(z.b)};
}

BackwardOrbit backward_fiber_orbit(const CircleMap& map, const BakerState& z,
                                   double b0, int N) {
  if (N < 1) throw std::invalid_argument("backward orbit needs N >= 1");
  BackwardOrbit out;
  out.b.reserve(N);
  out.s.reserve(N);
  out.branches.reserve(N);
  double a = z.a, b = z.b, s = b0;
  for (int n = 0; n < N; ++n) {
    int i = map.branch_of(a);
    b = map.inverse_branch(i, b);
    s = map.inverse_branch(i, s);
    a = map.apply(a);
    out.b.push_back(b);
    out.s.push_back(s);
    out.branches.push_back(i);
  }
  return out;
}

VProduct v_product(const CircleMap& map, const BakerState& z, double b0,
                   int N) {
  BackwardOrbit orbit = backward_fiber_orbit(map, z, b0, N);
  double log_v = 0.0;
  for (int n = 0; n < N; ++n)
    log_v += std::log(map.derivative(orbit.b[n])) -
             std::log(map.derivative(orbit.s[n]));
  return VProduct{std::exp(log_v), product_tail_bound(map.holder(), N)};
}

double v_a_dependence(const CircleMap& map, double b, double b0, int N,
                      const std::vector<double>& a_samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double a : a_samples) {
    double lv = std::log(v_product(map, BakerState{a, b}, b0, N).value);
    lo = std::min(lo, lv);
    hi = std::max(hi, lv);
  }
  return hi - lo;
}

namespace {

// psi rows on the midpoint grid for a set of horizontal coordinates:
// row[j] = V(a, (j+1/2)/G), normalizer = mean of the row.
struct LeafDensity {
  std::vector<double> values;
  double normalizer;
};

LeafDensity leaf_density(const CircleMap& map, double a, int grid, int N,
                         double b0) {
  LeafDensity leaf;
  leaf.values.resize(grid);
  double z = 0.0;
  for (int j = 0; j < grid; ++j) {
    double b = (j + 0.5) / grid;
    leaf.values[j] = v_product(map, BakerState{a, b}, b0, N).value;
    z += leaf.values[j];
  }
  leaf.normalizer = z / grid;
  return leaf;
}

// Budget for one psi comparison: truncation enters through e^{tail}-1 on
// each V factor, quadrature through the midpoint rule on the normalizer.
double density_budget(const CircleMap& map, int grid, int N) {
  double tail = product_tail_bound(map.holder(), N);
  double quad = map.holder().C / (grid * grid);  // O(h^2) midpoint defect
  return 4.0 * (std::expm1(tail) + quad) + 1e-12;
}

struct GridScan {
  double max_residual = 0.0;
};

template <typename ResidualAt>
double scan_grid(const CircleMap& map, int grid, int N, double b0,
                 ResidualAt&& residual_at) {
  // Rows needed: every grid a plus both branch images psi_i(a).
  std::vector<double> as(grid);
  for (int i = 0; i < grid; ++i) as[i] = (i + 0.5) / grid;

  std::vector<LeafDensity> rows(grid);
  std::vector<LeafDensity> rows_psi1(grid), rows_psi2(grid);
  parallel_for(grid, [&](int i) {
    rows[i] = leaf_density(map, as[i], grid, N, b0);
    rows_psi1[i] = leaf_density(map, map.inverse_branch(1, as[i]), grid, N, b0);
    rows_psi2[i] = leaf_density(map, map.inverse_branch(2, as[i]), grid, N, b0);
  });

  std::vector<double> maxima(grid, 0.0);
  parallel_for(grid, [&](int i) {
    double local = 0.0;
    for (int j = 0; j < grid; ++j) {
      double b = (j + 0.5) / grid;
      int branch = map.branch_of(b);
      const LeafDensity& image_row = (branch == 1) ? rows_psi1[i] : rows_psi2[i];
      double psi = rows[i].values[j] / rows[i].normalizer;
      double a_img = map.inverse_branch(branch, as[i]);
      double b_img = map.apply(b);
      double v_img = v_product(map, BakerState{a_img, b_img}, b0, N).value;
      double psi_img = v_img / image_row.normalizer;
      local = std::max(local, residual_at(as[i], b, psi, psi_img, a_img));
    }
    maxima[i] = local;
  });
  double result = 0.0;
  for (double m : maxima) result = std::max(result, m);
  return result;
}

}  // namespace

BakerDensityResult density_conformality_residual(const CircleMap& map, int grid, int N) {
  const double b0 = 0.3;
  double res = scan_grid(map, grid, N, b0,
                         [&](double /*a*/, double b, double psi,
                             double psi_img, double /*a_img*/) {
                           return std::abs(psi * 2.0 / map.derivative(b) -
                                           psi_img);
                         });
  double budget = density_budget(map, grid, N);
  return BakerDensityResult{grid, N, res, budget, res <= budget};
}

BakerDensityResult leaf_transport_residual(const CircleMap& map, int grid,
                                           int N) {
  const double b0 = 0.3;
  // Collect the per-(a, branch) quotient psi(F)/psi(a,b)/T'(b) and measure
  // its spread within each branch of each leaf.
  std::vector<double> as(grid);
  for (int i = 0; i < grid; ++i) as[i] = (i + 0.5) / grid;
  std::vector<LeafDensity> rows(grid), rows_psi1(grid), rows_psi2(grid);
  parallel_for(grid, [&](int i) {
    rows[i] = leaf_density(map, as[i], grid, N, b0);
    rows_psi1[i] = leaf_density(map, map.inverse_branch(1, as[i]), grid, N, b0);
    rows_psi2[i] = leaf_density(map, map.inverse_branch(2, as[i]), grid, N, b0);
  });
  std::vector<double> maxima(grid, 0.0);
  parallel_for(grid, [&](int i) {
    double local = 0.0;
    for (int branch = 1; branch <= 2; ++branch) {
      double qmin = std::numeric_limits<double>::infinity();
      double qmax = -qmin;
      const LeafDensity& image_row = (branch == 1) ? rows_psi1[i] : rows_psi2[i];
      double a_img = map.inverse_branch(branch, as[i]);
      for (int j = 0; j < grid; ++j) {
        double b = (j + 0.5) / grid;
        if (map.branch_of(b) != branch) continue;
        double psi = rows[i].values[j] / rows[i].normalizer;
        double v_img =
            v_product(map, BakerState{a_img, map.apply(b)}, b0, N).value;
        double psi_img = v_img / image_row.normalizer;
        double q = psi_img / (psi * map.derivative(b));
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
      }
      if (qmax > qmin) local = std::max(local, qmax - qmin);
    }
    maxima[i] = local;
  });
  double res = 0.0;
  for (double m : maxima) res = std::max(res, m);
  double budget = density_budget(map, grid, N);
  return BakerDensityResult{grid, N, res, budget, res <= budget};
}

BakerDensityResult sbr_discrepancy(const CircleMap& map, int grid, int N) {
  const double b0 = 0.3;
  double res = scan_grid(map, grid, N, b0,
                         [&](double /*a*/, double b, double psi,
                             double psi_img, double a_img) {
                           return std::abs(psi * map.derivative(a_img) /
                                               map.derivative(b) -
                                           psi_img);
                         });
  double budget = density_budget(map, grid, N);
  return BakerDensityResult{grid, N, res, budget, res <= budget};
}

KmsReport baker_kms_residual(const CircleMap& map, const FiberTestFunction& f,
                             int order, int N, double b0, double tol) {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  // W = normalized V along the reference leaf a = b0.
  std::vector<double> w(order);
  double z = 0.0;
  for (int j = 0; j < order; ++j) {
    double b = (j + 0.5) / order;
    w[j] = v_product(map, BakerState{b0, b}, b0, N).value;
    z += w[j];
  }
  for (double& x : w) x /= (z / order);

  const double h = 1.0 / order;
  std::vector<double> partial_lhs(order, 0.0), partial_rhs(order, 0.0);
  parallel_for(order, [&](int ia) {
    double a = (ia + 0.5) / order;
    double acc_l = 0.0, acc_r = 0.0;
    for (int jb = 0; jb < order; ++jb) {
      double b = (jb + 0.5) / order;
      for (int js = 0; js < order; ++js) {
        double s = (js + 0.5) / order;
        double weight = w[js] * w[jb];
        acc_l += f(a, b, s) * weight;
        acc_r += f(a, s, b) * weight;
      }
    }
    partial_lhs[ia] = acc_l;
    partial_rhs[ia] = acc_r;
  });
  double lhs = 0.0, rhs = 0.0;
  for (int ia = 0; ia < order; ++ia) {
    lhs += partial_lhs[ia];
    rhs += partial_rhs[ia];
  }
  lhs *= h * h * h;
  rhs *= h * h * h;

  KmsReport report;
  report.test = "baker-kms order=" + std::to_string(order);
  report.lhs = lhs;
  report.rhs = rhs;
  report.abs_residual = std::abs(lhs - rhs);
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  report.rel_residual = scale > 0 ? report.abs_residual / scale : 0.0;
  report.depth = order;
  report.pass = report.abs_residual <= tol;
  return report;
}

double branch_consistency_residual(const CircleMap& map, int grid) {
  double res = 0.0;
  for (int j = 0; j < grid; ++j) {
    double y = (j + 0.5) / grid;
    for (int i = 1; i <= 2; ++i) {
      double u = map.inverse_branch(i, y);
      res = std::max(res, std::abs(map.apply(u) - y));
    }
  }
  return res;
}

}  // namespace haarkit
