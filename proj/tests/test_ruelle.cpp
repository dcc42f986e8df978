#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "haarkit/ruelle.hpp"
#include "helpers.hpp"

using namespace haarkit;

namespace {

double transfer_lhs(const Potential& A, const LocallyConstantFunction& u,
                    const CylinderMeasure& m, int depth) {
  // integral of L_A u against m, summed at the given depth
  auto img = apply_transfer(A, u);
  double acc = 0.0;
  for (std::size_t wi = 0; wi < word_count(depth, A.alphabet()); ++wi) {
    Word w = word_at(wi, depth, A.alphabet());
    acc += img.at_word(w) * m.weight(w);
  }
  return acc;
}

double plain_integral(const LocallyConstantFunction& u,
                      const CylinderMeasure& m, int depth) {
  double acc = 0.0;
  for (std::size_t wi = 0; wi < word_count(depth, u.alphabet()); ++wi) {
    Word w = word_at(wi, depth, u.alphabet());
    acc += u.at_word(w) * m.weight(w);
  }
  return acc;
}

}  // namespace

TEST_CASE("transfer operator on constants") {
  Potential A(2, 1, {0.2, -0.4});
  auto one = LocallyConstantFunction::constant(2, 1.0);
  auto img = apply_transfer(A, one);
  double expected = std::exp(0.2) + std::exp(-0.4);
  for (double v : img.table()) CHECK(v == doctest::Approx(expected).epsilon(1e-15));

  auto zero_img = apply_transfer(Potential::constant(2, 1, 0.0), one);
  for (double v : zero_img.table()) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("transfer operator contracts the level by one") {
  auto gen = testing::rng(31);
  Potential A = testing::random_potential(gen, 2, 2);
  // v = I[x_1 = 1]
  LocallyConstantFunction v(2, 1, {1.0, 0.0});
  auto img = apply_transfer(A, v);
  CHECK(img.level() == 1);
  for (Symbol x1 = 1; x1 <= 2; ++x1) {
    Word w{x1};
    Word aw{1, x1};
    CHECK(img.at_word(w) == doctest::Approx(std::exp(A.at_word(aw))).epsilon(1e-15));
  }
}

TEST_CASE("transfer operator is linear and positive") {
  auto gen = testing::rng(37);
  Potential A = testing::random_potential(gen, 2, 2);
  auto u = testing::random_function(gen, 2, 2, -1.0, 1.0);
  auto v = testing::random_function(gen, 2, 2, -1.0, 1.0);
  double alpha = 0.7, beta = -1.3;
  std::vector<double> combo(u.table());
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo[i] = alpha * u.table()[i] + beta * v.table()[i];
  auto img_combo =
      apply_transfer(A, LocallyConstantFunction(2, 2, std::move(combo)));
  auto img_u = apply_transfer(A, u);
  auto img_v = apply_transfer(A, v);
  for (std::size_t i = 0; i < img_combo.table().size(); ++i)
    CHECK(img_combo.table()[i] ==
          doctest::Approx(alpha * img_u.table()[i] + beta * img_v.table()[i])
              .epsilon(1e-13));

  auto pos = testing::random_function(gen, 2, 2, 0.0, 1.0);
  auto pos_img = apply_transfer(A, pos);
  for (double x : pos_img.table()) CHECK(x >= 0.0);
}

TEST_CASE("eigendata for the zero potential") {
  auto eig = eigendata(Potential::constant(2, 1, 0.0));
  CHECK(eig.lambda == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eig.eigfn.level() == 0);
  CHECK(eig.eigmeasure.weight(Word{1, 2}) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("memory-1 eigendata is closed form") {
  auto gen = testing::rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 2 + static_cast<int>(gen() % 3);
    Potential A = testing::random_potential(gen, d, 1);
    auto eig = eigendata(A);
    double lambda = 0.0;
    for (double a : A.table()) lambda += std::exp(a);
    CHECK(std::abs(eig.lambda - lambda) < 1e-12 * lambda);
    for (double h : eig.eigfn.table()) CHECK(h == doctest::Approx(1.0).epsilon(1e-12));
    for (Symbol a = 1; a <= d; ++a) {
      double expected = std::exp(A.table()[a - 1]) / lambda;
      CHECK(std::abs(eig.eigmeasure.weight(Word{a}) - expected) < 1e-13);
    }
  }
}

TEST_CASE("eigenfunction satisfies L_A h = lambda h pointwise") {
  auto gen = testing::rng(43);
  for (int k = 2; k <= 3; ++k) {
    Potential A = testing::random_potential(gen, 2, k);
    auto eig = eigendata(A);
    auto img = apply_transfer(A, eig.eigfn);
    for (std::size_t wi = 0; wi < word_count(k - 1, 2); ++wi) {
      Word w = word_at(wi, k - 1, 2);
      CHECK(std::abs(img.at_word(w) - eig.lambda * eig.eigfn.at_word(w)) <
            1e-12 * eig.lambda);
    }
  }
}

TEST_CASE("eigenmeasure satisfies the dual relation exactly") {
  auto gen = testing::rng(47);
  Potential A = testing::random_potential(gen, 2, 2);
  auto eig = eigendata(A);
  // all level-2 indicators, integrals summed at depth 3
  for (std::size_t ui = 0; ui < word_count(2, 2); ++ui) {
    std::vector<double> table(word_count(2, 2), 0.0);
    table[ui] = 1.0;
    LocallyConstantFunction u(2, 2, std::move(table));
    double left = transfer_lhs(A, u, eig.eigmeasure, 3);
    double right = eig.lambda * plain_integral(u, eig.eigmeasure, 3);
    CHECK(std::abs(left - right) < 1e-10);
  }
  auto gen2 = testing::rng(48);
  CHECK(testing::measure_consistency_defect(eig.eigmeasure, gen2, 200, 6) <
        1e-12);
}

TEST_CASE("adding a constant rescales the eigenvalue only") {
  auto gen = testing::rng(53);
  Potential A = testing::random_potential(gen, 2, 2);
  double c = 0.8321;
  auto eig = eigendata(A);
  auto eig_shift = eigendata(A.shifted(c));
  CHECK(eig_shift.lambda / eig.lambda == doctest::Approx(std::exp(c)).epsilon(1e-12));
  for (std::size_t i = 0; i < eig.eigfn.table().size(); ++i)
    CHECK(eig_shift.eigfn.table()[i] ==
          doctest::Approx(eig.eigfn.table()[i]).epsilon(1e-12));
}

TEST_CASE("normalize produces a stochastic potential") {
  auto gen = testing::rng(59);
  Potential A = testing::random_potential(gen, 2, 2);
  Potential B = normalize(A);
  for (std::size_t ti = 0; ti < word_count(1, 2); ++ti) {
    Word w = word_at(ti, 1, 2);
    double s = 0.0;
    for (Symbol a = 1; a <= 2; ++a) {
      Word aw{a, w[0]};
      s += std::exp(B.at_word(aw));
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }

  // idempotence
  Potential B2 = normalize(B);
  for (std::size_t i = 0; i < B.table().size(); ++i)
    CHECK(B2.table()[i] == doctest::Approx(B.table()[i]).epsilon(1e-11));

  // constant potential normalizes to -log d
  Potential C = normalize(Potential::constant(2, 1, 1.7));
  for (double v : C.table())
    CHECK(v == doctest::Approx(-std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("coboundary transfer with trivial h is the identity") {
  auto mu = bernoulli({0.35, 0.65});
  auto out = coboundary_transfer(mu, LocallyConstantFunction::constant(2, 1.0));
  auto out2 =
      coboundary_transfer(mu, LocallyConstantFunction::constant(2, std::exp(1.2)), 1.2);
  auto gen = testing::rng(61);
  for (int i = 0; i < 50; ++i) {
    Word w = testing::random_word(gen, 2, 1 + static_cast<int>(gen() % 4));
    CHECK(out.weight(w) == doctest::Approx(mu.weight(w)).epsilon(1e-14));
    CHECK(out2.weight(w) == doctest::Approx(mu.weight(w)).epsilon(1e-14));
  }
  LocallyConstantFunction bad(2, 1, {1.0, 0.0});
  CHECK_THROWS_AS(coboundary_transfer(mu, bad), std::invalid_argument);
}

TEST_CASE("thermodynamic-limit weights converge to the eigenmeasure") {
  // two independent routes to the same measure: finite-volume weight
  // tables with constant boundary vs the Perron construction
  const int d = 2, k = 2;
  Potential phi(d, k, {0.21, -0.34, 0.05, 0.4});
  auto eig = eigendata(phi.scaled(-1.0));
  auto defect = [&](int n) {
    auto table = thermo_weights(phi, n);
    double worst = 0.0;
    for (std::size_t ui = 0; ui < word_count(2, d); ++ui) {
      Word u = word_at(ui, 2, d);
      double marginal = 0.0;
      for (std::size_t wi = 0; wi < table.size(); ++wi) {
        Word w = word_at(wi, n, d);
        if (w[0] == u[0] && w[1] == u[1]) marginal += table[wi];
      }
      worst = std::max(worst, std::abs(marginal - eig.eigmeasure.weight(u)));
    }
    return worst;
  };
  double d4 = defect(4), d8 = defect(8), d12 = defect(12);
  CHECK(d8 < d4);
  CHECK(d12 < 1e-9);
}

TEST_CASE("potentials load from word/value text") {
  std::stringstream ss("1 0.25\n2 -0.5 # comment\n");
  Potential A = load_potential(ss, 2);
  CHECK(A.memory() == 1);
  CHECK(A.at_word(Word{1}) == 0.25);
  CHECK(A.at_word(Word{2}) == -0.5);

  std::stringstream incomplete("1.1 0.0\n1.2 0.0\n2.1 0.0\n");
  CHECK_THROWS_AS(load_potential(incomplete, 2), std::invalid_argument);
}
