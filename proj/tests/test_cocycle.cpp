#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "haarkit/cocycle.hpp"
#include "helpers.hpp"

using namespace haarkit;

namespace {

Cocycle random_cocycle(std::mt19937_64& gen, int d, int kind, double beta) {
  switch (kind % 3) {
    case 0:
      return Cocycle::potential_diff(testing::random_function(gen, d, 2, -1.0, 1.0),
                                     beta);
    case 1:
      return Cocycle::birkhoff_sum(testing::random_potential(gen, d, 1), 2, beta);
    default:
      return Cocycle::truncated_product(testing::random_potential(gen, d, 2), 30,
                                        HolderBound{1.0, 1.0, 2.0}, beta);
  }
}

}  // namespace

TEST_CASE("modular function is 1 on the diagonal and inverts under swap") {
  auto gen = testing::rng(91);
  Relation rel = Relation::k_tail(2);
  for (int trial = 0; trial < 200; ++trial) {
    Cocycle coc = random_cocycle(gen, 2, trial, 1.0);
    Point p = testing::random_point(gen, 2, 4);
    auto cls = fiber(rel, p);
    const Point& x = cls[gen() % cls.size()];
    const Point& y = cls[gen() % cls.size()];
    CHECK(modular_eval(coc, x, x, rel) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(modular_eval(coc, x, y) * modular_eval(coc, y, x) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("multiplicative cocycle identity on random related triples") {
  auto gen = testing::rng(97);
  Relation rel = Relation::k_tail(2);
  for (int trial = 0; trial < 1000; ++trial) {
    Cocycle coc = random_cocycle(gen, 2, trial, 0.7);
    Point p = testing::random_point(gen, 2, 4);
    auto cls = fiber(rel, p);
    const Point& x = cls[gen() % cls.size()];
    const Point& y = cls[gen() % cls.size()];
    const Point& z = cls[gen() % cls.size()];
    double lhs = modular_eval(coc, x, z);
    double rhs = modular_eval(coc, x, y) * modular_eval(coc, y, z);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("birkhoff-sum cocycle matches the hand expansion") {
  auto gen = testing::rng(101);
  Potential A = testing::random_potential(gen, 2, 1);
  Cocycle coc = Cocycle::birkhoff_sum(A, 2, 1.0);
  // delta((1,1,w),(2,1,w)) = e^{A(2)+A(1)} / e^{A(1)+A(1)} = e^{A(2)-A(1)}
  Point x(2, {1, 1, 2, 1}, 2);
  Point y(2, {2, 1, 2, 1}, 2);
  double expected = std::exp(A.table()[1] - A.table()[0]);
  CHECK(modular_eval(coc, x, y) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("potential-diff cocycles ignore additive constants") {
  auto gen = testing::rng(103);
  auto phi = testing::random_function(gen, 2, 2, -1.0, 1.0);
  std::vector<double> shifted(phi.table());
  for (double& v : shifted) v += 2.5;
  Cocycle a = Cocycle::potential_diff(phi, 1.0);
  Cocycle b = Cocycle::potential_diff(LocallyConstantFunction(2, 2, shifted), 1.0);
  Relation rel = Relation::bigger_than_two();
  for (int trial = 0; trial < 100; ++trial) {
    Point p = testing::random_point(gen, 2, 4);
    auto cls = fiber(rel, p);
    const Point& x = cls[gen() % cls.size()];
    const Point& y = cls[gen() % cls.size()];
    CHECK(modular_eval(a, x, y) ==
          doctest::Approx(modular_eval(b, x, y)).epsilon(1e-14));
  }
}

TEST_CASE("beta scales the cocycle exponent") {
  auto gen = testing::rng(107);
  auto phi = testing::random_function(gen, 2, 2, -1.0, 1.0);
  double beta = 1.7;
  Cocycle at_one = Cocycle::potential_diff(phi, 1.0);
  Cocycle at_beta = Cocycle::potential_diff(phi, beta);
  Relation rel = Relation::bigger_than_two();
  for (int trial = 0; trial < 100; ++trial) {
    Point p = testing::random_point(gen, 2, 4);
    auto cls = fiber(rel, p);
    const Point& x = cls[gen() % cls.size()];
    const Point& y = cls[gen() % cls.size()];
    CHECK(modular_eval(at_beta, x, y) ==
          doctest::Approx(std::pow(modular_eval(at_one, x, y), beta))
              .epsilon(1e-13));
  }
}

TEST_CASE("unrelated pairs are rejected") {
  auto gen = testing::rng(109);
  Cocycle coc = Cocycle::potential_diff(testing::random_function(gen, 2, 1), 1.0);
  Relation rel = Relation::bigger_than_two();
  Point x(2, {1, 1}, 1);
  Point y(2, {1, 2}, 1);  // differs beyond the first coordinate
  CHECK_THROWS_AS(modular_eval(coc, x, y, rel), std::invalid_argument);
}

TEST_CASE("geometric tail bound") {
  CHECK(product_tail_bound(HolderBound{0.0, 1.0, 2.0}, 10) == 0.0);
  CHECK(product_tail_bound(HolderBound{1.0, 1.0, 2.0}, 20) ==
        doctest::Approx(std::ldexp(1.0, -20)).epsilon(1e-14));
  // bound(2N) = bound(N) * lambda^{-N alpha}
  HolderBound h{0.8, 1.3, 1.9};
  for (int N : {5, 10, 17}) {
    double lhs = product_tail_bound(h, 2 * N);
    double rhs = product_tail_bound(h, N) * std::pow(h.lambda, -N * h.alpha);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(lhs <= rhs * (1 + 1e-13));
  }
  CHECK_THROWS_AS(product_tail_bound(HolderBound{1.0, 1.0, 0.9}, 5),
                  std::invalid_argument);
}

TEST_CASE("truncated products are exact once orbits merge") {
  auto gen = testing::rng(113);
  Potential A = testing::random_potential(gen, 2, 2);
  Relation rel = Relation::eventually_equal(3);
  Cocycle coarse = Cocycle::truncated_product(A, 5, HolderBound{1.0, 1.0, 2.0}, 1.0);
  Cocycle fine = Cocycle::truncated_product(A, 50, HolderBound{1.0, 1.0, 2.0}, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Point p = testing::random_point(gen, 2, 3);
    auto cls = fiber(rel, p);
    const Point& x = cls[gen() % cls.size()];
    const Point& y = cls[gen() % cls.size()];
    CHECK(modular_eval(coarse, x, y) ==
          doctest::Approx(modular_eval(fine, x, y)).epsilon(1e-14));
  }
}
