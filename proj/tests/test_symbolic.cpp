#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "haarkit/symbolic.hpp"
#include "helpers.hpp"

using namespace haarkit;

TEST_CASE("shift drops the first coordinate") {
  Point p(2, {1, 2}, 1);
  CHECK(shift(p) == Point(2, {2}, 1));
  Point c(4, {}, 3);
  CHECK(shift(c) == c);  // constant sequences are shift-fixed
  CHECK(shift(Point(2, {2, 1, 1}, 2)) == Point(2, {1, 1}, 2));
}

TEST_CASE("metric is 2^-N at the first disagreement") {
  Point x(2, {}, 1), y(2, {}, 2);
  CHECK(metric(x, x) == 0.0);
  CHECK(metric(x, y) == 1.0);
  CHECK(metric(Point(2, {1, 2}, 1), Point(2, {}, 1)) == 0.5);
  CHECK_THROWS_AS(metric(Point(2, {}, 1), Point(3, {}, 1)),
                  std::invalid_argument);
}

TEST_CASE("cylinder_prefix reads the first m coordinates") {
  CHECK(cylinder_prefix(Point(2, {1, 2}, 1), 4) == Word{1, 2, 1, 1});
  CHECK(cylinder_prefix(Point(3, {}, 2), 3) == Word{2, 2, 2});
  CHECK(cylinder_prefix(Point(2, {2}, 1), 1) == Word{2});
  CHECK_THROWS_AS(cylinder_prefix(Point(2, {}, 1), 0), std::invalid_argument);
}

TEST_CASE("prepend is a section of shift") {
  CHECK(prepend(1, Point(2, {}, 1)) == Point(2, {}, 1));  // absorbed
  CHECK(prepend(2, Point(2, {}, 1)) == Point(2, {2}, 1));
  CHECK(prepend(1, Point(2, {2}, 2)) == Point(2, {1}, 2));
}

TEST_CASE("canonical form absorbs trailing tail symbols") {
  CHECK(Point(2, {1, 2, 1, 1}, 1) == Point(2, {1, 2}, 1));
  CHECK(Point(3, {3, 3}, 3) == Point::constant(3, 3));
}

TEST_CASE("shift after prepend is the identity on random points") {
  auto gen = testing::rng(7);
  for (int i = 0; i < 1000; ++i) {
    int d = 2 + static_cast<int>(gen() % 3);
    Point p = testing::random_point(gen, d);
    for (Symbol a = 1; a <= d; ++a) CHECK(shift(prepend(a, p)) == p);
  }
}

TEST_CASE("metric is a symmetric ultrametric") {
  auto gen = testing::rng(11);
  for (int i = 0; i < 500; ++i) {
    int d = 2 + static_cast<int>(gen() % 3);
    Point x = testing::random_point(gen, d);
    Point y = testing::random_point(gen, d);
    Point z = testing::random_point(gen, d);
    CHECK(metric(x, y) == metric(y, x));
    CHECK(metric(x, y) <= std::max(metric(x, z), metric(z, y)));
  }
}

TEST_CASE("point text form round-trips") {
  Point p(3, {1, 2}, 1);
  CHECK(p.to_string() == "1.2|1");
  CHECK(Point::parse("1.2|1", 3) == p);
  CHECK(Point::parse("|2", 3) == Point::constant(3, 2));
  CHECK(Point::parse("2.2|2", 3) == Point::constant(3, 2));
}

TEST_CASE("symbols outside the alphabet are rejected") {
  CHECK_THROWS_AS(Point(2, {3}, 1), std::invalid_argument);
  CHECK_THROWS_AS(Point(2, {1}, 0), std::invalid_argument);
  CHECK_THROWS_AS(Point(1, {}, 1), std::invalid_argument);
}

TEST_CASE("word index round-trips") {
  auto gen = testing::rng(3);
  for (int i = 0; i < 200; ++i) {
    int d = 2 + static_cast<int>(gen() % 3);
    int n = 1 + static_cast<int>(gen() % 5);
    Word w = testing::random_word(gen, d, n);
    CHECK(word_at(word_index(w, d), n, d) == w);
  }
}

TEST_CASE("two-sided points pair a past and a future") {
  TwoSidedPoint z(Point(2, {1}, 2), Point(2, {2, 1}, 1));
  CHECK(z.past.at(1) == 1);
  CHECK(z.future.at(1) == 2);
  CHECK_THROWS_AS(TwoSidedPoint(Point(2, {}, 1), Point(3, {}, 1)),
                  std::invalid_argument);
}
