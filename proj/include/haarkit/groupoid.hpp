#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>

#include "haarkit/potential.hpp"
#include "haarkit/symbolic.hpp"

namespace haarkit {

// Equivalence relations with enumerable fibers on {1..d}^N. At the word
// level all three act the same way: two length-n words are related iff they
// agree after the first `depth` coordinates.
//   BiggerThanTwo      depth 1  (free coordinate is position 1)
//   KTail(k)           depth k
//   EventuallyEqual(n) depth n  (R_infinity truncated at caller depth n)
class Relation {
 public:
  enum class Kind { BiggerThanTwo, KTail, EventuallyEqual };

  static Relation bigger_than_two();
  static Relation k_tail(int k);
  static Relation eventually_equal(int n);

  Kind kind() const { return kind_; }
  int depth() const { return depth_; }

  bool related(const Point& x, const Point& y) const;
  bool related_words(std::span<const Symbol> x, std::span<const Symbol> y) const;

 private:
  Relation(Kind kind, int depth);
  Kind kind_;
  int depth_;
};

// Complete class enumeration of p; contains p. The varied prefix runs
// through word_index order.
std::vector<Point> fiber(const Relation& rel, const Point& p);
std::vector<Word> fiber_words(int d, const Relation& rel,
                              std::span<const Symbol> w);

// A G-kernel at the word level: for each base word y (|y| >= level) a
// weight list aligned with fiber_words(d, rel, y). Not required to be
// transverse.
class KernelObject {
 public:
  using WeightsFn = std::function<std::vector<double>(std::span<const Symbol>)>;

  KernelObject(std::string name, int d, int depth, int level, WeightsFn weights);

  const std::string& name() const { return name_; }
  int alphabet() const { return d_; }
  int depth() const { return depth_; }
  // Minimal word length at which the weights are exact.
  int level() const { return level_; }

  std::vector<double> weights(std::span<const Symbol> y) const {
    return weights_(y);
  }
  double mass(std::span<const Symbol> y) const;

 private:
  std::string name_;
  int d_;
  int depth_;
  int level_;
  WeightsFn weights_;
};

// Haar kernels: counting, normalized, or the probability system built from
// a one-step Jacobian J > 0 with sum_a J(a,x) = 1. On a relation of depth r
// the Jacobian weight of s is the r-step product J(s) J(sigma s) ...
// J(sigma^{r-1} s), which sums to 1 over the fiber.
class HaarKernel {
 public:
  enum class Kind { Counting, Normalized, Jacobian };

  static HaarKernel counting();
  static HaarKernel normalized();
  static HaarKernel jacobian(LocallyConstantFunction J);

  Kind kind() const { return kind_; }
  const LocallyConstantFunction& jac() const;

  std::vector<std::pair<Point, double>> weights(const Relation& rel,
                                                const Point& p) const;
  KernelObject to_kernel(const Relation& rel, int d) const;

 private:
  explicit HaarKernel(Kind kind, std::optional<LocallyConstantFunction> J = {});
  Kind kind_;
  std::optional<LocallyConstantFunction> jacobian_;
};

// The delta kernel: unit mass on the base point itself.
KernelObject delta_kernel(const Relation& rel, int d);

std::vector<std::pair<Point, double>> haar_weights(const HaarKernel& kernel,
                                                   const Point& p,
                                                   const Relation& rel);

struct TransverseVerdict {
  bool transverse;
  std::optional<std::pair<Point, Point>> counterexample;
};

// True iff the kernel assigns identical measures to both ends of every
// sampled related pair.
TransverseVerdict is_transverse(const KernelObject& kernel, const Relation& rel,
                                const std::vector<std::pair<Point, Point>>& samples,
                                int depth, double tol = 1e-12);

// Level-m element of the convolution algebra: a complex table over related
// word pairs, stored per class tail as a d^r x d^r block.
class GroupoidFunction {
 public:
  using Complex = std::complex<double>;

  GroupoidFunction(int d, int level, Relation rel);

  static GroupoidFunction identity(int d, int level, const Relation& rel);
  // Indicator pair I[x prefix = u] * I[y prefix = v]; u ~ v required.
  static GroupoidFunction indicator_pair(int d, const Relation& rel,
                                         const Word& u, const Word& v);
  // Text rows "wordx wordy re [im]".
  static GroupoidFunction load(std::istream& in, int d, const Relation& rel);

  int alphabet() const { return d_; }
  int level() const { return level_; }
  const Relation& relation() const { return rel_; }
  std::size_t tail_count() const { return tails_; }
  std::size_t block_dim() const { return block_; }

  Complex& block(std::size_t tail, std::size_t u, std::size_t v);
  Complex block(std::size_t tail, std::size_t u, std::size_t v) const;

  // f(x,y) on related words of length >= level.
  Complex eval(std::span<const Symbol> x, std::span<const Symbol> y) const;

  GroupoidFunction& operator+=(const GroupoidFunction& other);
  GroupoidFunction scaled(Complex factor) const;

 private:
  int d_;
  int level_;
  Relation rel_;
  std::size_t tails_;
  std::size_t block_;
  std::vector<Complex> data_;
};

}  // namespace haarkit
