#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "haarkit/symbolic.hpp"

namespace haarkit {

// A function on G^0 depending only on the first `level` coordinates,
// tabulated over all d^level words. level 0 means a constant.
class LocallyConstantFunction {
 public:
  LocallyConstantFunction(int d, int level, std::vector<double> table);
  static LocallyConstantFunction constant(int d, double value);

  int alphabet() const { return d_; }
  int level() const { return level_; }
  const std::vector<double>& table() const { return table_; }

  // Value on the cylinder of a word with |w| >= level.
  double at_word(std::span<const Symbol> w) const;
  double at_point(const Point& p) const;

 private:
  int d_;
  int level_;
  std::vector<double> table_;
};

// Finite-memory potential A(x_1..x_k): a complete table over length-k words.
class Potential {
 public:
  Potential(int d, int memory, std::vector<double> table);
  static Potential constant(int d, int memory, double value);

  int alphabet() const { return d_; }
  int memory() const { return k_; }
  const std::vector<double>& table() const { return table_; }

  double at_word(std::span<const Symbol> w) const;
  double at_point(const Point& p) const;

  Potential scaled(double factor) const;   // factor * A
  Potential shifted(double constant) const;  // A + constant

 private:
  int d_;
  int k_;
  std::vector<double> table_;
};

// Text table "word value" per line, base-10 reals; '#' starts a comment.
Potential load_potential(std::istream& in, int d);

}  // namespace haarkit
