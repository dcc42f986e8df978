#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarkit {

// Symbols are integers 1..d. A Word is a finite (possibly empty) string of
// symbols. A Point is an eventually-constant one-sided sequence
// (head_1,...,head_m, tail, tail, ...), stored in canonical form: the head
// never ends with the tail symbol.
using Symbol = int;
using Word = std::vector<Symbol>;

void check_symbol(Symbol a, int d);
void check_word(std::span<const Symbol> w, int d);

std::string word_to_string(std::span<const Symbol> w);
Word word_from_string(const std::string& s, int d);

// Mixed-radix encoding of length-n words over {1..d} into 0..d^n-1.
// Coordinate 1 is the most significant digit.
std::size_t word_index(std::span<const Symbol> w, int d);
Word word_at(std::size_t index, int n, int d);
std::size_t word_count(int n, int d);

class Point {
 public:
  Point(int alphabet, Word head, Symbol tail);
  static Point constant(int alphabet, Symbol tail);
  // Parses the "w1.w2.....wm|t" text form, e.g. "1.2|1".
  static Point parse(const std::string& text, int alphabet);

  int alphabet() const { return d_; }
  const Word& head() const { return head_; }
  Symbol tail() const { return tail_; }

  // Coordinate i >= 1 of the sequence.
  Symbol at(int i) const;

  std::string to_string() const;

  bool operator==(const Point& other) const;
  bool operator!=(const Point& other) const { return !(*this == other); }

 private:
  int d_;
  Word head_;  // canonical: never ends with tail_
  Symbol tail_;
};

// The shift sigma drops coordinate 1.
Point shift(const Point& p);

// Prepends a symbol, so shift(prepend(a, p)) == p.
Point prepend(Symbol a, const Point& p);

// d(x,y) = 2^-N with N the smallest 0-based index of disagreement; 0 if x==y.
double metric(const Point& x, const Point& y);

// First m coordinates of p.
Word cylinder_prefix(const Point& p, int m);

// Two-sided point <a|b>: past coordinates ..., x_{-2}, x_{-1} are read
// outward in `past` (past.at(1) = x_{-1}), future holds x_0, x_1, ...
struct TwoSidedPoint {
  Point past;
  Point future;

  TwoSidedPoint(Point p, Point f);
  bool operator==(const TwoSidedPoint& other) const {
    return past == other.past && future == other.future;
  }
};

}  // namespace haarkit
