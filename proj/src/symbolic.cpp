#include "haarkit/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace haarkit {

void check_symbol(Symbol a, int d) {
  if (a < 1 || a > d)
    throw std::invalid_argument("symbol " + std::to_string(a) +
                                " outside alphabet 1.." + std::to_string(d));
}

void check_word(std::span<const Symbol> w, int d) {
  for (Symbol a : w) check_symbol(a, d);
}

std::string word_to_string(std::span<const Symbol> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

Word word_from_string(const std::string& s, int d) {
  Word w;
  if (s.empty()) return w;
  if (s.find('.') == std::string::npos && d <= 9) {
    // compact digit form, e.g. "121"
    for (char c : s) {
      if (c < '1' || c > '9') throw std::invalid_argument("bad word: " + s);
      w.push_back(c - '0');
    }
  } else {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '.')) w.push_back(std::stoi(tok));
  }
  check_word(w, d);
  return w;
}

std::size_t word_index(std::span<const Symbol> w, int d) {
  std::size_t idx = 0;
  for (Symbol a : w) idx = idx * static_cast<std::size_t>(d) + (a - 1);
  return idx;
}

Word word_at(std::size_t index, int n, int d) {
  Word w(n);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<Symbol>(index % d) + 1;
    index /= d;
  }
  return w;
}

std::size_t word_count(int n, int d) {
  std::size_t c = 1;
  for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(d);
  return c;
}

Point::Point(int alphabet, Word head, Symbol tail)
    : d_(alphabet), head_(std::move(head)), tail_(tail) {
  if (d_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
  check_symbol(tail_, d_);
  check_word(head_, d_);
  while (!head_.empty() && head_.back() == tail_) head_.pop_back();
}

Point Point::constant(int alphabet, Symbol tail) {
  return Point(alphabet, {}, tail);
}

Point Point::parse(const std::string& text, int alphabet) {
  auto bar = text.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("point text missing '|': " + text);
  Word head = word_from_string(text.substr(0, bar), alphabet);
  int tail = std::stoi(text.substr(bar + 1));
  return Point(alphabet, std::move(head), tail);
}

Symbol Point::at(int i) const {
  if (i < 1) throw std::invalid_argument("coordinate index must be >= 1");
  if (static_cast<std::size_t>(i) <= head_.size()) return head_[i - 1];
  return tail_;
}

std::string Point::to_string() const {
  return word_to_string(head_) + "|" + std::to_string(tail_);
}

bool Point::operator==(const Point& other) const {
  return d_ == other.d_ && tail_ == other.tail_ && head_ == other.head_;
}

Point shift(const Point& p) {
  if (p.head().empty()) return p;
  Word h(p.head().begin() + 1, p.head().end());
  return Point(p.alphabet(), std::move(h), p.tail());
}

Point prepend(Symbol a, const Point& p) {
  check_symbol(a, p.alphabet());
  Word h;
  h.reserve(p.head().size() + 1);
  h.push_back(a);
  h.insert(h.end(), p.head().begin(), p.head().end());
  return Point(p.alphabet(), std::move(h), p.tail());
}

double metric(const Point& x, const Point& y) {
  if (x.alphabet() != y.alphabet())
    throw std::invalid_argument("metric: alphabet mismatch");
  if (x == y) return 0.0;
  int span = static_cast<int>(std::max(x.head().size(), y.head().size())) + 1;
  for (int i = 1; i <= span; ++i)
    if (x.at(i) != y.at(i)) return std::ldexp(1.0, -(i - 1));
  return 0.0;  // unreachable for canonical points
}

Word cylinder_prefix(const Point& p, int m) {
  if (m < 1) throw std::invalid_argument("cylinder_prefix: m must be >= 1");
  Word w(m);
  for (int i = 1; i <= m; ++i) w[i - 1] = p.at(i);
  return w;
}

TwoSidedPoint::TwoSidedPoint(Point p, Point f)
    : past(std::move(p)), future(std::move(f)) {
  if (past.alphabet() != future.alphabet())
    throw std::invalid_argument("two-sided point: alphabet mismatch");
}

}  // namespace haarkit
