#include "haarkit/groupoid.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace haarkit {

Relation::Relation(Kind kind, int depth) : kind_(kind), depth_(depth) {
  if (depth_ < 1) throw std::invalid_argument("relation depth must be >= 1");
}

Relation Relation::bigger_than_two() { return Relation(Kind::BiggerThanTwo, 1); }
Relation Relation::k_tail(int k) { return Relation(Kind::KTail, k); }
Relation Relation::eventually_equal(int n) {
  return Relation(Kind::EventuallyEqual, n);
}

bool Relation::related(const Point& x, const Point& y) const {
  if (x.alphabet() != y.alphabet()) return false;
  if (kind_ == Kind::EventuallyEqual) return x.tail() == y.tail();
  Point xs = x, ys = y;
  for (int i = 0; i < depth_; ++i) {
    xs = shift(xs);
    ys = shift(ys);
  }
  return xs == ys;
}

bool Relation::related_words(std::span<const Symbol> x,
                             std::span<const Symbol> y) const {
  if (x.size() != y.size()) return false;
  for (std::size_t i = depth_; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

std::vector<Point> fiber(const Relation& rel, const Point& p) {
  const int r = rel.depth();
  if (rel.kind() == Relation::Kind::EventuallyEqual &&
      static_cast<int>(p.head().size()) > r)
    throw std::invalid_argument(
        "eventually-equal fiber: head length exceeds truncation depth");
  Point base = p;
  for (int i = 0; i < r; ++i) base = shift(base);
  std::vector<Point> out;
  out.reserve(word_count(r, p.alphabet()));
  for (std::size_t ui = 0; ui < word_count(r, p.alphabet()); ++ui) {
    Word u = word_at(ui, r, p.alphabet());
    Point s = base;
    for (int i = r - 1; i >= 0; --i) s = prepend(u[i], s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Word> fiber_words(int d, const Relation& rel,
                              std::span<const Symbol> w) {
  const int r = rel.depth();
  if (static_cast<int>(w.size()) < r)
    throw std::invalid_argument("fiber_words: word shorter than relation depth");
  std::vector<Word> out;
  out.reserve(word_count(r, d));
  for (std::size_t ui = 0; ui < word_count(r, d); ++ui) {
    Word s = word_at(ui, r, d);
    s.insert(s.end(), w.begin() + r, w.end());
    out.push_back(std::move(s));
  }
  return out;
}

KernelObject::KernelObject(std::string name, int d, int depth, int level,
                           WeightsFn weights)
    : name_(std::move(name)),
      d_(d),
      depth_(depth),
      level_(std::max(level, depth)),
      weights_(std::move(weights)) {}

double KernelObject::mass(std::span<const Symbol> y) const {
  double total = 0.0;
  for (double w : weights_(y)) total += w;
  return total;
}

HaarKernel::HaarKernel(Kind kind, std::optional<LocallyConstantFunction> J)
    : kind_(kind), jacobian_(std::move(J)) {}

HaarKernel HaarKernel::counting() { return HaarKernel(Kind::Counting); }
HaarKernel HaarKernel::normalized() { return HaarKernel(Kind::Normalized); }

HaarKernel HaarKernel::jacobian(LocallyConstantFunction J) {
  const int d = J.alphabet();
  for (double v : J.table())
    if (v <= 0.0)
      throw std::invalid_argument("jacobian weights must be strictly positive");
  const int m = std::max(J.level(), 1);
  for (std::size_t ti = 0; ti < word_count(m - 1, d); ++ti) {
    Word t = word_at(ti, m - 1, d);
    double s = 0.0;
    for (Symbol a = 1; a <= d; ++a) {
      Word at;
      at.push_back(a);
      at.insert(at.end(), t.begin(), t.end());
      s += J.at_word(at);
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw std::invalid_argument("jacobian is not fiber-normalized");
  }
  return HaarKernel(Kind::Jacobian, std::move(J));
}

const LocallyConstantFunction& HaarKernel::jac() const {
  if (!jacobian_) throw std::logic_error("kernel has no jacobian");
  return *jacobian_;
}

std::vector<std::pair<Point, double>> HaarKernel::weights(const Relation& rel,
                                                          const Point& p) const {
  auto points = fiber(rel, p);
  std::vector<std::pair<Point, double>> out;
  out.reserve(points.size());
  double total = 0.0;
  for (auto& s : points) {
    double w = 1.0;
    switch (kind_) {
      case Kind::Counting:
        w = 1.0;
        break;
      case Kind::Normalized:
        w = 1.0 / static_cast<double>(points.size());
        break;
      case Kind::Jacobian: {
        w = 1.0;
        Point q = s;
        for (int j = 0; j < rel.depth(); ++j) {
          w *= jacobian_->at_point(q);
          q = shift(q);
        }
        break;
      }
    }
    total += w;
    out.emplace_back(std::move(s), w);
  }
  if (kind_ == Kind::Jacobian && std::abs(total - 1.0) > 1e-12)
    throw std::runtime_error("jacobian kernel not normalized on this fiber");
  return out;
}

KernelObject HaarKernel::to_kernel(const Relation& rel, int d) const {
  const int r = rel.depth();
  const std::size_t fsize = word_count(r, d);
  switch (kind_) {
    case Kind::Counting:
      return KernelObject("counting", d, r, r,
                          [fsize](std::span<const Symbol>) {
                            return std::vector<double>(fsize, 1.0);
                          });
    case Kind::Normalized:
      return KernelObject("normalized", d, r, r,
                          [fsize](std::span<const Symbol>) {
                            return std::vector<double>(
                                fsize, 1.0 / static_cast<double>(fsize));
                          });
    case Kind::Jacobian: {
      LocallyConstantFunction J = *jacobian_;
      const int level = r + std::max(J.level() - 1, 0);
      return KernelObject(
          "jacobian", d, r, level,
          [J, d, r, fsize](std::span<const Symbol> y) {
            std::vector<double> out(fsize);
            for (std::size_t ui = 0; ui < fsize; ++ui) {
              Word s = word_at(ui, r, d);
              s.insert(s.end(), y.begin() + r, y.end());
              double w = 1.0;
              std::span<const Symbol> ss(s);
              for (int j = 0; j < r; ++j) {
                std::span<const Symbol> tail = ss.subspan(j);
                if (static_cast<int>(tail.size()) >= J.level()) {
                  w *= J.at_word(tail);
                } else {
                  // pad with the representative tail symbol 1
                  Word padded(tail.begin(), tail.end());
                  padded.resize(J.level(), 1);
                  w *= J.at_word(padded);
                }
              }
              out[ui] = w;
            }
            return out;
          });
    }
  }
  throw std::logic_error("unreachable");
}

KernelObject delta_kernel(const Relation& rel, int d) {
  const int r = rel.depth();
  return KernelObject("delta", d, r, r, [d, r](std::span<const Symbol> y) {
    std::vector<double> w(word_count(r, d), 0.0);
    w[word_index(y.subspan(0, r), d)] = 1.0;
    return w;
  });
}

std::vector<std::pair<Point, double>> haar_weights(const HaarKernel& kernel,
                                                   const Point& p,
                                                   const Relation& rel) {
  return kernel.weights(rel, p);
}

TransverseVerdict is_transverse(const KernelObject& kernel, const Relation& rel,
                                const std::vector<std::pair<Point, Point>>& samples,
                                int depth, double tol) {
  for (const auto& [x, y] : samples) {
    if (!rel.related(x, y))
      throw std::invalid_argument("is_transverse: sample pair not related");
    const int n = std::max({depth, rel.depth(), kernel.level()});
    Word wx = cylinder_prefix(x, n);
    Word wy = cylinder_prefix(y, n);
    auto vx = kernel.weights(wx);
    auto vy = kernel.weights(wy);
    for (std::size_t i = 0; i < vx.size(); ++i)
      if (std::abs(vx[i] - vy[i]) > tol)
        return TransverseVerdict{false, std::make_pair(x, y)};
  }
  return TransverseVerdict{true, std::nullopt};
}

GroupoidFunction::GroupoidFunction(int d, int level, Relation rel)
    : d_(d), level_(level), rel_(rel) {
  if (level_ < rel_.depth())
    throw std::invalid_argument("groupoid function level below relation depth");
  tails_ = word_count(level_ - rel_.depth(), d_);
  block_ = word_count(rel_.depth(), d_);
  data_.assign(tails_ * block_ * block_, Complex(0.0, 0.0));
}

GroupoidFunction GroupoidFunction::identity(int d, int level,
                                            const Relation& rel) {
  GroupoidFunction f(d, level, rel);
  for (std::size_t t = 0; t < f.tails_; ++t)
    for (std::size_t u = 0; u < f.block_; ++u) f.block(t, u, u) = 1.0;
  return f;
}

GroupoidFunction GroupoidFunction::indicator_pair(int d, const Relation& rel,
                                                  const Word& u, const Word& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("indicator_pair: length mismatch");
  if (!rel.related_words(u, v))
    throw std::invalid_argument("indicator_pair: prefixes not related");
  const int level = static_cast<int>(u.size());
  GroupoidFunction f(d, level, rel);
  const int r = rel.depth();
  std::span<const Symbol> us(u);
  std::size_t tail = word_index(us.subspan(r), d);
  f.block(tail, word_index(us.subspan(0, r), d),
          word_index(std::span<const Symbol>(v).subspan(0, r), d)) = 1.0;
  return f;
}

GroupoidFunction GroupoidFunction::load(std::istream& in, int d,
                                        const Relation& rel) {
  std::vector<std::tuple<Word, Word, Complex>> rows;
  std::string line;
  int level = -1;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string xs, ys;
    double re, im = 0.0;
    if (!(ss >> xs >> ys >> re)) continue;
    ss >> im;
    Word x = word_from_string(xs, d), y = word_from_string(ys, d);
    if (x.size() != y.size())
      throw std::invalid_argument("groupoid function row: length mismatch");
    if (level < 0) level = static_cast<int>(x.size());
    if (static_cast<int>(x.size()) != level)
      throw std::invalid_argument("groupoid function rows have mixed levels");
    if (!rel.related_words(x, y))
      throw std::invalid_argument("groupoid function row: pair not related");
    rows.emplace_back(std::move(x), std::move(y), Complex(re, im));
  }
  if (level < 0) throw std::invalid_argument("empty groupoid function table");
  GroupoidFunction f(d, level, rel);
  const int r = rel.depth();
  for (auto& [x, y, z] : rows) {
    std::span<const Symbol> xs(x), ys(y);
    f.block(word_index(xs.subspan(r), d), word_index(xs.subspan(0, r), d),
            word_index(ys.subspan(0, r), d)) = z;
  }
  return f;
}

GroupoidFunction::Complex& GroupoidFunction::block(std::size_t tail,
                                                   std::size_t u,
                                                   std::size_t v) {
  return data_[(tail * block_ + u) * block_ + v];
}

GroupoidFunction::Complex GroupoidFunction::block(std::size_t tail,
                                                  std::size_t u,
                                                  std::size_t v) const {
  return data_[(tail * block_ + u) * block_ + v];
}

GroupoidFunction::Complex GroupoidFunction::eval(
    std::span<const Symbol> x, std::span<const Symbol> y) const {
  if (x.size() != y.size() || static_cast<int>(x.size()) < level_)
    throw std::invalid_argument("groupoid function eval: bad word lengths");
  if (!rel_.related_words(x, y))
    throw std::invalid_argument("groupoid function eval: pair not related");
  const int r = rel_.depth();
  std::size_t tail = word_index(x.subspan(r, level_ - r), d_);
  return block(tail, word_index(x.subspan(0, r), d_),
               word_index(y.subspan(0, r), d_));
}

GroupoidFunction& GroupoidFunction::operator+=(const GroupoidFunction& other) {
  if (other.d_ != d_ || other.level_ != level_ ||
      other.rel_.depth() != rel_.depth())
    throw std::invalid_argument("groupoid function sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

GroupoidFunction GroupoidFunction::scaled(Complex factor) const {
  GroupoidFunction f(*this);
  for (auto& z : f.data_) z *= factor;
  return f;
}

}  // namespace haarkit
