#include "haarkit/potential.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace haarkit {

LocallyConstantFunction::LocallyConstantFunction(int d, int level,
                                                 std::vector<double> table)
    : d_(d), level_(level), table_(std::move(table)) {
  if (d_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
  if (level_ < 0) throw std::invalid_argument("level must be >= 0");
  if (table_.size() != word_count(level_, d_))
    throw std::invalid_argument("table size must be d^level");
}

LocallyConstantFunction LocallyConstantFunction::constant(int d, double value) {
  return LocallyConstantFunction(d, 0, {value});
}

double LocallyConstantFunction::at_word(std::span<const Symbol> w) const {
  if (static_cast<int>(w.size()) < level_)
    throw std::invalid_argument("word shorter than function level");
  return table_[word_index(w.subspan(0, level_), d_)];
}

double LocallyConstantFunction::at_point(const Point& p) const {
  if (level_ == 0) return table_[0];
  Word w = cylinder_prefix(p, level_);
  return table_[word_index(w, d_)];
}

Potential::Potential(int d, int memory, std::vector<double> table)
    : d_(d), k_(memory), table_(std::move(table)) {
  if (d_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
  if (k_ < 1) throw std::invalid_argument("potential memory must be >= 1");
  if (table_.size() != word_count(k_, d_))
    throw std::invalid_argument("potential table size must be d^k");
}

Potential Potential::constant(int d, int memory, double value) {
  return Potential(d, memory,
                   std::vector<double>(word_count(memory, d), value));
}

double Potential::at_word(std::span<const Symbol> w) const {
  if (static_cast<int>(w.size()) < k_)
    throw std::invalid_argument("word shorter than potential memory");
  return table_[word_index(w.subspan(0, k_), d_)];
}

double Potential::at_point(const Point& p) const {
  Word w = cylinder_prefix(p, k_);
  return table_[word_index(w, d_)];
}

Potential Potential::scaled(double factor) const {
  std::vector<double> t(table_);
  for (double& v : t) v *= factor;
  return Potential(d_, k_, std::move(t));
}

Potential Potential::shifted(double constant) const {
  std::vector<double> t(table_);
  for (double& v : t) v += constant;
  return Potential(d_, k_, std::move(t));
}

Potential load_potential(std::istream& in, int d) {
  std::vector<std::pair<Word, double>> rows;
  std::string line;
  int k = -1;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string wtext;
    double value;
    if (!(ss >> wtext >> value)) continue;
    Word w = word_from_string(wtext, d);
    if (k < 0) k = static_cast<int>(w.size());
    if (static_cast<int>(w.size()) != k)
      throw std::invalid_argument("potential table rows have mixed lengths");
    rows.emplace_back(std::move(w), value);
  }
  if (k <= 0) throw std::invalid_argument("empty potential table");
  std::vector<double> table(word_count(k, d));
  std::vector<bool> seen(table.size(), false);
  for (auto& [w, v] : rows) {
    std::size_t idx = word_index(w, d);
    table[idx] = v;
    seen[idx] = true;
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("potential table incomplete");
  return Potential(d, k, std::move(table));
}

}  // namespace haarkit
