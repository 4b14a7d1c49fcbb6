#include "bornless/dist.hpp"

#include <set>
#include <stdexcept>

namespace bornless {

FiniteDist::FiniteDist(std::vector<std::string> alphabet, std::vector<Rational> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (alphabet_.empty()) throw std::invalid_argument("FiniteDist: empty alphabet");
  if (alphabet_.size() != probs_.size()) throw std::invalid_argument("FiniteDist: one probability per symbol");
  std::set<std::string> seen(alphabet_.begin(), alphabet_.end());
  if (seen.size() != alphabet_.size()) throw std::invalid_argument("FiniteDist: duplicate symbol");
  Rational total = 0;
  for (const auto& p : probs_) {
    if (p < 0 || p > 1) throw std::invalid_argument("FiniteDist: probability " + to_string(p) + " outside [0, 1]");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("FiniteDist: probabilities sum to " + to_string(total) + ", not 1");
}

FiniteDist FiniteDist::bernoulli(const Rational& p) { return FiniteDist({"0", "1"}, {Rational(1 - p), p}); }

std::size_t FiniteDist::index_of(const std::string& symbol) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == symbol) return i;
  throw std::out_of_range("unknown symbol '" + symbol + "'");
}

}  // namespace bornless
