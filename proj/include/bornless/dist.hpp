#pragma once

#include <string>
#include <vector>

#include "bornless/rational.hpp"

namespace bornless {

/// Distribution on a finite alphabet with exact probabilities summing to 1.
class FiniteDist {
 public:
  /// Throws std::invalid_argument on duplicate symbols, probabilities outside
  /// [0, 1], or a total other than exactly 1.
  FiniteDist(std::vector<std::string> alphabet, std::vector<Rational> probs);

  /// Alphabet {"0", "1"} with P("1") = p.
  static FiniteDist bernoulli(const Rational& p);

  std::size_t size() const { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<Rational>& probs() const { return probs_; }
  const Rational& prob(std::size_t i) const { return probs_.at(i); }
  const Rational& prob(const std::string& symbol) const { return probs_[index_of(symbol)]; }
  /// Throws std::out_of_range for an unknown symbol.
  std::size_t index_of(const std::string& symbol) const;

  bool operator==(const FiniteDist& o) const { return alphabet_ == o.alphabet_ && probs_ == o.probs_; }

 private:
  std::vector<std::string> alphabet_;
  std::vector<Rational> probs_;
};

}  // namespace bornless
