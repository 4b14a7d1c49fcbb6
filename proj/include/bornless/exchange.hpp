#pragma once

// Exact joint laws on short outcome tuples: exchangeability, finite de
// Finetti mixtures, and the P* construction from the game's law.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bornless/dist.hpp"
#include "bornless/gamble.hpp"
#include "bornless/rational.hpp"

namespace bornless {

using Tuple = std::vector<std::uint32_t>;

class JointDist {
 public:
  /// Zero entries are dropped. Throws std::invalid_argument when a tuple has
  /// the wrong length or symbol, or the table does not sum to exactly 1.
  JointDist(std::vector<std::string> alphabet, unsigned n, std::map<Tuple, Rational> table);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  unsigned n() const { return n_; }
  const std::map<Tuple, Rational>& table() const { return table_; }
  Rational prob(const Tuple& t) const;
  /// Marginal on the first k coordinates.
  JointDist marginal(unsigned k) const;

  bool operator==(const JointDist& o) const {
    return alphabet_ == o.alphabet_ && n_ == o.n_ && table_ == o.table_;
  }

 private:
  std::vector<std::string> alphabet_;
  unsigned n_;
  std::map<Tuple, Rational> table_;
};

struct ExchangeabilityResult {
  bool exchangeable = true;
  /// A tuple whose probability changes under `permutation` (an adjacent swap).
  std::optional<Tuple> tuple;
  std::vector<unsigned> permutation;
};

/// Invariance under all permutations, checked through the adjacent
/// transpositions that generate them.
ExchangeabilityResult is_exchangeable(const JointDist& joint);

class Mixture {
 public:
  /// Weights strictly positive and summing to 1; components share an alphabet.
  Mixture(std::vector<Rational> weights, std::vector<FiniteDist> components);

  const std::vector<Rational>& weights() const { return weights_; }
  const std::vector<FiniteDist>& components() const { return components_; }
  const std::vector<std::string>& alphabet() const { return components_.front().alphabet(); }

 private:
  std::vector<Rational> weights_;
  std::vector<FiniteDist> components_;
};

/// sum_i w_i Q_i^{x n}.
JointDist mixture_joint(const Mixture& mixture, unsigned n);

/// First index i with Q_i(xi) >= sum_j w_j Q_j(xi).
std::size_t lemma2_witness(const Mixture& mixture, const std::string& xi);

/// Law of a game with bonus M and per-round outcome law round_law(history, m).
/// The geometric bonus tail P(M >= m_tail) is lumped onto m_tail.
struct GameLaw {
  std::vector<std::string> alphabet;
  std::uint32_t target = 0;
  Rational r;
  std::vector<Rational> bonus;  // bonus[m - 1] = P(M = m), m = 1..m_tail
  std::function<FiniteDist(const Tuple& history, unsigned m)> round_law;

  unsigned m_tail() const { return static_cast<unsigned>(bonus.size()); }

  static GameLaw iid(const FiniteDist& dist, const std::string& target, const Rational& r, const BonusSpec& bonus,
                     unsigned m_tail);
  /// Negative control: round 2 comes out `target` with certainty when M is
  /// odd, so the round law depends on M.
  static GameLaw corrupted(const FiniteDist& dist, const std::string& target, const Rational& r,
                           const BonusSpec& bonus, unsigned m_tail);
};

class UndefinedConditionalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// P(M = m, |Z| >= n, Z_1..Z_n = z) for n = z.size().
Rational game_joint(const GameLaw& law, unsigned m, const Tuple& z);

/// P_{Z_1..Z_n | M = m} on tuples whose (n-1)-prefix lies in Theta^{n-1}_m.
JointDist conditional_on_bonus(const GameLaw& law, unsigned m, unsigned n);

struct PStarReport {
  /// tables[n - 1] = P*_{Z_1..Z_n}.
  std::vector<JointDist> tables;
  std::size_t starequiv_checked = 0;
  std::size_t starequiv_failures = 0;
  std::size_t pstar_peq_checked = 0;
  std::size_t pstar_peq_failures = 0;
  std::size_t exchangeable_failures = 0;  // P* tables with n <= m_max
  /// P*_{Z_1}(target) == P(target) exactly.
  bool bornb = false;
  Rational pstar_target;
  std::string first_failure;

  bool ok() const { return starequiv_failures == 0 && pstar_peq_failures == 0 && exchangeable_failures == 0 && bornb; }
};

/// Builds P* from P*_{Z_n | Z_1..Z_{n-1}} = P_{Z_n | Z_1..Z_{n-1}, M >= n} and
/// checks it against the M = m conditionals for m <= m_max. Throws
/// UndefinedConditionalError when a needed conditioning event has probability 0.
PStarReport pstar_construct(const GameLaw& law, unsigned n_max, unsigned m_max);

struct RepeatSymmetryReport {
  bool repeat = true;
  bool symmetry = true;
  std::size_t conditionals_checked = 0;
  std::size_t undefined_conditionals = 0;
  /// Repeat witness.
  unsigned fail_n = 0;
  unsigned fail_m = 0;
  Tuple fail_prefix;
  /// Symmetry witness.
  unsigned symmetry_fail_m = 0;
  ExchangeabilityResult symmetry_witness;
};

RepeatSymmetryReport check_repeat_symmetry(const GameLaw& law, unsigned n_max, unsigned m_max);

/// Every tuple in alphabet^n in lexicographic order.
std::vector<Tuple> all_tuples(std::size_t alphabet, unsigned n);

}  // namespace bornless
