#pragma once

// The entry-fee game: each round costs 1 and pays r on the target outcome.
// The player starts with a bonus m, must play at least m rounds, and stops
// once wealth drops below 1 after that.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bornless/dist.hpp"
#include "bornless/rational.hpp"

namespace bornless {

class BonusSpec {
 public:
  enum class Kind { Fixed, Geometric };

  static BonusSpec fixed(unsigned m);
  /// P(M = m) = q (1-q)^(m-1), m >= 1; q in (0, 1).
  static BonusSpec geometric(Rational q);
  /// "fixed:M" or "geometric:Q".
  static BonusSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  unsigned m() const { return m_; }
  const Rational& q() const { return q_; }
  Rational prob(unsigned m) const;
  /// P(M >= m).
  Rational tail(unsigned m) const;
  unsigned sample(std::mt19937_64& rng) const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::Fixed;
  unsigned m_ = 1;
  Rational q_;
};

struct GameConfig {
  FiniteDist dist;
  std::string target;
  Rational r;
  BonusSpec bonus;
  unsigned horizon = 10000;
  std::uint64_t seed = 0;
  /// Require r * P(target) < 1, the regime in which ruin is certain.
  bool ruin_mode = true;

  /// Bernoulli dist over {"0", "1"} with target "1".
  static GameConfig from_probability(const Rational& p, Rational r, BonusSpec bonus, unsigned horizon,
                                     std::uint64_t seed, bool ruin_mode = true);
};

/// Throws std::invalid_argument when r <= 1, the target is unknown, the
/// horizon is zero, r does not fit the int64 wealth arithmetic, or (in
/// ruin mode) r * p >= 1.
void validate_config(const GameConfig& cfg);

struct GameTrace {
  std::uint64_t trial = 0;
  unsigned m = 0;
  /// Indices into the alphabet of cfg.dist.
  std::vector<std::uint32_t> outcomes;
  bool halted = false;
  bool truncated_at_horizon = false;
  /// Wealth after n rounds, scaled by den(r): wealth_n = scaled[n] / den(r).
  std::vector<std::int64_t> scaled_wealth;
  std::int64_t scale = 1;

  Rational wealth(std::size_t n) const { return Rational(scaled_wealth.at(n), scale); }
  std::size_t rounds() const { return outcomes.size(); }
};

struct ThetaQuery {
  std::vector<std::string> tuple;
  unsigned m = 1;
  Rational r;
  std::string target;
};

/// min over prefixes k <= n of (m - k + r count_target(z_1..z_k)) >= 1.
bool in_theta(const ThetaQuery& q);

/// membership[k] = (z_1..z_k) in Theta^k_m for k = 0..tuple.size(), in one
/// pass of exact rational arithmetic.
std::vector<bool> theta_prefix_membership(const std::vector<std::uint32_t>& tuple, std::uint32_t target,
                                          unsigned m, const Rational& r);

/// ceil(m / (1/r - theta)); throws std::domain_error("threshold undefined")
/// when theta >= 1/r.
std::uint64_t min_n_threshold(unsigned m, const Rational& r, const Rational& theta);

/// Per-trial generator seeded from (seed, trial) through splitmix64, so a
/// trial's stream does not depend on scheduling.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// One game with the bonus drawn from cfg.bonus.
GameTrace play(const GameConfig& cfg, std::uint64_t trial);
/// One game with a given bonus and generator.
GameTrace play_with_bonus(const GameConfig& cfg, unsigned m, std::mt19937_64& rng, std::uint64_t trial = 0);

/// Traces for trials 0..trials-1; OpenMP over trials.
std::vector<GameTrace> simulate(const GameConfig& cfg, std::size_t trials);
std::vector<GameTrace> simulate_serial(const GameConfig& cfg, std::size_t trials);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Two-sided Wilson score interval; z defaults to the 99% quantile.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 2.5758293035489004);

struct HaltingResult {
  std::size_t trials = 0;
  std::size_t halted = 0;
  std::size_t truncated = 0;
  double fraction = 0.0;
  WilsonInterval interval;
};

/// Fraction of games that halt before the horizon; OpenMP reduction over
/// trials, traces are not stored.
HaltingResult halting_fraction(const GameConfig& cfg, std::size_t trials);
HaltingResult halting_fraction_serial(const GameConfig& cfg, std::size_t trials);
HaltingResult halting_summary(const std::vector<GameTrace>& traces);

struct FrequencyBoundReport {
  std::size_t halted = 0;
  std::size_t passed = 0;
  /// Halted traces whose frequency at the ruin round is strictly below 1/r.
  std::size_t below_inverse_r_at_ruin = 0;
  double pass_fraction = 1.0;
  std::optional<std::uint64_t> first_failure;
};

/// For each halted trace: some n in [M, |Z|] has freq_n <= 1/r + (M + r)/n.
FrequencyBoundReport frequency_bound_check(const GameConfig& cfg, const std::vector<GameTrace>& traces);

struct TraceLawReport {
  std::size_t traces = 0;
  std::size_t total_number_violations = 0;  // m <= |Z| <= m + r count_{<|Z|}
  std::size_t halt_condition_violations = 0;
  std::size_t wealth_identity_violations = 0;
  std::optional<std::uint64_t> first_violation;
};

/// Exact checks of the bound on |Z| for halted traces, of
/// "(z_1..z_{n-1}) in Theta^{n-1}_M iff round n was played" at every round,
/// and of wealth_n = M - n + r count_n.
TraceLawReport check_trace_laws(const GameConfig& cfg, const std::vector<GameTrace>& traces);

/// Header "trial,M,n,z_n,wealth_n,halted"; wealth as "num/den".
void write_trace_csv(std::ostream& out, const GameConfig& cfg, const std::vector<GameTrace>& traces);

}  // namespace bornless
