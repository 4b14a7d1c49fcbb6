#include "bornless/gamble.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bornless {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; unlike std::uniform_real_distribution
// the mapping is fixed across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Sampler {
  std::vector<double> cumulative;
  std::uint32_t draw(std::mt19937_64& rng) const {
    const double u = unit(rng);
    for (std::uint32_t i = 0; i + 1 < cumulative.size(); ++i)
      if (u < cumulative[i]) return i;
    return static_cast<std::uint32_t>(cumulative.size() - 1);
  }
};

Sampler make_sampler(const FiniteDist& dist) {
  Sampler s;
  Rational acc = 0;
  for (const auto& p : dist.probs()) {
    acc += p;
    s.cumulative.push_back(to_double(acc));
  }
  return s;
}

struct ScaledPayoff {
  std::int64_t num;  // numerator of r
  std::int64_t den;  // denominator of r
};

ScaledPayoff scaled_payoff(const Rational& r) {
  return {to_int64(numerator(r)), to_int64(denominator(r))};
}

}  // namespace

// ---- bonus -----------------------------------------------------------------

BonusSpec BonusSpec::fixed(unsigned m) {
  if (m == 0) throw std::invalid_argument("bonus must be a positive integer");
  BonusSpec b;
  b.kind_ = Kind::Fixed;
  b.m_ = m;
  return b;
}

BonusSpec BonusSpec::geometric(Rational q) {
  if (q <= 0 || q >= 1) throw std::invalid_argument("geometric bonus parameter must lie in (0, 1)");
  BonusSpec b;
  b.kind_ = Kind::Geometric;
  b.q_ = std::move(q);
  return b;
}

BonusSpec BonusSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("bonus must be fixed:M or geometric:Q");
  const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
  if (kind == "fixed") {
    Rational m = parse_rational(arg);
    if (denominator(m) != 1 || m < 1 || m > 1'000'000) throw std::invalid_argument("fixed bonus must be an integer in [1, 10^6]");
    return fixed(static_cast<unsigned>(to_int64(numerator(m))));
  }
  if (kind == "geometric") return geometric(parse_rational(arg));
  throw std::invalid_argument("unknown bonus kind '" + kind + "'");
}

Rational BonusSpec::prob(unsigned m) const {
  if (m == 0) return 0;
  if (kind_ == Kind::Fixed) return m == m_ ? 1 : 0;
  Rational p = q_;
  for (unsigned i = 1; i < m; ++i) p *= 1 - q_;
  return p;
}

Rational BonusSpec::tail(unsigned m) const {
  if (m <= 1) return 1;
  if (kind_ == Kind::Fixed) return m <= m_ ? 1 : 0;
  Rational t = 1;
  for (unsigned i = 1; i < m; ++i) t *= 1 - q_;
  return t;
}

unsigned BonusSpec::sample(std::mt19937_64& rng) const {
  if (kind_ == Kind::Fixed) return m_;
  // Inversion: M = 1 + floor(ln U / ln(1 - q)), U in (0, 1].
  const double u = 1.0 - unit(rng);
  const double m = 1.0 + std::floor(std::log(u) / std::log1p(-to_double(q_)));
  return m >= 1e6 ? 1'000'000u : static_cast<unsigned>(m);
}

std::string BonusSpec::to_string() const {
  return kind_ == Kind::Fixed ? "fixed:" + std::to_string(m_) : "geometric:" + bornless::to_string(q_);
}

// ---- configuration ---------------------------------------------------------

GameConfig GameConfig::from_probability(const Rational& p, Rational r, BonusSpec bonus, unsigned horizon,
                                        std::uint64_t seed, bool ruin_mode) {
  return GameConfig{FiniteDist::bernoulli(p), "1", std::move(r), std::move(bonus), horizon, seed, ruin_mode};
}

void validate_config(const GameConfig& cfg) {
  if (cfg.r <= 1) throw std::invalid_argument("payoff r must exceed 1");
  const Rational& p = cfg.dist.prob(cfg.target);
  if (cfg.horizon == 0) throw std::invalid_argument("horizon must be positive");
  // Scaled wealth stays below den*(M + r*H); keep it well inside int64.
  const BigInt bound = (numerator(cfg.r) + denominator(cfg.r)) * (BigInt(cfg.horizon) + 1'000'001);
  if (bound > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
    throw std::invalid_argument("payoff r too large for exact wealth arithmetic at this horizon");
  if (cfg.ruin_mode && cfg.r * p >= 1)
    throw std::invalid_argument("r * p must be below 1 (r = " + to_string(cfg.r) + ", p = " + to_string(p) + ")");
}

// ---- Theta sets ------------------------------------------------------------

bool in_theta(const ThetaQuery& q) {
  Rational wealth = q.m;
  if (wealth < 1) return false;
  for (const auto& z : q.tuple) {
    wealth += (z == q.target ? q.r : Rational(0)) - 1;
    if (wealth < 1) return false;
  }
  return true;
}

std::vector<bool> theta_prefix_membership(const std::vector<std::uint32_t>& tuple, std::uint32_t target,
                                          unsigned m, const Rational& r) {
  std::vector<bool> out;
  out.reserve(tuple.size() + 1);
  Rational wealth = m;
  bool inside = wealth >= 1;
  out.push_back(inside);
  for (auto z : tuple) {
    wealth += (z == target ? r : Rational(0)) - 1;
    inside = inside && wealth >= 1;
    out.push_back(inside);
  }
  return out;
}

std::uint64_t min_n_threshold(unsigned m, const Rational& r, const Rational& theta) {
  const Rational gap = 1 / r - theta;
  if (gap <= 0) throw std::domain_error("threshold undefined: theta must lie below 1/r");
  return static_cast<std::uint64_t>(to_int64(ceil(Rational(m) / gap)));
}

// ---- play ------------------------------------------------------------------

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t s = splitmix64(seed ^ splitmix64(trial + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

namespace {

GameTrace play_impl(const GameConfig& cfg, const Sampler& sampler, std::uint32_t target, ScaledPayoff r,
                    unsigned m, std::mt19937_64& rng, std::uint64_t trial) {
  GameTrace t;
  t.trial = trial;
  t.m = m;
  t.scale = r.den;
  std::int64_t wealth = r.den * m;
  t.scaled_wealth.push_back(wealth);
  unsigned n = 0;
  while (n < m || wealth >= r.den) {
    if (n == cfg.horizon) {
      t.truncated_at_horizon = true;
      return t;
    }
    const std::uint32_t z = sampler.draw(rng);
    ++n;
    wealth += (z == target ? r.num : 0) - r.den;
    t.outcomes.push_back(z);
    t.scaled_wealth.push_back(wealth);
  }
  t.halted = true;
  return t;
}

}  // namespace

GameTrace play_with_bonus(const GameConfig& cfg, unsigned m, std::mt19937_64& rng, std::uint64_t trial) {
  validate_config(cfg);
  return play_impl(cfg, make_sampler(cfg.dist), static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target)),
                   scaled_payoff(cfg.r), m, rng, trial);
}

GameTrace play(const GameConfig& cfg, std::uint64_t trial) {
  auto rng = trial_rng(cfg.seed, trial);
  const unsigned m = cfg.bonus.sample(rng);
  return play_with_bonus(cfg, m, rng, trial);
}

std::vector<GameTrace> simulate(const GameConfig& cfg, std::size_t trials) {
  validate_config(cfg);
  const Sampler sampler = make_sampler(cfg.dist);
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  const ScaledPayoff r = scaled_payoff(cfg.r);
  std::vector<GameTrace> out(trials);
  const long count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < count; ++i) {
    const auto trial = static_cast<std::uint64_t>(i);
    auto rng = trial_rng(cfg.seed, trial);
    const unsigned m = cfg.bonus.sample(rng);
    out[static_cast<std::size_t>(i)] = play_impl(cfg, sampler, target, r, m, rng, trial);
  }
  return out;
}

std::vector<GameTrace> simulate_serial(const GameConfig& cfg, std::size_t trials) {
  validate_config(cfg);
  const Sampler sampler = make_sampler(cfg.dist);
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  const ScaledPayoff r = scaled_payoff(cfg.r);
  std::vector<GameTrace> out;
  out.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(cfg.seed, i);
    const unsigned m = cfg.bonus.sample(rng);
    out.push_back(play_impl(cfg, sampler, target, r, m, rng, i));
  }
  return out;
}

// ---- halting ---------------------------------------------------------------

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

HaltingResult finish(std::size_t trials, std::size_t halted, std::size_t truncated) {
  HaltingResult h{trials, halted, truncated, trials == 0 ? 0.0 : static_cast<double>(halted) / static_cast<double>(trials),
                  wilson_interval(halted, trials)};
  return h;
}

}  // namespace

HaltingResult halting_fraction(const GameConfig& cfg, std::size_t trials) {
  validate_config(cfg);
  const Sampler sampler = make_sampler(cfg.dist);
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  const ScaledPayoff r = scaled_payoff(cfg.r);
  std::size_t halted = 0, truncated = 0;
  const long count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : halted, truncated)
  for (long i = 0; i < count; ++i) {
    const auto trial = static_cast<std::uint64_t>(i);
    auto rng = trial_rng(cfg.seed, trial);
    const unsigned m = cfg.bonus.sample(rng);
    GameTrace t = play_impl(cfg, sampler, target, r, m, rng, trial);
    halted += t.halted ? 1 : 0;
    truncated += t.truncated_at_horizon ? 1 : 0;
  }
  return finish(trials, halted, truncated);
}

HaltingResult halting_fraction_serial(const GameConfig& cfg, std::size_t trials) {
  validate_config(cfg);
  const Sampler sampler = make_sampler(cfg.dist);
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  const ScaledPayoff r = scaled_payoff(cfg.r);
  std::size_t halted = 0, truncated = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(cfg.seed, i);
    const unsigned m = cfg.bonus.sample(rng);
    GameTrace t = play_impl(cfg, sampler, target, r, m, rng, i);
    halted += t.halted ? 1 : 0;
    truncated += t.truncated_at_horizon ? 1 : 0;
  }
  return finish(trials, halted, truncated);
}

HaltingResult halting_summary(const std::vector<GameTrace>& traces) {
  std::size_t halted = 0, truncated = 0;
  for (const auto& t : traces) {
    halted += t.halted ? 1 : 0;
    truncated += t.truncated_at_horizon ? 1 : 0;
  }
  return finish(traces.size(), halted, truncated);
}

// ---- per-trace laws --------------------------------------------------------

FrequencyBoundReport frequency_bound_check(const GameConfig& cfg, const std::vector<GameTrace>& traces) {
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  const Rational inv_r = 1 / cfg.r;
  FrequencyBoundReport rep;
  for (const auto& t : traces) {
    if (!t.halted) continue;
    ++rep.halted;
    bool ok = false;
    std::uint64_t count = 0;
    for (std::size_t n = 1; n <= t.rounds(); ++n) {
      count += t.outcomes[n - 1] == target ? 1 : 0;
      if (n < t.m) continue;
      const Rational freq(static_cast<long long>(count), static_cast<long long>(n));
      if (freq <= inv_r + (Rational(t.m) + cfg.r) / static_cast<long long>(n)) ok = true;
      if (n == t.rounds() && freq < inv_r) ++rep.below_inverse_r_at_ruin;
    }
    if (ok) {
      ++rep.passed;
    } else if (!rep.first_failure) {
      rep.first_failure = t.trial;
    }
  }
  rep.pass_fraction = rep.halted == 0 ? 1.0 : static_cast<double>(rep.passed) / static_cast<double>(rep.halted);
  return rep;
}

TraceLawReport check_trace_laws(const GameConfig& cfg, const std::vector<GameTrace>& traces) {
  const auto target = static_cast<std::uint32_t>(cfg.dist.index_of(cfg.target));
  TraceLawReport rep;
  rep.traces = traces.size();
  auto flag = [&](const GameTrace& t, std::size_t& counter) {
    ++counter;
    if (!rep.first_violation) rep.first_violation = t.trial;
  };
  for (const auto& t : traces) {
    const std::size_t len = t.rounds();
    // wealth identity
    std::uint64_t count = 0;
    bool wealth_ok = t.scaled_wealth.size() == len + 1;
    for (std::size_t n = 0; wealth_ok && n <= len; ++n) {
      if (n > 0) count += t.outcomes[n - 1] == target ? 1 : 0;
      const Rational expected = Rational(t.m) - static_cast<long long>(n) + cfg.r * static_cast<long long>(count);
      wealth_ok = t.wealth(n) == expected;
    }
    if (!wealth_ok) flag(t, rep.wealth_identity_violations);

    if (t.halted) {
      std::uint64_t before_last = 0;
      for (std::size_t n = 0; n + 1 < len; ++n) before_last += t.outcomes[n] == target ? 1 : 0;
      const bool bound_ok = t.m <= len && Rational(static_cast<long long>(len)) <=
                                              Rational(t.m) + cfg.r * static_cast<long long>(before_last);
      if (!bound_ok) flag(t, rep.total_number_violations);
    }

    // Round n was played iff the first n-1 outcomes lie in Theta^{n-1}_M.
    // For a truncated trace the decision after the horizon is unknown.
    const auto inside = theta_prefix_membership(t.outcomes, target, t.m, cfg.r);
    const std::size_t last_n = t.halted ? len + 1 : len;
    bool halt_ok = true;
    for (std::size_t n = 1; n <= last_n; ++n) halt_ok = halt_ok && (inside[n - 1] == (len >= n));
    if (!halt_ok) flag(t, rep.halt_condition_violations);
  }
  return rep;
}

void write_trace_csv(std::ostream& out, const GameConfig& cfg, const std::vector<GameTrace>& traces) {
  out << "trial,M,n,z_n,wealth_n,halted\n";
  for (const auto& t : traces) {
    const char* halted = t.halted ? "true" : "false";
    out << t.trial << ',' << t.m << ",0,," << to_string(t.wealth(0)) << ',' << halted << '\n';
    for (std::size_t n = 1; n <= t.rounds(); ++n)
      out << t.trial << ',' << t.m << ',' << n << ',' << cfg.dist.alphabet()[t.outcomes[n - 1]] << ','
          << to_string(t.wealth(n)) << ',' << halted << '\n';
  }
}

}  // namespace bornless
