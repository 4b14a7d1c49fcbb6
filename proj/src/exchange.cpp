#include "bornless/exchange.hpp"

#include <algorithm>
#include <set>

namespace bornless {

std::vector<Tuple> all_tuples(std::size_t alphabet, unsigned n) {
  std::vector<Tuple> out;
  Tuple t(n, 0);
  while (true) {
    out.push_back(t);
    unsigned i = n;
    while (i > 0 && t[i - 1] + 1 == alphabet) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

// ---- JointDist -------------------------------------------------------------

JointDist::JointDist(std::vector<std::string> alphabet, unsigned n, std::map<Tuple, Rational> table)
    : alphabet_(std::move(alphabet)), n_(n) {
  Rational total = 0;
  for (auto& [t, p] : table) {
    if (t.size() != n_) throw std::invalid_argument("JointDist: tuple of wrong length");
    for (auto z : t)
      if (z >= alphabet_.size()) throw std::invalid_argument("JointDist: symbol outside the alphabet");
    if (p < 0) throw std::invalid_argument("JointDist: negative probability");
    total += p;
    if (p != 0) table_.emplace(t, p);
  }
  if (total != 1) throw std::invalid_argument("JointDist: table sums to " + to_string(total) + ", not 1");
}

Rational JointDist::prob(const Tuple& t) const {
  auto it = table_.find(t);
  return it == table_.end() ? Rational(0) : it->second;
}

JointDist JointDist::marginal(unsigned k) const {
  if (k > n_) throw std::invalid_argument("JointDist::marginal: k exceeds n");
  std::map<Tuple, Rational> out;
  for (const auto& [t, p] : table_) out[Tuple(t.begin(), t.begin() + k)] += p;
  return JointDist(alphabet_, k, std::move(out));
}

ExchangeabilityResult is_exchangeable(const JointDist& joint) {
  for (const auto& [t, p] : joint.table()) {
    for (unsigned i = 0; i + 1 < joint.n(); ++i) {
      if (t[i] == t[i + 1]) continue;
      Tuple s = t;
      std::swap(s[i], s[i + 1]);
      if (joint.prob(s) != p) {
        std::vector<unsigned> perm(joint.n());
        for (unsigned k = 0; k < joint.n(); ++k) perm[k] = k;
        std::swap(perm[i], perm[i + 1]);
        return {false, t, perm};
      }
    }
  }
  return {};
}

// ---- mixtures --------------------------------------------------------------

Mixture::Mixture(std::vector<Rational> weights, std::vector<FiniteDist> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (weights_.empty() || weights_.size() != components_.size())
    throw std::invalid_argument("Mixture: one positive weight per component");
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w <= 0) throw std::invalid_argument("Mixture: weights must be strictly positive");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("Mixture: weights sum to " + to_string(total) + ", not 1");
  for (const auto& c : components_)
    if (c.alphabet() != components_.front().alphabet())
      throw std::invalid_argument("Mixture: components must share an alphabet");
}

JointDist mixture_joint(const Mixture& mixture, unsigned n) {
  std::map<Tuple, Rational> table;
  for (const auto& t : all_tuples(mixture.alphabet().size(), n)) {
    Rational p = 0;
    for (std::size_t i = 0; i < mixture.weights().size(); ++i) {
      Rational term = mixture.weights()[i];
      for (auto z : t) term *= mixture.components()[i].prob(z);
      p += term;
    }
    table.emplace(t, p);
  }
  return JointDist(mixture.alphabet(), n, std::move(table));
}

std::size_t lemma2_witness(const Mixture& mixture, const std::string& xi) {
  Rational average = 0;
  for (std::size_t i = 0; i < mixture.weights().size(); ++i)
    average += mixture.weights()[i] * mixture.components()[i].prob(xi);
  for (std::size_t i = 0; i < mixture.weights().size(); ++i)
    if (mixture.components()[i].prob(xi) >= average) return i;
  throw std::logic_error("lemma2_witness: no component reaches the mixture average");
}

// ---- game law --------------------------------------------------------------

namespace {

std::vector<Rational> lumped_bonus(const BonusSpec& bonus, unsigned m_tail) {
  if (m_tail == 0) throw std::invalid_argument("m_tail must be positive");
  if (bonus.kind() == BonusSpec::Kind::Fixed) m_tail = std::max(m_tail, bonus.m());
  std::vector<Rational> out;
  for (unsigned m = 1; m < m_tail; ++m) out.push_back(bonus.prob(m));
  out.push_back(bonus.tail(m_tail));
  return out;
}

bool prefix_in_theta(const GameLaw& law, unsigned m, const Tuple& z, std::size_t len) {
  Rational wealth = m;
  for (std::size_t i = 0; i < len; ++i) {
    wealth += (z[i] == law.target ? law.r : Rational(0)) - 1;
    if (wealth < 1) return false;
  }
  return true;
}

Tuple prefix(const Tuple& z, std::size_t len) { return Tuple(z.begin(), z.begin() + static_cast<long>(len)); }

std::string show(const Tuple& z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + std::to_string(z[i]);
  return s + ")";
}

}  // namespace

GameLaw GameLaw::iid(const FiniteDist& dist, const std::string& target, const Rational& r, const BonusSpec& bonus,
                     unsigned m_tail) {
  return GameLaw{dist.alphabet(), static_cast<std::uint32_t>(dist.index_of(target)), r, lumped_bonus(bonus, m_tail),
                 [dist](const Tuple&, unsigned) { return dist; }};
}

GameLaw GameLaw::corrupted(const FiniteDist& dist, const std::string& target, const Rational& r,
                           const BonusSpec& bonus, unsigned m_tail) {
  const auto t = dist.index_of(target);
  std::vector<Rational> point(dist.size(), Rational(0));
  point[t] = 1;
  FiniteDist forced(dist.alphabet(), point);
  return GameLaw{dist.alphabet(), static_cast<std::uint32_t>(t), r, lumped_bonus(bonus, m_tail),
                 [dist, forced](const Tuple& history, unsigned m) {
                   return history.size() == 1 && m % 2 == 1 ? forced : dist;
                 }};
}

Rational game_joint(const GameLaw& law, unsigned m, const Tuple& z) {
  if (m == 0 || m > law.m_tail()) return 0;
  Rational p = law.bonus[m - 1];
  for (std::size_t i = 0; i < z.size() && p != 0; ++i) {
    if (!prefix_in_theta(law, m, z, i)) return 0;
    p *= law.round_law(prefix(z, i), m).prob(z[i]);
  }
  return p;
}

JointDist conditional_on_bonus(const GameLaw& law, unsigned m, unsigned n) {
  const Rational pm = m >= 1 && m <= law.m_tail() ? law.bonus[m - 1] : Rational(0);
  if (pm == 0) throw UndefinedConditionalError("P(M = " + std::to_string(m) + ") = 0");
  std::map<Tuple, Rational> table;
  Rational mass = 0;
  for (const auto& z : all_tuples(law.alphabet.size(), n)) {
    if (!prefix_in_theta(law, m, z, n == 0 ? 0 : n - 1)) continue;
    Rational p = game_joint(law, m, z) / pm;
    mass += p;
    table.emplace(z, p);
  }
  // The game reaches round n with certainty only inside Theta; elsewhere the
  // conditional law of the first n outcomes is not a distribution on n-tuples.
  if (mass != 1)
    throw UndefinedConditionalError("P_{Z_1..Z_" + std::to_string(n) + " | M = " + std::to_string(m) +
                                    "} is not defined on all n-tuples (round " + std::to_string(n) +
                                    " is not always reached)");
  return JointDist(law.alphabet, n, std::move(table));
}

PStarReport pstar_construct(const GameLaw& law, unsigned n_max, unsigned m_max) {
  if (n_max == 0) throw std::invalid_argument("n_max must be positive");
  if (law.m_tail() < n_max)
    throw std::invalid_argument("bonus support must reach n_max so that M >= n has positive mass");
  PStarReport rep;
  std::map<Tuple, Rational> previous{{Tuple{}, Rational(1)}};
  for (unsigned n = 1; n <= n_max; ++n) {
    std::map<Tuple, Rational> current;
    for (const auto& z : all_tuples(law.alphabet.size(), n)) {
      const Tuple head = prefix(z, n - 1);
      const Rational base = previous.count(head) ? previous.at(head) : Rational(0);
      if (base == 0) {
        current.emplace(z, 0);
        continue;
      }
      Rational num = 0, den = 0;
      for (unsigned m = n; m <= law.m_tail(); ++m) {
        num += game_joint(law, m, z);
        den += game_joint(law, m, head);
      }
      if (den == 0)
        throw UndefinedConditionalError("P(Z_" + std::to_string(n) + " | Z_1..Z_" + std::to_string(n - 1) + " = " +
                                        show(head) + ", M >= " + std::to_string(n) + ") is undefined");
      current.emplace(z, base * num / den);
    }
    rep.tables.emplace_back(law.alphabet, n, current);
    previous = std::move(current);
  }

  for (unsigned m = 1; m <= m_max && m <= law.m_tail(); ++m) {
    if (law.bonus[m - 1] == 0) continue;
    for (unsigned n = 1; n <= n_max; ++n) {
      const JointDist& star = rep.tables[n - 1];
      // Pointwise equality on prefixes with z_1^{n-1} in Theta^{n-1}_m.
      for (const auto& z : all_tuples(law.alphabet.size(), n)) {
        if (!prefix_in_theta(law, m, z, n - 1)) continue;
        ++rep.starequiv_checked;
        if (star.prob(z) != game_joint(law, m, z) / law.bonus[m - 1]) {
          ++rep.starequiv_failures;
          if (rep.first_failure.empty())
            rep.first_failure = "starequiv: n=" + std::to_string(n) + " m=" + std::to_string(m) + " z=" + show(z);
        }
      }
      if (n <= m) {
        ++rep.pstar_peq_checked;
        if (!(star == conditional_on_bonus(law, m, n))) {
          ++rep.pstar_peq_failures;
          if (rep.first_failure.empty())
            rep.first_failure = "PstarPeq: n=" + std::to_string(n) + " m=" + std::to_string(m);
        }
      }
    }
  }
  for (unsigned n = 1; n <= std::min(n_max, m_max); ++n)
    if (!is_exchangeable(rep.tables[n - 1]).exchangeable) ++rep.exchangeable_failures;

  rep.pstar_target = rep.tables.front().prob(Tuple{law.target});
  const Rational born = law.round_law(Tuple{}, law.m_tail()).prob(law.target);
  rep.bornb = rep.pstar_target == born;
  return rep;
}

RepeatSymmetryReport check_repeat_symmetry(const GameLaw& law, unsigned n_max, unsigned m_max) {
  RepeatSymmetryReport rep;
  const std::size_t k = law.alphabet.size();
  for (unsigned n = 1; n <= n_max && rep.repeat; ++n) {
    for (const auto& head : all_tuples(k, n - 1)) {
      // reach(m) = P(M = m, |Z| >= n, Z_1^{n-1} = head)
      std::vector<Rational> reach(law.m_tail() + 1, Rational(0));
      Rational total_reach = 0;
      for (unsigned m = 1; m <= law.m_tail(); ++m) {
        if (!prefix_in_theta(law, m, head, n - 1)) continue;
        reach[m] = game_joint(law, m, head);
        total_reach += reach[m];
      }
      if (total_reach == 0) {
        ++rep.undefined_conditionals;
        continue;
      }
      for (std::uint32_t z = 0; z < k; ++z) {
        Tuple full = head;
        full.push_back(z);
        std::vector<Rational> joint(law.m_tail() + 1, Rational(0));
        Rational total = 0;
        for (unsigned m = 1; m <= law.m_tail(); ++m) {
          if (reach[m] == 0) continue;
          joint[m] = game_joint(law, m, full);
          total += joint[m];
        }
        const Rational pooled = total / total_reach;
        for (unsigned m = 1; m <= law.m_tail(); ++m) {
          if (reach[m] == 0) continue;
          ++rep.conditionals_checked;
          if (joint[m] / reach[m] != pooled && rep.repeat) {
            rep.repeat = false;
            rep.fail_n = n;
            rep.fail_m = m;
            rep.fail_prefix = head;
          }
        }
      }
    }
  }
  for (unsigned m = 1; m <= m_max && m <= law.m_tail(); ++m) {
    if (law.bonus[m - 1] == 0) continue;
    auto result = is_exchangeable(conditional_on_bonus(law, m, m));
    if (!result.exchangeable) {
      rep.symmetry = false;
      rep.symmetry_fail_m = m;
      rep.symmetry_witness = std::move(result);
      break;
    }
  }
  return rep;
}

}  // namespace bornless
