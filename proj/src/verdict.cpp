#include <algorithm>
#include <map>
#include <numeric>

#include "bornless/digits.hpp"
#include "bornless/stories.hpp"

namespace bornless {

namespace {

std::vector<double> label_weights(const StoryGen& story) {
  std::vector<double> w;
  for (std::size_t i = 0; i < story.family.size(); ++i) w.push_back(born_weight(story.psi, story.family.at(i)));
  return w;
}

Verdict base_verdict(const StoryGen& story, unsigned max_block, unsigned horizon) {
  Verdict v;
  v.story_id = story.id;
  v.max_block = max_block;
  v.horizon = horizon;
  v.horizons_checked = {horizon};
  return v;
}

Verdict overlap_hit(Verdict v, std::vector<std::string> zhat, unsigned first, unsigned last, double weight) {
  Witness w;
  w.zhat = std::move(zhat);
  w.born_weight = weight;
  for (unsigned n = first; n <= last && w.rounds.size() < kMaxWitnessRounds; ++n) w.rounds.push_back(n);
  v.status = VerdictStatus::ForbiddenOverlap;
  v.witness = std::move(w);
  return v;
}

}  // namespace

Verdict check_overlap(const StoryGen& story, unsigned horizon, double zero_tol) {
  Verdict v = base_verdict(story, 0, horizon);
  const auto weights = label_weights(story);

  if (has_stream(story)) {
    // Once a factor of zero weight appears at round i it sits in every later
    // prefix, so every round from i to the horizon offends.
    for (unsigned n = 1; n <= horizon; ++n) {
      const std::string& z = outcome_at(story, n - 1);
      double w = weights[story.family.index_of(z)];
      if (w <= zero_tol) return overlap_hit(std::move(v), {z}, n, horizon, w);
    }
    v.status = VerdictStatus::Allowed;
    return v;
  }
  if (const auto* list = std::get_if<ExplicitList>(&story.generator)) {
    std::vector<unsigned> rounds;
    std::optional<std::pair<std::string, double>> first;
    for (const auto& t : list->tuples) {
      if (t.size() > horizon) continue;
      for (const auto& z : t) {
        double w = weights[story.family.index_of(z)];
        if (w <= zero_tol) {
          rounds.push_back(static_cast<unsigned>(t.size()));
          if (!first) first = std::make_pair(z, w);
          break;
        }
      }
    }
    if (rounds.empty()) {
      v.status = VerdictStatus::Allowed;
      return v;
    }
    std::sort(rounds.begin(), rounds.end());
    if (rounds.size() > kMaxWitnessRounds) rounds.resize(kMaxWitnessRounds);
    v.status = VerdictStatus::ForbiddenOverlap;
    v.witness = Witness{{first->first}, std::nullopt, 1, rounds, std::nullopt, first->second};
    return v;
  }
  throw PlotUndefinedError("plot undefined: story " + story.id + " has no outcome generator");
}

Verdict check_bornf(const StoryGen& story, unsigned max_block, unsigned horizon, const Tolerances& tol) {
  Verdict v = base_verdict(story, max_block, horizon);
  const auto weights = label_weights(story);

  if (const auto* p = std::get_if<Periodic>(&story.generator)) {
    const std::size_t pre = p->preamble.size(), len = p->pattern.size();
    for (unsigned b = 1; b <= max_block; ++b) {
      // Blocks j >= j0 lie wholly past the preamble and repeat with this period.
      const std::size_t j0 = (pre + b - 1) / b;
      const std::size_t period = len / std::gcd(len, static_cast<std::size_t>(b));
      auto block_at = [&](std::size_t j) {
        std::vector<std::size_t> key;
        for (unsigned t = 0; t < b; ++t) key.push_back(story.family.index_of(outcome_at(story, j * b + t)));
        return key;
      };
      std::map<std::vector<std::size_t>, std::size_t> counts;
      for (std::size_t j = j0; j < j0 + period; ++j) ++counts[block_at(j)];

      for (const auto& [key, c] : counts) {
        Rational f(static_cast<long long>(c), static_cast<long long>(period));
        double born = 1.0;
        for (auto i : key) born *= weights[i];
        if (!(to_double(f) > born + tol.frequency_margin)) continue;

        Witness w;
        for (auto i : key) w.zhat.push_back(story.family.labels()[i]);
        w.theta = rational_between(born, f);
        w.block = b;
        w.frequency = f;
        w.born_weight = born;
        std::size_t hits = 0;
        for (unsigned n = 1; n <= horizon && w.rounds.size() < kMaxWitnessRounds; ++n) {
          if (block_at(n - 1) == key) ++hits;
          if (Rational(static_cast<long long>(hits)) >= *w.theta * n) w.rounds.push_back(n);
        }
        v.status = VerdictStatus::ForbiddenBornF;
        v.witness = std::move(w);
        return v;
      }
    }
    v.status = VerdictStatus::Allowed;
    v.note = "no block value up to size " + std::to_string(max_block) +
             " has limiting frequency above its Born weight";
    return v;
  }

  if (const auto* list = std::get_if<ExplicitList>(&story.generator)) {
    v.status = VerdictStatus::Allowed;
    v.note = "finite plot of " + std::to_string(list->tuples.size()) +
             " events: yellow cards cannot recur without bound";
    return v;
  }

  if (std::holds_alternative<DigitStream>(story.generator)) {
    const std::size_t n = std::min<std::size_t>(horizon, pi_binary_digits().size());
    std::vector<std::size_t> counts(story.family.size(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[story.family.index_of(outcome_at(story, i))];
    for (std::size_t i = 0; i < counts.size(); ++i)
      v.empirical[story.family.labels()[i]] = n == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(n);
    v.status = VerdictStatus::Inconclusive;
    v.note = "digit stream has no known eventual period; frequencies are empirical over " +
             std::to_string(n) + " digits";
    return v;
  }

  // NoGenerator: only a stored PMStar plot can speak.
  if (story.pmstar && story.pmstar->plot == StoredPlotKind::YellowAlways) {
    const auto& stored = *story.pmstar;
    double born = weights[story.family.index_of(stored.target)];
    if (to_double(stored.theta) > born + tol.frequency_margin) {
      Witness w;
      w.zhat = {stored.target};
      w.theta = stored.theta;
      w.born_weight = born;
      for (unsigned n = 1; n <= horizon && w.rounds.size() < kMaxWitnessRounds; ++n) w.rounds.push_back(n);
      v.status = VerdictStatus::ForbiddenBornF;
      v.witness = std::move(w);
      v.note = "stored PMStar plot shows a yellow card in every round";
      return v;
    }
  }
  v.status = VerdictStatus::Inconclusive;
  v.note = "no outcome generator; the stored plot does not decide BornF";
  return v;
}

}  // namespace bornless
