#include "bornless/stories.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bornless/digits.hpp"

namespace bornless {

namespace {

const std::string& digit_label(const ProjectorFamily& family, std::uint8_t digit) {
  static const std::string names[2] = {"0", "1"};
  return family.labels()[family.index_of(names[digit])];
}

std::size_t target_index(const StoryGen& story, const FreqTestSpec& test) {
  return story.family.index_of(test.target());
}

bool same_base(const Ket& a, const Ket& b) {
  return a.dim() == b.dim() && (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= 1e-12;
}

}  // namespace

void validate_story(const StoryGen& story) {
  if (story.psi.dim() != story.family.dim())
    throw DimensionError("story " + story.id + ": state and family differ in dimension");
  if (!story.psi.is_normalized()) throw std::invalid_argument("story " + story.id + ": psi not normalized");
  auto check_labels = [&](const std::vector<std::string>& labels, const std::string& where) {
    for (const auto& l : labels) {
      try {
        story.family.index_of(l);
      } catch (const std::out_of_range&) {
        throw std::invalid_argument("story " + story.id + ": unknown outcome '" + l + "' in " + where);
      }
    }
  };
  if (const auto* p = std::get_if<Periodic>(&story.generator)) {
    if (p->pattern.empty()) throw std::invalid_argument("story " + story.id + ": empty periodic pattern");
    check_labels(p->pattern, "pattern");
    check_labels(p->preamble, "preamble");
  } else if (const auto* e = std::get_if<ExplicitList>(&story.generator)) {
    std::set<std::size_t> lengths;
    for (const auto& t : e->tuples) {
      check_labels(t, "tuple");
      if (!lengths.insert(t.size()).second)
        throw std::invalid_argument("story " + story.id + ": two tuples of length " +
                                    std::to_string(t.size()) + " share a round");
    }
  } else if (const auto* d = std::get_if<DigitStream>(&story.generator)) {
    if (d->stream != "pi") throw std::invalid_argument("story " + story.id + ": unknown stream '" + d->stream + "'");
    check_labels({"0", "1"}, "digit stream");
  }
  if (story.pmstar) {
    check_labels({story.pmstar->target}, "pmstar target");
    if (story.pmstar->theta <= 0 || story.pmstar->theta > 1)
      throw std::invalid_argument("story " + story.id + ": pmstar theta must lie in (0, 1]");
  }
}

bool has_stream(const StoryGen& story) {
  return std::holds_alternative<Periodic>(story.generator) ||
         std::holds_alternative<DigitStream>(story.generator);
}

const std::string& outcome_at(const StoryGen& story, std::size_t i) {
  if (const auto* p = std::get_if<Periodic>(&story.generator)) {
    if (i < p->preamble.size()) return p->preamble[i];
    return p->pattern[(i - p->preamble.size()) % p->pattern.size()];
  }
  if (std::holds_alternative<DigitStream>(story.generator)) {
    const auto& digits = pi_binary_digits();
    if (i >= digits.size()) throw std::out_of_range("digit stream exhausted at index " + std::to_string(i));
    return digit_label(story.family, digits[i]);
  }
  throw std::logic_error("story " + story.id + " has no outcome stream");
}

std::optional<FreqTestSpec> stored_test(const StoryGen& story) {
  if (!story.pmstar) return std::nullopt;
  return FreqTestSpec(story.psi, story.family, story.pmstar->target, story.pmstar->theta);
}

std::string block_label(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ',';
    out += parts[i];
  }
  return out;
}

StoryGen block_story(const StoryGen& story, unsigned b) {
  const auto* p = std::get_if<Periodic>(&story.generator);
  if (p == nullptr) throw std::invalid_argument("block_story: periodic generator required");
  if (b == 0) throw std::invalid_argument("block_story: block size must be positive");

  const std::size_t z = story.family.size();
  std::vector<std::string> labels;
  std::vector<Projector> projectors;
  std::vector<std::size_t> digits(b, 0);
  std::size_t tuples = 1;
  for (unsigned i = 0; i < b; ++i) tuples *= z;
  for (std::size_t idx = 0; idx < tuples; ++idx) {
    std::size_t rest = idx;
    for (unsigned i = 0; i < b; ++i, rest /= z) digits[b - 1 - i] = rest % z;
    std::vector<std::string> parts;
    Projector proj = story.family.at(digits[0]);
    parts.push_back(story.family.labels()[digits[0]]);
    for (unsigned i = 1; i < b; ++i) {
      proj = proj.tensor(story.family.at(digits[i]));
      parts.push_back(story.family.labels()[digits[i]]);
    }
    labels.push_back(block_label(parts));
    projectors.push_back(std::move(proj));
  }

  const std::size_t pre = p->preamble.size(), len = p->pattern.size();
  const std::size_t j0 = (pre + b - 1) / b;
  const std::size_t period = len / std::gcd(len, static_cast<std::size_t>(b));
  auto block_at = [&](std::size_t j) {
    std::vector<std::string> parts;
    for (unsigned t = 0; t < b; ++t) parts.push_back(outcome_at(story, j * b + t));
    return block_label(parts);
  };
  Periodic blocked;
  for (std::size_t j = 0; j < j0; ++j) blocked.preamble.push_back(block_at(j));
  for (std::size_t j = j0; j < j0 + period; ++j) blocked.pattern.push_back(block_at(j));

  return StoryGen{story.id + "^" + std::to_string(b), story.prose, tensor_power(story.psi, b),
                  ProjectorFamily(std::move(labels), std::move(projectors)), std::move(blocked),
                  std::nullopt};
}

Plot expand_plot(const StoryGen& story, ExperimentKind kind, unsigned horizon,
                 const std::optional<FreqTestSpec>& test) {
  std::vector<Event> events;
  const bool is_list = std::holds_alternative<ExplicitList>(story.generator);

  if (kind == ExperimentKind::PM) {
    if (is_list) {
      for (const auto& t : std::get<ExplicitList>(story.generator).tuples)
        if (t.size() <= horizon) {
          auto n = static_cast<unsigned>(t.size());
          events.push_back({SymbolicTensorPower{story.psi, n}, t, n});
        }
    } else if (has_stream(story)) {
      OutcomeTuple prefix;
      for (unsigned n = 1; n <= horizon; ++n) {
        prefix.push_back(outcome_at(story, n - 1));
        events.push_back({SymbolicTensorPower{story.psi, n}, prefix, n});
      }
    } else {
      throw PlotUndefinedError("plot undefined: story " + story.id + " has no outcome generator");
    }
    return Plot(kind, horizon, std::move(events));
  }

  std::optional<FreqTestSpec> spec = test ? test : stored_test(story);
  auto card_for = [](bool yellow, unsigned n) { return yellow ? TestResult::card(n) : TestResult::ok(); };

  if (has_stream(story) || is_list) {
    if (!spec) throw PlotUndefinedError("plot undefined: story " + story.id + " names no frequency test");
    const std::size_t target = target_index(story, *spec);
    if (is_list) {
      for (const auto& t : std::get<ExplicitList>(story.generator).tuples) {
        if (t.size() > horizon) continue;
        auto n = static_cast<unsigned>(t.size());
        unsigned count = 0;
        for (const auto& z : t) count += story.family.index_of(z) == target ? 1u : 0u;
        events.push_back({SymbolicTensorPower{story.psi, n}, card_for(n > 0 && spec->meets_threshold(count, n), n), n});
      }
    } else {
      unsigned count = 0;
      for (unsigned n = 1; n <= horizon; ++n) {
        count += story.family.index_of(outcome_at(story, n - 1)) == target ? 1u : 0u;
        events.push_back({SymbolicTensorPower{story.psi, n}, card_for(spec->meets_threshold(count, n), n), n});
      }
    }
    return Plot(kind, horizon, std::move(events));
  }

  if (!story.pmstar || !story.pmstar->plot)
    throw PlotUndefinedError("plot undefined: story " + story.id + " has neither a generator nor a stored PMStar plot");
  const auto& stored = *story.pmstar;
  const unsigned last = *stored.plot == StoredPlotKind::Explicit
                            ? std::min<unsigned>(horizon, static_cast<unsigned>(stored.rounds.size()))
                            : horizon;
  for (unsigned n = 1; n <= last; ++n) {
    TestResult t = *stored.plot == StoredPlotKind::OkAlways       ? TestResult::ok()
                   : *stored.plot == StoredPlotKind::YellowAlways ? TestResult::card(n)
                                                                  : stored.rounds[n - 1];
    events.push_back({SymbolicTensorPower{story.psi, n}, t, n});
  }
  return Plot(kind, horizon, std::move(events));
}

std::size_t count_yellow_cards(const StoryGen& story, const FreqTestSpec& test, unsigned horizon) {
  if (has_stream(story)) {
    const std::size_t target = target_index(story, test);
    unsigned count = 0;
    std::size_t cards = 0;
    for (unsigned n = 1; n <= horizon; ++n) {
      count += story.family.index_of(outcome_at(story, n - 1)) == target ? 1u : 0u;
      cards += test.meets_threshold(count, n) ? 1u : 0u;
    }
    return cards;
  }
  Plot plot = expand_plot(story, ExperimentKind::PMStar, horizon, test);
  return static_cast<std::size_t>(std::count_if(plot.events().begin(), plot.events().end(), [](const Event& e) {
    return std::get<TestResult>(e.outcome).yellow;
  }));
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Allowed: return "Allowed";
    case VerdictStatus::ForbiddenOverlap: return "ForbiddenOverlap";
    case VerdictStatus::ForbiddenBornF: return "ForbiddenBornF";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

// ---- perturbation ----------------------------------------------------------

namespace {

std::optional<FockVector> fock_in_h_psi(const EventState& state, const Ket& psi) {
  if (const auto* t = std::get_if<SymbolicTensorPower>(&state)) {
    if (!same_base(t->base, psi)) return std::nullopt;
    return FockVector::single(t->base, t->n, std::max(t->n, FockVector::kDefaultMaxSector));
  }
  if (const auto* f = std::get_if<FockVector>(&state)) {
    if (!same_base(f->base(), psi)) return std::nullopt;
    return *f;
  }
  return std::nullopt;
}

}  // namespace

PerturbResult perturb_plot(const Plot& plot, const FreqTestSpec& spec, unsigned m, const Tolerances& tol) {
  std::vector<Event> kept;
  std::vector<unsigned> annihilated;
  const Projector& target = spec.target_projector();
  for (const auto& e : plot.events()) {
    auto fock = fock_in_h_psi(e.state, spec.psi());
    if (!fock) {
      kept.push_back(e);
      continue;
    }
    double removed = 0.0;
    for (const auto& [n, alpha] : fock->coeffs())
      if (n >= m) removed += std::norm(alpha) * pi_n_overlap(spec, n);
    if (removed == 0.0) {
      kept.push_back(e);
      continue;
    }
    PerturbedState cut{*fock, CutSpec{target, spec.theta(), m}};
    if (perturbed_norm(cut) <= tol.annihilation) {
      annihilated.push_back(e.round);
      continue;
    }
    kept.push_back({std::move(cut), e.outcome, e.round});
  }
  return {Plot(plot.kind(), plot.horizon(), std::move(kept)), std::move(annihilated)};
}

std::vector<CurvePoint> perturbation_distance_curve(const StoryGen& story, const FreqTestSpec& spec,
                                                    unsigned horizon, const std::vector<unsigned>& m_values) {
  if (!(spec.theta() > Rational(spec.p())))
    throw NoConvergenceError("no convergence guarantee: theta must exceed the Born weight");
  Plot plot = expand_plot(story, ExperimentKind::PMStar, horizon, spec);
  std::vector<CurvePoint> curve;
  for (unsigned m : m_values) curve.push_back({m, hausdorff(perturb_plot(plot, spec, m).plot, plot)});
  return curve;
}

OverlapWitness overlap_witness(const Plot& perturbed, const FreqTestSpec& spec, unsigned m,
                               std::size_t dense_limit) {
  const Event* best = nullptr;
  for (const auto& e : perturbed.events()) {
    const auto* t = std::get_if<TestResult>(&e.outcome);
    if (t == nullptr || !t->yellow || t->round < m) continue;
    if (best == nullptr || t->round < std::get<TestResult>(best->outcome).round) best = &e;
  }
  if (best == nullptr) return {};
  const unsigned n = std::get<TestResult>(best->outcome).round;
  Vector v = dense_sector(best->state, n, dense_limit);
  double weight = apply_pi_n(spec, n, v).squaredNorm();
  return {true, n, weight};
}

// ---- corpus ----------------------------------------------------------------

Ket ket_h() { return Ket{Complex{1.0, 0.0}, Complex{0.0, 0.0}}; }
Ket ket_v() { return Ket{Complex{0.0, 0.0}, Complex{1.0, 0.0}}; }
Ket ket_d() {
  const double s = 1.0 / std::sqrt(2.0);
  return Ket{Complex{s, 0.0}, Complex{s, 0.0}};
}

std::vector<StoryGen> table1_corpus() {
  const auto family = ProjectorFamily::computational(2);
  auto test = [](std::optional<StoredPlotKind> plot = std::nullopt) {
    return StoredPMStar{"h", Rational(3, 5), plot, {}};
  };
  std::vector<StoryGen> corpus;
  corpus.push_back({"s1", "Horizontally polarized photons always pass as h.", ket_h(), family,
                    Periodic{{"h"}, {}}, test()});
  corpus.push_back({"s2", "Horizontally polarized photons alternate between v and h.", ket_h(), family,
                    Periodic{{"v", "h"}, {}}, test()});
  corpus.push_back({"s3", "Diagonally polarized photons always come out h.", ket_d(), family,
                    Periodic{{"h"}, {}}, test()});
  corpus.push_back({"s4", "Diagonally polarized photons alternate between v and h.", ket_d(), family,
                    Periodic{{"v", "h"}, {}}, test()});
  corpus.push_back({"s5", "Diagonally polarized photons never show a frequency of h at or above 3/5.",
                    ket_d(), family, NoGenerator{}, test(StoredPlotKind::OkAlways)});
  corpus.push_back({"s6", "Diagonally polarized photons come out h at least twice as often as v.", ket_d(),
                    family, Periodic{{"h", "h", "v"}, {}}, test()});
  return corpus;
}

StoryGen pi_story() {
  return {"pi", "Diagonally polarized photons follow the binary digits of pi.", ket_d(),
          ProjectorFamily::computational(std::vector<std::string>{"0", "1"}), DigitStream{"pi"},
          StoredPMStar{"1", Rational(3, 5), std::nullopt, {}}};
}

}  // namespace bornless
