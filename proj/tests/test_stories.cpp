#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bornless/digits.hpp"
#include "bornless/events.hpp"
#include "bornless/stories.hpp"
#include "bornless/story_io.hpp"
#include "oracles.hpp"

using namespace bornless;

namespace {

const StoryGen& story(const std::string& id) {
  static const auto corpus = table1_corpus();
  for (const auto& s : corpus)
    if (s.id == id) return s;
  throw std::out_of_range(id);
}

FreqTestSpec h_test(const StoryGen& s) { return FreqTestSpec(s.psi, s.family, "h", Rational(3, 5)); }

Event pm_event(const Ket& k, OutcomeTuple z) {
  auto n = static_cast<unsigned>(z.size());
  return Event{SymbolicTensorPower{k, n}, std::move(z), n};
}

}  // namespace

// ---- events and plots ------------------------------------------------------

TEST_CASE("event_distance examples") {
  auto e = pm_event(ket_h(), {"h"});
  CHECK(event_distance(e, e) == 0.0);
  CHECK(event_distance(e, pm_event(ket_h(), {"v"})) == kInfinity);
  CHECK(event_distance(e, pm_event(ket_d(), {"h"})) == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))));
  Event star{SymbolicTensorPower{ket_h(), 1}, TestResult::ok(), 1};
  CHECK_THROWS_AS(event_distance(e, star), std::invalid_argument);
}

TEST_CASE("symbolic inner products agree with dense vectors") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_ket(rng, 2), b = oracle::random_ket(rng, 2);
    const unsigned n = 1 + static_cast<unsigned>(trial % 6);
    EventState sa = SymbolicTensorPower{a, n}, sb = SymbolicTensorPower{b, n};
    Vector da = tensor_power(a, n).amplitudes(), db = tensor_power(b, n).amplitudes();
    CHECK(std::abs(state_inner(sa, sb) - da.dot(db)) <= 1e-12);
    EventState ea = ExplicitKet{tensor_power(a, n), n, 2};
    CHECK(std::abs(state_inner(ea, sb) - da.dot(db)) <= 1e-12);
  }
}

TEST_CASE("perturbed states agree with the dense cut") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 12; ++trial) {
    auto psi = oracle::random_ket(rng, 2), phi = oracle::random_ket(rng, 2);
    auto fam = ProjectorFamily::computational(2);
    FreqTestSpec spec(psi, fam, "h", Rational(1 + trial % 4, 5));
    const unsigned n = 1 + static_cast<unsigned>(trial % 7);
    CutSpec cut{fam["h"], spec.theta(), 1};
    PerturbedState ps{FockVector::single(psi, n), cut};
    Vector v = tensor_power(psi, n).amplitudes();
    Vector cutv = v - dense_pi_n(spec, n).matrix() * v;
    if (cutv.norm() <= 1e-9) continue;
    cutv /= cutv.norm();
    Vector w = tensor_power(phi, n).amplitudes();
    CHECK(std::abs(state_inner(SymbolicTensorPower{phi, n}, ps) - w.dot(cutv)) <= 1e-10);
    CHECK(std::abs(state_inner(ps, ps) - Complex{1.0, 0.0}) <= 1e-10);
  }
}

TEST_CASE("hausdorff examples") {
  Plot a(ExperimentKind::PM, 3, {pm_event(ket_h(), {"h"})});
  Plot b(ExperimentKind::PM, 3, {pm_event(ket_h(), {"v"})});
  Plot c(ExperimentKind::PM, 3, {pm_event(ket_d(), {"h"})});
  Plot empty(ExperimentKind::PM, 3, {});
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == kInfinity);
  CHECK(hausdorff(a, c) == doctest::Approx(0.76537).epsilon(1e-5));
  CHECK(hausdorff(a, empty) == kInfinity);
  CHECK(hausdorff(empty, empty) == 0.0);
  CHECK_THROWS_AS(hausdorff(a, Plot(ExperimentKind::PM, 4, {})), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff(a, Plot(ExperimentKind::PMStar, 3, {})), std::invalid_argument);
}

TEST_CASE("plots reject malformed events") {
  Event star{SymbolicTensorPower{ket_h(), 1}, TestResult::ok(), 1};
  CHECK_THROWS_AS(Plot(ExperimentKind::PM, 3, {star}), std::invalid_argument);
  CHECK_THROWS_AS(Plot(ExperimentKind::PM, 3, {pm_event(ket_h(), {"h"}), pm_event(ket_d(), {"v"})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Plot(ExperimentKind::PM, 1, {pm_event(ket_h(), {"h", "h"})}), std::invalid_argument);
}

TEST_CASE("property: hausdorff is a metric on small plots") {
  std::mt19937_64 rng(23);
  std::bernoulli_distribution coin(0.5);
  std::vector<Ket> states{ket_h(), ket_v(), ket_d(), oracle::random_ket(rng, 2), oracle::random_ket(rng, 2)};
  auto random_plot = [&]() {
    // PMStar plots of "ok" events with random states: distances stay finite.
    std::vector<Event> events;
    for (unsigned n = 1; n <= 4; ++n)
      if (coin(rng) || n == 1) {
        const Ket& k = states[rng() % states.size()];
        events.push_back({SymbolicTensorPower{k, n}, TestResult::ok(), n});
      }
    return Plot(ExperimentKind::PMStar, 4, std::move(events));
  };
  for (int trial = 0; trial < 150; ++trial) {
    Plot x = random_plot(), y = random_plot(), z = random_plot();
    const double xy = hausdorff(x, y), yx = hausdorff(y, x);
    CHECK(hausdorff(x, x) == 0.0);
    CHECK(xy == doctest::Approx(yx));
    CHECK(xy >= 0.0);
    CHECK(hausdorff(x, z) <= xy + hausdorff(y, z) + 1e-12);
    CHECK(hausdorff_serial(x, y) == doctest::Approx(xy));
  }
}

// ---- plots of stories ------------------------------------------------------

TEST_CASE("expand_plot follows the polarization corpus") {
  Plot pm = expand_plot(story("s1"), ExperimentKind::PM, 3);
  REQUIRE(pm.size() == 3);
  for (const auto& e : pm.events())
    CHECK(std::get<OutcomeTuple>(e.outcome) == OutcomeTuple(e.round, "h"));

  Plot s2 = expand_plot(story("s2"), ExperimentKind::PMStar, 50);
  for (const auto& e : s2.events()) CHECK_FALSE(std::get<TestResult>(e.outcome).yellow);

  Plot s6 = expand_plot(story("s6"), ExperimentKind::PMStar, 50);
  for (const auto& e : s6.events()) CHECK(std::get<TestResult>(e.outcome) == TestResult::card(e.round));

  CHECK_THROWS_AS(expand_plot(story("s5"), ExperimentKind::PM, 3), PlotUndefinedError);
  Plot s5 = expand_plot(story("s5"), ExperimentKind::PMStar, 5);
  CHECK(s5.size() == 5);
}

TEST_CASE("block_story regroups the stream") {
  StoryGen b = block_story(story("s4"), 2);
  REQUIRE(b.family.size() == 4);
  CHECK(validate_family(b.family).valid());
  CHECK(outcome_at(b, 0) == "v,h");
  CHECK(outcome_at(b, 5) == "v,h");
  CHECK(born_weight(b.psi, b.family["v,h"]) == doctest::Approx(0.25));

  StoryGen pre{"x", "", ket_d(), ProjectorFamily::computational(2), Periodic{{"h", "v", "v"}, {"h"}}, std::nullopt};
  StoryGen pb = block_story(pre, 2);
  for (std::size_t j = 0; j < 12; ++j)
    CHECK(outcome_at(pb, j) == block_label({outcome_at(pre, 2 * j), outcome_at(pre, 2 * j + 1)}));
}

// ---- verdicts --------------------------------------------------------------

TEST_CASE("polarization corpus verdict regression") {
  CHECK(check_bornf(story("s1"), 4).status == VerdictStatus::Allowed);

  auto s2 = check_bornf(story("s2"), 4);
  REQUIRE(s2.status == VerdictStatus::ForbiddenBornF);
  CHECK(s2.witness->zhat == std::vector<std::string>{"v"});
  CHECK(s2.witness->block == 1);
  CHECK(*s2.witness->frequency == Rational(1, 2));
  CHECK(s2.witness->born_weight == 0.0);
  CHECK(*s2.witness->theta > 0);
  CHECK(*s2.witness->theta < Rational(1, 2));

  auto s3 = check_bornf(story("s3"), 4);
  REQUIRE(s3.status == VerdictStatus::ForbiddenBornF);
  CHECK(s3.witness->block == 1);
  CHECK(s3.witness->zhat == std::vector<std::string>{"h"});

  CHECK(check_bornf(story("s4"), 1).status == VerdictStatus::Allowed);
  auto s4 = check_bornf(story("s4"), 4);
  REQUIRE(s4.status == VerdictStatus::ForbiddenBornF);
  CHECK(s4.witness->block == 2);
  CHECK(s4.witness->zhat == std::vector<std::string>{"v", "h"});
  CHECK(*s4.witness->frequency == 1);
  CHECK(s4.witness->born_weight == doctest::Approx(0.25));

  CHECK(check_bornf(story("s5"), 4).status == VerdictStatus::Inconclusive);
  auto s6 = check_bornf(story("s6"), 4);
  REQUIRE(s6.status == VerdictStatus::ForbiddenBornF);
  CHECK(s6.witness->block == 1);
}

TEST_CASE("forbidden verdicts carry witnesses with theta strictly between p and f") {
  for (const auto& s : table1_corpus()) {
    auto v = check_bornf(s, 4);
    if (v.status != VerdictStatus::ForbiddenBornF) continue;
    REQUIRE(v.witness);
    CHECK_FALSE(v.witness->rounds.empty());
    CHECK(to_double(*v.witness->theta) > v.witness->born_weight);
    CHECK(*v.witness->theta < *v.witness->frequency);
  }
}

TEST_CASE("check_overlap examples") {
  CHECK(check_overlap(story("s1"), 50).status == VerdictStatus::Allowed);
  CHECK(check_overlap(story("s3"), 200).status == VerdictStatus::Allowed);  // 2^-200 per tuple, never zero per factor
  StoryGen always_v{"hv", "", ket_h(), ProjectorFamily::computational(2), Periodic{{"v"}, {}}, std::nullopt};
  auto v = check_overlap(always_v, 10);
  REQUIRE(v.status == VerdictStatus::ForbiddenOverlap);
  CHECK(v.witness->rounds.front() == 1);
  CHECK_THROWS_AS(check_overlap(story("s5"), 10), PlotUndefinedError);
}

TEST_CASE("property: check_overlap is monotone in the horizon") {
  StoryGen late{"late", "", ket_h(), ProjectorFamily::computational(2), Periodic{{"h"}, {"h", "h", "h", "v"}}, std::nullopt};
  CHECK(check_overlap(late, 3).status == VerdictStatus::Allowed);
  for (unsigned n = 4; n <= 40; ++n) {
    auto v = check_overlap(late, n);
    REQUIRE(v.status == VerdictStatus::ForbiddenOverlap);
    CHECK(v.witness->rounds.front() == 4);
  }
}

TEST_CASE("explicit lists are Allowed under BornF") {
  StoryGen list{"list", "", ket_d(), ProjectorFamily::computational(2), ExplicitList{{{"h"}, {"h", "h"}}}, std::nullopt};
  CHECK(check_bornf(list, 4).status == VerdictStatus::Allowed);
  CHECK(check_overlap(list, 4).status == VerdictStatus::Allowed);
  StoryGen dup{"dup", "", ket_d(), ProjectorFamily::computational(2), ExplicitList{{{"h"}, {"v"}}}, std::nullopt};
  CHECK_THROWS_AS(validate_story(dup), std::invalid_argument);
}

TEST_CASE("yellow cards grow without bound for BornF-forbidden stories") {
  for (const auto& s : table1_corpus()) {
    auto v = check_bornf(s, 1);
    if (v.status != VerdictStatus::ForbiddenBornF) continue;
    const std::string target = v.witness->zhat.front();
    FreqTestSpec test(s.psi, s.family, target, *v.witness->theta);
    auto a = count_yellow_cards(s, test, 100), b = count_yellow_cards(s, test, 1000),
         c = count_yellow_cards(s, test, 10000);
    CHECK(a < b);
    CHECK(b < c);
  }
}

TEST_CASE("pi digits and the pi story") {
  const auto& d = pi_binary_digits();
  REQUIRE(d.size() == kPiDigits);
  const std::vector<std::uint8_t> head{1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  CHECK(std::vector<std::uint8_t>(d.begin(), d.begin() + 18) == head);
  auto v = check_bornf(pi_story(), 4, 100000);
  CHECK(v.status == VerdictStatus::Inconclusive);
  CHECK(v.empirical.at("1") == doctest::Approx(0.5).epsilon(0.02));
}

// ---- perturbation ----------------------------------------------------------

TEST_CASE("perturb_plot examples") {
  const auto& s3 = story("s3");
  auto spec = h_test(s3);
  Plot plot = expand_plot(s3, ExperimentKind::PMStar, 10, spec);

  auto same = perturb_plot(plot, spec, 11);
  CHECK(hausdorff(same.plot, plot) == 0.0);

  auto cut = perturb_plot(plot, spec, 1);
  CHECK(cut.annihilated.empty());
  for (std::size_t i = 0; i < plot.size(); ++i) {
    const unsigned n = plot.events()[i].round;
    CHECK(state_distance(cut.plot.events()[i].state, plot.events()[i].state) ==
          doctest::Approx(cut_distance(pi_n_overlap(spec, n))).epsilon(1e-9));
  }

  const auto& s2 = story("s2");  // p(h) = 1 for psi = h: test on v instead, p = 0
  FreqTestSpec zero(s2.psi, s2.family, "v", Rational(3, 5));
  Plot p2 = expand_plot(s2, ExperimentKind::PMStar, 10, zero);
  CHECK(hausdorff(perturb_plot(p2, zero, 1).plot, p2) == 0.0);
}

TEST_CASE("annihilated events are dropped and listed") {
  // psi = h with target h: Pi_n psi^n = psi^n, so the cut leaves nothing.
  const auto& s1 = story("s1");
  auto spec = h_test(s1);
  Plot plot = expand_plot(s1, ExperimentKind::PMStar, 6, spec);
  auto r = perturb_plot(plot, spec, 3);
  CHECK(r.annihilated == std::vector<unsigned>{3, 4, 5, 6});
  CHECK(r.plot.size() == 2);
}

TEST_CASE("perturbed sectors match the dense oracle for n <= 8") {
  const auto& s3 = story("s3");
  auto spec = h_test(s3);
  Plot plot = expand_plot(s3, ExperimentKind::PMStar, 8, spec);
  auto cut = perturb_plot(plot, spec, 2);
  for (const auto& e : cut.plot.events()) {
    if (e.round < 2) continue;
    Vector v = tensor_power(s3.psi, e.round).amplitudes();
    Vector dense = dense_f_sector(spec, e.round, 2) * v;
    dense /= dense.norm();
    CHECK((dense_sector(e.state, e.round) - dense).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("distance curve") {
  const auto& s3 = story("s3");
  auto spec = h_test(s3);
  auto curve = perturbation_distance_curve(s3, spec, 20, {1, 5, 10, 15, 20, 21, 30});
  double expected = 0.0;
  for (unsigned n = 1; n <= 20; ++n) expected = std::max(expected, cut_distance(pi_n_overlap(spec, n)));
  CHECK(curve.front().distance == doctest::Approx(expected));
  CHECK(curve.front().distance == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))));
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].distance <= curve[i - 1].distance + 1e-12);
  CHECK(curve[5].distance == 0.0);
  CHECK(curve[6].distance == 0.0);

  const auto& s2 = story("s2");
  FreqTestSpec zero(s2.psi, s2.family, "v", Rational(3, 5));
  for (const auto& pt : perturbation_distance_curve(s2, zero, 10, {1, 3, 7})) CHECK(pt.distance == 0.0);
}

TEST_CASE("witness chain: every perturbed plot fails Overlap") {
  const auto& s3 = story("s3");
  auto spec = h_test(s3);
  Plot plot = expand_plot(s3, ExperimentKind::PMStar, 14, spec);
  for (unsigned m = 1; m <= 14; ++m) {
    auto w = overlap_witness(perturb_plot(plot, spec, m).plot, spec, m);
    REQUIRE(w.found);
    CHECK(w.round >= m);
    CHECK(w.weight <= 1e-9);
  }
}

// ---- story files -----------------------------------------------------------

TEST_CASE("bundled story files load and match the built-in corpus") {
  auto loaded = load_stories(std::string(BORNLESS_DATA_DIR) + "/table1_stories.json");
  REQUIRE(loaded.size() == 6);
  const auto corpus = table1_corpus();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(loaded[i].id == corpus[i].id);
    CHECK(check_bornf(loaded[i], 4).status == check_bornf(corpus[i], 4).status);
  }
  auto extra = load_stories(std::string(BORNLESS_DATA_DIR) + "/extra_stories.json");
  CHECK(extra.front().id == "pi");
}

TEST_CASE("story JSON round trip") {
  for (const auto& s : table1_corpus()) {
    auto back = story_from_json(story_to_json(s), "rt");
    CHECK(story_to_json(back) == story_to_json(s));
  }
}

TEST_CASE("story diagnostics name the line or the field") {
  try {
    parse_stories("{\n  \"id\": \"x\",\n  oops\n}", "f.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  const std::string bad_amp =
      R"({"id":"x","psi":{"dim":2,"amplitudes":[[1,0],[0]]},"generator":{"kind":"periodic","pattern":["h"]}})";
  try {
    parse_stories(bad_amp, "f.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("psi.amplitudes[1]") != std::string::npos);
  }
  const std::string bad_label =
      R"({"id":"x","psi":{"dim":2,"amplitudes":[[1,0],[0,0]]},"generator":{"kind":"periodic","pattern":["q"]}})";
  CHECK_THROWS_AS(parse_stories(bad_label), InputError);
  const std::string bad_theta =
      R"({"id":"x","psi":{"dim":2,"amplitudes":[[1,0],[0,0]]},"generator":{"kind":"none"},"pmstar":{"target":"h","theta":"3/0"}})";
  try {
    parse_stories(bad_theta, "f.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("pmstar.theta") != std::string::npos);
  }
  const std::string unnormalized =
      R"({"id":"x","psi":{"dim":2,"amplitudes":[[1,0],[1,0]]},"generator":{"kind":"none"}})";
  CHECK_THROWS_AS(parse_stories(unnormalized), InputError);
}

TEST_CASE("stored PMStar plots") {
  const std::string text =
      R"({"id":"x","psi":{"dim":2,"amplitudes":[[0.7071067811865476,0],[0.7071067811865476,0]]},)"
      R"("generator":{"kind":"none"},"pmstar":{"target":"h","theta":"3/5","plot":["ok",2,"ok"]}})";
  auto s = parse_stories(text).front();
  Plot p = expand_plot(s, ExperimentKind::PMStar, 10);
  REQUIRE(p.size() == 3);
  CHECK(std::get<TestResult>(p.events()[1].outcome) == TestResult::card(2));

  auto yellow = s;
  yellow.pmstar->plot = StoredPlotKind::YellowAlways;
  CHECK(check_bornf(yellow, 4).status == VerdictStatus::ForbiddenBornF);
}
