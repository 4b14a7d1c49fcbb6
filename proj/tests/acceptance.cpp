// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bornless/cli.hpp"
#include "bornless/exchange.hpp"
#include "bornless/freqtest.hpp"
#include "bornless/gamble.hpp"
#include "bornless/stories.hpp"
#include "oracles.hpp"

using namespace bornless;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0) o.require(secs < time_limit, "runtime " + fmt(secs) + " s exceeds " + fmt(time_limit) + " s");
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << "  [" << fmt(secs) << " s]";
  if (!o.detail.empty()) std::cout << "  " << o.detail;
  std::cout << std::endl;
}

// ---- 1 ---------------------------------------------------------------------

void table1(Outcome& o) {
  const auto corpus = table1_corpus();
  auto status = [&](std::size_t i, unsigned b) { return check_bornf(corpus[i], b).status; };
  o.require(status(0, 4) == VerdictStatus::Allowed, "s1 not Allowed");
  o.require(status(1, 4) == VerdictStatus::ForbiddenBornF, "s2 not ForbiddenBornF");
  o.require(status(2, 4) == VerdictStatus::ForbiddenBornF, "s3 not ForbiddenBornF");
  o.require(status(3, 1) == VerdictStatus::Allowed, "s4 forbidden at block size 1");
  auto s4 = check_bornf(corpus[3], 4);
  o.require(s4.status == VerdictStatus::ForbiddenBornF && s4.witness && s4.witness->block == 2,
            "s4 not ForbiddenBornF at block size 2");
  o.require(status(4, 4) == VerdictStatus::Inconclusive, "s5 not Inconclusive");
  o.require(status(5, 4) == VerdictStatus::ForbiddenBornF, "s6 not ForbiddenBornF");
}

// ---- 2 ---------------------------------------------------------------------

void lemma1(Outcome& o) {
  std::size_t checked = 0;
  double worst = -1.0;
  for (double p : {0.1, 0.3, 0.5, 0.7})
    for (unsigned n = 1; n <= 200; ++n)
      for (unsigned k = 0; k <= n; ++k) {
        if (static_cast<double>(k) / n < p) continue;
        auto t = tail_result(n, k, p);
        worst = std::max(worst, t.exact - t.bound);
        ++checked;
        if (!(t.exact <= t.bound + 1e-12)) o.require(false, "bound fails at n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
  std::size_t pinsker = 0;
  for (unsigned n = 2; n <= 100; ++n)
    for (unsigned k = 1; k < n; ++k)
      for (unsigned j = 1; j < 50; ++j) {
        const double q = static_cast<double>(k) / n, p = j / 50.0;
        ++pinsker;
        if (binary_relative_entropy(q, p) < 2 * (p - q) * (p - q) - 1e-15) o.require(false, "Pinsker fails");
      }
  o.note(std::to_string(checked) + " tails, max(exact-bound) " + fmt(worst) + ", " + std::to_string(pinsker) +
         " Pinsker points");
}

// ---- 3 ---------------------------------------------------------------------

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(1, 20);
  double worst = 0.0;
  for (unsigned n = 1; n <= 8; ++n)
    for (int trial = 0; trial < 100; ++trial) {
      FreqTestSpec spec(oracle::random_ket(rng, 2), ProjectorFamily::computational(2), "h", Rational(num(rng), 20));
      const Vector v = tensor_power(spec.psi(), n).amplitudes();
      const double dense = v.dot(dense_pi_n(spec, n).matrix() * v).real();
      worst = std::max(worst, std::abs(pi_n_overlap(spec, n) - dense));
    }
  o.require(worst <= 1e-9, "max deviation " + fmt(worst));
  o.note("800 cases, max deviation " + fmt(worst));
}

// ---- 4 ---------------------------------------------------------------------

void cut_convergence(Outcome& o) {
  const auto spec = FreqTestSpec::from_probability(0.5, Rational(3, 5));
  double worst = 0.0;
  for (unsigned n = 1; n <= 8; ++n) {
    const Matrix pi = dense_pi_n(spec, n).matrix();
    for (unsigned m = 1; m <= n; ++m) worst = std::max(worst, (pi * dense_f_sector(spec, n, m)).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-9, "max|Pi_n F| = " + fmt(worst));

  double prev = kInfinity;
  for (unsigned m = 1; m <= 400; ++m) {
    const double d = cut_distance(sup_tail(spec, m));
    if (d > prev + 1e-15) o.require(false, "sup-distance increases at m=" + std::to_string(m));
    prev = d;
  }
  const double eps = 1e-3;
  auto at_distance = min_m_for_distance(spec, eps);
  o.require(at_distance.sup_distance < eps, "sup-distance " + fmt(at_distance.sup_distance) + " at m=" +
                                                std::to_string(at_distance.m));
  auto literal = min_m_for_epsilon(spec, eps);
  o.note("max|Pi_n F| " + fmt(worst) + "; eps on distance: m=" + std::to_string(at_distance.m) + " sup-distance " +
         fmt(at_distance.sup_distance) + "; eps on t: m=" + std::to_string(literal.m) + " sup-distance " +
         fmt(literal.sup_distance));
}

// ---- 5 ---------------------------------------------------------------------

void story_convergence(Outcome& o) {
  const auto s3 = table1_corpus()[2];
  const FreqTestSpec spec(s3.psi, s3.family, "h", Rational(3, 5));
  const unsigned horizon = 20;
  o.require(check_bornf(s3, 1).status == VerdictStatus::ForbiddenBornF, "story is not BornF-forbidden");

  unsigned argmax = 1;
  double best = -1.0;
  for (unsigned n = 1; n <= horizon; ++n) {
    const double d = cut_distance(pi_n_overlap(spec, n));
    if (d > best) best = d, argmax = n;
  }
  std::vector<unsigned> ms;
  for (unsigned m = 1; m <= horizon + 5; ++m) ms.push_back(m);
  const auto curve = perturbation_distance_curve(s3, spec, horizon, ms);
  for (const auto& pt : curve) {
    if (pt.m > horizon && pt.distance != 0.0) o.require(false, "D != 0 at m=" + std::to_string(pt.m));
    if (pt.m > argmax && pt.distance > curve[pt.m - 2].distance + 1e-12)
      o.require(false, "D increases at m=" + std::to_string(pt.m));
  }

  const Plot plot = expand_plot(s3, ExperimentKind::PMStar, horizon, spec);
  double worst = 0.0;
  for (unsigned m = 1; m <= horizon; ++m) {
    auto w = overlap_witness(perturb_plot(plot, spec, m).plot, spec, m);
    if (!w.found) {
      o.require(false, "no yellow-card event at m=" + std::to_string(m));
      continue;
    }
    worst = std::max(worst, w.weight);
  }
  o.require(worst <= 1e-9, "witness weight " + fmt(worst));
  o.note("D(m=1) " + fmt(curve.front().distance) + ", argmax sector " + std::to_string(argmax) +
         ", max witness weight " + fmt(worst));
}

// ---- 6 ---------------------------------------------------------------------

void game_laws(Outcome& o) {
  auto cfg = GameConfig::from_probability(Rational(1, 2), Rational(3, 2), BonusSpec::geometric(Rational(1, 2)), 10000, 7);
  const auto traces = simulate(cfg, 10000);
  const auto laws = check_trace_laws(cfg, traces);
  o.require(laws.total_number_violations == 0, std::to_string(laws.total_number_violations) + " total-number violations");
  o.require(laws.halt_condition_violations == 0, std::to_string(laws.halt_condition_violations) + " halt-condition violations");
  o.require(laws.wealth_identity_violations == 0, "wealth identity violated");

  // Every 16-tuple carries all its prefixes, so one membership pass per
  // (m, r) covers n <= 16.
  const std::vector<Rational> rs{Rational(5, 4), Rational(3, 2), Rational(2), Rational(5, 2)};
  const std::vector<Rational> thetas{Rational(1, 10), Rational(1, 5), Rational(1, 4), Rational(1, 3),
                                     Rational(2, 5), Rational(1, 2), Rational(3, 5), Rational(3, 4)};
  const unsigned n_max = 16;
  std::size_t implications = 0;
  for (const auto& r : rs)
    for (unsigned m = 1; m <= 3; ++m) {
      std::vector<std::uint64_t> n0;
      for (const auto& th : thetas) n0.push_back(th < 1 / r ? min_n_threshold(m, r, th) : UINT64_MAX);
      for (std::uint32_t mask = 0; mask < (1u << n_max); ++mask) {
        std::vector<std::uint32_t> t(n_max);
        for (unsigned i = 0; i < n_max; ++i) t[i] = (mask >> i) & 1u;
        const auto mem = theta_prefix_membership(t, 1, m, r);
        unsigned count = 0;
        for (unsigned k = 1; k <= n_max; ++k) {
          count += t[k - 1];
          if (mem[k] && !mem[k - 1]) o.require(false, "Theta not prefix-closed");
          if (!mem[k]) break;
          for (std::size_t i = 0; i < thetas.size(); ++i) {
            if (k < n0[i]) continue;
            ++implications;
            if (Rational(count) < thetas[i] * k) o.require(false, "threshold implication fails");
          }
        }
      }
    }
  o.note(std::to_string(traces.size()) + " traces, " + std::to_string(implications) + " threshold implications");
}

// ---- 7 ---------------------------------------------------------------------

void ruin(Outcome& o) {
  auto cfg = GameConfig::from_probability(Rational(1, 2), Rational(3, 2), BonusSpec::fixed(1), 10000, 7);
  const auto traces = simulate(cfg, 10000);
  const auto h = halting_summary(traces);
  const auto fb = frequency_bound_check(cfg, traces);
  o.require(h.fraction >= 0.99, "halting fraction " + fmt(h.fraction));
  o.require(fb.pass_fraction == 1.0, "frequency bound pass fraction " + fmt(fb.pass_fraction));
  o.note("halting " + fmt(h.fraction) + " [" + fmt(h.interval.lo) + ", " + fmt(h.interval.hi) + "], truncated " +
         std::to_string(h.truncated) + ", frequency bound " + fmt(fb.pass_fraction));
}

// ---- 8 ---------------------------------------------------------------------

void bayes_chain(Outcome& o) {
  const auto dist = FiniteDist::bernoulli(Rational(1, 2));
  const auto bonus = BonusSpec::geometric(Rational(1, 2));
  const auto law = GameLaw::iid(dist, "1", Rational(3, 2), bonus, 4);
  const auto rep = pstar_construct(law, 4, 3);
  o.require(rep.starequiv_failures == 0, "starequiv: " + rep.first_failure);
  o.require(rep.pstar_peq_failures == 0, "PstarPeq: " + rep.first_failure);
  o.require(rep.exchangeable_failures == 0, "P* not exchangeable for n <= m");
  o.require(rep.bornb && rep.pstar_target == dist.prob("1"), "P*(Z1 = target) = " + to_string(rep.pstar_target));
  const auto rs = check_repeat_symmetry(law, 4, 3);
  o.require(rs.repeat && rs.symmetry, "repeat/symmetry fail on the iid law");
  const auto bad = check_repeat_symmetry(GameLaw::corrupted(dist, "1", Rational(3, 2), bonus, 4), 4, 3);
  o.require(!bad.repeat, "negative control passes Repeat");
  o.note(std::to_string(rep.starequiv_checked) + " starequiv, " + std::to_string(rep.pstar_peq_checked) +
         " PstarPeq checks; control fails Repeat at n=" + std::to_string(bad.fail_n));
}

// ---- 9 ---------------------------------------------------------------------

void metric_and_determinism(Outcome& o) {
  std::mt19937_64 rng(9);
  std::vector<Ket> states{ket_h(), ket_v(), ket_d()};
  for (int i = 0; i < 4; ++i) states.push_back(oracle::random_ket(rng, 2));
  auto random_plot = [&]() {
    std::vector<Event> events;
    for (unsigned n = 1; n <= 5; ++n)
      if (n == 1 || rng() % 2) {
        const bool yellow = rng() % 3 == 0;
        events.push_back({SymbolicTensorPower{states[rng() % states.size()], n},
                          yellow ? TestResult::card(n) : TestResult::ok(), n});
      }
    return Plot(ExperimentKind::PMStar, 5, std::move(events));
  };
  std::size_t triples = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Plot a = random_plot(), b = random_plot(), c = random_plot();
    const double ab = hausdorff(a, b), ba = hausdorff(b, a), ac = hausdorff(a, c), bc = hausdorff(b, c);
    if (hausdorff(a, a) != 0.0) o.require(false, "D(a, a) != 0");
    if (!(ab >= 0.0) || ab != ba) o.require(false, "symmetry or sign");
    if (!(ac <= ab + bc + 1e-12)) o.require(false, "triangle inequality");
    if (ab == 0.0 && hausdorff_serial(a, b) != 0.0) o.require(false, "serial/parallel mismatch");
    ++triples;
  }

  const std::string table = std::string(BORNLESS_DATA_DIR) + "/table1_stories.json";
  const std::vector<std::vector<std::string>> commands{
      {"check-story", "--stories", table},
      {"freq-bound", "--p", "1/2", "--theta", "3/5", "--n-max", "200"},
      {"perturb", "--stories", table, "--story", "s3", "--theta", "3/5"},
      {"gamble", "--p", "1/2", "--r", "3/2", "--trials", "2000", "--seed", "7"},
      {"pstar", "--p", "1/2", "--r", "3/2"}};
  for (const auto& args : commands) {
    std::ostringstream a, b, err;
    const int ca = cli::run(args, a, err), cb = cli::run(args, b, err);
    if (ca != 0 || cb != 0) o.require(false, args.front() + " exited " + std::to_string(ca));
    if (a.str() != b.str()) o.require(false, args.front() + " reruns differ");
  }
  o.note(std::to_string(triples) + " plot triples, " + std::to_string(commands.size()) + " commands rerun");
}

}  // namespace

int main() {
  criterion(1, "polarization corpus verdicts", 1.0, table1);
  criterion(2, "binomial tail bound and Pinsker grid", 5.0, lemma1);
  criterion(3, "pi_n_overlap against dense projectors", 0, oracle_equivalence);
  criterion(4, "cut annihilates Pi_n; sup-distance converges", 0, cut_convergence);
  criterion(5, "story perturbation curve and overlap witnesses", 0, story_convergence);
  criterion(6, "game trace laws and Theta algebra", 0, game_laws);
  criterion(7, "ruin with certainty and frequency bound", 0, ruin);
  criterion(8, "exact P* chain, Repeat and Symmetry", 10.0, bayes_chain);
  criterion(9, "hausdorff metric axioms and report determinism", 0, metric_and_determinism);
  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
