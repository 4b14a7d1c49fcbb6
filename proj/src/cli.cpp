#include "bornless/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "bornless/exchange.hpp"
#include "bornless/freqtest.hpp"
#include "bornless/gamble.hpp"
#include "bornless/stories.hpp"
#include "bornless/story_io.hpp"

namespace bornless::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string out;
  std::uint64_t seed = 0;

  // check-story / perturb
  std::string stories;
  std::string story;
  // CLI11 writes defaults into the bound variable, so subcommands with
  // different defaults need their own fields.
  unsigned check_horizon = 64;
  unsigned plot_horizon = 20;
  unsigned max_block = 4;
  std::string target;
  std::string m_list = "1,2,4,8,16,21";

  // numeric
  std::string p;
  std::string theta;
  std::string r;
  std::string eps = "1/1000";
  unsigned n_max = 0;
  unsigned pstar_n_max = 4;
  unsigned m_max = 3;
  unsigned tuple_n = 3;
  unsigned game_horizon = 10000;
  std::string bonus = "geometric:1/2";
  std::size_t trials = 10000;
  std::string trace_csv;
  bool allow_no_ruin = false;

  // definetti
  std::string mixture;
  std::string xi;
};

Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--") + flag + ": " + e.what() + " ('" + text + "')");
  }
}

Rational probability_arg(const std::string& text) {
  Rational p = rational_arg(text, "p");
  if (p < 0 || p > 1) throw InputError("--p: probability must lie in [0, 1]");
  return p;
}

std::vector<unsigned> parse_m_list(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Rational q = rational_arg(item, "m-list");
    if (denominator(q) != 1 || q < 1 || q > 100000) throw InputError("--m-list: expected positive integers");
    out.push_back(static_cast<unsigned>(to_int64(numerator(q))));
  }
  if (out.empty()) throw InputError("--m-list: empty list");
  return out;
}

json envelope(const std::string& command, const Options& o, json config, json results) {
  return {{"tool", kToolName}, {"version", kVersion}, {"command", command},
          {"seed", o.seed},    {"config", std::move(config)}, {"results", std::move(results)}};
}

json witness_json(const OverlapWitness& w) {
  return {{"found", w.found}, {"round", w.round}, {"weight", w.weight}};
}

// ---- subcommands -----------------------------------------------------------

json cmd_check_story(const Options& o) {
  auto stories = load_stories(o.stories);
  json verdicts = json::array();
  for (const auto& s : stories) {
    if (!o.story.empty() && s.id != o.story) continue;
    Verdict bornf = check_bornf(s, o.max_block, o.check_horizon);
    json v = verdict_to_json(bornf);
    try {
      json ov = verdict_to_json(check_overlap(s, o.check_horizon));
      ov.erase("id");
      v["overlap"] = ov;
    } catch (const PlotUndefinedError& e) {
      v["overlap"] = {{"status", to_string(VerdictStatus::Inconclusive)}, {"witness", nullptr}, {"note", e.what()}};
    }
    verdicts.push_back(std::move(v));
  }
  if (!o.story.empty() && verdicts.empty()) throw InputError("--story: no story with id '" + o.story + "'");
  json config = {{"stories", o.stories}, {"horizon", o.check_horizon}, {"max_block", o.max_block}};
  if (!o.story.empty()) config["story"] = o.story;
  return envelope("check-story", o, config, {{"verdicts", verdicts}});
}

json cmd_freq_bound(const Options& o) {
  const Rational p = probability_arg(o.p);
  const Rational theta = rational_arg(o.theta, "theta");
  if (theta <= 0 || theta > 1) throw InputError("--theta: must lie in (0, 1]");
  const Rational eps = rational_arg(o.eps, "eps");
  if (eps <= 0) throw InputError("--eps: must be positive");
  if (o.n_max == 0) throw InputError("--n-max: must be positive");
  const auto spec = FreqTestSpec::from_probability(to_double(p), theta);

  json rows = json::array();
  bool all_hold = true;
  for (unsigned n = 1; n <= o.n_max; ++n) {
    const unsigned k = spec.k_min(n);
    TailResult t = tail_result(n, k, spec.p());
    const bool regime = static_cast<double>(k) / n >= spec.p();
    const bool holds = !regime || t.exact <= t.bound + 1e-12;
    all_hold = all_hold && holds;
    rows.push_back({{"n", n}, {"k_min", k}, {"exact", t.exact}, {"bound", t.bound}, {"lemma1_regime", regime},
                    {"holds", holds}});
  }
  json results = {{"p", to_string(p)}, {"rows", rows}, {"all_hold", all_hold}};
  if (theta > p) {
    auto c = min_m_for_epsilon(spec, to_double(eps));
    auto d = min_m_for_distance(spec, to_double(eps));
    results["convergence"] = {
        {"eps", to_string(eps)},
        {"tail", {{"m", c.m}, {"horizon", c.horizon}, {"tail_sup", c.tail_sup}, {"sup_distance", c.sup_distance}}},
        {"distance", {{"m", d.m}, {"horizon", d.horizon}, {"tail_sup", d.tail_sup}, {"sup_distance", d.sup_distance}}}};
  } else {
    results["convergence"] = nullptr;
    results["note"] = "no convergence guarantee: theta does not exceed p";
  }
  return envelope("freq-bound", o,
                  {{"p", to_string(p)}, {"theta", to_string(theta)}, {"n_max", o.n_max}, {"eps", to_string(eps)}},
                  results);
}

json cmd_perturb(const Options& o) {
  auto stories = load_stories(o.stories);
  auto it = std::find_if(stories.begin(), stories.end(), [&](const StoryGen& s) { return s.id == o.story; });
  if (it == stories.end()) throw InputError("--story: no story with id '" + o.story + "'");
  const StoryGen& story = *it;
  const Rational theta = rational_arg(o.theta, "theta");
  if (theta <= 0 || theta > 1) throw InputError("--theta: must lie in (0, 1]");
  std::string target = o.target;
  if (target.empty()) target = story.pmstar ? story.pmstar->target : story.family.labels().front();
  try {
    story.family.index_of(target);
  } catch (const std::out_of_range&) {
    throw InputError("--target: story " + story.id + " has no outcome '" + target + "'");
  }
  const FreqTestSpec spec(story.psi, story.family, target, theta);
  const auto ms = parse_m_list(o.m_list);

  Plot plot = expand_plot(story, ExperimentKind::PMStar, o.plot_horizon, spec);
  json curve = json::array();
  for (unsigned m : ms) {
    auto perturbed = perturb_plot(plot, spec, m);
    const double d = hausdorff(perturbed.plot, plot);
    json point = {{"m", m}, {"distance", d}, {"annihilated", perturbed.annihilated}};
    point["overlap_witness"] = witness_json(overlap_witness(perturbed.plot, spec, m));
    curve.push_back(std::move(point));
  }
  json config = {{"stories", o.stories}, {"story", o.story},     {"target", target},
                 {"theta", to_string(theta)}, {"horizon", o.plot_horizon}, {"m_list", ms}};
  return envelope("perturb", o, config,
                  {{"born_weight", spec.p()}, {"theta_exceeds_p", theta > Rational(spec.p())}, {"curve", curve}});
}

json cmd_gamble(const Options& o) {
  const Rational p = probability_arg(o.p);
  const Rational r = rational_arg(o.r, "r");
  BonusSpec bonus = BonusSpec::fixed(1);
  try {
    bonus = BonusSpec::parse(o.bonus);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--bonus: ") + e.what());
  }
  if (o.trials == 0) throw InputError("--trials: must be positive");
  GameConfig cfg = GameConfig::from_probability(p, r, bonus, o.game_horizon, o.seed, !o.allow_no_ruin);
  try {
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  auto traces = simulate(cfg, o.trials);
  auto halting = halting_summary(traces);
  auto freq = frequency_bound_check(cfg, traces);
  auto laws = check_trace_laws(cfg, traces);
  std::size_t rounds = 0;
  for (const auto& t : traces) rounds += t.rounds();

  if (!o.trace_csv.empty()) {
    std::ofstream csv(o.trace_csv);
    if (!csv) throw InputError("--trace-csv: cannot open '" + o.trace_csv + "'");
    write_trace_csv(csv, cfg, traces);
  }
  json results = {
      {"halting",
       {{"trials", halting.trials},
        {"halted", halting.halted},
        {"truncated", halting.truncated},
        {"fraction", halting.fraction},
        {"wilson99", {halting.interval.lo, halting.interval.hi}}}},
      {"frequency_bound",
       {{"halted", freq.halted},
        {"passed", freq.passed},
        {"pass_fraction", freq.pass_fraction},
        {"below_inverse_r_at_ruin", freq.below_inverse_r_at_ruin}}},
      {"trace_laws",
       {{"traces", laws.traces},
        {"total_number_violations", laws.total_number_violations},
        {"halt_condition_violations", laws.halt_condition_violations},
        {"wealth_identity_violations", laws.wealth_identity_violations}}},
      {"mean_rounds", static_cast<double>(rounds) / static_cast<double>(traces.size())}};
  json config = {{"p", to_string(p)},          {"r", to_string(r)},       {"bonus", bonus.to_string()},
                 {"trials", o.trials},         {"horizon", o.game_horizon},    {"ruin_mode", cfg.ruin_mode}};
  if (!o.trace_csv.empty()) config["trace_csv"] = o.trace_csv;
  return envelope("gamble", o, config, results);
}

json table_json(const JointDist& j) {
  json t = json::object();
  for (const auto& [tuple, p] : j.table()) {
    std::string key;
    for (std::size_t i = 0; i < tuple.size(); ++i) key += (i ? "," : "") + j.alphabet()[tuple[i]];
    t[key] = to_string(p);
  }
  return t;
}

json repeat_json(const RepeatSymmetryReport& rep) {
  json j = {{"repeat", rep.repeat},
            {"symmetry", rep.symmetry},
            {"conditionals_checked", rep.conditionals_checked},
            {"undefined_conditionals", rep.undefined_conditionals}};
  if (!rep.repeat) j["repeat_witness"] = {{"n", rep.fail_n}, {"m", rep.fail_m}, {"prefix", rep.fail_prefix}};
  if (!rep.symmetry)
    j["symmetry_witness"] = {{"m", rep.symmetry_fail_m},
                             {"tuple", *rep.symmetry_witness.tuple},
                             {"permutation", rep.symmetry_witness.permutation}};
  return j;
}

json cmd_pstar(const Options& o) {
  const Rational p = probability_arg(o.p);
  const Rational r = rational_arg(o.r, "r");
  if (r <= 1) throw InputError("--r: payoff must exceed 1");
  if (o.pstar_n_max == 0 || o.pstar_n_max > 8) throw InputError("--n-max: must lie in [1, 8]");
  if (o.m_max == 0 || o.m_max > 8) throw InputError("--m-max: must lie in [1, 8]");
  BonusSpec bonus = BonusSpec::fixed(1);
  try {
    bonus = BonusSpec::parse(o.bonus);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--bonus: ") + e.what());
  }
  const FiniteDist dist = FiniteDist::bernoulli(p);
  const unsigned m_tail = std::max(o.pstar_n_max, o.m_max);
  const GameLaw law = GameLaw::iid(dist, "1", r, bonus, m_tail);
  const PStarReport rep = pstar_construct(law, o.pstar_n_max, o.m_max);

  json tables = json::array();
  for (const auto& t : rep.tables) tables.push_back({{"n", t.n()}, {"table", table_json(t)}});
  const auto repeat = check_repeat_symmetry(law, o.pstar_n_max, o.m_max);
  const auto control = check_repeat_symmetry(GameLaw::corrupted(dist, "1", r, bonus, m_tail), o.pstar_n_max, o.m_max);

  json results = {{"alphabet", dist.alphabet()},
                  {"target", "1"},
                  {"pstar", tables},
                  {"starequiv", {{"checked", rep.starequiv_checked}, {"failures", rep.starequiv_failures}}},
                  {"pstar_peq", {{"checked", rep.pstar_peq_checked}, {"failures", rep.pstar_peq_failures}}},
                  {"pstar_exchangeable_failures", rep.exchangeable_failures},
                  {"bornb", {{"pstar_z1_target", to_string(rep.pstar_target)}, {"born_weight", to_string(p)}, {"equal", rep.bornb}}},
                  {"repeat_symmetry", repeat_json(repeat)},
                  {"negative_control", repeat_json(control)}};
  if (!rep.first_failure.empty()) results["first_failure"] = rep.first_failure;
  return envelope("pstar", o,
                  {{"p", to_string(p)}, {"r", to_string(r)}, {"bonus", bonus.to_string()}, {"n_max", o.pstar_n_max},
                   {"m_max", o.m_max}, {"m_tail", m_tail}},
                  results);
}

Mixture load_mixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(e.byte, text.size())), '\n'));
    throw InputError(path + ": line " + std::to_string(line) + ": malformed JSON");
  }
  auto where = [&](const std::string& f) { return path + ": " + f; };
  if (!doc.is_object() || !doc.contains("alphabet") || !doc["alphabet"].is_array())
    throw InputError(where("alphabet") + ": missing or not an array");
  std::vector<std::string> alphabet;
  for (const auto& a : doc["alphabet"]) {
    if (!a.is_string()) throw InputError(where("alphabet") + ": expected strings");
    alphabet.push_back(a.get<std::string>());
  }
  if (!doc.contains("components") || !doc["components"].is_array() || doc["components"].empty())
    throw InputError(where("components") + ": missing or empty");
  std::vector<Rational> weights;
  std::vector<FiniteDist> comps;
  const json& cs = doc["components"];
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string ci = "components[" + std::to_string(i) + "]";
    const json& c = cs[i];
    if (!c.is_object() || !c.contains("weight") || !c["weight"].is_string())
      throw InputError(where(ci + ".weight") + ": expected a \"num/den\" string");
    if (!c.contains("probs") || !c["probs"].is_object()) throw InputError(where(ci + ".probs") + ": expected an object");
    try {
      weights.push_back(parse_rational(c["weight"].get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw InputError(where(ci + ".weight") + ": " + e.what());
    }
    std::vector<Rational> probs;
    for (const auto& a : alphabet) {
      const std::string pf = ci + ".probs." + a;
      if (!c["probs"].contains(a) || !c["probs"][a].is_string())
        throw InputError(where(pf) + ": expected a \"num/den\" string");
      try {
        probs.push_back(parse_rational(c["probs"][a].get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw InputError(where(pf) + ": " + e.what());
      }
    }
    if (c["probs"].size() != alphabet.size()) throw InputError(where(ci + ".probs") + ": symbol outside the alphabet");
    try {
      comps.emplace_back(alphabet, probs);
    } catch (const std::invalid_argument& e) {
      throw InputError(where(ci) + ": " + e.what());
    }
  }
  try {
    return Mixture(std::move(weights), std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw InputError(where("components") + ": " + e.what());
  }
}

json cmd_definetti(const Options& o) {
  const Mixture mixture = load_mixture(o.mixture);
  const auto& alphabet = mixture.alphabet();
  if (std::find(alphabet.begin(), alphabet.end(), o.xi) == alphabet.end())
    throw InputError("--xi: '" + o.xi + "' is not in the mixture alphabet");
  if (o.tuple_n == 0 || o.tuple_n > 8) throw InputError("--n: must lie in [1, 8]");
  const JointDist joint = mixture_joint(mixture, o.tuple_n);
  const auto ex = is_exchangeable(joint);
  const std::size_t witness = lemma2_witness(mixture, o.xi);
  const JointDist first = joint.marginal(1);
  const Rational p_xi = first.prob(Tuple{static_cast<std::uint32_t>(std::find(alphabet.begin(), alphabet.end(), o.xi) - alphabet.begin())});
  json results = {{"joint", {{"n", joint.n()}, {"table", table_json(joint)}}},
                  {"exchangeable", ex.exchangeable},
                  {"p_x1_xi", to_string(p_xi)},
                  {"witness",
                   {{"index", witness},
                    {"weight", to_string(mixture.weights()[witness])},
                    {"q_xi", to_string(mixture.components()[witness].prob(o.xi))}}}};
  return envelope("definetti", o, {{"mixture", o.mixture}, {"xi", o.xi}, {"n", o.tuple_n}}, results);
}

}  // namespace

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Frequency tests, story verdicts and the entry-fee game", kToolName};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out, "Write the JSON report here instead of stdout");
  app.add_option("--seed", o.seed, "Seed, echoed in every report");

  auto* check = app.add_subcommand("check-story", "Overlap and BornF verdicts for a story file");
  check->add_option("--stories", o.stories, "Story JSON file")->required();
  check->add_option("--story", o.story, "Only this story id");
  check->add_option("--horizon", o.check_horizon, "Rounds inspected")->default_val(64u);
  check->add_option("--max-block", o.max_block, "Largest block size for BornF")->default_val(4u);

  auto* fb = app.add_subcommand("freq-bound", "Exact binomial tails against the Hoeffding-type bound");
  fb->add_option("--p", o.p, "Born weight of the target")->required();
  fb->add_option("--theta", o.theta, "Threshold N/D")->required();
  fb->add_option("--n-max", o.n_max, "Largest n")->required();
  fb->add_option("--eps", o.eps, "Convergence tolerance")->default_val("1/1000");

  auto* pert = app.add_subcommand("perturb", "Distance curve of the F-cut perturbation of a story");
  pert->add_option("--stories", o.stories, "Story JSON file")->required();
  pert->add_option("--story", o.story, "Story id")->required();
  pert->add_option("--theta", o.theta, "Threshold N/D")->required();
  pert->add_option("--m-list", o.m_list, "Comma-separated cut indices")->default_val("1,2,4,8,16,21");
  pert->add_option("--horizon", o.plot_horizon, "Plot horizon")->default_val(20u);
  pert->add_option("--target", o.target, "Target outcome (default: the story's PMStar target)");

  auto* gam = app.add_subcommand("gamble", "Monte Carlo of the entry-fee game");
  gam->add_option("--p", o.p, "Probability of the target outcome")->required();
  gam->add_option("--r", o.r, "Payoff N/D")->required();
  gam->add_option("--bonus", o.bonus, "geometric:Q or fixed:M")->default_val("geometric:1/2");
  gam->add_option("--trials", o.trials, "Number of games")->default_val(10000);
  gam->add_option("--horizon", o.game_horizon, "Round cap per game")->default_val(10000u);
  gam->add_option("--trace-csv", o.trace_csv, "Write every trace as CSV");
  gam->add_flag("--allow-no-ruin", o.allow_no_ruin, "Allow r * p >= 1");

  auto* ps = app.add_subcommand("pstar", "Exact P* construction and Repeat/Symmetry checks");
  ps->add_option("--p", o.p, "Probability of the target outcome")->required();
  ps->add_option("--r", o.r, "Payoff N/D")->required();
  ps->add_option("--n-max", o.pstar_n_max, "Longest tuple")->default_val(4u);
  ps->add_option("--m-max", o.m_max, "Largest bonus checked")->default_val(3u);
  ps->add_option("--bonus", o.bonus, "geometric:Q or fixed:M")->default_val("geometric:1/2");

  auto* df = app.add_subcommand("definetti", "Finite-mixture exchangeability and the mixture witness");
  df->add_option("--mixture", o.mixture, "Mixture JSON file")->required();
  df->add_option("--xi", o.xi, "Symbol")->required();
  df->add_option("--n", o.tuple_n, "Tuple length")->default_val(3u);

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  json report;
  try {
    if (check->parsed()) report = cmd_check_story(o);
    else if (fb->parsed()) report = cmd_freq_bound(o);
    else if (pert->parsed()) report = cmd_perturb(o);
    else if (gam->parsed()) report = cmd_gamble(o);
    else if (ps->parsed()) report = cmd_pstar(o);
    else report = cmd_definetti(o);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  const std::string text = dump_report(report);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "input error: --out: cannot open '" << o.out << "'\n";
      return kInputError;
    }
    f << text;
  }
  return kOk;
}

// ---- report shape ----------------------------------------------------------

namespace {

void need(std::vector<std::string>& bad, const json& j, const std::string& path, const char* key,
          bool (json::*is)() const noexcept) {
  if (!j.is_object() || !j.contains(key)) {
    bad.push_back(path + "." + key + ": missing");
    return;
  }
  if (!(j[key].*is)()) bad.push_back(path + "." + key + ": wrong type");
}

bool is_rational_string(const json& j) {
  if (!j.is_string()) return false;
  const auto s = j.get<std::string>();
  if (s.find('/') == std::string::npos) return false;
  try {
    parse_rational(s);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace

std::vector<std::string> validate_report(const json& report) {
  std::vector<std::string> bad;
  need(bad, report, "report", "tool", &json::is_string);
  need(bad, report, "report", "version", &json::is_string);
  need(bad, report, "report", "command", &json::is_string);
  need(bad, report, "report", "seed", &json::is_number_unsigned);
  need(bad, report, "report", "config", &json::is_object);
  need(bad, report, "report", "results", &json::is_object);
  if (!bad.empty()) return bad;

  const std::string cmd = report["command"];
  const json& res = report["results"];
  if (cmd == "check-story") {
    need(bad, res, "results", "verdicts", &json::is_array);
    if (!bad.empty()) return bad;
    for (std::size_t i = 0; i < res["verdicts"].size(); ++i) {
      const json& v = res["verdicts"][i];
      const std::string p = "results.verdicts[" + std::to_string(i) + "]";
      need(bad, v, p, "id", &json::is_string);
      need(bad, v, p, "status", &json::is_string);
      need(bad, v, p, "horizons_checked", &json::is_array);
      need(bad, v, p, "overlap", &json::is_object);
      if (!v.contains("witness")) {
        bad.push_back(p + ".witness: missing");
        continue;
      }
      const json& w = v["witness"];
      const bool forbidden = v.value("status", "").rfind("Forbidden", 0) == 0;
      if (forbidden && !w.is_object()) bad.push_back(p + ".witness: forbidden verdict without witness");
      if (w.is_object()) {
        need(bad, w, p + ".witness", "zhat", &json::is_array);
        need(bad, w, p + ".witness", "block", &json::is_number_unsigned);
        need(bad, w, p + ".witness", "rounds", &json::is_array);
        if (!w.contains("theta") || !(w["theta"].is_null() || is_rational_string(w["theta"])))
          bad.push_back(p + ".witness.theta: expected \"num/den\" or null");
      }
    }
  } else if (cmd == "freq-bound") {
    need(bad, res, "results", "rows", &json::is_array);
    need(bad, res, "results", "all_hold", &json::is_boolean);
  } else if (cmd == "perturb") {
    need(bad, res, "results", "curve", &json::is_array);
    if (res.contains("curve") && res["curve"].is_array())
      for (const auto& pt : res["curve"]) {
        need(bad, pt, "results.curve[]", "m", &json::is_number_unsigned);
        need(bad, pt, "results.curve[]", "distance", &json::is_number);
        need(bad, pt, "results.curve[]", "overlap_witness", &json::is_object);
      }
  } else if (cmd == "gamble") {
    need(bad, res, "results", "halting", &json::is_object);
    need(bad, res, "results", "frequency_bound", &json::is_object);
    need(bad, res, "results", "trace_laws", &json::is_object);
  } else if (cmd == "pstar") {
    need(bad, res, "results", "pstar", &json::is_array);
    need(bad, res, "results", "starequiv", &json::is_object);
    need(bad, res, "results", "pstar_peq", &json::is_object);
    need(bad, res, "results", "bornb", &json::is_object);
    need(bad, res, "results", "repeat_symmetry", &json::is_object);
    need(bad, res, "results", "negative_control", &json::is_object);
    if (res.contains("pstar") && res["pstar"].is_array())
      for (const auto& t : res["pstar"])
        if (t.contains("table"))
          for (const auto& [k, v] : t["table"].items())
            if (!is_rational_string(v)) bad.push_back("results.pstar[].table." + k + ": expected \"num/den\"");
  } else if (cmd == "definetti") {
    need(bad, res, "results", "joint", &json::is_object);
    need(bad, res, "results", "exchangeable", &json::is_boolean);
    need(bad, res, "results", "witness", &json::is_object);
  } else {
    bad.push_back("report.command: unknown command '" + cmd + "'");
  }
  return bad;
}

}  // namespace bornless::cli
