#include "bornless/story_io.hpp"

#include <fstream>
#include <sstream>

namespace bornless {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing required field");
  return *it;
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> get_labels(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of outcome labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Rational get_rational(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a \"num/den\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, std::string("bad rational: ") + e.what());
  }
}

Ket parse_psi(const json& j, const std::string& where) {
  const json& dim_j = field(j, "dim", where);
  if (!dim_j.is_number_unsigned() || dim_j.get<std::size_t>() == 0) fail(where + ".dim", "expected a positive integer");
  const auto dim = dim_j.get<std::size_t>();
  const json& amps = field(j, "amplitudes", where);
  const std::string aw = where + ".amplitudes";
  if (!amps.is_array() || amps.size() != dim)
    fail(aw, "expected " + std::to_string(dim) + " [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const json& a = amps[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      fail(aw + "[" + std::to_string(i) + "]", "expected [re, im]");
    v(static_cast<Eigen::Index>(i)) = Complex{a[0].get<double>(), a[1].get<double>()};
  }
  Ket psi(std::move(v));
  if (psi.norm() == 0.0) fail(aw, "zero vector");
  if (!psi.is_normalized()) fail(aw, "state is not normalized (norm " + std::to_string(psi.norm()) + ")");
  return psi;
}

Generator parse_generator(const json& j, const std::string& where) {
  const std::string kind = get_string(field(j, "kind", where), where + ".kind");
  if (kind == "periodic") {
    Periodic p;
    p.pattern = get_labels(field(j, "pattern", where), where + ".pattern");
    if (j.contains("preamble")) p.preamble = get_labels(j["preamble"], where + ".preamble");
    if (p.pattern.empty()) fail(where + ".pattern", "periodic pattern must be non-empty");
    return p;
  }
  if (kind == "explicit") {
    const json& t = field(j, "tuples", where);
    if (!t.is_array()) fail(where + ".tuples", "expected an array of tuples");
    ExplicitList list;
    for (std::size_t i = 0; i < t.size(); ++i)
      list.tuples.push_back(get_labels(t[i], where + ".tuples[" + std::to_string(i) + "]"));
    return list;
  }
  if (kind == "digits") return DigitStream{get_string(field(j, "stream", where), where + ".stream")};
  if (kind == "none") return NoGenerator{};
  fail(where + ".kind", "unknown generator kind '" + kind + "' (periodic|explicit|digits|none)");
}

StoredPMStar parse_pmstar(const json& j, const std::string& where) {
  StoredPMStar s;
  s.target = get_string(field(j, "target", where), where + ".target");
  s.theta = get_rational(field(j, "theta", where), where + ".theta");
  if (!j.contains("plot")) return s;
  const json& plot = j["plot"];
  const std::string pw = where + ".plot";
  if (plot.is_string()) {
    const auto text = plot.get<std::string>();
    if (text == "ok-always") s.plot = StoredPlotKind::OkAlways;
    else if (text == "yellow-always") s.plot = StoredPlotKind::YellowAlways;
    else fail(pw, "expected \"ok-always\", \"yellow-always\" or an explicit array");
    return s;
  }
  if (!plot.is_array()) fail(pw, "expected a string or an array");
  s.plot = StoredPlotKind::Explicit;
  for (std::size_t i = 0; i < plot.size(); ++i) {
    const json& t = plot[i];
    const unsigned n = static_cast<unsigned>(i + 1);
    if (t.is_string() && t.get<std::string>() == "ok") {
      s.rounds.push_back(TestResult::ok());
    } else if (t.is_number_unsigned() && t.get<unsigned>() == n) {
      s.rounds.push_back(TestResult::card(n));
    } else {
      fail(pw + "[" + std::to_string(i) + "]", "expected \"ok\" or the yellow-card round " + std::to_string(n));
    }
  }
  return s;
}

// 1-based line and column of a byte offset.
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

StoryGen story_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a story object");
  std::string id = get_string(field(j, "id", where), where + ".id");
  std::string prose = j.contains("prose") ? get_string(j["prose"], where + ".prose") : std::string{};
  Ket psi = parse_psi(field(j, "psi", where), where + ".psi");

  ProjectorFamily family = ProjectorFamily::computational(psi.dim());
  if (j.contains("measurement")) {
    const std::string mw = where + ".measurement";
    auto labels = get_labels(field(j["measurement"], "labels", mw), mw + ".labels");
    if (labels.size() != psi.dim())
      fail(mw + ".labels", "expected " + std::to_string(psi.dim()) + " labels, one per basis vector");
    try {
      family = ProjectorFamily::computational(labels);
    } catch (const std::invalid_argument& e) {
      fail(mw + ".labels", e.what());
    }
  }

  StoryGen story{std::move(id), std::move(prose), std::move(psi), std::move(family),
                 parse_generator(field(j, "generator", where), where + ".generator"), std::nullopt};
  if (j.contains("pmstar")) story.pmstar = parse_pmstar(j["pmstar"], where + ".pmstar");
  try {
    validate_story(story);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return story;
}

std::vector<StoryGen> parse_stories(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": malformed JSON");
  }
  std::vector<StoryGen> out;
  if (doc.is_object() && doc.contains("stories")) {
    const json& arr = doc["stories"];
    if (!arr.is_array()) fail(source + ": stories", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(story_from_json(arr[i], source + ": stories[" + std::to_string(i) + "]"));
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      out.push_back(story_from_json(doc[i], source + ": [" + std::to_string(i) + "]"));
  } else {
    out.push_back(story_from_json(doc, source + ": story"));
  }
  return out;
}

std::vector<StoryGen> load_stories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stories(buf.str(), path);
}

json story_to_json(const StoryGen& story) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < story.psi.amplitudes().size(); ++i)
    amps.push_back({story.psi.amplitudes()(i).real(), story.psi.amplitudes()(i).imag()});
  json j = {{"id", story.id},
            {"prose", story.prose},
            {"psi", {{"dim", story.psi.dim()}, {"amplitudes", amps}}},
            {"measurement", {{"labels", story.family.labels()}}}};
  json gen;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Periodic>) {
          gen = {{"kind", "periodic"}, {"pattern", g.pattern}};
          if (!g.preamble.empty()) gen["preamble"] = g.preamble;
        } else if constexpr (std::is_same_v<T, ExplicitList>) {
          gen = {{"kind", "explicit"}, {"tuples", g.tuples}};
        } else if constexpr (std::is_same_v<T, DigitStream>) {
          gen = {{"kind", "digits"}, {"stream", g.stream}};
        } else {
          gen = {{"kind", "none"}};
        }
      },
      story.generator);
  j["generator"] = gen;
  if (story.pmstar) {
    json p = {{"target", story.pmstar->target}, {"theta", rational_json(story.pmstar->theta)}};
    if (story.pmstar->plot == StoredPlotKind::OkAlways) p["plot"] = "ok-always";
    if (story.pmstar->plot == StoredPlotKind::YellowAlways) p["plot"] = "yellow-always";
    if (story.pmstar->plot == StoredPlotKind::Explicit) {
      json rounds = json::array();
      for (const auto& t : story.pmstar->rounds) rounds.push_back(t.yellow ? json(t.round) : json("ok"));
      p["plot"] = rounds;
    }
    j["pmstar"] = p;
  }
  return j;
}

json verdict_to_json(const Verdict& v) {
  json j = {{"id", v.story_id},
            {"status", to_string(v.status)},
            {"max_block", v.max_block},
            {"horizon", v.horizon},
            {"horizons_checked", v.horizons_checked}};
  if (v.witness) {
    const Witness& w = *v.witness;
    json wj = {{"zhat", w.zhat}, {"block", w.block}, {"rounds", w.rounds}, {"born_weight", w.born_weight}};
    wj["theta"] = w.theta ? rational_json(*w.theta) : json(nullptr);
    if (w.frequency) wj["frequency"] = rational_json(*w.frequency);
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  if (!v.note.empty()) j["note"] = v.note;
  if (!v.empirical.empty()) j["empirical"] = v.empirical;
  return j;
}

}  // namespace bornless
