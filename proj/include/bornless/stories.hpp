#pragma once

// Finitely-described stories about prepare-and-measure experiments, their
// plots, and the verdicts of the Overlap and BornF criteria on them.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bornless/events.hpp"
#include "bornless/freqtest.hpp"
#include "bornless/qstate.hpp"
#include "bornless/rational.hpp"

namespace bornless {

class PlotUndefinedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// preamble, then pattern repeated forever.
struct Periodic {
  std::vector<std::string> pattern;
  std::vector<std::string> preamble;
};

/// A finite set of outcome tuples, each one PM event.
struct ExplicitList {
  std::vector<OutcomeTuple> tuples;
};

/// A named infinite digit stream. Only "pi" (binary expansion, leading
/// digits 1,1,0,0,1,0,0,1,...) is known; digit b maps to family label b.
struct DigitStream {
  std::string stream;
};

struct NoGenerator {};

using Generator = std::variant<NoGenerator, Periodic, ExplicitList, DigitStream>;

enum class StoredPlotKind { OkAlways, YellowAlways, Explicit };

/// A PMStar plot asserted directly by the story, for stories whose outcome
/// sequence is only constrained, not specified.
struct StoredPMStar {
  std::string target;
  Rational theta;
  /// Absent when the generator defines the plot.
  std::optional<StoredPlotKind> plot;
  std::vector<TestResult> rounds;  // Explicit: t_n for n = 1..rounds.size()
};

struct StoryGen {
  std::string id;
  std::string prose;
  Ket psi;
  ProjectorFamily family;
  Generator generator;
  std::optional<StoredPMStar> pmstar;
};

/// Checks the generator invariants (non-empty periodic pattern, labels drawn
/// from the family); throws std::invalid_argument.
void validate_story(const StoryGen& story);

/// Outcome i (0-based) of a streaming generator.
const std::string& outcome_at(const StoryGen& story, std::size_t i);
bool has_stream(const StoryGen& story);

/// The test a story's PMStar plot refers to, built from its stored
/// target and theta.
std::optional<FreqTestSpec> stored_test(const StoryGen& story);

/// Regroups the outcome stream into blocks of b: state psi^{(x) b}, family of
/// b-fold products with labels "z1,z2,...". Periodic generators only.
StoryGen block_story(const StoryGen& story, unsigned b);

std::string block_label(const std::vector<std::string>& parts);

/// PM: events (psi^n, (z_1..z_n)) for n <= horizon. PMStar: events
/// (psi^n, t_n) with a yellow card at n whenever count(target) >= theta n.
/// Throws PlotUndefinedError when the story does not define that plot.
Plot expand_plot(const StoryGen& story, ExperimentKind kind, unsigned horizon,
                 const std::optional<FreqTestSpec>& test = std::nullopt);

/// Number of yellow cards in the story's PMStar plot up to `horizon`,
/// streamed without materializing the plot.
std::size_t count_yellow_cards(const StoryGen& story, const FreqTestSpec& test, unsigned horizon);

enum class VerdictStatus { Allowed, ForbiddenOverlap, ForbiddenBornF, Inconclusive };
std::string to_string(VerdictStatus status);

struct Witness {
  std::vector<std::string> zhat;
  std::optional<Rational> theta;
  unsigned block = 1;
  std::vector<unsigned> rounds;
  std::optional<Rational> frequency;  // limiting frequency of zhat
  double born_weight = 0.0;
};

struct Verdict {
  std::string story_id;
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::optional<Witness> witness;
  /// Parameters an Allowed verdict is relative to.
  unsigned max_block = 0;
  unsigned horizon = 0;
  std::vector<unsigned> horizons_checked;
  std::string note;
  /// Empirical single-outcome frequencies (digit streams).
  std::map<std::string, double> empirical;
};

inline constexpr std::size_t kMaxWitnessRounds = 16;

/// Overlap: forbidden iff some plotted outcome has a factor with
/// ||pi_{z_i} psi||^2 <= zero_tol. The per-factor test keeps long products
/// of small but non-zero weights from underflowing into a false zero.
Verdict check_overlap(const StoryGen& story, unsigned horizon, double zero_tol = Tolerances{}.zero_weight);

/// BornF over block sizes 1..max_block: forbidden iff some block value has a
/// limiting frequency above its Born weight. `horizon` bounds the witness
/// rounds listed and the prefix used for digit-stream frequencies.
Verdict check_bornf(const StoryGen& story, unsigned max_block, unsigned horizon = 64,
                    const Tolerances& tol = {});

struct PerturbResult {
  Plot plot;
  /// Rounds whose cut state has zero norm; they are dropped from `plot`.
  std::vector<unsigned> annihilated;
};

/// Applies F_theta^{>=m} / ||.|| element-wise to the events whose state lies
/// in H_psi; every other event is kept unchanged.
PerturbResult perturb_plot(const Plot& plot, const FreqTestSpec& spec, unsigned m,
                           const Tolerances& tol = {});

struct CurvePoint {
  unsigned m = 0;
  double distance = 0.0;
};

std::vector<CurvePoint> perturbation_distance_curve(const StoryGen& story, const FreqTestSpec& spec,
                                                    unsigned horizon,
                                                    const std::vector<unsigned>& m_values);

struct OverlapWitness {
  bool found = false;
  unsigned round = 0;
  /// <Psi'| Pi_n |Psi'> evaluated on dense vectors.
  double weight = 1.0;
};

/// Finds the first yellow-card event (Psi', n) with n >= m in a perturbed
/// plot and evaluates its overlap with Pi_n densely.
OverlapWitness overlap_witness(const Plot& perturbed, const FreqTestSpec& spec, unsigned m,
                               std::size_t dense_limit = Tolerances{}.dense_limit);

/// s1..s6 of the standard polarization example (s6 realized as hhv...).
std::vector<StoryGen> table1_corpus();

/// The diagonal-polarization story whose outcomes follow the binary digits of pi.
StoryGen pi_story();

/// Qubit basis states |h>, |v>, |d> = (|h>+|v>)/sqrt 2.
Ket ket_h();
Ket ket_v();
Ket ket_d();

}  // namespace bornless
