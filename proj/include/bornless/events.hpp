#pragma once

// Events, plots and the metrics on them. States stay symbolic wherever
// possible: inner products of tensor powers are <psi|phi>^n, and a state cut
// by id - Pi_n is handled through binomial sums instead of dense matrices.

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bornless/qstate.hpp"
#include "bornless/rational.hpp"

namespace bornless {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense vector living in the n-particle sector K^{(x) n}.
struct ExplicitKet {
  Ket ket;
  unsigned sector = 0;
  std::size_t site_dim = 0;
};

struct SymbolicTensorPower {
  Ket base;
  unsigned n = 0;
};

/// Removes the high-frequency subspace: acts as id - Pi_n on sectors n >= m.
struct CutSpec {
  Projector target;  // pi_target on K
  Rational theta;
  unsigned m = 1;
};

/// F Psi / ||F Psi|| for Psi in H_psi, kept symbolic.
struct PerturbedState {
  FockVector source;
  CutSpec cut;
};

using EventState = std::variant<ExplicitKet, SymbolicTensorPower, FockVector, PerturbedState>;

struct TestResult {
  /// "ok" when false; otherwise a yellow card carrying `round`.
  bool yellow = false;
  unsigned round = 0;

  static TestResult ok() { return {}; }
  static TestResult card(unsigned n) { return {true, n}; }
  bool operator==(const TestResult&) const = default;
};

using OutcomeTuple = std::vector<std::string>;
using Outcome = std::variant<OutcomeTuple, TestResult>;

enum class ExperimentKind { PM, PMStar };

std::string to_string(ExperimentKind kind);

struct Event {
  EventState state;
  Outcome outcome;
  /// Round index n the event was generated for.
  unsigned round = 0;
};

ExperimentKind kind_of(const Outcome& outcome);

class Plot {
 public:
  /// Validates that every outcome matches the kind and that round indices
  /// are distinct and within [0, horizon].
  Plot(ExperimentKind kind, unsigned horizon, std::vector<Event> events);

  ExperimentKind kind() const { return kind_; }
  unsigned horizon() const { return horizon_; }
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  ExperimentKind kind_;
  unsigned horizon_;
  std::vector<Event> events_;
};

/// <a|b> for unit-normalized event states. Throws DenseLimitError when a
/// comparison needs densification beyond the limit.
Complex state_inner(const EventState& a, const EventState& b,
                    std::size_t dense_limit = Tolerances{}.dense_limit);

/// ||a - b||.
double state_distance(const EventState& a, const EventState& b,
                      std::size_t dense_limit = Tolerances{}.dense_limit);

/// ||F Psi|| for the unnormalized cut of `state.source`.
double perturbed_norm(const PerturbedState& state);

/// Dense vector of the state's n-particle component.
Vector dense_sector(const EventState& state, unsigned n,
                    std::size_t dense_limit = Tolerances{}.dense_limit);

/// infinity when outcomes differ, else the state distance. Throws
/// std::invalid_argument when the events belong to different experiment kinds.
double event_distance(const Event& a, const Event& b);

/// Symmetric sup-inf distance. Empty against non-empty is infinity, two empty
/// plots are at distance zero. Rows of the distance table run under OpenMP.
double hausdorff(const Plot& a, const Plot& b);
/// Serial reference for hausdorff.
double hausdorff_serial(const Plot& a, const Plot& b);

}  // namespace bornless
