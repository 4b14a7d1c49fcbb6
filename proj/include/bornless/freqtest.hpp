#pragma once

// The frequency test {Pi_t}: Pi_n projects onto outcome n-tuples in which the
// target outcome occurs at least theta*n times. Overlaps of psi^{(x) n} with
// Pi_n reduce to binomial tails because the count only sees whether z_i is the
// target, so the family can be coarse-grained to (pi_target, id - pi_target).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bornless/qstate.hpp"
#include "bornless/rational.hpp"

namespace bornless {

class NoConvergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FreqTestSpec {
 public:
  /// theta must lie in (0, 1]; target must be a label of the family.
  FreqTestSpec(Ket psi, ProjectorFamily family, std::string target, Rational theta,
               const Tolerances& tol = {});

  /// Qubit stand-in with ||pi_h psi||^2 = p: psi = (sqrt p, sqrt(1-p)), target h.
  static FreqTestSpec from_probability(double p, Rational theta);

  const Ket& psi() const { return psi_; }
  const ProjectorFamily& family() const { return family_; }
  const std::string& target() const { return target_; }
  const Rational& theta() const { return theta_; }
  const Projector& target_projector() const { return family_[target_]; }
  /// ||pi_target psi||^2
  double p() const { return p_; }

  /// Smallest k with k >= theta * n.
  unsigned k_min(unsigned n) const;
  /// count >= theta * n, decided in integers.
  bool meets_threshold(unsigned count, unsigned n) const;

 private:
  Ket psi_;
  ProjectorFamily family_;
  std::string target_;
  Rational theta_;
  double p_;
};

struct TailResult {
  unsigned n = 0;
  unsigned k_min = 0;
  double exact = 0.0;  // P[Bin(n,p) >= k_min]
  double bound = 0.0;  // exp(-2n(p - k_min/n)^2)
};

/// log C(n, k) from a log-factorial table; thread-safe.
double log_binomial(unsigned n, unsigned k);

/// P[Bin(n, p) = k].
double binomial_pmf(unsigned n, unsigned k, double p);

/// P[Bin(n, p) >= k_min], summed in log space with compensation.
double binomial_tail(unsigned n, unsigned k_min, double p);

/// <psi^n| Pi_n |psi^n>.
double pi_n_overlap(const FreqTestSpec& spec, unsigned n);

/// t_n = pi_n_overlap for n in [n_lo, n_hi]; OpenMP over n.
std::vector<double> tail_profile(const FreqTestSpec& spec, unsigned n_lo, unsigned n_hi);
/// Serial reference for tail_profile.
std::vector<double> tail_profile_serial(const FreqTestSpec& spec, unsigned n_lo, unsigned n_hi);

/// exp(-2n(p - k/n)^2)
double lemma1_bound(unsigned n, unsigned k, double p);

TailResult tail_result(unsigned n, unsigned k_min, double p);

/// q ln(q/p) + (1-q) ln((1-q)/(1-p)), the binary relative entropy in nats.
double binary_relative_entropy(double q, double p);

/// Pi_n as an explicit matrix on K^{(x) n}, built by enumerating every
/// outcome tuple of the full family. Tuples are split across OpenMP threads.
Projector dense_pi_n(const FreqTestSpec& spec, unsigned n,
                     std::size_t dense_limit = Tolerances{}.dense_limit);
/// Single-threaded reference for dense_pi_n.
Projector dense_pi_n_serial(const FreqTestSpec& spec, unsigned n,
                            std::size_t dense_limit = Tolerances{}.dense_limit);

/// Pi_n v computed in the eigenbasis of the target projector, where Pi_n is
/// diagonal; avoids forming the d^n x d^n matrix.
Vector apply_pi_n(const FreqTestSpec& spec, unsigned n, const Vector& v);

/// Restriction of F_theta^{>=m} to the n-particle sector: identity below m,
/// id - Pi_n from m on.
Matrix dense_f_sector(const FreqTestSpec& spec, unsigned n, unsigned m,
                      std::size_t dense_limit = Tolerances{}.dense_limit);

/// <Psi| F_theta^{>=m} |Psi> = 1 - sum_{n>=m} |alpha_n|^2 t_n.
/// Throws std::invalid_argument if Psi is built on a different base state.
double f_overlap(const FockVector& Psi, const FreqTestSpec& spec, unsigned m);

/// sqrt(2 - 2 sqrt(1 - t)): distance between a unit vector and its
/// renormalized projection when the removed weight is t.
double cut_distance(double t);

/// sup_{n >= m} t_n, exact: the scan stops once the Hoeffding envelope
/// exp(-2n(theta-p)^2) cannot beat the running maximum. Requires theta > p.
double sup_tail(const FreqTestSpec& spec, unsigned m);

struct ConvergenceResult {
  unsigned m = 1;
  /// Beyond this sector the Hoeffding envelope alone keeps t_n <= eps.
  unsigned horizon = 0;
  double tail_sup = 0.0;      // sup_{n >= m} t_n
  /// sup over unit Psi in H_psi of || F Psi / ||F Psi|| - Psi ||
  double sup_distance = 0.0;
};

/// Smallest m with sup_{n>=m} t_n <= eps. Throws NoConvergenceError when
/// theta <= p.
ConvergenceResult min_m_for_epsilon(const FreqTestSpec& spec, double eps);
/// Same search, with the tolerance placed on sup_distance instead of t.
ConvergenceResult min_m_for_distance(const FreqTestSpec& spec, double delta);

}  // namespace bornless
