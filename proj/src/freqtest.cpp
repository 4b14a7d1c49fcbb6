#include "bornless/freqtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace bornless {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

double log_factorial(unsigned n) {
  // exact summation below the table size; lgamma_r above (re-entrant)
  static const std::vector<double> table = [] {
    std::vector<double> t(4096, 0.0);
    for (std::size_t i = 2; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n < table.size()) return table[n];
  int sign = 0;
  return lgamma_r(static_cast<double>(n) + 1.0, &sign);
}

// Decodes tuple index into base-|Z| digits and accumulates (x)_i pi_{z_i}
// for tuples that pass the count threshold.
void accumulate_tuples(const FreqTestSpec& spec, unsigned n, std::size_t first, std::size_t last,
                       Matrix& acc) {
  const std::size_t alphabet = spec.family().size();
  const std::size_t target = spec.family().index_of(spec.target());
  std::vector<std::size_t> digits(n);
  for (std::size_t idx = first; idx < last; ++idx) {
    std::size_t rest = idx;
    unsigned count = 0;
    for (unsigned i = 0; i < n; ++i) {
      digits[n - 1 - i] = rest % alphabet;
      rest /= alphabet;
    }
    for (auto d : digits) count += d == target ? 1u : 0u;
    if (!spec.meets_threshold(count, n)) continue;
    Matrix term = Matrix::Ones(1, 1);
    for (auto d : digits) term = kron(term, spec.family().at(d).matrix());
    acc += term;
  }
}

std::size_t tuple_count(std::size_t alphabet, unsigned n) {
  std::size_t total = 1;
  for (unsigned i = 0; i < n; ++i) total *= alphabet;
  return total;
}

}  // namespace

// ---- FreqTestSpec ----------------------------------------------------------

FreqTestSpec::FreqTestSpec(Ket psi, ProjectorFamily family, std::string target, Rational theta,
                           const Tolerances& tol)
    : psi_(std::move(psi)),
      family_(std::move(family)),
      target_(std::move(target)),
      theta_(std::move(theta)),
      p_(0.0) {
  if (theta_ <= 0 || theta_ > 1) throw std::invalid_argument("theta must lie in (0, 1]");
  if (psi_.dim() != family_.dim()) throw DimensionError("FreqTestSpec: state and family differ in dimension");
  p_ = born_weight(psi_, family_[target_], tol);
}

FreqTestSpec FreqTestSpec::from_probability(double p, Rational theta) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
  Ket psi{Complex{std::sqrt(p), 0.0}, Complex{std::sqrt(1.0 - p), 0.0}};
  return FreqTestSpec(psi.normalized(), ProjectorFamily::computational(2), "h", std::move(theta));
}

unsigned FreqTestSpec::k_min(unsigned n) const {
  return static_cast<unsigned>(to_int64(ceil(theta_ * n)));
}

bool FreqTestSpec::meets_threshold(unsigned count, unsigned n) const {
  return BigInt(count) * denominator(theta_) >= numerator(theta_) * n;
}

// ---- binomial tails --------------------------------------------------------

double log_binomial(unsigned n, unsigned k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double binomial_pmf(unsigned n, unsigned k, double p) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_binomial(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

double binomial_tail(unsigned n, unsigned k_min, double p) {
  if (k_min == 0) return 1.0;
  if (k_min > n) return 0.0;
  CompensatedSum acc;
  for (unsigned k = k_min; k <= n; ++k) acc.add(binomial_pmf(n, k, p));
  return std::clamp(acc.value(), 0.0, 1.0);
}

double pi_n_overlap(const FreqTestSpec& spec, unsigned n) {
  return binomial_tail(n, spec.k_min(n), spec.p());
}

std::vector<double> tail_profile(const FreqTestSpec& spec, unsigned n_lo, unsigned n_hi) {
  if (n_hi < n_lo) return {};
  std::vector<double> out(n_hi - n_lo + 1);
  const long count = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = pi_n_overlap(spec, n_lo + static_cast<unsigned>(i));
  return out;
}

std::vector<double> tail_profile_serial(const FreqTestSpec& spec, unsigned n_lo, unsigned n_hi) {
  std::vector<double> out;
  for (unsigned n = n_lo; n <= n_hi && n_hi >= n_lo; ++n) out.push_back(pi_n_overlap(spec, n));
  return out;
}

double lemma1_bound(unsigned n, unsigned k, double p) {
  double gap = p - static_cast<double>(k) / n;
  return std::exp(-2.0 * n * gap * gap);
}

TailResult tail_result(unsigned n, unsigned k_min, double p) {
  return {n, k_min, binomial_tail(n, k_min, p), lemma1_bound(n, k_min, p)};
}

double binary_relative_entropy(double q, double p) {
  auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a * std::log(a / b);
  };
  return term(q, p) + term(1.0 - q, 1.0 - p);
}

// ---- dense oracle ----------------------------------------------------------

Projector dense_pi_n(const FreqTestSpec& spec, unsigned n, std::size_t dense_limit) {
  const auto dim = static_cast<Eigen::Index>(checked_power_dim(spec.family().dim(), n, dense_limit));
  const std::size_t tuples = tuple_count(spec.family().size(), n);
  Matrix total = Matrix::Zero(dim, dim);
#pragma omp parallel
  {
    Matrix local = Matrix::Zero(dim, dim);
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t chunk = (tuples + threads - 1) / threads;
    const std::size_t first = std::min(tuples, id * chunk);
    const std::size_t last = std::min(tuples, first + chunk);
    accumulate_tuples(spec, n, first, last, local);
#pragma omp critical
    total += local;
  }
  return Projector::from_trusted_matrix(std::move(total));
}

Projector dense_pi_n_serial(const FreqTestSpec& spec, unsigned n, std::size_t dense_limit) {
  const auto dim = static_cast<Eigen::Index>(checked_power_dim(spec.family().dim(), n, dense_limit));
  Matrix total = Matrix::Zero(dim, dim);
  accumulate_tuples(spec, n, 0, tuple_count(spec.family().size(), n), total);
  return Projector::from_trusted_matrix(std::move(total));
}

Matrix dense_f_sector(const FreqTestSpec& spec, unsigned n, unsigned m, std::size_t dense_limit) {
  const auto dim = static_cast<Eigen::Index>(checked_power_dim(spec.family().dim(), n, dense_limit));
  Matrix id = Matrix::Identity(dim, dim);
  if (n < m) return id;
  return id - dense_pi_n(spec, n, dense_limit).matrix();
}

// ---- truncation and convergence -------------------------------------------

double f_overlap(const FockVector& Psi, const FreqTestSpec& spec, unsigned m) {
  if (Psi.base().dim() != spec.psi().dim() ||
      (Psi.base().amplitudes() - spec.psi().amplitudes()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("f_overlap: base-state mismatch");
  CompensatedSum removed;
  for (const auto& [n, alpha] : Psi.coeffs())
    if (n >= m) removed.add(std::norm(alpha) * pi_n_overlap(spec, n));
  return std::clamp(1.0 - removed.value(), 0.0, 1.0);
}

double cut_distance(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // 2 - 2 sqrt(1-t) rewritten to avoid cancellation at small t
  return std::sqrt(2.0 * t / (1.0 + std::sqrt(1.0 - t)));
}

namespace {

void require_gap(const FreqTestSpec& spec) {
  if (!(to_double(spec.theta()) > spec.p()))
    throw NoConvergenceError("no convergence guarantee: theta must exceed ||pi psi||^2");
}

double hoeffding(const FreqTestSpec& spec, unsigned n) {
  double gap = to_double(spec.theta()) - spec.p();
  return std::exp(-2.0 * n * gap * gap);
}

}  // namespace

double sup_tail(const FreqTestSpec& spec, unsigned m) {
  require_gap(spec);
  if (spec.p() == 0.0) return 0.0;
  m = std::max(m, 1u);
  double best = 0.0;
  for (unsigned n = m;; ++n) {
    if (hoeffding(spec, n) <= best || hoeffding(spec, n) < std::numeric_limits<double>::min())
      return best;
    best = std::max(best, pi_n_overlap(spec, n));
  }
}

ConvergenceResult min_m_for_epsilon(const FreqTestSpec& spec, double eps) {
  require_gap(spec);
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  ConvergenceResult out;
  double gap = to_double(spec.theta()) - spec.p();
  out.horizon = eps >= 1.0 ? 1u
                           : static_cast<unsigned>(std::ceil(std::log(1.0 / eps) / (2.0 * gap * gap)));
  out.horizon = std::max(out.horizon, 1u);

  std::vector<double> profile = tail_profile(spec, 1, out.horizon);
  // smallest m whose suffix maximum over [m, horizon] is within eps
  unsigned m = out.horizon + 1;
  double suffix = 0.0;
  for (unsigned n = out.horizon; n >= 1; --n) {
    suffix = std::max(suffix, profile[n - 1]);
    if (suffix > eps) break;
    m = n;
  }
  out.m = m;
  out.tail_sup = sup_tail(spec, out.m);
  out.sup_distance = cut_distance(out.tail_sup);
  return out;
}

ConvergenceResult min_m_for_distance(const FreqTestSpec& spec, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  double half = 1.0 - 0.5 * delta * delta;
  double eps = delta >= std::sqrt(2.0) ? 1.0 : 1.0 - half * half;
  ConvergenceResult out = min_m_for_epsilon(spec, eps);
  while (out.sup_distance > delta) {
    ++out.m;
    out.tail_sup = sup_tail(spec, out.m);
    out.sup_distance = cut_distance(out.tail_sup);
  }
  return out;
}

}  // namespace bornless

namespace bornless {

namespace {

// Applies `a` to every tensor site of v (site 0 most significant).
Vector apply_sites(const Matrix& a, const Vector& v, std::size_t d, unsigned n) {
  Vector cur = v;
  Vector next(v.size());
  std::size_t lo = 1;
  for (unsigned s = 0; s < n; ++s, lo *= d) {
    const std::size_t block = lo * d;
    const std::size_t blocks = static_cast<std::size_t>(v.size()) / block;
    for (std::size_t hi = 0; hi < blocks; ++hi)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < lo; ++l) {
          Complex acc{};
          for (std::size_t k = 0; k < d; ++k)
            acc += a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                   cur(static_cast<Eigen::Index>(hi * block + k * lo + l));
          next(static_cast<Eigen::Index>(hi * block + j * lo + l)) = acc;
        }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace

Vector apply_pi_n(const FreqTestSpec& spec, unsigned n, const Vector& v) {
  const std::size_t d = spec.psi().dim();
  const std::size_t total = checked_power_dim(d, n, std::numeric_limits<std::size_t>::max());
  if (static_cast<std::size_t>(v.size()) != total) throw DimensionError("apply_pi_n: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(spec.target_projector().matrix());
  const Matrix& basis = eig.eigenvectors();
  std::vector<bool> inside(d);
  for (std::size_t j = 0; j < d; ++j) inside[j] = eig.eigenvalues()(static_cast<Eigen::Index>(j)) > 0.5;

  Vector w = apply_sites(basis.adjoint(), v, d, n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    unsigned count = 0;
    for (unsigned s = 0; s < n; ++s, rest /= d) count += inside[rest % d] ? 1u : 0u;
    if (!spec.meets_threshold(count, n)) w(static_cast<Eigen::Index>(idx)) = 0.0;
  }
  return apply_sites(basis, w, d, n);
}

}  // namespace bornless
