#include "bornless/events.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <stdexcept>

#include "bornless/freqtest.hpp"

namespace bornless {

std::string to_string(ExperimentKind kind) { return kind == ExperimentKind::PM ? "PM" : "PMStar"; }

ExperimentKind kind_of(const Outcome& outcome) {
  return std::holds_alternative<OutcomeTuple>(outcome) ? ExperimentKind::PM : ExperimentKind::PMStar;
}

Plot::Plot(ExperimentKind kind, unsigned horizon, std::vector<Event> events)
    : kind_(kind), horizon_(horizon), events_(std::move(events)) {
  std::set<unsigned> rounds;
  for (const auto& e : events_) {
    if (kind_of(e.outcome) != kind_)
      throw std::invalid_argument("Plot: event outcome does not match experiment kind");
    if (e.round > horizon_) throw std::invalid_argument("Plot: event beyond horizon");
    if (!rounds.insert(e.round).second)
      throw std::invalid_argument("Plot: two events share round " + std::to_string(e.round));
  }
}

namespace {

// scale * sum_n alpha_n P_n psi^{(x) n}, P_n = id - Pi_n on cut sectors.
struct SectorForm {
  const Ket* base;
  const std::map<unsigned, Complex>* coeffs;
  const CutSpec* cut;  // null when uncut
  double scale;
  std::map<unsigned, Complex> owned;

  bool cut_active(unsigned n) const { return cut != nullptr && n >= cut->m; }
};

SectorForm sector_form(const SymbolicTensorPower& s) {
  SectorForm f{&s.base, nullptr, nullptr, 1.0, {{s.n, Complex{1.0, 0.0}}}};
  return f;
}

SectorForm sector_form(const FockVector& v) { return {&v.base(), &v.coeffs(), nullptr, 1.0, {}}; }

SectorForm sector_form(const PerturbedState& s) {
  double norm = perturbed_norm(s);
  if (norm == 0.0) throw std::domain_error("perturbed state annihilated (zero norm)");
  return {&s.source.base(), &s.source.coeffs(), &s.cut, 1.0 / norm, {}};
}

const std::map<unsigned, Complex>& coeffs_of(const SectorForm& f) {
  return f.coeffs != nullptr ? *f.coeffs : f.owned;
}

bool same_ket(const Ket& a, const Ket& b) { return a == b; }

bool compatible_cuts(const CutSpec& a, const CutSpec& b) {
  return a.theta == b.theta && a.target.dim() == b.target.dim() &&
         (a.target.matrix() - b.target.matrix()).cwiseAbs().maxCoeff() <= 1e-12;
}

unsigned k_min(const Rational& theta, unsigned n) {
  return static_cast<unsigned>(to_int64(ceil(theta * n)));
}

// sum_{k >= k_min} C(n,k) a^k b^{n-k} for complex a, b.
Complex complex_tail(unsigned n, unsigned kmin, Complex a, Complex b) {
  Complex sum{};
  const double la = std::log(std::abs(a)), lb = std::log(std::abs(b));
  const double pa = std::arg(a), pb = std::arg(b);
  for (unsigned k = kmin; k <= n; ++k) {
    if ((a == Complex{} && k > 0) || (b == Complex{} && k < n)) continue;
    double logmag = log_binomial(n, k) + (k > 0 ? k * la : 0.0) + (k < n ? (n - k) * lb : 0.0);
    double phase = (k > 0 ? k * pa : 0.0) + (k < n ? (n - k) * pb : 0.0);
    sum += std::polar(std::exp(logmag), phase);
  }
  return sum;
}

Vector dense_cut_sector(const Ket& base, const CutSpec* cut, unsigned n, std::size_t limit) {
  Vector v = tensor_power(base, n, limit).amplitudes();
  if (cut == nullptr || n < cut->m) return v;
  ProjectorFamily coarse({"target", "rest"}, {cut->target, cut->target.complement()});
  FreqTestSpec spec(base.normalized(), coarse, "target", cut->theta);
  return v - apply_pi_n(spec, n, v);
}

// <phi^n| P_a P_b |psi^n> for sector n.
Complex sector_inner(const SectorForm& fa, const SectorForm& fb, unsigned n, std::size_t limit) {
  const Ket& phi = *fa.base;
  const Ket& psi = *fb.base;
  const bool ca = fa.cut_active(n), cb = fb.cut_active(n);
  const bool identical = same_ket(phi, psi);
  Complex plain = identical ? Complex{1.0, 0.0} : std::pow(phi.inner(psi), static_cast<int>(n));
  if (!ca && !cb) return plain;

  const CutSpec* cut = ca ? fa.cut : fb.cut;
  if (ca && cb && !compatible_cuts(*fa.cut, *fb.cut)) {
    Vector va = dense_cut_sector(phi, fa.cut, n, limit);
    Vector vb = dense_cut_sector(psi, fb.cut, n, limit);
    return va.dot(vb);
  }
  const unsigned kmin = k_min(cut->theta, n);
  if (identical) {
    double p = born_weight(psi.amplitudes(), cut->target.matrix());
    return plain - binomial_tail(n, kmin, p);
  }
  Complex a = phi.amplitudes().dot(cut->target.matrix() * psi.amplitudes());
  Complex b = phi.inner(psi) - a;
  return plain - complex_tail(n, kmin, a, b);
}

Complex inner_forms(const SectorForm& fa, const SectorForm& fb, std::size_t limit) {
  if (fa.base->dim() != fb.base->dim()) return Complex{};
  Complex sum{};
  const auto& ca = coeffs_of(fa);
  const auto& cb = coeffs_of(fb);
  for (const auto& [n, alpha] : ca) {
    auto it = cb.find(n);
    if (it == cb.end()) continue;
    sum += std::conj(alpha) * it->second * sector_inner(fa, fb, n, limit);
  }
  return sum * fa.scale * fb.scale;
}

Vector dense_form_sector(const SectorForm& f, unsigned n, std::size_t limit) {
  const auto& cs = coeffs_of(f);
  auto it = cs.find(n);
  auto dim = static_cast<Eigen::Index>(checked_power_dim(f.base->dim(), n, limit));
  if (it == cs.end()) return Vector::Zero(dim);
  return dense_cut_sector(*f.base, f.cut_active(n) ? f.cut : nullptr, n, limit) * it->second * f.scale;
}

SectorForm form_of(const EventState& s) {
  if (const auto* t = std::get_if<SymbolicTensorPower>(&s)) return sector_form(*t);
  if (const auto* f = std::get_if<FockVector>(&s)) return sector_form(*f);
  if (const auto* p = std::get_if<PerturbedState>(&s)) return sector_form(*p);
  throw std::logic_error("explicit kets have no sector form");
}

}  // namespace

double perturbed_norm(const PerturbedState& s) {
  double p = born_weight(s.source.base().amplitudes(), s.cut.target.matrix());
  double kept = 0.0;
  for (const auto& [n, alpha] : s.source.coeffs()) {
    double removed = n >= s.cut.m ? binomial_tail(n, k_min(s.cut.theta, n), p) : 0.0;
    kept += std::norm(alpha) * (1.0 - removed);
  }
  return std::sqrt(std::max(kept, 0.0));
}

Vector dense_sector(const EventState& state, unsigned n, std::size_t dense_limit) {
  if (const auto* e = std::get_if<ExplicitKet>(&state)) {
    if (e->sector == n) return e->ket.amplitudes();
    return Vector::Zero(static_cast<Eigen::Index>(checked_power_dim(e->site_dim, n, dense_limit)));
  }
  return dense_form_sector(form_of(state), n, dense_limit);
}

Complex state_inner(const EventState& a, const EventState& b, std::size_t dense_limit) {
  const auto* ea = std::get_if<ExplicitKet>(&a);
  const auto* eb = std::get_if<ExplicitKet>(&b);
  if (ea != nullptr && eb != nullptr) {
    if (ea->sector != eb->sector || ea->ket.dim() != eb->ket.dim()) return Complex{};
    return ea->ket.inner(eb->ket);
  }
  if (ea != nullptr || eb != nullptr) {
    const ExplicitKet& e = ea != nullptr ? *ea : *eb;
    const EventState& other = ea != nullptr ? b : a;
    Vector dense = dense_sector(other, e.sector, dense_limit);
    if (dense.size() != e.ket.amplitudes().size()) return Complex{};
    return ea != nullptr ? e.ket.amplitudes().dot(dense) : dense.dot(e.ket.amplitudes());
  }
  return inner_forms(form_of(a), form_of(b), dense_limit);
}

namespace {

bool structurally_equal(const EventState& a, const EventState& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, ExplicitKet>) {
          return x.sector == y.sector && x.ket == y.ket;
        } else if constexpr (std::is_same_v<T, SymbolicTensorPower>) {
          return x.n == y.n && x.base == y.base;
        } else if constexpr (std::is_same_v<T, FockVector>) {
          return x == y;
        } else {
          return x.source == y.source && x.cut.m == y.cut.m && compatible_cuts(x.cut, y.cut);
        }
      },
      a);
}

}  // namespace

double state_distance(const EventState& a, const EventState& b, std::size_t dense_limit) {
  if (structurally_equal(a, b)) return 0.0;
  double aa = state_inner(a, a, dense_limit).real();
  double bb = state_inner(b, b, dense_limit).real();
  double ab = state_inner(a, b, dense_limit).real();
  return std::sqrt(std::max(aa + bb - 2.0 * ab, 0.0));
}

double event_distance(const Event& a, const Event& b) {
  if (kind_of(a.outcome) != kind_of(b.outcome))
    throw std::invalid_argument("event_distance: events from different experiment kinds");
  if (a.outcome != b.outcome) return kInfinity;
  return state_distance(a.state, b.state);
}

namespace {

void check_comparable(const Plot& a, const Plot& b) {
  if (a.kind() != b.kind()) throw std::invalid_argument("hausdorff: experiment kinds differ");
  if (a.horizon() != b.horizon()) throw std::invalid_argument("hausdorff: horizons differ");
}

// sup_{x in from} inf_{y in to} d(x, y)
double directed_serial(const Plot& from, const Plot& to) {
  double worst = 0.0;
  for (const auto& x : from.events()) {
    double best = kInfinity;
    for (const auto& y : to.events()) best = std::min(best, event_distance(x, y));
    worst = std::max(worst, best);
  }
  return worst;
}

double directed_parallel(const Plot& from, const Plot& to) {
  const auto& xs = from.events();
  const long count = static_cast<long>(xs.size());
  double worst = 0.0;
  std::exception_ptr failure;
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      double best = kInfinity;
      for (const auto& y : to.events())
        best = std::min(best, event_distance(xs[static_cast<std::size_t>(i)], y));
      worst = std::max(worst, best);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return worst;
}

}  // namespace

double hausdorff(const Plot& a, const Plot& b) {
  check_comparable(a, b);
  if (a.events().empty() && b.events().empty()) return 0.0;
  if (a.events().empty() || b.events().empty()) return kInfinity;
  return std::max(directed_parallel(a, b), directed_parallel(b, a));
}

double hausdorff_serial(const Plot& a, const Plot& b) {
  check_comparable(a, b);
  if (a.events().empty() && b.events().empty()) return 0.0;
  if (a.events().empty() || b.events().empty()) return kInfinity;
  return std::max(directed_serial(a, b), directed_serial(b, a));
}

}  // namespace bornless
