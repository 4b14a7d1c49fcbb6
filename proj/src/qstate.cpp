#include "bornless/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bornless {

std::size_t checked_power_dim(std::size_t dim, unsigned n, std::size_t limit) {
  std::size_t total = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (dim != 0 && total > limit / dim)
      throw DenseLimitError("dense oracle limit: " + std::to_string(dim) + "^" +
                            std::to_string(n) + " exceeds " + std::to_string(limit));
    total *= dim;
  }
  if (total > limit) throw DenseLimitError("dense oracle limit exceeded");
  return total;
}

// ---- Ket -------------------------------------------------------------------

Ket::Ket(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("Ket: dimension must be positive");
}

Ket::Ket(std::initializer_list<Complex> amplitudes)
    : Ket(Vector(Eigen::Map<const Vector>(amplitudes.begin(),
                                          static_cast<Eigen::Index>(amplitudes.size())))) {}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("Ket::basis: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return Ket(std::move(v));
}

bool Ket::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Ket Ket::normalized() const {
  double n = norm();
  if (n == 0.0 || !std::isfinite(n)) throw std::invalid_argument("Ket: cannot normalize zero vector");
  return Ket(amps_ / n);
}

Complex Ket::inner(const Ket& other) const {
  if (other.dim() != dim()) throw DimensionError("Ket::inner: dimension mismatch");
  return amps_.dot(other.amps_);  // conjugates the first argument
}

// ---- Projector -------------------------------------------------------------

Projector Projector::from_matrix(Matrix m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw DimensionError("Projector: matrix must be square and non-empty");
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermitian)
    throw std::invalid_argument("Projector: not Hermitian (residual " + std::to_string(herm) + ")");
  double idem = (m * m - m).cwiseAbs().maxCoeff();
  if (idem > tol.idempotent)
    throw std::invalid_argument("Projector: not idempotent (residual " + std::to_string(idem) + ")");
  return Projector(std::move(m));
}

Projector Projector::onto(const Ket& psi) {
  Ket u = psi.normalized();
  return Projector(u.amplitudes() * u.amplitudes().adjoint());
}

Projector Projector::identity(std::size_t dim) {
  auto d = static_cast<Eigen::Index>(dim);
  return Projector(Matrix::Identity(d, d));
}

Projector Projector::complement() const {
  return Projector(Matrix::Identity(m_.rows(), m_.cols()) - m_);
}

Projector Projector::tensor(const Projector& other) const {
  return Projector(kron(m_, other.m_));
}

// ---- ProjectorFamily -------------------------------------------------------

ProjectorFamily::ProjectorFamily(std::vector<std::string> labels, std::vector<Projector> projectors)
    : labels_(std::move(labels)), projectors_(std::move(projectors)) {
  if (labels_.empty() || labels_.size() != projectors_.size())
    throw std::invalid_argument("ProjectorFamily: need one projector per label");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size())
    throw std::invalid_argument("ProjectorFamily: duplicate label");
  for (const auto& p : projectors_)
    if (p.dim() != projectors_.front().dim())
      throw DimensionError("ProjectorFamily: projectors differ in dimension");
}

ProjectorFamily ProjectorFamily::computational(std::vector<std::string> labels) {
  std::vector<Projector> ps;
  for (std::size_t i = 0; i < labels.size(); ++i)
    ps.push_back(Projector::onto(Ket::basis(labels.size(), i)));
  return ProjectorFamily(std::move(labels), std::move(ps));
}

ProjectorFamily ProjectorFamily::computational(std::size_t dim) {
  std::vector<std::string> labels;
  if (dim == 2) {
    labels = {"h", "v"};
  } else {
    for (std::size_t i = 0; i < dim; ++i) labels.push_back(std::to_string(i));
  }
  return computational(std::move(labels));
}

std::size_t ProjectorFamily::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown outcome label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

FamilyReport validate_family(const ProjectorFamily& family, const Tolerances& tol) {
  FamilyReport report;
  const auto d = static_cast<Eigen::Index>(family.dim());
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < family.size(); ++i) sum += family.at(i).matrix();
  Eigen::MatrixXd residual = (sum - Matrix::Identity(d, d)).cwiseAbs();
  Eigen::Index r = 0, c = 0;
  double worst = residual.maxCoeff(&r, &c);
  if (worst > tol.completeness)
    report.violations.push_back({"completeness", worst,
                                 "sum of projectors differs from identity at (" +
                                     std::to_string(r) + "," + std::to_string(c) + ")"});

  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      double off = (family.at(i).matrix() * family.at(j).matrix()).cwiseAbs().maxCoeff();
      if (off > tol.orthogonality)
        report.violations.push_back({"orthogonality", off,
                                     family.labels()[i] + " x " + family.labels()[j]});
    }
  }
  return report;
}

double born_weight(const Vector& psi, const Matrix& proj) {
  if (proj.rows() != psi.size() || proj.cols() != psi.size())
    throw DimensionError("born_weight: dimension mismatch");
  double w = psi.dot(proj * psi).real();
  return std::clamp(w, 0.0, 1.0);
}

double born_weight(const Ket& psi, const Projector& proj, const Tolerances& tol) {
  if (psi.dim() != proj.dim()) throw DimensionError("born_weight: dimension mismatch");
  if (!psi.is_normalized(tol.norm)) throw std::invalid_argument("born_weight: state not normalized");
  return born_weight(psi.amplitudes(), proj.matrix());
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Ket tensor_power(const Ket& psi, unsigned n, std::size_t dense_limit) {
  checked_power_dim(psi.dim(), n, dense_limit);
  Vector out = Vector::Ones(1);
  for (unsigned i = 0; i < n; ++i) out = kron(out, psi.amplitudes());
  return Ket(std::move(out));
}

// ---- FockVector ------------------------------------------------------------

FockVector::FockVector(Ket base, std::map<unsigned, Complex> coeffs, unsigned max_sector,
                       const Tolerances& tol)
    : base_(std::move(base)), coeffs_(std::move(coeffs)), max_sector_(max_sector) {
  if (!base_.is_normalized(tol.norm)) throw std::invalid_argument("FockVector: base not normalized");
  double total = 0.0;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->first > max_sector_)
      throw std::invalid_argument("FockVector: sector " + std::to_string(it->first) +
                                  " above truncation " + std::to_string(max_sector_));
    total += std::norm(it->second);
    it = it->second == Complex{} ? coeffs_.erase(it) : std::next(it);
  }
  if (std::abs(total - 1.0) > tol.norm)
    throw std::invalid_argument("FockVector: coefficients not normalized");
}

FockVector FockVector::single(Ket base, unsigned n, unsigned max_sector) {
  return FockVector(std::move(base), {{n, Complex{1.0, 0.0}}}, max_sector);
}

Complex FockVector::coeff(unsigned n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex{} : it->second;
}

}  // namespace bornless
