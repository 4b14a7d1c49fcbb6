#pragma once

// Dense finite-dimensional state algebra: kets, projectors, measurement
// families, tensor powers and Born weights.

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bornless {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Every numeric tolerance of the library lives here.
struct Tolerances {
  double norm = 1e-9;
  double hermitian = 1e-10;
  double idempotent = 1e-9;
  double completeness = 1e-9;
  double orthogonality = 1e-9;
  /// Overlap fires when a Born weight is at most this (exact zero in theory).
  double zero_weight = 1e-12;
  /// A limiting frequency must exceed a floating Born weight by more than
  /// this before BornF counts it as a violation.
  double frequency_margin = 1e-9;
  /// Perturbed states with norm at most this are reported as annihilated.
  double annihilation = 1e-12;
  /// Largest total dimension a dense tensor-power object may have.
  std::size_t dense_limit = std::size_t{1} << 20;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DenseLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Returns dim^n, or throws DenseLimitError("dense oracle limit ...") when it
/// exceeds `limit`.
std::size_t checked_power_dim(std::size_t dim, unsigned n, std::size_t limit);

class Ket {
 public:
  explicit Ket(Vector amplitudes);
  Ket(std::initializer_list<Complex> amplitudes);

  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = Tolerances{}.norm) const;
  Ket normalized() const;
  /// <this|other>
  Complex inner(const Ket& other) const;

  bool operator==(const Ket& other) const { return amps_ == other.amps_; }

 private:
  Vector amps_;
};

class Projector {
 public:
  /// Validates hermiticity and idempotence; throws std::invalid_argument.
  static Projector from_matrix(Matrix m, const Tolerances& tol = {});
  /// Rank-one projector onto the normalized span of psi.
  static Projector onto(const Ket& psi);
  static Projector identity(std::size_t dim);
  /// Wraps a matrix that is a projector by construction (sums of tensor
  /// products of orthogonal projectors); no validation pass.
  static Projector from_trusted_matrix(Matrix m) { return Projector(std::move(m)); }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Projector complement() const;
  Projector tensor(const Projector& other) const;

 private:
  explicit Projector(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

class ProjectorFamily {
 public:
  /// Labels must be unique and projectors share a dimension. Completeness is
  /// not enforced here; see validate_family.
  ProjectorFamily(std::vector<std::string> labels, std::vector<Projector> projectors);

  /// Projectors onto the computational basis, one label per basis vector.
  static ProjectorFamily computational(std::vector<std::string> labels);
  /// Default labels: {h, v} for a qubit, "0".."d-1" otherwise.
  static ProjectorFamily computational(std::size_t dim);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return projectors_.front().dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Projector& at(std::size_t i) const { return projectors_.at(i); }
  /// Throws std::out_of_range for an unknown label.
  std::size_t index_of(const std::string& label) const;
  const Projector& operator[](const std::string& label) const {
    return projectors_[index_of(label)];
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Projector> projectors_;
};

struct FamilyViolation {
  std::string invariant;  // "completeness" or "orthogonality"
  double max_residual = 0.0;
  std::string detail;
};

struct FamilyReport {
  std::vector<FamilyViolation> violations;
  bool valid() const { return violations.empty(); }
};

FamilyReport validate_family(const ProjectorFamily& family, const Tolerances& tol = {});

/// ||proj psi||^2, clamped to [0, 1]. Throws DimensionError on mismatch and
/// std::invalid_argument when psi is not normalized.
double born_weight(const Ket& psi, const Projector& proj, const Tolerances& tol = {});
double born_weight(const Vector& psi, const Matrix& proj);

Vector kron(const Vector& a, const Vector& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// psi^{(x) n}; n = 0 gives the one-dimensional unit scalar.
Ket tensor_power(const Ket& psi, unsigned n, std::size_t dense_limit = Tolerances{}.dense_limit);

/// Psi = sum_n alpha_n psi^{(x) n}, restricted to sectors n <= max_sector.
class FockVector {
 public:
  static constexpr unsigned kDefaultMaxSector = 64;

  FockVector(Ket base, std::map<unsigned, Complex> coeffs,
             unsigned max_sector = kDefaultMaxSector, const Tolerances& tol = {});
  static FockVector single(Ket base, unsigned n, unsigned max_sector = kDefaultMaxSector);

  const Ket& base() const { return base_; }
  const std::map<unsigned, Complex>& coeffs() const { return coeffs_; }
  Complex coeff(unsigned n) const;
  unsigned max_sector() const { return max_sector_; }

  bool operator==(const FockVector& o) const {
    return base_ == o.base_ && coeffs_ == o.coeffs_;
  }

 private:
  Ket base_;
  std::map<unsigned, Complex> coeffs_;
  unsigned max_sector_;
};

}  // namespace bornless
