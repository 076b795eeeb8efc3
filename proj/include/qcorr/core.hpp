#pragma once

// Dense complex linear algebra and density-matrix primitives.
//
// Bipartite index convention: subsystem A is the slower-varying index, so the
// two-qubit computational basis is ordered {|00>, |01>, |10>, |11>} with
// |ij> = |i>_A |j>_B.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Normalized state vector over a (bipartite) Hilbert space.
using PureVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNegativeEigenTol = 1e-10;
inline constexpr double kDegeneracyGap = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (wrong subsystem dims, non-square, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Matrix is not an acceptable density matrix (or not Hermitian/PSD where required).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class Subsystem { A, B };

struct DensityReport {
  bool square = false;
  bool finite = false;
  double hermiticity_defect = 0.0;  // max |M_ij - conj(M_ji)|
  double trace_defect = 0.0;        // |tr M - 1|
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;

  bool passed() const;
  std::string describe() const;
};

/// Always returns a report; never throws.
DensityReport validate_density(const Matrix& m, double tol = kHermitianTol);

class DensityMatrix {
 public:
  /// Throws InvalidStateError unless validate_density(m, tol) passes.
  explicit DensityMatrix(Matrix m, double tol = kHermitianTol);

  static DensityMatrix from_pure(const PureVector& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

class BipartiteState {
 public:
  BipartiteState(DensityMatrix rho, int dim_a, int dim_b);
  BipartiteState(Matrix m, int dim_a, int dim_b, double tol = kHermitianTol)
      : BipartiteState(DensityMatrix(std::move(m), tol), dim_a, dim_b) {}

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return rho_.dim(); }
  const DensityMatrix& density() const { return rho_; }
  const Matrix& matrix() const { return rho_.matrix(); }

  /// Same state with the roles of A and B exchanged.
  BipartiteState swapped() const;

 private:
  DensityMatrix rho_;
  int dim_a_;
  int dim_b_;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
struct Spectrum {
  RealVector values;
  Matrix vectors;  // column i pairs with values[i]
  bool degenerate = false;  // some adjacent gap < kDegeneracyGap; tie-break applied
};

Matrix tensor_product(const Matrix& a, const Matrix& b);

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Subsystem keep);
DensityMatrix partial_trace(const BipartiteState& rho, Subsystem keep);

Matrix partial_transpose(const Matrix& m, int dim_a, int dim_b, Subsystem on);
Matrix partial_transpose(const BipartiteState& rho, Subsystem on);

/// Eigenvectors inside a degenerate cluster are replaced by the projections of
/// computational basis vectors (in index order) onto the cluster subspace,
/// Gram-Schmidt orthonormalized. Outside clusters the phase is fixed so that
/// the first largest-magnitude component is real positive.
Spectrum eig_hermitian(const Matrix& m);

/// Principal square root of a PSD matrix; eigenvalues in [-1e-10, 0) are clipped.
Matrix psd_sqrt(const Matrix& m);

/// Max-norm helpers used throughout the tests and verifier.
double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);

}  // namespace qcorr
