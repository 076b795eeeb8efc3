#include "qcorr/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace qcorr {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return max_abs(m - m.adjoint());
}

bool DensityReport::passed() const {
  return square && finite && hermiticity_defect <= tolerance && trace_defect <= tolerance &&
         min_eigenvalue >= -tolerance;
}

std::string DensityReport::describe() const {
  if (!square) return "matrix is not square";
  if (!finite) return "matrix has non-finite entries";
  char buf[256];
  std::snprintf(buf, sizeof buf, "hermiticity defect %.3e, trace defect %.3e, min eigenvalue %.3e (tol %.1e): %s",
                hermiticity_defect, trace_defect, min_eigenvalue, tolerance, passed() ? "pass" : "fail");
  return buf;
}

DensityReport validate_density(const Matrix& m, double tol) {
  DensityReport r;
  r.tolerance = tol;
  r.square = m.rows() == m.cols() && m.rows() > 0;
  if (!r.square) return r;
  r.finite = m.allFinite();
  if (!r.finite) return r;
  r.hermiticity_defect = max_abs(m - m.adjoint());
  r.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

DensityMatrix::DensityMatrix(Matrix m, double tol) : m_(std::move(m)) {
  auto report = validate_density(m_, tol);
  if (!report.passed()) throw InvalidStateError("invalid density matrix: " + report.describe());
}

DensityMatrix DensityMatrix::from_pure(const PureVector& psi) {
  if (std::abs(psi.norm() - 1.0) > kTraceTol) throw InvalidStateError("from_pure: vector is not normalized");
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw DimensionError("maximally_mixed: dimension must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

BipartiteState::BipartiteState(DensityMatrix rho, int dim_a, int dim_b)
    : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a <= 0 || dim_b <= 0 || dim_a * dim_b != rho_.dim())
    throw DimensionError("bipartite dims " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                         " do not match state dimension " + std::to_string(rho_.dim()));
}

BipartiteState BipartiteState::swapped() const {
  const int n = dim();
  Matrix out(n, n);
  for (int ia = 0; ia < dim_a_; ++ia)
    for (int ib = 0; ib < dim_b_; ++ib)
      for (int ja = 0; ja < dim_a_; ++ja)
        for (int jb = 0; jb < dim_b_; ++jb)
          out(ib * dim_a_ + ia, jb * dim_a_ + ja) = matrix()(ia * dim_b_ + ib, ja * dim_b_ + jb);
  return BipartiteState(DensityMatrix(std::move(out)), dim_b_, dim_a_);
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  if (!a.allFinite() || !b.allFinite()) throw DomainError("tensor_product: non-finite input");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Subsystem keep) {
  if (m.rows() != m.cols() || dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b)
    throw DimensionError("partial_trace: dimension mismatch");
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int a = 0; a < dim_a; ++a) out(i, j) += m(a * dim_b + i, a * dim_b + j);
  return out;
}

DensityMatrix partial_trace(const BipartiteState& rho, Subsystem keep) {
  // Reduced states of a valid state are valid; skip revalidation noise by using a loose tolerance.
  return DensityMatrix(partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep), 1e-9);
}

Matrix partial_transpose(const Matrix& m, int dim_a, int dim_b, Subsystem on) {
  if (m.rows() != m.cols() || dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b)
    throw DimensionError("partial_transpose: dimension mismatch");
  Matrix out(m.rows(), m.cols());
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb) {
          const int row = ia * dim_b + ib;
          const int col = ja * dim_b + jb;
          if (on == Subsystem::B)
            out(ia * dim_b + jb, ja * dim_b + ib) = m(row, col);
          else
            out(ja * dim_b + ib, ia * dim_b + jb) = m(row, col);
        }
  return out;
}

Matrix partial_transpose(const BipartiteState& rho, Subsystem on) {
  return partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b(), on);
}

namespace {

void fix_phase(Eigen::Ref<Vector> v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= top - 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

// Deterministic orthonormal basis for span(cluster).
Matrix canonical_cluster_basis(const Matrix& cluster) {
  const Eigen::Index n = cluster.rows();
  const Eigen::Index k = cluster.cols();
  const Matrix proj = cluster * cluster.adjoint();
  Matrix basis(n, k);
  Eigen::Index found = 0;
  auto try_add = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < found; ++j) v -= basis.col(j) * basis.col(j).dot(v);
    const double norm = v.norm();
    if (norm < 1e-6) return;
    basis.col(found++) = v / norm;
  };
  for (Eigen::Index i = 0; i < n && found < k; ++i) try_add(proj.col(i));
  for (Eigen::Index j = 0; j < k && found < k; ++j) try_add(cluster.col(j));
  return basis;
}

}  // namespace

Spectrum eig_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eig_hermitian: matrix is not square");
  if (!m.allFinite()) throw DomainError("eig_hermitian: non-finite input");
  if (hermiticity_defect(m) > kHermitianTol) throw InvalidStateError("eig_hermitian: matrix is not Hermitian");
  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");

  // Eigen returns ascending order.
  Spectrum s;
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = es.eigenvalues()(n - 1 - i);
    s.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && s.values(end - 1) - s.values(end) < kDegeneracyGap) ++end;
    if (end - start > 1) {
      s.degenerate = true;
      s.vectors.middleCols(start, end - start) = canonical_cluster_basis(s.vectors.middleCols(start, end - start));
    } else {
      fix_phase(s.vectors.col(start));
    }
    start = end;
  }
  return s;
}

Matrix psd_sqrt(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("psd_sqrt: matrix is not square");
  if (!m.allFinite()) throw DomainError("psd_sqrt: non-finite input");
  if (hermiticity_defect(m) > kHermitianTol) throw InvalidStateError("psd_sqrt: matrix is not Hermitian");
  // Raw solver: the canonical cluster basis of eig_hermitian would smear nearly equal eigenvalues.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw Error("psd_sqrt: eigensolver failed");
  if (m.rows() > 0 && es.eigenvalues().minCoeff() < -kNegativeEigenTol)
    throw InvalidStateError("psd_sqrt: matrix has a negative eigenvalue below -1e-10");
  const RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qcorr
