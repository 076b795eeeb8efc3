#include "qcorr/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace qcorr {

// ---------------------------------------------------------------------------
// ProjectiveMeasurement

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Matrix> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw DomainError("projective measurement needs at least one projector");
  const Eigen::Index d = projectors_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < projectors_.size(); ++a) {
    const Matrix& pa = projectors_[a];
    if (pa.rows() != d || pa.cols() != d) throw DimensionError("projectors must share one square shape");
    for (std::size_t b = 0; b < projectors_.size(); ++b) {
      const Matrix prod = pa * projectors_[b];
      const double defect = a == b ? max_abs(prod - pa) : max_abs(prod);
      if (defect > 1e-10) throw DomainError("projectors are not orthogonal idempotents");
    }
    sum += pa;
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > 1e-10) throw DomainError("projectors do not sum to the identity");
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(const Matrix& basis) {
  std::vector<Matrix> projectors;
  projectors.reserve(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) projectors.push_back(basis.col(k) * basis.col(k).adjoint());
  return ProjectiveMeasurement(std::move(projectors));
}

ProjectiveMeasurement ProjectiveMeasurement::computational(int dim) {
  if (dim <= 0) throw DimensionError("computational basis needs a positive dimension");
  return from_basis(Matrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------
// Entropies

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double entropy_of(const Matrix& m) {
  const Spectrum s = eig_hermitian(m);
  const double h =
      shannon_entropy(std::span<const double>(s.values.data(), static_cast<std::size_t>(s.values.size())));
  return std::max(0.0, h);
}

double vn_entropy(const DensityMatrix& rho) { return entropy_of(rho.matrix()); }

double mutual_information(const BipartiteState& rho) {
  const Matrix ra = partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::A);
  const Matrix rb = partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::B);
  return entropy_of(ra) + entropy_of(rb) - entropy_of(rho.matrix());
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Matrix prod = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  Eigen::JacobiSVD<Matrix> svd(prod);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Pure-state entanglement

SchmidtDecomposition schmidt_decompose(const PureVector& psi, int dim_a, int dim_b) {
  if (dim_a <= 0 || dim_b <= 0 || psi.size() != dim_a * dim_b)
    throw DimensionError("schmidt_decompose: vector length does not match dims");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidStateError("schmidt_decompose: vector is not normalized");
  Matrix coeffs(dim_a, dim_b);
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib) coeffs(ia, ib) = psi(ia * dim_b + ib);
  Eigen::JacobiSVD<Matrix> svd(coeffs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomposition out;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k);
    if (s <= 1e-12) break;
    out.coefficients.push_back(s);
    out.basis_a.push_back(svd.matrixU().col(k));
    out.basis_b.push_back(svd.matrixV().col(k).conjugate());
  }
  return out;
}

double entanglement_entropy(const PureVector& psi, int dim_a, int dim_b) {
  const auto sd = schmidt_decompose(psi, dim_a, dim_b);
  std::vector<double> p;
  p.reserve(sd.coefficients.size());
  for (double l : sd.coefficients) p.push_back(l * l);
  return shannon_entropy(p);
}

// ---------------------------------------------------------------------------
// Discord

LocalBasis local_eigenbasis(const BipartiteState& rho) {
  const Spectrum s = eig_hermitian(partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::A));
  return LocalBasis{ProjectiveMeasurement::from_basis(s.vectors), s.degenerate};
}

namespace {

Matrix apply_local(const Matrix& proj, const Matrix& rho, int dim_b) {
  const Matrix lifted = tensor_product(proj, Matrix::Identity(dim_b, dim_b));
  return lifted * rho * lifted;
}

void require_compatible(const BipartiteState& rho, const ProjectiveMeasurement& m) {
  if (m.dim() != rho.dim_a()) throw DimensionError("measurement dimension does not match subsystem A");
}

}  // namespace

BipartiteState dephase_local(const BipartiteState& rho, const ProjectiveMeasurement& basis) {
  require_compatible(rho, basis);
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& p : basis.projectors()) out += apply_local(p, rho.matrix(), rho.dim_b());
  return BipartiteState(std::move(out), rho.dim_a(), rho.dim_b(), 1e-9);
}

MeasureResult discord_d3(const BipartiteState& rho) {
  const LocalBasis local = local_eigenbasis(rho);
  const BipartiteState dephased = dephase_local(rho, local.measurement);
  return MeasureResult{mutual_information(rho) - mutual_information(dephased), local.degenerate};
}

ConditionalInfo measurement_j(const BipartiteState& rho, const ProjectiveMeasurement& m) {
  require_compatible(rho, m);
  ConditionalInfo info;
  const double sb = entropy_of(partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::B));
  for (const Matrix& p : m.projectors()) {
    const Matrix branch = apply_local(p, rho.matrix(), rho.dim_b());
    const double pa = branch.trace().real();
    info.probabilities.push_back(pa);
    if (pa < 1e-14) continue;
    const Matrix conditional = partial_trace(branch, rho.dim_a(), rho.dim_b(), Subsystem::B) / pa;
    info.conditional_entropy += pa * entropy_of(conditional);
  }
  info.j = sb - info.conditional_entropy;
  return info;
}

double discord_given_measurement(const BipartiteState& rho, const ProjectiveMeasurement& m) {
  return mutual_information(rho) - measurement_j(rho, m).j;
}

ProjectiveMeasurement bloch_measurement(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  Matrix basis(2, 2);
  basis << c, -std::conj(e) * s, e * s, c;
  return ProjectiveMeasurement::from_basis(basis);
}

OptimizedDiscord discord_projective_opt(const BipartiteState& rho) {
  if (rho.dim_a() != 2) throw DomainError("discord_projective_opt supports dim_a = 2 only");
  constexpr int kPolar = 64;
  constexpr int kAzimuth = 32;
  constexpr int kRounds = 3;
  constexpr double kShrink = 0.1;
  constexpr double kTol = 1e-6;
  const double pi = std::numbers::pi;

  const double total = mutual_information(rho);
  auto objective = [&](double theta, double phi) {
    return total - measurement_j(rho, bloch_measurement(theta, phi)).j;
  };

  OptimizedDiscord best{objective(0.0, 0.0), 0.0, 0.0};
  for (int i = 0; i < kPolar; ++i) {
    const double theta = pi * i / (kPolar - 1);
    for (int j = 0; j < kAzimuth; ++j) {
      const double phi = 2.0 * pi * j / kAzimuth;
      const double v = objective(theta, phi);
      if (v < best.value) best = {v, theta, phi};
    }
  }

  // Eigenbasis of rho_A as a Bloch direction.
  const LocalBasis local = local_eigenbasis(rho);
  const Matrix& p0 = local.measurement.projectors().front();
  const double pop = std::clamp(p0(0, 0).real(), 0.0, 1.0);
  const double eig_theta = 2.0 * std::acos(std::sqrt(pop));
  const double eig_phi = std::arg(p0(1, 0));
  const OptimizedDiscord eigen_candidate{discord_given_measurement(rho, local.measurement), eig_theta, eig_phi};

  auto refine = [&](OptimizedDiscord start) {
    double steps[2] = {pi / (kPolar - 1), 2.0 * pi / kAzimuth};
    // kRounds shrink rounds; keep going (bounded) while a round still gains kTol.
    for (int round = 0; round < 3 * kRounds; ++round) {
      const double before = start.value;
      bool moved = true;
      while (moved) {
        moved = false;
        for (int coord = 0; coord < 2; ++coord) {
          for (double dir : {1.0, -1.0}) {
            while (true) {
              OptimizedDiscord trial = start;
              (coord == 0 ? trial.theta : trial.phi) += dir * steps[coord];
              trial.value = objective(trial.theta, trial.phi);
              if (!(trial.value < start.value - 1e-15)) break;
              start = trial;
              moved = true;
            }
          }
        }
      }
      steps[0] *= kShrink;
      steps[1] *= kShrink;
      if (round + 1 >= kRounds && before - start.value < kTol) break;
    }
    return start;
  };

  OptimizedDiscord result = refine(best);
  const OptimizedDiscord from_eigen = refine(eigen_candidate);
  if (from_eigen.value < result.value) result = from_eigen;
  if (eigen_candidate.value < result.value) result = eigen_candidate;
  return result;
}

// ---------------------------------------------------------------------------
// Two-qubit entanglement and nonlocality

namespace {

void require_two_qubits(const BipartiteState& rho, const char* what) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2) throw DimensionError(std::string(what) + " requires a two-qubit state");
}

std::array<Matrix, 3> paulis() {
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

}  // namespace

double concurrence_wootters(const BipartiteState& rho) {
  require_two_qubits(rho, "concurrence_wootters");
  const Matrix yy = tensor_product(paulis()[1], paulis()[1]);
  const Matrix flipped = yy * rho.matrix().conjugate() * yy;
  const Matrix root = psd_sqrt(rho.matrix());
  Matrix r = root * flipped * root;
  r = 0.5 * (r + r.adjoint());
  const Spectrum s = eig_hermitian(r);
  RealVector l = s.values.cwiseMax(0.0).cwiseSqrt();
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

PptReport ppt_check(const BipartiteState& rho) {
  const Matrix pt = partial_transpose(rho, Subsystem::B);
  const Spectrum s = eig_hermitian(pt);
  PptReport r;
  r.min_eigenvalue = s.values.minCoeff();
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) < 0.0) r.negativity -= s.values(i);
  r.is_ppt = r.min_eigenvalue >= -kNegativeEigenTol;
  return r;
}

double chsh_max(const BipartiteState& rho) {
  require_two_qubits(rho, "chsh_max");
  const auto p = paulis();
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (rho.matrix() * tensor_product(p[i], p[j])).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const auto& u = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, u(2) + u(1)));
}

// ---------------------------------------------------------------------------
// Classicality

CqVerdict is_classical_quantum(const BipartiteState& rho, double tol) {
  const MeasureResult d3 = discord_d3(rho);
  if (d3.degenerate) return CqVerdict::UndeterminedByD3;
  return d3.value < tol ? CqVerdict::Classical : CqVerdict::NotClassical;
}

bool commuting_blocks_cq(const BipartiteState& rho, double tol) {
  const int da = rho.dim_a();
  const int db = rho.dim_b();
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(db * db));
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l) {
      Matrix x(da, da);
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) x(i, j) = rho.matrix()(i * db + k, j * db + l);
      blocks.push_back(std::move(x));
    }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i; j < blocks.size(); ++j)
      if (max_abs(blocks[i] * blocks[j] - blocks[j] * blocks[i]) > tol) return false;
  return true;
}

namespace {

bool passes_cq(const BipartiteState& rho) {
  switch (is_classical_quantum(rho)) {
    case CqVerdict::Classical:
      return true;
    case CqVerdict::NotClassical:
      return false;
    case CqVerdict::UndeterminedByD3:
      break;
  }
  return commuting_blocks_cq(rho);
}

}  // namespace

EnsembleVerdict ensemble_classicality_witness(std::span<const BipartiteState> states, std::size_t samples,
                                              std::uint64_t seed) {
  if (states.empty()) throw DomainError("ensemble_classicality_witness: empty ensemble");
  for (const auto& s : states)
    if (s.dim_a() != states.front().dim_a() || s.dim_b() != states.front().dim_b())
      throw DimensionError("ensemble_classicality_witness: states have different dims");

  const std::size_t n = states.size();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  EnsembleVerdict verdict;
  for (std::size_t trial = 0; trial < n + samples; ++trial) {
    std::vector<double> w(n, 0.0);
    if (trial < n) {
      w[trial] = 1.0;
    } else {
      double total = 0.0;
      for (double& x : w) total += (x = expo(rng));
      for (double& x : w) x /= total;
    }
    Matrix mix = Matrix::Zero(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < n; ++i) mix += w[i] * states[i].matrix();
    const BipartiteState mixture(std::move(mix), states.front().dim_a(), states.front().dim_b(), 1e-9);
    ++verdict.mixtures_tested;
    if (!passes_cq(mixture) || !passes_cq(mixture.swapped())) {
      verdict.kind = EnsembleVerdict::Kind::NotClassical;
      verdict.witness_weights = std::move(w);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace qcorr
