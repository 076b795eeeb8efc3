#pragma once

// Information-theoretic, entanglement and discord measures. Entropic outputs
// are in bits.

#include "qcorr/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qcorr {

/// Rank-1 orthonormal projective measurement on subsystem A.
class ProjectiveMeasurement {
 public:
  /// Validates completeness and orthogonality to 1e-10.
  explicit ProjectiveMeasurement(std::vector<Matrix> projectors);

  /// Projectors onto the (orthonormal) columns of `basis`.
  static ProjectiveMeasurement from_basis(const Matrix& basis);
  static ProjectiveMeasurement computational(int dim);

  int dim() const { return static_cast<int>(projectors_.front().rows()); }
  std::size_t size() const { return projectors_.size(); }
  const std::vector<Matrix>& projectors() const { return projectors_; }

 private:
  std::vector<Matrix> projectors_;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // nonincreasing, strictly positive
  std::vector<Vector> basis_a;
  std::vector<Vector> basis_b;
};

struct MeasureResult {
  double value = 0.0;
  bool degenerate = false;  // a basis tie-break was exercised
};

struct LocalBasis {
  ProjectiveMeasurement measurement;
  bool degenerate = false;
};

struct ConditionalInfo {
  double j = 0.0;                    // S(rho_B) - S(rho_B | Pi^A)
  double conditional_entropy = 0.0;  // sum_a p_a S(rho_B|a)
  std::vector<double> probabilities;
};

struct PptReport {
  bool is_ppt = true;
  double min_eigenvalue = 0.0;
  double negativity = 0.0;
};

struct OptimizedDiscord {
  double value = 0.0;
  double theta = 0.0;  // Bloch polar angle of the optimal measurement direction
  double phi = 0.0;
};

enum class CqVerdict { Classical, NotClassical, UndeterminedByD3 };

struct EnsembleVerdict {
  enum class Kind { NotClassical, Undetermined };
  Kind kind = Kind::Undetermined;
  std::vector<double> witness_weights;  // mixture that failed, empty when undetermined
  std::size_t mixtures_tested = 0;
};

/// Shannon entropy (bits) of a list of eigenvalues/probabilities; values below
/// zero are clipped, 0 log 0 = 0.
double shannon_entropy(std::span<const double> p);

/// von Neumann entropy of any Hermitian matrix after clipping negative eigenvalues.
double entropy_of(const Matrix& m);

double vn_entropy(const DensityMatrix& rho);
double mutual_information(const BipartiteState& rho);

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), computed as the trace
/// norm of sqrt(rho) sqrt(sigma).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

SchmidtDecomposition schmidt_decompose(const PureVector& psi, int dim_a, int dim_b);
double entanglement_entropy(const PureVector& psi, int dim_a, int dim_b);

LocalBasis local_eigenbasis(const BipartiteState& rho);
BipartiteState dephase_local(const BipartiteState& rho, const ProjectiveMeasurement& basis);

/// I(rho) - I(Phi(rho)), Phi the dephasing channel in the eigenbasis of rho_A.
MeasureResult discord_d3(const BipartiteState& rho);

ConditionalInfo measurement_j(const BipartiteState& rho, const ProjectiveMeasurement& m);
double discord_given_measurement(const BipartiteState& rho, const ProjectiveMeasurement& m);

/// Projective measurement along Bloch direction (theta, phi) on a qubit.
ProjectiveMeasurement bloch_measurement(double theta, double phi);

/// Minimum of discord_given_measurement over rank-1 projective qubit
/// measurements: 64x32 Bloch grid, then coordinate refinement. Never exceeds
/// the D3 value since the local eigenbasis is always a candidate.
OptimizedDiscord discord_projective_opt(const BipartiteState& rho);

double concurrence_wootters(const BipartiteState& rho);
PptReport ppt_check(const BipartiteState& rho);
double chsh_max(const BipartiteState& rho);

CqVerdict is_classical_quantum(const BipartiteState& rho, double tol = 1e-9);

/// Exact CQ test: writing rho = sum_kl X_kl (x) |k><l|_B, rho is CQ iff all
/// blocks X_kl commute. Used to resolve states whose D3 verdict is undetermined.
bool commuting_blocks_cq(const BipartiteState& rho, double tol = 1e-9);

/// One-sided witness: random convex mixtures (plus the ensemble members) are
/// tested for the CQ and QC properties; any failure yields NotClassical.
EnsembleVerdict ensemble_classicality_witness(std::span<const BipartiteState> states, std::size_t samples,
                                              std::uint64_t seed);

}  // namespace qcorr
