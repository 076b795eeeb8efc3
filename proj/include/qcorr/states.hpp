#pragma once

// Factories for the named state families, plus seeded random generators.

#include "qcorr/core.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qcorr {

/// sum_kl p_kl |k><k| (x) |l><l|; p is dim_a x dim_b.
BipartiteState classical_bipartite(const Eigen::MatrixXd& p);

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

PureVector bell(Bell which);
/// (|01> - |10>)/sqrt(2)
PureVector singlet();

/// p |Psi-><Psi-| + (1 - p) I/4, p in [0, 1].
BipartiteState werner(double p);

/// p |psi><psi| + (1 - p) I / 2^n on n qubits; A holds the first n/2 qubits
/// (rounded down).
BipartiteState pseudo_pure(const PureVector& psi, double p, int n_qubits);

struct TileBasis {
  std::array<PureVector, 9> tiles;  // tiles[i] is psi_{i+1}
  PureVector stopper;
};

TileBasis tile_basis();

/// (1/4)(I_9 - sum over psi_2, psi_4, psi_7, psi_9 and the stopper).
BipartiteState bound_entangled_tiles();

/// sum_a alpha_a |a><a| (x) tau_a with |a> the columns of basis_a.
BipartiteState cq_state(const std::vector<double>& alphas, const Matrix& basis_a,
                        const std::vector<DensityMatrix>& taus);
/// sum_a alpha_a tau_a (x) |a><a|; the A <-> B mirror image of cq_state.
BipartiteState qc_state(const std::vector<double>& alphas, const Matrix& basis_b,
                        const std::vector<DensityMatrix>& taus);

/// Ginibre sample G G^dagger / tr, G of shape dim x rank.
DensityMatrix random_state(int dim, int rank, std::uint64_t seed);
PureVector random_pure(int dim, std::uint64_t seed);
/// Haar-ish unitary from the QR factorization of a complex Ginibre matrix.
Matrix random_unitary(int dim, std::uint64_t seed);

/// CPTP map rho -> tr_env(V rho V^dagger) with V an isometry dim -> dim*env_dim.
class Channel {
 public:
  Channel(Matrix isometry, int dim, int env_dim);

  int dim() const { return dim_; }
  int env_dim() const { return env_dim_; }
  const Matrix& isometry() const { return isometry_; }

  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  Matrix isometry_;
  int dim_;
  int env_dim_;
};

Channel random_channel(int dim, int env_dim, std::uint64_t seed);

enum class StateFamily {
  Classical,
  Bell,
  Werner,
  PseudoPure,
  TileVector,
  TileBoundEntangled,
  Cq,
  RandomDensity,
  RandomPure,
};

std::string to_string(StateFamily f);
StateFamily state_family_from_string(const std::string& name);

/// Declarative description of a state. Parameters by family:
///   classical:            probs (row-major), dim_a, dim_b
///   bell:                 index (0 phi+, 1 phi-, 2 psi+, 3 psi-)
///   werner:               p
///   pseudo_pure:          p, bell_index (psi is a Bell state, n = 2)
///   tile_vector:          index in 1..9, or 0 for the stopper
///   tile_bound_entangled: none
///   cq:                   alphas; computational basis on A, tau_a the qubit
///                         state cos(t_a)|0> + sin(t_a)|1>, t_a = pi a / (2n)
///   random_density:       dim_a, dim_b, rank (+ seed)
///   random_pure:          dim_a, dim_b (+ seed)
struct StateSpec {
  StateFamily family = StateFamily::Werner;
  std::map<std::string, std::vector<double>> parameters;
  std::optional<std::uint64_t> seed;

  double scalar(const std::string& key) const;
  double scalar_or(const std::string& key, double fallback) const;
};

BipartiteState make_state(const StateSpec& spec);

}  // namespace qcorr
