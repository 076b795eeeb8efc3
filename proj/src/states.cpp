#include "qcorr/states.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qcorr {

namespace {

PureVector ket(int dim, int index) {
  PureVector v = PureVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

PureVector kron(const PureVector& a, const PureVector& b) {
  PureVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + ": p must lie in [0, 1]");
}

Matrix ginibre(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

BipartiteState classical_bipartite(const Eigen::MatrixXd& p) {
  if (p.size() == 0) throw DimensionError("classical_bipartite: empty distribution");
  if (!p.allFinite() || p.minCoeff() < 0.0 || std::abs(p.sum() - 1.0) > 1e-12)
    throw DomainError("classical_bipartite: entries must be non-negative and sum to 1");
  const int da = static_cast<int>(p.rows());
  const int db = static_cast<int>(p.cols());
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int k = 0; k < da; ++k)
    for (int l = 0; l < db; ++l) m(k * db + l, k * db + l) = p(k, l);
  return BipartiteState(std::move(m), da, db);
}

PureVector bell(Bell which) {
  const double r = 1.0 / std::numbers::sqrt2;
  PureVector v = PureVector::Zero(4);
  switch (which) {
    case Bell::PhiPlus:
      v(0) = r, v(3) = r;
      break;
    case Bell::PhiMinus:
      v(0) = r, v(3) = -r;
      break;
    case Bell::PsiPlus:
      v(1) = r, v(2) = r;
      break;
    case Bell::PsiMinus:
      v(1) = r, v(2) = -r;
      break;
  }
  return v;
}

PureVector singlet() { return bell(Bell::PsiMinus); }

BipartiteState pseudo_pure(const PureVector& psi, double p, int n_qubits) {
  require_probability(p, "pseudo_pure");
  if (n_qubits < 2 || n_qubits > 6) throw DomainError("pseudo_pure: n_qubits must be in [2, 6]");
  const int dim = 1 << n_qubits;
  if (psi.size() != dim) throw DimensionError("pseudo_pure: vector length must be 2^n");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("pseudo_pure: vector is not normalized");
  const int qa = n_qubits / 2;
  Matrix m = p * (psi * psi.adjoint());
  m += ((1.0 - p) / dim) * Matrix::Identity(dim, dim);
  return BipartiteState(std::move(m), 1 << qa, 1 << (n_qubits - qa));
}

BipartiteState werner(double p) {
  require_probability(p, "werner");
  return pseudo_pure(singlet(), p, 2);
}

TileBasis tile_basis() {
  const double r = 1.0 / std::numbers::sqrt2;
  const PureVector e0 = ket(3, 0), e1 = ket(3, 1), e2 = ket(3, 2);
  TileBasis t;
  t.tiles[0] = kron(e0, r * (e0 + e1));
  t.tiles[1] = kron(e0, r * (e0 - e1));
  t.tiles[2] = kron(e2, r * (e1 + e2));
  t.tiles[3] = kron(e2, r * (e1 - e2));
  t.tiles[4] = kron(e1, e1);
  t.tiles[5] = kron(r * (e0 + e1), e2);
  t.tiles[6] = kron(r * (e0 - e1), e2);
  t.tiles[7] = kron(r * (e1 + e2), e0);
  t.tiles[8] = kron(r * (e1 - e2), e0);
  const PureVector sum = e0 + e1 + e2;
  t.stopper = kron(sum, sum) / 3.0;
  return t;
}

BipartiteState bound_entangled_tiles() {
  const TileBasis t = tile_basis();
  Matrix m = Matrix::Identity(9, 9);
  for (int i : {2, 4, 7, 9}) m -= t.tiles[i - 1] * t.tiles[i - 1].adjoint();
  m -= t.stopper * t.stopper.adjoint();
  return BipartiteState(m / 4.0, 3, 3);
}

namespace {

Matrix checked_cq_sum(const std::vector<double>& alphas, const Matrix& basis, const std::vector<DensityMatrix>& taus,
                      bool classical_on_a) {
  if (alphas.empty() || alphas.size() != taus.size() || static_cast<Eigen::Index>(alphas.size()) > basis.cols())
    throw DimensionError("cq_state: alphas, basis and taus must have matching sizes");
  if (basis.rows() != basis.cols()) throw DimensionError("cq_state: basis must be square");
  const Eigen::Index d = basis.cols();
  if (max_abs(basis.adjoint() * basis - Matrix::Identity(d, d)) > 1e-10)
    throw DomainError("cq_state: basis is not orthonormal");
  double total = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0)) throw DomainError("cq_state: alphas must be non-negative");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("cq_state: alphas must sum to 1");
  const int dt = taus.front().dim();
  for (const auto& tau : taus)
    if (tau.dim() != dt) throw DimensionError("cq_state: taus must share a dimension");

  Matrix m = Matrix::Zero(d * dt, d * dt);
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const Matrix proj = basis.col(static_cast<Eigen::Index>(a)) * basis.col(static_cast<Eigen::Index>(a)).adjoint();
    m += alphas[a] * (classical_on_a ? tensor_product(proj, taus[a].matrix()) : tensor_product(taus[a].matrix(), proj));
  }
  return m;
}

}  // namespace

BipartiteState cq_state(const std::vector<double>& alphas, const Matrix& basis_a,
                        const std::vector<DensityMatrix>& taus) {
  Matrix m = checked_cq_sum(alphas, basis_a, taus, true);
  return BipartiteState(std::move(m), static_cast<int>(basis_a.cols()), taus.front().dim());
}

BipartiteState qc_state(const std::vector<double>& alphas, const Matrix& basis_b,
                        const std::vector<DensityMatrix>& taus) {
  Matrix m = checked_cq_sum(alphas, basis_b, taus, false);
  return BipartiteState(std::move(m), taus.front().dim(), static_cast<int>(basis_b.cols()));
}

DensityMatrix random_state(int dim, int rank, std::uint64_t seed) {
  if (dim <= 0 || rank <= 0 || rank > dim) throw DimensionError("random_state: need 0 < rank <= dim");
  const Matrix g = ginibre(dim, rank, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

PureVector random_pure(int dim, std::uint64_t seed) {
  if (dim <= 0) throw DimensionError("random_pure: dimension must be positive");
  PureVector v = ginibre(dim, 1, seed).col(0);
  return v / v.norm();
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  if (dim <= 0) throw DimensionError("random_unitary: dimension must be positive");
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, seed));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

Channel::Channel(Matrix isometry, int dim, int env_dim) : isometry_(std::move(isometry)), dim_(dim), env_dim_(env_dim) {
  if (dim <= 0 || env_dim <= 0 || isometry_.rows() != dim * env_dim || isometry_.cols() != dim)
    throw DimensionError("Channel: isometry must be (dim*env_dim) x dim");
  if (max_abs(isometry_.adjoint() * isometry_ - Matrix::Identity(dim, dim)) > 1e-10)
    throw DomainError("Channel: map is not an isometry");
}

Matrix Channel::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("Channel::apply: dimension mismatch");
  return partial_trace(isometry_ * rho * isometry_.adjoint(), dim_, env_dim_, Subsystem::A);
}

DensityMatrix Channel::apply(const DensityMatrix& rho) const { return DensityMatrix(apply(rho.matrix()), 1e-9); }

Channel random_channel(int dim, int env_dim, std::uint64_t seed) {
  if (dim <= 0 || env_dim <= 0) throw DimensionError("random_channel: dims must be positive");
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim * env_dim, dim, seed));
  Matrix v = qr.householderQ() * Matrix::Identity(dim * env_dim, dim);
  return Channel(std::move(v), dim, env_dim);
}

// ---------------------------------------------------------------------------
// StateSpec

std::string to_string(StateFamily f) {
  switch (f) {
    case StateFamily::Classical: return "classical";
    case StateFamily::Bell: return "bell";
    case StateFamily::Werner: return "werner";
    case StateFamily::PseudoPure: return "pseudo_pure";
    case StateFamily::TileVector: return "tile_vector";
    case StateFamily::TileBoundEntangled: return "tile_bound_entangled";
    case StateFamily::Cq: return "cq";
    case StateFamily::RandomDensity: return "random_density";
    case StateFamily::RandomPure: return "random_pure";
  }
  return "unknown";
}

StateFamily state_family_from_string(const std::string& name) {
  for (auto f : {StateFamily::Classical, StateFamily::Bell, StateFamily::Werner, StateFamily::PseudoPure,
                 StateFamily::TileVector, StateFamily::TileBoundEntangled, StateFamily::Cq,
                 StateFamily::RandomDensity, StateFamily::RandomPure})
    if (to_string(f) == name) return f;
  throw DomainError("unknown state family '" + name + "'");
}

double StateSpec::scalar(const std::string& key) const {
  auto it = parameters.find(key);
  if (it == parameters.end() || it->second.size() != 1)
    throw DomainError("state parameter '" + key + "' must be a single number");
  return it->second.front();
}

double StateSpec::scalar_or(const std::string& key, double fallback) const {
  return parameters.contains(key) ? scalar(key) : fallback;
}

namespace {

int as_int(double x, const char* what) {
  if (!std::isfinite(x) || x != std::floor(x) || x < 0 || x > 1e6)
    throw DomainError(std::string(what) + " must be a non-negative integer");
  return static_cast<int>(x);
}

Bell bell_from_index(int i) {
  if (i < 0 || i > 3) throw DomainError("bell index must be 0..3");
  return static_cast<Bell>(i);
}

}  // namespace

BipartiteState make_state(const StateSpec& spec) {
  switch (spec.family) {
    case StateFamily::Classical: {
      const int da = as_int(spec.scalar("dim_a"), "dim_a");
      const int db = as_int(spec.scalar("dim_b"), "dim_b");
      auto it = spec.parameters.find("probs");
      if (it == spec.parameters.end() || static_cast<int>(it->second.size()) != da * db)
        throw DomainError("classical: probs must have dim_a * dim_b entries");
      Eigen::MatrixXd p(da, db);
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) p(k, l) = it->second[static_cast<std::size_t>(k * db + l)];
      return classical_bipartite(p);
    }
    case StateFamily::Bell:
      return BipartiteState(DensityMatrix::from_pure(bell(bell_from_index(as_int(spec.scalar("index"), "index")))), 2,
                            2);
    case StateFamily::Werner:
      return werner(spec.scalar("p"));
    case StateFamily::PseudoPure:
      return pseudo_pure(bell(bell_from_index(as_int(spec.scalar_or("bell_index", 3), "bell_index"))),
                         spec.scalar("p"), 2);
    case StateFamily::TileVector: {
      const int i = as_int(spec.scalar("index"), "index");
      if (i > 9) throw DomainError("tile index must be 1..9 (0 for the stopper)");
      const TileBasis t = tile_basis();
      return BipartiteState(DensityMatrix::from_pure(i == 0 ? t.stopper : t.tiles[static_cast<std::size_t>(i - 1)]), 3,
                            3);
    }
    case StateFamily::TileBoundEntangled:
      return bound_entangled_tiles();
    case StateFamily::Cq: {
      auto it = spec.parameters.find("alphas");
      if (it == spec.parameters.end() || it->second.empty()) throw DomainError("cq: alphas are required");
      const std::vector<double>& alphas = it->second;
      const int n = static_cast<int>(alphas.size());
      std::vector<DensityMatrix> taus;
      for (int a = 0; a < n; ++a) {
        const double angle = std::numbers::pi * a / (2.0 * n);
        PureVector v(2);
        v << std::cos(angle), std::sin(angle);
        taus.push_back(DensityMatrix::from_pure(v));
      }
      return cq_state(alphas, Matrix::Identity(n, n), taus);
    }
    case StateFamily::RandomDensity: {
      const int da = as_int(spec.scalar("dim_a"), "dim_a");
      const int db = as_int(spec.scalar("dim_b"), "dim_b");
      const int rank = as_int(spec.scalar_or("rank", da * db), "rank");
      return BipartiteState(random_state(da * db, rank, spec.seed.value_or(0)), da, db);
    }
    case StateFamily::RandomPure: {
      const int da = as_int(spec.scalar("dim_a"), "dim_a");
      const int db = as_int(spec.scalar("dim_b"), "dim_b");
      return BipartiteState(DensityMatrix::from_pure(random_pure(da * db, spec.seed.value_or(0))), da, db);
    }
  }
  throw DomainError("unhandled state family");
}

}  // namespace qcorr
