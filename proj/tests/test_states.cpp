#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstring>

using namespace qcorr;

namespace {

Matrix projector(const PureVector& v) { return v * v.adjoint(); }

PureVector ket(int d, int i) {
  PureVector v = PureVector::Zero(d);
  v(i) = 1.0;
  return v;
}

bool bytes_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("classical_bipartite") {
  const BipartiteState u = classical_bipartite(Eigen::MatrixXd::Constant(2, 2, 0.25));
  CHECK(max_abs(u.matrix() - 0.25 * Matrix::Identity(4, 4)) < 1e-15);

  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0, 0, 0.5;
  CHECK(mutual_information(classical_bipartite(p)) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd q(2, 3);
  q << 0.1, 0.2, 0.05, 0.3, 0.15, 0.2;
  CHECK(discord_d3(classical_bipartite(q)).value <= 1e-12);

  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0, -0.1;
  CHECK_THROWS_AS(classical_bipartite(bad), DomainError);
}

TEST_CASE("singlet") {
  const PureVector s = singlet();
  CHECK(s(0) == Complex(0.0));
  CHECK(s(1).real() == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(s(2).real() == doctest::Approx(-1.0 / std::numbers::sqrt2));
  CHECK(s(3) == Complex(0.0));
  const BipartiteState rho(DensityMatrix::from_pure(s), 2, 2);
  CHECK(max_abs(partial_trace(rho, Subsystem::A).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(chsh_max(rho) == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(max_abs(bell(Bell::PsiMinus) - s) == 0.0);
}

TEST_CASE("werner") {
  CHECK(max_abs(werner(0.0).matrix() - 0.25 * Matrix::Identity(4, 4)) < 1e-15);
  CHECK(max_abs(werner(1.0).matrix() - projector(singlet())) < 1e-15);
  CHECK(concurrence_wootters(werner(1.0 / 3.0)) <= 1e-8);
  CHECK(ppt_check(werner(1.0 / 3.0)).min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(concurrence_wootters(werner(1.0 / 3.0 - 1e-6)) == 0.0);
  CHECK(concurrence_wootters(werner(1.0 / 3.0 + 1e-6)) > 0.0);
  CHECK_THROWS_AS(werner(1.5), DomainError);
  CHECK_THROWS_AS(werner(-0.1), DomainError);
}

TEST_CASE("pseudo_pure") {
  const BipartiteState mixed = pseudo_pure(random_pure(8, 4), 0.0, 3);
  CHECK(max_abs(mixed.matrix() - Matrix::Identity(8, 8) / 8.0) < 1e-15);
  CHECK(mixed.dim_a() == 2);
  CHECK(mixed.dim_b() == 4);

  for (double p : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0})
    CHECK(bytes_equal(pseudo_pure(singlet(), p, 2).matrix(), werner(p).matrix()));

  CHECK(discord_d3(pseudo_pure(bell(Bell::PhiPlus), 0.1, 2)).value > 0.0);
  PureVector ghz = PureVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::numbers::sqrt2;
  CHECK(discord_d3(pseudo_pure(ghz, 0.1, 3)).value > 0.0);

  CHECK_THROWS_AS(pseudo_pure(singlet(), 1.2, 2), DomainError);
  CHECK_THROWS_AS(pseudo_pure(2.0 * singlet(), 0.5, 2), DomainError);
  CHECK_THROWS_AS(pseudo_pure(singlet(), 0.5, 3), DimensionError);
}

TEST_CASE("tile basis") {
  const TileBasis tb = tile_basis();
  Matrix gram(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) gram(i, j) = tb.tiles[i].dot(tb.tiles[j]);
  CHECK(max_abs(gram - Matrix::Identity(9, 9)) <= 1e-12);

  Matrix mix = Matrix::Zero(9, 9);
  for (const auto& t : tb.tiles) mix += projector(t) / 9.0;
  CHECK(max_abs(mix - Matrix::Identity(9, 9) / 9.0) <= 1e-12);

  for (const auto& t : tb.tiles) CHECK(schmidt_decompose(t, 3, 3).coefficients.size() == 1);
  CHECK(schmidt_decompose(tb.stopper, 3, 3).coefficients.size() == 1);
  CHECK(tb.stopper.norm() == doctest::Approx(1.0));

  // First tile as printed: |0>(|0> + |1>)/sqrt2.
  PureVector psi1 = (ket(9, 0) + ket(9, 1)) / std::numbers::sqrt2;
  CHECK(max_abs(tb.tiles[0] - psi1) < 1e-15);
}

TEST_CASE("bound_entangled_tiles") {
  const BipartiteState rho = bound_entangled_tiles();
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  const PptReport r = ppt_check(rho);
  CHECK(r.is_ppt);
  CHECK(r.min_eigenvalue >= -1e-10);

  const TileBasis tb = tile_basis();
  for (int i : {1, 3, 6, 8}) CHECK(std::abs(tb.tiles[i].dot(rho.matrix() * tb.tiles[i])) <= 1e-14);
  CHECK(std::abs(tb.stopper.dot(rho.matrix() * tb.stopper)) <= 1e-14);
  // Remaining tiles each carry weight 1/4.
  for (int i : {0, 2, 4, 5, 7}) CHECK(std::abs(tb.tiles[i].dot(rho.matrix() * tb.tiles[i])) > 0.0);
}

TEST_CASE("cq_state and qc_state") {
  const DensityMatrix tau = random_state(3, 2, 4);
  const BipartiteState prod = cq_state({1.0}, Matrix::Identity(2, 2), {tau});
  CHECK(mutual_information(prod) <= 1e-12);

  const PureVector t0 = ket(2, 0);
  PureVector t1(2);
  t1 << std::cos(0.6), std::sin(0.6);
  const std::vector<DensityMatrix> taus{DensityMatrix::from_pure(t0), DensityMatrix::from_pure(t1)};
  const Matrix u = random_unitary(2, 8);
  const BipartiteState cq = cq_state({0.7, 0.3}, u, taus);
  CHECK(discord_d3(cq).value <= 1e-9);
  CHECK(mutual_information(cq) > 0.01);
  CHECK(is_classical_quantum(cq) == CqVerdict::Classical);

  const BipartiteState qc = qc_state({0.7, 0.3}, u, taus);
  CHECK(is_classical_quantum(qc) == CqVerdict::NotClassical);
  CHECK(is_classical_quantum(qc.swapped()) == CqVerdict::Classical);

  CHECK_THROWS(cq_state({0.5, 0.6}, Matrix::Identity(2, 2), taus));
  CHECK_THROWS(cq_state({0.5, 0.5}, Matrix::Identity(2, 2), {taus[0]}));
}

TEST_CASE("random generators are seeded and valid") {
  CHECK(vn_entropy(random_state(4, 1, 17)) <= 1e-9);
  CHECK(bytes_equal(random_state(5, 3, 99).matrix(), random_state(5, 3, 99).matrix()));
  CHECK_FALSE(bytes_equal(random_state(5, 3, 99).matrix(), random_state(5, 3, 100).matrix()));
  const PureVector a = random_pure(6, 3), b = random_pure(6, 3);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(Complex) * 6) == 0);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));

  const Matrix u = random_unitary(4, 2);
  CHECK(max_abs(u.adjoint() * u - Matrix::Identity(4, 4)) < 1e-13);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Channel ch = random_channel(3, 1 + static_cast<int>(seed % 4), seed);
    const Matrix out = ch.apply(random_state(3, 3, seed + 50).matrix());
    CHECK(validate_density(out, 1e-10).passed());
  }
  CHECK_THROWS(random_state(0, 1, 1));
  CHECK_THROWS(random_state(3, 4, 1));
}

TEST_CASE("all factory outputs validate at 1e-10") {
  std::vector<BipartiteState> states{werner(0.3), pseudo_pure(random_pure(16, 1), 0.4, 4), bound_entangled_tiles(),
                                     classical_bipartite(Eigen::MatrixXd::Constant(3, 2, 1.0 / 6.0))};
  for (int b = 0; b < 4; ++b) states.emplace_back(DensityMatrix::from_pure(bell(static_cast<Bell>(b))), 2, 2);
  for (const auto& s : states) CHECK(validate_density(s.matrix(), 1e-10).passed());
}

TEST_CASE("make_state and family names") {
  for (auto f : {StateFamily::Classical, StateFamily::Bell, StateFamily::Werner, StateFamily::PseudoPure,
                 StateFamily::TileVector, StateFamily::TileBoundEntangled, StateFamily::Cq, StateFamily::RandomDensity,
                 StateFamily::RandomPure})
    CHECK(state_family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(state_family_from_string("nope"), DomainError);

  StateSpec spec;
  spec.family = StateFamily::Werner;
  spec.parameters["p"] = {0.5};
  CHECK(bytes_equal(make_state(spec).matrix(), werner(0.5).matrix()));

  spec.family = StateFamily::RandomDensity;
  spec.parameters = {{"dim_a", {2}}, {"dim_b", {3}}, {"rank", {2}}};
  spec.seed = 5;
  const BipartiteState r = make_state(spec);
  CHECK(r.dim() == 6);
  CHECK(bytes_equal(r.matrix(), make_state(spec).matrix()));

  spec.family = StateFamily::Werner;
  spec.parameters = {};
  CHECK_THROWS(make_state(spec));
}
