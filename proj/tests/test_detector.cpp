#include "qcorr/detector.hpp"
#include "qcorr/measures.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace qcorr;

namespace {

XStateElements handmade(double a, Complex x, Complex c, double e, double eps0) {
  XStateElements el;
  el.a_prob = el.b_prob = a;
  el.x_coh = x;
  el.c_corr = c;
  el.e_joint = e;
  el.eps0 = eps0;
  return el;
}

double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

TEST_CASE("erf_complex examples") {
  CHECK(erf_complex(0.0) == Complex(0.0));
  CHECK(std::abs(erf_complex(1.0) - Complex(0.8427007929497149, 0.0)) < 1e-15);
  const Complex i1 = erf_complex(Complex(0.0, 1.0));
  CHECK(i1.real() == 0.0);
  CHECK(i1.imag() == doctest::Approx(1.6504257587975428).epsilon(1e-15));
  CHECK_THROWS_AS(erf_complex(Complex(10.0, 10.0)), DomainError);
}

TEST_CASE("erf_complex against the series oracle on a ring of hard points") {
  // Points where the two evaluation regimes meet.
  for (double r : {1.9, 2.0, 2.1, 3.9, 4.0, 4.1, 6.2, 6.3, 6.4, 7.99})
    for (int k = 0; k < 24; ++k) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / 24.0 + 0.01);
      CHECK(rel(erf_complex(z), oracle::erf_series(z)) <= 1e-10);
    }
}

TEST_CASE("erf_complex symmetries") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  int tested = 0;
  while (tested < 1000) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) > 8.0) continue;
    ++tested;
    const Complex w = erf_complex(z);
    const double scale = std::max(1.0, std::abs(w));
    CHECK(std::abs(erf_complex(-z) + w) / scale <= 1e-12);
    CHECK(std::abs(erf_complex(std::conj(z)) - std::conj(w)) / scale <= 1e-12);
  }
}

TEST_CASE("faddeeva_w basic values") {
  CHECK(std::abs(faddeeva_w(0.0) - Complex(1.0)) < 1e-15);
  // w(iy) = exp(y^2) erfc(y) for real y.
  for (double y : {0.5, 1.0, 3.0, 10.0, 40.0}) {
    const double want = static_cast<double>(exp(oracle::mp_real(y) * y) * boost::math::erfc(oracle::mp_real(y)));
    CHECK(faddeeva_w(Complex(0.0, y)).real() == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("DetectorParams validation") {
  CHECK_NOTHROW(DetectorParams{}.validate());
  CHECK_THROWS_AS((DetectorParams{0.0, 1.0, 1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((DetectorParams{1e-2, -1.0, 1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((DetectorParams{1e-2, 1.0, -1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS(compute_elements(DetectorParams{1e-2, 1.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("excitation probability") {
  CHECK(excitation_probability_scaled(1.0) == doctest::Approx(oracle::excitation_probability(1.0)).epsilon(1e-12));
  CHECK(excitation_probability_scaled(1.0) == doctest::Approx(7.088e-3).epsilon(1e-4));
  CHECK(excitation_probability_scaled(0.0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-15));
  for (double s : {0.01, 0.25, 2.0, 4.0, 8.0, 20.0})
    CHECK(excitation_probability_scaled(s) == doctest::Approx(oracle::excitation_probability(s)).epsilon(1e-10));
  const XStateElements e = compute_elements(DetectorParams{1e-2, 2.0, 0.5, 3.0});
  CHECK(e.a_prob == doctest::Approx(1e-4 * oracle::excitation_probability(1.0)).epsilon(1e-12));
  CHECK(e.a_prob == e.b_prob);
}

TEST_CASE("X and C match the literal erf expressions") {
  for (double sigma : {0.5, 1.0, 2.0})
    for (double os : {0.25, 1.0, 2.5, 4.0})
      for (double ls : {0.1, 0.25, 1.0, 3.0, 8.0}) {
        const XStateElements e = compute_elements(DetectorParams{1e-2, sigma, os / sigma, ls * sigma});
        const Complex x = oracle::detector_x(1e-2, sigma, os / sigma, ls * sigma);
        const double c = oracle::detector_c(1e-2, sigma, os / sigma, ls * sigma);
        CHECK(rel(e.x_coh, x) <= 1e-10);
        CHECK(std::abs(e.c_corr.real() - c) <= 1e-10 * std::abs(c));
        CHECK(e.c_corr.imag() == 0.0);
        CHECK(e.e_joint == doctest::Approx(std::norm(x) + e.a_prob * e.a_prob + 2.0 * c * c).epsilon(1e-12));
      }
}

TEST_CASE("large separation factorizes") {
  // Elements decay like exp(-(Omega sigma)^2) times a power of sigma/L, so the
  // 1e-12 level is reached once Omega sigma is a few units.
  const double eps0 = 1e-2;
  const XStateElements far = compute_elements(DetectorParams{eps0, 1.0, 5.0, 64.0});
  CHECK(std::abs(far.x_coh) / (eps0 * eps0) < 1e-12);
  CHECK(std::abs(far.c_corr) / (eps0 * eps0) < 1e-12);
  for (double os : {0.25, 1.0, 4.0}) {
    const XStateElements e = compute_elements(DetectorParams{eps0, 1.0, os, 64.0});
    CHECK(std::abs(e.e_joint - e.a_prob * e.a_prob) <= std::pow(eps0, 6));
    CHECK(std::isfinite(std::abs(e.x_coh)));
    CHECK(std::abs(e.x_coh) < std::abs(compute_elements(DetectorParams{eps0, 1.0, os, 16.0}).x_coh));
    CHECK(std::abs(e.c_corr) < std::abs(compute_elements(DetectorParams{eps0, 1.0, os, 16.0}).c_corr));
  }
}

TEST_CASE("assemble_rho") {
  const double a = 0.2;
  const AssembledState prod = assemble_rho(handmade(a, 0.0, 0.0, a * a, 1e-2));
  Matrix single = Matrix::Zero(2, 2);
  single(0, 0) = 1.0 - a;
  single(1, 1) = a;
  CHECK(max_abs(prod.state.matrix() - tensor_product(single, single)) < 1e-15);
  CHECK_FALSE(prod.clipped);

  for (double os : {0.3, 1.0, 3.0})
    for (double ls : {0.2, 1.0, 5.0}) {
      const XStateElements e = compute_elements(DetectorParams{1e-2, 1.0, os, ls});
      const AssembledState s = assemble_rho(e);
      Matrix marginal = Matrix::Zero(2, 2);
      marginal(0, 0) = 1.0 - e.a_prob;
      marginal(1, 1) = e.a_prob;
      CHECK(max_abs(partial_trace(s.state, Subsystem::A).matrix() - marginal) <= 10.0 * std::pow(1e-2, 4));
      CHECK(validate_density(s.state.matrix(), 1e-10).passed());
    }

  // Slightly negative outer block: clipped, still a valid state.
  const AssembledState clip = assemble_rho(handmade(1e-4, 1e-4 + 1e-9, 0.0, 0.0, 1e-2));
  CHECK(clip.clipped);
  CHECK(validate_density(clip.state.matrix(), 1e-12).passed());
  // Far outside the slack: rejected.
  CHECK_THROWS_AS(assemble_rho(handmade(1e-4, 0.1, 0.0, 0.0, 1e-2)), InvalidStateError);
}

TEST_CASE("xstate_concurrence") {
  CHECK(xstate_concurrence(handmade(1e-3, 1e-3, 0.0, 1e-6, 1e-2)) == 0.0);
  CHECK(xstate_concurrence(handmade(1e-3, 2e-3, 0.0, 5e-6, 1e-2)) == doctest::Approx(2e-3));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double eps0 = 1e-2;
    // A/eps0^2 ranges over (0, 1/4pi] for the detector; |X| up to 10 A.
    const double a = eps0 * eps0 * (0.005 + u(rng) * (1.0 / (4.0 * std::numbers::pi) - 0.005));
    const Complex x = std::polar(10.0 * a * u(rng), 2.0 * std::numbers::pi * u(rng));
    const double c = a * u(rng);
    const XStateElements e = handmade(a, x, c, std::norm(x) + a * a + 2.0 * c * c, eps0);
    CHECK(std::abs(xstate_concurrence(e) - concurrence_wootters(assemble_rho(e).state)) <= 10.0 * std::pow(eps0, 4));
  }
}

TEST_CASE("entanglement flags") {
  CHECK(xstate_entanglement_flags(handmade(1e-4, 2e-4, 0.0, 5e-8, 1e-2)).cond1);
  CHECK(xstate_entanglement_flags(handmade(0.1, 0.0, 0.09, 1e-4, 1e-2)).cond2);
  for (double os : SweepGrid::linspace(0.25, 4.0, 20))
    for (double ls : SweepGrid::linspace(0.25, 8.0, 20))
      CHECK_FALSE(xstate_entanglement_flags(compute_elements(DetectorParams{1e-2, 1.0, os, ls})).cond2);
}

TEST_CASE("corr_coefficient") {
  XStateElements e = handmade(0.3, 0.0, 0.0, 0.09, 1e-2);
  CHECK(corr_coefficient(e) == doctest::Approx(0.0));
  e.b_prob = 0.2;
  e.e_joint = 0.06;
  CHECK(std::abs(corr_coefficient(e)) < 1e-15);
  CHECK_THROWS_AS(corr_coefficient(handmade(0.0, 0.0, 0.0, 0.0, 1e-2)), DomainError);

  // Against the covariance of the joint excitation outcomes read off the diagonal.
  for (double os : {0.5, 1.5})
    for (double ls : {0.3, 2.0}) {
      const XStateElements d = compute_elements(DetectorParams{1e-2, 1.0, os, ls});
      const Matrix m = assemble_rho(d).state.matrix();
      const double p11 = m(3, 3).real(), pa = m(2, 2).real() + p11, pb = m(1, 1).real() + p11;
      const double direct = (p11 - pa * pb) / std::sqrt(pa * (1 - pa) * pb * (1 - pb));
      CHECK(std::abs(corr_coefficient(d) - direct) <= 1e-12);
      CHECK(corr_coefficient_leading(d) == doctest::Approx(corr_coefficient(d)).epsilon(1e-3));
    }
}

TEST_CASE("d3_closed_form") {
  CHECK(d3_closed_form(handmade(1e-4, 0.0, 0.0, 1e-8, 1e-2)) == 0.0);
  CHECK(d3_closed_form(handmade(1e-4, 0.0, 1e-4, 3e-8, 1e-2)) == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK_THROWS_AS(d3_closed_form(handmade(0.0, 0.0, 0.0, 0.0, 1e-2)), DomainError);

  // The literal (A+C)log(A+C) + (A-C)log(A-C) - 2A log A at moderate ratios.
  for (double r : {0.05, 0.2, 0.5, 0.9, 0.999}) {
    const double a = 1e-3, c = r * a;
    const double lit = (a + c) * std::log2(a + c) + (a - c) * std::log2(a - c) - 2.0 * a * std::log2(a);
    CHECK(d3_closed_form(handmade(a, 0.0, c, a * a + 2 * c * c, 1e-2)) == doctest::Approx(lit).epsilon(1e-10));
  }
  // Tiny ratio: the series branch keeps full relative precision, roughly A r^2 / ln 2.
  const double a = 1e-4, r = 1e-6;
  CHECK(d3_closed_form(handmade(a, 0.0, r * a, a * a, 1e-2)) ==
        doctest::Approx(a * r * r / std::numbers::ln2).epsilon(1e-9));

  for (double os : {0.5, 2.0})
    for (double ls : {0.5, 4.0}) {
      const XStateElements e = compute_elements(DetectorParams{1e-2, 1.0, os, ls});
      CHECK(std::abs(d3_closed_form(e) - discord_d3(assemble_rho(e).state).value) <= 10.0 * std::pow(1e-2, 4));
    }
}

TEST_CASE("local eigenbasis of the detector state is computational") {
  const XStateElements e = compute_elements(DetectorParams{1e-2, 1.0, 1.0, 1.0});
  const LocalBasis lb = local_eigenbasis(assemble_rho(e).state);
  CHECK_FALSE(lb.degenerate);
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  CHECK(max_abs(lb.measurement.projectors()[0] - p0) < 1e-14);
}

TEST_CASE("perturbative range advisory") {
  CHECK_FALSE(exceeds_perturbative_range(compute_elements(DetectorParams{1e-2, 1.0, 1.0, 1.0})));
  CHECK(exceeds_perturbative_range(compute_elements(DetectorParams{5.0, 1.0, 0.0, 1.0})));
}

TEST_CASE("sweep") {
  const SweepGrid one{{1.0}, {1.0}, 1e-2};
  const auto rows = sweep(one);
  REQUIRE(rows.size() == 1);
  const XStateElements e = compute_elements(DetectorParams{1e-2, 1.0, 1.0, 1.0});
  CHECK(rows[0].a_prob == e.a_prob);
  CHECK(rows[0].abs_x == std::abs(e.x_coh));
  CHECK(rows[0].flag == RowFlag::Ok);
  CHECK(rows[0].a_prob == doctest::Approx(7.088e-7).epsilon(1e-4));

  const SweepGrid grid{SweepGrid::linspace(0.25, 4.0, 20), SweepGrid::linspace(0.25, 8.0, 20), 1e-2};
  const auto table = sweep(grid, 3);
  REQUIRE(table.size() == 400);
  CHECK(table == sweep(grid, 1));
  bool transition = false;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j + 1 < 20; ++j)
      transition |= (table[i * 20 + j].concurrence > 0.0) != (table[i * 20 + j + 1].concurrence > 0.0);
  CHECK(transition);
  for (const auto& r : table)
    if (r.flag != RowFlag::Invalid) CHECK(r.d3_over_eps0_sq > 0.0);

  // Fixed Omega sigma, growing distance: entanglement dies, discord stays.
  const auto line = sweep(SweepGrid{{1.0}, SweepGrid::linspace(0.1, 30.0, 60), 1e-2});
  CHECK(line.front().concurrence > 0.0);
  CHECK(line.back().concurrence == 0.0);
  for (const auto& r : line) CHECK(r.d3_over_eps0_sq > 0.0);

  CHECK_THROWS_AS(sweep(SweepGrid{{1.0}, {1e-4}, 1e-2}), DomainError);
  CHECK_THROWS_AS(sweep(SweepGrid{{-1.0}, {1.0}, 1e-2}), DomainError);
}

TEST_CASE("sweep flags failing points instead of aborting") {
  // eps0 = 20 pushes A past 1, which assemble_rho rejects.
  const auto rows = sweep(SweepGrid{{1.0}, {1.0, 2.0}, 20.0});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.flag == RowFlag::Invalid);
    CHECK(r.a_prob == 0.0);
  }
}

TEST_CASE("entanglement boundary brackets the sign change of |X| - A") {
  const double os = 1.0;
  const double l_star = entanglement_boundary(os, 0.1, 30.0);
  const auto g = [&](double l) {
    const XStateElements e = compute_elements(DetectorParams{1.0, 1.0, os, l});
    return std::abs(e.x_coh) - e.a_prob;
  };
  CHECK(g(l_star * (1 - 1e-6)) > 0.0);
  CHECK(g(l_star * (1 + 1e-6)) < 0.0);
  const auto rows = sweep(SweepGrid{{os}, SweepGrid::linspace(0.1, 30.0, 300), 1e-2});
  for (std::size_t j = 0; j + 1 < rows.size(); ++j)
    if ((rows[j].abs_x > rows[j].a_prob) != (rows[j + 1].abs_x > rows[j + 1].a_prob)) {
      CHECK(rows[j].l_over_sigma <= l_star);
      CHECK(rows[j + 1].l_over_sigma >= l_star);
    }
  CHECK_THROWS_AS(entanglement_boundary(os, 20.0, 30.0), DomainError);
}

namespace {

double closed_form_gap(double eps0) {
  double worst = 0.0;
  for (double os : SweepGrid::linspace(0.25, 4.0, 10))
    for (double ls : SweepGrid::linspace(0.25, 8.0, 10)) {
      const XStateElements e = compute_elements(DetectorParams{eps0, 1.0, os, ls});
      worst = std::max(worst, std::abs(d3_closed_form(e) - discord_d3(assemble_rho(e).state).value));
    }
  return worst;
}

}  // namespace

// The closed form drops terms of order eps0^4 log(1/eps0); at eps0 = 1e-3 the
// worst grid point lands near 1.4e-11, just over the flat 10 eps0^4 budget.
TEST_CASE("closed-form D3 within 10 eps0^4 at eps0 1e-3" * doctest::may_fail()) {
  CHECK(closed_form_gap(1e-3) <= 10.0 * std::pow(1e-3, 4));
}

TEST_CASE("closed-form D3 gap scales like eps0^4 log(1/eps0)") {
  for (double eps0 : {1e-2, 1e-3}) {
    const double gap = closed_form_gap(eps0);
    CHECK(gap <= 10.0 * std::pow(eps0, 4) * std::log(1.0 / eps0));
    CHECK(gap >= 0.1 * std::pow(eps0, 4));
  }
  CHECK(closed_form_gap(1e-2) <= 10.0 * std::pow(1e-2, 4));
}
