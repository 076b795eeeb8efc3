#include "qcorr/verify.hpp"

#include "qcorr/detector.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace qcorr {

namespace {

constexpr int kSamples = 100;

struct Context {
  std::uint64_t seed;
  double scale;

  std::uint64_t sub(std::uint64_t k) const {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + k + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

std::string sci(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.3e", label, v);
  return buf;
}

CheckResult bounded(std::string suite, std::string name, double worst, double tol, const Context& ctx) {
  const double limit = tol * ctx.scale;
  return {std::move(suite), std::move(name), worst <= limit, sci("worst", worst) + " " + sci("tol", limit)};
}

BipartiteState random_bipartite(int da, int db, std::uint64_t seed) {
  const int rank = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(da * db));
  return BipartiteState(random_state(da * db, rank, seed), da, db);
}

std::pair<int, int> random_dims(std::uint64_t seed, int max_dim) {
  return {2 + static_cast<int>(seed % static_cast<std::uint64_t>(max_dim - 1)),
          2 + static_cast<int>((seed / 7) % static_cast<std::uint64_t>(max_dim - 1))};
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> core_suite(const Context& ctx) {
  const std::string s = "core";
  std::vector<CheckResult> out;

  double worst = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    auto [da, db] = random_dims(ctx.sub(k), 4);
    const DensityMatrix ra = random_state(da, da, ctx.sub(1000 + k));
    const DensityMatrix rb = random_state(db, db, ctx.sub(2000 + k));
    const BipartiteState prod(tensor_product(ra.matrix(), rb.matrix()), da, db, 1e-9);
    worst = std::max({worst, max_abs(partial_trace(prod, Subsystem::A).matrix() - ra.matrix()),
                      max_abs(partial_trace(prod, Subsystem::B).matrix() - rb.matrix())});
  }
  out.push_back(bounded(s, "partial_trace_of_product", worst, 1e-12, ctx));

  worst = 0.0;
  double trace_worst = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    auto [da, db] = random_dims(ctx.sub(3000 + k), 4);
    const BipartiteState rho = random_bipartite(da, db, ctx.sub(4000 + k));
    const Matrix twice =
        partial_transpose(partial_transpose(rho, Subsystem::B), da, db, Subsystem::B);
    worst = std::max(worst, max_abs(twice - rho.matrix()));
    for (auto keep : {Subsystem::A, Subsystem::B})
      trace_worst = std::max(trace_worst, std::abs(partial_trace(rho, keep).matrix().trace() - rho.matrix().trace()));
  }
  out.push_back(bounded(s, "partial_transpose_involution", worst, 0.0, ctx));
  out.push_back(bounded(s, "partial_trace_preserves_trace", trace_worst, 1e-12, ctx));

  double recon = 0.0, ortho = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const int d = 1 + static_cast<int>(ctx.sub(5000 + k) % 9);
    const Matrix g = random_unitary(d, ctx.sub(6000 + k)) * Complex(0.3, 0.7) + random_unitary(d, ctx.sub(7000 + k));
    const Matrix h = g + g.adjoint();
    const Spectrum sp = eig_hermitian(h);
    recon = std::max(recon, max_abs(h - sp.vectors * sp.values.asDiagonal() * sp.vectors.adjoint()));
    ortho = std::max(ortho, max_abs(sp.vectors.adjoint() * sp.vectors - Matrix::Identity(d, d)));
  }
  out.push_back(bounded(s, "eig_reconstruction", recon, 1e-9, ctx));
  out.push_back(bounded(s, "eig_orthonormality", ortho, 1e-9, ctx));

  // Factory outputs.
  std::vector<BipartiteState> factory;
  for (double p : {0.0, 0.25, 1.0 / 3.0, 0.5, 0.9, 1.0}) factory.push_back(werner(p));
  factory.push_back(bound_entangled_tiles());
  factory.push_back(pseudo_pure(random_pure(8, ctx.sub(8000)), 0.3, 3));
  factory.push_back(classical_bipartite((Eigen::MatrixXd(2, 3) << 0.1, 0.2, 0.05, 0.3, 0.15, 0.2).finished()));
  StateSpec cq{StateFamily::Cq, {{"alphas", {0.5, 0.3, 0.2}}}, std::nullopt};
  factory.push_back(make_state(cq));
  double fworst = 0.0;
  for (const auto& st : factory) {
    const DensityReport r = validate_density(st.matrix());
    fworst = std::max({fworst, r.hermiticity_defect, r.trace_defect, -r.min_eigenvalue});
  }
  out.push_back(bounded(s, "factory_outputs_valid", fworst, 1e-10, ctx));

  const TileBasis tiles = tile_basis();
  double overlap = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double ip = std::abs(tiles.tiles[static_cast<std::size_t>(i)].dot(tiles.tiles[static_cast<std::size_t>(j)]));
      overlap = std::max(overlap, i == j ? std::abs(ip - 1.0) : ip);
    }
  out.push_back(bounded(s, "tile_orthonormality", overlap, 1e-12, ctx));

  double pp = 0.0;
  for (double p : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0})
    pp = std::max(pp, max_abs(pseudo_pure(singlet(), p, 2).matrix() - werner(p).matrix()));
  out.push_back(bounded(s, "pseudo_pure_singlet_is_werner", pp, 1e-15, ctx));

  const double below = concurrence_wootters(werner(1.0 / 3.0 - 1e-6));
  const double above = concurrence_wootters(werner(1.0 / 3.0 + 1e-6));
  out.push_back({s, "werner_entanglement_threshold", below <= 1e-8 * ctx.scale && above > 1e-8 * ctx.scale,
                 sci("below", below) + " " + sci("above", above)});
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> measures_suite(const Context& ctx) {
  const std::string s = "measures";
  std::vector<CheckResult> out;

  double neg = 0.0, unitary = 0.0, additive = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const int d = 2 + static_cast<int>(ctx.sub(k) % 4);
    const DensityMatrix rho = random_state(d, 1 + static_cast<int>(ctx.sub(k + 50) % static_cast<std::uint64_t>(d)), ctx.sub(100 + k));
    const DensityMatrix sigma = random_state(2, 2, ctx.sub(200 + k));
    const Matrix u = random_unitary(d, ctx.sub(300 + k));
    const double sr = vn_entropy(rho);
    neg = std::max(neg, -sr);
    unitary = std::max(unitary, std::abs(vn_entropy(DensityMatrix(u * rho.matrix() * u.adjoint(), 1e-9)) - sr));
    additive = std::max(additive, std::abs(vn_entropy(DensityMatrix(tensor_product(rho.matrix(), sigma.matrix()), 1e-9)) -
                                           sr - vn_entropy(sigma)));
  }
  out.push_back(bounded(s, "entropy_nonnegative", neg, 0.0, ctx));
  out.push_back(bounded(s, "entropy_unitary_invariance", unitary, 1e-9, ctx));
  out.push_back(bounded(s, "entropy_additivity", additive, 1e-9, ctx));

  double prod = 0.0, uni = 0.0, mono = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const int d = 2 + static_cast<int>(ctx.sub(400 + k) % 3);
    const DensityMatrix r1 = random_state(d, d, ctx.sub(500 + k)), r2 = random_state(d, d, ctx.sub(600 + k));
    const DensityMatrix s1 = random_state(2, 2, ctx.sub(700 + k)), s2 = random_state(2, 2, ctx.sub(800 + k));
    const double f = fidelity(r1, r2);
    const double fp = fidelity(DensityMatrix(tensor_product(r1.matrix(), s1.matrix()), 1e-9),
                               DensityMatrix(tensor_product(r2.matrix(), s2.matrix()), 1e-9));
    prod = std::max(prod, std::abs(fp - f * fidelity(s1, s2)));
    const Matrix u = random_unitary(d, ctx.sub(900 + k));
    uni = std::max(uni, std::abs(fidelity(DensityMatrix(u * r1.matrix() * u.adjoint(), 1e-9),
                                          DensityMatrix(u * r2.matrix() * u.adjoint(), 1e-9)) - f));
    const Channel ch = random_channel(d, 1 + static_cast<int>(ctx.sub(1000 + k) % 4), ctx.sub(1100 + k));
    mono = std::max(mono, f - fidelity(ch.apply(r1), ch.apply(r2)));
  }
  out.push_back(bounded(s, "fidelity_multiplicative", prod, 1e-8, ctx));
  out.push_back(bounded(s, "fidelity_unitary_invariance", uni, 1e-8, ctx));
  out.push_back(bounded(s, "fidelity_monotone_under_channels", mono, 1e-8, ctx));

  // Measure-and-record channel on pure inputs: pointer branches are orthogonal.
  double branch = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const int d = 2 + static_cast<int>(ctx.sub(1200 + k) % 2);
    const int outcomes = 2 + static_cast<int>(ctx.sub(1300 + k) % 3);
    const Matrix v = random_channel(d, outcomes, ctx.sub(1400 + k)).isometry();
    const PureVector a1 = random_pure(d, ctx.sub(1500 + k)), a2 = random_pure(d, ctx.sub(1600 + k));
    Matrix o1 = Matrix::Zero(d * outcomes, d * outcomes), o2 = o1;
    double expected = 0.0;
    for (int kk = 0; kk < outcomes; ++kk) {
      Matrix kraus(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) kraus(i, j) = v(i * outcomes + kk, j);
      const Vector b1 = kraus * a1, b2 = kraus * a2;
      Matrix pointer = Matrix::Zero(outcomes, outcomes);
      pointer(kk, kk) = 1.0;
      o1 += tensor_product(b1 * b1.adjoint(), pointer);
      o2 += tensor_product(b2 * b2.adjoint(), pointer);
      expected += std::abs(b1.dot(b2));  // sqrt(p1 p2) |<a1^k|a2^k>|
    }
    branch = std::max(branch, std::abs(fidelity(DensityMatrix(o1, 1e-9), DensityMatrix(o2, 1e-9)) - expected));
  }
  out.push_back(bounded(s, "pointer_branch_fidelity", branch, 1e-8, ctx));

  double pure = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    auto [da, db] = random_dims(ctx.sub(1700 + k), 3);
    const PureVector psi = random_pure(da * db, ctx.sub(1800 + k));
    const BipartiteState rho(DensityMatrix::from_pure(psi), da, db);
    pure = std::max(pure, std::abs(mutual_information(rho) - 2.0 * entanglement_entropy(psi, da, db)));
  }
  out.push_back(bounded(s, "pure_state_I_equals_2E", pure, 1e-9, ctx));

  double two_forms = 0.0, dephase = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    auto [da, db] = random_dims(ctx.sub(1900 + k), 3);
    const BipartiteState rho = random_bipartite(da, db, ctx.sub(2000 + k));
    const LocalBasis local = local_eigenbasis(rho);
    const BipartiteState dephased = dephase_local(rho, local.measurement);
    const double d3 = discord_d3(rho).value;
    two_forms = std::max(two_forms, std::abs(d3 - (vn_entropy(dephased.density()) - vn_entropy(rho.density()))));
    dephase = std::max(dephase, mutual_information(dephased) - mutual_information(rho));
  }
  out.push_back(bounded(s, "d3_two_formula_agreement", two_forms, 1e-9, ctx));
  out.push_back(bounded(s, "dephasing_does_not_raise_mutual_information", dephase, 1e-9, ctx));

  double above = -1.0;
  for (int k = 0; k < kSamples; ++k) {
    const BipartiteState rho = random_bipartite(2, 2, ctx.sub(2100 + k));
    above = std::max(above, discord_projective_opt(rho).value - discord_d3(rho).value);
  }
  out.push_back(bounded(s, "optimized_discord_below_d3", above, 1e-6, ctx));

  int mismatches = 0;
  for (int k = 0; k < kSamples; ++k) {
    const BipartiteState rho = random_bipartite(2, 2, ctx.sub(2200 + k));
    const bool entangled = concurrence_wootters(rho) > 1e-8;
    if (entangled == ppt_check(rho).is_ppt) ++mismatches;
  }
  out.push_back({s, "two_qubit_concurrence_matches_ppt", mismatches == 0 && ctx.scale > 0.0,
                 "mismatches=" + std::to_string(mismatches)});
  return out;
}

// ---------------------------------------------------------------------------

struct GridAgreement {
  double d3 = 0.0;
  double concurrence = 0.0;
  bool cond2 = false;
  bool psd = true;
  bool zero_concurrence_with_discord = false;
};

GridAgreement detector_grid(double eps0) {
  GridAgreement g;
  for (double os : SweepGrid::linspace(0.25, 4.0, 10))
    for (double ls : SweepGrid::linspace(0.25, 8.0, 10)) {
      const XStateElements e = compute_elements(DetectorParams{eps0, 1.0, os, ls});
      const AssembledState st = assemble_rho(e);
      g.psd = g.psd && validate_density(st.state.matrix()).passed();
      g.d3 = std::max(g.d3, std::abs(d3_closed_form(e) - discord_d3(st.state).value));
      g.concurrence = std::max(g.concurrence, std::abs(xstate_concurrence(e) - concurrence_wootters(st.state)));
      g.cond2 = g.cond2 || xstate_entanglement_flags(e).cond2;
      if (xstate_concurrence(e) == 0.0 && d3_closed_form(e) > 0.0) g.zero_concurrence_with_discord = true;
    }
  return g;
}

std::vector<CheckResult> detector_suite(const Context& ctx) {
  const std::string s = "detector";
  std::vector<CheckResult> out;

  const GridAgreement g2 = detector_grid(1e-2);
  const GridAgreement g3 = detector_grid(1e-3);
  out.push_back(bounded(s, "d3_closed_form_agreement_eps0_1e-2", g2.d3, 10e-8, ctx));
  const double ratio = g3.d3 > 0.0 ? g2.d3 / g3.d3 : INFINITY;
  out.push_back({s, "d3_closed_form_discrepancy_shrinks", ratio >= 50.0 * ctx.scale,
                 sci("ratio", ratio) + " (eps0 1e-2 -> 1e-3)"});
  out.push_back(bounded(s, "concurrence_agreement_eps0_1e-2", g2.concurrence, 10e-8, ctx));
  out.push_back(bounded(s, "concurrence_agreement_eps0_1e-3", g3.concurrence, 10e-12, ctx));
  out.push_back({s, "second_ppt_alternative_never_holds", !g2.cond2 && !g3.cond2 && ctx.scale > 0.0, ""});
  out.push_back({s, "assembled_states_valid", g2.psd && g3.psd && ctx.scale > 0.0, ""});
  out.push_back({s, "zero_concurrence_region_with_discord", g2.zero_concurrence_with_discord && ctx.scale > 0.0, ""});

  double mi = 0.0;
  for (double eps0 : {1e-2, 1e-3})
    for (double os : SweepGrid::linspace(0.25, 4.0, 10)) {
      const XStateElements e = compute_elements(DetectorParams{eps0, 1.0, os, 64.0});
      mi = std::max(mi, mutual_information(assemble_rho(e).state) - 4.0 * std::pow(eps0, 4));
    }
  out.push_back(bounded(s, "factorization_at_large_separation", mi, 1e-10, ctx));

  std::mt19937_64 rng(ctx.sub(1));
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 2.0 * M_PI);
  double sym = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Complex z = std::polar(8.0 * std::sqrt(radius(rng)), angle(rng));
    const Complex w = erf_complex(z);
    const double scale = std::max(1.0, std::abs(w));
    sym = std::max({sym, std::abs(erf_complex(-z) + w) / scale, std::abs(erf_complex(std::conj(z)) - std::conj(w)) / scale});
  }
  out.push_back(bounded(s, "erf_symmetries", sym, 1e-12, ctx));

  SweepGrid grid{SweepGrid::linspace(0.25, 4.0, 20), SweepGrid::linspace(0.05, 16.0, 20), 1e-2};
  bool positive = true;
  for (const auto& row : sweep(grid))
    if (row.flag != RowFlag::Invalid && row.c_corr != 0.0 && !(row.d3_over_eps0_sq > 0.0)) positive = false;
  out.push_back({s, "d3_positive_whenever_c_nonzero", positive && ctx.scale > 0.0, "grid 20x20"});
  return out;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const Context ctx{options.seed, options.tolerance_scale};
  const std::string& suite = options.suite;
  if (suite != "all" && suite != "core" && suite != "measures" && suite != "detector")
    throw DomainError("unknown verification suite '" + suite + "'");
  std::vector<CheckResult> results;
  auto add = [&](std::vector<CheckResult> part) { results.insert(results.end(), part.begin(), part.end()); };
  if (suite == "all" || suite == "core") add(core_suite(ctx));
  if (suite == "all" || suite == "measures") add(measures_suite(ctx));
  if (suite == "all" || suite == "detector") add(detector_suite(ctx));
  return results;
}

bool report_verification(const std::vector<CheckResult>& results, std::ostream& out) {
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << " passed, " << failed << " failed\n";
  return failed == 0;
}

}  // namespace qcorr
