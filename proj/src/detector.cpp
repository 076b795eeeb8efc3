#include "qcorr/detector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace qcorr {

void DetectorParams::validate() const {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw DomainError("eps0 must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be non-negative");
  if (!(distance_l > 0.0) || !std::isfinite(distance_l))
    throw DomainError("distance_l must be positive (X and C diverge at L = 0)");
}

double XStateElements::slack() const { return 10.0 * std::pow(eps0, 4); }

double excitation_probability_scaled(double omega_sigma) {
  if (!(omega_sigma >= 0.0)) throw DomainError("omega_sigma must be non-negative");
  const double s = omega_sigma;
  // erfc(s) = exp(-s^2) erfcx(s), erfcx(s) = w(is).
  const double erfcx = faddeeva_w(Complex(0.0, s)).real();
  return std::exp(-s * s) * (1.0 - std::sqrt(std::numbers::pi) * s * erfcx) / (4.0 * std::numbers::pi);
}

XStateElements compute_elements(const DetectorParams& p) {
  p.validate();
  const double a = p.sigma * p.omega;          // sigma * Omega
  const double b = p.distance_l / (2.0 * p.sigma);  // L / (2 sigma)
  const double eps2 = p.eps0 * p.eps0;
  const double pref = eps2 / (4.0 * std::sqrt(std::numbers::pi)) * (p.sigma / p.distance_l);
  const double damp = std::exp(-a * a);

  XStateElements e;
  e.eps0 = p.eps0;
  e.a_prob = eps2 * excitation_probability_scaled(a);
  e.b_prob = e.a_prob;
  // exp(-b^2) [1 + erf(ib)] = 2 exp(-b^2) - w(-b); finite for every b.
  e.x_coh = pref * Complex(0.0, 1.0) * damp * (2.0 * std::exp(-b * b) - faddeeva_w(Complex(-b, 0.0)));
  // exp(-b^2) Im[e^{i Omega L} erf(ib + a)] - exp(-b^2) sin(Omega L) = -exp(-a^2) Im w(-b + ia).
  e.c_corr = Complex(-pref * damp * faddeeva_w(Complex(-b, a)).imag(), 0.0);
  e.e_joint = std::norm(e.x_coh) + e.a_prob * e.a_prob + 2.0 * std::norm(e.c_corr);
  return e;
}

bool exceeds_perturbative_range(const XStateElements& e) { return e.a_prob > 0.1; }

namespace {

struct Block {
  double p;
  double q;
  Complex off;
};

// Replaces a 2x2 Hermitian block [[p, off], [off*, q]] by its PSD part when the
// small eigenvalue is negative. Returns true when clipping happened.
bool clip_block(Block& blk, double slack) {
  const double half_tr = 0.5 * (blk.p + blk.q);
  const double radius = std::hypot(0.5 * (blk.p - blk.q), std::abs(blk.off));
  const double big = half_tr + radius;
  const double det = blk.p * blk.q - std::norm(blk.off);
  const double small = big > 0.0 ? det / big : half_tr - radius;
  if (big < -slack || small < -slack)
    throw InvalidStateError("assemble_rho: eigenvalue below the truncation slack");
  if (small >= 0.0) return false;
  if (big <= 0.0) {
    blk = {0.0, 0.0, 0.0};
    return true;
  }
  // Eigenvector of `big`: (off, big - p) or (big - q, off*), whichever is larger.
  Complex v0 = blk.off, v1 = big - blk.p;
  if (std::abs(big - blk.q) > std::abs(v1)) v0 = big - blk.q, v1 = std::conj(blk.off);
  const double n2 = std::norm(v0) + std::norm(v1);
  blk = {big * std::norm(v0) / n2, big * std::norm(v1) / n2, big * v0 * std::conj(v1) / n2};
  return true;
}

}  // namespace

AssembledState assemble_rho(const XStateElements& e) {
  const double tol = e.slack();
  if (!std::isfinite(e.a_prob) || !std::isfinite(e.b_prob) || !std::isfinite(e.e_joint) ||
      !std::isfinite(e.x_coh.real()) || !std::isfinite(e.x_coh.imag()) || !std::isfinite(e.c_corr.real()) ||
      !std::isfinite(e.c_corr.imag()))
    throw InvalidStateError("assemble_rho: non-finite elements");
  if (e.a_prob < 0.0 || e.a_prob > 1.0 || e.b_prob < 0.0 || e.b_prob > 1.0 || e.e_joint < 0.0)
    throw InvalidStateError("assemble_rho: probabilities out of range");

  Block outer{1.0 - e.a_prob - e.b_prob + e.e_joint, e.e_joint, e.x_coh};
  Block inner{e.b_prob - e.e_joint, e.a_prob - e.e_joint, e.c_corr};
  bool clipped = clip_block(outer, tol);
  clipped = clip_block(inner, tol) || clipped;

  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = outer.p;
  m(3, 3) = outer.q;
  m(0, 3) = outer.off;
  m(3, 0) = std::conj(outer.off);
  m(1, 1) = inner.p;
  m(2, 2) = inner.q;
  m(1, 2) = inner.off;
  m(2, 1) = std::conj(inner.off);
  if (clipped) m /= m.trace().real();
  return AssembledState{BipartiteState(std::move(m), 2, 2), clipped};
}

double xstate_concurrence(const XStateElements& e) { return 2.0 * std::max(0.0, std::abs(e.x_coh) - e.a_prob); }

EntanglementFlags xstate_entanglement_flags(const XStateElements& e) {
  return EntanglementFlags{std::abs(e.x_coh) > e.a_prob - e.slack(), std::abs(e.c_corr) > std::sqrt(e.e_joint)};
}

double corr_coefficient(const XStateElements& e) {
  if (!(e.a_prob > 0.0 && e.a_prob < 1.0 && e.b_prob > 0.0 && e.b_prob < 1.0))
    throw DomainError("corr_coefficient: outcome variances vanish");
  return (e.e_joint - e.a_prob * e.b_prob) /
         std::sqrt(e.a_prob * (1.0 - e.a_prob) * e.b_prob * (1.0 - e.b_prob));
}

double corr_coefficient_leading(const XStateElements& e) {
  if (!(e.a_prob > 0.0)) throw DomainError("corr_coefficient_leading: A must be positive");
  return (std::norm(e.x_coh) + 2.0 * std::norm(e.c_corr)) / e.a_prob;
}

double d3_closed_form(const XStateElements& e) {
  const double a = e.a_prob;
  if (!(a > 0.0)) throw DomainError("d3_closed_form: A must be positive");
  double r = std::abs(e.c_corr) / a;
  if (r > 1.0 + 1e-12) throw DomainError("d3_closed_form: |C| exceeds A");
  r = std::min(r, 1.0);
  // Factor out A: D3 = A [(1+r) ln(1+r) + (1-r) ln(1-r)] / ln 2.
  double g;
  if (r < 0.1) {
    // sum_k r^{2k} / (k (2k - 1))
    const double r2 = r * r;
    double power = r2;
    g = 0.0;
    for (int k = 1; k < 40; ++k) {
      const double term = power / (k * (2.0 * k - 1.0));
      g += term;
      if (term <= 1e-18 * g) break;
      power *= r2;
    }
  } else if (r == 1.0) {
    g = 2.0 * std::numbers::ln2;
  } else {
    g = (1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r);
  }
  return a * g / std::numbers::ln2;
}

void SweepGrid::validate() const {
  if (omega_sigma.empty() || l_over_sigma.empty()) throw DomainError("sweep grid axes must be non-empty");
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw DomainError("sweep eps0 must be positive");
  for (double v : omega_sigma)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("omega_sigma values must be positive");
  for (double v : l_over_sigma)
    if (!(v >= 1e-3) || !std::isfinite(v)) throw DomainError("l_over_sigma values must be >= 1e-3");
}

std::vector<double> SweepGrid::linspace(double lo, double hi, int steps) {
  if (steps < 1) throw DomainError("linspace: steps must be >= 1");
  if (!(lo <= hi)) throw DomainError("linspace: lower bound exceeds upper bound");
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return v;
}

std::string to_string(RowFlag f) {
  switch (f) {
    case RowFlag::Ok: return "ok";
    case RowFlag::Clipped: return "clipped";
    case RowFlag::Invalid: return "invalid";
  }
  return "invalid";
}

namespace {

SweepRow evaluate_point(double omega_sigma, double l_over_sigma, double eps0) {
  SweepRow row;
  row.omega_sigma = omega_sigma;
  row.l_over_sigma = l_over_sigma;
  try {
    const XStateElements e = compute_elements(DetectorParams{eps0, 1.0, omega_sigma, l_over_sigma});
    const AssembledState assembled = assemble_rho(e);
    row.a_prob = e.a_prob;
    row.abs_x = std::abs(e.x_coh);
    row.c_corr = e.c_corr.real();
    row.e_joint = e.e_joint;
    row.concurrence = xstate_concurrence(e);
    row.d3_over_eps0_sq = d3_closed_form(e) / (eps0 * eps0);
    row.corr_coeff = corr_coefficient(e);
    row.flag = assembled.clipped ? RowFlag::Clipped : RowFlag::Ok;
    for (double v : {row.a_prob, row.abs_x, row.c_corr, row.e_joint, row.concurrence, row.d3_over_eps0_sq,
                     row.corr_coeff})
      if (!std::isfinite(v)) throw DomainError("non-finite value");
  } catch (const Error&) {
    row = SweepRow{};
    row.omega_sigma = omega_sigma;
    row.l_over_sigma = l_over_sigma;
    row.flag = RowFlag::Invalid;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepGrid& grid, unsigned threads) {
  grid.validate();
  const std::size_t nl = grid.l_over_sigma.size();
  const std::size_t total = grid.omega_sigma.size() * nl;
  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      rows[i] = evaluate_point(grid.omega_sigma[i / nl], grid.l_over_sigma[i % nl], grid.eps0);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

double entanglement_boundary(double omega_sigma, double lo, double hi, double tol) {
  auto gap = [&](double l) {
    const XStateElements e = compute_elements(DetectorParams{1.0, 1.0, omega_sigma, l});
    return std::abs(e.x_coh) - e.a_prob;
  };
  double flo = gap(lo);
  const double fhi = gap(hi);
  if (flo * fhi > 0.0) throw DomainError("entanglement_boundary: |X| - A does not change sign on the bracket");
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = gap(mid);
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcorr
