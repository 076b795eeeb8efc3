#pragma once

// Two identical inertial Unruh-DeWitt detectors coupled to the Minkowski
// vacuum, evaluated to second order in the coupling. The joint detector state
// is the X-state
//
//   | 1-A-B+E   0     0    X |
//   |   0      B-E    C    0 |
//   |   0      C*    A-E   0 |
//   |   X*      0     0    E |
//
// in the basis {|00>, |01>, |10>, |11>}.

#include "qcorr/core.hpp"

#include <string>
#include <vector>

namespace qcorr {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), any z (the lower half plane
/// uses the reflection formula and may overflow far from the axis).
Complex faddeeva_w(Complex z);

inline constexpr double kErfDomain = 12.0;

/// Complex error function, |z| <= 12; throws DomainError outside.
Complex erf_complex(Complex z);

struct DetectorParams {
  double eps0 = 1e-2;        // coupling strength, dimensionless
  double sigma = 1.0;        // Gaussian switching width
  double omega = 1.0;        // detector gap
  double distance_l = 1.0;   // detector separation (c = 1)

  /// Throws DomainError unless eps0 > 0, sigma > 0, omega >= 0, distance_l > 0.
  void validate() const;
};

struct XStateElements {
  double a_prob = 0.0;
  double b_prob = 0.0;
  Complex x_coh{};
  Complex c_corr{};  // real for detector-derived states
  double e_joint = 0.0;
  double eps0 = 0.0;  // coupling that produced the elements; sets the truncation slack

  /// 10 eps0^4: tolerance for every second-order identity.
  double slack() const;
};

/// A/eps0^2 = [exp(-s^2) - sqrt(pi) s erfc(s)] / (4 pi) with s = sigma*Omega.
double excitation_probability_scaled(double omega_sigma);

XStateElements compute_elements(const DetectorParams& p);

/// True when A exceeds 0.1 and the second-order expansion is no longer small.
bool exceeds_perturbative_range(const XStateElements& e);

struct AssembledState {
  BipartiteState state;
  bool clipped = false;
};

/// Builds the X-state; negative eigenvalues down to -slack are clipped to 0
/// followed by trace renormalization. Throws InvalidStateError below that.
AssembledState assemble_rho(const XStateElements& e);

/// 2 max(0, |X| - A).
double xstate_concurrence(const XStateElements& e);

struct EntanglementFlags {
  bool cond1 = false;  // |X| > A - slack
  bool cond2 = false;  // |C| > sqrt(E)
};

EntanglementFlags xstate_entanglement_flags(const XStateElements& e);

/// Correlation coefficient of the two detectors' excitation outcomes,
/// (E - AB) / sqrt(A(1-A)B(1-B)). Throws DomainError for A or B in {0, 1}.
double corr_coefficient(const XStateElements& e);

/// Leading-order form (|X|^2 + 2|C|^2) / A.
double corr_coefficient_leading(const XStateElements& e);

/// (A+C) log(A+C) + (A-C) log(A-C) - 2 A log A in bits, using |C|.
double d3_closed_form(const XStateElements& e);

struct SweepGrid {
  std::vector<double> omega_sigma;
  std::vector<double> l_over_sigma;
  double eps0 = 1e-2;

  void validate() const;
  /// `steps` evenly spaced values on [lo, hi] (a single value when steps == 1).
  static std::vector<double> linspace(double lo, double hi, int steps);
};

enum class RowFlag { Ok, Clipped, Invalid };

std::string to_string(RowFlag f);

struct SweepRow {
  double omega_sigma = 0.0;
  double l_over_sigma = 0.0;
  double a_prob = 0.0;
  double abs_x = 0.0;
  double c_corr = 0.0;
  double e_joint = 0.0;
  double concurrence = 0.0;
  double d3_over_eps0_sq = 0.0;
  double corr_coeff = 0.0;
  RowFlag flag = RowFlag::Ok;

  bool operator==(const SweepRow&) const = default;
};

/// One row per grid point, omega_sigma-major. Points are evaluated on worker
/// threads; a failing point becomes an Invalid row with zeroed values.
std::vector<SweepRow> sweep(const SweepGrid& grid, unsigned threads = 0);

/// Separation L/sigma in [lo, hi] where |X| = A for fixed omega_sigma, by
/// bisection; requires a sign change of |X| - A on the bracket.
double entanglement_boundary(double omega_sigma, double lo, double hi, double tol = 1e-12);

}  // namespace qcorr
