#pragma once

// File formats used by the command-line tool.
//
// State files (JSON):
//   {
//     "dims": [dA, dB],
//     "matrix": [[[re, im], ...], ...]      row-major, %.17g
//   }
//
// Sweep tables (CSV): fixed header, LF line endings, %.17g floats.

#include "qcorr/detector.hpp"
#include "qcorr/states.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qcorr {

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kSweepCsvHeader =
    "omega_sigma,l_over_sigma,a_prob,abs_x,c_corr,e_joint,concurrence,d3_over_eps0_sq,corr_coeff,flags";

/// 17 significant digits; round-trips every finite double.
std::string format_double(double x);

std::string state_to_json(const BipartiteState& rho);
/// Validates at 1e-8 on ingest. FormatError for malformed JSON, InvalidStateError
/// or DimensionError for matrices that are not valid bipartite states.
BipartiteState state_from_json(std::string_view text);

std::string state_spec_to_json(const StateSpec& spec);
StateSpec state_spec_from_json(std::string_view text);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows, const SweepGrid& grid);
/// Heatmap of d3_over_eps0_sq (log color scale) with the |X| = A contour.
std::string sweep_to_svg(const std::vector<SweepRow>& rows, const SweepGrid& grid);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qcorr
