#include "qcorr/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace qcorr {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string state_to_json(const BipartiteState& rho) {
  const Matrix& m = rho.matrix();
  std::string out = "{\n  \"dims\": [" + std::to_string(rho.dim_a()) + ", " + std::to_string(rho.dim_b()) +
                    "],\n  \"matrix\": [\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += "    [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += "[" + format_double(m(i, j).real()) + ", " + format_double(m(i, j).imag()) + "]";
    }
    out += i + 1 < m.rows() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

BipartiteState state_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("state file is not valid JSON: ") + e.what());
  }
  try {
    const auto& dims = doc.at("dims");
    if (!dims.is_array() || dims.size() != 2) throw FormatError("\"dims\" must be a pair of integers");
    const int da = dims[0].get<int>();
    const int db = dims[1].get<int>();
    if (da <= 0 || db <= 0 || da * db > 4096) throw FormatError("\"dims\" must be positive");
    const auto& rows = doc.at("matrix");
    const int n = da * db;
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw DimensionError("\"matrix\" must have dims[0]*dims[1] rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) throw DimensionError("matrix row has the wrong length");
      for (int j = 0; j < n; ++j) {
        const auto& entry = row[static_cast<std::size_t>(j)];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
          throw FormatError("matrix entries must be [re, im] pairs");
        m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    return BipartiteState(std::move(m), da, db, 1e-8);
  } catch (const json::exception& e) {
    throw FormatError(std::string("state file has an unexpected shape: ") + e.what());
  }
}

std::string state_spec_to_json(const StateSpec& spec) {
  json doc;
  doc["family"] = to_string(spec.family);
  doc["parameters"] = json::object();
  for (const auto& [key, values] : spec.parameters) doc["parameters"][key] = values;
  if (spec.seed) doc["seed"] = *spec.seed;
  return doc.dump(2) + "\n";
}

StateSpec state_spec_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    StateSpec spec;
    spec.family = state_family_from_string(doc.at("family").get<std::string>());
    if (doc.contains("parameters"))
      for (const auto& [key, value] : doc.at("parameters").items())
        spec.parameters[key] = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    return spec;
  } catch (const json::exception& e) {
    throw FormatError(std::string("state spec is malformed: ") + e.what());
  }
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    for (double v : {r.omega_sigma, r.l_over_sigma, r.a_prob, r.abs_x, r.c_corr, r.e_joint, r.concurrence,
                     r.d3_over_eps0_sq, r.corr_coeff}) {
      out += format_double(v);
      out += ',';
    }
    out += to_string(r.flag);
    out += '\n';
  }
  return out;
}

std::string sweep_to_json(const std::vector<SweepRow>& rows, const SweepGrid& grid) {
  json doc;
  doc["eps0"] = grid.eps0;
  doc["omega_sigma"] = grid.omega_sigma;
  doc["l_over_sigma"] = grid.l_over_sigma;
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"omega_sigma", r.omega_sigma},
                     {"l_over_sigma", r.l_over_sigma},
                     {"a_prob", r.a_prob},
                     {"abs_x", r.abs_x},
                     {"c_corr", r.c_corr},
                     {"e_joint", r.e_joint},
                     {"concurrence", r.concurrence},
                     {"d3_over_eps0_sq", r.d3_over_eps0_sq},
                     {"corr_coeff", r.corr_coeff},
                     {"flags", to_string(r.flag)}});
  }
  doc["rows"] = std::move(table);
  return doc.dump(2) + "\n";
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Piecewise-linear viridis approximation, t in [0, 1].
std::string color(double t) {
  static constexpr double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[16];
  int c[3];
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace

std::string sweep_to_svg(const std::vector<SweepRow>& rows, const SweepGrid& grid) {
  const std::size_t nx = grid.omega_sigma.size();
  const std::size_t ny = grid.l_over_sigma.size();
  if (rows.size() != nx * ny) throw DimensionError("sweep_to_svg: row count does not match the grid");
  constexpr double left = 70, top = 30, plot_w = 480, plot_h = 360;
  const double cw = plot_w / static_cast<double>(nx);
  const double ch = plot_h / static_cast<double>(ny);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : rows)
    if (r.flag != RowFlag::Invalid && r.d3_over_eps0_sq > 0.0) {
      lo = std::min(lo, std::log10(r.d3_over_eps0_sq));
      hi = std::max(hi, std::log10(r.d3_over_eps0_sq));
    }
  if (!(hi > lo)) hi = lo + 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(left + plot_w + 110) << "\" height=\""
      << fmt(top + plot_h + 60) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const SweepRow& r = rows[i * ny + j];
      const std::string fill = r.flag == RowFlag::Invalid || r.d3_over_eps0_sq <= 0.0
                                   ? "#cccccc"
                                   : color((std::log10(r.d3_over_eps0_sq) - lo) / (hi - lo));
      svg << "<rect x=\"" << fmt(left + cw * static_cast<double>(i)) << "\" y=\""
          << fmt(top + ch * static_cast<double>(ny - 1 - j)) << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch)
          << "\" fill=\"" << fill << "\"/>\n";
    }

  // |X| = A crossing in each omega column, linearly interpolated between rows.
  std::string points;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const SweepRow& r0 = rows[i * ny + j];
      const SweepRow& r1 = rows[i * ny + j + 1];
      if (r0.flag == RowFlag::Invalid || r1.flag == RowFlag::Invalid) continue;
      const double g0 = r0.abs_x - r0.a_prob;
      const double g1 = r1.abs_x - r1.a_prob;
      if ((g0 > 0.0) == (g1 > 0.0)) continue;
      const double f = g0 / (g0 - g1);
      const double x = left + cw * (static_cast<double>(i) + 0.5);
      const double y = top + ch * (static_cast<double>(ny - 1 - j) + 0.5 - f);
      points += (points.empty() ? "" : " ") + fmt(x) + "," + fmt(y);
      break;
    }
  if (!points.empty())
    svg << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";

  svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(plot_w) << "\" height=\""
      << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(top + plot_h + 40)
      << "\" text-anchor=\"middle\" font-size=\"14\">Omega sigma (" << fmt(grid.omega_sigma.front()) << " .. "
      << fmt(grid.omega_sigma.back()) << ")</text>\n";
  svg << "<text x=\"20\" y=\"" << fmt(top + plot_h / 2) << "\" font-size=\"14\" transform=\"rotate(-90 20 "
      << fmt(top + plot_h / 2) << ")\" text-anchor=\"middle\">L / sigma (" << fmt(grid.l_over_sigma.front())
      << " .. " << fmt(grid.l_over_sigma.back()) << ")</text>\n";
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    svg << "<rect x=\"" << fmt(left + plot_w + 20) << "\" y=\"" << fmt(top + plot_h * (1 - t) - plot_h / 11)
        << "\" width=\"20\" height=\"" << fmt(plot_h / 11) << "\" fill=\"" << color(t) << "\"/>\n";
  }
  svg << "<text x=\"" << fmt(left + plot_w + 45) << "\" y=\"" << fmt(top + 12) << "\" font-size=\"11\">1e"
      << fmt(hi) << "</text>\n";
  svg << "<text x=\"" << fmt(left + plot_w + 45) << "\" y=\"" << fmt(top + plot_h) << "\" font-size=\"11\">1e"
      << fmt(lo) << "</text>\n";
  svg << "<text x=\"" << fmt(left) << "\" y=\"18\" font-size=\"14\">D3 / eps0^2, eps0 = " << fmt(grid.eps0)
      << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw FormatError("write failed for " + path);
}

}  // namespace qcorr
