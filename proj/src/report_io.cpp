#include "rigidlab/report_io.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rigidlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width does not match header");
  rows_.push_back(std::move(row));
}

namespace {

std::string csv_cell(const CsvTable::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + csv_cell(header_[i]);
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path.string() + "'");
  return nlohmann::json::parse(in);
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- SVG -------------------------------------------------------------------------

namespace {

// piecewise-linear approximation of the viridis ramp
std::string ramp(double t) {
  static const double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

std::string fmt(double v, int prec = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

}  // namespace

std::string svg_heatmap(const ChartGrid& grid, const std::vector<double>& per_cell, const std::string& title) {
  if (grid.dim() != 2) throw DomainError("svg_heatmap: 2-d grids only");
  if (per_cell.size() != grid.cell_count()) throw DomainError("svg_heatmap: one value per cell required");
  const int nx = grid.cells(0), ny = grid.cells(1);
  const double size = 480.0, margin = 40.0;
  const double cw = size / nx, ch = size / ny;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : per_cell) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin + 80 << "\" height=\""
    << size + 2 * margin << "\">\n";
  s << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
    << "</text>\n";
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = per_cell[static_cast<std::size_t>(j) * nx + i];
      // chart y points up
      s << "<rect x=\"" << fmt(margin + i * cw, 6) << "\" y=\"" << fmt(margin + (ny - 1 - j) * ch, 6)
        << "\" width=\"" << fmt(cw, 6) << "\" height=\"" << fmt(ch, 6) << "\" fill=\"" << ramp((v - lo) / (hi - lo))
        << "\"/>\n";
    }
  }
  s << "</g>\n";
  const double bx = margin + size + 20;
  for (int k = 0; k < 50; ++k) {
    s << "<rect x=\"" << bx << "\" y=\"" << fmt(margin + size - (k + 1) * size / 50, 6) << "\" width=\"16\" height=\""
      << fmt(size / 50 + 0.5, 6) << "\" fill=\"" << ramp((k + 0.5) / 50) << "\"/>\n";
  }
  s << "<text x=\"" << bx + 20 << "\" y=\"" << margin + 10 << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << fmt(hi) << "</text>\n";
  s << "<text x=\"" << bx + 20 << "\" y=\"" << margin + size << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << fmt(lo) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string svg_loglog(const std::vector<PlotSeries>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel) {
  const double w = 520, h = 380, ml = 70, mr = 120, mt = 40, mb = 50;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& sr : series) {
    for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
      if (sr.x[i] > 0 && sr.y[i] > 0) {
        xlo = std::min(xlo, std::log10(sr.x[i]));
        xhi = std::max(xhi, std::log10(sr.x[i]));
        ylo = std::min(ylo, std::log10(sr.y[i]));
        yhi = std::max(yhi, std::log10(sr.y[i]));
      }
    }
  }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (!(xhi > xlo)) xhi = xlo + 1;
  if (!(yhi > ylo)) yhi = ylo + 1;
  auto px = [&](double lx) { return ml + (lx - xlo) / (xhi - xlo) * (w - ml - mr); };
  auto py = [&](double ly) { return h - mb - (ly - ylo) / (yhi - ylo) * (h - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
    << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\"" << h - mt - mb
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12 << "\" font-family=\"sans-serif\" font-size=\"12\""
    << " text-anchor=\"middle\">" << xml_escape(xlabel) << " (log10 " << fmt(xlo, 3) << " .. " << fmt(xhi, 3)
    << ")</text>\n";
  s << "<text x=\"14\" y=\"" << (mt + h - mb) / 2 << "\" font-family=\"sans-serif\" font-size=\"12\""
    << " transform=\"rotate(-90 14 " << (mt + h - mb) / 2 << ")\" text-anchor=\"middle\">" << xml_escape(ylabel)
    << " (log10 " << fmt(ylo, 3) << " .. " << fmt(yhi, 3) << ")</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const char* color = colors[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
      if (!(sr.x[i] > 0 && sr.y[i] > 0)) continue;
      const double x = px(std::log10(sr.x[i])), y = py(std::log10(sr.y[i]));
      pts += fmt(x, 6) + "," + fmt(y, 6) + " ";
      s << "<circle cx=\"" << fmt(x, 6) << "\" cy=\"" << fmt(y, 6) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!pts.empty()) {
      s << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    }
    s << "<text x=\"" << w - mr + 8 << "\" y=\"" << mt + 14 + 16 * k << "\" font-family=\"sans-serif\""
      << " font-size=\"11\" fill=\"" << color << "\">" << xml_escape(sr.name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

// ---- JSON ------------------------------------------------------------------------

nlohmann::json to_json(const EnergyReport& r) {
  nlohmann::json j{{"functional", r.functional},
                   {"energy", r.energy},
                   {"p", r.p},
                   {"per_cell", r.per_cell},
                   {"clamped_points", r.clamped_points}};
  j["grad_norm"] = r.grad_norm ? nlohmann::json(*r.grad_norm) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const OptimizationTrace& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"iter", r.iter},
                    {"energy", r.energy},
                    {"grad_norm", r.grad_norm},
                    {"step", r.step},
                    {"clamped_points", r.clamped_points}});
  }
  return {{"reason", t.reason},
          {"iterations", t.iterations},
          {"final_energy", t.final_energy()},
          {"final_grad_norm", t.final_grad_norm()},
          {"monotone", t.monotone()},
          {"note", "best found; no global minimality is claimed"},
          {"rows", rows}};
}

nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"method", to_string(c.method)}, {"memory", c.memory},         {"max_iters", c.max_iters},
          {"grad_tol", c.grad_tol},        {"energy_tol", c.energy_tol}, {"armijo_c", c.armijo_c},
          {"shrink", c.shrink},            {"max_trials", c.max_trials}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& w : r.rows) {
    rows.push_back({{"n", w.n},
                    {"forward", w.forward},
                    {"inverse", w.inverse},
                    {"det", w.det},
                    {"det_inverse", w.det_inverse}});
  }
  return {{"p", r.p},
          {"q", r.q},
          {"rows", rows},
          {"slopes",
           {{"forward", r.slope_forward},
            {"inverse", r.slope_inverse},
            {"det", r.slope_det},
            {"det_inverse", r.slope_det_inverse}}}};
}

nlohmann::json to_json(const PiolaStudy& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"level", r.level}, {"cells", r.cells}, {"h", r.h}, {"residual", r.residual}, {"order", r.order}});
  }
  return {{"case", to_string(s.which)}, {"order", s.order}, {"max_abs_residual", s.max_abs_residual}, {"rows", rows}};
}

nlohmann::json to_json(const AlgebraSuiteReport& r) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : r.properties) {
    props.push_back({{"name", p.name},
                     {"cases", p.cases},
                     {"failures", p.failures},
                     {"worst", p.worst},
                     {"tolerance", p.tolerance},
                     {"passed", p.passed()}});
  }
  return {{"dim", r.dim}, {"seed", r.seed}, {"all_passed", r.all_passed()}, {"properties", props}};
}

nlohmann::json to_json(const FlatRunReport& r) {
  nlohmann::json map;
  to_json(map, r.final_map);
  return {{"initial_energy", r.initial_energy}, {"final_energy", r.final_energy},
          {"sup_to_target", r.sup_to_target},   {"sup_to_rigid", r.sup_to_rigid},
          {"max_distortion", r.max_distortion}, {"area", r.area},
          {"trace", to_json(r.trace)},          {"final_map", map}};
}

nlohmann::json to_json(const SphereRunReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& w : r.rows) {
    rows.push_back({{"cells", w.cells},
                    {"initial_energy", w.initial_energy},
                    {"final_energy", w.final_energy},
                    {"iterations", w.iterations},
                    {"reason", w.reason}});
  }
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& [side, e] : r.sweep) sweep.push_back({{"cap_side", side}, {"final_energy", e}});
  return {{"boundary_scale", r.boundary_scale}, {"rows", rows},
          {"ratio_finest_coarsest", r.ratio},  {"sweep", sweep},
          {"sweep_monotone", r.sweep_monotone}, {"note", "energies are best found, not certified minima"}};
}

CsvTable trace_csv(const OptimizationTrace& t) {
  CsvTable csv({"iter", "energy", "gradnorm", "step", "clamped_points"});
  for (const auto& r : t.rows) {
    csv.add_row({static_cast<long long>(r.iter), r.energy, r.grad_norm, r.step,
                 static_cast<long long>(r.clamped_points)});
  }
  return csv;
}

CsvTable convergence_csv(const ConvergenceReport& r) {
  CsvTable csv({"n", "forward", "inverse", "det", "det_inverse"});
  for (const auto& w : r.rows) csv.add_row({static_cast<long long>(w.n), w.forward, w.inverse, w.det, w.det_inverse});
  return csv;
}

CsvTable piola_csv(const std::vector<PiolaStudy>& studies) {
  CsvTable csv({"case", "level", "h", "residual", "order"});
  for (const auto& s : studies) {
    for (const auto& r : s.rows) csv.add_row({to_string(s.which), static_cast<long long>(r.level), r.h, r.residual, r.order});
  }
  return csv;
}

CsvTable per_cell_csv(const ChartGrid& grid, const std::vector<double>& per_cell) {
  std::vector<std::string> header{"cell"};
  for (int k = 0; k < grid.dim(); ++k) header.push_back("x" + std::to_string(k));
  header.push_back("density");
  CsvTable csv(std::move(header));
  for (std::size_t c = 0; c < per_cell.size(); ++c) {
    std::vector<CsvTable::Cell> row{static_cast<long long>(c)};
    const Vec x = grid.cell_center(c);
    for (int k = 0; k < grid.dim(); ++k) row.emplace_back(x(k));
    row.emplace_back(per_cell[c]);
    csv.add_row(std::move(row));
  }
  return csv;
}

nlohmann::json make_manifest(const std::string& command, const std::string& label, const nlohmann::json& config,
                             const nlohmann::json& resolutions, const std::vector<std::string>& outputs,
                             std::uint64_t seed, int threads) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"command", command},
          {"label", label},
          {"config_hash", config_hash(config)},
          {"config", config},
          {"seed", seed},
          {"threads", threads},
          {"resolutions", resolutions},
          {"outputs", outputs},
          {"versions",
           {{"rigidlab", kVersion},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
          {"timestamp", stamp}};
}

}  // namespace rigidlab
