#pragma once

// Report serialization: JSON documents, CSV tables, SVG figures, run manifests.

#include "rigidlab/algebra_suite.hpp"
#include "rigidlab/experiments.hpp"
#include "rigidlab/piola_check.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace rigidlab {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_number(double v);

/// CSV with a header row and LF line endings.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// ---- SVG -----------------------------------------------------------------------

/// Per-cell heatmap of a 2-d grid.
std::string svg_heatmap(const ChartGrid& grid, const std::vector<double>& per_cell, const std::string& title);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};
/// Log-log line plot; non-positive points are skipped.
std::string svg_loglog(const std::vector<PlotSeries>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel);

// ---- JSON views of reports -------------------------------------------------------

nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const OptimizationTrace& t);
nlohmann::json to_json(const OptimizerConfig& c);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const PiolaStudy& s);
nlohmann::json to_json(const AlgebraSuiteReport& r);
nlohmann::json to_json(const FlatRunReport& r);
nlohmann::json to_json(const SphereRunReport& r);

CsvTable trace_csv(const OptimizationTrace& t);
CsvTable convergence_csv(const ConvergenceReport& r);
CsvTable piola_csv(const std::vector<PiolaStudy>& studies);
/// cell index, center coordinates, density.
CsvTable per_cell_csv(const ChartGrid& grid, const std::vector<double>& per_cell);

/// Run manifest: config hash, versions, resolutions, outputs, and the only
/// timestamp written by a run.
nlohmann::json make_manifest(const std::string& command, const std::string& label, const nlohmann::json& config,
                             const nlohmann::json& resolutions, const std::vector<std::string>& outputs,
                             std::uint64_t seed, int threads);

}  // namespace rigidlab
