#pragma once

#include <string>
#include <vector>

#include "qdot/errors.hpp"

namespace qdot {

// Long-format numeric table with pre-formatted cells (17 significant digits)
// so that CSV output is byte-deterministic.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool has_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;  // throws MissingColumns
  double value(std::size_t row, const std::string& column) const;
};

std::string format_value(double v);
std::string format_value(long long v);

struct ResultBundle {
  std::string scenario;
  std::string timestamp;  // JSON summary only, never in CSV
  std::string config_hash;
  std::vector<std::string> notes;
  Table levels, widths, poles, dispersion, strongfield;
};

void write_csv(const std::string& path, const Table& table);
Table read_csv(const std::string& path);

std::string bundle_to_json(const ResultBundle& bundle);
ResultBundle bundle_from_json(const std::string& text);

// CSV files + summary.json + a schema file describing columns and units.
void write_outputs(const ResultBundle& bundle, const std::string& directory,
                   bool csv, bool json);

enum class PlotKind { LogLogWidth, Dispersion, PoleTrajectory };

void emit_plot_data(const Table& table, PlotKind kind, const std::string& path);

}  // namespace qdot
