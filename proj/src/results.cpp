#include "qdot/results.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qdot {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_value(long long v) { return std::to_string(v); }

bool Table::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw Error(ErrorCode::MissingColumns, "table: missing column '" + name + "'");
}

double Table::value(std::size_t row, const std::string& column) const {
  return std::strtod(rows.at(row).at(column_index(column)).c_str(), nullptr);
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::StageFailure, "cannot write " + path);
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::StageFailure, "cannot read " + path);
  Table t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      t.columns = cells;
      header = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

namespace {

json table_to_json(const Table& t) {
  json j;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j;
}

Table table_from_json(const json& j) {
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  return t;
}

}  // namespace

std::string bundle_to_json(const ResultBundle& b) {
  json j;
  j["scenario"] = b.scenario;
  j["timestamp"] = b.timestamp;
  j["config_hash"] = b.config_hash;
  j["notes"] = b.notes;
  j["levels"] = table_to_json(b.levels);
  j["widths"] = table_to_json(b.widths);
  j["poles"] = table_to_json(b.poles);
  j["dispersion"] = table_to_json(b.dispersion);
  j["strongfield"] = table_to_json(b.strongfield);
  return j.dump(2);
}

ResultBundle bundle_from_json(const std::string& text) {
  json j = json::parse(text);
  ResultBundle b;
  b.scenario = j.at("scenario").get<std::string>();
  b.timestamp = j.at("timestamp").get<std::string>();
  b.config_hash = j.at("config_hash").get<std::string>();
  b.notes = j.at("notes").get<std::vector<std::string>>();
  b.levels = table_from_json(j.at("levels"));
  b.widths = table_from_json(j.at("widths"));
  b.poles = table_from_json(j.at("poles"));
  b.dispersion = table_from_json(j.at("dispersion"));
  b.strongfield = table_from_json(j.at("strongfield"));
  return b;
}

namespace {

const char* kSchemaText =
    "levels.csv: n (index), j (index), e0 (energy), status "
    "(0 isolated, 1 embedded, 2 threshold-collision, 3 degenerate), k_e0 (count), "
    "config_hash\n"
    "widths.csv: B (field), lambda (coupling), n, j, e0 (energy), e1 (energy), "
    "re_e2 (energy), im_e2 (energy), im_e2_golden (energy), config_hash\n"
    "poles.csv: B (field), lambda (coupling), n, j, pole_re (energy), "
    "pole_im (energy), raw_re (energy), raw_im (energy), config_hash\n"
    "dispersion.csv: B (field), p (momentum), nu1 (energy), config_hash\n"
    "strongfield.csv: B (field), p0 (momentum), bottom (energy), "
    "attractivity (energy*length), eps (dimensionless), d (length), q (energy), "
    "certified (0/1), direct (energy, nan when skipped), config_hash\n";

}  // namespace

void write_outputs(const ResultBundle& b, const std::string& directory, bool csv,
                   bool json_out) {
  fs::create_directories(directory);
  const fs::path dir(directory);
  if (csv) {
    if (!b.levels.columns.empty()) write_csv((dir / "levels.csv").string(), b.levels);
    if (!b.widths.columns.empty()) write_csv((dir / "widths.csv").string(), b.widths);
    if (!b.poles.columns.empty()) write_csv((dir / "poles.csv").string(), b.poles);
    if (!b.dispersion.columns.empty())
      write_csv((dir / "dispersion.csv").string(), b.dispersion);
    if (!b.strongfield.columns.empty())
      write_csv((dir / "strongfield.csv").string(), b.strongfield);
    std::ofstream schema(dir / "schema.txt");
    schema << kSchemaText;
  }
  if (json_out) {
    std::ofstream out(dir / "summary.json");
    out << bundle_to_json(b) << "\n";
  }
}

void emit_plot_data(const Table& table, PlotKind kind, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::StageFailure, "cannot write " + path);
  auto log10 = [](double v) { return std::log10(std::abs(v)); };
  switch (kind) {
    case PlotKind::LogLogWidth: {
      const auto bi = table.column_index("B");
      const auto wi = table.column_index("im_e2");
      const bool has_pole = table.has_column("pole_im");
      out << "# log10_B (1) log10_abs_im_e2 (energy)"
          << (has_pole ? " log10_abs_im_pole (energy)" : "") << "\n";
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << format_value(log10(table.value(r, "B"))) << " "
            << format_value(log10(table.value(r, "im_e2")));
        if (has_pole) out << " " << format_value(log10(table.value(r, "pole_im")));
        out << "\n";
      }
      (void)bi;
      (void)wi;
      break;
    }
    case PlotKind::Dispersion: {
      table.column_index("p");
      table.column_index("nu1");
      out << "# p (momentum) nu1 (energy)\n";
      for (std::size_t r = 0; r < table.rows.size(); ++r)
        out << format_value(table.value(r, "p")) << " "
            << format_value(table.value(r, "nu1")) << "\n";
      break;
    }
    case PlotKind::PoleTrajectory: {
      table.column_index("B");
      table.column_index("pole_re");
      table.column_index("pole_im");
      out << "# B (field) pole_re (energy) pole_im (energy)\n";
      for (std::size_t r = 0; r < table.rows.size(); ++r)
        out << format_value(table.value(r, "B")) << " "
            << format_value(table.value(r, "pole_re")) << " "
            << format_value(table.value(r, "pole_im")) << "\n";
      break;
    }
  }
}

}  // namespace qdot
