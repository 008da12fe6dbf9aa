#include "escape_lab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "escape_lab/errors.hpp"

#ifndef ESCAPE_LAB_GIT_DESCRIBE
#define ESCAPE_LAB_GIT_DESCRIBE "unknown"
#endif

namespace escape_lab {

long CsvTable::column(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<long>(i);
  }
  return -1;
}

std::vector<std::string> CsvTable::missing_columns(const std::vector<std::string>& required) const {
  std::vector<std::string> out;
  for (const auto& r : required) {
    if (column(r) < 0) out.push_back(r);
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_number(std::uint64_t x) { return std::to_string(x); }

std::string to_csv_text(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ResourceError("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw ResourceError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ResourceError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_file_atomic(path, to_csv_text(table));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read CSV file '" + path.string() + "'");
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ConfigError("'" + path.string() + "' line " + std::to_string(lineno) + " has " +
                        std::to_string(cells.size()) + " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ConfigError("CSV file '" + path.string() + "' is empty");
  return table;
}

const char* build_version() noexcept { return ESCAPE_LAB_GIT_DESCRIBE; }

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p += ".meta.json";
  return p;
}

std::string metadata_json(const RunMetadata& meta) {
  nlohmann::ordered_json j;
  j["command"] = meta.command;
  auto& params = j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta.params) params[k] = v;
  j["seed"] = meta.seed;
  j["seed_defaulted"] = meta.seed_defaulted;
  j["workers"] = meta.workers;
  j["build"] = build_version();
  j["wall_clock_seconds"] = meta.wall_clock_seconds;
  j["notes"] = meta.notes;
  return j.dump(2) + "\n";
}

void write_metadata(const std::filesystem::path& csv_path, const RunMetadata& meta) {
  write_file_atomic(sidecar_path(csv_path), metadata_json(meta));
}

}  // namespace escape_lab
