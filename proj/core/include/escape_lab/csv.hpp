#pragma once

// Minimal CSV tables for experiment output, written atomically, plus the
// JSON metadata sidecar that accompanies each data file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace escape_lab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, or -1.
  long column(const std::string& name) const noexcept;
  /// Names from `required` absent from the header.
  std::vector<std::string> missing_columns(const std::vector<std::string>& required) const;
};

/// Shortest text that round-trips the double; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);
std::string format_number(std::uint64_t x);

std::string to_csv_text(const CsvTable& table);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Parses a comma-separated file without quoting. Lines starting with '#' are
/// skipped. Throws ConfigError when the file cannot be read, is empty, or has
/// ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

struct RunMetadata {
  std::string command;
  /// Parameter name and value rendered as text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  bool seed_defaulted = false;
  std::uint64_t workers = 1;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> notes;
};

/// Version string of the library build (git describe at configure time).
const char* build_version() noexcept;

/// `<csv_path>.meta.json`
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

std::string metadata_json(const RunMetadata& meta);

void write_metadata(const std::filesystem::path& csv_path, const RunMetadata& meta);

}  // namespace escape_lab
