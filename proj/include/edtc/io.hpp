#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace edtc {

inline constexpr std::string_view kToolName = "edtc";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// 17 significant digits; round-trips doubles bit-faithfully.
std::string format_double(double value);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a 64-bit, hex-encoded; used to fingerprint input files in manifests.
std::string content_hash(std::string_view content);

/// Reproduction record written beside every output file.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> input_hashes;  // name, hash
  nlohmann::json resolved;  // full parameter set after defaulting
  std::vector<std::string> outputs;

  /// Serialization; the timestamp is added here and is the only
  /// run-dependent field.
  nlohmann::json to_json() const;
};

/// Minimal CSV support: one header row, numeric cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column, -1 when absent.
  int column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace edtc
