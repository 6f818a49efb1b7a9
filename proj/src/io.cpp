#include "edtc/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edtc/errors.hpp"

namespace edtc {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, std::size_t(len));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string content_hash(std::string_view content) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", (unsigned long long)h);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [name, hash] : input_hashes) inputs[name] = hash;

  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));

  return nlohmann::json{{"tool", kToolName},
                        {"version", kToolVersion},
                        {"command", command},
                        {"inputs", inputs},
                        {"resolved", resolved},
                        {"outputs", outputs},
                        {"timestamp", stamp}};
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return int(i);
  }
  return -1;
}

CsvTable read_csv(const fs::path& path) {
  const std::string text = read_file(path);
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t cell_start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(cell_start, i - cell_start));
        cell_start = i + 1;
      }
    }
    if (first) {
      for (std::string_view c : cells) table.header.emplace_back(c);
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::string_view c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw Error(path.string() + ": non-numeric CSV cell `" +
                    std::string(c) + "`");
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw Error(path.string() + ": ragged CSV row");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace edtc
