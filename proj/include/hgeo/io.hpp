#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hgeo/synthesis.hpp"

namespace hgeo {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

/// "<command>-<model>-<16 hex digits of fnv1a(content)>"
std::string artifact_stem(const std::string& command, const std::string& model, std::string_view content);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// Comma-separated table with `# key=value` header comments.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }
  void add_meta(const std::string& key, double value) { meta.emplace_back(key, format_number(value)); }
  std::string meta_value(const std::string& key) const;  // empty when absent
};

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(std::string_view text);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Pulse file layout: metadata comments followed by tau,lambda rows.
CsvTable pulse_table(const PulseProfile& p);
nlohmann::json pulse_json(const PulseProfile& p);
/// Reads a pulse table back as a Sampled pulse of `model`; alpha, beta and
/// delta are restored from the metadata.
PulseProfile pulse_from_table(const CsvTable& t, const ParametricModel& model);

/// Writes a table or json document; the extension is added from `format`.
std::filesystem::path write_artifact(const std::filesystem::path& dir, const std::string& stem, const CsvTable& csv,
                                     const nlohmann::json& json, const std::string& format);

}  // namespace hgeo
