#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "molcap/input_dist.hpp"
#include "molcap/receptor_params.hpp"

namespace molcap::cli {

/// Bad configuration or input file; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

/// Comma-separated table with a mandatory header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(double x);
  CsvTable& cell(long long x);
  CsvTable& cell(std::string_view text);
  CsvTable& empty_cell();
  void end_row();

  const std::string& text() const noexcept { return text_; }

 private:
  void separator();

  std::size_t columns_;
  std::size_t filled_ = 0;
  std::string text_;
};

/// Reads and parses a JSON file; ConfigError with the parser position on failure.
nlohmann::json read_json(const std::filesystem::path& path);

/// Throws ConfigError listing every violation of the named shipped schema.
void require_schema(const nlohmann::json& doc, std::string_view schema_name);

void write_file(const std::filesystem::path& path, std::string_view content);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Receptor block → validated parameters; alpha_max is converted to k_plus.
ReceptorParams parse_receptor(const nlohmann::json& block);

nlohmann::json receptor_json(const ReceptorParams& params);

/// [{x, p}, ...] → distribution; atoms must be distinct and weights sum to one.
DiscreteDist parse_dist(const nlohmann::json& array);

/// [{x, p[, alpha]}, ...]; alpha is included when params is given.
nlohmann::json dist_json(const DiscreteDist& dist, const ReceptorParams* params = nullptr);

}  // namespace molcap::cli
