#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json_schema.hpp"
#include "schemas.hpp"

namespace molcap::cli {

using nlohmann::json;

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvTable::separator() {
  if (filled_ == columns_) throw std::logic_error("csv row has more cells than the header");
  if (filled_ > 0) text_ += ',';
  ++filled_;
}

CsvTable& CsvTable::cell(double x) {
  separator();
  text_ += format_number(x);
  return *this;
}

CsvTable& CsvTable::cell(long long x) {
  separator();
  text_ += std::to_string(x);
  return *this;
}

CsvTable& CsvTable::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    text_ += text;
    return *this;
  }
  text_ += '"';
  for (char c : text) {
    if (c == '"') text_ += '"';
    text_ += c;
  }
  text_ += '"';
  return *this;
}

CsvTable& CsvTable::empty_cell() {
  separator();
  return *this;
}

void CsvTable::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv row has fewer cells than the header");
  text_ += '\n';
  filled_ = 0;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
}

void require_schema(const json& doc, std::string_view schema_name) {
  const auto errors = SchemaValidator(schema(schema_name)).validate(doc);
  if (errors.empty()) return;
  std::string msg = "config does not match " + std::string(schema_name) + ":";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

ReceptorParams parse_receptor(const json& block) {
  const int n = block.at("n_receptors").get<int>();
  const double beta = block.at("beta").get<double>();
  const double k_minus = block.value("k_minus", 1.0);
  const double m_max = block.value("m_max", 1.0);
  const bool has_alpha = block.contains("alpha_max");
  if (has_alpha == block.contains("k_plus")) {
    throw ConfigError("receptor: give exactly one of k_plus and alpha_max");
  }
  if (has_alpha) {
    return ReceptorParams::from_alpha_max(block.at("alpha_max").get<double>(), beta, n, k_minus, m_max);
  }
  ReceptorParams p;
  p.n_receptors = n;
  p.beta = beta;
  p.k_plus = block.at("k_plus").get<double>();
  p.k_minus = k_minus;
  p.m_max = m_max;
  p.validate();
  return p;
}

json receptor_json(const ReceptorParams& params) {
  return {{"n_receptors", params.n_receptors},
          {"beta", params.beta},
          {"k_plus", params.k_plus},
          {"k_minus", params.k_minus},
          {"m_max", params.m_max},
          {"alpha_max", alpha(params.m_max, params)}};
}

DiscreteDist parse_dist(const json& array) {
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : array) atoms.emplace_back(a.at("x").get<double>(), a.at("p").get<double>());
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> xs, ps;
  for (const auto& [x, p] : atoms) {
    if (!xs.empty() && xs.back() == x) throw ConfigError("distribution repeats atom " + format_number(x));
    xs.push_back(x);
    ps.push_back(p);
  }
  try {
    return DiscreteDist(std::move(xs), std::move(ps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  }
}

json dist_json(const DiscreteDist& dist, const ReceptorParams* params) {
  json out = json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    json atom = {{"x", dist.atoms()[i]}, {"p", dist.weights()[i]}};
    if (params) atom["alpha"] = alpha(dist.atoms()[i], *params);
    out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace molcap::cli
