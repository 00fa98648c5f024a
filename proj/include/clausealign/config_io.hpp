// Flat key-value serialization of AlignmentConfig.
//
// Keys: beta, gamma, lambda, mu, sigma, p_1_0, p_0_1, p_1_1, p_1_2, p_2_1,
// p_2_2. One "key = value" per line, decimal notation, '#' comments.
#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "clausealign/scoring.hpp"

namespace clausealign {

namespace detail {

// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string config_mode_key(AlignmentMode m) {
  std::string key = "p_";
  for (const char* p = mode_name(m); *p; ++p)
    key.push_back(*p == '-' ? '_' : *p);
  return key;
}

inline std::string strip_ascii_ws(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "beta", "gamma", "lambda", "mu", "sigma", "p_1_0",
      "p_0_1", "p_1_1", "p_1_2", "p_2_1", "p_2_2"};
  return keys;
}

inline std::string serialize_config(const AlignmentConfig& cfg) {
  std::ostringstream out;
  out << "beta = " << detail::format_double(cfg.beta) << "\n";
  out << "gamma = " << detail::format_double(cfg.gamma) << "\n";
  out << "lambda = " << detail::format_double(cfg.lambda) << "\n";
  out << "mu = " << detail::format_double(cfg.length.mu) << "\n";
  out << "sigma = " << detail::format_double(cfg.length.sigma) << "\n";
  for (AlignmentMode m :
       {AlignmentMode::m1_0, AlignmentMode::m0_1, AlignmentMode::m1_1,
        AlignmentMode::m1_2, AlignmentMode::m2_1, AlignmentMode::m2_2})
    out << detail::config_mode_key(m) << " = "
        << detail::format_double(cfg.mode_probs.get(m)) << "\n";
  return out.str();
}

inline void write_config(const std::string& path, const AlignmentConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << serialize_config(cfg);
  if (!out) throw std::runtime_error("error writing config file: " + path);
}

inline AlignmentConfig parse_config(std::istream& in, const std::string& origin) {
  std::unordered_map<std::string, double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    const std::string trimmed = detail::strip_ascii_ws(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = detail::strip_ascii_ws(trimmed.substr(0, eq));
    const std::string val = detail::strip_ascii_ws(trimmed.substr(eq + 1));
    double parsed = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), parsed);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": bad numeric value '" + val + "'");
    if (!values.emplace(key, parsed).second)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
  }
  std::unordered_set<std::string> known(config_keys().begin(), config_keys().end());
  for (const auto& [key, value] : values)
    if (known.count(key) == 0)
      throw std::runtime_error(origin + ": unknown config key '" + key + "'");
  for (const std::string& key : config_keys())
    if (values.count(key) == 0)
      throw std::runtime_error(origin + ": missing config key '" + key + "'");

  AlignmentConfig cfg;
  cfg.beta = values["beta"];
  cfg.gamma = values["gamma"];
  cfg.lambda = values["lambda"];
  cfg.length.mu = values["mu"];
  cfg.length.sigma = values["sigma"];
  for (AlignmentMode m : kAllModes)
    cfg.mode_probs.set(m, values[detail::config_mode_key(m)]);
  cfg.validate();
  return cfg;
}

inline AlignmentConfig read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, path);
}

}  // namespace clausealign
