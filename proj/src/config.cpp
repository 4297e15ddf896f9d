#include "fbpaug/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace fbpaug {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string key;
  std::function<void(AugmentConfig&, const std::string&)> set;
  std::function<std::string(const AugmentConfig&)> get;
};

Field real(const char* key, double AugmentConfig::*member) {
  return {key, [=](AugmentConfig& c, const std::string& v) { c.*member = to_double(key, v); },
          [=](const AugmentConfig& c) { return num(c.*member); }};
}

Field flag(const char* key, bool AugmentConfig::*member) {
  return {key, [=](AugmentConfig& c, const std::string& v) { c.*member = to_bool(key, v); },
          [=](const AugmentConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f{
        flag("use_fbpaug", &AugmentConfig::use_fbpaug),
        real("p_sharpen", &AugmentConfig::p_sharpen),
        real("p_smooth", &AugmentConfig::p_smooth),
        real("sharpen_a_min", &AugmentConfig::sharpen_a_min),
        real("sharpen_a_max", &AugmentConfig::sharpen_a_max),
        real("sharpen_b_min", &AugmentConfig::sharpen_b_min),
        real("sharpen_b_max", &AugmentConfig::sharpen_b_max),
        real("smooth_a_min", &AugmentConfig::smooth_a_min),
        real("smooth_a_max", &AugmentConfig::smooth_a_max),
        real("smooth_b_min", &AugmentConfig::smooth_b_min),
        real("smooth_b_max", &AugmentConfig::smooth_b_max),
        {"n_angles",
         [](AugmentConfig& c, const std::string& v) { c.n_angles = static_cast<Eigen::Index>(to_u64("n_angles", v)); },
         [](const AugmentConfig& c) { return std::to_string(c.n_angles); }},
        flag("use_gamma", &AugmentConfig::use_gamma),
        real("p_gamma", &AugmentConfig::p_gamma),
        real("gamma_log_std", &AugmentConfig::gamma_log_std),
        flag("use_noise", &AugmentConfig::use_noise),
        real("p_noise", &AugmentConfig::p_noise),
        real("noise_sigma", &AugmentConfig::noise_sigma),
        {"noise_mode",
         [](AugmentConfig& c, const std::string& v) {
           if (v == "normalized")
             c.noise_mode = NoiseMode::Normalized;
           else if (v == "raw")
             c.noise_mode = NoiseMode::Raw;
           else
             throw ConfigError("config key 'noise_mode': expected normalized or raw, got '" + v + "'");
         },
         [](const AugmentConfig& c) { return std::string(c.noise_mode == NoiseMode::Raw ? "raw" : "normalized"); }},
        flag("use_windowing", &AugmentConfig::use_windowing),
        real("p_windowing", &AugmentConfig::p_windowing),
        real("window_center_min", &AugmentConfig::window_center_min),
        real("window_center_max", &AugmentConfig::window_center_max),
        real("window_width_min", &AugmentConfig::window_width_min),
        real("window_width_max", &AugmentConfig::window_width_max),
        flag("use_flips", &AugmentConfig::use_flips),
        real("p_geometric", &AugmentConfig::p_geometric),
        {"flip_coupling",
         [](AugmentConfig& c, const std::string& v) {
           if (v == "joint")
             c.flip_coupling = FlipCoupling::Joint;
           else if (v == "independent")
             c.flip_coupling = FlipCoupling::Independent;
           else
             throw ConfigError("config key 'flip_coupling': expected joint or independent, got '" + v + "'");
         },
         [](const AugmentConfig& c) {
           return std::string(c.flip_coupling == FlipCoupling::Joint ? "joint" : "independent");
         }},
        real("resample_spacing_mm", &AugmentConfig::resample_spacing_mm),
        {"resample_order",
         [](AugmentConfig& c, const std::string& v) {
           if (v == "before")
             c.resample_order = ResampleOrder::Before;
           else if (v == "after")
             c.resample_order = ResampleOrder::After;
           else
             throw ConfigError("config key 'resample_order': expected before or after, got '" + v + "'");
         },
         [](const AugmentConfig& c) {
           return std::string(c.resample_order == ResampleOrder::Before ? "before" : "after");
         }},
        {"master_seed", [](AugmentConfig& c, const std::string& v) { c.master_seed = to_u64("master_seed", v); },
         [](const AugmentConfig& c) { return std::to_string(c.master_seed); }},
    };
    return f;
  }();
  return all;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

const std::vector<std::string>& augment_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_config(AugmentConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    const auto& all = fields();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Field& f) { return f.key == key; });
    if (it == all.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(cfg, value);
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

AugmentConfig load_augment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  AugmentConfig cfg;
  apply_config(cfg, parse_key_values(ss.str()));
  return cfg;
}

std::string format_config(const AugmentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace fbpaug
