#ifndef FBPAUG_CONFIG_HPP
#define FBPAUG_CONFIG_HPP

#include "fbpaug/augment.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fbpaug {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored; a repeated key keeps its last value.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Keys accepted by apply_config, in the order format_config writes them.
const std::vector<std::string>& augment_config_keys();

/// Overwrites the fields named in `kv`. Unknown keys and unparsable values
/// throw ConfigError; the result is validated.
void apply_config(AugmentConfig& cfg, const std::map<std::string, std::string>& kv);

AugmentConfig load_augment_config(const std::filesystem::path& path);

/// Every key with its current value, one per line.
std::string format_config(const AugmentConfig& cfg);

}  // namespace fbpaug

#endif  // FBPAUG_CONFIG_HPP
