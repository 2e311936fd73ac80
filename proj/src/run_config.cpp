#include "qcorr/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qcorr {

namespace {

using nlohmann::json;

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return text;
}

double read_number(const json& value, const std::string& key) {
  if (!value.is_number())
    throw ConfigError("config field '" + key + "' must be a number");
  return value.get<double>();
}

int read_integer(const json& value, const std::string& key) {
  if (!value.is_number_integer())
    throw ConfigError("config field '" + key + "' must be an integer");
  return value.get<int>();
}

std::string read_string(const json& value, const std::string& key) {
  if (!value.is_string())
    throw ConfigError("config field '" + key + "' must be a string");
  return value.get<std::string>();
}

template <typename T>
void overlay(std::optional<T>& target, const std::optional<T>& source) {
  if (source.has_value()) target = source;
}

}  // namespace

WernerFamily parse_family(const std::string& text) {
  const std::string low = lowercase(text);
  if (low == "phi") return WernerFamily::Phi;
  if (low == "psi") return WernerFamily::Psi;
  throw ConfigError("unknown family '" + text + "' (expected phi or psi)");
}

DiscordMode parse_discord_mode(const std::string& text) {
  const std::string low = lowercase(text);
  if (low == "closed-form") return DiscordMode::ClosedForm;
  if (low == "numeric") return DiscordMode::Numeric;
  if (low == "both") return DiscordMode::Both;
  throw ConfigError("unknown discord mode '" + text +
                    "' (expected closed-form, numeric, or both)");
}

std::string family_name(WernerFamily family) {
  return family == WernerFamily::Phi ? "phi" : "psi";
}

std::string discord_mode_name(DiscordMode mode) {
  switch (mode) {
    case DiscordMode::ClosedForm:
      return "closed-form";
    case DiscordMode::Numeric:
      return "numeric";
    case DiscordMode::Both:
      return "both";
  }
  return "closed-form";
}

PartialRunConfig load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot read config file: " + path);
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config file " + path + " must hold a JSON object");

  PartialRunConfig out;
  for (const auto& [key, value] : doc.items()) {
    if (key == "p")
      out.p = read_number(value, key);
    else if (key == "alpha_re")
      out.alpha_re = read_number(value, key);
    else if (key == "alpha_im")
      out.alpha_im = read_number(value, key);
    else if (key == "gamma_over_omega")
      out.gamma_over_omega = read_number(value, key);
    else if (key == "family")
      out.family = parse_family(read_string(value, key));
    else if (key == "t_max_omega")
      out.t_max_omega = read_number(value, key);
    else if (key == "steps")
      out.steps = read_integer(value, key);
    else if (key == "discord_mode")
      out.discord_mode = parse_discord_mode(read_string(value, key));
    else if (key == "discord_death_threshold")
      out.discord_death_threshold = read_number(value, key);
    else if (key == "output_path")
      out.output_path = read_string(value, key);
    else
      throw ConfigError("unknown config key '" + key + "' in " + path);
  }
  return out;
}

RunConfig resolve_run_config(const PartialRunConfig& flags,
                             const std::optional<std::string>& config_path,
                             const std::vector<std::string>& required,
                             const RunConfig& defaults) {
  PartialRunConfig merged;
  if (config_path.has_value()) merged = load_config_file(*config_path);
  overlay(merged.p, flags.p);
  overlay(merged.alpha_re, flags.alpha_re);
  overlay(merged.alpha_im, flags.alpha_im);
  overlay(merged.gamma_over_omega, flags.gamma_over_omega);
  overlay(merged.family, flags.family);
  overlay(merged.t_max_omega, flags.t_max_omega);
  overlay(merged.steps, flags.steps);
  overlay(merged.discord_mode, flags.discord_mode);
  overlay(merged.discord_death_threshold, flags.discord_death_threshold);
  overlay(merged.output_path, flags.output_path);

  const auto is_set = [&merged](const std::string& field) {
    if (field == "p") return merged.p.has_value();
    if (field == "alpha_re") return merged.alpha_re.has_value();
    if (field == "gamma_over_omega") return merged.gamma_over_omega.has_value();
    if (field == "output_path") return merged.output_path.has_value();
    throw ConfigError("unknown required field '" + field + "'");
  };
  for (const std::string& field : required)
    if (!is_set(field))
      throw ConfigError("missing required parameter '" + field +
                        "' (set it via a flag or the config file)");

  RunConfig out = defaults;
  if (merged.p) out.p = *merged.p;
  if (merged.alpha_re) out.alpha_re = *merged.alpha_re;
  if (merged.alpha_im) out.alpha_im = *merged.alpha_im;
  if (merged.gamma_over_omega) out.gamma_over_omega = *merged.gamma_over_omega;
  if (merged.family) out.family = *merged.family;
  if (merged.t_max_omega) out.t_max_omega = *merged.t_max_omega;
  if (merged.steps) out.steps = *merged.steps;
  if (merged.discord_mode) out.discord_mode = *merged.discord_mode;
  if (merged.discord_death_threshold)
    out.discord_death_threshold = *merged.discord_death_threshold;
  if (merged.output_path) out.output_path = *merged.output_path;

  if (!(std::isfinite(out.p) && out.p >= 0.0 && out.p <= 1.0))
    throw ConfigError("p must lie in [0, 1]");
  if (!std::isfinite(out.alpha_re) || !std::isfinite(out.alpha_im))
    throw ConfigError("alpha must be finite");
  if (!(std::isfinite(out.gamma_over_omega) && out.gamma_over_omega >= 0.0))
    throw ConfigError("gamma_over_omega must be >= 0");
  if (!(std::isfinite(out.t_max_omega) && out.t_max_omega > 0.0))
    throw ConfigError("t_max_omega must be > 0");
  if (out.steps < 2) throw ConfigError("steps must be >= 2");
  if (!(std::isfinite(out.discord_death_threshold) &&
        out.discord_death_threshold > 0.0))
    throw ConfigError("discord_death_threshold must be > 0");
  return out;
}

}  // namespace qcorr
