#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qcorr/cavity.hpp"
#include "qcorr/scan.hpp"

namespace qcorr {

/// Thrown on unusable configuration: unknown keys, wrong types, missing
/// required fields, out-of-range values (maps to the usage-error exit code).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved run parameters for a dynamics run.
struct RunConfig {
  double p = 0.0;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double gamma_over_omega = 0.0;
  WernerFamily family = WernerFamily::Phi;
  double t_max_omega = 20.0;
  int steps = 2000;
  DiscordMode discord_mode = DiscordMode::ClosedForm;
  double discord_death_threshold = 1e-3;
  std::string output_path;

  Complex alpha() const { return Complex(alpha_re, alpha_im); }
  WernerSpec werner_spec() const { return WernerSpec{p, family}; }
  PhysicalParams physical_params() const {
    return PhysicalParams::dimensionless(gamma_over_omega, alpha());
  }
  GridSpec grid_spec() const { return GridSpec{t_max_omega, steps}; }
};

/// Partially specified parameters, as gathered from one source (built-in
/// defaults, a JSON config file, or command-line flags). Absent fields fall
/// through to the next-lower-precedence source.
struct PartialRunConfig {
  std::optional<double> p;
  std::optional<double> alpha_re;
  std::optional<double> alpha_im;
  std::optional<double> gamma_over_omega;
  std::optional<WernerFamily> family;
  std::optional<double> t_max_omega;
  std::optional<int> steps;
  std::optional<DiscordMode> discord_mode;
  std::optional<double> discord_death_threshold;
  std::optional<std::string> output_path;
};

WernerFamily parse_family(const std::string& text);         // throws ConfigError
DiscordMode parse_discord_mode(const std::string& text);    // throws ConfigError
std::string family_name(WernerFamily family);
std::string discord_mode_name(DiscordMode mode);

/// Parses a flat JSON object with the RunConfig field names (family and
/// discord_mode as strings). Unknown keys or wrong types are errors.
PartialRunConfig load_config_file(const std::string& path);

/// Merges flag values over config-file values over the `defaults` layer,
/// then validates ranges. Fields in `required` ("p", "alpha_re",
/// "gamma_over_omega", "output_path") must end up set by some layer above
/// the defaults.
RunConfig resolve_run_config(const PartialRunConfig& flags,
                             const std::optional<std::string>& config_path,
                             const std::vector<std::string>& required,
                             const RunConfig& defaults = RunConfig{});

}  // namespace qcorr
