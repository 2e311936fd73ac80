#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcorr/cavity.hpp"
#include "qcorr/correlations.hpp"

namespace qcorr {

/// Thrown when file output fails (maps to a distinct CLI exit code).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform time grid over [0, t_max_omega] (in units of omega_eff * t)
/// with `steps` intervals, i.e. steps + 1 points. steps >= 2.
struct GridSpec {
  double t_max_omega = 20.0;
  int steps = 2000;

  void validate() const;  // throws std::invalid_argument
  std::vector<double> points() const;
};

struct TimeSeriesRow {
  double omega_t;
  double f_sq;            // |f(t)|^2, in (0, 1]
  double discord;         // bits
  double classical_corr;  // bits
  double mutual_info;     // bits; discord = mutual_info - classical_corr
  double concurrence;     // in [0, 1]
};

/// How the discord / classical-correlation / mutual-information columns are
/// produced: the Bell-diagonal closed forms, the numerical minimizer, or
/// closed forms plus a numeric cross-check gap.
enum class DiscordMode { ClosedForm, Numeric, Both };

/// A computed trajectory together with the parameters that generated it,
/// so downstream analysis (death-interval refinement) can re-evaluate the
/// underlying analytic functions rather than interpolate samples.
struct TimeSeries {
  WernerSpec spec;
  PhysicalParams params;
  GridSpec grid;
  DiscordMode mode = DiscordMode::ClosedForm;
  std::vector<TimeSeriesRow> rows;
  /// max |closed-form - numeric| discord over the grid; set in Both mode.
  std::optional<double> closed_vs_numeric_max_gap;
};

TimeSeries time_series(const WernerSpec& spec, const PhysicalParams& params,
                       const GridSpec& grid,
                       DiscordMode mode = DiscordMode::ClosedForm);

enum class DeathQuantity { Concurrence, Discord };

/// Maximal interval (in omega_t) where a quantity stays below threshold
/// (at exactly zero for concurrence when threshold = 0). t_end is absent
/// for an interval still open at the end of the series.
struct DeathEvent {
  DeathQuantity quantity;
  double t_start;
  std::optional<double> t_end;
  double threshold;
};

/// Scans the series for below-threshold intervals and refines each closed
/// boundary by bisection on the analytic expression (concurrence:
/// p |f|^2 - (1-p)/2 vs threshold; discord: closed form vs threshold) to
/// 1e-10 in omega_t, so event times do not depend on the sampling grid.
/// Discord requires threshold > 0 (the analytic discord never reaches an
/// exact zero for p > 0); concurrence accepts threshold >= 0.
std::vector<DeathEvent> detect_death_intervals(const TimeSeries& series,
                                               DeathQuantity quantity,
                                               double threshold);

/// Smallest omega_t > 0 where p |f(t)|^2 falls to (1-p)/2 (the concurrence
/// death onset), located by a sign-change scan (step 0.001) plus bisection
/// to 1e-10. Returns 0 for p <= 1/3 (never entangled: the death interval
/// starts at t = 0, reported as this degenerate onset) and nullopt when no
/// crossing occurs (the asymptote stays above the threshold, gamma = 0
/// periodic minima included).
std::optional<double> esd_onset(double p, const PhysicalParams& params);

/// Closed-form discord on a (gamma_over_omega x omega_t) grid; one row per
/// gamma value, one column per time.
std::vector<std::vector<double>> sweep_gamma(
    const WernerSpec& spec, Complex alpha,
    const std::vector<double>& gamma_over_omega_grid,
    const std::vector<double>& omega_t_grid);

/// Formats a double with 12 significant digits, locale-independent.
std::string format_sig12(double value);

/// CSV with header omega_t,f_sq,discord,classical_corr,mutual_info,
/// concurrence; 12 significant digits; LF line endings; deterministic.
std::string csv_from_series(const TimeSeries& series);

/// CSV for the gamma sweep: header gamma_over_omega,<t values...>, one row
/// per gamma.
std::string csv_from_sweep(const std::vector<double>& gamma_over_omega_grid,
                           const std::vector<double>& omega_t_grid,
                           const std::vector<std::vector<double>>& discord);

/// Writes content to path; throws IoError on failure.
void emit_csv(const std::string& content, const std::string& path);

}  // namespace qcorr
