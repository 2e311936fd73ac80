#include "qcorr/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

namespace qcorr {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

double magnitude_sq(const PhysicalParams& params, double omega_t) {
  return std::norm(decoherence_factor(params, omega_t / params.omega_eff));
}

/// Signed distance of the raw (unclamped) concurrence from the threshold.
double concurrence_margin(const WernerSpec& spec, const PhysicalParams& params,
                          double omega_t, double threshold) {
  return spec.p * magnitude_sq(params, omega_t) - (1.0 - spec.p) / 2.0 -
         threshold;
}

/// Signed distance of the closed-form discord from the threshold.
double discord_margin(const WernerSpec& spec, const PhysicalParams& params,
                      double omega_t, double threshold) {
  const double fsq = magnitude_sq(params, omega_t);
  return discord_bell_diagonal(model_correlation_vector(spec, fsq)) - threshold;
}

/// Bisects a confirmed sign change of margin() on [lo, hi] (margin >= 0 at
/// lo xor at hi) down to 1e-10 in omega_t; returns the midpoint.
double bisect_crossing(const std::function<double(double)>& margin, double lo,
                       double hi) {
  bool lo_below = margin(lo) < 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if ((margin(mid) < 0.0) == lo_below)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void GridSpec::validate() const {
  require(std::isfinite(t_max_omega) && t_max_omega > 0.0,
          "grid: t_max_omega must be finite and > 0");
  require(steps >= 2, "grid: steps must be >= 2");
}

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> xs(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    xs[static_cast<std::size_t>(k)] =
        t_max_omega * static_cast<double>(k) / steps;
  return xs;
}

TimeSeries time_series(const WernerSpec& spec, const PhysicalParams& params,
                       const GridSpec& grid, DiscordMode mode) {
  spec.validate();
  params.validate();
  grid.validate();

  TimeSeries series{spec, params, grid, mode, {}, std::nullopt};
  const std::vector<double> xs = grid.points();
  series.rows.reserve(xs.size());

  double max_gap = 0.0;
  for (const double x : xs) {
    const double t = x / params.omega_eff;
    const double fsq = std::norm(decoherence_factor(params, t));
    const DensityMatrix state = two_atom_state(spec, params, t);

    TimeSeriesRow row{};
    row.omega_t = x;
    row.f_sq = fsq;
    row.concurrence = concurrence_xstate(state);

    if (mode == DiscordMode::Numeric) {
      const CorrelationReport report = discord_numeric(state);
      row.mutual_info = report.mutual_info;
      row.classical_corr = report.classical_corr;
      row.discord = report.discord;
    } else {
      const CorrelationVector d = model_correlation_vector(spec, fsq);
      row.mutual_info = bell_diagonal_mutual_information(d);
      row.classical_corr = bell_diagonal_classical_correlation(d);
      row.discord = row.mutual_info - row.classical_corr;
      if (row.discord < 0.0 && row.discord > -1e-12) row.discord = 0.0;
      if (mode == DiscordMode::Both) {
        const CorrelationReport report = discord_numeric(state);
        max_gap = std::max(max_gap, std::abs(report.discord - row.discord));
      }
    }
    series.rows.push_back(row);
  }
  if (mode == DiscordMode::Both) series.closed_vs_numeric_max_gap = max_gap;
  return series;
}

std::vector<DeathEvent> detect_death_intervals(const TimeSeries& series,
                                               DeathQuantity quantity,
                                               double threshold) {
  require(std::isfinite(threshold) && threshold >= 0.0,
          "death intervals: threshold must be finite and >= 0");
  if (quantity == DeathQuantity::Discord)
    require(threshold > 0.0,
            "death intervals: discord needs a positive threshold (the "
            "analytic discord never reaches an exact zero for p > 0)");
  require(series.rows.size() >= 2, "death intervals: series too short");

  const auto margin = [&](double x) {
    return quantity == DeathQuantity::Concurrence
               ? concurrence_margin(series.spec, series.params, x, threshold)
               : discord_margin(series.spec, series.params, x, threshold);
  };
  const auto below = [&](const TimeSeriesRow& row) {
    const double v = quantity == DeathQuantity::Concurrence ? row.concurrence
                                                            : row.discord;
    return (quantity == DeathQuantity::Concurrence && threshold == 0.0)
               ? v <= 0.0
               : v < threshold;
  };

  std::vector<DeathEvent> events;
  const auto& rows = series.rows;
  std::size_t i = 0;
  while (i < rows.size()) {
    if (!below(rows[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < rows.size() && below(rows[j + 1])) ++j;

    DeathEvent event{quantity, rows[i].omega_t, std::nullopt, threshold};
    if (i > 0) {
      const double lo = rows[i - 1].omega_t, hi = rows[i].omega_t;
      // Refine only when the analytic margin confirms the bracket; the
      // sampled columns and the analytic expression can disagree within
      // minimizer tolerance right at the threshold.
      if ((margin(lo) < 0.0) != (margin(hi) < 0.0))
        event.t_start = bisect_crossing(margin, lo, hi);
    }
    if (j + 1 < rows.size()) {
      const double lo = rows[j].omega_t, hi = rows[j + 1].omega_t;
      event.t_end = ((margin(lo) < 0.0) != (margin(hi) < 0.0))
                        ? bisect_crossing(margin, lo, hi)
                        : rows[j].omega_t;
    }
    events.push_back(event);
    i = j + 1;
  }
  return events;
}

std::optional<double> esd_onset(double p, const PhysicalParams& params) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
          "esd_onset: p must lie in [0, 1]");
  params.validate();
  if (p <= 1.0 / 3.0) return 0.0;  // never entangled: degenerate onset at t=0

  const WernerSpec spec{p, WernerFamily::Phi};
  const auto margin = [&](double x) {
    return concurrence_margin(spec, params, x, 0.0);
  };

  const double g = params.gamma_over_omega();
  // Without dissipation |f|^2 is pi-periodic, so one period decides; with
  // dissipation the asymptote is reached (to ~1e-9) by omega_t = 10 / g.
  const double scan_end =
      g == 0.0 ? std::numbers::pi : std::min(10.0 / g, 2e4);
  const double step = 1e-3;

  double prev_x = 0.0;
  double prev_margin = margin(0.0);  // (3p - 1)/2 > 0 here
  for (double x = step; x <= scan_end + 0.5 * step; x += step) {
    const double m = margin(x);
    if ((m < 0.0) != (prev_margin < 0.0))
      return bisect_crossing(margin, prev_x, x);
    prev_x = x;
    prev_margin = m;
  }
  return std::nullopt;
}

std::vector<std::vector<double>> sweep_gamma(
    const WernerSpec& spec, Complex alpha,
    const std::vector<double>& gamma_over_omega_grid,
    const std::vector<double>& omega_t_grid) {
  spec.validate();
  require(!gamma_over_omega_grid.empty(), "sweep: empty gamma grid");
  require(!omega_t_grid.empty(), "sweep: empty time grid");

  std::vector<std::vector<double>> out;
  out.reserve(gamma_over_omega_grid.size());
  for (const double g : gamma_over_omega_grid) {
    const PhysicalParams params = PhysicalParams::dimensionless(g, alpha);
    std::vector<double> row;
    row.reserve(omega_t_grid.size());
    for (const double x : omega_t_grid) {
      const double fsq = magnitude_sq(params, x);
      row.push_back(discord_bell_diagonal(model_correlation_vector(spec, fsq)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_sig12(double value) {
  if (value == 0.0) value = 0.0;  // collapse negative zero
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 12);
  return std::string(buf, result.ptr);
}

std::string csv_from_series(const TimeSeries& series) {
  std::string out =
      "omega_t,f_sq,discord,classical_corr,mutual_info,concurrence\n";
  for (const TimeSeriesRow& row : series.rows) {
    out += format_sig12(row.omega_t);
    out += ',';
    out += format_sig12(row.f_sq);
    out += ',';
    out += format_sig12(row.discord);
    out += ',';
    out += format_sig12(row.classical_corr);
    out += ',';
    out += format_sig12(row.mutual_info);
    out += ',';
    out += format_sig12(row.concurrence);
    out += '\n';
  }
  return out;
}

std::string csv_from_sweep(const std::vector<double>& gamma_over_omega_grid,
                           const std::vector<double>& omega_t_grid,
                           const std::vector<std::vector<double>>& discord) {
  require(discord.size() == gamma_over_omega_grid.size(),
          "sweep csv: row count mismatch");
  std::string out = "gamma_over_omega";
  for (const double x : omega_t_grid) {
    out += ',';
    out += format_sig12(x);
  }
  out += '\n';
  for (std::size_t r = 0; r < discord.size(); ++r) {
    require(discord[r].size() == omega_t_grid.size(),
            "sweep csv: column count mismatch");
    out += format_sig12(gamma_over_omega_grid[r]);
    for (const double v : discord[r]) {
      out += ',';
      out += format_sig12(v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::string& content, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  file.flush();
  if (!file) throw IoError("write failed: " + path);
}

}  // namespace qcorr
