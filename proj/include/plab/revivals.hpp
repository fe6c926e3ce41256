#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "plab/errors.hpp"
#include "plab/fields.hpp"
#include "plab/polariton.hpp"

namespace plab::revivals {

/// Operational definition of the collapse time T_C measured on a revival
/// peak. The paper quotes T_C ~ 0.082 T_R without an operational definition;
/// calibrate_width_definition() selects the candidate reproducing that ratio
/// on the theoretical theta = pi/2 curve (first_zero for the 85Rb levels).
enum class WidthDefinition { half_max, inv_e, first_zero };

inline std::string to_string(WidthDefinition def) {
  switch (def) {
    case WidthDefinition::half_max: return "half_max";
    case WidthDefinition::inv_e: return "inv_e";
    case WidthDefinition::first_zero: return "first_zero";
  }
  return "?";
}

struct RevivalReport {
  double t_r = 0.0;                                   // first full-revival time
  std::vector<std::pair<double, double>> half_revivals;  // (time, amplitude)
  std::optional<double> t_c;                          // collapse width at t_r/2
  std::optional<double> ratio;                        // t_c / t_r
  WidthDefinition definition = WidthDefinition::first_zero;
};

namespace detail {

struct Peak {
  double time;
  double amplitude;
  int index;
};

/// Quadratic refinement of an interior extremum through three samples.
inline std::pair<double, double> refine_quadratic(const std::vector<double>& ts,
                                                  const std::vector<double>& ys, int i) {
  const double y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return {ts[i], y1};
  const double delta = 0.5 * (y0 - y2) / denom;
  const double dt = ts[i + 1] - ts[i];
  const double yref = y1 - 0.25 * (y0 - y2) * delta;
  return {ts[i] + delta * dt, yref};
}

inline std::vector<Peak> local_maxima(const std::vector<double>& ts,
                                      const std::vector<double>& ys) {
  std::vector<Peak> out;
  for (int i = 1; i + 1 < static_cast<int>(ys.size()); ++i) {
    if (ys[i] >= ys[i - 1] && ys[i] > ys[i + 1]) {
      auto [t, a] = refine_quadratic(ts, ys, i);
      out.push_back({t, a, i});
    }
  }
  return out;
}

/// Time from the refined peak to the level crossing, averaged over both
/// sides (the theoretical peaks are symmetric).
inline std::optional<double> level_halfwidth(const std::vector<double>& ts,
                                             const std::vector<double>& ys, const Peak& peak,
                                             double level) {
  double right = -1.0, left = -1.0;
  for (int i = peak.index; i + 1 < static_cast<int>(ys.size()); ++i) {
    if (ys[i + 1] <= level) {
      const double frac = (ys[i] - level) / (ys[i] - ys[i + 1]);
      right = ts[i] + frac * (ts[i + 1] - ts[i]) - peak.time;
      break;
    }
  }
  for (int i = peak.index; i > 0; --i) {
    if (ys[i - 1] <= level) {
      const double frac = (ys[i] - level) / (ys[i] - ys[i - 1]);
      left = peak.time - (ts[i] - frac * (ts[i] - ts[i - 1]));
      break;
    }
  }
  if (right < 0.0 || left < 0.0) return std::nullopt;
  return 0.5 * (left + right);
}

/// Time from the refined peak to the first local minimum on each side.
inline std::optional<double> first_zero_halfwidth(const std::vector<double>& ts,
                                                  const std::vector<double>& ys,
                                                  const Peak& peak) {
  double right = -1.0, left = -1.0;
  for (int i = peak.index + 1; i + 1 < static_cast<int>(ys.size()); ++i) {
    if (ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1]) {
      auto [t, a] = refine_quadratic(ts, ys, i);
      right = t - peak.time;
      break;
    }
  }
  for (int i = peak.index - 1; i > 0; --i) {
    if (ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1]) {
      auto [t, a] = refine_quadratic(ts, ys, i);
      left = peak.time - t;
      break;
    }
  }
  if (right < 0.0 || left < 0.0) return std::nullopt;
  return 0.5 * (left + right);
}

inline std::optional<double> peak_width(const std::vector<double>& ts,
                                        const std::vector<double>& ys, const Peak& peak,
                                        WidthDefinition def) {
  switch (def) {
    case WidthDefinition::half_max:
      return level_halfwidth(ts, ys, peak, 0.5 * peak.amplitude);
    case WidthDefinition::inv_e:
      return level_halfwidth(ts, ys, peak, peak.amplitude / std::numbers::e);
    case WidthDefinition::first_zero:
      return first_zero_halfwidth(ts, ys, peak);
  }
  return std::nullopt;
}

}  // namespace detail

/// Highest local maximum within +-window of t_expected, refined
/// quadratically. Returns nullopt when none exists.
inline std::optional<std::pair<double, double>> peak_near(
    const polariton::EfficiencyCurve& curve, double t_expected, double window) {
  const detail::Peak* best = nullptr;
  static thread_local std::vector<detail::Peak> peaks;
  peaks = detail::local_maxima(curve.times, curve.eta);
  for (const auto& p : peaks) {
    if (std::abs(p.time - t_expected) > window) continue;
    if (!best || p.amplitude > best->amplitude) best = &p;
  }
  if (!best) return std::nullopt;
  return std::make_pair(best->time, best->amplitude);
}

/// Collapse width of the peak whose refined position is nearest peak_time.
inline std::optional<double> width_of_peak_near(const polariton::EfficiencyCurve& curve,
                                                double peak_time, WidthDefinition def) {
  const auto peaks = detail::local_maxima(curve.times, curve.eta);
  const detail::Peak* best = nullptr;
  for (const auto& p : peaks)
    if (!best || std::abs(p.time - peak_time) < std::abs(best->time - peak_time)) best = &p;
  if (!best) return std::nullopt;
  return detail::peak_width(curve.times, curve.eta, *best, def);
}

/// Locates revivals on a sampled efficiency curve. t_r is the measured time
/// of the full revival (refined peak with amplitude > 0.99; exact revivals
/// have amplitude 1 under g_a = -g_b, the margin tolerates grid
/// discretization). When the curve metadata carries a field, the full
/// revival is looked up near the analytic Larmor period, which keeps theta=0
/// curves (fully revived already at half period) reporting the Larmor period
/// itself. Half-revival entries are the local maxima nearest odd multiples
/// of t_r/2, whatever their amplitude; the threshold gates failure reporting
/// only. t_c is measured on the peak at t_r/2 when one exists.
inline RevivalReport find_revivals(const polariton::EfficiencyCurve& curve,
                                   double threshold = 0.5,
                                   WidthDefinition def = WidthDefinition::first_zero) {
  const auto& ts = curve.times;
  const auto& ys = curve.eta;
  if (ts.size() < 16) throw AnalysisError("efficiency curve has too few samples");

  // Validate sampling density against the analytic Larmor period.
  std::optional<double> analytic_period;
  if (curve.field.b_gauss > 0.0 && curve.constants.g_b != 0.0)
    analytic_period = fields::larmor_period(curve.field, curve.constants);
  if (analytic_period) {
    double max_step = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) max_step = std::max(max_step, ts[i] - ts[i - 1]);
    if (max_step >= *analytic_period / 200.0)
      throw AnalysisError("grid step must be below the Larmor period / 200");
  }

  const auto peaks = detail::local_maxima(ts, ys);
  const bool any_above = std::any_of(peaks.begin(), peaks.end(),
                                     [&](const auto& p) { return p.amplitude > threshold; });
  if (!any_above) throw AnalysisError("no revival peak exceeds the detection threshold");

  RevivalReport report;
  report.definition = def;
  const detail::Peak* full = nullptr;
  for (const auto& p : peaks) {
    if (p.amplitude <= 0.99) continue;
    if (analytic_period && std::abs(p.time - *analytic_period) > *analytic_period / 8.0)
      continue;
    full = &p;
    break;
  }
  if (!full) throw AnalysisError("no full revival (amplitude > 0.99) found");
  report.t_r = full->time;

  const double half = report.t_r / 2.0;
  for (int k = 1;; k += 2) {
    const double target = k * half;
    if (target > ts.back()) break;
    const detail::Peak* best = nullptr;
    for (const auto& p : peaks) {
      if (std::abs(p.time - target) > half / 4.0) continue;
      if (!best || p.amplitude > best->amplitude) best = &p;
    }
    if (!best) continue;
    report.half_revivals.emplace_back(best->time, best->amplitude);
    if (k == 1) {
      report.t_c = detail::peak_width(ts, ys, *best, def);
      if (report.t_c) report.ratio = *report.t_c / report.t_r;
    }
  }
  return report;
}

/// (t_r, t_c) pairs for the theoretical theta = pi/2 curves over a list of
/// field magnitudes; the ratio t_c/t_r is field-independent by the scale
/// invariance eta_B(t) = eta_B'(t B'/B).
inline std::vector<std::pair<double, double>> collapse_revival_scaling(
    const cg::DarkStateWeights& weights, const fields::LevelConstants& consts,
    const std::vector<double>& b_list, double theta,
    WidthDefinition def = WidthDefinition::first_zero) {
  if (std::abs(theta - std::numbers::pi / 2.0) > 1e-12)
    throw std::invalid_argument("collapse/revival scaling is defined at theta = pi/2");
  if (b_list.empty()) throw std::invalid_argument("field list is empty");
  for (double b : b_list)
    if (!(b > 0.0)) throw std::invalid_argument("field magnitudes must be positive");

  // One absolute grid step for all magnitudes, fine enough for the fastest.
  fields::FieldConfig probe;
  probe.theta = theta;
  probe.b_gauss = *std::max_element(b_list.begin(), b_list.end());
  const double step = fields::larmor_period(probe, consts) / 500.0;
  probe.b_gauss = *std::min_element(b_list.begin(), b_list.end());
  const double span = 1.15 * fields::larmor_period(probe, consts);

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(span / step) + 2);
  for (double t = 0.0; t <= span; t += step) grid.push_back(t);

  std::vector<std::pair<double, double>> out;
  for (double b : b_list) {
    fields::FieldConfig field;
    field.b_gauss = b;
    field.theta = theta;
    const auto curve = polariton::efficiency_curve(weights, field, consts, grid);
    const auto report = find_revivals(curve, 0.5, def);
    if (!report.t_c)
      throw AnalysisError("collapse width not measurable at B = " + std::to_string(b));
    out.emplace_back(report.t_r, *report.t_c);
  }
  return out;
}

/// Runs the three candidate width definitions on the theoretical
/// theta = pi/2 curve and returns the one whose t_c/t_r matches the
/// predicted 0.082 within 10%.
inline WidthDefinition calibrate_width_definition(const cg::DarkStateWeights& weights,
                                                  const fields::LevelConstants& consts,
                                                  std::vector<double>* ratios = nullptr) {
  constexpr double target = 0.082;
  std::optional<WidthDefinition> chosen;
  double best_err = 0.10;
  for (auto def :
       {WidthDefinition::half_max, WidthDefinition::inv_e, WidthDefinition::first_zero}) {
    const auto pairs =
        collapse_revival_scaling(weights, consts, {0.47}, std::numbers::pi / 2.0, def);
    const double ratio = pairs[0].second / pairs[0].first;
    if (ratios) ratios->push_back(ratio);
    const double err = std::abs(ratio / target - 1.0);
    if (err < best_err) {
      best_err = err;
      chosen = def;
    }
  }
  if (!chosen)
    throw AnalysisError("no width definition reproduces T_C ~ 0.082 T_R within 10%");
  return *chosen;
}

}  // namespace plab::revivals
