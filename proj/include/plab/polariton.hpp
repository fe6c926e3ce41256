#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plab/angmom.hpp"
#include "plab/cg.hpp"
#include "plab/errors.hpp"
#include "plab/fields.hpp"
#include "plab/half_int.hpp"

namespace plab::polariton {

using Eigen::MatrixXcd;

/// Inputs fixing the dark-state polariton mixing: level structure, dark-state
/// weights, atom number, signal coupling and control Rabi frequency. Coupling
/// units only need to be mutually consistent; the exposed fractions are
/// dimensionless.
struct PolaritonConfig {
  fields::HyperfineSpec levels;
  cg::DarkStateWeights weights;
  double n_atoms = 1;
  double coupling_g = 1.0;
  double control_rabi = 1.0;
};

/// Photonic and atomic fractions of the dark-state polariton:
///   photonic = |Omega|^2 / (|Omega|^2 + N p |g|^2 sum R^2)
/// with p = 1/(2 F_b + 1); the pair sums to 1.
inline std::pair<double, double> mixing_fractions(const PolaritonConfig& cfg) {
  if (!cfg.weights.connected)
    throw ModelError("polariton undefined for unconnected lambda configuration");
  if (cfg.n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  double sum_r2 = 0.0;
  for (const auto& c : cfg.weights.components) sum_r2 += exact::to_double(c.r_squared);
  const double p = 1.0 / dimension(cfg.weights.f_b);
  const double omega2 = cfg.control_rabi * cfg.control_rabi;
  const double atomic_term =
      cfg.n_atoms * p * cfg.coupling_g * cfg.coupling_g * sum_r2;
  const double denom = omega2 + atomic_term;
  if (denom == 0.0)
    throw std::invalid_argument("control Rabi frequency and coupling cannot both vanish");
  return {omega2 / denom, atomic_term / denom};
}

/// c-number amplitudes of the stored spin-wave coherences for one mode,
/// indexed (m_b = -F_b..F_b) x (m_a = -F_a..F_a), ascending.
struct CoherenceMatrix {
  HalfInt f_b, f_a;
  MatrixXcd amplitudes;
};

/// Precession of the hyperfine coherences in the applied field:
///   S_{m,n}(t) = sum_{m1,m2} conj(D^(b)_{m,m1}) D^(a)_{n,m2} S_{m1,m2}(0),
/// the two-sided rotation with the level-b and level-a matrices. Unitary on
/// both indices, so the Frobenius norm is preserved.
inline CoherenceMatrix evolve_coherences(const CoherenceMatrix& c0,
                                         const fields::FieldConfig& field,
                                         const fields::LevelConstants& consts, double t) {
  if (c0.amplitudes.rows() != dimension(c0.f_b) || c0.amplitudes.cols() != dimension(c0.f_a))
    throw std::invalid_argument("coherence matrix dimensions do not match (F_b, F_a)");
  const auto omega = fields::omega_vector(field, consts);
  const auto db = angmom::RotationGenerator(angmom::build_spin_operators(c0.f_b), omega,
                                            consts.g_b)
                      .at(t);
  const auto da = angmom::RotationGenerator(angmom::build_spin_operators(c0.f_a), omega,
                                            consts.g_a)
                      .at(t);
  CoherenceMatrix out;
  out.f_b = c0.f_b;
  out.f_a = c0.f_a;
  out.amplitudes = db.conjugate() * c0.amplitudes * da.transpose();
  return out;
}

namespace detail {

/// Eq.-(3)-style evaluator for one field magnitude/orientation: caches the
/// spectral form of both level generators and the normalized dark-state
/// coefficients c_m = R_m / sqrt(sum R^2).
class EfficiencyEvaluator {
public:
  EfficiencyEvaluator(const cg::DarkStateWeights& weights, const fields::FieldConfig& field,
                      const fields::LevelConstants& consts)
      : f_b_(weights.f_b),
        f_a_(weights.f_a),
        gen_b_(angmom::build_spin_operators(weights.f_b), fields::omega_vector(field, consts),
               consts.g_b),
        gen_a_(angmom::build_spin_operators(weights.f_a), fields::omega_vector(field, consts),
               consts.g_a) {
    if (!weights.connected)
      throw ModelError("retrieval efficiency undefined for unconnected lambda configuration");
    double sum_r2 = 0.0;
    for (const auto& c : weights.components) sum_r2 += exact::to_double(c.r_squared);
    const double norm = std::sqrt(sum_r2);
    for (const auto& c : weights.components) {
      coeff_.emplace_back(c.m, weights.r_value(c) / norm);
    }
  }

  /// |sum_{m1,m2} c_{m1} c_{m2} conj(D^(b)_{m1,m2}) D^(a)_{m1,m2}|^2
  double at(double t) const {
    const MatrixXcd db = gen_b_.at(t);
    const MatrixXcd da = gen_a_.at(t);
    std::complex<double> acc = 0.0;
    for (const auto& [m1, c1] : coeff_)
      for (const auto& [m2, c2] : coeff_) {
        const int ib1 = (m1.twice() + f_b_.twice()) / 2;
        const int ib2 = (m2.twice() + f_b_.twice()) / 2;
        const int ia1 = (m1.twice() + f_a_.twice()) / 2;
        const int ia2 = (m2.twice() + f_a_.twice()) / 2;
        acc += c1 * c2 * std::conj(db(ib1, ib2)) * da(ia1, ia2);
      }
    return std::norm(acc);
  }

private:
  HalfInt f_b_, f_a_;
  angmom::RotationGenerator gen_b_, gen_a_;
  std::vector<std::pair<HalfInt, double>> coeff_;
};

}  // namespace detail

/// Normalized dark-state polariton number <N(t_s)> / <N(0)> after storage
/// time t_s. With a gradient model configured, the ensemble-weighted
/// incoherent average over field magnitudes is returned.
inline double efficiency(const cg::DarkStateWeights& weights, const fields::FieldConfig& field,
                         const fields::LevelConstants& consts, double t_s) {
  double acc = 0.0;
  for (const auto& [b, w] : fields::ensemble_fields(field)) {
    fields::FieldConfig single = field;
    single.b_gauss = b;
    single.gradient_model = fields::GradientModel::none;
    single.gradient_spread_gauss = 0.0;
    single.n_ensemble = 1;
    acc += w * detail::EfficiencyEvaluator(weights, single, consts).at(t_s);
  }
  return acc;
}

/// Sampled retieval-efficiency curve with the configuration that produced it.
struct EfficiencyCurve {
  std::vector<double> times;
  std::vector<double> eta;
  fields::FieldConfig field;
  fields::LevelConstants constants;
  std::string weight_fingerprint;
};

inline EfficiencyCurve efficiency_curve(const cg::DarkStateWeights& weights,
                                        const fields::FieldConfig& field,
                                        const fields::LevelConstants& consts,
                                        const std::vector<double>& t_grid) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");

  const auto ensemble = fields::ensemble_fields(field);
  std::vector<detail::EfficiencyEvaluator> evals;
  evals.reserve(ensemble.size());
  for (const auto& [b, w] : ensemble) {
    fields::FieldConfig single = field;
    single.b_gauss = b;
    single.gradient_model = fields::GradientModel::none;
    single.gradient_spread_gauss = 0.0;
    single.n_ensemble = 1;
    evals.emplace_back(weights, single, consts);
  }

  EfficiencyCurve curve;
  curve.times = t_grid;
  curve.eta.resize(t_grid.size());
  curve.field = field;
  curve.constants = consts;
  curve.weight_fingerprint = weights.fingerprint();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ensemble.size(); ++j)
      acc += ensemble[j].second * evals[j].at(t_grid[i]);
    curve.eta[i] = acc;
  }
  return curve;
}

/// One efficiency curve per field orientation, all at the same magnitude.
inline std::vector<EfficiencyCurve> theta_sweep(const cg::DarkStateWeights& weights,
                                                double b_gauss,
                                                const fields::LevelConstants& consts,
                                                const std::vector<double>& thetas,
                                                const std::vector<double>& t_grid) {
  std::vector<EfficiencyCurve> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    fields::FieldConfig field;
    field.b_gauss = b_gauss;
    field.theta = theta;
    out.push_back(efficiency_curve(weights, field, consts, t_grid));
  }
  return out;
}

}  // namespace plab::polariton
