#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plab/half_int.hpp"

namespace plab::fields {

/// Lande g-factors of the two ground hyperfine levels and mu_B/h.
/// The default 85Rb values satisfy g_a = -g_b (nuclear moment ignored);
/// overriding that symmetry is allowed but is flagged in CLI metadata.
struct LevelConstants {
  double g_a = +1.0 / 3.0;
  double g_b = -1.0 / 3.0;
  double mu_b_mhz_per_gauss = 1.399625;  // Bohr magneton over Planck constant

  bool lande_symmetric() const { return g_a == -g_b; }
};

/// Atomic species configuration: the lambda level triple plus g-factors.
struct HyperfineSpec {
  HalfInt f_a{3}, f_b{2}, f_c{3};
  LevelConstants constants;
};

enum class GradientModel { none, uniform_interval, gaussian };

/// Applied dc magnetic field. theta is the angle to the signal wavevector,
/// which defines the z axis; gradient_spread models residual field
/// inhomogeneity as a distribution over magnitudes.
struct FieldConfig {
  double b_gauss = 0.47;
  double theta = 0.0;
  double phi = 0.0;
  GradientModel gradient_model = GradientModel::none;
  double gradient_spread_gauss = 0.0;
  int n_ensemble = 1;

  void validate() const {
    if (!(b_gauss >= 0.0)) throw std::invalid_argument("field magnitude must be >= 0");
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
      throw std::invalid_argument("theta must lie in [0, pi]");
    if (!(gradient_spread_gauss >= 0.0))
      throw std::invalid_argument("gradient spread must be >= 0");
    if (n_ensemble < 1) throw std::invalid_argument("n_ensemble must be >= 1");
  }
};

/// Larmor angular frequency vector Omega = mu_B B / hbar, in rad/s.
inline Eigen::Vector3d omega_vector(const FieldConfig& field,
                                    const LevelConstants& consts = LevelConstants{}) {
  field.validate();
  const double norm = 2.0 * std::numbers::pi * consts.mu_b_mhz_per_gauss * 1e6 * field.b_gauss;
  return norm * Eigen::Vector3d(std::sin(field.theta) * std::cos(field.phi),
                                std::sin(field.theta) * std::sin(field.phi),
                                std::cos(field.theta));
}

/// Ground-level precession period 2 pi / |g_b Omega|, in seconds.
inline double larmor_period(const FieldConfig& field, const LevelConstants& consts) {
  field.validate();
  if (field.b_gauss == 0.0) throw std::invalid_argument("Larmor period undefined for B = 0");
  if (consts.g_b == 0.0) throw std::invalid_argument("Larmor period undefined for g_b = 0");
  return 1.0 / (std::abs(consts.g_b) * consts.mu_b_mhz_per_gauss * 1e6 * field.b_gauss);
}

namespace detail {

/// Gauss-Hermite nodes/weights via the Golub-Welsch tridiagonal eigenproblem,
/// for the weight exp(-x^2); weights are normalized to sum to 1.
inline std::vector<std::pair<double, double>> gauss_hermite(int n) {
  if (n == 1) return {{0.0, 1.0}};
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double off = std::sqrt(i / 2.0);
    jac(i, i - 1) = off;
    jac(i - 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) {
    const double w = solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
    out[i] = {solver.eigenvalues()[i], w};
  }
  return out;
}

}  // namespace detail

/// Discretization of the field-magnitude distribution used for incoherent
/// gradient averaging: list of (magnitude, probability), weights summing
/// to 1. Nodes that would fall below B = 0 are dropped and the rest
/// renormalized.
inline std::vector<std::pair<double, double>> ensemble_fields(const FieldConfig& field) {
  field.validate();
  if (field.gradient_model == GradientModel::none || field.gradient_spread_gauss == 0.0)
    return {{field.b_gauss, 1.0}};

  std::vector<std::pair<double, double>> nodes;
  const int n = field.n_ensemble;
  if (field.gradient_model == GradientModel::uniform_interval) {
    if (n == 1) return {{field.b_gauss, 1.0}};
    const double lo = field.b_gauss - field.gradient_spread_gauss;
    const double hi = field.b_gauss + field.gradient_spread_gauss;
    for (int i = 0; i < n; ++i)
      nodes.emplace_back(lo + (hi - lo) * i / (n - 1), 1.0 / n);
  } else {
    for (const auto& [x, w] : detail::gauss_hermite(n))
      nodes.emplace_back(field.b_gauss + std::sqrt(2.0) * field.gradient_spread_gauss * x, w);
  }

  std::vector<std::pair<double, double>> kept;
  double total = 0.0;
  for (const auto& [b, w] : nodes) {
    if (b < 0.0) continue;
    kept.emplace_back(b, w);
    total += w;
  }
  if (kept.empty() || total <= 0.0)
    throw std::invalid_argument("gradient ensemble has no non-negative field magnitudes");
  for (auto& [b, w] : kept) w /= total;
  return kept;
}

}  // namespace plab::fields
