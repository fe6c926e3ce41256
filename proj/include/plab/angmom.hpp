#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "plab/half_int.hpp"

namespace plab::angmom {

using Eigen::MatrixXcd;
using Eigen::Vector3d;

/// Angular momentum operators for one hyperfine level, in the |F,m> basis
/// with m = -F, -F+1, ..., +F ascending. This ordering is fixed here and
/// relied on by every index sum in the library.
struct SpinOperators {
  HalfInt f;
  MatrixXcd fx, fy, fz;
};

inline SpinOperators build_spin_operators(HalfInt f) {
  if (f.twice() < 0) throw std::invalid_argument("angular momentum must be >= 0");
  const int dim = dimension(f);
  const double fd = f.value();

  MatrixXcd fp = MatrixXcd::Zero(dim, dim);  // raising operator F+
  MatrixXcd fz = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = -fd + k;
    fz(k, k) = m;
    if (k + 1 < dim) fp(k + 1, k) = std::sqrt(fd * (fd + 1.0) - m * (m + 1.0));
  }
  const MatrixXcd fm = fp.adjoint();
  SpinOperators ops;
  ops.f = f;
  ops.fx = 0.5 * (fp + fm);
  ops.fy = std::complex<double>(0, -0.5) * (fp - fm);
  ops.fz = fz;
  return ops;
}

/// Unitary D^(s)(t) = exp(-i g_s (Omega . F) t) for one level.
struct RotationMatrix {
  HalfInt f;
  MatrixXcd elements;
  double generator_time = 0.0;  // g * |Omega| * t, dimensionless phase
};

/// Spectral form of the Zeeman generator Omega . F for one level, so that
/// rotation matrices at many times cost two small matrix products each.
/// Eigenphases are analytically |Omega| * m, which keeps the revival tests
/// phase-coherent over many Larmor periods.
class RotationGenerator {
public:
  RotationGenerator(const SpinOperators& ops, const Vector3d& omega_vec, double g_factor)
      : f_(ops.f), g_(g_factor), omega_norm_(omega_vec.norm()) {
    const int dim = dimension(f_);
    if (omega_norm_ == 0.0) {
      eigvecs_ = MatrixXcd::Identity(dim, dim);
      eigvals_ = Eigen::VectorXd::Zero(dim);
      return;
    }
    const Vector3d n = omega_vec / omega_norm_;
    const MatrixXcd h = n.x() * ops.fx + n.y() * ops.fy + n.z() * ops.fz;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition of Zeeman generator failed");
    eigvecs_ = solver.eigenvectors();
    eigvals_ = solver.eigenvalues();  // the m values, up to roundoff
  }

  MatrixXcd at(double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("rotation time must be finite");
    const int dim = static_cast<int>(eigvals_.size());
    Eigen::VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
      const double phi = -g_ * omega_norm_ * eigvals_[k] * t;
      phases[k] = std::complex<double>(std::cos(phi), std::sin(phi));
    }
    return eigvecs_ * phases.asDiagonal() * eigvecs_.adjoint();
  }

  RotationMatrix matrix_at(double t) const {
    return RotationMatrix{f_, at(t), g_ * omega_norm_ * t};
  }

  /// Eigenvalues of n . F (ascending); equal to m = -F..F analytically.
  const Eigen::VectorXd& generator_eigenvalues() const { return eigvals_; }

private:
  HalfInt f_;
  double g_;
  double omega_norm_;
  MatrixXcd eigvecs_;
  Eigen::VectorXd eigvals_;
};

inline RotationMatrix rotation_matrix(const SpinOperators& ops, const Vector3d& omega_vec,
                                      double g_factor, double t) {
  return RotationGenerator(ops, omega_vec, g_factor).matrix_at(t);
}

/// Matrix product D1 * D2. Same level, same generator axis and g-factor is
/// the caller's contract; only dimensions can be checked here.
inline RotationMatrix compose(const RotationMatrix& d1, const RotationMatrix& d2) {
  if (d1.f != d2.f || d1.elements.rows() != d2.elements.rows())
    throw std::invalid_argument("rotation matrix dimension mismatch");
  return RotationMatrix{d1.f, d1.elements * d2.elements, d1.generator_time + d2.generator_time};
}

}  // namespace plab::angmom
