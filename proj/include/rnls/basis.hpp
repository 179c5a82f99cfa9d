#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "rnls/common.hpp"

namespace rnls {

/// Discretization of x = (y1, y2, z): tensor Hermite functions in y and a
/// periodic Fourier grid in z on [-L_z/2, L_z/2).
struct BasisSpec {
  int n_hermite = 16;  // highest 1D Hermite index per axis
  int m_quad = 24;     // Gauss-Hermite nodes per axis of the physical grid
  int n_z = 128;
  double l_z = 40.0 * kPi;
  int n_theta = 64;

  int modes() const { return n_hermite + 1; }
  int max_level() const { return 2 * n_hermite; }
  Eigen::Index spectral_size() const {
    return Eigen::Index(modes()) * modes() * n_z;
  }
  Eigen::Index physical_size() const { return Eigen::Index(m_quad) * m_quad * n_z; }
  double dz() const { return l_z / n_z; }

  /// Signed wavenumber 2πk/L_z of FFT slot `k` (slots >= n_z/2 are negative).
  double wavenumber(int k) const {
    const int ks = (k < n_z / 2) ? k : k - n_z;
    return 2.0 * kPi * ks / l_z;
  }
  /// z coordinate of grid point j.
  double z_at(int j) const { return -0.5 * l_z + j * dz(); }
  /// H eigenvalue 2(n1+n2+1).
  static double eigenvalue(int n1, int n2) { return 2.0 * (n1 + n2 + 1); }

  /// Throws ConfigError naming every violated invariant.
  void validate() const;

  bool operator==(const BasisSpec&) const = default;
};

std::string describe(const BasisSpec& spec);

/// Normalized Hermite functions h_0..h_nmax at the points `y` via the
/// three-term recurrence; result(j, k) = h_k(y_j).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hermite_functions(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y, int nmax) {
  using std::exp;
  using std::sqrt;
  const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h(y.size(), nmax + 1);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const Scalar x = y[j];
    Scalar prev = Scalar(0);
    Scalar cur = exp(-x * x / Scalar(2)) / sqrt(sqrt(pi));
    h(j, 0) = cur;
    for (int k = 0; k < nmax; ++k) {
      const Scalar next = sqrt(Scalar(2) / Scalar(k + 1)) * x * cur -
                          sqrt(Scalar(k) / Scalar(k + 1)) * prev;
      prev = cur;
      cur = next;
      h(j, k + 1) = cur;
    }
  }
  return h;
}

/// Gauss-Hermite rule with the weight e^{-y^2} folded into the weights, so
/// that sum_j weights_j f(nodes_j) approximates the plain integral of f.
/// With `beta` != 1 the nodes are scaled for the weight e^{-beta y^2}.
template <typename Scalar>
struct GaussHermiteRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

template <typename Scalar>
GaussHermiteRule<Scalar> gauss_hermite(int m, Scalar beta = Scalar(1)) {
  using std::abs;
  using std::sqrt;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (m < 1) throw ConfigError("Gauss-Hermite rule needs at least one node");
  if (!(beta > Scalar(0))) throw ConfigError("Gauss-Hermite scaling must be positive");

  // Initial nodes from the Jacobi matrix, then Newton on h_m.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jacobi =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = sqrt(Scalar(k) / Scalar(2));
  }
  Eigen::SelfAdjointEigenSolver<decltype(jacobi)> eig(jacobi, Eigen::EigenvaluesOnly);
  Vec x = eig.eigenvalues();

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int j = 0; j < m; ++j) {
    for (int it = 0; it < 20; ++it) {
      Vec pt(1);
      pt[0] = x[j];
      const auto h = hermite_functions<Scalar>(pt, m);
      const Scalar hm = h(0, m);
      const Scalar dh = sqrt(Scalar(2 * m)) * h(0, m - 1) - x[j] * hm;
      if (dh == Scalar(0)) break;
      const Scalar step = hm / dh;
      x[j] -= step;
      if (abs(step) <= Scalar(4) * eps * (Scalar(1) + abs(x[j]))) break;
    }
  }
  // Exact symmetry about the origin.
  for (int j = 0; j < m / 2; ++j) {
    const Scalar a = (x[m - 1 - j] - x[j]) / Scalar(2);
    x[j] = -a;
    x[m - 1 - j] = a;
  }
  if (m % 2 == 1) x[m / 2] = Scalar(0);

  const auto h = hermite_functions<Scalar>(x, m - 1);
  Vec w(m);
  for (int j = 0; j < m; ++j) {
    const Scalar hm1 = h(j, m - 1);
    if (!(h(j, 0) > Scalar(0)) || !(abs(hm1) > std::numeric_limits<Scalar>::min())) {
      throw NumericalError("Gauss-Hermite weight underflow at " + std::to_string(m) + " nodes");
    }
    w[j] = Scalar(1) / (Scalar(m) * hm1 * hm1);
    if (!std::isfinite(static_cast<double>(w[j]))) {
      throw NumericalError("Gauss-Hermite weight underflow at " + std::to_string(m) + " nodes");
    }
  }
  const Scalar s = sqrt(beta);
  return {x / s, w / s};
}

/// Tabulated Hermite functions on the physical collocation grid.
template <typename Scalar>
struct HermiteTableT {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasisSpec spec;
  Vec nodes;
  Vec weights;  // folded: sum_j weights_j h_a(y_j) h_b(y_j) = delta_ab
  Mat values;   // values(j, k) = h_k(nodes_j)

  static double eig(int n1, int n2) { return BasisSpec::eigenvalue(n1, n2); }

  /// max_{a,b} |sum_j w_j h_a h_b - delta_ab|
  Scalar orthonormality_residual() const {
    const Mat gram = values.transpose() * weights.asDiagonal() * values;
    return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }
};

using HermiteTable = HermiteTableT<double>;

template <typename Scalar = double>
HermiteTableT<Scalar> build_basis(const BasisSpec& spec) {
  spec.validate();
  HermiteTableT<Scalar> t;
  t.spec = spec;
  const auto rule = gauss_hermite<Scalar>(spec.m_quad);
  t.nodes = rule.nodes;
  t.weights = rule.weights;
  t.values = hermite_functions<Scalar>(t.nodes, spec.n_hermite);
  return t;
}

/// 1D synthesis/analysis matrices for one collocation grid. Synthesis
/// evaluates sum_n c_n h_n(y_j); analysis projects sum_j w_j h_n(y_j) f_j.
struct HermiteGrid {
  int modes = 0;
  int points = 0;
  double beta = 1.0;
  VectorXr nodes;
  VectorXr weights;
  MatrixXr synth_t;   // modes x points, h_n(y_j)
  MatrixXr analysis;  // points x modes, w_j h_n(y_j)

  static HermiteGrid make(int n_hermite, int points, double beta);
};

}  // namespace rnls
