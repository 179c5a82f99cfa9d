#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rnls/basis.hpp"

namespace rnls {

/// Coefficients c(n1, n2, k) over h_{n1}(y1) h_{n2}(y2) e^{i k_eff z}/sqrt(L_z).
/// Storage is n1-major, then n2, then the FFT slot k.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const BasisSpec& basis, double time = 0.0)
      : basis_(basis), coeffs_(VectorXc::Zero(basis.spectral_size())), time_(time) {}
  SpectralField(const BasisSpec& basis, VectorXc coeffs, double time = 0.0);

  const BasisSpec& basis() const { return basis_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  VectorXc& coeffs() { return coeffs_; }
  const VectorXc& coeffs() const { return coeffs_; }

  Eigen::Index index(int n1, int n2, int k) const {
    return (Eigen::Index(n1) * basis_.modes() + n2) * basis_.n_z + k;
  }
  Complex& operator()(int n1, int n2, int k) { return coeffs_[index(n1, n2, k)]; }
  const Complex& operator()(int n1, int n2, int k) const { return coeffs_[index(n1, n2, k)]; }

  bool all_finite() const { return coeffs_.allFinite(); }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(Complex s) {
    coeffs_ *= s;
    return *this;
  }

 private:
  BasisSpec basis_{};
  VectorXc coeffs_;
  double time_ = 0.0;
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(Complex s, SpectralField a) { return a *= s; }
inline SpectralField operator*(SpectralField a, Complex s) { return a *= s; }

/// Values on the (y1, y2, z) collocation grid, index (j1 * M + j2) * N_z + jz.
struct PhysicalField {
  BasisSpec basis;
  VectorXc values;

  PhysicalField() = default;
  explicit PhysicalField(const BasisSpec& b) : basis(b), values(VectorXc::Zero(b.physical_size())) {}
  Complex& operator()(int j1, int j2, int jz) {
    return values[(Eigen::Index(j1) * basis.m_quad + j2) * basis.n_z + jz];
  }
  const Complex& operator()(int j1, int j2, int jz) const {
    return values[(Eigen::Index(j1) * basis.m_quad + j2) * basis.n_z + jz];
  }
};

/// Sample an analytic f(y1, y2, z) on the physical grid of `table`.
template <typename F>
PhysicalField sample(const HermiteTable& table, F&& f) {
  PhysicalField out(table.spec);
  const auto& b = table.spec;
  for (int j1 = 0; j1 < b.m_quad; ++j1)
    for (int j2 = 0; j2 < b.m_quad; ++j2)
      for (int jz = 0; jz < b.n_z; ++jz)
        out(j1, j2, jz) = f(table.nodes[j1], table.nodes[j2], b.z_at(jz));
  return out;
}

/// Orthonormal z-Fourier transform between FFT-ordered coefficients and
/// grid values, applied to `count` contiguous columns of length N_z.
class ZTransform {
 public:
  explicit ZTransform(const BasisSpec& basis);
  ~ZTransform();
  ZTransform(ZTransform&&) noexcept;
  ZTransform& operator=(ZTransform&&) noexcept;

  /// coefficients -> values (in place allowed).
  void to_grid(std::span<const Complex> coeffs, std::span<Complex> values) const;
  /// values -> coefficients.
  void to_coeffs(std::span<const Complex> values, std::span<Complex> coeffs) const;
  int n_z() const { return n_z_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_z_ = 0;
  double l_z_ = 0.0;
};

/// 2D tensor-Hermite synthesis/analysis on interleaved complex data whose
/// innermost dimension is z. `in`/`out` hold modes^2 * nz or points^2 * nz
/// complex values.
void hermite_synthesize(const HermiteGrid& grid, int nz, const Complex* in, Complex* out,
                        std::vector<double>& work);
void hermite_analyze(const HermiteGrid& grid, int nz, const Complex* in, Complex* out,
                     std::vector<double>& work);

/// Hermite coefficients with z on the grid ("mixed" representation).
VectorXc to_mixed(const SpectralField& c, const ZTransform& zt);
SpectralField from_mixed(const VectorXc& mixed, const BasisSpec& basis, const ZTransform& zt,
                         double time = 0.0);

SpectralField to_spectral(const PhysicalField& f, const HermiteTable& table);
PhysicalField from_spectral(const SpectralField& c, const HermiteTable& table);

struct Norms {
  double mass_L2 = 0;         // sum |c|^2
  double grad_z_sq = 0;       // ||d_z psi||^2
  double hermite_energy = 0;  // <H psi, psi>
  double B1_sq = 0;           // <D psi, psi>
  double B1_full() const { return B1_sq + mass_L2; }
};

Norms norms(const SpectralField& c);
/// Im <psi, d_z psi> sign convention: sum k_eff |c|^2.
double momentum(const SpectralField& c);
/// <a, b> = sum a conj(b).
Complex inner(const SpectralField& a, const SpectralField& b);
/// Full B^1 norm (with mass) of a - b.
double b1_distance(const SpectralField& a, const SpectralField& b);
double l2_distance(const SpectralField& a, const SpectralField& b);

/// Physical-space quadrature of |f|^2 on the transform grid.
double physical_mass(const PhysicalField& f, const HermiteTable& table);

/// Mass in the outer z-band |z| > fraction * L_z/2 (default: outer 10%).
double boundary_mass(const SpectralField& c, double fraction = 0.9);

/// 1D Hermite coefficients int f h_n dy, n <= n_hermite, by a wide
/// Gauss-Hermite rule.
VectorXc hermite_project_1d(const std::function<Complex(double)>& f, int n_hermite, int points = 160);
/// Orthonormal z-coefficients of f sampled on the periodic grid.
VectorXc fourier_project(const BasisSpec& basis, const std::function<Complex(double)>& f);
/// amp * a1[n1] * a2[n2] * bz[k].
SpectralField separable(const BasisSpec& basis, const VectorXc& a1, const VectorXc& a2, const VectorXc& bz,
                        Complex amp = 1.0);
/// amp * exp(-|y|^2 / (2 wy^2)) * exp(-z^2 / (2 wz^2)) * e^{i v z}.
SpectralField gaussian_field(const BasisSpec& basis, double amp, double y_width, double z_width,
                             double z_velocity = 0.0);

struct RandomFieldOptions {
  int max_n = -1;              // per-axis Hermite cap (-1: all modes)
  double hermite_decay = 0.0;  // amplitude factor e^{-decay (n1 + n2)}
  double k_fraction = 0.5;     // |k| <= k_fraction * Nyquist when packets == 0
  int packets = 0;             // > 0: z-profiles are sums of Gaussian wave packets
  double packet_width = 2.0;
  double packet_spread = 4.0;  // centers uniform in [-spread, spread]
  double packet_kmax = 1.0;    // carrier wavenumbers uniform in [-kmax, kmax]
  double l2 = 1.0;             // L^2 norm of the result
};

/// Reproducible random field (std::mt19937_64 seeded with `seed`).
SpectralField random_field(const BasisSpec& basis, std::uint64_t seed, const RandomFieldOptions& opts = {});

}  // namespace rnls
