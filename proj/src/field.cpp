#include "rnls/field.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/FFT>

namespace rnls {

SpectralField::SpectralField(const BasisSpec& basis, VectorXc coeffs, double time)
    : basis_(basis), coeffs_(std::move(coeffs)), time_(time) {
  if (coeffs_.size() != basis_.spectral_size()) {
    throw PreconditionError("coefficient count does not match basis");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(basis_ == o.basis_)) throw PreconditionError("basis mismatch in field sum");
  coeffs_ += o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!(basis_ == o.basis_)) throw PreconditionError("basis mismatch in field difference");
  coeffs_ -= o.coeffs_;
  return *this;
}

// ---------------------------------------------------------------------------

struct ZTransform::Impl {
  mutable Eigen::FFT<double> fft;
  std::vector<double> sign;  // (-1)^k
};

ZTransform::ZTransform(const BasisSpec& basis)
    : impl_(std::make_unique<Impl>()), n_z_(basis.n_z), l_z_(basis.l_z) {
  impl_->fft.SetFlag(Eigen::FFT<double>::Unscaled);
  impl_->sign.resize(n_z_);
  for (int k = 0; k < n_z_; ++k) impl_->sign[k] = (k % 2 == 0) ? 1.0 : -1.0;
}
ZTransform::~ZTransform() = default;
ZTransform::ZTransform(ZTransform&&) noexcept = default;
ZTransform& ZTransform::operator=(ZTransform&&) noexcept = default;

void ZTransform::to_grid(std::span<const Complex> coeffs, std::span<Complex> values) const {
  const std::size_t n = n_z_;
  const double scale = 1.0 / std::sqrt(l_z_);
  std::vector<Complex> buf(n), out(n);
  for (std::size_t off = 0; off < coeffs.size(); off += n) {
    for (std::size_t k = 0; k < n; ++k) buf[k] = coeffs[off + k] * (impl_->sign[k] * scale);
    impl_->fft.inv(out.data(), buf.data(), static_cast<Eigen::Index>(n));
    std::copy(out.begin(), out.end(), values.begin() + off);
  }
}

void ZTransform::to_coeffs(std::span<const Complex> values, std::span<Complex> coeffs) const {
  const std::size_t n = n_z_;
  const double scale = std::sqrt(l_z_) / static_cast<double>(n);
  std::vector<Complex> buf(n), out(n);
  for (std::size_t off = 0; off < values.size(); off += n) {
    std::copy(values.begin() + off, values.begin() + off + n, buf.begin());
    impl_->fft.fwd(out.data(), buf.data(), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) coeffs[off + k] = out[k] * (impl_->sign[k] * scale);
  }
}

// ---------------------------------------------------------------------------
// Tensor Hermite transforms. Complex data is viewed as a real matrix with
// interleaved (re, im) rows so that every contraction is a real GEMM with
// the contracted index running over columns.

void hermite_synthesize(const HermiteGrid& g, int nz, const Complex* in, Complex* out,
                        std::vector<double>& work) {
  using Eigen::Index;
  const Index z2 = 2 * Index(nz);
  const Index nh = g.modes, m = g.points;
  work.resize(std::size_t(z2 * nh * m));
  Eigen::Map<const MatrixXr> r1(reinterpret_cast<const double*>(in), z2 * nh, nh);
  Eigen::Map<MatrixXr> t1(work.data(), z2 * nh, m);
  t1.noalias() = r1 * g.synth_t;
  double* o = reinterpret_cast<double*>(out);
  for (Index m1 = 0; m1 < m; ++m1) {
    Eigen::Map<const MatrixXr> blk(work.data() + m1 * z2 * nh, z2, nh);
    Eigen::Map<MatrixXr> dst(o + m1 * z2 * m, z2, m);
    dst.noalias() = blk * g.synth_t;
  }
}

void hermite_analyze(const HermiteGrid& g, int nz, const Complex* in, Complex* out,
                     std::vector<double>& work) {
  using Eigen::Index;
  const Index z2 = 2 * Index(nz);
  const Index nh = g.modes, m = g.points;
  work.resize(std::size_t(z2 * nh * m));
  const double* src = reinterpret_cast<const double*>(in);
  for (Index m1 = 0; m1 < m; ++m1) {
    Eigen::Map<const MatrixXr> blk(src + m1 * z2 * m, z2, m);
    Eigen::Map<MatrixXr> dst(work.data() + m1 * z2 * nh, z2, nh);
    dst.noalias() = blk * g.analysis;
  }
  Eigen::Map<const MatrixXr> r1(work.data(), z2 * nh, m);
  Eigen::Map<MatrixXr> o(reinterpret_cast<double*>(out), z2 * nh, nh);
  o.noalias() = r1 * g.analysis;
}

VectorXc to_mixed(const SpectralField& c, const ZTransform& zt) {
  VectorXc mixed(c.coeffs().size());
  zt.to_grid({c.coeffs().data(), std::size_t(c.coeffs().size())},
             {mixed.data(), std::size_t(mixed.size())});
  return mixed;
}

SpectralField from_mixed(const VectorXc& mixed, const BasisSpec& basis, const ZTransform& zt,
                         double time) {
  SpectralField c(basis, time);
  zt.to_coeffs({mixed.data(), std::size_t(mixed.size())},
               {c.coeffs().data(), std::size_t(c.coeffs().size())});
  return c;
}

namespace {
HermiteGrid transform_grid(const HermiteTable& table) {
  HermiteGrid g;
  g.modes = table.spec.modes();
  g.points = table.spec.m_quad;
  g.nodes = table.nodes;
  g.weights = table.weights;
  g.synth_t = table.values.transpose();
  g.analysis = table.weights.asDiagonal() * table.values;
  return g;
}
}  // namespace

SpectralField to_spectral(const PhysicalField& f, const HermiteTable& table) {
  if (!(f.basis == table.spec)) throw PreconditionError("physical field basis does not match table");
  if (f.values.size() != f.basis.physical_size()) throw PreconditionError("physical field has wrong shape");
  const auto g = transform_grid(table);
  const ZTransform zt(f.basis);
  VectorXc mixed(f.basis.spectral_size());
  std::vector<double> work;
  hermite_analyze(g, f.basis.n_z, f.values.data(), mixed.data(), work);
  return from_mixed(mixed, f.basis, zt);
}

PhysicalField from_spectral(const SpectralField& c, const HermiteTable& table) {
  if (!(c.basis() == table.spec)) throw PreconditionError("spectral field basis does not match table");
  const auto g = transform_grid(table);
  const ZTransform zt(c.basis());
  const VectorXc mixed = to_mixed(c, zt);
  PhysicalField out(c.basis());
  std::vector<double> work;
  hermite_synthesize(g, c.basis().n_z, mixed.data(), out.values.data(), work);
  return out;
}

Norms norms(const SpectralField& c) {
  const auto& b = c.basis();
  CompensatedSum<double> mass, gz, he;
  for (int n1 = 0; n1 < b.modes(); ++n1) {
    for (int n2 = 0; n2 < b.modes(); ++n2) {
      const double e = BasisSpec::eigenvalue(n1, n2);
      for (int k = 0; k < b.n_z; ++k) {
        const double a = std::norm(c(n1, n2, k));
        const double kk = b.wavenumber(k);
        mass.add(a);
        gz.add(kk * kk * a);
        he.add(e * a);
      }
    }
  }
  Norms n;
  n.mass_L2 = mass.value();
  n.grad_z_sq = gz.value();
  n.hermite_energy = he.value();
  n.B1_sq = n.hermite_energy + n.grad_z_sq;
  return n;
}

double momentum(const SpectralField& c) {
  const auto& b = c.basis();
  CompensatedSum<double> g;
  for (Eigen::Index i = 0; i < c.coeffs().size(); ++i) {
    g.add(b.wavenumber(int(i % b.n_z)) * std::norm(c.coeffs()[i]));
  }
  return g.value();
}

Complex inner(const SpectralField& a, const SpectralField& b) {
  if (!(a.basis() == b.basis())) throw PreconditionError("basis mismatch in inner product");
  CompensatedSum<double> re, im;
  for (Eigen::Index i = 0; i < a.coeffs().size(); ++i) {
    const Complex p = a.coeffs()[i] * std::conj(b.coeffs()[i]);
    re.add(p.real());
    im.add(p.imag());
  }
  return {re.value(), im.value()};
}

double b1_distance(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(norms(a - b).B1_full());
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(norms(a - b).mass_L2);
}

double physical_mass(const PhysicalField& f, const HermiteTable& table) {
  const auto& b = f.basis;
  CompensatedSum<double> s;
  for (int j1 = 0; j1 < b.m_quad; ++j1)
    for (int j2 = 0; j2 < b.m_quad; ++j2) {
      const double w = table.weights[j1] * table.weights[j2] * b.dz();
      for (int jz = 0; jz < b.n_z; ++jz) s.add(w * std::norm(f(j1, j2, jz)));
    }
  return s.value();
}

double boundary_mass(const SpectralField& c, double fraction) {
  const auto& b = c.basis();
  const ZTransform zt(b);
  const VectorXc mixed = to_mixed(c, zt);
  const double zcut = fraction * 0.5 * b.l_z;
  CompensatedSum<double> s;
  for (Eigen::Index i = 0; i < mixed.size(); ++i) {
    const int jz = int(i % b.n_z);
    if (std::abs(b.z_at(jz)) > zcut) s.add(std::norm(mixed[i]) * b.dz());
  }
  return s.value();
}

VectorXc hermite_project_1d(const std::function<Complex(double)>& f, int n_hermite, int points) {
  const auto rule = gauss_hermite<double>(points);
  const MatrixXr h = hermite_functions<double>(rule.nodes, n_hermite);
  VectorXc a = VectorXc::Zero(n_hermite + 1);
  for (int j = 0; j < points; ++j) {
    const Complex fj = f(rule.nodes[j]) * rule.weights[j];
    for (int n = 0; n <= n_hermite; ++n) a[n] += fj * h(j, n);
  }
  return a;
}

VectorXc fourier_project(const BasisSpec& basis, const std::function<Complex(double)>& f) {
  VectorXc v(basis.n_z), c(basis.n_z);
  for (int j = 0; j < basis.n_z; ++j) v[j] = f(basis.z_at(j));
  ZTransform(basis).to_coeffs({v.data(), std::size_t(v.size())}, {c.data(), std::size_t(c.size())});
  return c;
}

SpectralField separable(const BasisSpec& basis, const VectorXc& a1, const VectorXc& a2, const VectorXc& bz,
                        Complex amp) {
  if (a1.size() != basis.modes() || a2.size() != basis.modes() || bz.size() != basis.n_z) {
    throw PreconditionError("separable factors do not match the basis");
  }
  SpectralField c(basis);
  for (int n1 = 0; n1 < basis.modes(); ++n1)
    for (int n2 = 0; n2 < basis.modes(); ++n2)
      c.coeffs().segment(c.index(n1, n2, 0), basis.n_z) = (amp * a1[n1] * a2[n2]) * bz;
  return c;
}

SpectralField gaussian_field(const BasisSpec& basis, double amp, double y_width, double z_width,
                             double z_velocity) {
  if (!(y_width > 0) || !(z_width > 0)) throw ConfigError("Gaussian widths must be positive");
  const VectorXc a = hermite_project_1d(
      [&](double y) { return Complex(std::exp(-y * y / (2 * y_width * y_width))); }, basis.n_hermite);
  const VectorXc b = fourier_project(basis, [&](double z) {
    return std::exp(-z * z / (2 * z_width * z_width)) * std::polar(1.0, z_velocity * z);
  });
  return separable(basis, a, a, b, amp);
}

SpectralField random_field(const BasisSpec& basis, std::uint64_t seed, const RandomFieldOptions& o) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int nmax = (o.max_n < 0) ? basis.n_hermite : std::min(o.max_n, basis.n_hermite);
  const int nz = basis.n_z;
  SpectralField c(basis);
  const ZTransform zt(basis);
  VectorXc grid(nz), coef(nz);
  for (int n1 = 0; n1 <= nmax; ++n1)
    for (int n2 = 0; n2 <= nmax; ++n2) {
      const double amp = std::exp(-o.hermite_decay * (n1 + n2));
      if (o.packets > 0) {
        grid.setZero();
        for (int m = 0; m < o.packets; ++m) {
          const Complex g(normal(rng), normal(rng));
          const double z0 = o.packet_spread * uni(rng);
          const double v = o.packet_kmax * uni(rng);
          for (int j = 0; j < nz; ++j) {
            const double z = basis.z_at(j);
            const double x = (z - z0) / o.packet_width;
            grid[j] += g * std::exp(-0.5 * x * x) * std::polar(1.0, v * z);
          }
        }
        zt.to_coeffs({grid.data(), std::size_t(nz)}, {coef.data(), std::size_t(nz)});
        c.coeffs().segment(c.index(n1, n2, 0), nz) = amp * coef;
      } else {
        const double kcut = o.k_fraction * kPi * nz / basis.l_z;
        for (int k = 0; k < nz; ++k) {
          const Complex g(normal(rng), normal(rng));
          if (std::abs(basis.wavenumber(k)) <= kcut && k != nz / 2) c(n1, n2, k) = amp * g;
        }
      }
    }
  const double norm = c.coeffs().norm();
  if (norm > 0) c.coeffs() *= o.l2 / norm;
  return c;
}

}  // namespace rnls
