#include "rnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "rnls/propagators.hpp"

namespace rnls {

ThetaQuadrature ThetaQuadrature::midpoint(int n, double a, double b) {
  if (n < 2) throw ConfigError("theta quadrature needs at least 2 nodes");
  if (!(b > a)) throw ConfigError("theta interval must have positive length");
  ThetaQuadrature q;
  q.a = a;
  q.b = b;
  q.nodes.resize(n);
  q.weights = VectorXr::Constant(n, (b - a) / n);
  for (int i = 0; i < n; ++i) q.nodes[i] = a + (i + 0.5) * (b - a) / n;
  return q;
}

void NonlinearityParams::validate(bool evolution) const {
  std::vector<std::string> errs;
  if (!(sigma > 0) || !std::isfinite(sigma)) errs.push_back("sigma must be positive");
  if (evolution && (sigma < 0.5 || sigma > 4.0)) errs.push_back("sigma must lie in [0.5, 4]");
  if (lambda != -1.0 && lambda != 1.0 && lambda != 0.0) errs.push_back("lambda must be -1, +1 (or 0 for linear runs)");
  if (!errs.empty()) {
    std::string msg = "invalid nonlinearity:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ConfigError(msg);
  }
}

std::optional<int> exact_theta_count(double sigma, int n_hermite) {
  if (sigma != std::floor(sigma)) return std::nullopt;
  return int(sigma + 1) * n_hermite + 1;
}

namespace {

// r2^sigma for r2 = |u|^2, with 0 -> 0.
struct PowerKernel {
  enum Kind { Integer, Half, General } kind = General;
  int ipow = 0;
  double sigma = 1;

  explicit PowerKernel(double s) : sigma(s) {
    if (s == std::floor(s) && s <= 16) {
      kind = Integer;
      ipow = int(s);
    } else if (2 * s == std::floor(2 * s) && s <= 16) {
      kind = Half;
      ipow = int(std::floor(s));
    }
  }
  double operator()(double r2) const {
    if (r2 == 0.0) return 0.0;
    switch (kind) {
      case Integer: {
        double p = 1.0;
        for (int i = 0; i < ipow; ++i) p *= r2;
        return p;
      }
      case Half: {
        double p = std::sqrt(r2);
        for (int i = 0; i < ipow; ++i) p *= r2;
        return p;
      }
      default:
        return std::exp(sigma * std::log(r2));
    }
  }
};

// Runs fn(block, slot) over a fixed block partition; slots index per-thread
// scratch. Results must be combined by block index, never by slot.
template <typename Fn>
void for_blocks(int nblocks, Fn&& fn) {
  const int nt = std::min(thread_count(), nblocks);
  if (nt <= 1) {
    for (int b = 0; b < nblocks; ++b) fn(b, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (int b = t; b < nblocks; b += nt) fn(b, t);
    });
  }
  for (auto& th : pool) th.join();
}

constexpr int kMaxBlocks = 16;

struct Scratch {
  VectorXc phased, phys, back;
  std::vector<double> work;
};

}  // namespace

struct AveragedNonlinearity::Impl {
  BasisSpec basis;
  NonlinearityParams params;
  ThetaQuadrature quad;
  ZTransform zt;
  HermiteGrid grid;
  std::vector<VectorXc> level_phase;  // e^{-2i n theta_i}, global phase dropped
  PowerKernel pw;

  mutable std::mutex mu;
  mutable std::map<double, std::shared_ptr<const HermiteGrid>> grids;

  Impl(const BasisSpec& b, NonlinearityParams p, ThetaQuadrature q)
      : basis(b), params(p), quad(std::move(q)), zt(b), pw(p.sigma) {
    basis.validate();
    params.validate(false);
    const int m_nl =
        std::max(basis.m_quad, int(std::ceil((params.sigma + 1) * (basis.n_hermite + 1) - 1e-12)));
    grid = HermiteGrid::make(basis.n_hermite, m_nl, params.sigma + 1);
    for (int i = 0; i < quad.size(); ++i) {
      VectorXc lp(basis.max_level() + 1);
      for (int n = 0; n < lp.size(); ++n) {
        const double a = std::remainder(2.0 * n * quad.nodes[i], 2.0 * kPi);
        lp[n] = Complex(std::cos(a), -std::sin(a));
      }
      level_phase.push_back(lp);
    }
    if (auto need = exact_theta_count(params.sigma, basis.n_hermite)) {
      const double per_quarter = quad.size() * (kPi / 2) / (quad.b - quad.a);
      if (per_quarter < *need) {
        warn("N_theta=" + std::to_string(quad.size()) + " is below the exactness threshold " +
             std::to_string(*need) + " for sigma=" + std::to_string(int(params.sigma)) +
             " at N_hermite=" + std::to_string(basis.n_hermite));
      }
    }
  }

  std::shared_ptr<const HermiteGrid> grid_for(double power) const {
    std::lock_guard lock(mu);
    auto it = grids.find(power);
    if (it != grids.end()) return it->second;
    const int m = std::max(basis.m_quad, int(std::ceil((power * basis.n_hermite + 1) / 2.0)));
    auto g = std::make_shared<const HermiteGrid>(HermiteGrid::make(basis.n_hermite, m, power / 2));
    grids.emplace(power, g);
    return g;
  }

  int blocks() const { return std::min(quad.size(), kMaxBlocks); }
  std::pair<int, int> block_range(int b) const {
    const int n = quad.size(), nb = blocks();
    return {int(std::int64_t(n) * b / nb), int(std::int64_t(n) * (b + 1) / nb)};
  }

  void phase_in(int i, const VectorXc& mixed, Scratch& s) const {
    s.phased = mixed;
    apply_level_phase(level_phase[i], basis.modes(), basis.n_z, s.phased);
  }
};

AveragedNonlinearity::AveragedNonlinearity(const BasisSpec& basis, NonlinearityParams params,
                                           ThetaQuadrature quad)
    : impl_(std::make_unique<Impl>(basis, params, std::move(quad))) {}

AveragedNonlinearity::AveragedNonlinearity(const BasisSpec& basis, NonlinearityParams params)
    : AveragedNonlinearity(basis, params, ThetaQuadrature::midpoint(basis.n_theta)) {}

AveragedNonlinearity::~AveragedNonlinearity() = default;
AveragedNonlinearity::AveragedNonlinearity(AveragedNonlinearity&&) noexcept = default;
AveragedNonlinearity& AveragedNonlinearity::operator=(AveragedNonlinearity&&) noexcept = default;

const BasisSpec& AveragedNonlinearity::basis() const { return impl_->basis; }
const NonlinearityParams& AveragedNonlinearity::params() const { return impl_->params; }
const ThetaQuadrature& AveragedNonlinearity::quadrature() const { return impl_->quad; }
const HermiteGrid& AveragedNonlinearity::grid() const { return impl_->grid; }
const ZTransform& AveragedNonlinearity::ztransform() const { return impl_->zt; }

AveragedNonlinearity::Result AveragedNonlinearity::evaluate(const SpectralField& c, bool want_f) const {
  const Impl& m = *impl_;
  if (!(c.basis() == m.basis)) throw PreconditionError("field basis does not match the nonlinearity");
  const auto& b = m.basis;
  const auto& g = m.grid;
  const int nz = b.n_z;
  const Eigen::Index nphys = Eigen::Index(g.points) * g.points * nz;
  const VectorXc mixed = to_mixed(c, m.zt);

  const int nb = m.blocks();
  std::vector<VectorXc> acc(want_f ? nb : 0);
  std::vector<double> pot(nb, 0.0);
  std::vector<Scratch> scratch(std::min(thread_count(), nb));

  for_blocks(nb, [&](int blk, int slot) {
    Scratch& s = scratch[slot];
    s.phys.resize(nphys);
    if (want_f) acc[blk] = VectorXc::Zero(mixed.size());
    auto [lo, hi] = m.block_range(blk);
    for (int i = lo; i < hi; ++i) {
      m.phase_in(i, mixed, s);
      hermite_synthesize(g, nz, s.phased.data(), s.phys.data(), s.work);
      double node_sum = 0.0;
      for (int j1 = 0; j1 < g.points; ++j1) {
        for (int j2 = 0; j2 < g.points; ++j2) {
          Complex* u = s.phys.data() + (Eigen::Index(j1) * g.points + j2) * nz;
          double row = 0.0;
          for (int jz = 0; jz < nz; ++jz) {
            const double r2 = std::norm(u[jz]);
            const double p = m.pw(r2);
            row += p * r2;
            u[jz] *= p;
          }
          node_sum += g.weights[j1] * g.weights[j2] * row;
        }
      }
      pot[blk] += m.quad.weights[i] * node_sum;
      if (want_f) {
        s.back.resize(mixed.size());
        hermite_analyze(g, nz, s.phys.data(), s.back.data(), s.work);
        VectorXc conj_phase = m.level_phase[i].conjugate();
        apply_level_phase(conj_phase, b.modes(), nz, s.back);
        acc[blk] += m.quad.weights[i] * s.back;
      }
    }
  });

  const double wsum = m.quad.total();
  double pot_total = 0.0;
  for (int blk = 0; blk < nb; ++blk) pot_total += pot[blk];
  Result r;
  r.pot = (kPi / 2) / wsum * b.dz() * pot_total;
  if (want_f) {
    VectorXc total = VectorXc::Zero(mixed.size());
    for (int blk = 0; blk < nb; ++blk) total += acc[blk];
    total /= wsum;
    r.f = from_mixed(total, b, m.zt, c.time());
  } else {
    r.f = SpectralField(b, c.time());
  }
  return r;
}

Pairings AveragedNonlinearity::pairings(const SpectralField& c) const {
  const SpectralField f = F_av(c);
  const auto& b = c.basis();
  CompensatedSum<double> re, im, imh;
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2) {
      const double e = BasisSpec::eigenvalue(n1, n2);
      for (int k = 0; k < b.n_z; ++k) {
        const Complex p = f(n1, n2, k) * std::conj(c(n1, n2, k));
        re.add(p.real());
        im.add(p.imag());
        imh.add(e * p.imag());
      }
    }
  return {re.value(), im.value(), imh.value()};
}

VectorXr AveragedNonlinearity::theta_moments(const SpectralField& c, double power,
                                             const VectorXr* zweight) const {
  const Impl& m = *impl_;
  if (!(c.basis() == m.basis)) throw PreconditionError("field basis does not match the nonlinearity");
  if (!(power > 0)) throw PreconditionError("moment power must be positive");
  const auto& b = m.basis;
  const int nz = b.n_z;
  if (zweight && zweight->size() != nz) throw PreconditionError("z weight has wrong length");
  const auto gp = (std::abs(power - 2 * (m.params.sigma + 1)) < 1e-15)
                      ? std::make_shared<const HermiteGrid>(m.grid)
                      : m.grid_for(power);
  const HermiteGrid& g = *gp;
  const PowerKernel half(power / 2);
  const VectorXc mixed = to_mixed(c, m.zt);
  VectorXr out = VectorXr::Zero(m.quad.size());
  const int nb = m.blocks();
  std::vector<Scratch> scratch(std::min(thread_count(), nb));

  for_blocks(nb, [&](int blk, int slot) {
    Scratch& s = scratch[slot];
    s.phys.resize(Eigen::Index(g.points) * g.points * nz);
    auto [lo, hi] = m.block_range(blk);
    for (int i = lo; i < hi; ++i) {
      m.phase_in(i, mixed, s);
      hermite_synthesize(g, nz, s.phased.data(), s.phys.data(), s.work);
      double node_sum = 0.0;
      for (int j1 = 0; j1 < g.points; ++j1)
        for (int j2 = 0; j2 < g.points; ++j2) {
          const Complex* u = s.phys.data() + (Eigen::Index(j1) * g.points + j2) * nz;
          double row = 0.0;
          for (int jz = 0; jz < nz; ++jz) {
            const double v = half(std::norm(u[jz]));
            row += zweight ? v * (*zweight)[jz] : v;
          }
          node_sum += g.weights[j1] * g.weights[j2] * row;
        }
      out[i] = node_sum * b.dz();
    }
  });
  return out;
}

double AveragedNonlinearity::weighted_potential(const SpectralField& c, const VectorXr& zweight) const {
  const VectorXr mom = theta_moments(c, 2 * (impl_->params.sigma + 1), &zweight);
  const auto& q = impl_->quad;
  return (kPi / 2) / q.total() * q.weights.dot(mom);
}

SpectralField eval_F_av(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad) {
  return AveragedNonlinearity(c.basis(), params, quad).F_av(c);
}

double potential_energy(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad) {
  return AveragedNonlinearity(c.basis(), params, quad).potential(c);
}

Pairings gateaux_pairings(const SpectralField& c, const NonlinearityParams& params,
                          const ThetaQuadrature& quad) {
  return AveragedNonlinearity(c.basis(), params, quad).pairings(c);
}

SpectralField eval_resonant_sum(const SpectralField& c, double sigma, int cap) {
  if (sigma != 1.0) throw PreconditionError("resonant-sum oracle is only defined for sigma = 1");
  const auto& b = c.basis();
  if (b.n_hermite > cap) {
    throw PreconditionError("resonant-sum oracle capped at N_hermite=" + std::to_string(cap));
  }
  const int modes = b.modes(), nz = b.n_z, levels = b.max_level() + 1;
  const HermiteGrid g = HermiteGrid::make(b.n_hermite, std::max(b.m_quad, 2 * modes), 2.0);
  const ZTransform zt(b);
  const VectorXc mixed = to_mixed(c, zt);
  const Eigen::Index nphys = Eigen::Index(g.points) * g.points * nz;
  std::vector<double> work;

  auto level_part = [&](const VectorXc& src, int l) {
    VectorXc out = VectorXc::Zero(src.size());
    for (int n1 = std::max(0, l - b.n_hermite); n1 <= std::min(l, b.n_hermite); ++n1) {
      const Eigen::Index off = (Eigen::Index(n1) * modes + (l - n1)) * nz;
      out.segment(off, nz) = src.segment(off, nz);
    }
    return out;
  };

  std::vector<VectorXc> phi(levels);
  for (int l = 0; l < levels; ++l) {
    const VectorXc proj = level_part(mixed, l);
    phi[l].resize(nphys);
    hermite_synthesize(g, nz, proj.data(), phi[l].data(), work);
  }
  std::vector<VectorXc> pair(2 * levels - 1);
  for (int s = 0; s < 2 * levels - 1; ++s) {
    pair[s] = VectorXc::Zero(nphys);
    for (int l1 = std::max(0, s - levels + 1); l1 <= std::min(s, levels - 1); ++l1) {
      pair[s].array() += phi[l1].array() * phi[s - l1].array();
    }
  }
  VectorXc acc = VectorXc::Zero(mixed.size());
  VectorXc prod(nphys), back(mixed.size());
  for (int n3 = 0; n3 < levels; ++n3) {
    for (int n = 0; n < levels; ++n) {
      prod = pair[n + n3].array() * phi[n3].array().conjugate();
      hermite_analyze(g, nz, prod.data(), back.data(), work);
      acc += level_part(back, n);
    }
  }
  return from_mixed(acc, b, zt, c.time());
}

}  // namespace rnls
