#include "rnls/propagators.hpp"

#include <bit>
#include <cmath>

namespace rnls {

namespace {

// e^{-i a}, reducing a first so large arguments keep their low bits.
Complex unit(double a) {
  const double r = std::remainder(a, 2.0 * kPi);
  return {std::cos(r), -std::sin(r)};
}

}  // namespace

PhasePlan make_plan(const BasisSpec& basis, FlowKind kind, double param) {
  PhasePlan p;
  p.kind = kind;
  p.param = param;
  const int levels = basis.max_level() + 1;
  p.level = VectorXc::Ones(levels);
  p.z = VectorXc::Ones(basis.n_z);
  if (kind != FlowKind::U) {
    for (int n = 0; n < levels; ++n) p.level[n] = unit(2.0 * (n + 1) * param);
  }
  if (kind != FlowKind::V) {
    for (int k = 0; k < basis.n_z; ++k) {
      const double kk = basis.wavenumber(k);
      p.z[k] = unit(kk * kk * param);
    }
  }
  return p;
}

void apply(const PhasePlan& plan, SpectralField& c) {
  const auto& b = c.basis();
  const int nz = b.n_z;
  auto& v = c.coeffs();
  for (int n1 = 0; n1 < b.modes(); ++n1)
    for (int n2 = 0; n2 < b.modes(); ++n2) {
      auto seg = v.segment(c.index(n1, n2, 0), nz);
      seg.array() *= plan.z.array() * plan.level[n1 + n2];
    }
}

SpectralField apply_U(const SpectralField& c, double t) {
  SpectralField out = c;
  apply(make_plan(c.basis(), FlowKind::U, t), out);
  return out;
}

SpectralField apply_V(const SpectralField& c, double theta) {
  SpectralField out = c;
  apply(make_plan(c.basis(), FlowKind::V, theta), out);
  return out;
}

SpectralField apply_D_flow(const SpectralField& c, double t) {
  SpectralField out = c;
  apply(make_plan(c.basis(), FlowKind::D, t), out);
  return out;
}

std::shared_ptr<const PhasePlan> PhaseCache::get(FlowKind kind, double param) {
  const auto key = std::make_pair(int(kind), std::bit_cast<std::uint64_t>(param));
  std::lock_guard lock(mu_);
  auto it = plans_.find(key);
  if (it != plans_.end()) return it->second;
  auto plan = std::make_shared<const PhasePlan>(make_plan(basis_, kind, param));
  plans_.emplace(key, plan);
  return plan;
}

std::size_t PhaseCache::size() const {
  std::lock_guard lock(mu_);
  return plans_.size();
}

}  // namespace rnls
