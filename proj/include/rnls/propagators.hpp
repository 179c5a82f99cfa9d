#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "rnls/field.hpp"

namespace rnls {

enum class FlowKind { U, V, D };

/// Diagonal phase of one linear flow at a fixed parameter. The multiplier of
/// mode (n1, n2, k) is level[n1 + n2] * z[k]; both factors are unimodular.
struct PhasePlan {
  FlowKind kind = FlowKind::U;
  double param = 0.0;
  VectorXc level;  // 2 * n_hermite + 1 entries
  VectorXc z;      // n_z entries

  Complex entry(int n1, int n2, int k) const { return level[n1 + n2] * z[k]; }
};

PhasePlan make_plan(const BasisSpec& basis, FlowKind kind, double param);

/// Multiply in place by the plan's phase.
void apply(const PhasePlan& plan, SpectralField& c);

/// Multiply Hermite-indexed data (z index innermost, any z representation)
/// by a per-level phase.
template <typename Derived>
void apply_level_phase(const VectorXc& level, int modes, int nz, Eigen::MatrixBase<Derived>& data) {
  for (int n1 = 0; n1 < modes; ++n1)
    for (int n2 = 0; n2 < modes; ++n2)
      data.segment((Eigen::Index(n1) * modes + n2) * nz, nz) *= level[n1 + n2];
}

/// e^{it d_z^2}: mode k picks up e^{-i t k^2}.
SpectralField apply_U(const SpectralField& c, double t);
/// e^{-i theta H}: level n picks up e^{-2i(n+1) theta}.
SpectralField apply_V(const SpectralField& c, double theta);
/// e^{-itD}, D = H - d_z^2.
SpectralField apply_D_flow(const SpectralField& c, double t);

/// Per-basis plan cache keyed by the exact bit pattern of the parameter.
class PhaseCache {
 public:
  explicit PhaseCache(const BasisSpec& basis) : basis_(basis) {}
  std::shared_ptr<const PhasePlan> get(FlowKind kind, double param);
  std::size_t size() const;
  const BasisSpec& basis() const { return basis_; }

 private:
  BasisSpec basis_;
  mutable std::mutex mu_;
  std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const PhasePlan>> plans_;
};

}  // namespace rnls
