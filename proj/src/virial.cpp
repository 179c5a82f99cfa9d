#include "rnls/virial.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace rnls {

namespace {

// g(s) = 1 + s - 115 s^4 + 481 s^5 - 914 s^6 + 942 s^7 - 508 s^8 + 112 s^9:
// g(0) = g'(0) = 1, g''(0) = g'''(0) = 0, g..g''' vanish at 1, g' <= 1,
// g <= 1 + s, max g''' = 43.07.
constexpr std::array<double, 10> kBlend = {1, 1, 0, 0, -115, 481, -914, 942, -508, 112};
constexpr double kBlendIntegral = 757.0 / 1260.0;
constexpr double kBlendMaxG3 = 43.066;

double blend(double s, int der) {
  double acc = 0;
  for (int k = int(kBlend.size()) - 1; k >= der; --k) {
    double f = kBlend[k];
    for (int j = 0; j < der; ++j) f *= (k - j);
    acc = acc * s + f;
  }
  return acc;
}

}  // namespace

double VirialWeight::min_radius() { return kBlendMaxG3 / 2; }

double truncated_chi(double z, double R, int der) {
  const double a = std::abs(z);
  const double sgn = (z < 0 && der % 2 == 1) ? -1.0 : 1.0;
  if (a <= R) {
    switch (der) {
      case 0: return z * z;
      case 1: return 2 * z;
      case 2: return 2;
      default: return 0;
    }
  }
  if (a >= 2 * R) return der == 0 ? R * R * (1 + 2 * kBlendIntegral) : 0.0;
  const double s = (a - R) / R;
  if (der == 0) {
    // R^2 + 2R^2 int_0^s g
    double acc = 0;
    for (int k = int(kBlend.size()) - 1; k >= 0; --k) acc = acc * s + kBlend[k] / (k + 1);
    return R * R + 2 * R * R * acc * s;
  }
  // chi^(der) = 2R g^(der-1)(s) / R^(der-1)
  return sgn * 2 * R * blend(s, der - 1) / std::pow(R, der - 1);
}

VirialWeight build_weight(WeightKind kind, double R, const BasisSpec& basis) {
  VirialWeight w;
  w.kind = kind;
  const int nz = basis.n_z;
  w.chi.resize(nz);
  w.chi1.resize(nz);
  w.chi2.resize(nz);
  w.chi4.resize(nz);
  if (kind == WeightKind::Z2) {
    for (int j = 0; j < nz; ++j) {
      const double z = basis.z_at(j);
      w.chi[j] = z * z;
      w.chi1[j] = 2 * z;
      w.chi2[j] = 2;
      w.chi4[j] = 0;
    }
    return w;
  }
  if (!(R > 0)) throw PreconditionError("truncation radius must be positive");
  if (2 * R > 0.5 * basis.l_z) {
    throw PreconditionError("truncation radius " + std::to_string(R) + " needs 2R <= L_z/2");
  }
  if (R < VirialWeight::min_radius()) {
    throw PreconditionError("truncation radius " + std::to_string(R) + " is below " +
                            std::to_string(VirialWeight::min_radius()) + "; chi'''' <= 4/R would fail");
  }
  w.R = R;
  for (int j = 0; j < nz; ++j) {
    const double z = basis.z_at(j);
    w.chi[j] = truncated_chi(z, R, 0);
    w.chi1[j] = truncated_chi(z, R, 1);
    w.chi2[j] = truncated_chi(z, R, 2);
    w.chi4[j] = truncated_chi(z, R, 4);
    const double z2 = z * z;
    if (w.chi[j] < 0 || w.chi[j] > z2 * (1 + 1e-14) + 1e-300 || w.chi2[j] > 2 + 1e-12 ||
        w.chi4[j] > 4 / R + 1e-12) {
      throw PreconditionError("virial weight bound violated at z = " + std::to_string(z));
    }
  }
  return w;
}

VirialWeight parse_weight(const std::string& spec, const BasisSpec& basis) {
  if (spec == "z2") return build_weight(WeightKind::Z2, 0, basis);
  const std::string pre = "truncated:";
  if (spec.rfind(pre, 0) == 0) {
    std::size_t pos = 0;
    double r = 0;
    try {
      r = std::stod(spec.substr(pre.size()), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pre.size() + pos != spec.size()) throw ConfigError("bad truncation radius in '" + spec + "'");
    return build_weight(WeightKind::Truncated, r, basis);
  }
  throw ConfigError("virial weight must be 'z2' or 'truncated:R', got '" + spec + "'");
}

VirialValues W_and_derivatives(const SpectralField& c, const VirialWeight& w, const AveragedNonlinearity& an) {
  const auto& b = c.basis();
  const int nz = b.n_z;
  SpectralField dz = c;
  for (Eigen::Index i = 0; i < dz.coeffs().size(); ++i) dz.coeffs()[i] *= Complex(0, b.wavenumber(int(i % nz)));
  const VectorXc u = to_mixed(c, an.ztransform());
  const VectorXc du = to_mixed(dz, an.ztransform());
  CompensatedSum<double> w0, w1, g2, m4;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const int j = int(i % nz);
    const double r2 = std::norm(u[i]);
    w0.add(w.chi[j] * r2);
    w1.add(w.chi1[j] * (du[i] * std::conj(u[i])).imag());
    g2.add(w.chi2[j] * std::norm(du[i]));
    m4.add(w.chi4[j] * r2);
  }
  const auto& p = an.params();
  const double wpot = an.weighted_potential(c, w.chi2);
  VirialValues v;
  v.W = w0.value() * b.dz();
  v.Wp = 2 * w1.value() * b.dz();
  v.Wpp = 4 * g2.value() * b.dz() + p.lambda * (4 * p.sigma / (kPi * (p.sigma + 1))) * wpot -
          m4.value() * b.dz();
  return v;
}

double concavity_constant(const FunctionalReport& r0, double d, const NonlinearityParams& p) {
  if (classify(r0, d, p) != Region::Kminus) throw PreconditionError("concavity monitor needs a K- datum");
  if (p.sigma == 2.0) return -r0.P;
  if (p.sigma > 2 && p.sigma < 4) return 0.25 * (d - r0.S);
  throw PreconditionError("concavity monitor covers 2 <= sigma < 4");
}

ConcavityReport concavity_monitor(const std::vector<VirialSample>& samples, const VirialWeight& w, double C1) {
  if (samples.empty()) throw PreconditionError("concavity monitor needs samples");
  ConcavityReport r;
  r.C1 = C1;
  r.concave = true;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    r.max_excess = std::max(r.max_excess, s.v.Wpp + 4 * C1);
    if (!(s.v.Wpp < 0)) r.concave = false;
  }
  const double w0 = samples.front().v.W, w1 = samples.front().v.Wp;
  const double a = (w.kind == WeightKind::Z2 ? 2 : 1) * C1;
  r.predicted_time = (C1 > 0) ? (w1 + std::sqrt(w1 * w1 + 4 * a * w0)) / (2 * a)
                              : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace rnls
