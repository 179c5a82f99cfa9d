#include "rnls/functionals.hpp"

#include <cmath>
#include <cstdio>

namespace rnls {

FunctionalReport assemble(const Norms& n, double momentum, double pot, const NonlinearityParams& p,
                          double time) {
  const double s = p.sigma, lam = p.lambda;
  FunctionalReport r;
  r.time = time;
  r.mass_L2 = n.mass_L2;
  r.grad_z_sq = n.grad_z_sq;
  r.B1_sq = n.B1_sq;
  r.pot = pot;
  r.M = 0.5 * n.mass_L2;
  r.K = 0.5 * n.hermite_energy;
  r.G = momentum;
  r.E = 0.5 * n.grad_z_sq + lam / (kPi * (s + 1)) * pot;
  r.S = r.K + r.M + r.E;
  r.I = n.B1_sq + n.mass_L2 + lam * (2 / kPi) * pot;
  r.P = 2 * n.grad_z_sq + lam * (2 * s / (kPi * (s + 1))) * pot;
  r.variational = (lam == -1.0);
  return r;
}

FunctionalReport report(const SpectralField& c, const AveragedNonlinearity& an) {
  return assemble(norms(c), momentum(c), an.potential(c), an.params(), c.time());
}

FunctionalReport report(const SpectralField& c, const NonlinearityParams& params,
                        const ThetaQuadrature& quad) {
  return report(c, AveragedNonlinearity(c.basis(), params, quad));
}

bool ScaleParams::admissible(double sigma) const {
  return a > 0 && b >= 0 && 2 * a - b >= 0 && sigma * a - b > 0;
}

SpectralField scale(const SpectralField& c, const ScaleParams& sp, double tail_tol) {
  const auto& bs = c.basis();
  const double s = std::exp(sp.b * sp.mu);
  const double amp = std::exp(sp.a * sp.mu);
  if (s == 1.0) return amp * c;

  const Norms n0 = norms(c);
  if (n0.mass_L2 == 0) return c;
  const int nz = bs.n_z;
  if (s > 1) {
    // Compression widens the spectrum by s.
    const double kmax = 2 * kPi * (nz / 2 - 1) / bs.l_z / s;
    double tail = 0;
    for (Eigen::Index i = 0; i < c.coeffs().size(); ++i) {
      if (std::abs(bs.wavenumber(int(i % nz))) > kmax) tail += std::norm(c.coeffs()[i]);
    }
    if (tail > tail_tol * n0.mass_L2) {
      throw PreconditionError("z-compression by " + std::to_string(s) +
                              " leaves the resolved band (tail mass " + std::to_string(tail / n0.mass_L2) + ")");
    }
  } else {
    // Dilation pulls in mass from |z| > s L_z / 2.
    const double tail = boundary_mass(c, s);
    if (tail > tail_tol * n0.mass_L2) {
      throw PreconditionError("z-dilation by " + std::to_string(1 / s) +
                              " pushes mass past the domain (tail mass " + std::to_string(tail / n0.mass_L2) + ")");
    }
  }

  // Evaluate the trigonometric interpolant at s * z_j for every Hermite mode.
  // Under compression, points with |s z_j| >= L_z/2 would sample the periodic
  // copy; the field is taken as zero there.
  Eigen::MatrixXcd ev = Eigen::MatrixXcd::Zero(nz, nz);
  const double inv_sqrt_l = 1.0 / std::sqrt(bs.l_z);
  for (int j = 0; j < nz; ++j) {
    if (std::abs(s * bs.z_at(j)) >= 0.5 * bs.l_z) continue;
    for (int k = 0; k < nz; ++k) {
      const double arg = std::remainder(bs.wavenumber(k) * s * bs.z_at(j), 2 * kPi);
      ev(j, k) = std::polar(amp * inv_sqrt_l, arg);
    }
  }
  const int cols = bs.modes() * bs.modes();
  Eigen::Map<const Eigen::MatrixXcd> cin(c.coeffs().data(), nz, cols);
  VectorXc grid(c.coeffs().size());
  Eigen::Map<Eigen::MatrixXcd> gout(grid.data(), nz, cols);
  gout.noalias() = ev * cin;
  return from_mixed(grid, bs, ZTransform(bs), c.time());
}

double J_ab(const FunctionalReport& r, double a, double b, const NonlinearityParams& p) {
  if (!ScaleParams{a, b, 0}.admissible(p.sigma)) {
    throw PreconditionError("(a, b) = (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") is not admissible for sigma = " + std::to_string(p.sigma));
  }
  const double s = p.sigma;
  return (2 * a - b) * (r.K + r.M) + (2 * a + b) / 2 * r.grad_z_sq +
         p.lambda * ((2 * s + 2) * a - b) / (kPi * (s + 1)) * r.pot;
}

double J_ab(const SpectralField& c, double a, double b, const AveragedNonlinearity& an) {
  return J_ab(report(c, an), a, b, an.params());
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Kplus: return "Kplus";
    case Region::Kminus: return "Kminus";
    default: return "above_threshold";
  }
}

Region classify(const FunctionalReport& r, double d, const NonlinearityParams& p) {
  if (p.lambda != -1.0) throw PreconditionError("K+/K- are defined only for the focusing sign");
  if (!(d > 0)) throw PreconditionError("threshold d must be positive");
  if (r.S >= d) return Region::AboveThreshold;
  return r.P >= 0 ? Region::Kplus : Region::Kminus;
}

Region classify(const SpectralField& c, double d, const AveragedNonlinearity& an) {
  return classify(report(c, an), d, an.params());
}

K3E scale_invariant_check(const SpectralField& c, double mu, const AveragedNonlinearity& an) {
  if (an.params().sigma != 4.0) throw PreconditionError("K^3 E is scale invariant only at sigma = 4");
  if (!(mu > 0)) throw PreconditionError("scaling factor must be positive");
  const auto k3e = [](const FunctionalReport& r) { return r.K * r.K * r.K * r.E; };
  K3E out;
  out.before = k3e(report(c, an));
  const SpectralField s = scale(c, {0.25, 1.0, std::log(mu)});
  out.after = k3e(report(s, an));
  return out;
}

double strichartz_constant(const SpectralField& c, const AveragedNonlinearity& an) {
  const double s = an.params().sigma;
  const Norms n = norms(c);
  const double lhs = std::pow(an.potential(c), 1 / (2 * s + 2));
  const double rhs = std::pow(n.mass_L2, (4 - s) / (4 * (s + 1))) *
                     std::pow(n.B1_full(), (3 * s - 2) / (4 * (s + 1)));
  return lhs / rhs;
}

std::string csv_header() {
  return "# time: t; M: mass/2; E: Hamiltonian; G: z-momentum; K: <H phi,phi>/2; S = K+M+E; "
         "I: Nehari; P: virial functional; B1_sq: <D phi,phi>; pot: int_0^{pi/2} int |V phi|^{2sigma+2}\n"
         "time,M,E,G,K,S,I,P,B1_sq,pot\n";
}

std::string csv_row(const FunctionalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                r.time, r.M, r.E, r.G, r.K, r.S, r.I, r.P, r.B1_sq, r.pot);
  return buf;
}

}  // namespace rnls
