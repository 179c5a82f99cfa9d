#include "rnls/basis.hpp"

#include <sstream>
#include <vector>

namespace rnls {

void BasisSpec::validate() const {
  std::vector<std::string> errs;
  if (n_hermite < 0) errs.push_back("n_hermite must be >= 0");
  if (m_quad < n_hermite + 1) errs.push_back("m_quad must be >= n_hermite + 1");
  if (n_z < 4 || n_z % 2 != 0) errs.push_back("n_z must be even and >= 4");
  if (!(l_z > 0)) errs.push_back("l_z must be positive");
  if (n_theta < 2) errs.push_back("n_theta must be >= 2");
  if (!errs.empty()) {
    std::string msg = "invalid basis:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ConfigError(msg);
  }
}

std::string describe(const BasisSpec& s) {
  std::ostringstream os;
  os << "N_h=" << s.n_hermite << " M_quad=" << s.m_quad << " N_z=" << s.n_z << " L_z=" << s.l_z
     << " N_theta=" << s.n_theta;
  return os.str();
}

HermiteGrid HermiteGrid::make(int n_hermite, int points, double beta) {
  HermiteGrid g;
  g.modes = n_hermite + 1;
  g.points = points;
  g.beta = beta;
  const auto rule = gauss_hermite<double>(points, beta);
  g.nodes = rule.nodes;
  g.weights = rule.weights;
  const MatrixXr h = hermite_functions<double>(g.nodes, n_hermite);
  g.synth_t = h.transpose();
  g.analysis = g.weights.asDiagonal() * h;
  return g;
}

}  // namespace rnls
