#pragma once

#include <string>

#include "rnls/nonlinearity.hpp"

namespace rnls {

/// Binary little-endian checkpoint: "RNLS", u32 version, u32 N_hermite,
/// u32 M_quad, u32 N_z, f64 L_z, f64 sigma, f64 lambda, f64 time, then the
/// coefficients as interleaved f64 (re, im) in storage order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  SpectralField field;
  NonlinearityParams params;
};

void write_checkpoint(const std::string& path, const SpectralField& c, const NonlinearityParams& p);
/// N_theta is not part of the format; the caller's value is used.
Checkpoint read_checkpoint(const std::string& path, int n_theta = 64);

}  // namespace rnls
