#include "rnls/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace rnls {

namespace {

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U u = std::bit_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back((u >> (8 * i)) & 0xff);
}

template <typename T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > in.size()) throw IOError("checkpoint truncated");
  U u = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) u |= U(in[pos + i]) << (8 * i);
  pos += sizeof(U);
  return std::bit_cast<T>(u);
}

}  // namespace

void write_checkpoint(const std::string& path, const SpectralField& c, const NonlinearityParams& p) {
  const auto& b = c.basis();
  std::vector<unsigned char> buf;
  buf.reserve(52 + 16 * std::size_t(c.coeffs().size()));
  for (char ch : {'R', 'N', 'L', 'S'}) buf.push_back(static_cast<unsigned char>(ch));
  put(buf, kCheckpointVersion);
  put(buf, std::uint32_t(b.n_hermite));
  put(buf, std::uint32_t(b.m_quad));
  put(buf, std::uint32_t(b.n_z));
  put(buf, b.l_z);
  put(buf, p.sigma);
  put(buf, p.lambda);
  put(buf, c.time());
  for (Eigen::Index i = 0; i < c.coeffs().size(); ++i) {
    put(buf, c.coeffs()[i].real());
    put(buf, c.coeffs()[i].imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IOError("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!f) throw IOError("write to '" + path + "' failed");
}

Checkpoint read_checkpoint(const std::string& path, int n_theta) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot open checkpoint '" + path + "'");
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), "RNLS", 4) != 0) {
    throw IOError("'" + path + "' is not a checkpoint (bad magic)");
  }
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(buf, pos);
  if (version != kCheckpointVersion) throw IOError("unsupported checkpoint version " + std::to_string(version));
  BasisSpec b;
  b.n_hermite = int(get<std::uint32_t>(buf, pos));
  b.m_quad = int(get<std::uint32_t>(buf, pos));
  b.n_z = int(get<std::uint32_t>(buf, pos));
  b.l_z = get<double>(buf, pos);
  b.n_theta = n_theta;
  Checkpoint cp;
  cp.params.sigma = get<double>(buf, pos);
  cp.params.lambda = get<double>(buf, pos);
  const double t = get<double>(buf, pos);
  try {
    b.validate();
  } catch (const ConfigError& e) {
    throw IOError("checkpoint header is corrupt: " + std::string(e.what()));
  }
  if (b.n_hermite > 4096 || b.n_z > (1 << 24)) throw IOError("checkpoint header is corrupt: sizes out of range");
  const std::size_t expect = pos + 16 * std::size_t(b.spectral_size());
  if (buf.size() != expect) {
    throw IOError("checkpoint '" + path + "' has " + std::to_string(buf.size()) + " bytes, expected " +
                  std::to_string(expect));
  }
  VectorXc coeffs(b.spectral_size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double re = get<double>(buf, pos);
    const double im = get<double>(buf, pos);
    coeffs[i] = {re, im};
  }
  if (!coeffs.allFinite() || !std::isfinite(t)) throw IOError("checkpoint '" + path + "' holds non-finite values");
  cp.field = SpectralField(b, std::move(coeffs), t);
  return cp;
}

}  // namespace rnls
