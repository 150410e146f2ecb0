#include "ggp/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ggp {

namespace {

constexpr char kMagic[8] = {'G', 'G', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Trajectory& traj) {
  if (!traj.grid) throw std::invalid_argument("trajectory has no grid");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(traj.grid->dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(traj.grid->samples()));
  put<double>(out, traj.grid->length());
  put<std::int32_t>(out, traj.params.mu);
  const std::string p = to_string(traj.params.p);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.size()));
  out.write(p.data(), static_cast<std::streamsize>(p.size()));
  put<std::uint64_t>(out, traj.fields.size());
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    put<double>(out, traj.times[k]);
    const ComplexArray& v = traj.fields[k].values();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      put<double>(out, v(i).real());
      put<double>(out, v(i).imag());
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported checkpoint version");
  Checkpoint ck;
  ck.n = static_cast<int>(get<std::uint32_t>(in));
  ck.samples = static_cast<int>(get<std::uint32_t>(in));
  ck.length = get<double>(in);
  ck.mu = get<std::int32_t>(in);
  const std::uint32_t len = get<std::uint32_t>(in);
  std::string p(len, '\0');
  if (!in.read(p.data(), len)) throw std::runtime_error("truncated checkpoint");
  ck.p = parse_rational(p);
  if (ck.n < 1 || ck.n > 2 || ck.samples < 1) throw std::runtime_error("corrupt checkpoint header");
  const Eigen::Index size = ck.n == 1 ? ck.samples : Eigen::Index(ck.samples) * ck.samples;
  const std::uint64_t count = get<std::uint64_t>(in);
  for (std::uint64_t k = 0; k < count; ++k) {
    ck.times.push_back(get<double>(in));
    ComplexArray v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      v(i) = Complex(re, im);
    }
    ck.fields.push_back(std::move(v));
  }
  return ck;
}

}  // namespace ggp
