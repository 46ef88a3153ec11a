#include "hallmhd/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hallmhd {
namespace {

constexpr char kMagic[5] = {'H', 'M', 'H', 'D', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("HMHD1: truncated snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& os, const SpectralField& f) {
  const Grid3& g = f.grid();
  os.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.components()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n));
  put_le<double>(os, g.box_length);
  const int h = g.n / 2;
  for (int c = 0; c < f.components(); ++c)
    for (int a = -h; a < h; ++a)
      for (int b = -h; b < h; ++b)
        for (int d = -h; d < h; ++d) {
          const cplx v = f.coeff(c, a, b, d);
          put_le<double>(os, v.real());
          put_le<double>(os, v.imag());
        }
  if (!os) throw std::runtime_error("HMHD1: write failed");
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("HMHD1: cannot open " + path.string());
  write_snapshot(os, f);
}

SpectralField read_snapshot(std::istream& is, double dealias_fraction) {
  char magic[5];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("HMHD1: bad magic");
  const auto rank = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  const auto box = get_le<double>(is);
  if (rank != 1 && rank != 3) throw std::runtime_error("HMHD1: rank must be 1 or 3");
  Grid3 grid{static_cast<int>(n), box, dealias_fraction};
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("HMHD1: ") + e.what());
  }
  SpectralField f(grid, rank == 1 ? Rank::scalar : Rank::vector3);
  const int h = grid.n / 2;
  const int K = grid.kmax();
  const std::size_t B = static_cast<std::size_t>(grid.band());
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (int a = -h; a < h; ++a)
      for (int b = -h; b < h; ++b)
        for (int d = -h; d < h; ++d) {
          const double re = get_le<double>(is);
          const double im = get_le<double>(is);
          if (std::abs(a) > K || std::abs(b) > K || std::abs(d) > K) {
            if (re != 0.0 || im != 0.0) throw std::runtime_error("HMHD1: energy outside the dealiased band");
            continue;
          }
          comp[(static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B +
               static_cast<std::size_t>(d + K)] = cplx(re, im);
        }
  }
  return f;
}

SpectralField read_snapshot(const std::filesystem::path& path, double dealias_fraction) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("HMHD1: cannot open " + path.string());
  return read_snapshot(is, dealias_fraction);
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                      const std::vector<std::pair<std::string, std::string>>& config_echo) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir.string());
  for (const auto& [k, v] : config_echo) manifest << k << " = " << v << '\n';
  manifest << "snapshots = " << traj.size() << '\n';
  char name[64];
  for (std::size_t m = 0; m < traj.size(); ++m) {
    char t[64];
    std::snprintf(t, sizeof t, "%.17g", traj.times[m]);
    manifest << "t[" << m << "] = " << t << '\n';
    static constexpr const char* kNames[3] = {"u", "B", "J"};
    for (int c = 0; c < 3; ++c) {
      std::snprintf(name, sizeof name, "%s_%04zu.hmhd", kNames[c], m);
      write_snapshot(dir / name, traj.states[m][c]);
    }
  }
}

}  // namespace hallmhd
