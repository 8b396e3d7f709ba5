#pragma once

#include <cmath>
#include <cstdint>

namespace mfpde {

// splitmix64 step; used both as a standalone generator and to derive
// decorrelated substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream seed for (master, stream). Streams are indexed by a stable id
// (particle index, repetition index, ...), so enlarging an ensemble never
// reshuffles the noise of existing members.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (0xd1342543de82ef95ULL * (stream + 1));
  return splitmix64(s);
}

// xoshiro256** — small, fast, and fully under our control so that seeded
// runs are reproducible byte-for-byte independently of the standard library.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    // seed expansion via splitmix64, as recommended by the xoshiro authors
    for (auto& w : s_) w = splitmix64(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform double in (0,1); never returns 0, safe inside log()
  double uniform() {
    const std::uint64_t bits = next() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Standard-normal stream (Box–Muller, pair cached). One instance per
// particle/repetition substream.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  GaussianStream(std::uint64_t master, std::uint64_t stream)
      : rng_(substream_seed(master, stream)) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double uniform() { return rng_.uniform(); }

 private:
  Xoshiro256 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mfpde
