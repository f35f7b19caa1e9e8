#include "fdamean/rng.hpp"

#include <cmath>
#include <numbers>

namespace fdamean {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t Rng::derive_stream(std::uint64_t parent, std::uint64_t child) {
  // Stable hash combine; child 0 of the root stream is not the root itself,
  // so nested experiments never alias their parent draws.
  std::uint64_t x = parent ^ (child * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL);
  return splitmix64(x);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : master_seed_(seed), stream_(stream) {
  // Mix seed and stream id through two splitmix64 chains so that nearby
  // (seed, stream) pairs land in unrelated states.
  std::uint64_t a = seed;
  std::uint64_t mixed = splitmix64(a) ^ (stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = mixed;
  for (auto& word : state_) {
    word = splitmix64(b);
  }
  // All-zero state is invalid for xoshiro; splitmix64 cannot emit four zeros
  // in a row, but guard anyway.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 0x9e3779b97f4a7c15ULL;
  }
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  if (u1 < 0x1.0p-100) u1 = 0x1.0p-100;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd Rng::normals(Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = normal();
  return out;
}

}  // namespace fdamean
