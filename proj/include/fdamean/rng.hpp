#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace fdamean {

//! Seeded pseudo-random generator (xoshiro256++) with derived substreams.
//!
//! A substream is keyed by (master seed, parent stream id, child index) only,
//! never by the state of the parent generator, so replications drawn from
//! substream(i) produce the same numbers no matter in which order (or on
//! which thread) they run, and nested substreams stay distinct. Gaussians
//! come from an internal Box-Muller transform, which keeps the sequence
//! identical across platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream);

  //! Generator for an independent stream derived from this stream's id.
  Rng substream(std::uint64_t child) const {
    return Rng(master_seed_, derive_stream(stream_, child));
  }

  std::uint64_t seed() const { return master_seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();

  //! Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  //! Uniform on [a, b).
  double uniform(double a, double b) { return a + uniform01() * (b - a); }

  //! Standard normal via Box-Muller; one spare value is cached.
  double normal();

  //! Vector of independent standard normals.
  Eigen::VectorXd normals(Eigen::Index n);

private:
  static std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t child);

  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t state_[4] = {0, 0, 0, 0};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdamean
