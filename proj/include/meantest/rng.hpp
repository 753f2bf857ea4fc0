#ifndef MEANTEST_RNG_HPP
#define MEANTEST_RNG_HPP

#include <array>
#include <cstdint>

namespace meantest {

// splitmix64 finalizer; also used to derive sub-seeds.
std::uint64_t mix64(std::uint64_t z);

// Derives a child seed from (seed, a, b). Used to partition one master seed
// into disjoint stream families (per replicate, per rep, per purpose).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// A splittable random stream. The pair (master_seed, stream_index) fully
// determines the generated sequence; distinct stream indices give streams
// that can be consumed concurrently in any order with identical results.
//
// State is xoshiro256++ seeded through splitmix64.
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Uniform on (0,1); never returns 0 (safe under log()).
  double uniform_open();
  // Uniform integer in [0, bound), bound >= 1. Unbiased (Lemire rejection).
  std::uint64_t uniform_int(std::uint64_t bound);

  // Standard normal via Box-Muller (two uniforms per variate).
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang; valid for all shape > 0, the
  // sub-unit range handled by the boosting identity G(a) = G(a+1) * U^(1/a).
  double gamma(double shape);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

private:
  std::array<std::uint64_t, 4> state_;
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
};

}  // namespace meantest

#endif
