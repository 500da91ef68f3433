#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace mmsbayes {

// SplitMix64 finalizer applied to (root, stream). This is the documented
// rule for deriving independent child seeds: chain i of a multi-chain run
// uses derive_seed(root, i).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept;

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every floating-point transform on top
// of it is implemented here rather than through <random> distributions, whose
// algorithms are implementation-defined.
//
// Single owner: copying is disabled so two consumers never share a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  Rng(Rng&&) noexcept = default;
  Rng& operator=(Rng&&) noexcept = default;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit uniform on [0, 1).
  double uniform();
  // 53-bit uniform on the open interval (0, 1).
  double uniform_open();
  // Standard normal via the Marsaglia polar method.
  double normal();

  // Independent stream seeded by derive_seed(seed(), stream).
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

}  // namespace mmsbayes
