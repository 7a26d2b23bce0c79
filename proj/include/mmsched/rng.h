/**
 * @file rng.h
 * @brief Seedable, platform-stable random number generation.
 *
 * All stochastic code in the library draws from this generator so that a
 * (config, seed) pair reproduces bit-identical results on any platform.
 * The engine is xoshiro256++ seeded through splitmix64; Gaussian variates
 * come from a Box-Muller transform on 53-bit uniforms.
 */
#ifndef MMSCHED_RNG_H_
#define MMSCHED_RNG_H_

#include <array>
#include <complex>
#include <cstdint>

namespace mmsched {

// One step of the splitmix64 sequence; advances state in place.
uint64_t SplitMix64(uint64_t& state);

// Derives an independent child seed from a base seed and a tag. Used to give
// each component (trace generator, agent, per-TTI grouping, ...) its own
// stream without manual seed bookkeeping.
uint64_t DeriveSeed(uint64_t base, uint64_t tag);

class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();

  // Uniform in [0, 1) with 53-bit resolution.
  double NextUnit();

  // Unbiased uniform integer in [0, bound); bound must be nonzero.
  uint64_t NextBelow(uint64_t bound);

  // Standard normal via Box-Muller (second variate cached).
  double NextGaussian();

  // Circularly symmetric complex Gaussian CN(0, 1).
  std::complex<double> NextComplexGaussian();

  // Serializable state: xoshiro words plus the Box-Muller cache.
  struct State {
    std::array<uint64_t, 4> s;
    bool has_cached;
    double cached;
  };
  State GetState() const;
  void SetState(const State& st);

 private:
  std::array<uint64_t, 4> s_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace mmsched

#endif  // MMSCHED_RNG_H_
