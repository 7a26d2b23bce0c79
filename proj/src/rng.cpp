#include "mmsched/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmsched {

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t DeriveSeed(uint64_t base, uint64_t tag) {
  uint64_t state = base;
  uint64_t mixed = SplitMix64(state);
  state = mixed ^ (tag * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  return SplitMix64(state);
}

namespace {
inline uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& word : s_) {
    word = SplitMix64(sm);
  }
}

uint64_t Rng::NextU64() {
  // xoshiro256++ step.
  const uint64_t result = Rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Rng::NextUnit() { return (NextU64() >> 11) * 0x1.0p-53; }

uint64_t Rng::NextBelow(uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("Rng::NextBelow: bound must be nonzero");
  }
  // Rejection below 2^64 mod bound keeps the result exactly uniform.
  const uint64_t threshold = (0 - bound) % bound;
  uint64_t x = NextU64();
  while (x < threshold) {
    x = NextU64();
  }
  return x % bound;
}

double Rng::NextGaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = NextUnit();
  if (u1 <= 0.0) {
    u1 = 0x1.0p-53;
  }
  const double u2 = NextUnit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::complex<double> Rng::NextComplexGaussian() {
  constexpr double kHalfPower = 0.7071067811865476;  // 1/sqrt(2)
  const double re = NextGaussian() * kHalfPower;
  const double im = NextGaussian() * kHalfPower;
  return {re, im};
}

Rng::State Rng::GetState() const { return State{s_, has_cached_, cached_}; }

void Rng::SetState(const State& st) {
  s_ = st.s;
  has_cached_ = st.has_cached;
  cached_ = st.cached;
}

}  // namespace mmsched
