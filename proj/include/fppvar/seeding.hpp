#pragma once

#include <cstdint>
#include <random>

namespace fppvar {

/// SplitMix64 finalizer. Used as the one mixing function for every derived
/// seed in the library, so streams are reproducible across platforms.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-seed for stream `index` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to the open interval (0,1): (k + 1/2) / 2^52 with k
/// the top 52 bits, so both endpoints are excluded exactly.
constexpr double to_unit_open(std::uint64_t bits)
{
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Sequential random stream. mt19937_64 output is fixed by the standard and
/// the conversion to doubles is ours, so draws are bit-identical everywhere.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t bits() { return engine_(); }
  double uniform() { return to_unit_open(engine_()); }
  bool coin() { return (engine_() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
};

} // namespace fppvar
