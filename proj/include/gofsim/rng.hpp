#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gofsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic key derivation: the same (seed, path) always yields the same key,
// and distinct paths yield unrelated keys.
inline std::uint64_t derive_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = splitmix64(seed);
  for (std::uint64_t step : path) key = splitmix64(key ^ splitmix64(step + 0x632be59bd9b4e019ULL));
  return key;
}

// Named sub-streams so that independent consumers of one master seed never overlap.
enum class StreamTag : std::uint64_t {
  NullTable = 1,
  MinpBatch = 2,
  Replicate = 3,
  GridPoint = 4,
  Demo = 5,
  Cell = 6,
  Case = 7,
};

// A splittable random stream. Satisfies UniformRandomBitGenerator so it plugs
// into the <random> distributions directly.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key) : key_(key), engine_(splitmix64(key)) {}

  RngStream split(std::uint64_t index) const { return RngStream(derive_key(key_, {index})); }
  RngStream split(StreamTag tag, std::uint64_t index) const {
    return RngStream(derive_key(key_, {static_cast<std::uint64_t>(tag), index}));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do {
      u = std::generate_canonical<double, 64>(engine_);
    } while (u <= 0.0 || u >= 1.0);
    return u;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace gofsim
