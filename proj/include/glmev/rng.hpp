#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace glmev {

// splitmix64 finalizer; used both to seed xoshiro and to derive child seeds.
std::uint64_t mix64(std::uint64_t x);

// One step of the splitmix64 sequence: advances `state` and returns output.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Child seed for a (parent, tag...) tuple. Order-sensitive.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags);

/// xoshiro256** 1.0, state filled from splitmix64(seed).
///
/// This is the only bit source in the project. Normal variates come from
/// the Box-Muller transform in NormalStream and nowhere else.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t operator()();

  // Uniform on (0, 1], 53-bit resolution.
  double uniform_open0();
  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

 private:
  std::array<std::uint64_t, 4> s_;
};

// Standard normals via Box-Muller; both variates of each pair are used in
// order (cos branch first).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next();
  Xoshiro256& engine() { return gen_; }

 private:
  Xoshiro256 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Poisson(mean) variate. Inversion by sequential search below mean 10,
// Hormann's PTRS transformed rejection above.
std::uint64_t sample_poisson(Xoshiro256& gen, double mean);

}  // namespace glmev
