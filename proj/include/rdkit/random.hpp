/*
 * Copyright 2026 the rdkit authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RDKIT_RANDOM_HPP_
#define RDKIT_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rdkit {

/*! \brief 64-bit finalizer (splitmix64). */
constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/*!
 * \brief Derives an independent child seed from (seed, stream name, index).
 *
 * Every random decision in the toolkit draws from a stream derived this way
 * from one root seed, so runs are reproducible end to end.
 */
inline uint64_t derive_seed(uint64_t seed, std::string_view stream, uint64_t index = 0) {
  // FNV-1a over the stream name, then mixed with seed and index.
  uint64_t h = 1469598103934665603ull;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  h = mix64(h ^ mix64(seed));
  return mix64(h ^ mix64(index * 0x9e3779b97f4a7c15ull + 1));
}

/*!
 * \brief Deterministic counter-based generator.
 *
 * Output i is a pure function of (key, i); streams are split with
 * derive_seed. The algorithm is pinned (no std library distributions) so
 * sequences are identical across platforms and compilers.
 */
class Rng {
 public:
  explicit Rng(uint64_t key) : state_(key) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  /*! \brief Uniform double in [0, 1). */
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /*! \brief Uniform double in (0, 1); safe to pass through log(). */
  double next_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /*! \brief Standard normal via Box-Muller. */
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  /*! \brief Gumbel(0, scale): -scale * ln(-ln u). */
  double next_gumbel(double scale) { return -scale * std::log(-std::log(next_open())); }

  /*! \brief Uniform integer in [0, n); n must be > 0. */
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace rdkit

#endif  // RDKIT_RANDOM_HPP_
