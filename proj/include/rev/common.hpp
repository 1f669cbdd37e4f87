#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rev {

// All randomness flows through explicitly seeded generators; no globals.
// Derived streams (per trial / per cell / per work item) come from
// split(), which hashes the parent seed with the stream index so parallel
// work items never share a sequence.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(mix(seed)) {}

  double uniform01() {
    // 53-bit mantissa uniform in [0,1)
    return (eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  uint64_t bits() { return eng_(); }
  // index into a discrete distribution given cumulative probabilities
  size_t pick(const std::vector<double>& probs) {
    double u = uniform01();
    double acc = 0.0;
    for (size_t k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

  static uint64_t mix(uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    return mix(mix(seed) ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  }
  static Rng split(uint64_t seed, uint64_t stream) { return Rng(derive(seed, stream)); }

 private:
  std::mt19937_64 eng_;
};

constexpr double kProbTolConstruct = 1e-12;  // probability normalization at construction
constexpr double kProbTolAssert = 1e-9;      // in assertions / postconditions

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace rev
