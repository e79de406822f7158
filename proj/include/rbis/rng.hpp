#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>

namespace rbis {

// Deterministic random stream. The engine is specified by mt19937_64 plus
// the fixed transforms below, so a (seed, draw-order) pair yields the same
// values on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Box-Muller; two uniform draws per sample, no caching.
    double normal(double sigma);

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 gen_;
};

// Stable stream-seed derivation: a function of (base seed, label) only,
// so adding streams never perturbs existing ones.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

// Lazily-created per-(node, purpose) streams for one simulation run.
class NodeRngs {
  public:
    explicit NodeRngs(std::uint64_t run_seed) : run_seed_(run_seed) {}

    Rng& stream(std::string_view node, std::string_view purpose);

  private:
    std::uint64_t run_seed_;
    std::map<std::string, Rng, std::less<>> streams_;
};

}  // namespace rbis
