#include "rbis/rng.hpp"

#include <cmath>
#include <numbers>

namespace rbis {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

double Rng::normal(double sigma) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    return splitmix64(splitmix64(base) ^ fnv1a64(label));
}

Rng& NodeRngs::stream(std::string_view node, std::string_view purpose) {
    std::string key;
    key.reserve(node.size() + purpose.size() + 1);
    key.append(node);
    key.push_back('/');
    key.append(purpose);
    auto it = streams_.find(key);
    if (it == streams_.end())
        it = streams_.emplace(key, Rng(derive_seed(run_seed_, key))).first;
    return it->second;
}

}  // namespace rbis
