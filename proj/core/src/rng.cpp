#include "lplab/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace lplab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::stream_key(std::uint64_t seed, std::uint64_t replication,
                              std::string_view purpose) {
    // FNV-1a over the purpose tag
    std::uint64_t tag = 0xcbf29ce484222325ULL;
    for (unsigned char c : purpose) {
        tag ^= c;
        tag *= 0x100000001b3ULL;
    }
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ replication);
    k = splitmix64(k ^ tag);
    return k;
}

Rng::Rng(std::uint64_t seed, std::uint64_t replication, std::string_view purpose)
    : engine_(stream_key(seed, replication, purpose)) {}

double Rng::normal() {
    boost::random::normal_distribution<double> dist;
    return dist(engine_);
}

void Rng::fill_normal(double* out, std::size_t n) {
    boost::random::normal_distribution<double> dist;
    for (std::size_t i = 0; i < n; ++i) out[i] = dist(engine_);
}

double Rng::uniform() {
    // 53 high bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace lplab
