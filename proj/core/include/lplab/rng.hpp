#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace lplab {

// Named random stream. The stream key mixes (seed, replication, purpose)
// through SplitMix64 and seeds a std::mt19937_64, whose output sequence is
// fixed by the standard. Normals use the Boost ziggurat sampler, so draws are
// identical across standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t replication, std::string_view purpose);

    double normal();
    void fill_normal(double* out, std::size_t n);
    double uniform();  // [0, 1)

    std::mt19937_64& engine() { return engine_; }

    static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication,
                                    std::string_view purpose);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lplab
