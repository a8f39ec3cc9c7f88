#pragma once

#include <cstdint>
#include <random>

namespace rso {

// One independent random stream per stochastic source. The (seed, stream_id)
// pair fully determines the sample sequence, and distinct sources never share
// a stream, so adding a consumer to a model leaves every other stream's
// sequence untouched.
class RngStream {
public:
    RngStream() : RngStream(1, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), gen_(mix(seed, stream_id)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on (0, 1); never returns 0 so -log(u) stays finite.
    double uniform01() {
        const double u = (gen_() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Index in [0, n).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    // splitmix64 over seed xor stream keeps nearby (seed, stream) pairs decorrelated.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 gen_;
};

}  // namespace rso
