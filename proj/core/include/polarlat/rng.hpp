#pragma once

#include <cstdint>
#include <cmath>

namespace polarlat {

/// Counter-based generator: output i of a stream is mix64(key + i*PHI), the
/// SplitMix64 finalizer over an affine counter. Streams are split by hashing
/// the stream id into the key, so (seed, stream, counter) fully determines
/// every draw; trials can be replayed or reordered without state.
class CounterRng {
 public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed + kPhi) ^ mix64(stream + kStreamSalt))) {}

    CounterRng stream(std::uint64_t stream_id) const {
        CounterRng r(0);
        r.key_ = mix64(key_ ^ mix64(stream_id + kStreamSalt));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return mix64(key_ + (counter_++) * kPhi); }

    /// Uniform draw in the open interval (0, 1).
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

 private:
    static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

    static std::uint64_t mix64(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace polarlat
