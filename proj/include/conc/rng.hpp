#pragma once

#include <cmath>
#include <cstdint>

namespace conc {

// Deterministic counter-friendly generator.  Each (seed, index) pair yields
// an independent stream, so batched sampling is reproducible no matter how
// the work is split.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1); never returns an exact endpoint
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // uniform in [a, b)
    double next_range(double a, double b) { return a + (b - a) * next_unit(); }

    // standard normal via Box-Muller (self-contained, platform independent)
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // standard exponential
    double next_exponential() { return -std::log(next_unit()); }

    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Sub-stream derivation: mixes a base seed with a stream index so that
// streams for distinct indices are uncorrelated.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    g.next_u64();
    return g.next_u64();
}

}  // namespace conc
