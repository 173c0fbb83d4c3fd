#ifndef METROLOGY_RNG_HPP
#define METROLOGY_RNG_HPP

#include <cstdint>
#include <cmath>

namespace metrology {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen because the algorithm is
/// fully specified by integer arithmetic, so seeded runs reproduce bit-exactly
/// across platforms and standard-library versions.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Poisson draw via Knuth's product method; means above 30 are split into
    /// halves and summed (Poisson additivity) to keep the product from
    /// underflowing. Counts as a single draw.
    int poisson(double mean) {
        ++draws_;
        return poisson_inner(mean);
    }

    /// Number of Poisson draws consumed so far (budget accounting).
    long draws() const { return draws_; }

  private:
    int poisson_inner(double mean) {
        if (!(mean > 0.0)) return 0;
        if (mean > 30.0) {
            const double half = mean / 2.0;
            return poisson_inner(half) + poisson_inner(mean - half);
        }
        const double limit = std::exp(-mean);
        int n = -1;
        double product = 1.0;
        do {
            product *= next_double();
            ++n;
        } while (product > limit);
        return n;
    }

    std::uint64_t state_;
    long draws_ = 0;
};

/// Stream derivation for independent episodes: two SplitMix64 scrambles of
/// (master, index). Documented so recorded seeds stay meaningful.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 g(master);
    const std::uint64_t a = g.next_u64();
    SplitMix64 h(a ^ (index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL));
    return h.next_u64();
}

}  // namespace metrology

#endif
