// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace cellcap {

/// SplitMix64 step (Steele, Lea, Flood 2014). Used only to derive seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ (Blackman & Vigna). Small state, ~1 ns per draw, and the
/// statistical quality the Monte Carlo modules need.
class RngEngine {
  public:
    using result_type = std::uint64_t;

    explicit RngEngine(std::uint64_t seed = 0) {
        for (auto& word : state_) word = splitmix64(seed);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }

    result_type operator()() {
        std::uint64_t const out = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t const t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return out;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Engine for logical stream `stream` of a run keyed by `seed`.
///
/// Streams are derived by SplitMix64 mixing so that (seed, 0), (seed, 1), ...
/// are decorrelated. Everything downstream partitions work over a fixed set
/// of logical streams, which makes results independent of the number of OS
/// threads actually used.
inline RngEngine make_stream(std::uint64_t seed, std::uint64_t stream) {
    return RngEngine(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
}

/// Number of logical substreams every batched Monte Carlo op is split into.
/// Fixed (not tied to hardware) so a given seed always produces the same
/// partition and therefore bit-identical results under any thread count.
inline constexpr std::size_t kSubstreams = 64;

namespace rngdetail {

inline double uniform01(RngEngine& eng) {
    // 53-bit mantissa, never exactly 0 or 1
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Ziggurat tables for the standard normal (Doornik's ZIGNOR layout,
// 128 layers). Layer i spans [0, x[i]] horizontally; r[i] = x[i+1]/x[i]
// is the quick-accept ratio.
struct ZigguratNormal {
    static constexpr int kLayers = 128;
    static constexpr double kTail = 3.442619855899;       // rightmost x
    static constexpr double kArea = 9.91256303526217e-3;  // per-layer area
    double x[kLayers + 1];
    double ratio[kLayers];

    ZigguratNormal() {
        double const f_tail = std::exp(-0.5 * kTail * kTail);
        x[0] = kArea / f_tail;
        x[1] = kTail;
        x[kLayers] = 0.0;
        for (int i = 2; i < kLayers; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(kArea / x[i - 1] +
                                             std::exp(-0.5 * x[i - 1] * x[i - 1])));
        }
        for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

inline ZigguratNormal const& ziggurat() {
    static ZigguratNormal const tables;
    return tables;
}

}  // namespace rngdetail

/// Standard normal draw (ziggurat; Marsaglia-Tsang 2000 / Doornik 2005).
inline double sample_standard_normal(RngEngine& eng) {
    auto const& z = rngdetail::ziggurat();
    while (true) {
        std::uint64_t const bits = eng();
        // disjoint bit ranges: layer from the low bits, mantissa from the top
        int const layer = static_cast<int>(bits & 0x7F);
        double const u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;  // (-1, 1)
        if (std::abs(u) < z.ratio[layer]) return u * z.x[layer];
        if (layer == 0) {
            // tail beyond kTail by Marsaglia's exponential wrap
            double xx, yy;
            do {
                xx = -std::log(rngdetail::uniform01(eng)) / z.kTail;
                yy = -std::log(rngdetail::uniform01(eng));
            } while (yy + yy < xx * xx);
            return u < 0.0 ? -(z.kTail + xx) : z.kTail + xx;
        }
        double const cand = u * z.x[layer];
        double const f0 = std::exp(-0.5 * (z.x[layer] * z.x[layer] - cand * cand));
        double const f1 = std::exp(-0.5 * (z.x[layer + 1] * z.x[layer + 1] - cand * cand));
        if (f1 + rngdetail::uniform01(eng) * (f0 - f1) < 1.0) return cand;
    }
}

/// Gamma(shape, scale) sampler via the Marsaglia-Tsang squeeze (shape >= 1
/// directly; shape < 1 via the boost G(a) = G(a+1) U^{1/a}). The squeeze
/// constants are hoisted here so per-draw cost in hot loops stays at one
/// normal plus one uniform.
class GammaSampler {
  public:
    GammaSampler(double shape, double scale) : scale_(scale) {
        if (!(shape > 0.0) || !(scale > 0.0)) {
            throw std::invalid_argument("GammaSampler: shape and scale must be > 0");
        }
        inv_shape_ = shape < 1.0 ? 1.0 / shape : 0.0;
        double const s = shape < 1.0 ? shape + 1.0 : shape;
        d_ = s - 1.0 / 3.0;
        c_ = 1.0 / std::sqrt(9.0 * d_);
    }

    double operator()(RngEngine& eng) const {
        double draw;
        while (true) {
            double const x = sample_standard_normal(eng);
            double const t = 1.0 + c_ * x;
            if (t <= 0.0) continue;
            double const v = t * t * t;
            double const u = rngdetail::uniform01(eng);
            double const x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) {
                draw = d_ * v;
                break;
            }
            if (std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
                draw = d_ * v;
                break;
            }
        }
        if (inv_shape_ != 0.0) draw *= std::pow(rngdetail::uniform01(eng), inv_shape_);
        return scale_ * draw;
    }

  private:
    double scale_;
    double inv_shape_;
    double d_;
    double c_;
};

/// One-off Gamma(shape, scale) draw.
inline double sample_gamma(double shape, double scale, RngEngine& eng) {
    return GammaSampler(shape, scale)(eng);
}

/// Uniform draw on [lo, hi).
inline double sample_uniform(double lo, double hi, RngEngine& eng) {
    return lo + (hi - lo) * rngdetail::uniform01(eng);
}

/// Poisson draw. Inversion by sequential search for small means, PTRS
/// (Hoermann 1993) rejection for large ones.
inline std::uint64_t sample_poisson(double mean, RngEngine& eng) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        double limit = std::exp(-mean);
        double prod = rngdetail::uniform01(eng);
        std::uint64_t n = 0;
        while (prod > limit) {
            ++n;
            prod *= rngdetail::uniform01(eng);
        }
        return n;
    }
    // PTRS transformed rejection
    double const slam = std::sqrt(mean);
    double const llam = std::log(mean);
    double const b = 0.931 + 2.53 * slam;
    double const a = -0.059 + 0.02483 * b;
    double const inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double const vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        double u = rngdetail::uniform01(eng) - 0.5;
        double v = rngdetail::uniform01(eng);
        double us = 0.5 - std::abs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * llam - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace cellcap
