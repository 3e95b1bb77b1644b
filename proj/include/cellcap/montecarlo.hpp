// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cellcap/capacity.hpp"
#include "cellcap/channel.hpp"
#include "cellcap/parallel.hpp"
#include "cellcap/rng.hpp"

namespace cellcap {

/// Poisson-field simulation setup. The field is truncated at r_max (the
/// paper's plane is infinite); r_min = 0 mirrors its no-exclusion-zone
/// assumption, so single draws can be astronomically large by design --
/// that is the heavy tail, not a bug.
struct SimConfig {
    NetworkParams np;
    ShadowingParams sp;
    double r_max;  // m; default pick: 100x the mean cell radius 1/sqrt(pi lambda)
    double r_min = 0.0;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;

    double expected_interferers() const {
        return np.lambda_bs * M_PI * (r_max * r_max - r_min * r_min);
    }

    void validate() const {
        np.validate();
        if (!(r_max > r_min) || !(r_min >= 0.0)) {
            throw std::domain_error("SimConfig: needs r_max > r_min >= 0");
        }
        if (n_samples < 1) throw std::domain_error("SimConfig: n_samples must be >= 1");
    }
};

inline double default_r_max(double lambda_bs) { return 100.0 / std::sqrt(M_PI * lambda_bs); }

/// Sorted empirical sample set with its generating configuration.
struct EmpiricalDistribution {
    std::vector<double> samples;
    SimConfig provenance;

    static EmpiricalDistribution from_samples(std::vector<double> s, SimConfig const& cfg) {
        for (double v : s) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("EmpiricalDistribution: non-finite sample");
            }
        }
        std::sort(s.begin(), s.end());
        return EmpiricalDistribution{std::move(s), cfg};
    }
};

/// Interferer distances of one realized field: count ~ Poisson(lambda |A|),
/// squared distances uniform on [r_min^2, r_max^2].
inline std::vector<double> sample_poisson_field(SimConfig const& cfg, RngEngine& rng) {
    cfg.validate();
    std::uint64_t const count = sample_poisson(cfg.expected_interferers(), rng);
    double const lo = cfg.r_min * cfg.r_min;
    double const hi = cfg.r_max * cfg.r_max;
    std::vector<double> out(count);
    for (auto& r : out) r = std::sqrt(sample_uniform(lo, hi, rng));
    return out;
}

namespace mcdetail {

inline double path_gain(double r_squared, double sigma_r) {
    if (sigma_r == 4.0) return 1.0 / (r_squared * r_squared);
    if (sigma_r == 3.0) return 1.0 / (r_squared * std::sqrt(r_squared));
    if (sigma_r == 2.0) return 1.0 / r_squared;
    return std::pow(r_squared, -0.5 * sigma_r);
}

}  // namespace mcdetail

/// One draw of the aggregate interference  sum_b r_b^{-sigma_r} I_b  over a
/// realized field, with I_b = shadow * summed Nakagami powers.
inline double simulate_aggregate_interference(SimConfig const& cfg, RngEngine& rng) {
    std::uint64_t const count = sample_poisson(cfg.expected_interferers(), rng);
    double const lo = cfg.r_min * cfg.r_min;
    double const hi = cfg.r_max * cfg.r_max;
    GammaSampler const shadow(cfg.sp.lambda_sh, cfg.sp.omega / cfg.sp.lambda_sh);
    GammaSampler const fading(cfg.np.diversity_order(), 1.0 / cfg.np.m);
    double const sigma_r = cfg.np.sigma_r;
    double const p_ant = cfg.np.p_ant;
    double acc = 0.0;
    for (std::uint64_t b = 0; b < count; ++b) {
        double const s = sample_uniform(lo, hi, rng);
        acc += p_ant * shadow(rng) * fading(rng) * mcdetail::path_gain(s, sigma_r);
    }
    return acc;
}

/// n_samples aggregate draws partitioned over the fixed substream set, so
/// the sorted output is bit-identical for any thread count.
inline EmpiricalDistribution aggregate_interference_samples(SimConfig const& cfg) {
    cfg.validate();
    std::vector<double> all(cfg.n_samples);
    std::size_t const n = cfg.n_samples;
    parallel_for(kSubstreams, [&](std::size_t w) {
        std::size_t const begin = n * w / kSubstreams;
        std::size_t const end = n * (w + 1) / kSubstreams;
        if (begin == end) return;
        RngEngine rng = make_stream(cfg.seed, w);
        for (std::size_t i = begin; i < end; ++i) {
            all[i] = simulate_aggregate_interference(cfg, rng);
        }
    });
    return EmpiricalDistribution::from_samples(std::move(all), cfg);
}

/// Levy(gamma^2) draw by the inverse-square-normal transform: gamma^2 / Z^2.
inline double sample_levy(double gamma_levy, RngEngine& rng) {
    if (!(gamma_levy > 0.0)) throw std::domain_error("sample_levy: gamma_levy must be > 0");
    double z = 0.0;
    while (z == 0.0) z = sample_standard_normal(rng);
    return gamma_levy * gamma_levy / (z * z);
}

/// Ergodic-capacity estimate  mean log2(1 + r_b^{-4} S_d'/S_I')  with
/// S_d' ~ Gamma(N_b N_t^c, scale 2) and S_I' ~ Levy(gamma^2). Fixed
/// substream partition => bit-identical for a given seed under any thread
/// count. error_estimate is the standard error of the mean.
inline CapacityResult simulate_capacity(CoopConfig const& cfg, double gamma_levy,
                                        std::size_t n_samples, std::uint64_t seed) {
    if (!(gamma_levy > 0.0)) throw std::domain_error("simulate_capacity: gamma_levy must be > 0");
    if (n_samples < 10000) {
        throw std::domain_error("simulate_capacity: need n_samples >= 1e4 for a usable estimate");
    }
    double const shape = cfg.streams();
    double const r4 = std::pow(cfg.r_b, 4.0);
    double sums[kSubstreams] = {};
    double sumsqs[kSubstreams] = {};
    parallel_for(kSubstreams, [&](std::size_t w) {
        std::size_t const begin = n_samples * w / kSubstreams;
        std::size_t const end = n_samples * (w + 1) / kSubstreams;
        if (begin == end) return;
        RngEngine rng = make_stream(seed, w);
        GammaSampler const desired(shape, 2.0);
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            double const sd = desired(rng);
            double const si = sample_levy(gamma_levy, rng);
            double const c = std::log1p(sd / (si * r4)) * M_LOG2E;
            sum += c;
            sumsq += c * c;
        }
        sums[w] = sum;
        sumsqs[w] = sumsq;
    });
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::size_t w = 0; w < kSubstreams; ++w) {
        sum += sums[w];
        sumsq += sumsqs[w];
    }
    double const n = static_cast<double>(n_samples);
    double const mean = sum / n;
    double const var = std::max(0.0, sumsq / n - mean * mean);
    CapacityResult out;
    out.value = mean;
    out.method = CapacityResult::Method::montecarlo;
    out.error_estimate = std::sqrt(var / n);
    return out;
}

/// Kolmogorov-Smirnov statistic: sup over the sample points of
/// |empirical CDF - cdf|.
template <typename Cdf>
double ks_distance(EmpiricalDistribution const& emp, Cdf&& cdf) {
    std::size_t const n = emp.samples.size();
    if (n < 2) throw std::invalid_argument("ks_distance: need at least 2 samples");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double const f = cdf(emp.samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace cellcap
