// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

#include "cellcap/rng.hpp"
#include "cellcap/specfun.hpp"

namespace cellcap {

/// Gamma approximation of lognormal shadowing.
///
/// lambda_sh = 1 / (exp((sigma_dB/8.686)^2) - 1)
/// omega     = p_r * sqrt((lambda_sh + 1) / lambda_sh)
///
/// omega is kept in this square-root form deliberately even though plain
/// moment matching would use omega = p_r; see the test harness for the
/// sensitivity switch.
struct ShadowingParams {
    double sigma_db;
    double lambda_sh;
    double omega;
    double p_r;
};

inline ShadowingParams shadowing_from_sigma_db(double sigma_db, double p_r) {
    if (!(sigma_db > 0.0) || !(sigma_db <= 20.0)) {
        throw std::domain_error("shadowing_from_sigma_db: sigma_dB must be in (0, 20]");
    }
    if (!(p_r > 0.0)) throw std::domain_error("shadowing_from_sigma_db: p_r must be > 0");
    double const scaled = sigma_db / 8.686;
    double const lambda_sh = 1.0 / (std::exp(scaled * scaled) - 1.0);
    double const omega = p_r * std::sqrt((lambda_sh + 1.0) / lambda_sh);
    return ShadowingParams{sigma_db, lambda_sh, omega, p_r};
}

/// Interferer field description: Poisson BS density, path loss, antenna
/// counts, Nakagami shape, per-antenna power.
struct NetworkParams {
    double lambda_bs = 1.0 / (M_PI * 500.0 * 500.0);  // BS per m^2
    double sigma_r = 4.0;                             // path-loss exponent
    int n_t = 4;                                      // transmit antennas per BS
    int n_r = 2;                                      // receive antennas per UE
    double m = 1.0;                                   // Nakagami shape
    double p_ant = 1.0;                               // per-antenna power

    double alpha() const { return 2.0 / sigma_r; }
    double diversity_order() const { return n_t * n_r * m; }

    void validate() const {
        if (!(lambda_bs > 0.0)) throw std::domain_error("NetworkParams: lambda_bs must be > 0");
        if (!(sigma_r >= 2.0)) throw std::domain_error("NetworkParams: sigma_r must be >= 2");
        if (n_t < 1 || n_r < 1) throw std::domain_error("NetworkParams: antenna counts must be >= 1");
        if (!(m > 0.0)) throw std::domain_error("NetworkParams: Nakagami m must be > 0");
        if (!(p_ant > 0.0)) throw std::domain_error("NetworkParams: p_ant must be > 0");
    }
};

/// Gamma shadowing density  p(x) = (1/Gamma(l)) (l/O)^l x^{l-1} e^{-(l/O) x}.
inline double gamma_shadow_pdf(double x, ShadowingParams const& sp) {
    if (!(x > 0.0)) throw std::domain_error("gamma_shadow_pdf: requires x > 0");
    double const l = sp.lambda_sh;
    double const rate = l / sp.omega;
    return std::exp(l * std::log(rate) + (l - 1.0) * std::log(x) - rate * x - lgamma_fn(l));
}

/// Generalized-K density of a single BS's aggregate sub-stream interference
/// power: Gamma(N_t N_r m) fading sum times Gamma(lambda_sh) shadowing.
inline double generalized_k_pdf(double y, NetworkParams const& np, ShadowingParams const& sp) {
    if (!(y > 0.0)) throw std::domain_error("generalized_k_pdf: requires y > 0");
    np.validate();
    double const k = np.diversity_order();
    double const l = sp.lambda_sh;
    double const rate = np.m * l / sp.omega;
    double const order = l - k;
    double const arg = 2.0 * std::sqrt(rate * y);
    double const log_pref = 0.5 * (k + l) * std::log(rate) - lgamma_fn(k) - lgamma_fn(l) +
                            0.5 * (k + l - 2.0) * std::log(y);
    return 2.0 * std::exp(log_pref) * bessel_k(order, arg);
}

/// Nakagami-m fading power: Gamma(shape m, mean 1).
inline double sample_nakagami_power(double m, RngEngine& rng) {
    if (!(m > 0.0)) throw std::domain_error("sample_nakagami_power: m must be > 0");
    return sample_gamma(m, 1.0 / m, rng);
}

/// One draw of a single BS's interference power (no path loss):
/// shadow factor times the summed Nakagami powers of all N_t x N_r
/// sub-streams. The sum of N_t N_r iid Gamma(m, 1/m) variates is drawn
/// directly as Gamma(N_t N_r m, 1/m); same law, one variate.
inline double sample_interferer_power(NetworkParams const& np, ShadowingParams const& sp,
                                      RngEngine& rng) {
    double const w = sample_gamma(sp.lambda_sh, sp.omega / sp.lambda_sh, rng);
    double const fading = sample_gamma(np.diversity_order(), 1.0 / np.m, rng);
    return np.p_ant * w * fading;
}

}  // namespace cellcap
