// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cellcap/channel.hpp"
#include "cellcap/curve.hpp"
#include "cellcap/errors.hpp"
#include "cellcap/interference.hpp"
#include "cellcap/quadrature.hpp"
#include "cellcap/specfun.hpp"

namespace cellcap {

/// Cooperative cluster: N_b cooperating BSs, N_t^c cooperative antennas per
/// BS, common BS-user distance r_b. The Bessel order v = N_b N_t^c - 1/2 of
/// the ratio law is always a positive half-integer.
struct CoopConfig {
    int n_b;
    int n_t_c;
    double r_b;

    CoopConfig(int n_b_, int n_t_c_, double r_b_) : n_b(n_b_), n_t_c(n_t_c_), r_b(r_b_) {
        if (n_b < 1 || n_b > 3) throw std::domain_error("CoopConfig: n_b must be in [1, 3]");
        if (n_t_c < 1 || n_t_c > 4) throw std::domain_error("CoopConfig: n_t_c must be in [1, 4]");
        if (!(r_b > 0.0)) throw std::domain_error("CoopConfig: r_b must be > 0");
    }

    int streams() const { return n_b * n_t_c; }
    double bessel_order() const { return streams() - 0.5; }
};

struct CapacityResult {
    enum class Method { quadrature, meijerg, montecarlo };
    double value = 0.0;  // bits/s/Hz, bandwidth normalized to 1
    Method method = Method::quadrature;
    double error_estimate = 0.0;
};

/// Largest eigenvalue of H H^H (the MRT/MRC combining gain).
inline double max_eigen_gain(Eigen::MatrixXcd const& H) {
    if (H.rows() == 0 || H.cols() == 0) {
        throw std::invalid_argument("max_eigen_gain: empty channel matrix");
    }
    Eigen::MatrixXcd const gram = H * H.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    double const top = solver.eigenvalues().maxCoeff();
    return top > 0.0 ? top : 0.0;
}

/// Covariance of the cooperative desired signal: sum over streams of
/// r_b^{-sigma_r} |z|^2 with P_ant = 1.
inline double covariance_rxx(CoopConfig const& cfg, std::span<double const> z, double sigma_r) {
    if (z.size() != static_cast<std::size_t>(cfg.streams())) {
        throw std::invalid_argument("covariance_rxx: need one fading power per stream");
    }
    double const path = std::pow(cfg.r_b, -sigma_r);
    double acc = 0.0;
    for (double zi : z) {
        if (zi < 0.0) throw std::domain_error("covariance_rxx: fading powers must be >= 0");
        acc += zi;
    }
    return path * acc;
}

/// Density of the aggregate desired power: chi-squared with 2 N_b N_t^c
/// degrees of freedom, i.e. Gamma(N_b N_t^c, scale 2).
inline double desired_pdf_chisq(double x, CoopConfig const& cfg) {
    if (!(x > 0.0)) throw std::domain_error("desired_pdf_chisq: requires x > 0");
    int const n = cfg.streams();
    return std::exp((n - 1) * std::log(x) - 0.5 * x - lgamma_fn(n) - n * M_LN2);
}

namespace capdetail {

// log of p = gamma^{v+1} sqrt(2/pi) / ((N-1)! 2^N)
inline double log_ratio_prefactor(int streams, double gamma_levy) {
    double const v = streams - 0.5;
    return (v + 1.0) * std::log(gamma_levy) + 0.5 * std::log(2.0 / M_PI) -
           lgamma_fn(streams) - streams * M_LN2;
}

}  // namespace capdetail

/// Density of the desired-to-interference ratio eta' = S_d'/S_I':
///   f(eta') = p eta'^{(v-1)/2} K_v(gamma sqrt(eta')).
inline double ratio_pdf(double eta, CoopConfig const& cfg, double gamma_levy) {
    if (!(eta > 0.0)) throw std::domain_error("ratio_pdf: requires eta > 0");
    if (!(gamma_levy > 0.0)) throw std::domain_error("ratio_pdf: requires gamma_levy > 0");
    int const n = cfg.streams();
    double const v = cfg.bessel_order();
    double const arg = gamma_levy * std::sqrt(eta);
    double const log_pref =
        capdetail::log_ratio_prefactor(n, gamma_levy) + 0.5 * (v - 1.0) * std::log(eta);
    return std::exp(log_pref) * bessel_k_half_integer(n - 1, arg);
}

/// Normalized downlink average capacity by direct quadrature:
///   C = p Int_0^inf log2(1 + r_b^{-4} eta) eta^{(v-1)/2} K_v(g sqrt(eta)) deta.
/// Integrated in t = gamma sqrt(eta): the split at eta = gamma^{-2} becomes
/// t = 1, and the Bessel tail e^{-t} then controls the truncation.
inline CapacityResult avg_capacity_quadrature(CoopConfig const& cfg, double gamma_levy) {
    if (!(gamma_levy > 0.0)) {
        throw std::domain_error("avg_capacity_quadrature: requires gamma_levy > 0");
    }
    int const n = cfg.streams();
    double const v = cfg.bessel_order();
    // A = (gamma r_b^2)^{-2}; after substitution log2(1 + A t^2) multiplies t^v K_v(t)
    double const gr2 = gamma_levy * cfg.r_b * cfg.r_b;
    double const A = 1.0 / (gr2 * gr2);
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::log1p(A * t * t) * M_LOG2E * std::pow(t, v) * bessel_k_half_integer(n - 1, t);
    };
    // scale factor: 2 p / gamma^{v+1} = sqrt(2/pi) / ((N-1)! 2^{N-1})
    double const scale =
        std::sqrt(2.0 / M_PI) * std::exp(-lgamma_fn(n) - (n - 1) * M_LN2);
    try {
        QuadResult head = integrate(integrand, 0.0, 1.0, 1e-300, 1e-11, 4000);
        QuadResult tail = integrate_to_infinity(integrand, 1.0, 2.0, 1e-300, 1e-11, 1e-13, 60);
        CapacityResult out;
        out.value = scale * (head.value + tail.value);
        out.method = CapacityResult::Method::quadrature;
        out.error_estimate = scale * (head.error + tail.error);
        return out;
    } catch (ConvergenceError const& err) {
        std::ostringstream msg;
        msg << "avg_capacity_quadrature(n_b=" << cfg.n_b << ", n_t_c=" << cfg.n_t_c
            << ", gamma=" << gamma_levy << "): " << err.what();
        throw ConvergenceError(msg.str());
    }
}

/// Same capacity in closed form through the Meijer G kernel:
///   C = p/(2 ln 2) r_b^{2(v+1)} G^{4,1}_{2,4}(gamma^2 r_b^4 / 4 | ...).
inline CapacityResult avg_capacity_meijerg(CoopConfig const& cfg, double gamma_levy) {
    if (!(gamma_levy > 0.0)) {
        throw std::domain_error("avg_capacity_meijerg: requires gamma_levy > 0");
    }
    int const n = cfg.streams();
    double const v = cfg.bessel_order();
    double const gr2 = gamma_levy * cfg.r_b * cfg.r_b;
    double const big_x = 0.25 * gr2 * gr2;
    // p r_b^{2(v+1)} = sqrt(2/pi) (gamma r_b^2)^{v+1} / ((N-1)! 2^N), evaluated in logs
    double const log_pref =
        (v + 1.0) * std::log(gr2) + 0.5 * std::log(2.0 / M_PI) - lgamma_fn(n) - n * M_LN2;
    QuadResult const g = meijer_g_quad(MeijerGSpec::capacity_kernel(v), big_x);
    double const pref = std::exp(log_pref) / (2.0 * M_LN2);
    CapacityResult out;
    out.value = pref * g.value;
    out.method = CapacityResult::Method::meijerg;
    out.error_estimate = pref * g.error;
    return out;
}

/// Exact MIMO average capacity (sigma_r = 4): double quadrature of
///   C = sqrt(g^2/2pi) Int log2(1+r^-4 eta) Int e^{-g^2/2z} z^{-1/2}
///       f_d(eta z) dz deta
/// with the inner integral taken in t = g^2/(2z) to tame the z->0 structure.
inline CapacityResult mimo_avg_capacity(NetworkParams const& np, ShadowingParams const& sp,
                                        double r_b, std::function<double(double)> const& desired_pdf) {
    np.validate();
    if (np.sigma_r != 4.0) {
        throw std::domain_error("mimo_avg_capacity: closed Levy form needs sigma_r = 4");
    }
    if (!(r_b > 0.0)) throw std::domain_error("mimo_avg_capacity: r_b must be > 0");
    double const gamma = stable_scale(np, sp).gamma_levy;
    double const g2 = gamma * gamma;

    auto inner = [&](double eta) {
        auto f = [&](double t) {
            if (t <= 0.0) return 0.0;
            double const x = eta * g2 / (2.0 * t);
            double const fd = desired_pdf(x);
            return fd > 0.0 ? std::exp(-t) * std::pow(t, -1.5) * fd : 0.0;
        };
        QuadResult head = integrate(f, 0.0, 1.0, 1e-300, 1e-9, 2000);
        QuadResult tail = integrate_to_infinity(f, 1.0, 2.0, 1e-300, 1e-9, 1e-12, 40);
        return (gamma / std::sqrt(2.0)) * (head.value + tail.value);
    };

    double const r4 = std::pow(r_b, 4.0);
    auto outer = [&](double u) {
        if (u <= 0.0) return 0.0;
        double const eta = (u / gamma) * (u / gamma);
        return std::log1p(eta / r4) * M_LOG2E * inner(eta) * 2.0 * u / g2;
    };
    try {
        QuadResult head = integrate(outer, 0.0, 1.0, 1e-300, 1e-8, 2000);
        QuadResult tail = integrate_to_infinity(outer, 1.0, 2.0, 1e-300, 1e-8, 1e-11, 50);
        CapacityResult out;
        double const pref = std::sqrt(g2 / (2.0 * M_PI));
        out.value = pref * (head.value + tail.value);
        out.method = CapacityResult::Method::quadrature;
        out.error_estimate = pref * (head.error + tail.error) + 1e-7 * std::abs(out.value);
        return out;
    } catch (ConvergenceError const& err) {
        std::ostringstream msg;
        msg << "mimo_avg_capacity(r_b=" << r_b << "): " << err.what();
        throw ConvergenceError(msg.str());
    }
}

enum class CapacityAxis { coop_antennas, bs_density };

/// Sweep configuration shared by both capacity figure axes. The interfering
/// BSs' antenna count enters the Levy scale (Eq. 22b knob) and is distinct
/// from the cooperative n_t_c.
struct CapacitySweepConfig {
    double r_b = 500.0;
    int n_t_c = 2;                                     // cooperative antennas (bs_density axis)
    int interferer_n_t = 2;                            // interfering-BS antennas
    double lambda_bs = 1.0 / (M_PI * 500.0 * 500.0);   // density (coop_antennas axis)
};

/// One curve per cooperative-BS count in {1,2,3}; closed form with
/// quadrature fallback. Output order is the input order.
inline std::vector<CurveData> capacity_sweep(CapacityAxis axis, CapacitySweepConfig const& cfg,
                                             std::vector<double> const& grid) {
    if (grid.empty()) throw std::invalid_argument("capacity_sweep: empty grid");
    for (double g : grid) {
        if (axis == CapacityAxis::coop_antennas) {
            if (g < 1.0 || g > 4.0 || g != std::floor(g)) {
                throw std::domain_error("capacity_sweep: antenna grid must be integers in [1, 4]");
            }
        } else if (!(g >= 0.5e-6) || !(g <= 3.5e-6)) {
            throw std::domain_error(
                "capacity_sweep: density grid must lie in [0.5e-6, 3.5e-6] m^-2");
        }
    }
    std::vector<CurveData> out;
    for (int n_b = 1; n_b <= 3; ++n_b) {
        CurveData curve;
        curve.series = "CBS=" + std::to_string(n_b);
        curve.x = grid;
        curve.y.assign(grid.size(), 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            int const n_t_c = axis == CapacityAxis::coop_antennas ? static_cast<int>(grid[i])
                                                                  : cfg.n_t_c;
            double const lambda =
                axis == CapacityAxis::bs_density ? grid[i] : cfg.lambda_bs;
            CoopConfig const coop(n_b, n_t_c, cfg.r_b);
            double const gamma = levy_gamma_miso(lambda, cfg.interferer_n_t);
            try {
                curve.y[i] = avg_capacity_meijerg(coop, gamma).value;
            } catch (ConvergenceError const&) {
                curve.y[i] = avg_capacity_quadrature(coop, gamma).value;
            }
        }
        // capacity must grow with antennas and shrink with interferer density
        for (std::size_t i = 1; i < grid.size(); ++i) {
            bool const ok = axis == CapacityAxis::coop_antennas
                                ? curve.y[i] >= curve.y[i - 1] * (1.0 - 1e-12)
                                : curve.y[i] <= curve.y[i - 1] * (1.0 + 1e-12);
            if (!ok) {
                std::ostringstream msg;
                msg << "capacity_sweep: monotonicity violated on " << curve.series << " at index "
                    << i;
                throw std::logic_error(msg.str());
            }
        }
        out.push_back(std::move(curve));
    }
    return out;
}

}  // namespace cellcap
