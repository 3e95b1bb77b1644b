// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "cellcap/channel.hpp"
#include "cellcap/curve.hpp"
#include "cellcap/errors.hpp"
#include "cellcap/parallel.hpp"
#include "cellcap/quadrature.hpp"
#include "cellcap/specfun.hpp"

namespace cellcap {

/// Aggregate-interference law: one-sided alpha-stable with characteristic
/// exponent alpha = 2/sigma_r, scale c, and transform parameter
/// gamma_levy = c^alpha (the Levy scale when alpha = 1/2).
struct StableParams {
    double alpha;
    double c;
    double gamma_levy;
};

/// q(alpha) = pi Gamma(2-alpha) cos(pi alpha/2) / (1-alpha) for alpha != 1,
/// pi^2/2 at alpha = 1.
inline double q_factor(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw std::domain_error("q_factor: alpha must be in (0, 1]");
    }
    if (alpha == 1.0) return M_PI * M_PI / 2.0;
    return M_PI * gamma_fn(2.0 - alpha) * std::cos(M_PI * alpha / 2.0) / (1.0 - alpha);
}

/// Stable-law parameters of the aggregate interference over the Poisson
/// field:  gamma = lambda_BS q (m l/O)^{-alpha} G(l+alpha) G(k+alpha) /
/// (G(k) G(l)) with k = N_t N_r m, and c = gamma^{1/alpha}.
inline StableParams stable_scale(NetworkParams const& np, ShadowingParams const& sp) {
    np.validate();
    double const alpha = np.alpha();
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::domain_error("stable_scale: needs alpha = 2/sigma_r in (0, 1)");
    }
    double const k = np.diversity_order();
    double const l = sp.lambda_sh;
    double const frac_moment = std::pow(np.m * l / sp.omega, -alpha) *
                               std::exp(lgamma_fn(l + alpha) + lgamma_fn(k + alpha) -
                                        lgamma_fn(k) - lgamma_fn(l));
    double const gamma =
        np.lambda_bs * q_factor(alpha) * std::pow(np.p_ant, alpha) * frac_moment;
    return StableParams{alpha, std::pow(gamma, 1.0 / alpha), gamma};
}

/// Characteristic function  Phi(w) = exp(-|cw|^a [1 - j sign(w) tan(pi a/2)]).
inline std::complex<double> stable_cf(double w, StableParams const& stp) {
    if (w == 0.0) return {1.0, 0.0};
    double const mag = std::pow(std::abs(stp.c * w), stp.alpha);
    double const sign = w > 0.0 ? 1.0 : -1.0;
    double const phase = mag * sign * std::tan(M_PI * stp.alpha / 2.0);
    return std::exp(-mag) * std::complex<double>(std::cos(phase), std::sin(phase));
}

/// Levy density  f(y) = sqrt(g^2/(2 pi)) e^{-g^2/(2y)} / y^{3/2}.
inline double levy_pdf(double y, double gamma_levy) {
    if (!(y > 0.0)) throw std::domain_error("levy_pdf: requires y > 0");
    if (!(gamma_levy > 0.0)) throw std::domain_error("levy_pdf: requires gamma_levy > 0");
    return gamma_levy / std::sqrt(2.0 * M_PI) * std::exp(-gamma_levy * gamma_levy / (2.0 * y)) /
           (y * std::sqrt(y));
}

/// Levy distribution function  F(y) = erfc(g / sqrt(2y)).
inline double levy_cdf(double y, double gamma_levy) {
    if (y <= 0.0) return 0.0;
    return std::erfc(gamma_levy / std::sqrt(2.0 * y));
}

/// Levy quantile: the y with levy_cdf(y) = q. Bisection on t = g/sqrt(2y).
inline double levy_quantile(double q, double gamma_levy) {
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("levy_quantile: q must be in (0, 1)");
    if (!(gamma_levy > 0.0)) throw std::domain_error("levy_quantile: gamma_levy must be > 0");
    double lo = 0.0, hi = 30.0;  // erfc is 2..~1e-393 on [0, 30]
    for (int i = 0; i < 200; ++i) {
        double const mid = 0.5 * (lo + hi);
        (std::erfc(mid) > q ? lo : hi) = mid;
    }
    double const t = 0.5 * (lo + hi);
    return gamma_levy * gamma_levy / (2.0 * t * t);
}

/// Levy scale of the MISO interference field (no shadowing, chi-squared
/// sub-streams):  gamma = 2 Gamma(3/2) pi lambda_BS Gamma(N_t + 1/2)/(N_t-1)!.
inline double levy_gamma_miso(double lambda_bs, int n_t) {
    if (!(lambda_bs > 0.0)) throw std::domain_error("levy_gamma_miso: lambda_bs must be > 0");
    if (n_t < 1) throw std::domain_error("levy_gamma_miso: n_t must be >= 1");
    return 2.0 * gamma_fn(1.5) * M_PI * lambda_bs *
           std::exp(lgamma_fn(n_t + 0.5) - lgamma_fn(n_t));
}

namespace stabledetail {

// limit of an alternating series by iterated averaging of partial sums
// (van Wijngaarden). terms must alternate in sign and vary smoothly.
inline double averaged_limit(std::vector<double> const& terms) {
    std::vector<double> a(terms.size());
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        s += terms[i];
        a[i] = s;
    }
    for (std::size_t k = 1; k < a.size(); ++k) {
        for (std::size_t i = 0; i + k < a.size(); ++i) a[i] = 0.5 * (a[i] + a[i + 1]);
    }
    return a.empty() ? 0.0 : a[0];
}

/// Standardized (c = 1) one-sided stable density by inversion of the
/// characteristic function:
///   f(u) = (1/pi) Int_0^inf exp(-w^a) cos(w^a tan(pi a/2) - w u) dw.
/// The integral is split at the zeros of the oscillating phase (pi steps).
/// Lobes on the rising phase branch are summed directly; the alternating
/// falling-branch lobes go through series acceleration, which keeps the
/// cost bounded when the oscillation is fast (large u). Budget overrun is
/// an explicit error.
inline double standardized_pdf(double u, double alpha) {
    double const tanphi = std::tan(M_PI * alpha / 2.0);
    auto phase = [&](double w) { return std::pow(w, alpha) * tanphi - w * u; };
    // phase peaks at w_star, damping is dead past w_cut
    double const w_star = std::pow(alpha * tanphi / u, 1.0 / (1.0 - alpha));
    double const w_cut = std::pow(39.0, 1.0 / alpha);  // exp(-39) ~ 1e-17

    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        double const wa = std::pow(w, alpha);
        return std::exp(-wa) * std::cos(wa * tanphi - w * u);
    };

    // solve phase(w) = target on a monotone branch by bisection
    auto solve_phase = [&](double lo, double hi, double target) {
        double flo = phase(lo) - target;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = phase(mid) - target;
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if (hi - lo <= 1e-12 * (1.0 + hi)) break;
        }
        return 0.5 * (lo + hi);
    };

    auto lobe_between = [&](double lo, double hi) {
        return integrate(integrand, lo, hi, 1e-15, 1e-9, 600).value;
    };

    double total = 0.0;
    double w_prev = 0.0;

    // rising branch: bounded lobe count (total phase rise <= 39 tanphi)
    double const crest = std::min(w_star, w_cut);
    while (w_prev < crest) {
        double const target = phase(w_prev) + M_PI;
        double const w_next = phase(crest) < target ? crest : solve_phase(w_prev, crest, target);
        total += lobe_between(w_prev, w_next);
        w_prev = w_next <= w_prev ? crest : w_next;
    }

    // falling branch: alternating lobes, accelerated
    constexpr std::size_t kMaxFallingLobes = 1600;
    std::vector<double> fall;
    double scale = std::abs(total);
    double acc_prev = std::numeric_limits<double>::infinity();
    bool committed = false;
    std::size_t negligible_run = 0;
    while (w_prev < w_cut) {
        if (fall.size() >= kMaxFallingLobes) {
            std::ostringstream msg;
            msg << "stable_pdf_numeric: lobe budget exhausted (alpha=" << alpha << ", u=" << u
                << ", w=" << w_prev << ", falling lobes=" << fall.size() << ")";
            throw ConvergenceError(msg.str());
        }
        double const target = phase(w_prev) - M_PI;
        double hi = w_prev + 1.5 * M_PI / u + 1e-300;
        while (phase(hi) > target && hi < w_cut * 2.0) hi = hi * 1.5 + 1.0;
        double w_next = phase(hi) > target ? hi : solve_phase(w_prev, hi, target);
        if (w_next > w_cut) w_next = w_cut;
        if (w_next <= w_prev) w_next = std::min(w_prev + M_PI / u, w_cut);
        double const lobe = lobe_between(w_prev, w_next);
        fall.push_back(lobe);
        scale = std::max(scale, std::abs(lobe));
        w_prev = w_next;
        negligible_run = std::abs(lobe) <= 1e-16 * scale + 1e-300 ? negligible_run + 1 : 0;
        if (negligible_run >= 3) break;  // damping has run out; plain sum is exact
        if (fall.size() >= 16 && fall.size() % 8 == 0) {
            double const acc = averaged_limit(fall);
            // the accelerated limit bottoms out at the per-lobe quadrature
            // noise, which is absolute; don't wait for more than that
            if (std::abs(acc - acc_prev) <= 3e-9 * std::abs(total + acc) + 3e-14) {
                total += acc;
                committed = true;
                break;
            }
            acc_prev = acc;
        }
    }
    if (!committed) {
        for (double lobe : fall) total += lobe;
    }
    // inversion noise can leave a negative residue where the true density
    // underflows; the density itself is >= 0
    return std::max(total / M_PI, 0.0);
}

}  // namespace stabledetail

/// Density of the aggregate interference by numerical inversion of the
/// stable characteristic function (convention: f(y) = (1/2pi) Int Phi(w)
/// e^{-jwy} dw, locked by exact agreement with levy_pdf at alpha = 1/2).
inline double stable_pdf_numeric(double y, StableParams const& stp) {
    if (!(y > 0.0)) throw std::domain_error("stable_pdf_numeric: requires y > 0");
    if (!(stp.alpha > 0.0) || !(stp.alpha < 1.0)) {
        throw std::domain_error("stable_pdf_numeric: alpha must be in (0, 1)");
    }
    if (!(stp.c > 0.0)) throw std::domain_error("stable_pdf_numeric: scale c must be > 0");
    return stabledetail::standardized_pdf(y / stp.c, stp.alpha) / stp.c;
}

/// Parameter axis of a PDF sweep.
enum class SweepParam { sigma_db, lambda_bs, sigma_r, n_t, n_r, m };

inline char const* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::sigma_db: return "sigma_db";
        case SweepParam::lambda_bs: return "lambda_bs";
        case SweepParam::sigma_r: return "sigma_r";
        case SweepParam::n_t: return "n_t";
        case SweepParam::n_r: return "n_r";
        case SweepParam::m: return "m";
    }
    return "?";
}

/// One PDF curve per parameter value, evaluated over y_grid. sigma_r = 4
/// takes the Levy closed form; any other exponent goes through the numeric
/// inversion. Evaluation errors are rethrown with the offending value.
inline std::vector<CurveData> pdf_sweep(NetworkParams const& base_np,
                                        ShadowingParams const& base_sp, SweepParam vary,
                                        std::vector<double> const& values,
                                        std::vector<double> const& y_grid) {
    if (values.empty() || y_grid.empty()) {
        throw std::invalid_argument("pdf_sweep: values and y_grid must be non-empty");
    }
    for (double y : y_grid) {
        if (!(y > 0.0)) throw std::domain_error("pdf_sweep: y_grid must be positive");
    }
    std::vector<CurveData> out(values.size());
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        double const value = values[vi];
        NetworkParams np = base_np;
        ShadowingParams sp = base_sp;
        switch (vary) {
            case SweepParam::sigma_db: sp = shadowing_from_sigma_db(value, base_sp.p_r); break;
            case SweepParam::lambda_bs: np.lambda_bs = value; break;
            case SweepParam::sigma_r: np.sigma_r = value; break;
            case SweepParam::n_t: np.n_t = static_cast<int>(value); break;
            case SweepParam::n_r: np.n_r = static_cast<int>(value); break;
            case SweepParam::m: np.m = value; break;
        }
        CurveData curve;
        std::ostringstream label;
        label << to_string(vary) << '=' << value;
        curve.series = label.str();
        curve.x = y_grid;
        curve.y.assign(y_grid.size(), 0.0);
        auto tag = [&](char const* what) {
            std::ostringstream msg;
            msg << "pdf_sweep failed at " << to_string(vary) << "=" << value << ": " << what;
            return msg.str();
        };
        try {
            StableParams const stp = stable_scale(np, sp);
            bool const is_levy = np.sigma_r == 4.0;
            parallel_for(y_grid.size(), [&](std::size_t i) {
                curve.y[i] = is_levy ? levy_pdf(y_grid[i], stp.gamma_levy)
                                     : stable_pdf_numeric(y_grid[i], stp);
            });
        } catch (ConvergenceError const& err) {
            throw ConvergenceError(tag(err.what()));
        } catch (std::domain_error const& err) {
            throw std::domain_error(tag(err.what()));
        }
        out[vi] = std::move(curve);
    }
    return out;
}

}  // namespace cellcap
