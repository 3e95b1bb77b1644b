// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cellcap/errors.hpp"
#include "cellcap/quadrature.hpp"

namespace cellcap {

namespace specdetail {

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficients).
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

template <typename T>
T lanczos_sum(T const& z) {
    T acc(kLanczos[0]);
    for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z + static_cast<double>(k - 1));
    return acc;
}

}  // namespace specdetail

/// ln Gamma(x) for x > 0.
inline double lgamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("lgamma_fn: requires x > 0");
    double const t = x + specdetail::kLanczosG - 0.5;
    return specdetail::kHalfLog2Pi + (x - 0.5) * std::log(t) - t +
           std::log(specdetail::lanczos_sum(x));
}

/// Gamma(x) for x > 0. Signals overflow explicitly instead of returning inf.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    double lg = lgamma_fn(x);
    if (lg > 709.0) throw std::overflow_error("gamma_fn: result exceeds double range");
    double const t = x + specdetail::kLanczosG - 0.5;
    return std::exp(specdetail::kHalfLog2Pi + (x - 0.5) * std::log(t) - t) *
           specdetail::lanczos_sum(x);
}

/// ln Gamma(z) for Re(z) >= 0.5 (all Mellin-Barnes contours used here keep
/// their Gamma arguments in that half-plane, so no reflection is needed).
inline std::complex<double> lngamma_complex(std::complex<double> z) {
    std::complex<double> const t = z + (specdetail::kLanczosG - 0.5);
    return specdetail::kHalfLog2Pi + (z - 0.5) * std::log(t) - t +
           std::log(specdetail::lanczos_sum(z));
}

/// K_{n+1/2}(x) by the terminating half-integer closed form
///   sqrt(pi/(2x)) e^{-x} sum_{k=0}^{n} (n+k)! / (k! (n-k)! (2x)^k).
inline double bessel_k_half_integer(int n, double x) {
    if (n < 0) throw std::domain_error("bessel_k_half_integer: order index must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("bessel_k_half_integer: requires x > 0");
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < n; ++k) {
        // term_{k+1}/term_k = (n+k+1)(n-k) / ((k+1) * 2x)
        term *= static_cast<double>(n + k + 1) * static_cast<double>(n - k) /
                (static_cast<double>(k + 1) * 2.0 * x);
        sum += term;
    }
    return std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) * sum;
}

namespace specdetail {

// Odd Taylor coefficients of 1/Gamma(1+u) (Abramowitz & Stegun 6.1.34),
// for Temme's Gamma1(u) = [1/Gamma(1-u) - 1/Gamma(1+u)] / (2u).
inline constexpr double kInvGammaOdd[12] = {
    0.5772156649015329,   -0.0420026350340952,  -0.0421977345555443,
    0.0072189432466630,   -0.0002152416741149,  -0.0000201348547807,
    0.0000011330272320,   0.0000000061160950,   -0.0000000011812746,
    0.0000000000077823,   0.0000000000005100,   -0.0000000000000054};

inline void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    double const mu2 = mu * mu;
    double acc = 0.0;
    double pw = 1.0;
    for (double c : kInvGammaOdd) {
        acc += c * pw;
        pw *= mu2;
    }
    gam1 = -acc;
    gampl = 1.0 / gamma_fn(1.0 + mu);
    gammi = 1.0 / gamma_fn(1.0 - mu);
    gam2 = 0.5 * (gammi + gampl);
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x <= 2, by Temme's series
// (N.M. Temme, J. Comput. Phys. 19, 1975).
inline void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
    constexpr int kMaxIter = 600;
    double const eps = std::numeric_limits<double>::epsilon();
    double const x2 = 0.5 * x;
    double const pimu = M_PI * mu;
    double const fact = std::abs(pimu) < 1e-30 ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    double const fact2 = std::abs(e) < 1e-30 ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        double const del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * eps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: Temme series stalled");
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// Same pair for x > 2 by Steed's continued fraction CF2
// (Thompson & Barnett, Comput. Phys. Commun. 47, 1987).
inline void bessel_k_cf2(double mu, double x, double& kmu, double& kmu1) {
    constexpr int kMaxIter = 40000;
    double const eps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double const a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        double const qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double const dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: CF2 stalled");
    h = a1 * h;
    kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace specdetail

/// Modified Bessel function of the second kind, real order v, x > 0.
/// Symmetric in v; half-integer orders take the closed form.
inline double bessel_k(double v, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: requires x > 0");
    v = std::abs(v);  // K_v = K_{-v}
    double const half_index = v - 0.5;
    double const nearest = std::round(half_index);
    if (nearest >= 0.0 && std::abs(half_index - nearest) < 1e-12) {
        return bessel_k_half_integer(static_cast<int>(nearest), x);
    }
    int const nl = static_cast<int>(v + 0.5);
    double const mu = v - nl;  // |mu| <= 1/2
    double kmu, kmu1;
    if (x <= 2.0) {
        specdetail::bessel_k_temme(mu, x, kmu, kmu1);
    } else {
        specdetail::bessel_k_cf2(mu, x, kmu, kmu1);
    }
    for (int i = 1; i <= nl; ++i) {
        double const knext = 2.0 * (mu + i) / x * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;
}

/// Parameter block of a Meijer G-function G^{m,n}_{p,q}(x | a ; b).
/// Only the three instances needed by the capacity formulas are accepted:
///   G^{1,2}_{2,2}(x | 1,1 ; 1,0)                      (= ln(1+x))
///   G^{2,0}_{0,2}(x | - ; v/2, -v/2)                  (= 2 K_v(2 sqrt x))
///   G^{4,1}_{2,4}(x | -(v+1)/2, (1-v)/2 ;
///                      -v/2, v/2, -(v+1)/2, -(v+1)/2) (capacity kernel)
struct MeijerGSpec {
    enum class Kind { log_one_plus, bessel_pair, capacity_kernel };

    int m, n, p, q;
    std::vector<double> a;
    std::vector<double> b;
    Kind kind;

    MeijerGSpec(int m_, int n_, int p_, int q_, std::vector<double> a_, std::vector<double> b_)
        : m(m_), n(n_), p(p_), q(q_), a(std::move(a_)), b(std::move(b_)), kind(classify()) {}

    static MeijerGSpec log_one_plus() { return MeijerGSpec(1, 2, 2, 2, {1.0, 1.0}, {1.0, 0.0}); }

    static MeijerGSpec bessel_pair(double v) {
        v = std::abs(v);
        return MeijerGSpec(2, 0, 0, 2, {}, {v / 2.0, -v / 2.0});
    }

    static MeijerGSpec capacity_kernel(double v) {
        return MeijerGSpec(4, 1, 2, 4, {-(v + 1) / 2.0, (1.0 - v) / 2.0},
                           {-v / 2.0, v / 2.0, -(v + 1) / 2.0, -(v + 1) / 2.0});
    }

  private:
    static bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(y)); }

    Kind classify() const {
        if (m < 0 || n < 0 || m > q || n > p) {
            throw UnsupportedInstanceError("MeijerGSpec: requires 0 <= m <= q and 0 <= n <= p");
        }
        if (a.size() != static_cast<std::size_t>(p) || b.size() != static_cast<std::size_t>(q)) {
            throw UnsupportedInstanceError("MeijerGSpec: parameter list lengths must match p and q");
        }
        if (m == 1 && n == 2 && p == 2 && q == 2 && near(a[0], 1) && near(a[1], 1) &&
            near(b[0], 1) && near(b[1], 0)) {
            return Kind::log_one_plus;
        }
        if (m == 2 && n == 0 && p == 0 && q == 2 && b[0] >= 0.0 && near(b[1], -b[0])) {
            return Kind::bessel_pair;
        }
        if (m == 4 && n == 1 && p == 2 && q == 4) {
            double const v = 2.0 * b[1];
            if (v > 0.0 && near(b[0], -v / 2) && near(b[2], -(v + 1) / 2) &&
                near(b[3], -(v + 1) / 2) && near(a[0], -(v + 1) / 2) && near(a[1], (1 - v) / 2)) {
                return Kind::capacity_kernel;
            }
        }
        throw UnsupportedInstanceError(
            "MeijerGSpec: only the ln(1+x), Bessel-K and capacity instances are supported");
    }
};

/// Meijer G-function of a supported spec at x > 0, evaluated by numerical
/// Mellin-Barnes integration over the vertical contour Re(s) = sigma, with
/// sigma placed between the poles of the Gamma(b_j - s) and Gamma(1 - a_j + s)
/// factors. Truncation/refinement is adaptive with a hard budget.
/// Returns the value together with the quadrature error estimate.
inline QuadResult meijer_g_quad(MeijerGSpec const& spec, double x) {
    if (!(x > 0.0)) throw std::domain_error("meijer_g: requires x > 0");
    double hi = std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.m; ++j) hi = std::min(hi, spec.b[j]);
    double sigma;
    if (spec.n > 0) {
        double lo = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < spec.n; ++j) lo = std::max(lo, spec.a[j] - 1.0);
        sigma = 0.5 * (lo + hi);
    } else {
        sigma = hi - 0.5;
    }

    double const logx = std::log(x);
    auto integrand = [&](double t) {
        std::complex<double> const s(sigma, t);
        std::complex<double> acc = s * logx;
        for (int j = 0; j < spec.m; ++j) acc += lngamma_complex(spec.b[j] - s);
        for (int j = 0; j < spec.n; ++j) acc += lngamma_complex(1.0 - spec.a[j] + s);
        for (int j = spec.m; j < spec.q; ++j) acc -= lngamma_complex(1.0 - spec.b[j] + s);
        for (int j = spec.n; j < spec.p; ++j) acc -= lngamma_complex(spec.a[j] - s);
        return std::exp(acc).real();
    };

    // magnitude probe sets the absolute floor for the adaptive refinement
    double const probe =
        std::abs(integrand(0.0)) + std::abs(integrand(0.5)) + std::abs(integrand(1.5));
    double const abs_tol = std::max(probe, 1e-300) * 1e-15;
    try {
        QuadResult r = integrate_to_infinity(integrand, 0.0, 2.0, abs_tol, 1e-13, 1e-15, 48);
        r.value /= M_PI;
        r.error /= M_PI;
        return r;
    } catch (ConvergenceError const& err) {
        std::ostringstream msg;
        msg << "meijer_g(m=" << spec.m << ",n=" << spec.n << ",p=" << spec.p << ",q=" << spec.q
            << ") at x=" << x << ", contour Re(s)=" << sigma << ": " << err.what();
        throw ConvergenceError(msg.str());
    }
}

inline double meijer_g(MeijerGSpec const& spec, double x) { return meijer_g_quad(spec, x).value; }

}  // namespace cellcap
