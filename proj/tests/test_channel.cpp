// SPDX-License-Identifier: Apache-2.0
#include "cellcap/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cellcap/montecarlo.hpp"
#include "cellcap/quadrature.hpp"

using namespace cellcap;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// CDF of the Generalized-K law by cumulative quadrature over log-spaced
// knots, linearly interpolated. Test-side oracle for the KS checks.
class GkCdf {
  public:
    GkCdf(NetworkParams const& np, ShadowingParams const& sp) {
        double const mean = np.n_t * np.n_r * sp.omega * np.p_ant;
        int const knots = 600;
        double const lo = mean * 1e-10;
        double const hi = mean * 1e3;
        double const step = std::log(hi / lo) / (knots - 1);
        y_.resize(knots);
        f_.resize(knots);
        for (int i = 0; i < knots; ++i) y_[i] = lo * std::exp(step * i);
        auto pdf = [&](double y) { return y > 0.0 ? generalized_k_pdf(y, np, sp) : 0.0; };
        double acc = integrate(pdf, 0.0, y_[0], 1e-14, 1e-8, 4000).value;
        f_[0] = acc;
        for (int i = 1; i < knots; ++i) {
            acc += integrate(pdf, y_[i - 1], y_[i], 1e-14, 1e-8, 4000).value;
            f_[i] = acc;
        }
    }

    double operator()(double y) const {
        if (y <= y_.front()) return 0.0;
        if (y >= y_.back()) return 1.0;
        auto it = std::upper_bound(y_.begin(), y_.end(), y);
        std::size_t const i = static_cast<std::size_t>(it - y_.begin());
        double const t = (std::log(y) - std::log(y_[i - 1])) /
                         (std::log(y_[i]) - std::log(y_[i - 1]));
        return f_[i - 1] + t * (f_[i] - f_[i - 1]);
    }

    double total() const { return f_.back(); }

  private:
    std::vector<double> y_;
    std::vector<double> f_;
};

TEST(ShadowingParams, ConstructionIdentities) {
    auto const sp = shadowing_from_sigma_db(6.0, 1.0);
    double const scaled = 6.0 / 8.686;
    EXPECT_EQ(sp.lambda_sh, 1.0 / (std::exp(scaled * scaled) - 1.0));
    EXPECT_EQ(sp.omega, std::sqrt((sp.lambda_sh + 1.0) / sp.lambda_sh));
    // reference digits from 40-digit arithmetic
    EXPECT_LT(rel_err(sp.lambda_sh, 1.6353519280070499524), 1e-15);
    EXPECT_LT(rel_err(sp.omega, 1.2694444352590409156), 1e-15);
    auto const sp7 = shadowing_from_sigma_db(7.0, 1.0);
    EXPECT_LT(rel_err(sp7.lambda_sh, 1.0934719138304585353), 1e-15);
}

TEST(ShadowingParams, OmegaLinearInPower) {
    auto const one = shadowing_from_sigma_db(6.0, 1.0);
    auto const two = shadowing_from_sigma_db(6.0, 2.0);
    EXPECT_DOUBLE_EQ(two.omega, 2.0 * one.omega);
    EXPECT_DOUBLE_EQ(two.lambda_sh, one.lambda_sh);
}

TEST(ShadowingParams, DomainErrors) {
    EXPECT_THROW(shadowing_from_sigma_db(0.0, 1.0), std::domain_error);
    EXPECT_THROW(shadowing_from_sigma_db(-1.0, 1.0), std::domain_error);
    EXPECT_THROW(shadowing_from_sigma_db(20.5, 1.0), std::domain_error);
    EXPECT_THROW(shadowing_from_sigma_db(6.0, 0.0), std::domain_error);
}

TEST(ShadowingParams, ShapeDecreasesWithSpread) {
    double prev = shadowing_from_sigma_db(0.5, 1.0).lambda_sh;
    for (double s = 1.0; s <= 20.0; s += 0.5) {
        double const cur = shadowing_from_sigma_db(s, 1.0).lambda_sh;
        EXPECT_LT(cur, prev) << "sigma_dB = " << s;
        prev = cur;
    }
}

TEST(GammaShadowPdf, FrozenValueAndLimits) {
    auto const sp = shadowing_from_sigma_db(6.0, 1.0);
    // reference digits from 40-digit arithmetic
    EXPECT_LT(rel_err(gamma_shadow_pdf(1.0, sp), 0.46466525256333373053), 1e-13);
    EXPECT_LT(gamma_shadow_pdf(1e-12, sp), 1e-6);  // x^{lambda-1} with lambda > 1
    EXPECT_THROW(gamma_shadow_pdf(0.0, sp), std::domain_error);
    EXPECT_THROW(gamma_shadow_pdf(-1.0, sp), std::domain_error);
}

TEST(GammaShadowPdf, NormalizationAndMean) {
    auto const sp = shadowing_from_sigma_db(6.0, 1.0);
    auto pdf = [&](double x) { return x > 0.0 ? gamma_shadow_pdf(x, sp) : 0.0; };
    double const mass = integrate(pdf, 0.0, 1.0).value +
                        integrate_to_infinity(pdf, 1.0, 2.0).value;
    EXPECT_NEAR(mass, 1.0, 1e-9);
    auto xpdf = [&](double x) { return x > 0.0 ? x * gamma_shadow_pdf(x, sp) : 0.0; };
    double const mean = integrate(xpdf, 0.0, 1.0).value +
                        integrate_to_infinity(xpdf, 1.0, 2.0).value;
    EXPECT_LT(rel_err(mean, sp.omega), 1e-9);
}

TEST(GeneralizedKPdf, NormalizationAndMean) {
    for (double sdb : {4.0, 6.0, 9.0}) {
        auto const sp = shadowing_from_sigma_db(sdb, 1.0);
        NetworkParams const np;
        auto pdf = [&](double y) { return y > 0.0 ? generalized_k_pdf(y, np, sp) : 0.0; };
        double const mass =
            integrate(pdf, 0.0, 1.0).value + integrate_to_infinity(pdf, 1.0, 2.0).value;
        EXPECT_NEAR(mass, 1.0, 1e-6) << "sigma_dB = " << sdb;
        auto ypdf = [&](double y) { return y > 0.0 ? y * generalized_k_pdf(y, np, sp) : 0.0; };
        double const mean =
            integrate(ypdf, 0.0, 1.0).value + integrate_to_infinity(ypdf, 1.0, 2.0).value;
        EXPECT_LT(rel_err(mean, np.n_t * np.n_r * sp.omega), 1e-6) << "sigma_dB = " << sdb;
    }
}

TEST(GeneralizedKPdf, MonteCarloMean) {
    auto const sp = shadowing_from_sigma_db(6.0, 1.0);
    NetworkParams const np;
    RngEngine rng = make_stream(2024, 0);
    std::size_t const n = 1000000;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sample_interferer_power(np, sp, rng);
    EXPECT_LT(rel_err(acc / n, np.n_t * np.n_r * sp.omega), 0.005);
}

TEST(GeneralizedKPdf, MatchesKernelDensityOfProductSamples) {
    auto const sp = shadowing_from_sigma_db(6.0, 1.0);
    NetworkParams const np;
    std::size_t const n = 400000;
    std::vector<double> samples(n);
    RngEngine rng = make_stream(515, 0);
    for (auto& s : samples) s = sample_interferer_power(np, sp, rng);
    double const h = 0.35;  // undersmoothed: bias far below the 2% gate
    double peak = 0.0;
    std::vector<double> grid, kde;
    // start past the steep y^{lambda-1} rise, where kernel smoothing is unbiased
    for (double y = 2.5; y <= 30.0; y += 0.75) grid.push_back(y);
    for (double y : grid) {
        double acc = 0.0;
        for (double s : samples) {
            double const t = (y - s) / h;
            if (std::abs(t) < 8.0) acc += std::exp(-0.5 * t * t);
        }
        kde.push_back(acc / (n * h * std::sqrt(2.0 * M_PI)));
        peak = std::max(peak, generalized_k_pdf(y, np, sp));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(kde[i], generalized_k_pdf(grid[i], np, sp), 0.02 * peak)
            << "y = " << grid[i];
    }
}

TEST(SampleNakagamiPower, Moments) {
    RngEngine rng = make_stream(99, 0);
    std::size_t const n = 1000000;
    auto moments = [&](double m) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double const g = sample_nakagami_power(m, rng);
            sum += g;
            sumsq += g * g;
        }
        double const mean = sum / n;
        return std::pair{mean, sumsq / n - mean * mean};
    };
    auto const [m1, v1] = moments(1.0);
    EXPECT_NEAR(m1, 1.0, 0.005);
    EXPECT_NEAR(v1, 1.0, 0.02);
    auto const [m2, v2] = moments(2.0);
    EXPECT_NEAR(m2, 1.0, 0.005);
    EXPECT_NEAR(v2, 0.5, 0.02 * 0.5 / 1.0 + 0.01);  // 1/m with sampling slack
    EXPECT_THROW(sample_nakagami_power(0.0, rng), std::domain_error);
}

TEST(SampleInterfererPower, KsAgainstGeneralizedKOnGrid) {
    std::size_t const n = 100000;
    std::uint64_t stream = 0;
    for (double m : {1.0, 2.0}) {
        for (double sdb : {4.0, 6.0, 9.0}) {
            for (int n_t : {1, 2, 4}) {
                for (int n_r : {1, 2}) {
                    NetworkParams np;
                    np.m = m;
                    np.n_t = n_t;
                    np.n_r = n_r;
                    auto const sp = shadowing_from_sigma_db(sdb, 1.0);
                    GkCdf const cdf(np, sp);
                    ASSERT_NEAR(cdf.total(), 1.0, 1e-5);
                    std::vector<double> samples(n);
                    RngEngine rng = make_stream(777, stream++);
                    for (auto& s : samples) s = sample_interferer_power(np, sp, rng);
                    SimConfig tag{np, sp, 1.0, 0.0, n, 777};
                    auto const emp = EmpiricalDistribution::from_samples(std::move(samples), tag);
                    double const d = ks_distance(emp, [&](double y) { return cdf(y); });
                    EXPECT_LT(d, 0.01) << "m=" << m << " sdb=" << sdb << " nt=" << n_t
                                       << " nr=" << n_r;
                }
            }
        }
    }
}

TEST(SampleInterfererPower, RejectsDegenerateShadowing) {
    // sigma_dB -> 0 would push the shadow shape to infinity; the precondition
    // stops it at construction
    EXPECT_THROW(shadowing_from_sigma_db(0.0, 1.0), std::domain_error);
}

}  // namespace
