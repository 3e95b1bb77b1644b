// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "cellcap/errors.hpp"

namespace cellcap {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;      // absolute error estimate
    std::size_t evals = 0;   // integrand evaluations
};

namespace quaddetail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae/weights).
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

template <typename F>
inline void gauss_kronrod_15(F&& f, double a, double b, double& value, double& error) {
    double const h = 0.5 * (b - a);
    double const mid = 0.5 * (a + b);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - h * kXgk[i]);
        fv[14 - i] = f(mid + h * kXgk[i]);
    }
    fv[7] = f(mid);
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = kronrod * h;
    // QUADPACK-style rescaled difference; cheap and conservative enough here
    double diff = std::abs(kronrod - gauss) * std::abs(h);
    error = diff;
    if (diff > 0.0) {
        double scale = std::pow(200.0 * diff / (std::abs(value) + diff), 1.5);
        if (scale < 1.0) error = (std::abs(value) + diff) * scale / 200.0 + diff * 1e-14;
    }
}

struct Interval {
    double a, b, value, error;
    bool operator<(Interval const& o) const { return error < o.error; }
};

}  // namespace quaddetail

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
/// Splits the worst interval until abs_tol or rel_tol is met; exceeding
/// max_intervals raises ConvergenceError (never a silent best-effort value).
template <typename F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, std::size_t max_intervals = 2000) {
    QuadResult out;
    if (a == b) return out;
    std::vector<quaddetail::Interval> heap;
    quaddetail::Interval first{a, b, 0.0, 0.0};
    quaddetail::gauss_kronrod_15(f, a, b, first.value, first.error);
    out.evals = 15;
    heap.push_back(first);
    double total = first.value;
    double err = first.error;
    while (err > abs_tol && err > rel_tol * std::abs(total)) {
        if (heap.size() >= max_intervals) {
            std::ostringstream msg;
            msg << "adaptive quadrature stalled: " << heap.size() << " intervals on ["
                << a << ", " << b << "], |I|=" << std::abs(total) << ", err=" << err;
            throw ConvergenceError(msg.str());
        }
        std::pop_heap(heap.begin(), heap.end());
        quaddetail::Interval worst = heap.back();
        heap.pop_back();
        double mid = 0.5 * (worst.a + worst.b);
        quaddetail::Interval left{worst.a, mid, 0.0, 0.0};
        quaddetail::Interval right{mid, worst.b, 0.0, 0.0};
        quaddetail::gauss_kronrod_15(f, left.a, left.b, left.value, left.error);
        quaddetail::gauss_kronrod_15(f, right.a, right.b, right.value, right.error);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        if (mid == worst.a || mid == worst.b) break;  // interval at double resolution
    }
    out.value = total;
    out.error = err;
    return out;
}

/// Integral of f over [a, infinity) for integrands that eventually decay:
/// fixed panel [a, a+step], then geometrically growing panels until one
/// contributes less than tail_tol of the running total, with a panel cap.
template <typename F>
QuadResult integrate_to_infinity(F&& f, double a, double step, double abs_tol = 1e-12,
                                 double rel_tol = 1e-10, double tail_tol = 1e-14,
                                 std::size_t max_panels = 80) {
    QuadResult out;
    double lo = a;
    double len = step;
    for (std::size_t p = 0; p < max_panels; ++p) {
        QuadResult piece = integrate(f, lo, lo + len, abs_tol, rel_tol);
        out.value += piece.value;
        out.error += piece.error;
        out.evals += piece.evals;
        lo += len;
        len *= 2.0;
        if (p >= 2 && std::abs(piece.value) <= tail_tol * (std::abs(out.value) +
                                                           std::numeric_limits<double>::min())) {
            return out;
        }
    }
    std::ostringstream msg;
    msg << "semi-infinite quadrature did not settle: reached x=" << lo << " after "
        << max_panels << " panels, |I|=" << std::abs(out.value);
    throw ConvergenceError(msg.str());
}

}  // namespace cellcap
