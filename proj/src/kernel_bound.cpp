#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sqglab/quadrature.hpp"
#include "sqglab/spectral_core.hpp"

namespace sqg {

namespace {

// Smooth spectral taper applied to the symbol before synthesis. A sharp
// cutoff of a growing symbol rings across the whole annulus. The first erf
// rolls the bulk off around 0.4 kmax; the second drives the Nyquist ring
// below 1e-9 so its self-conjugate modes cannot leave stripes at the outer
// annulus edge where the kernel itself is tiny.
double taper(double k_over_kmax) {
    return 0.25 * std::erfc((k_over_kmax - 0.40) / 0.18) *
           std::erfc((k_over_kmax - 0.78) / 0.06);
}

struct KernelFit {
    double sup_ratio = 0.0;      // sup |K(y)| |y|^2 / S(1/|y|), annulus (8 dx, L/4)
    double sup_at_cells = 0.0;
    double grad_ratio = 0.0;     // sup |grad K(y)| |y|^3 / S(1/|y|)
    double grad_at_cells = 0.0;
    double low_min = 0.0;        // min K(y) |y|^2 / P(1/|y|) on (24 dx, L/8)
    double low_threshold = 0.0;  // largest sampled |y| below which the bound holds
    double riesz_dev = 0.0;      // max relative deviation from 1/(2 pi |y|^2)
};

RealField synthesize(const Grid& grid, const std::vector<std::complex<double>>& coeff) {
    SpectralField f(grid);
    f.c = coeff;
    return inverse(f);
}

KernelFit fit_kernel(int n, const std::function<double(double)>& radial_symbol,
                     bool velocity_side, bool critical) {
    const Grid grid(n);
    const double norm = 1.0 / (kTwoPi * kTwoPi);
    const double kmax = n / 2.0;
    const std::size_t sz = grid.size();

    // Coefficients of the kernel and of its two derivatives. The velocity
    // side synthesizes the kernel of d1 Lambda^-1 m(Lambda); the dissipation
    // side synthesizes the jump kernel, minus the inverse transform of P.
    std::vector<std::complex<double>> ck(sz), cgx(sz), cgy(sz), ck2;
    if (velocity_side && critical) ck2.resize(sz);
    for (int i = 0; i < n; ++i) {
        const int k1 = grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = grid.freq(j);
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            if (k1 == 0 && k2 == 0) continue;
            // The odd velocity symbol needs the self-conjugate Nyquist ring
            // zeroed; the even dissipation symbol keeps it.
            if (velocity_side && (k1 == n / 2 || k2 == n / 2)) continue;
            const double kk = std::sqrt(static_cast<double>(k1) * k1 +
                                        static_cast<double>(k2) * k2);
            const double damp = norm * taper(kk / kmax);
            std::complex<double> s;
            if (velocity_side) {
                s = std::complex<double>(0.0, k1 / kk) * radial_symbol(kk) * damp;
                if (!ck2.empty())
                    ck2[idx] = std::complex<double>(0.0, k2 / kk) * radial_symbol(kk) * damp;
            } else {
                s = -radial_symbol(kk) * damp;
            }
            ck[idx] = s;
            // Differentiation zeroes the Nyquist mode of its own direction.
            if (k1 != n / 2) cgx[idx] = std::complex<double>(0.0, k1) * s;
            if (k2 != n / 2) cgy[idx] = std::complex<double>(0.0, k2) * s;
        }
    }

    const RealField kern = synthesize(grid, ck);
    const RealField gx = synthesize(grid, cgx);
    const RealField gy = synthesize(grid, cgy);
    RealField kern2(grid);
    if (!ck2.empty()) kern2 = synthesize(grid, ck2);

    const double dx = grid.dx();
    const double inner = 8.0 * dx;
    const double outer = kTwoPi / 4.0;
    const double low_inner = 24.0 * dx;
    const double low_outer = kTwoPi / 8.0;

    KernelFit fit;
    std::vector<std::pair<double, double>> low_samples;  // (|y|, lower ratio)
    for (int i = 0; i < n; ++i) {
        const double y1 = grid.min_image(i);
        for (int j = 0; j < n; ++j) {
            const double y2 = grid.min_image(j);
            const double rr = std::hypot(y1, y2);
            if (rr <= inner || rr >= outer) continue;
            const double s_at = radial_symbol(1.0 / rr);
            const double kv = kern.at(i, j);
            const double gv = std::hypot(gx.at(i, j), gy.at(i, j));
            if (std::abs(kv) * rr * rr / s_at > fit.sup_ratio) {
                fit.sup_ratio = std::abs(kv) * rr * rr / s_at;
                fit.sup_at_cells = rr / dx;
            }
            if (gv * rr * rr * rr / s_at > fit.grad_ratio) {
                fit.grad_ratio = gv * rr * rr * rr / s_at;
                fit.grad_at_cells = rr / dx;
            }
            if (!velocity_side && rr > low_inner && rr < low_outer)
                low_samples.emplace_back(rr, kv * rr * rr / s_at);
            if (!ck2.empty()) {
                const double mag = std::hypot(kv, kern2.at(i, j));
                const double exact = 1.0 / (kTwoPi * rr * rr);
                fit.riesz_dev = std::max(fit.riesz_dev, std::abs(mag - exact) / exact);
            }
        }
    }

    if (!velocity_side && !low_samples.empty()) {
        std::sort(low_samples.begin(), low_samples.end());
        fit.low_min = low_samples.front().second;
        for (const auto& [rr, low] : low_samples) fit.low_min = std::min(fit.low_min, low);
        // Threshold per the asymptotic constant taken at the smallest radius.
        const double floor_c = 0.5 * low_samples.front().second;
        fit.low_threshold = 0.0;
        for (const auto& [rr, low] : low_samples) {
            if (low < floor_c) break;
            fit.low_threshold = rr;
        }
    }
    return fit;
}

VerificationReport run_bound_check(const std::function<double(double)>& radial_symbol,
                                   int n_grid, bool velocity_side, bool critical) {
    if (n_grid < 1024)
        throw std::invalid_argument("kernel_bound_check: n_grid must be >= 1024");

    const KernelFit coarse = fit_kernel(n_grid, radial_symbol, velocity_side, critical);
    const KernelFit fine = fit_kernel(2 * n_grid, radial_symbol, velocity_side, critical);

    const auto rel_change = [](double a, double b) {
        return std::abs(a - b) / std::max(std::abs(a), 1e-300);
    };

    VerificationReport rep;
    const bool sup_ok = std::isfinite(fine.sup_ratio) && fine.sup_ratio > 0.0;
    rep.items.push_back({"upper_bound", sup_ok ? Verdict::Pass : Verdict::Fail,
                         fine.sup_ratio,
                         "sup |K(y)| |y|^2 / S(1/|y|) over annulus, at |y| = " +
                             std::to_string(fine.sup_at_cells) + " cells"});
    const bool grad_ok = std::isfinite(fine.grad_ratio) && fine.grad_ratio > 0.0;
    rep.items.push_back({"gradient_bound", grad_ok ? Verdict::Pass : Verdict::Fail,
                         fine.grad_ratio,
                         "sup |grad K(y)| |y|^3 / S(1/|y|) over annulus, at |y| = " +
                             std::to_string(fine.grad_at_cells) + " cells"});

    const double change = std::max(rel_change(coarse.sup_ratio, fine.sup_ratio),
                                   rel_change(coarse.grad_ratio, fine.grad_ratio));
    rep.items.push_back({"grid_stability", change < 0.25 ? Verdict::Pass : Verdict::Fail,
                         change, "relative change of fitted constants under grid doubling"});

    if (!velocity_side) {
        const bool low_ok = fine.low_min > 0.0 && fine.low_threshold > 0.0;
        rep.items.push_back(
            {"lower_bound", low_ok ? Verdict::Pass : Verdict::Fail, fine.low_min,
             "min K(y) |y|^2 / P(1/|y|) on (24 dx, L/8); bound holds up to |y| = " +
                 std::to_string(fine.low_threshold)});
    }
    if (velocity_side && critical) {
        rep.items.push_back({"riesz_magnitude",
                             fine.riesz_dev < 0.10 ? Verdict::Pass : Verdict::Fail,
                             fine.riesz_dev,
                             "max relative deviation of |K| from 1/(2 pi |y|^2)"});
    }

    rep.finalize();
    return rep;
}

}  // namespace

VerificationReport kernel_bound_check(const VelocityMultiplier& m, int n_grid) {
    return run_bound_check([&m](double z) { return m(z); }, n_grid, /*velocity_side=*/true,
                           /*critical=*/m.alpha2 == 0.0);
}

VerificationReport kernel_bound_check(const DissipationSymbol& p, int n_grid) {
    return run_bound_check([&p](double z) { return p(z); }, n_grid, /*velocity_side=*/false,
                           /*critical=*/false);
}

}  // namespace sqg
