#include "sqglab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace sqg {

double linf_norm(const RealField& f) {
    double m = 0.0;
    for (const double v : f.v) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const RealField& f) {
    double s = 0.0;
    for (const double v : f.v) s += v * v;
    return std::sqrt(s) * f.grid.dx();
}

double linf_norm(const VectorField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.x1.v.size(); ++i)
        m = std::max(m, f.x1.v[i] * f.x1.v[i] + f.x2.v[i] * f.x2.v[i]);
    return std::sqrt(m);
}

double grad_linf_norm(const SpectralField& f) { return linf_norm(gradient(f)); }

std::vector<Shift> dyadic_shift_set(const Grid& grid, int j_max) {
    if (j_max < 0) {
        j_max = 0;
        while ((2 << j_max) <= grid.n() / 4) ++j_max;
    }
    std::vector<Shift> shifts;
    for (int j = 0; j <= j_max; ++j) {
        const int c = 1 << j;
        if (c > grid.n() / 2) break;
        const double len = c * grid.dx();
        shifts.push_back({c, 0, len});
        shifts.push_back({0, c, len});
        shifts.push_back({c, c, len * std::sqrt(2.0)});
        shifts.push_back({c, -c, len * std::sqrt(2.0)});
    }
    return shifts;
}

MocReport moc_ratio(const RealField& theta, const MocFn& omega,
                    const std::vector<Shift>& shifts) {
    if (shifts.empty()) throw std::invalid_argument("moc_ratio: empty shift set");
    const int n = theta.grid.n();
    MocReport rep;
    for (const Shift& h : shifts) {
        if (h.cx == 0 && h.cy == 0)
            throw std::invalid_argument("moc_ratio: zero shift not allowed");
        const double w = omega(h.length);
        if (!(w > 0.0))
            throw std::invalid_argument("moc_ratio: omega must be positive at |h| > 0");
        ShiftRatio row;
        row.shift = h;
        for (int ix = 0; ix < n; ++ix) {
            const int sx = (ix + h.cx + n) % n;
            for (int iy = 0; iy < n; ++iy) {
                const int sy = (iy + h.cy + n) % n;
                const double ratio = std::abs(theta.at(sx, sy) - theta.at(ix, iy)) / w;
                if (ratio > row.max_ratio) {
                    row.max_ratio = ratio;
                    row.arg_ix = ix;
                    row.arg_iy = iy;
                }
            }
        }
        if (row.max_ratio > rep.m_est) {
            rep.m_est = row.max_ratio;
            rep.argmax_shift = h;
            rep.argmax_ix = row.arg_ix;
            rep.argmax_iy = row.arg_iy;
        }
        rep.table.push_back(row);
    }
    return rep;
}

double moc_ratio_exhaustive(const RealField& theta, const MocFn& omega) {
    const int n = theta.grid.n();
    if (n > 64)
        throw std::invalid_argument("moc_ratio_exhaustive: limited to n <= 64");
    // Distinct displacement classes suffice; every pair difference is one of
    // them. Ratio values for a displacement are cached through omega once.
    double best = 0.0;
    for (int dx_c = 0; dx_c < n; ++dx_c) {
        for (int dy_c = 0; dy_c < n; ++dy_c) {
            if (dx_c == 0 && dy_c == 0) continue;
            const double len = std::hypot(theta.grid.min_image(dx_c),
                                          theta.grid.min_image(dy_c));
            const double w = omega(len);
            if (!(w > 0.0)) continue;
            double diff_max = 0.0;
            for (int ix = 0; ix < n; ++ix) {
                const int sx = (ix + dx_c) % n;
                for (int iy = 0; iy < n; ++iy) {
                    const int sy = (iy + dy_c) % n;
                    diff_max = std::max(
                        diff_max, std::abs(theta.at(sx, sy) - theta.at(ix, iy)));
                }
            }
            best = std::max(best, diff_max / w);
        }
    }
    return best;
}

Breakthrough breakthrough_search(const RealField& theta, const MocFn& omega,
                                 double m_amplitude, const std::vector<Shift>& shifts) {
    if (!(m_amplitude > 0.0))
        throw std::invalid_argument("breakthrough_search: amplitude must be positive");
    const int n = theta.grid.n();
    Breakthrough best;
    best.margin = -std::numeric_limits<double>::infinity();
    for (const Shift& h : shifts) {
        const double level = m_amplitude * omega(h.length);
        for (int ix = 0; ix < n; ++ix) {
            const int sx = (ix + h.cx + n) % n;
            for (int iy = 0; iy < n; ++iy) {
                const int sy = (iy + h.cy + n) % n;
                const double margin =
                    std::abs(theta.at(sx, sy) - theta.at(ix, iy)) - level;
                if (margin > best.margin) {
                    best.margin = margin;
                    best.shift = h;
                    best.ix = ix;
                    best.iy = iy;
                }
            }
        }
    }
    return best;
}

double nlmp_radius(double grad_linf, const MocFn& omega, double amplitude, double c1,
                   double r_lo, double r_hi) {
    if (!(grad_linf > 0.0)) throw std::invalid_argument("nlmp_radius: grad_linf must be > 0");
    if (!(c1 > 0.0)) throw std::invalid_argument("nlmp_radius: c1 must be > 0");
    if (!(r_lo > 0.0 && r_hi > r_lo)) throw std::invalid_argument("nlmp_radius: bad bracket");

    const auto f = [&](double r) { return amplitude * omega(r) / r; };
    const double target = grad_linf / c1;
    const double f_lo = f(r_lo);
    const double f_hi = f(r_hi);
    if (!(f_lo > f_hi * (1.0 + 1e-9)))
        throw RangeError("nlmp_radius: omega(R)/R is not strictly decreasing on bracket; "
                         "achievable interval [" + std::to_string(f_hi) + ", " +
                             std::to_string(f_lo) + "]",
                         f_hi, f_lo);
    if (target > f_lo || target < f_hi)
        throw RangeError("nlmp_radius: target " + std::to_string(target) +
                             " outside achievable interval [" + std::to_string(f_hi) +
                             ", " + std::to_string(f_lo) + "]",
                         f_hi, f_lo);

    double lo = std::log(r_lo), hi = std::log(r_hi);
    for (int it = 0; it < 200 && (hi - lo) > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(std::exp(mid)) >= target)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

NlmpFitReport fit_nlmp_constant(const RealField& d_field, const VectorField& grad_field,
                                const RadialKernel& kernel, const MocFn& omega,
                                double amplitude, double c1, double percentile) {
    if (!(d_field.grid == grad_field.x1.grid))
        throw std::invalid_argument("fit_nlmp_constant: fields on different grids");
    if (!(percentile >= 0.0 && percentile < 1.0))
        throw std::invalid_argument("fit_nlmp_constant: percentile must lie in [0, 1)");

    const std::size_t sz = d_field.grid.size();
    std::vector<double> gmag(sz);
    for (std::size_t i = 0; i < sz; ++i)
        gmag[i] = std::hypot(grad_field.x1.v[i], grad_field.x2.v[i]);

    std::vector<double> sorted = gmag;
    std::nth_element(sorted.begin(),
                     sorted.begin() + static_cast<std::ptrdiff_t>(percentile * (sz - 1)),
                     sorted.end());
    const double threshold = sorted[static_cast<std::size_t>(percentile * (sz - 1))];
    const double gmax = *std::max_element(gmag.begin(), gmag.end());

    NlmpFitReport rep;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < sz; ++i) {
        if (gmag[i] < threshold || gmag[i] <= 0.0) continue;
        try {
            const double radius = nlmp_radius(gmag[i], omega, amplitude, c1);
            ratios.push_back(d_field.v[i] / (gmag[i] * gmag[i] * kernel(radius)));
        } catch (const RangeError&) {
            ++rep.points_excluded;
        }
    }
    rep.points_used = ratios.size();
    if (ratios.empty()) {
        rep.degenerate = true;
        return rep;
    }
    std::sort(ratios.begin(), ratios.end());
    rep.ratio_min = ratios.front();
    rep.ratio_max = ratios.back();
    rep.ratio_median = ratios[ratios.size() / 2];
    rep.c2_empirical = rep.ratio_min / 4.0;
    rep.degenerate = rep.ratio_max == 0.0 || gmax <= 0.0;
    return rep;
}

BoundReport gradient_bound(double theta0_linf, double theta0_grad_linf, double beta,
                           double c, double c_outer) {
    if (!(theta0_linf >= 1.0))
        throw std::domain_error(
            "gradient_bound: requires |theta0|_inf >= 1; rescale the data first");
    if (!(theta0_grad_linf >= 0.0) || !(beta > 0.0) || !(c > 0.0) || !(c_outer > 0.0))
        throw std::invalid_argument("gradient_bound: invalid parameter");

    BoundReport rep;
    rep.beta = beta;
    rep.c = c;
    rep.c_outer = c_outer;
    rep.r0 = std::exp(-c * beta * theta0_linf);
    rep.m_amplitude = 2.0 * std::pow(c * beta, beta) * std::pow(theta0_linf, 1.0 + beta);
    // M omega(r1) = 1/2 with the default unit proof constants, so
    // (-log r1)^beta = 2 M.
    rep.r1 = std::exp(-std::pow(2.0 * rep.m_amplitude, 1.0 / beta));
    rep.bound_exponential =
        theta0_grad_linf * c_outer *
        std::exp(c_outer * std::pow(theta0_linf, 1.0 + 1.0 / beta));
    rep.bound_double_exponential =
        theta0_grad_linf * c_outer * std::exp(std::exp(c_outer * theta0_linf));
    return rep;
}

double total_dissipation(const SpectralField& theta, const DissipationSymbol& p) {
    const int n = theta.grid.n();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k1 = theta.grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = theta.grid.freq(j);
            s += p(std::hypot(k1, k2)) * std::norm(theta.at(i, j));
        }
    }
    return 2.0 * kTwoPi * kTwoPi * s;
}

std::string moc_report_to_json(const MocReport& rep) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rep.table)
        table.push_back({{"cx", row.shift.cx},
                         {"cy", row.shift.cy},
                         {"length", row.shift.length},
                         {"max_ratio", row.max_ratio},
                         {"arg_ix", row.arg_ix},
                         {"arg_iy", row.arg_iy}});
    nlohmann::json j{{"m_est", rep.m_est},
                     {"argmax",
                      {{"cx", rep.argmax_shift.cx},
                       {"cy", rep.argmax_shift.cy},
                       {"length", rep.argmax_shift.length},
                       {"ix", rep.argmax_ix},
                       {"iy", rep.argmax_iy}}},
                     {"per_shift", std::move(table)}};
    return j.dump(2);
}

std::string bound_report_to_json(const BoundReport& rep) {
    nlohmann::json j{{"beta", rep.beta},
                     {"c", rep.c},
                     {"c_outer", rep.c_outer},
                     {"r0", rep.r0},
                     {"r1", rep.r1},
                     {"M", rep.m_amplitude},
                     {"bound_exponential", rep.bound_exponential},
                     {"bound_double_exponential", rep.bound_double_exponential}};
    return j.dump(2);
}

}  // namespace sqg
