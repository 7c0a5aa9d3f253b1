#include "sqglab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <json.hpp>

namespace sqg {

namespace {

// Gauss–Kronrod 7-15 nodes and weights on [-1, 1]. Even nodes are the
// Kronrod extension, odd nodes carry the embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a = 0.0, b = 0.0;   // bounds in s = log(rho)
    double value = 0.0;
    double error = 0.0;
};

struct Workspace {
    const std::function<double(double)>* f = nullptr;
    long evaluations = 0;
    long max_evals = 0;
    bool saw_nonfinite = false;

    double eval(double s) {
        ++evaluations;
        const double rho = std::exp(s);
        const double v = (*f)(rho) * rho;  // d rho = rho ds
        if (!std::isfinite(v)) saw_nonfinite = true;
        return v;
    }
};

Segment gk15(Workspace& w, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double fp = w.eval(mid + half * kNodes[i]);
        const double fm = i == 7 ? fp : w.eval(mid - half * kNodes[i]);
        const double pair = i == 7 ? fp : fp + fm;
        kron += kWeightK[i] * pair;
        if (i % 2 == 1 || i == 7) gauss += kWeightG[i / 2] * pair;
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = kron * half;
    s.error = std::abs((kron - gauss) * half);
    return s;
}

struct SegmentWorse {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lower,
                           double upper, double rel_tol, long max_evals) {
    if (!(rel_tol > 1e-14 && rel_tol < 1e-2))
        throw std::invalid_argument("integrate: rel_tol must lie in (1e-14, 1e-2)");
    if (!(lower >= 0.0) || !(upper > lower))
        throw std::invalid_argument("integrate: need 0 <= lower < upper");

    Workspace w;
    w.f = &f;
    w.max_evals = max_evals;

    const bool infinite_upper = std::isinf(upper);
    const double s_hi_core = infinite_upper ? std::log(std::max(lower, 1e-12) * 4.0)
                                            : std::log(upper);

    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    double total = 0.0, total_err = 0.0;
    double fixed_err = 0.0;  // truncation-tail bounds; not refinable
    const auto push = [&](const Segment& s) {
        total += s.value;
        total_err += s.error;
        heap.push(s);
    };

    // Core interval in s, cut into unit-length pieces. A zero lower endpoint
    // is handled by marching below the core in e-folds until the geometric
    // tail of the remaining mass is negligible against the running total.
    double s_lo_core;
    if (lower > 0.0) {
        s_lo_core = std::log(lower);
    } else {
        s_lo_core = s_hi_core - 1.0;
        double prev_mag = -1.0;
        double s = s_lo_core;
        for (int iter = 0; iter < 800; ++iter) {
            const Segment seg = gk15(w, s - 1.0, s);
            push(seg);
            s -= 1.0;
            const double mag = std::abs(seg.value);
            if (prev_mag > 0.0 && mag > 0.0) {
                const double q = std::min(mag / prev_mag, 0.95);
                const double projected_tail = mag * q / (1.0 - q);
                if (projected_tail < 0.25 * rel_tol * std::abs(total)) {
                    fixed_err += projected_tail;
                    break;
                }
            } else if (mag == 0.0 && prev_mag == 0.0) {
                break;
            }
            prev_mag = mag;
            if (s < -700.0) break;  // rho underflows; integrable mass is exhausted
        }
    }

    const int core_pieces =
        std::max(1, static_cast<int>(std::ceil(s_hi_core - s_lo_core)));
    for (int i = 0; i < core_pieces; ++i) {
        const double a = s_lo_core + (s_hi_core - s_lo_core) * i / core_pieces;
        const double b = s_lo_core + (s_hi_core - s_lo_core) * (i + 1) / core_pieces;
        push(gk15(w, a, b));
    }

    // Upper extension: march in e-folds until the integrand drops below
    // rel_tol times the running total, then account for the tail through the
    // rho^-2 envelope.
    if (infinite_upper) {
        double s = s_hi_core;
        bool truncated = false;
        for (int iter = 0; iter < 800; ++iter) {
            if (s > 690.0) break;
            const Segment seg = gk15(w, s, s + 1.0);
            push(seg);
            s += 1.0;
            double sup_f = 0.0;
            for (int q = 0; q < 5; ++q) {
                const double rho = std::exp(s - 1.0 + 0.25 * q);
                sup_f = std::max(sup_f, std::abs(f(rho)));
            }
            w.evaluations += 5;
            if (sup_f < rel_tol * std::max(std::abs(total), 1e-300)) {
                truncated = true;
                break;
            }
        }
        const double t_trunc = std::exp(s);
        const double tail = f(t_trunc) * t_trunc;
        ++w.evaluations;
        if (std::isfinite(tail)) {
            total += tail;
            fixed_err += std::abs(tail);
        }
        if (!truncated && !w.saw_nonfinite)
            throw QuadratureError("integrate: upper tail did not decay",
                                  {total, total_err + fixed_err, w.evaluations});
    }

    // Global refinement: split the worst segment until the refinable error
    // meets the target; the truncation-tail bounds stay in the estimate.
    while (total_err > std::max(0.5 * rel_tol * std::abs(total), 1e-300)) {
        if (w.saw_nonfinite)
            throw QuadratureError("integrate: non-finite integrand value",
                                  {total, total_err + fixed_err, w.evaluations});
        if (w.evaluations >= w.max_evals)
            throw QuadratureError("integrate: evaluation budget exhausted",
                                  {total, total_err + fixed_err, w.evaluations});
        Segment worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        push(gk15(w, worst.a, mid));
        push(gk15(w, mid, worst.b));
    }
    if (w.saw_nonfinite)
        throw QuadratureError("integrate: non-finite integrand value",
                              {total, total_err + fixed_err, w.evaluations});

    return {total, total_err + fixed_err, w.evaluations};
}

namespace {

constexpr double kLemmaTol = 1e-9;

// Fitted-constant item: C = max lhs/rhs over samples, stability = variation
// below 2x across the smallest sampled decade.
LemmaReport fitted_item(std::string name, std::vector<LemmaSample> samples,
                        std::string note) {
    LemmaReport rep;
    rep.item = std::move(name);
    rep.samples = std::move(samples);
    rep.note = std::move(note);

    double c = 0.0;
    bool finite = true;
    double r_min = kInf;
    for (const auto& s : rep.samples) r_min = std::min(r_min, s.r);
    double dec_lo = kInf, dec_hi = 0.0;
    for (const auto& s : rep.samples) {
        const double ratio = s.lhs / s.rhs;
        finite = finite && std::isfinite(ratio) && ratio >= 0.0;
        c = std::max(c, ratio);
        if (s.r <= 10.0 * r_min) {
            dec_lo = std::min(dec_lo, ratio);
            dec_hi = std::max(dec_hi, ratio);
        }
    }
    const bool stable = dec_lo > 0.0 && dec_hi / dec_lo < 2.0;
    rep.fitted_constant = c;
    rep.verdict = (finite && stable) ? Verdict::Pass : Verdict::Fail;
    if (!stable && finite) rep.note += "; fitted constant unstable across smallest decade";
    return rep;
}

}  // namespace

std::vector<LemmaReport> verify_integral_estimates(const SymbolTriple& triple, double gamma,
                                        const std::vector<double>& r_samples,
                                        double smallness_threshold) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("verify_integral_estimates: gamma must lie in (0, 1)");
    if (r_samples.empty())
        throw std::invalid_argument("verify_integral_estimates: need at least one sample radius");
    for (const double r : r_samples)
        if (!(r > 0.0 && r < smallness_threshold))
            throw std::invalid_argument(
                "verify_integral_estimates: samples must lie in (0, " +
                std::to_string(smallness_threshold) + ")");

    const auto& kern = triple.kernel;
    const auto& mult = triple.multiplier;
    const auto& moc = triple.moc;

    std::vector<double> rs = r_samples;
    std::sort(rs.begin(), rs.end());

    std::vector<LemmaReport> out;

    const auto explicit_item = [&](const char* name, auto&& lhs_fn, auto&& rhs_fn,
                                   bool lower_bound, const char* note) {
        LemmaReport rep;
        rep.item = name;
        rep.note = note;
        bool all_pass = true;
        try {
            for (const double r : rs) {
                LemmaSample s;
                s.r = r;
                s.lhs = lhs_fn(r);
                s.rhs = rhs_fn(r);
                const bool ok = lower_bound ? s.lhs >= s.rhs * (1.0 - 1e-8)
                                            : s.lhs <= s.rhs * (1.0 + 1e-8);
                all_pass = all_pass && ok;
                rep.samples.push_back(s);
            }
            rep.verdict = all_pass ? Verdict::Pass : Verdict::Fail;
        } catch (const QuadratureError& e) {
            rep.verdict = Verdict::Inconclusive;
            rep.note = std::string("quadrature failure: ") + e.what();
        }
        out.push_back(std::move(rep));
    };

    const auto ratio_item = [&](const char* name, auto&& lhs_fn, auto&& rhs_fn,
                                const char* note) {
        try {
            std::vector<LemmaSample> samples;
            for (const double r : rs) samples.push_back({r, lhs_fn(r), rhs_fn(r)});
            out.push_back(fitted_item(name, std::move(samples), note));
        } catch (const QuadratureError& e) {
            LemmaReport rep;
            rep.item = name;
            rep.verdict = Verdict::Inconclusive;
            rep.note = std::string("quadrature failure: ") + e.what();
            out.push_back(std::move(rep));
        }
    };

    explicit_item(
        "i",
        [&](double r) {
            return integrate([&](double p) { return kern(p) / p; }, r, kInf, kLemmaTol)
                .value;
        },
        [&](double r) { return kern(r) / 2.0; }, /*lower_bound=*/true,
        "int_r^inf k(p)/p dp >= k(r)/2");

    ratio_item(
        "ii",
        [&](double r) {
            return integrate([&](double p) { return moc(p) * kern(p) / p; }, r / 2.0, r,
                             kLemmaTol)
                .value;
        },
        [&](double r) { return moc(r) * kern(r); },
        "int_{r/2}^r w(p) k(p)/p dp <= C w(r) k(r)");

    ratio_item(
        "iii",
        [&](double r) {
            return integrate(
                       [&](double p) {
                           return moc(p) * (-kern.derivative(p) / p +
                                            2.0 * kern(p) / (p * p));
                       },
                       r, kInf, kLemmaTol)
                .value;
        },
        [&](double r) { return moc(r) * kern(r) / r; },
        "int_r^inf w(p) (-k'(p)/p + 2k(p)/p^2) dp <= C w(r) k(r)/r");

    explicit_item(
        "iv",
        [&](double r) {
            return integrate(
                       [&](double p) {
                           const double mp = mult(1.0 / p);
                           return mp * mp / (p * kern(p));
                       },
                       0.0, r, kLemmaTol)
                .value;
        },
        [&](double r) {
            const double mr = mult(1.0 / r);
            return 4.0 * mr * mr / kern(r);
        },
        /*lower_bound=*/false, "int_0^r m(1/p)^2/(p k(p)) dp <= 4 m(1/r)^2 / k(r)");

    ratio_item(
        "v",
        [&](double r) {
            return integrate([&](double p) { return moc(p) * mult(1.0 / p) / (p * p); },
                             r, kInf, kLemmaTol)
                .value;
        },
        [&](double r) { return moc(r) * mult(1.0 / r) / r; },
        "int_r^inf w(p) m(1/p)/p^2 dp <= C w(r) m(1/r)/r");

    return out;
}

std::string lemma_reports_to_json(const std::vector<LemmaReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& s : rep.samples)
            samples.push_back({{"r", s.r}, {"lhs", s.lhs}, {"rhs", s.rhs}});
        nlohmann::json j{{"item", rep.item},
                         {"verdict", to_string(rep.verdict)},
                         {"samples", std::move(samples)},
                         {"note", rep.note}};
        if (rep.fitted_constant)
            j["fitted_constant"] = *rep.fitted_constant;
        else
            j["fitted_constant"] = nullptr;
        arr.push_back(std::move(j));
    }
    return nlohmann::json{{"items", std::move(arr)}}.dump(2);
}

}  // namespace sqg
