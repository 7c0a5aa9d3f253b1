#include "sqglab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace sqg {

namespace {

constexpr double kMonoSlack = 1e-12;  // relative slack for sampled monotonicity

bool nonincreasing(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i + 1 < hi; ++i)
        if (v[i + 1] > v[i] * (1.0 + kMonoSlack)) return false;
    return true;
}

bool nondecreasing(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i + 1 < hi; ++i)
        if (v[i + 1] < v[i] * (1.0 - kMonoSlack)) return false;
    return true;
}

// Least-squares slope of log(y) against log(x) over [lo, hi).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    std::size_t lo, std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void require_grid(const std::vector<double>& grid, std::size_t min_points,
                  double min_decades, const char* what) {
    if (grid.size() < min_points)
        throw std::invalid_argument(std::string(what) + ": grid needs at least " +
                                    std::to_string(min_points) + " points");
    if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() <= 0.0)
        throw std::invalid_argument(std::string(what) + ": grid must be positive ascending");
    if (std::log10(grid.back() / grid.front()) < min_decades)
        throw std::invalid_argument(std::string(what) + ": grid must span at least " +
                                    std::to_string(static_cast<int>(min_decades)) + " decades");
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        default: return "INCONCLUSIVE";
    }
}

const CheckItem* VerificationReport::find(const std::string& name) const {
    for (const auto& it : items)
        if (it.name == name) return &it;
    return nullptr;
}

void VerificationReport::finalize() {
    verdict = Verdict::Pass;
    for (const auto& it : items) {
        if (it.verdict == Verdict::Fail) {
            verdict = Verdict::Fail;
            return;
        }
        if (it.verdict == Verdict::Inconclusive) verdict = Verdict::Inconclusive;
    }
}

// --------------------------------------------------------------------------
// Symbol family
// --------------------------------------------------------------------------

RadialKernel::RadialKernel(double a1) : alpha1(a1) {
    if (!(a1 >= 0.0)) throw std::invalid_argument("RadialKernel: alpha1 must be >= 0");
}

double RadialKernel::operator()(double r) const {
    if (!(r > 0.0)) throw std::domain_error("RadialKernel: r must be positive");
    return 1.0 / (r * std::pow(std::log(10.0 + 1.0 / r), alpha1));
}

double RadialKernel::derivative(double r) const {
    if (!(r > 0.0)) throw std::domain_error("RadialKernel: r must be positive");
    const double lg = std::log(10.0 + 1.0 / r);
    const double la = std::pow(lg, alpha1);
    // d/dr [ r^-1 lg^-a ] with d(lg)/dr = -1 / (10 r^2 + r)
    return -1.0 / (r * r * la) + alpha1 / (r * la * lg * (10.0 * r * r + r));
}

VelocityMultiplier::VelocityMultiplier(double a2) : alpha2(a2) {
    if (!(a2 >= 0.0)) throw std::invalid_argument("VelocityMultiplier: alpha2 must be >= 0");
}

double VelocityMultiplier::operator()(double zeta) const {
    if (!(zeta >= 0.0)) throw std::domain_error("VelocityMultiplier: zeta must be >= 0");
    if (alpha2 == 0.0) return 1.0;
    const double v = std::pow(std::log(10.0 + zeta), alpha2);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

DissipationSymbol::DissipationSymbol(double a1) : alpha1(a1) {
    if (!(a1 >= 0.0)) throw std::invalid_argument("DissipationSymbol: alpha1 must be >= 0");
}

double DissipationSymbol::operator()(double zeta) const {
    if (!(zeta >= 0.0)) throw std::domain_error("DissipationSymbol: zeta must be >= 0");
    if (zeta == 0.0) return 0.0;
    return zeta * std::pow(std::log(10.0 + zeta), -alpha1);
}

ModulusOfContinuity::ModulusOfContinuity(double b, double cap) : beta(b), r_cap(cap) {
    if (!(b > 0.0)) throw std::invalid_argument("ModulusOfContinuity: beta must be > 0");
    if (!(cap > 0.0 && cap < 1.0))
        throw std::invalid_argument("ModulusOfContinuity: r_cap must lie in (0, 1)");
}

double ModulusOfContinuity::operator()(double r) const {
    if (!(r >= 0.0)) throw std::domain_error("ModulusOfContinuity: r must be >= 0");
    if (r == 0.0) return 0.0;
    const double re = std::min(r, r_cap);
    return std::pow(-std::log(re), -beta);
}

double ModulusOfContinuity::derivative(double r) const {
    if (!(r > 0.0)) throw std::domain_error("ModulusOfContinuity: r must be positive");
    if (r >= r_cap) return 0.0;
    const double s = -std::log(r);
    return beta * std::pow(s, -beta - 1.0) / r;
}

SymbolTriple::SymbolTriple(double a1, double a2, double b, double cap)
    : kernel(a1), multiplier(a2), symbol(a1), moc(b, cap) {}

std::string SymbolTriple::to_json() const {
    nlohmann::json j{{"alpha1", kernel.alpha1},
                     {"alpha2", multiplier.alpha2},
                     {"beta", moc.beta},
                     {"r_cap", moc.r_cap}};
    return j.dump();
}

SymbolTriple SymbolTriple::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("symbol triple: expected JSON object");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "alpha1" && key != "alpha2" && key != "beta" && key != "r_cap")
            throw std::invalid_argument("symbol triple: unknown key '" + key + "'");
    }
    const double a1 = j.at("alpha1").get<double>();
    const double a2 = j.at("alpha2").get<double>();
    const double b = j.at("beta").get<double>();
    const double cap = j.value("r_cap", ModulusOfContinuity::kDefaultRCap);
    return SymbolTriple(a1, a2, b, cap);
}

// --------------------------------------------------------------------------
// Sampled assumption checkers
// --------------------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw std::invalid_argument("log_grid: bad range");
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.back() = hi;
    return g;
}

std::vector<double> default_kernel_grid() { return log_grid(1e-150, 1e2, 304); }
std::vector<double> default_multiplier_grid() { return log_grid(1e-150, 1e4, 308); }

namespace {

// Initial nonincreasing segment of f on an ascending grid; returns the last
// index that still belongs to it.
std::size_t monotone_front(const std::vector<double>& f) {
    std::size_t t = 0;
    while (t + 1 < f.size() && f[t + 1] <= f[t] * (1.0 + kMonoSlack)) ++t;
    return t;
}

std::size_t monotone_front_increasing(const std::vector<double>& f) {
    std::size_t t = 0;
    while (t + 1 < f.size() && f[t + 1] >= f[t] * (1.0 - kMonoSlack)) ++t;
    return t;
}

std::size_t index_at_or_above(const std::vector<double>& grid, double value) {
    auto it = std::lower_bound(grid.begin(), grid.end(), value);
    if (it == grid.end()) --it;
    return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

VerificationReport check_kernel_assumptions(const std::function<double(double)>& k,
                                            const std::vector<double>& r_grid) {
    require_grid(r_grid, 64, 8.0, "check_kernel_assumptions");
    const std::size_t n = r_grid.size();

    std::vector<double> kv(n), r2k(n);
    bool finite = true, positive = true;
    for (std::size_t i = 0; i < n; ++i) {
        kv[i] = k(r_grid[i]);
        finite = finite && std::isfinite(kv[i]);
        positive = positive && kv[i] > 0.0;
        r2k[i] = r_grid[i] * r_grid[i] * kv[i];
    }

    VerificationReport rep;
    rep.items.push_back({"positive", (finite && positive) ? Verdict::Pass : Verdict::Fail,
                         std::nullopt, "k(r) > 0 and finite on grid"});
    rep.items.push_back({"nonincreasing",
                         (finite && nonincreasing(kv, 0, n)) ? Verdict::Pass : Verdict::Fail,
                         std::nullopt, "k nonincreasing on grid"});
    rep.items.push_back({"r2k_nondecreasing",
                         (finite && nondecreasing(r2k, 0, n)) ? Verdict::Pass : Verdict::Fail,
                         std::nullopt, "r^2 k(r) nondecreasing on grid"});

    double c = 0.0;
    bool c_ok = finite;
    for (std::size_t i = 0; i < n && c_ok; ++i) {
        const double ratio = k(r_grid[i] / 2.0) / kv[i];
        c_ok = std::isfinite(ratio);
        c = std::max(c, ratio);
    }
    rep.items.push_back({"doubling", c_ok ? Verdict::Pass : Verdict::Fail, c,
                         "fitted doubling constant max k(r/2)/k(r)"});

    for (const double eps : {0.1, 0.01}) {
        std::vector<double> f(n);
        bool f_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = std::pow(r_grid[i], 1.0 - eps) * kv[i];
            f_ok = f_ok && std::isfinite(f[i]);
        }
        const std::size_t t = f_ok ? monotone_front(f) : 0;
        const double r_eps = r_grid[t];
        const bool span_ok = r_eps >= r_grid.front() * 10.0;
        const bool grows = f_ok && t > 0 && f.front() >= 2.0 * f[t];
        CheckItem item;
        item.name = eps == 0.1 ? "supercritical_eps_0.1" : "supercritical_eps_0.01";
        item.verdict = (f_ok && span_ok && grows) ? Verdict::Pass : Verdict::Fail;
        item.fitted = r_eps;
        item.detail = "r^(1-eps) k(r) nonincreasing below fitted threshold, growing toward 0";
        rep.items.push_back(std::move(item));
    }

    rep.finalize();
    return rep;
}

VerificationReport check_kernel_assumptions(const RadialKernel& k,
                                            const std::vector<double>& r_grid) {
    return check_kernel_assumptions([&k](double r) { return k(r); }, r_grid);
}

VerificationReport check_multiplier_assumptions(const std::function<double(double)>& m,
                                                const std::vector<double>& zeta_grid) {
    require_grid(zeta_grid, 32, 8.0, "check_multiplier_assumptions");
    const std::size_t n = zeta_grid.size();

    std::vector<double> mv(n);
    bool finite = true, ge_one = true;
    for (std::size_t i = 0; i < n; ++i) {
        mv[i] = m(zeta_grid[i]);
        finite = finite && std::isfinite(mv[i]);
        ge_one = ge_one && mv[i] >= 1.0 - kMonoSlack;
    }

    VerificationReport rep;
    rep.items.push_back({"ge_one", (finite && ge_one) ? Verdict::Pass : Verdict::Fail,
                         std::nullopt, "m >= 1 on grid"});
    rep.items.push_back({"nondecreasing",
                         (finite && nondecreasing(mv, 0, n)) ? Verdict::Pass : Verdict::Fail,
                         std::nullopt, "m nondecreasing on grid"});

    // Sampled Hörmander–Mikhlin ratios at derivative orders 1 and 2.
    for (const int order : {1, 2}) {
        std::vector<double> ratio(n, 0.0);
        bool r_ok = finite;
        for (std::size_t i = 0; i < n && r_ok; ++i) {
            const double z = zeta_grid[i];
            const double h = z * 1e-4;
            const double mp = m(z + h);
            const double mm = m(z - h);
            const double d = (order == 1) ? (mp - mm) / (2.0 * h)
                                          : (mp - 2.0 * mv[i] + mm) / (h * h);
            ratio[i] = std::abs(std::pow(z, order) * d) / mv[i];
            r_ok = std::isfinite(ratio[i]);
        }
        bool unbounded = !r_ok;
        if (r_ok) {
            const std::size_t i1 = index_at_or_above(zeta_grid, zeta_grid.back() / 10.0);
            const std::size_t i2 = index_at_or_above(zeta_grid, zeta_grid.back() / 100.0);
            unbounded = ratio.back() > 1e-6 && ratio.back() >= 2.0 * ratio[i1] &&
                        ratio[i1] >= 2.0 * ratio[i2];
        }
        const double fitted = r_ok ? *std::max_element(ratio.begin(), ratio.end())
                                   : std::numeric_limits<double>::infinity();
        rep.items.push_back({"hm_order_" + std::to_string(order),
                             unbounded ? Verdict::Fail : Verdict::Pass, fitted,
                             unbounded ? "ratio grows without bound on grid"
                                       : "fitted C_k = max |z^k d^k m| / m"});
    }

    // Slightly supercritical velocity: |z|^eps m(1/|z|) nondecreasing for
    // small |z| and tending to 0.
    for (const double eps : {0.1, 0.01}) {
        std::vector<double> f(n);
        bool f_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = std::pow(zeta_grid[i], eps) * m(1.0 / zeta_grid[i]);
            f_ok = f_ok && std::isfinite(f[i]);
        }
        const std::size_t t = f_ok ? monotone_front_increasing(f) : 0;
        const bool span_ok = t > 0 && zeta_grid[t] >= zeta_grid.front() * 10.0;
        const bool vanishes = f_ok && t > 0 && f.front() <= 0.5 * f[t];
        CheckItem item;
        item.name = eps == 0.1 ? "supercritical_eps_0.1" : "supercritical_eps_0.01";
        item.verdict = (f_ok && span_ok && vanishes) ? Verdict::Pass : Verdict::Fail;
        item.fitted = zeta_grid[t];
        item.detail = "|z|^eps m(1/|z|) nondecreasing below fitted threshold, vanishing at 0";
        rep.items.push_back(std::move(item));
    }

    rep.finalize();
    return rep;
}

VerificationReport check_multiplier_assumptions(const VelocityMultiplier& m,
                                                const std::vector<double>& zeta_grid) {
    return check_multiplier_assumptions([&m](double z) { return m(z); }, zeta_grid);
}

namespace {

// Trend of a sampled positive sequence on the dyadic radii: PASS means a
// decisive decay toward the r -> 0 limit, FAIL a decisive growth. The slope
// is measured in log-log coordinates against -log r, where the logarithmic
// family is asymptotically a pure power.
CheckItem classify_trend(std::string name, const std::vector<double>& s,
                         const std::vector<double>& q) {
    const std::size_t n = q.size();
    const std::size_t lo = n - 20;
    const double slope = loglog_slope(s, q, lo, n);
    CheckItem item;
    item.name = std::move(name);
    item.fitted = slope;
    if (slope <= -0.05 && nonincreasing(q, lo, n)) {
        item.verdict = Verdict::Pass;
        item.detail = "ratio decreases monotonically over the last 20 dyadic points";
    } else if (slope >= 0.05 && nondecreasing(q, lo, n)) {
        item.verdict = Verdict::Fail;
        item.detail = "ratio grows over the last 20 dyadic points";
    } else {
        item.verdict = Verdict::Inconclusive;
        item.detail = "trend too flat to classify";
    }
    return item;
}

}  // namespace

VerificationReport check_criticality(const SymbolTriple& triple) {
    constexpr int j_lo = 4, j_hi = 40;
    std::vector<double> s, q_reg, q_con, growth;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double r = std::ldexp(1.0, -j);
        const double mk = triple.multiplier(1.0 / r);
        const double kk = triple.kernel(r);
        const double w = triple.moc(r);
        s.push_back(-std::log(r));
        q_reg.push_back(mk * w / (r * kk));
        q_con.push_back((mk / kk) * (triple.moc.derivative(r) / w));
        growth.push_back(w / std::sqrt(r));  // growth trend at gamma = 0.5
    }

    VerificationReport rep;
    rep.items.push_back(classify_trend("regularity_ratio", s, q_reg));
    rep.items.push_back(classify_trend("conservation_ratio", s, q_con));

    // Growth condition: w(r)/r^0.5 should blow up toward r -> 0 and vanish
    // for large r (trivial beyond the cap since w is constant there).
    {
        const std::size_t n = growth.size();
        const std::size_t lo = n - 20;
        const bool grows = nondecreasing(growth, lo, n) && growth.back() >= 2.0 * growth[lo];
        bool large_r_ok = true;
        double prev = triple.moc(1.0) / 1.0;
        for (const double r : {10.0, 100.0, 1000.0}) {
            const double v = triple.moc(r) / std::sqrt(r);
            large_r_ok = large_r_ok && v < prev;
            prev = v;
        }
        CheckItem item;
        item.name = "growth_condition";
        item.verdict = (grows && large_r_ok) ? Verdict::Pass
                       : grows || large_r_ok ? Verdict::Inconclusive
                                             : Verdict::Fail;
        item.detail = "w(r)/r^0.5 grows toward r -> 0 and vanishes for large r";
        rep.items.push_back(std::move(item));
    }

    rep.finalize();
    return rep;
}

}  // namespace sqg
