#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqglab/diagnostics.hpp"
#include "sqglab/spectral_core.hpp"

using namespace sqg;

namespace {

RealField random_field(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RealField f(grid);
    for (auto& v : f.v) v = unif(rng);
    return f;
}

RealField sample(const Grid& grid, const std::function<double(double, double)>& fn) {
    RealField f(grid);
    const double dx = grid.dx();
    for (int i = 0; i < grid.n(); ++i)
        for (int j = 0; j < grid.n(); ++j) f.at(i, j) = fn(i * dx, j * dx);
    return f;
}

double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

// Direct O(n^4) evaluation of the dissipation functional.
RealField brute_force_dissipation(std::vector<const RealField*> comps,
                                  const RadialKernel& kern, double delta) {
    const Grid grid = comps.front()->grid;
    const int n = grid.n();
    const double cell = grid.dx() * grid.dx();
    RealField d(grid);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            double acc = 0.0;
            for (int jx = 0; jx < n; ++jx)
                for (int jy = 0; jy < n; ++jy) {
                    if (ix == jx && iy == jy) continue;
                    const double zx = grid.min_image((jx - ix + n) % n);
                    const double zy = grid.min_image((jy - iy + n) % n);
                    const double dist = std::hypot(zx, zy);
                    double diff2 = 0.0;
                    for (const RealField* g : comps) {
                        const double dgv = g->at(jx, jy) - g->at(ix, iy);
                        diff2 += dgv * dgv;
                    }
                    acc += diff2 * kern(std::max(dist, delta)) / (dist * dist);
                }
            d.at(ix, iy) = acc * cell;
        }
    return d;
}

}  // namespace

TEST_CASE("grid construction accepts only powers of two >= 32") {
    CHECK_THROWS_AS(Grid(31), std::invalid_argument);
    CHECK_THROWS_AS(Grid(48), std::invalid_argument);
    CHECK_THROWS_AS(Grid(16), std::invalid_argument);
    CHECK(Grid(64).dx() == doctest::Approx(kTwoPi / 64));
    CHECK(Grid(64).freq(0) == 0);
    CHECK(Grid(64).freq(32) == 32);
    CHECK(Grid(64).freq(63) == -1);
}

TEST_CASE("transform round trip is the identity to 1e-12") {
    for (const int n : {32, 64, 128}) {
        const Grid grid(n);
        const RealField f = random_field(grid, 101 + n);
        const RealField back = inverse(forward(f));
        double scale = 0.0;
        for (const double v : f.v) scale = std::max(scale, std::abs(v));
        CHECK(max_abs_diff(f, back) < 1e-12 * scale);
    }
}

TEST_CASE("synthesis then analysis recovers a conjugate-symmetric spectrum") {
    const Grid grid(32);
    SpectralField f(grid);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int n = grid.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ci = (n - i) % n, cj = (n - j) % n;
            if (std::make_pair(i, j) > std::make_pair(ci, cj)) continue;
            const bool self = i == ci && j == cj;
            const std::complex<double> c(unif(rng), self ? 0.0 : unif(rng));
            f.at(i, j) = c;
            f.at(ci, cj) = std::conj(c);
        }
    const SpectralField back = forward(inverse(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i)
        worst = std::max(worst, std::abs(back.c[i] - f.c[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("apply_multiplier") {
    const Grid grid(64);
    const RealField f = random_field(grid, 7);
    const SpectralField fh = forward(f);

    SUBCASE("unit symbol is the identity") {
        const SpectralField out = apply_multiplier(fh, [](double) { return 1.0; }, 1.0);
        CHECK(max_abs_diff(inverse(out), f) < 1e-12);
    }
    SUBCASE("|k| = 1 eigenmode is unchanged by the half-Laplacian symbol") {
        const RealField s = sample(grid, [](double x, double) { return std::sin(x); });
        const SpectralField out = apply_multiplier(forward(s), [](double k) { return k; }, 0.0);
        CHECK(max_abs_diff(inverse(out), s) < 1e-12);
    }
    SUBCASE("log-damped symbol scales the |k| = 1 mode by 1/log 11") {
        const DissipationSymbol p(1.0);
        const RealField s = sample(grid, [](double x, double) { return std::sin(x); });
        const RealField out = inverse(apply_multiplier(forward(s), [&](double k) { return p(k); }, 0.0));
        const double expected = 1.0 / std::log(11.0);
        for (int i = 0; i < grid.n(); ++i)
            for (int j = 0; j < grid.n(); ++j)
                CHECK(out.at(i, j) ==
                      doctest::Approx(expected * std::sin(i * grid.dx())).epsilon(1e-10));
    }
    SUBCASE("non-finite symbol raises a domain error") {
        CHECK_THROWS_AS(
            apply_multiplier(fh, [](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0),
            std::domain_error);
    }
}

TEST_CASE("velocity law") {
    const Grid grid(64);

    SUBCASE("sin(x1) with unit multiplier gives (0, cos x1)") {
        const RealField s = sample(grid, [](double x, double) { return std::sin(x); });
        const VectorField u = compute_velocity(forward(s), VelocityMultiplier(0.0));
        const RealField expected = sample(grid, [](double x, double) { return std::cos(x); });
        CHECK(max_abs_diff(u.x2, expected) < 1e-12);
        double u1max = 0.0;
        for (const double v : u.x1.v) u1max = std::max(u1max, std::abs(v));
        CHECK(u1max < 1e-12);
    }
    SUBCASE("velocity is divergence-free to spectral precision") {
        for (int trial = 0; trial < 5; ++trial) {
            const RealField f = random_field(grid, 400 + trial);
            const VectorField u = compute_velocity(forward(f), VelocityMultiplier(0.7));
            const SpectralField u1 = forward(u.x1), u2 = forward(u.x2);
            double div_max = 0.0, u_max = 0.0;
            for (int i = 0; i < grid.n(); ++i) {
                const double k1 = grid.freq(i);
                for (int j = 0; j < grid.n(); ++j) {
                    const double k2 = grid.freq(j);
                    div_max = std::max(div_max,
                                       std::abs(k1 * u1.at(i, j) + k2 * u2.at(i, j)));
                    u_max = std::max({u_max, std::abs(u1.at(i, j)), std::abs(u2.at(i, j))});
                }
            }
            CHECK(div_max < 1e-12 * u_max);
        }
    }
    SUBCASE("constant field carries no velocity") {
        RealField c(grid);
        for (auto& v : c.v) v = 3.7;
        const VectorField u = compute_velocity(forward(c), VelocityMultiplier(1.0));
        CHECK(linf_norm(u) == 0.0);
    }
}

TEST_CASE("spectral gradient is exact on resolved trigonometric fields") {
    const Grid grid(64);
    SUBCASE("sin(x1)") {
        const VectorField g =
            gradient(forward(sample(grid, [](double x, double) { return std::sin(x); })));
        CHECK(max_abs_diff(g.x1, sample(grid, [](double x, double) { return std::cos(x); })) <
              1e-12);
        CHECK(linf_norm(g.x2) < 1e-12);
    }
    SUBCASE("constant") {
        RealField c(grid);
        for (auto& v : c.v) v = -2.0;
        const VectorField g = gradient(forward(c));
        CHECK(linf_norm(g.x1) < 1e-14);
        CHECK(linf_norm(g.x2) < 1e-14);
    }
    SUBCASE("sin(x1 + 2 x2)") {
        const VectorField g = gradient(
            forward(sample(grid, [](double x, double y) { return std::sin(x + 2 * y); })));
        CHECK(max_abs_diff(g.x1, sample(grid, [](double x, double y) {
                  return std::cos(x + 2 * y);
              })) < 1e-11);
        CHECK(max_abs_diff(g.x2, sample(grid, [](double x, double y) {
                  return 2.0 * std::cos(x + 2 * y);
              })) < 1e-11);
    }
}

TEST_CASE("dealiasing implements the 2/3 rule and is idempotent") {
    const Grid grid(64);
    SUBCASE("low modes unchanged") {
        const RealField s =
            sample(grid, [](double x, double y) { return std::sin(3 * x) + std::cos(5 * y); });
        const SpectralField out = dealias(forward(s));
        CHECK(max_abs_diff(inverse(out), s) < 1e-12);
    }
    SUBCASE("top mode removed") {
        SpectralField f(grid);
        f.at(32, 0) = 1.0;  // k1 = n/2
        const SpectralField out = dealias(f);
        for (const auto& c : out.c) CHECK(std::abs(c) == 0.0);
    }
    SUBCASE("idempotent") {
        const SpectralField once = dealias(forward(random_field(grid, 9)));
        const SpectralField twice = dealias(once);
        for (std::size_t i = 0; i < once.c.size(); ++i) CHECK(once.c[i] == twice.c[i]);
    }
}

TEST_CASE("pointwise dissipation functional") {
    const Grid grid(32);
    const RadialKernel kern(0.0);
    const double delta = grid.dx();

    SUBCASE("constant gradient field gives identically zero") {
        VectorField g(grid);
        for (auto& v : g.x1.v) v = 1.5;
        for (auto& v : g.x2.v) v = -0.5;
        const RealField d = pointwise_dissipation_D(g, kern, delta);
        for (const double v : d.v) CHECK(v == 0.0);
    }
    SUBCASE("matches the brute-force double sum pointwise") {
        VectorField g(grid);
        g.x1 = sample(grid, [](double x, double y) { return std::sin(x) * std::cos(2 * y); });
        g.x2 = sample(grid, [](double, double y) { return std::cos(2 * y); });
        const RealField d = pointwise_dissipation_D(g, kern, delta);
        const RealField bf = brute_force_dissipation({&g.x1, &g.x2}, kern, delta);
        double ref = 0.0;
        for (const double v : bf.v) ref = std::max(ref, std::abs(v));
        CHECK(max_abs_diff(d, bf) < 1e-8 * ref);

        double lhs = 0.0, rhs = 0.0;
        const double cell = grid.dx() * grid.dx();
        for (const double v : d.v) lhs += v * cell;
        for (const double v : bf.v) rhs += v * cell;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
    SUBCASE("spectral identity for the total dissipation against the lattice symbol") {
        VectorField g(grid);
        g.x1 = sample(grid, [](double x, double y) { return std::sin(2 * x + y); });
        g.x2 = sample(grid, [](double, double y) { return std::cos(3 * y); });
        const RealField d = pointwise_dissipation_D(g, kern, delta);
        const double cell = grid.dx() * grid.dx();
        double lhs = 0.0;
        for (const double v : d.v) lhs += v * cell;

        const std::vector<double> p_num = discrete_dissipation_symbol(grid, kern, delta);
        const SpectralField g1 = forward(g.x1), g2 = forward(g.x2);
        double rhs = 0.0;
        for (std::size_t i = 0; i < p_num.size(); ++i)
            rhs += p_num[i] * (std::norm(g1.c[i]) + std::norm(g2.c[i]));
        rhs *= 2.0 * kTwoPi * kTwoPi;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
    SUBCASE("values are nonnegative after the roundoff clamp") {
        VectorField g(grid);
        g.x1 = random_field(grid, 55);
        g.x2 = random_field(grid, 56);
        const RealField d = pointwise_dissipation_D(g, kern, delta);
        for (const double v : d.v) CHECK(v >= 0.0);
    }
    SUBCASE("grid convergence of D for a smooth field") {
        const Grid coarse(64), fine(128);
        const auto theta = [](double x, double) { return std::sin(x); };
        const RealField dc = pointwise_dissipation_D(
            gradient(forward(sample(coarse, theta))), kern, coarse.dx());
        const RealField df = pointwise_dissipation_D(
            gradient(forward(sample(fine, theta))), kern, fine.dx());
        double worst = 0.0;
        for (int i = 0; i < coarse.n(); ++i)
            for (int j = 0; j < coarse.n(); ++j) {
                const double a = dc.at(i, j);
                const double b = df.at(2 * i, 2 * j);
                worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-12));
            }
        CHECK(worst < 0.10);
    }
    SUBCASE("delta below dx/2 is a configuration error") {
        VectorField g(grid);
        CHECK_THROWS_AS(pointwise_dissipation_D(g, kern, grid.dx() * 0.25),
                        std::invalid_argument);
    }
}

TEST_CASE("finite-difference dissipation functional") {
    const Grid grid(32);
    const RadialKernel kern(0.3);
    const double delta = grid.dx();

    SUBCASE("constant field and zero shift vanish") {
        RealField c(grid);
        for (auto& v : c.v) v = 2.0;
        const RealField d0 = pointwise_dissipation_Dh(c, kTwoPi / 32, 0.0, kern, delta);
        for (const double v : d0.v) CHECK(v == 0.0);

        const RealField s = sample(grid, [](double x, double y) { return std::sin(x + y); });
        const RealField dz = pointwise_dissipation_Dh(s, 0.0, 0.0, kern, delta);
        for (const double v : dz.v) CHECK(v == 0.0);
    }
    SUBCASE("half-period shift of sin(x1) equals four times the scalar functional") {
        const RealField s = sample(grid, [](double x, double) { return std::sin(x); });
        const double pi = kTwoPi / 2.0;
        const RealField dh = pointwise_dissipation_Dh(s, pi, 0.0, kern, delta);
        VectorField scalar(grid);
        scalar.x1 = s;
        const RealField d = pointwise_dissipation_D(scalar, kern, delta);
        double worst = 0.0;
        for (std::size_t i = 0; i < dh.v.size(); ++i)
            worst = std::max(worst,
                             std::abs(dh.v[i] - 4.0 * d.v[i]) /
                                 std::max(4.0 * d.v[i], 1e-30));
        CHECK(worst < 1e-10);
    }
    SUBCASE("doubling the field quadruples the functional") {
        const RealField s = random_field(grid, 77);
        RealField s2 = s;
        for (auto& v : s2.v) v *= 2.0;
        const double h = 3 * grid.dx();
        const RealField d1 = pointwise_dissipation_Dh(s, h, h, kern, delta);
        const RealField d2 = pointwise_dissipation_Dh(s2, h, h, kern, delta);
        for (std::size_t i = 0; i < d1.v.size(); ++i)
            CHECK(d2.v[i] == doctest::Approx(4.0 * d1.v[i]).epsilon(1e-12));
    }
    SUBCASE("off-grid shifts are rejected") {
        const RealField s = random_field(grid, 78);
        CHECK_THROWS_AS(pointwise_dissipation_Dh(s, grid.dx() * 0.5, 0.0, kern, delta),
                        std::domain_error);
    }
}

TEST_CASE("discrete dissipation symbol is nonnegative with zero mean mode") {
    const Grid grid(32);
    const auto p = discrete_dissipation_symbol(grid, RadialKernel(0.5), grid.dx());
    CHECK(p[0] == 0.0);
    for (const double v : p) CHECK(v >= 0.0);
}
