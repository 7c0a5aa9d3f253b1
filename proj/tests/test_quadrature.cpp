#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqglab/quadrature.hpp"

using namespace sqg;

TEST_CASE("integrate handles the basic improper and proper cases") {
    SUBCASE("rho^-2 from 0.1 to infinity") {
        const auto res = integrate([](double r) { return 1.0 / (r * r); }, 0.1, kInf, 1e-8);
        CHECK(res.value == doctest::Approx(10.0).epsilon(1e-6));
        CHECK(res.evaluations > 0);
        CHECK(res.abs_error >= 0.0);
    }
    SUBCASE("constant over [0, 0.3]") {
        const auto res = integrate([](double) { return 1.0; }, 0.0, 0.3, 1e-8);
        CHECK(res.value == doctest::Approx(0.3).epsilon(1e-7));
    }
    SUBCASE("log-singular kernel integrand vs brute-force Riemann sum") {
        const auto f = [](double r) { return 1.0 / (r * std::log(10.0 + 1.0 / r)); };
        // midpoint rule in the log variable, 1e7 points
        const long n = 10'000'000;
        const double slo = std::log(0.01), shi = std::log(1.0);
        const double ds = (shi - slo) / n;
        double oracle = 0.0;
        for (long i = 0; i < n; ++i) {
            const double rho = std::exp(slo + (i + 0.5) * ds);
            oracle += f(rho) * rho * ds;
        }
        const auto res = integrate(f, 0.01, 1.0, 1e-9);
        CHECK(res.value == doctest::Approx(oracle).epsilon(1e-4));
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 1e-15),
                        std::invalid_argument);
        CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 2.0, 1.0, 1e-6),
                        std::invalid_argument);
    }
}

TEST_CASE("integrate meets rel_tol on the power family over [r, 1]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pdist(-1.9, 2.0), rdist(-6.0, -0.3);
    for (int trial = 0; trial < 40; ++trial) {
        const double p = pdist(rng);
        const double r = std::pow(10.0, rdist(rng));
        const double rel_tol = trial % 2 == 0 ? 1e-6 : 1e-10;
        const double truth = std::abs(p + 1.0) < 1e-12
                                 ? -std::log(r)
                                 : (1.0 - std::pow(r, p + 1.0)) / (p + 1.0);
        const auto res = integrate([p](double x) { return std::pow(x, p); }, r, 1.0, rel_tol);
        CHECK(std::abs(res.value - truth) <= rel_tol * std::abs(truth) * 1.01);
    }
}

TEST_CASE("integrate is linear within the summed error estimates") {
    const auto f = [](double x) { return std::exp(-x) / std::sqrt(x); };
    const auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    const double a = 3.25, b = -1.5;
    const auto rf = integrate(f, 0.0, 5.0, 1e-9);
    const auto rg = integrate(g, 0.0, 5.0, 1e-9);
    const auto rc = integrate([&](double x) { return a * f(x) + b * g(x); }, 0.0, 5.0, 1e-9);
    const double budget = 2.0 * (std::abs(a) * rf.abs_error + std::abs(b) * rg.abs_error +
                                 rc.abs_error);
    CHECK(std::abs(rc.value - (a * rf.value + b * rg.value)) <= budget + 1e-14);
}

TEST_CASE("integrate reports non-convergence with a partial value") {
    bool threw = false;
    try {
        integrate([](double x) { return std::sin(1e7 / x); }, 1e-4, 1.0, 1e-10, 2000);
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(e.partial.evaluations >= 2000);
        CHECK(std::isfinite(e.partial.value));
    }
    CHECK(threw);
}

TEST_CASE("integral inequality suite: closed-form spot checks") {
    SUBCASE("item (i) at r = 0.1 for the critical kernel") {
        const SymbolTriple triple(0.0, 0.0, 1.0);
        const auto reports = verify_integral_estimates(triple, 0.5, {0.1}, 0.15);
        REQUIRE(reports.size() == 5);
        const auto& item_i = reports[0];
        REQUIRE(item_i.item == "i");
        REQUIRE(item_i.samples.size() == 1);
        CHECK(item_i.samples[0].lhs == doctest::Approx(10.0).epsilon(1e-6));
        CHECK(item_i.samples[0].rhs == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(item_i.verdict == Verdict::Pass);
    }
    SUBCASE("item (iv) at r = 0.2 for the critical pair") {
        const SymbolTriple triple(0.0, 0.0, 1.0);
        const auto reports = verify_integral_estimates(triple, 0.5, {0.2}, 0.3);
        const auto& item_iv = reports[3];
        REQUIRE(item_iv.item == "iv");
        CHECK(item_iv.samples[0].lhs == doctest::Approx(0.2).epsilon(1e-6));
        CHECK(item_iv.samples[0].rhs == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(item_iv.verdict == Verdict::Pass);
    }
}

TEST_CASE("integral inequality suite passes for the supercritical example family") {
    const SymbolTriple triple(0.3, 0.3, 0.8);
    std::vector<double> samples;
    for (int j = 8; j <= 20; ++j) samples.push_back(std::ldexp(1.0, -j));
    const auto reports = verify_integral_estimates(triple, 0.5, samples);
    REQUIRE(reports.size() == 5);
    for (const auto& rep : reports) {
        CAPTURE(rep.item);
        CHECK(rep.verdict == Verdict::Pass);
        if (rep.fitted_constant) {
            CHECK(std::isfinite(*rep.fitted_constant));
            CHECK(*rep.fitted_constant > 0.0);
        }
    }
}

TEST_CASE("item (i) with its explicit constant holds for any alpha1 in [0, 1]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const SymbolTriple triple(unif(rng), 0.0, 1.0);
        std::vector<double> samples;
        for (int j = 8; j <= 16; j += 2) samples.push_back(std::ldexp(1.0, -j));
        const auto reports = verify_integral_estimates(triple, 0.5, samples);
        CHECK(reports[0].verdict == Verdict::Pass);
    }
}

TEST_CASE("sample radii outside the smallness threshold are rejected") {
    const SymbolTriple triple(0.0, 0.0, 1.0);
    CHECK_THROWS_AS(verify_integral_estimates(triple, 0.5, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(verify_integral_estimates(triple, 1.5, {0.01}), std::invalid_argument);
    CHECK_THROWS_AS(verify_integral_estimates(triple, 0.5, {}), std::invalid_argument);
}

TEST_CASE("kernel bound reconstruction") {
    SUBCASE("critical velocity kernel matches the exact magnitude") {
        const auto rep = kernel_bound_check(VelocityMultiplier(0.0), 1024);
        CHECK(rep.verdict == Verdict::Pass);
        REQUIRE(rep.find("riesz_magnitude") != nullptr);
        CHECK(*rep.find("riesz_magnitude")->fitted < 0.10);
        CHECK(rep.find("grid_stability")->verdict == Verdict::Pass);
    }
    SUBCASE("critical dissipation symbol satisfies the lower bound") {
        const auto rep = kernel_bound_check(DissipationSymbol(0.0), 1024);
        CHECK(rep.verdict == Verdict::Pass);
        REQUIRE(rep.find("lower_bound") != nullptr);
        CHECK(*rep.find("lower_bound")->fitted > 0.0);
    }
    SUBCASE("log multiplier fits are finite and grid stable") {
        const auto rep = kernel_bound_check(VelocityMultiplier(0.5), 1024);
        CHECK(rep.verdict == Verdict::Pass);
        CHECK(std::isfinite(*rep.find("upper_bound")->fitted));
        CHECK(rep.find("grid_stability")->verdict == Verdict::Pass);
    }
    SUBCASE("resolution below 1024 is a configuration error") {
        CHECK_THROWS_AS(kernel_bound_check(DissipationSymbol(0.0), 512),
                        std::invalid_argument);
    }
}
