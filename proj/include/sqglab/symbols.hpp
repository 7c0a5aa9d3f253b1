#pragma once

// Dissipation kernels, velocity multipliers, dissipation Fourier symbols and
// moduli of continuity from the logarithmic family
//
//   k(r) = 1 / (r (log(10 + 1/r))^a1)       dissipation kernel, physical side
//   m(z) = (log(10 + z))^a2                 velocity multiplier, Fourier side
//   P(z) = z (log(10 + z))^(-a1)            dissipation symbol, Fourier side
//   w(r) = (-log r)^(-b), capped at r_cap   modulus of continuity
//
// together with sampled checkers for the structural assumptions these objects
// must satisfy (monotonicity, doubling, Hörmander–Mikhlin bounds, supercritical
// trends) and for the criticality conditions that decide whether the family
// admits a conserved modulus of continuity.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sqg {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

// One named check inside a VerificationReport. `fitted` carries an empirically
// fitted constant (doubling constant, HM constant, detected threshold, slope)
// when the check produces one.
struct CheckItem {
    std::string name;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> fitted;
    std::string detail;
};

struct VerificationReport {
    Verdict verdict = Verdict::Inconclusive;  // Fail if any item fails
    std::vector<CheckItem> items;

    const CheckItem* find(const std::string& name) const;
    void finalize();  // derive overall verdict from items
};

// --------------------------------------------------------------------------
// Symbol family
// --------------------------------------------------------------------------

struct RadialKernel {
    double alpha1 = 0.0;  // >= 0

    explicit RadialKernel(double a1);
    double operator()(double r) const;  // throws std::domain_error for r <= 0
    double derivative(double r) const;  // closed-form k'(r), r > 0
};

struct VelocityMultiplier {
    double alpha2 = 0.0;  // >= 0

    explicit VelocityMultiplier(double a2);
    double operator()(double zeta) const;  // zeta >= 0; exactly 1 when alpha2 == 0
};

struct DissipationSymbol {
    double alpha1 = 0.0;

    explicit DissipationSymbol(double a1);
    double operator()(double zeta) const;  // P(0) = 0, nondecreasing
};

struct ModulusOfContinuity {
    double beta = 1.0;                     // > 0
    double r_cap = kDefaultRCap;           // in (0, 1); constant beyond the cap

    static constexpr double kDefaultRCap = 0.1353352832366127;  // e^-2

    explicit ModulusOfContinuity(double b, double cap = kDefaultRCap);
    double operator()(double r) const;   // 0 at r = 0, (-log r)^(-beta) on (0, r_cap]
    double derivative(double r) const;   // closed form on (0, r_cap), 0 beyond
};

struct SymbolTriple {
    RadialKernel kernel;
    VelocityMultiplier multiplier;
    DissipationSymbol symbol;
    ModulusOfContinuity moc;

    SymbolTriple(double alpha1, double alpha2, double beta,
                 double r_cap = ModulusOfContinuity::kDefaultRCap);

    std::string to_json() const;
    static SymbolTriple from_json(const std::string& text);
};

// --------------------------------------------------------------------------
// Sampled assumption checkers
// --------------------------------------------------------------------------

// Log-spaced grid helper: n points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Default audit grids. The supercritical trend for eps = 0.01 only turns
// around near r = exp(-alpha/eps), so the kernel grid reaches far below any
// physically meaningful scale on purpose.
std::vector<double> default_kernel_grid();      // 1e-150 .. 1e2
std::vector<double> default_multiplier_grid();  // 1e-150 .. 1e4

// Checks the structural kernel assumptions on a sampled grid: positivity,
// k nonincreasing, r^2 k nondecreasing, the doubling constant, and for
// eps in {0.1, 0.01} the supercritical trend of r^(1-eps) k(r).
// The profile is a free callable so pathological kernels can be injected.
VerificationReport check_kernel_assumptions(const std::function<double(double)>& k,
                                            const std::vector<double>& r_grid);
VerificationReport check_kernel_assumptions(const RadialKernel& k,
                                            const std::vector<double>& r_grid);

// Checks m >= 1, monotonicity, sampled Hörmander–Mikhlin constants at
// derivative orders 1 and 2 (central differences, step zeta * 1e-4), and the
// supercritical velocity trend of |z|^eps m(1/|z|).
VerificationReport check_multiplier_assumptions(const std::function<double(double)>& m,
                                                const std::vector<double>& zeta_grid);
VerificationReport check_multiplier_assumptions(const VelocityMultiplier& m,
                                                const std::vector<double>& zeta_grid);

// Evaluates the two criticality ratios on the dyadic sequence r = 2^-j,
// j = 4..40, and classifies each by the trend of its log-log slope over the
// last 20 points:
//   regularity_ratio :  m(1/r) w(r) / (r k(r))   -> 0  iff beta > alpha1+alpha2
//   conservation_ratio :  (m(1/r)/k(r)) w'(r)/w(r) -> 0  iff alpha1+alpha2 < 1
// plus the growth trend w(r)/r^gamma -> infinity for gamma = 0.5.
// A flat trend yields Inconclusive, not Fail.
VerificationReport check_criticality(const SymbolTriple& triple);

}  // namespace sqg
