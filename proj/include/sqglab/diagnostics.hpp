#pragma once

// Proof-side measurements over field snapshots: norms, the modulus-of-
// continuity audit and breakthrough search, the nonlinear-maximum-principle
// radius and empirical constant fit, the spectral dissipation functional,
// and the closed-form gradient-bound calculator.

#include <cstdint>
#include <stdexcept>

#include "sqglab/spectral_core.hpp"

namespace sqg {

struct DiagnosticsRecord {
    double time = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    double grad_linf = 0.0;
    double blowup_integral = 0.0;
    double moc_ratio = 0.0;
    double total_dissipation = 0.0;
};

double linf_norm(const RealField& f);
double l2_norm(const RealField& f);              // sqrt(dx^2 sum f^2)
double linf_norm(const VectorField& f);          // max pointwise magnitude
double grad_linf_norm(const SpectralField& f);   // |grad theta| in L-inf

// Moduli of continuity enter the audits as plain radial callables so test
// profiles (e.g. the Lipschitz omega(r) = r) can be used alongside the log
// family.
using MocFn = std::function<double(double)>;

struct Shift {
    int cx = 0, cy = 0;   // cells
    double length = 0.0;  // physical |h|
};

struct ShiftRatio {
    Shift shift;
    double max_ratio = 0.0;
    int arg_ix = 0, arg_iy = 0;
};

struct MocReport {
    double m_est = 0.0;  // sup over shifts and points of |delta_h theta| / omega(|h|)
    Shift argmax_shift;
    int argmax_ix = 0, argmax_iy = 0;
    std::vector<ShiftRatio> table;
};

// Axis and diagonal shifts at dyadic cell counts 2^j, j = 0..j_max
// (default: largest j with 2^j <= n/4).
std::vector<Shift> dyadic_shift_set(const Grid& grid, int j_max = -1);

MocReport moc_ratio(const RealField& theta, const MocFn& omega,
                    const std::vector<Shift>& shifts);

// Exhaustive all-pairs oracle with minimum-image distances; n <= 64 only.
double moc_ratio_exhaustive(const RealField& theta, const MocFn& omega);

struct Breakthrough {
    double margin = 0.0;  // max |delta_h theta| - M omega(|h|); positive = breakthrough
    Shift shift;
    int ix = 0, iy = 0;
};

Breakthrough breakthrough_search(const RealField& theta, const MocFn& omega,
                                 double m_amplitude, const std::vector<Shift>& shifts);

class RangeError : public std::runtime_error {
public:
    RangeError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), achievable_lo(lo), achievable_hi(hi) {}
    double achievable_lo;
    double achievable_hi;
};

// Solves amplitude * omega(R) / R = grad_linf / c1 for R by bisection on
// (r_lo, r_hi), to 1e-10 relative. The default bracket runs to the torus
// half-width; a capped modulus keeps omega(R)/R strictly decreasing there.
// Throws RangeError (naming the achievable interval) when the target is not
// bracketed or the profile is degenerate.
double nlmp_radius(double grad_linf, const MocFn& omega, double amplitude, double c1,
                   double r_lo = 1e-12, double r_hi = kTwoPi / 2.0);

struct NlmpFitReport {
    double ratio_min = 0.0;   // D(x) / (|grad theta(x)|^2 k(R(x)))
    double ratio_median = 0.0;
    double ratio_max = 0.0;
    double c2_empirical = 0.0;  // ratio_min / 4
    std::size_t points_used = 0;
    std::size_t points_excluded = 0;  // radius solve fell outside its range
    bool degenerate = false;          // gradient flat; ratios carry no signal
};

// Fits the dissipation lower-bound constant at large-gradient points (above
// the given percentile of |grad theta|).
NlmpFitReport fit_nlmp_constant(const RealField& d_field, const VectorField& grad_field,
                                const RadialKernel& kernel, const MocFn& omega,
                                double amplitude, double c1, double percentile = 0.90);

struct BoundReport {
    double beta = 0.0;
    double c = 0.0;
    double c_outer = 0.0;
    double r0 = 0.0;  // -log r0 = c beta |theta0|_inf
    double r1 = 0.0;  // amplitude M omega(r1) reaches the scheme's fixed level
    double m_amplitude = 0.0;  // M = 2 (c beta)^beta |theta0|_inf^(1+beta)
    double bound_exponential = 0.0;         // single-exponential gradient bound
    double bound_double_exponential = 0.0;  // classical double-exponential comparator
};

// Requires theta0_linf >= 1; smaller data should be rescaled first.
BoundReport gradient_bound(double theta0_linf, double theta0_grad_linf, double beta,
                           double c = 1.0, double c_outer = 1.0);

// 2 (2pi)^2 sum_k P(|k|) |theta-hat(k)|^2 with the trig-coefficient
// normalization (so |theta|_L2^2 = (2pi)^2 sum |theta-hat|^2).
double total_dissipation(const SpectralField& theta, const DissipationSymbol& p);

std::string moc_report_to_json(const MocReport& rep);
std::string bound_report_to_json(const BoundReport& rep);

}  // namespace sqg
