#pragma once

// Time integration of the slightly supercritical SQG equation
//   d_t theta + u . grad theta + L theta = 0,   u = perp-grad Lambda^-1 m(Lambda) theta
// on the periodic grid: the dissipation symbol P is integrated exactly via
// exp(-P dt) and the transport term with a Heun predictor-corrector
// (second order). The accumulated integral of |grad theta|_inf is tracked
// as the continuation criterion of the local theory.

#include <cstdint>
#include <optional>
#include <string>

#include "sqglab/diagnostics.hpp"
#include "sqglab/symbols.hpp"

namespace sqg {

struct SimState {
    double time = 0.0;
    SpectralField theta_hat;
    double blowup_integral = 0.0;  // int_0^t |grad theta|_inf, nondecreasing

    // Velocity of theta_hat, filled on first use within a step.
    mutable std::optional<VectorField> velocity;

    explicit SimState(SpectralField t) : theta_hat(std::move(t)) {}
};

struct StepperConfig {
    SymbolTriple symbols;
    double cfl_factor = 0.5;  // in (0, 1]
    double dt_max = 0.05;
    bool dealias_enabled = true;
    bool transport_enabled = true;  // disabled: pure-dissipation evolution
    double grad_ceiling = 1e6;      // |grad theta|_inf above this aborts

    explicit StepperConfig(SymbolTriple s) : symbols(std::move(s)) {}
};

class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& msg, SimState last)
        : std::runtime_error(msg), last_state(std::move(last)) {}
    SimState last_state;
};

// dt = min(dt_max, cfl dx / max(|u|_inf, 1e-12)).
double cfl_dt(const SimState& state, const StepperConfig& config);

// One ETD-Heun step. Throws BlowupError carrying the last finite state when
// the field leaves the finite range or the gradient ceiling is exceeded.
SimState step(const SimState& state, double dt, const StepperConfig& config);

// ----------------------------------------------------------------------
// Initial-data library
// ----------------------------------------------------------------------

struct InitialData {
    // "single_mode"   amp sin(kx x1 + ky x2 + phase)
    // "mode_product"  amp sin(kx x1) sin(ky x2)
    // "benchmark"     amp (sin x1 sin x2 + cos x2)
    // "random_band"   seeded random field with modes in [kmin, kmax], |.|_inf = amp
    // "steep_front"   amp tanh((x2 - pi)/width) exp((cos x1 - 1)/bump_width^2)
    std::string kind = "benchmark";
    double amplitude = 1.0;
    int kx = 1, ky = 0;
    double phase = 0.0;
    int kmin = 1, kmax = 8;
    std::uint64_t seed = 0;
    double width = 0.2, bump_width = 1.0;
};

RealField make_initial_data(const Grid& grid, const InitialData& data);

// ----------------------------------------------------------------------
// Scenario runner
// ----------------------------------------------------------------------

struct Scenario {
    int grid_n = 128;
    double alpha1 = 0.0, alpha2 = 0.0, beta = 1.0;
    double r_cap = ModulusOfContinuity::kDefaultRCap;
    InitialData theta0;
    double t_end = 1.0;
    double cfl_factor = 0.5;
    double dt_max = 0.05;
    double record_dt = 0.1;
    double snapshot_dt = 0.0;  // 0 disables snapshots
    bool dealias_enabled = true;
    bool transport_enabled = true;
    double grad_ceiling = 1e6;
    int moc_shift_jmax = -1;  // shift set for the per-record audit
    std::string out_dir;      // empty: keep records in memory only
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<std::string> files_written;  // names relative to out_dir
    bool blew_up = false;
    std::string message;
};

// Steps to t_end under the CFL limit, emitting one diagnostics row per
// record interval (and the initial row), snapshots per snapshot interval.
// Deterministic for a fixed scenario. On blow-up the partial trajectory is
// preserved on disk and in the result.
RunResult run(const Scenario& scenario);

inline const char* kDiagnosticsHeader =
    "time,linf,l2,grad_linf,blowup_integral,moc_ratio,total_dissipation";

}  // namespace sqg
