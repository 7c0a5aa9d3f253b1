#include "sqglab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "sqglab/snapshot_io.hpp"

namespace sqg {

namespace {

const VectorField& velocity_of(const SimState& state, const StepperConfig& cfg) {
    if (!state.velocity)
        state.velocity = compute_velocity(state.theta_hat, cfg.symbols.multiplier);
    return *state.velocity;
}

// N(theta) = -dealias(u . grad theta), evaluated pseudo-spectrally; the mean
// coefficient stays zero since the transport term is in divergence form.
SpectralField nonlinear_term(const SpectralField& theta_hat, const VectorField* u,
                             const StepperConfig& cfg, double* grad_linf_out) {
    const VectorField g = gradient(theta_hat);
    if (grad_linf_out) *grad_linf_out = linf_norm(g);
    if (!cfg.transport_enabled || u == nullptr) return SpectralField(theta_hat.grid);

    RealField prod(theta_hat.grid);
    for (std::size_t i = 0; i < prod.v.size(); ++i)
        prod.v[i] = u->x1.v[i] * g.x1.v[i] + u->x2.v[i] * g.x2.v[i];
    SpectralField n_hat = forward(prod);
    if (cfg.dealias_enabled) n_hat = dealias(n_hat);
    for (auto& c : n_hat.c) c = -c;
    n_hat.c[0] = 0.0;
    return n_hat;
}

std::vector<double> exp_dissipation_factors(const Grid& grid, const DissipationSymbol& p,
                                            double dt) {
    const int n = grid.n();
    std::vector<double> e(grid.size());
    for (int i = 0; i < n; ++i) {
        const double k1 = grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = grid.freq(j);
            e[static_cast<std::size_t>(i) * n + j] = std::exp(-p(std::hypot(k1, k2)) * dt);
        }
    }
    return e;
}

}  // namespace

double cfl_dt(const SimState& state, const StepperConfig& config) {
    if (!(config.cfl_factor > 0.0 && config.cfl_factor <= 1.0))
        throw std::invalid_argument("cfl_dt: cfl_factor must lie in (0, 1]");
    if (!(config.dt_max > 0.0)) throw std::invalid_argument("cfl_dt: dt_max must be > 0");
    double u_linf = 0.0;
    if (config.transport_enabled) u_linf = linf_norm(velocity_of(state, config));
    return std::min(config.dt_max,
                    config.cfl_factor * state.theta_hat.grid.dx() / std::max(u_linf, 1e-12));
}

SimState step(const SimState& state, double dt, const StepperConfig& config) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

    double grad_linf = 0.0;
    const VectorField* u = config.transport_enabled ? &velocity_of(state, config) : nullptr;
    const SpectralField n1 = nonlinear_term(state.theta_hat, u, config, &grad_linf);
    if (grad_linf > config.grad_ceiling)
        throw BlowupError("blow-up: |grad theta|_inf = " + std::to_string(grad_linf) +
                              " exceeds ceiling at t = " + std::to_string(state.time),
                          state);

    const std::vector<double> efac =
        exp_dissipation_factors(state.theta_hat.grid, config.symbols.symbol, dt);
    const std::size_t sz = state.theta_hat.grid.size();

    SpectralField predictor(state.theta_hat.grid);
    for (std::size_t i = 0; i < sz; ++i)
        predictor.c[i] = efac[i] * (state.theta_hat.c[i] + dt * n1.c[i]);

    VectorField u_star(state.theta_hat.grid);
    if (config.transport_enabled)
        u_star = compute_velocity(predictor, config.symbols.multiplier);
    const SpectralField n2 = nonlinear_term(
        predictor, config.transport_enabled ? &u_star : nullptr, config, nullptr);

    SpectralField next(state.theta_hat.grid);
    bool finite = true;
    for (std::size_t i = 0; i < sz; ++i) {
        next.c[i] = efac[i] * state.theta_hat.c[i] +
                    0.5 * dt * (efac[i] * n1.c[i] + n2.c[i]);
        finite = finite && std::isfinite(next.c[i].real()) && std::isfinite(next.c[i].imag());
    }
    if (!finite)
        throw BlowupError("blow-up: non-finite field after step at t = " +
                              std::to_string(state.time),
                          state);

    SimState out(std::move(next));
    out.time = state.time + dt;
    out.blowup_integral = state.blowup_integral + dt * grad_linf;
    return out;
}

// ----------------------------------------------------------------------
// Initial-data library
// ----------------------------------------------------------------------

RealField make_initial_data(const Grid& grid, const InitialData& data) {
    const int n = grid.n();
    const double dx = grid.dx();
    RealField f(grid);

    if (!(std::isfinite(data.amplitude)))
        throw std::invalid_argument("theta0.amplitude must be finite");

    if (data.kind == "single_mode") {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f.at(i, j) = data.amplitude *
                             std::sin(data.kx * i * dx + data.ky * j * dx + data.phase);
    } else if (data.kind == "mode_product") {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f.at(i, j) = data.amplitude * std::sin(data.kx * i * dx) *
                             std::sin(data.ky * j * dx);
    } else if (data.kind == "benchmark") {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f.at(i, j) = data.amplitude *
                             (std::sin(i * dx) * std::sin(j * dx) + std::cos(j * dx));
    } else if (data.kind == "random_band") {
        if (!(data.kmin >= 1 && data.kmax >= data.kmin && data.kmax <= n / 2))
            throw std::invalid_argument("theta0: need 1 <= kmin <= kmax <= n/2");
        std::mt19937_64 rng(data.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        SpectralField hat(grid);
        const auto idx_of = [n](int k) { return k >= 0 ? k : k + n; };
        for (int k1 = 0; k1 <= data.kmax; ++k1) {
            for (int k2 = -data.kmax; k2 <= data.kmax; ++k2) {
                if (k1 == 0 && k2 <= 0) continue;  // half plane; conjugates fill the rest
                const double kk = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
                if (kk < data.kmin - 1e-9 || kk > data.kmax + 1e-9) continue;
                const double a = gauss(rng);
                const double b = gauss(rng);
                const std::complex<double> c(0.5 * a, -0.5 * b);
                hat.at(idx_of(k1), idx_of(k2)) = c;
                hat.at(idx_of(-k1), idx_of(-k2)) = std::conj(c);
            }
        }
        f = inverse(hat);
        const double peak = linf_norm(f);
        if (peak > 0.0)
            for (auto& v : f.v) v *= data.amplitude / peak;
    } else if (data.kind == "steep_front") {
        if (!(data.width > 0.0 && data.bump_width > 0.0))
            throw std::invalid_argument("theta0: width and bump_width must be positive");
        const double pi = kTwoPi / 2.0;
        const double bw2 = data.bump_width * data.bump_width;
        for (int i = 0; i < n; ++i) {
            const double bump = std::exp((std::cos(i * dx) - 1.0) / bw2);
            for (int j = 0; j < n; ++j)
                f.at(i, j) =
                    data.amplitude * std::tanh((j * dx - pi) / data.width) * bump;
        }
    } else {
        throw std::invalid_argument("theta0.kind: unknown kind '" + data.kind + "'");
    }
    return f;
}

// ----------------------------------------------------------------------
// Scenario runner
// ----------------------------------------------------------------------

namespace {

std::string csv_row(const DiagnosticsRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.time,
                  r.linf, r.l2, r.grad_linf, r.blowup_integral, r.moc_ratio,
                  r.total_dissipation);
    return buf;
}

}  // namespace

RunResult run(const Scenario& sc) {
    if (!(sc.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (!(sc.record_dt > 0.0)) throw std::invalid_argument("record_dt must be > 0");
    if (!(sc.snapshot_dt >= 0.0)) throw std::invalid_argument("snapshot_dt must be >= 0");

    const Grid grid(sc.grid_n);
    const SymbolTriple symbols(sc.alpha1, sc.alpha2, sc.beta, sc.r_cap);
    StepperConfig cfg(symbols);
    cfg.cfl_factor = sc.cfl_factor;
    cfg.dt_max = sc.dt_max;
    cfg.dealias_enabled = sc.dealias_enabled;
    cfg.transport_enabled = sc.transport_enabled;
    cfg.grad_ceiling = sc.grad_ceiling;

    SpectralField theta_hat = forward(make_initial_data(grid, sc.theta0));
    if (cfg.dealias_enabled) theta_hat = dealias(theta_hat);
    SimState state(std::move(theta_hat));

    const std::vector<Shift> shifts = dyadic_shift_set(grid, sc.moc_shift_jmax);
    const MocFn omega = [moc = symbols.moc](double r) { return moc(r); };

    RunResult result;
    std::ofstream csv;
    if (!sc.out_dir.empty()) {
        std::filesystem::create_directories(sc.out_dir);
        csv.open(sc.out_dir + "/diagnostics.csv", std::ios::trunc);
        if (!csv) throw std::runtime_error("run: cannot open diagnostics.csv in " + sc.out_dir);
        csv << kDiagnosticsHeader << '\n';
        csv.flush();
        result.files_written.push_back("diagnostics.csv");
    }

    const auto emit_record = [&](const SimState& st) {
        const RealField theta = inverse(st.theta_hat);
        DiagnosticsRecord rec;
        rec.time = st.time;
        rec.linf = linf_norm(theta);
        rec.l2 = l2_norm(theta);
        rec.grad_linf = grad_linf_norm(st.theta_hat);
        rec.blowup_integral = st.blowup_integral;
        rec.moc_ratio = moc_ratio(theta, omega, shifts).m_est;
        rec.total_dissipation = total_dissipation(st.theta_hat, symbols.symbol);
        result.records.push_back(rec);
        if (csv.is_open()) {
            csv << csv_row(rec);
            csv.flush();
        }
    };

    int snap_index = 0;
    const auto emit_snapshot = [&](const SimState& st) {
        if (sc.out_dir.empty()) return;
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06d.sqgf", snap_index++);
        write_snapshot(sc.out_dir + "/" + name, inverse(st.theta_hat), st.time);
        result.files_written.emplace_back(name);
    };

    emit_record(state);
    if (sc.snapshot_dt > 0.0) emit_snapshot(state);

    long next_rec = 1;
    long next_snap = 1;
    constexpr double t_eps = 1e-12;
    while (state.time < sc.t_end - t_eps) {
        const double t_rec = next_rec * sc.record_dt;
        const double t_snap = sc.snapshot_dt > 0.0
                                  ? next_snap * sc.snapshot_dt
                                  : std::numeric_limits<double>::infinity();
        const double t_event = std::min({sc.t_end, t_rec, t_snap});
        const double dt =
            std::max(std::min(cfl_dt(state, cfg), t_event - state.time), 1e-12);
        try {
            state = step(state, dt, cfg);
        } catch (const BlowupError& e) {
            result.blew_up = true;
            result.message = e.what();
            break;
        }
        if (std::abs(state.time - t_rec) < 1e-9) {
            state.time = t_rec;
            emit_record(state);
            ++next_rec;
        }
        if (sc.snapshot_dt > 0.0 && std::abs(state.time - t_snap) < 1e-9) {
            state.time = t_snap;
            emit_snapshot(state);
            ++next_snap;
        }
    }
    if (!result.blew_up && !result.records.empty() &&
        result.records.back().time < sc.t_end - 1e-9) {
        state.time = sc.t_end;
        emit_record(state);
    }
    return result;
}

}  // namespace sqg
