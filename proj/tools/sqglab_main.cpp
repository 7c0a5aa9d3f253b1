// sqglab command line: scenario runs, symbol and lemma verification, MOC
// audits and gradient-bound calculation.
//
// Exit codes: 0 success, 1 configuration or verification failure, 2 blow-up
// detected (partial outputs are preserved).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqglab/diagnostics.hpp"
#include "sqglab/evolution.hpp"
#include "sqglab/quadrature.hpp"
#include "sqglab/scenario_io.hpp"
#include "sqglab/snapshot_io.hpp"
#include "sqglab/symbols.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json report_to_json(const sqg::VerificationReport& rep) {
    json items = json::array();
    for (const auto& it : rep.items) {
        json ji{{"name", it.name},
                {"verdict", sqg::to_string(it.verdict)},
                {"detail", it.detail}};
        ji["fitted"] = it.fitted ? json(*it.fitted) : json(nullptr);
        items.push_back(std::move(ji));
    }
    return json{{"verdict", sqg::to_string(rep.verdict)}, {"items", std::move(items)}};
}

void print_report(const std::string& title, const sqg::VerificationReport& rep) {
    std::cout << title << ": " << sqg::to_string(rep.verdict) << "\n";
    for (const auto& it : rep.items) {
        std::cout << "  [" << sqg::to_string(it.verdict) << "] " << it.name;
        if (it.fitted) std::cout << " (fitted " << *it.fitted << ")";
        std::cout << "\n";
    }
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            long seed_override, bool as_json) {
    sqg::Scenario sc = sqg::parse_scenario_json(slurp(config_path));
    if (!out_override.empty()) sc.out_dir = out_override;
    if (seed_override >= 0) sc.theta0.seed = static_cast<std::uint64_t>(seed_override);
    if (sc.out_dir.empty())
        throw std::invalid_argument("config: field 'out_dir' is required (or pass --out)");

    const sqg::RunResult result = sqg::run(sc);

    // Manifest: config echo plus content hashes of every data file. The
    // timestamp lives here and only here.
    json outputs;
    for (const auto& name : result.files_written)
        outputs[name] = sqg::git_blob_sha1(slurp(sc.out_dir + "/" + name));
    json manifest{{"config", json::parse(sqg::scenario_to_json(sc))},
                  {"outputs", std::move(outputs)},
                  {"status", result.blew_up ? "blowup" : "ok"},
                  {"completed_utc", utc_now()}};
    if (result.blew_up) manifest["message"] = result.message;
    std::ofstream mf(sc.out_dir + "/manifest.json", std::ios::trunc);
    mf << manifest.dump(2) << "\n";

    if (as_json) {
        json summary{{"records", result.records.size()},
                     {"files", result.files_written},
                     {"status", result.blew_up ? "blowup" : "ok"}};
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << "run: " << result.records.size() << " records, "
                  << result.files_written.size() << " files in " << sc.out_dir << "\n";
        if (result.blew_up) std::cout << "run aborted: " << result.message << "\n";
    }
    return result.blew_up ? 2 : 0;
}

int cmd_check_symbols(double alpha1, double alpha2, double beta, double r_cap,
                      bool as_json) {
    const sqg::SymbolTriple triple(alpha1, alpha2, beta, r_cap);
    const auto kernel_rep =
        sqg::check_kernel_assumptions(triple.kernel, sqg::default_kernel_grid());
    const auto mult_rep = sqg::check_multiplier_assumptions(triple.multiplier,
                                                            sqg::default_multiplier_grid());
    const auto crit_rep = sqg::check_criticality(triple);

    const bool any_fail = kernel_rep.verdict == sqg::Verdict::Fail ||
                          mult_rep.verdict == sqg::Verdict::Fail ||
                          crit_rep.verdict == sqg::Verdict::Fail;
    if (as_json) {
        json j{{"alpha1", alpha1},
               {"alpha2", alpha2},
               {"beta", beta},
               {"kernel", report_to_json(kernel_rep)},
               {"multiplier", report_to_json(mult_rep)},
               {"criticality", report_to_json(crit_rep)},
               {"verdict", any_fail ? "FAIL" : "PASS"}};
        std::cout << j.dump(2) << "\n";
    } else {
        print_report("kernel assumptions", kernel_rep);
        print_report("multiplier assumptions", mult_rep);
        print_report("criticality conditions", crit_rep);
    }
    return any_fail ? 1 : 0;
}

int cmd_verify_lemmas(double alpha1, double alpha2, double beta, double gamma, int jmin,
                      int jmax, bool as_json) {
    const sqg::SymbolTriple triple(alpha1, alpha2, beta);
    std::vector<double> samples;
    for (int j = jmin; j <= jmax; ++j) samples.push_back(std::ldexp(1.0, -j));
    const auto reports = sqg::verify_integral_estimates(triple, gamma, samples);
    bool any_fail = false;
    for (const auto& rep : reports) any_fail = any_fail || rep.verdict == sqg::Verdict::Fail;
    if (as_json) {
        std::cout << sqg::lemma_reports_to_json(reports) << "\n";
    } else {
        for (const auto& rep : reports) {
            std::cout << "item (" << rep.item << "): " << sqg::to_string(rep.verdict);
            if (rep.fitted_constant) std::cout << " (fitted C = " << *rep.fitted_constant << ")";
            std::cout << "\n";
        }
    }
    return any_fail ? 1 : 0;
}

int cmd_bounds(double theta0_linf, double grad_linf, double beta, double c,
               double c_outer, bool as_json) {
    const sqg::BoundReport rep =
        sqg::gradient_bound(theta0_linf, grad_linf, beta, c, c_outer);
    if (as_json) {
        std::cout << sqg::bound_report_to_json(rep) << "\n";
    } else {
        std::cout << "M = " << rep.m_amplitude << ", r0 = " << rep.r0 << ", r1 = " << rep.r1
                  << "\nexponential bound        = " << rep.bound_exponential
                  << "\ndouble-exponential bound = " << rep.bound_double_exponential << "\n";
    }
    return 0;
}

int cmd_moc_audit(const std::string& snapshot_path, double beta, double r_cap, double m,
                  int jmax, bool as_json) {
    const sqg::Snapshot snap = sqg::read_snapshot(snapshot_path);
    const sqg::ModulusOfContinuity moc(beta, r_cap);
    const auto omega = [&moc](double r) { return moc(r); };
    const auto shifts = sqg::dyadic_shift_set(snap.field.grid, jmax);
    const sqg::MocReport rep = sqg::moc_ratio(snap.field, omega, shifts);

    json j = json::parse(sqg::moc_report_to_json(rep));
    j["snapshot_time"] = snap.time;
    if (m > 0.0) {
        const sqg::Breakthrough bt = sqg::breakthrough_search(snap.field, omega, m, shifts);
        j["breakthrough"] = {{"margin", bt.margin},
                             {"cx", bt.shift.cx},
                             {"cy", bt.shift.cy},
                             {"ix", bt.ix},
                             {"iy", bt.iy}};
    }
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << "M_est = " << rep.m_est << " at shift (" << rep.argmax_shift.cx << ","
                  << rep.argmax_shift.cy << "), point (" << rep.argmax_ix << ","
                  << rep.argmax_iy << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // SQGLAB_THREADS caps internal parallelism; the current build computes
    // single-threaded, so any valid value is accepted as a cap of one.
    if (const char* env = std::getenv("SQGLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || v < 1) {
            std::cerr << "SQGLAB_THREADS must be a positive integer\n";
            return 1;
        }
    }

    CLI::App app{"sqglab: slightly supercritical SQG simulation laboratory"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");
    const auto add_json_flag = [&as_json](CLI::App* sub) {
        sub->add_flag("--json", as_json, "machine-readable JSON output");
    };

    auto* run_cmd = app.add_subcommand("run", "run a simulation scenario");
    add_json_flag(run_cmd);
    std::string config_path, out_override;
    long seed_override = -1;
    run_cmd->add_option("--config", config_path, "scenario config JSON")->required();
    run_cmd->add_option("--out", out_override, "override out_dir");
    run_cmd->add_option("--seed", seed_override, "override theta0 seed");

    auto* check_cmd = app.add_subcommand("check-symbols", "audit kernel/multiplier/MOC");
    add_json_flag(check_cmd);
    double a1 = 0.0, a2 = 0.0, beta = 1.0, r_cap = sqg::ModulusOfContinuity::kDefaultRCap;
    check_cmd->add_option("--alpha1", a1)->required();
    check_cmd->add_option("--alpha2", a2)->required();
    check_cmd->add_option("--beta", beta)->required();
    check_cmd->add_option("--r-cap", r_cap);

    auto* lemma_cmd = app.add_subcommand("verify-lemmas", "verify the integral estimates");
    add_json_flag(lemma_cmd);
    double l_a1 = 0.0, l_a2 = 0.0, l_beta = 1.0, l_gamma = 0.5;
    int jmin = 8, jmax = 20;
    lemma_cmd->add_option("--alpha1", l_a1)->required();
    lemma_cmd->add_option("--alpha2", l_a2)->required();
    lemma_cmd->add_option("--beta", l_beta);
    lemma_cmd->add_option("--gamma", l_gamma);
    lemma_cmd->add_option("--jmin", jmin);
    lemma_cmd->add_option("--jmax", jmax);

    auto* bounds_cmd = app.add_subcommand("bounds", "gradient-bound calculator");
    add_json_flag(bounds_cmd);
    double b_linf = 1.0, b_grad = 1.0, b_beta = 1.0, b_c = 1.0, b_outer = 1.0;
    bounds_cmd->add_option("--theta0-linf", b_linf)->required();
    bounds_cmd->add_option("--grad-linf", b_grad)->required();
    bounds_cmd->add_option("--beta", b_beta);
    bounds_cmd->add_option("--c", b_c);
    bounds_cmd->add_option("--c-outer", b_outer);

    auto* moc_cmd = app.add_subcommand("moc-audit", "modulus-of-continuity audit");
    add_json_flag(moc_cmd);
    std::string snapshot_path;
    double m_beta = 1.0, m_r_cap = sqg::ModulusOfContinuity::kDefaultRCap, m_amp = 0.0;
    int m_jmax = -1;
    moc_cmd->add_option("--snapshot", snapshot_path, "SQGF snapshot file")->required();
    moc_cmd->add_option("--beta", m_beta);
    moc_cmd->add_option("--r-cap", m_r_cap);
    moc_cmd->add_option("--m", m_amp, "declared MOC amplitude for breakthrough search");
    moc_cmd->add_option("--jmax", m_jmax);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, out_override, seed_override, as_json);
        if (check_cmd->parsed()) return cmd_check_symbols(a1, a2, beta, r_cap, as_json);
        if (lemma_cmd->parsed())
            return cmd_verify_lemmas(l_a1, l_a2, l_beta, l_gamma, jmin, jmax, as_json);
        if (bounds_cmd->parsed()) return cmd_bounds(b_linf, b_grad, b_beta, b_c, b_outer, as_json);
        if (moc_cmd->parsed())
            return cmd_moc_audit(snapshot_path, m_beta, m_r_cap, m_amp, m_jmax, as_json);
    } catch (const std::exception& e) {
        if (as_json)
            std::cout << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
