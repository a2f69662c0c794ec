// Command-line driver: solve, analyze, sweep-eps, wedge, kernel, regimes.
// Exit codes: 0 success, 1 failed check under --strict, 2 usage or config
// error, 3 numerical instability.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsp/analysis.hpp"
#include "fsp/evolve.hpp"
#include "fsp/kernel.hpp"
#include "fsp/profile.hpp"
#include "fsp/report.hpp"

namespace {

using fsp::ExperimentConfig;
using fsp::SelfSimilarProfile;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsageError = 2;
constexpr int kInstability = 3;

struct Flags {
    std::string config, out, profile;
    bool strict = false;
    double s = 0, L = 0, P1 = 0, R = 0, lambda = 0, T = 0, eps = 0;
    int n = 0;
    unsigned seed = 0;
};

void add_common_options(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "key = value configuration file");
    sub->add_option("--out", f.out, "output directory (default .)");
    sub->add_flag("--strict", f.strict, "exit 1 when any reported check fails");
    sub->add_option("--s", f.s, "fractional order in (0,1)");
    sub->add_option("--L", f.L, "latent heat");
    sub->add_option("--P1", f.P1, "initial temperature excess of the water phase");
    sub->add_option("--R", f.R, "half-width of the computational window");
    sub->add_option("--n", f.n, "number of grid nodes");
    sub->add_option("--lambda", f.lambda, "CFL safety factor in (0,1]");
    sub->add_option("--T", f.T, "final time");
    sub->add_option("--eps", f.eps, "bridge width; selects the regularized nonlinearity");
    sub->add_option("--seed", f.seed, "seed for randomized cross-checks");
}

ExperimentConfig make_config(const CLI::App* sub, const Flags& f) {
    ExperimentConfig cfg;
    if (sub->count("--config")) cfg = fsp::parse_config_file(f.config);
    if (sub->count("--s")) cfg.params.s = f.s;
    if (sub->count("--L")) cfg.params.L = f.L;
    if (sub->count("--P1")) cfg.params.P1 = f.P1;
    if (sub->count("--R")) cfg.R = f.R;
    if (sub->count("--n")) cfg.n = f.n;
    if (sub->count("--lambda")) cfg.cfl_safety = f.lambda;
    if (sub->count("--T")) cfg.final_time = f.T;
    if (sub->count("--eps")) {
        cfg.eps = f.eps;
        cfg.mode = ExperimentConfig::Mode::kEps;
    }
    if (sub->count("--seed")) cfg.seed = f.seed;
    if (sub->count("--out")) cfg.out_dir = f.out;

    if (!(cfg.params.s > 0.0 && cfg.params.s < 1.0))
        throw std::invalid_argument("s must lie in (0,1)");
    if (!(cfg.params.L > 0.0) || !(cfg.params.P1 > 0.0))
        throw std::invalid_argument("L and P1 must be positive");
    if (!(cfg.R > 0.0)) throw std::invalid_argument("R must be positive");
    if (cfg.n < 32) throw std::invalid_argument("n must be at least 32");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw std::invalid_argument("lambda must lie in (0,1]");
    if (!(cfg.final_time > 0.0)) throw std::invalid_argument("T must be positive");
    return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

SelfSimilarProfile run_solver(const ExperimentConfig& cfg, double* seconds) {
    fsp::SolverConfig scfg{fsp::UniformGrid(-cfg.R, cfg.R, cfg.n),
                           cfg.cfl_safety,
                           cfg.final_time,
                           cfg.mode == ExperimentConfig::Mode::kEps,
                           cfg.eps,
                           {cfg.final_time}};
    fsp::validate_solver_config(scfg);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<fsp::EvolutionState> states;
    if (cfg.mode == ExperimentConfig::Mode::kEps)
        states = fsp::run_to_time(scfg, cfg.params,
                                  fsp::RegularizedNonlinearity(cfg.params.L, cfg.eps));
    else
        states = fsp::run_to_time(scfg, cfg.params, fsp::ExactNonlinearity(cfg.params.L));
    const auto t1 = std::chrono::steady_clock::now();
    if (seconds) *seconds = std::chrono::duration<double>(t1 - t0).count();
    return fsp::extract_profile(states.back(), cfg.params);
}

// Counts failed "pass" entries in the checks block and the sandwich block.
int count_check_failures(const json& rep) {
    int fails = 0;
    const auto tally = [&fails](const std::string& name, const json& node) {
        if (node.is_object() && node.contains("pass") && !node["pass"].get<bool>()) {
            std::fprintf(stderr, "check failed: %s\n", name.c_str());
            ++fails;
        }
    };
    if (rep.contains("checks") && rep["checks"].is_object())
        for (const auto& [key, value] : rep["checks"].items()) tally(key, value);
    if (rep.contains("sandwich")) tally("sandwich", rep["sandwich"]);
    return fails;
}

int cmd_solve(const ExperimentConfig& cfg) {
    double seconds = 0.0;
    const SelfSimilarProfile pr = run_solver(cfg, &seconds);
    const std::string csv = out_path(cfg, "profile.csv");
    fsp::write_profile_csv(csv, pr);
    json side;
    side["schema_version"] = 1;
    side["config"] = json::parse(fsp::config_json(cfg));
    side["xi0"] = {{"value", pr.xi0}, {"bracket_lo", pr.xi0_lo}, {"bracket_hi", pr.xi0_hi}};
    side["time"] = pr.time;
    const std::string sidecar = out_path(cfg, "profile.json");
    fsp::write_text_file(sidecar, side.dump(2) + "\n");
    std::printf("xi0 = %.12g\n", pr.xi0);
    std::printf("wrote %s\n", csv.c_str());
    std::printf("wrote %s (%.1fs solve)\n", sidecar.c_str(), seconds);
    return kOk;
}

int cmd_analyze(const ExperimentConfig& cfg, const std::string& profile_path,
                bool strict) {
    const SelfSimilarProfile pr = fsp::read_profile_csv(profile_path, cfg.params);
    const std::string text = fsp::analysis_report_json(cfg, pr, 0.0);
    const std::string path = out_path(cfg, "report.json");
    fsp::write_text_file(path, text);
    std::printf("xi0 = %.12g\n", pr.xi0);
    std::printf("wrote %s\n", path.c_str());
    const int fails = count_check_failures(json::parse(text));
    return (strict && fails > 0) ? kCheckFailure : kOk;
}

int cmd_sweep_eps(const ExperimentConfig& cfg, bool strict) {
    fsp::SolverConfig scfg{fsp::UniformGrid(-cfg.R, cfg.R, cfg.n),
                           cfg.cfl_safety,
                           cfg.final_time,
                           false,
                           cfg.eps,
                           {cfg.final_time}};
    fsp::validate_solver_config(scfg);
    const fsp::EpsSweepResult sw = fsp::eps_sweep(scfg, cfg.params, cfg.eps_list);
    const double dx = sw.exact.dxi();

    json rows = json::array();
    for (std::size_t i = 0; i < sw.eps.size(); ++i) {
        json row;
        row["eps"] = sw.eps[i];
        row["xi_eps"] = sw.xi_eps[i];
        row["dist_to_exact"] = sw.dist_to_exact[i];
        row["lipschitz"] = sw.lipschitz[i];
        if (i + 1 < sw.eps.size()) row["dist_to_next"] = sw.successive[i];
        rows.push_back(row);
    }
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < sw.dist_to_exact.size(); ++i)
        if (!(sw.dist_to_exact[i + 1] < sw.dist_to_exact[i])) monotone = false;
    const bool front_ok =
        !sw.xi_eps.empty() && sw.xi_eps.back() >= sw.exact.xi0 - 5.0 * dx;

    json rep;
    rep["schema_version"] = 1;
    rep["config"] = json::parse(fsp::config_json(cfg));
    rep["xi0_exact"] = sw.exact.xi0;
    rep["dx"] = dx;
    rep["rows"] = rows;
    rep["checks"] = {
        {"distance_monotone", {{"pass", monotone}}},
        {"front_within_five_cells",
         {{"value", sw.xi_eps.empty() ? 0.0 : sw.xi_eps.back()},
          {"threshold", sw.exact.xi0 - 5.0 * dx},
          {"pass", front_ok}}}};
    const std::string path = out_path(cfg, "sweep.json");
    fsp::write_text_file(path, rep.dump(2) + "\n");
    std::printf("wrote %s\n", path.c_str());
    const int fails = count_check_failures(rep);
    return (strict && fails > 0) ? kCheckFailure : kOk;
}

int cmd_wedge(const ExperimentConfig& cfg, bool strict) {
    double seconds = 0.0;
    const SelfSimilarProfile pr = run_solver(cfg, &seconds);
    const fsp::WedgeReport w = fsp::wedge_verify(pr, cfg.params.s);
    double max_disc = 0.0;
    json rows = json::array();
    for (const fsp::WedgeRow& r : w.rows) {
        max_disc = std::max({max_disc, r.disc_I, r.disc_II, r.disc_IV, r.disc_total});
        rows.push_back({{"xi", r.xi},
                        {"k", r.k},
                        {"I", r.I},
                        {"II", r.II},
                        {"III", r.III},
                        {"IV", r.IV},
                        {"combined", r.combined},
                        {"disc_total", r.disc_total}});
    }
    const bool critical = std::abs(cfg.params.s - 0.5) < 1e-12;
    const bool pass = critical ? w.min_ratio > 0.0 : w.found;
    json rep;
    rep["schema_version"] = 1;
    rep["config"] = json::parse(fsp::config_json(cfg));
    rep["xi0"] = pr.xi0;
    rep["found"] = w.found;
    rep["C"] = w.C;
    rep["a"] = w.a;
    rep["max_combined"] = w.max_combined;
    rep["support_margin"] = w.support_margin;
    rep["min_linear_ratio"] = w.min_ratio;
    rep["max_discrepancy"] = max_disc;
    rep["rows"] = rows;
    rep["checks"] = {{"wedge_admissible", {{"pass", pass}}}};
    const std::string path = out_path(cfg, "wedge.json");
    fsp::write_text_file(path, rep.dump(2) + "\n");
    std::printf("wrote %s\n", path.c_str());
    const int fails = count_check_failures(rep);
    return (strict && fails > 0) ? kCheckFailure : kOk;
}

int cmd_kernel(const ExperimentConfig& cfg) {
    const fsp::KernelTable table = fsp::kernel_build(
        cfg.params.s, cfg.final_time, fsp::UniformGrid(-cfg.R, cfg.R, cfg.n));
    const std::string csv = out_path(cfg, "kernel.csv");
    fsp::write_kernel_csv(csv, table);
    json rep;
    rep["schema_version"] = 1;
    rep["config"] = json::parse(fsp::config_json(cfg));
    rep["total_mass"] = table.total_mass;
    const std::string path = out_path(cfg, "kernel.json");
    fsp::write_text_file(path, rep.dump(2) + "\n");
    std::printf("total_mass = %.12g\n", table.total_mass);
    std::printf("wrote %s\n", csv.c_str());
    return kOk;
}

int cmd_regimes(const ExperimentConfig& cfg, bool strict) {
    int fails = 0;
    for (double s : {0.25, 0.5, 0.75}) {
        ExperimentConfig run = cfg;
        run.params.s = s;
        char dir[32];
        std::snprintf(dir, sizeof dir, "s_%.2f", s);
        run.out_dir = (std::filesystem::path(cfg.out_dir) / dir).string();
        double seconds = 0.0;
        const SelfSimilarProfile pr = run_solver(run, &seconds);
        fsp::write_profile_csv(out_path(run, "profile.csv"), pr);
        const std::string text = fsp::analysis_report_json(run, pr, seconds);
        fsp::write_text_file(out_path(run, "report.json"), text);
        const json rep = json::parse(text);
        int run_fails = count_check_failures(rep);
        int total = 0;
        if (rep.contains("checks")) total = static_cast<int>(rep["checks"].size());
        std::printf("s=%.2f  xi0=%.9g  checks %d/%d pass  (%.1fs solve)\n", s, pr.xi0,
                    total - run_fails, total, seconds);
        fails += run_fails;
    }
    return (strict && fails > 0) ? kCheckFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-phase fractional Stefan problem: solver and verification suite"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* solve = app.add_subcommand("solve", "evolve step data and store the profile");
    CLI::App* analyze =
        app.add_subcommand("analyze", "full verification report from a stored profile");
    CLI::App* sweep = app.add_subcommand("sweep-eps", "regularization convergence sweep");
    CLI::App* wedge = app.add_subcommand("wedge", "piecewise-linear subsolution search");
    CLI::App* kernel = app.add_subcommand("kernel", "fundamental-solution table");
    CLI::App* regimes =
        app.add_subcommand("regimes", "canonical s in {0.25, 0.5, 0.75} suite");
    for (CLI::App* sub : {solve, analyze, sweep, wedge, kernel, regimes})
        add_common_options(sub, f);
    analyze->add_option("--profile", f.profile, "stored profile CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const ExperimentConfig cfg = make_config(sub, f);
        if (sub == solve) return cmd_solve(cfg);
        if (sub == analyze) return cmd_analyze(cfg, f.profile, f.strict);
        if (sub == sweep) return cmd_sweep_eps(cfg, f.strict);
        if (sub == wedge) return cmd_wedge(cfg, f.strict);
        if (sub == kernel) return cmd_kernel(cfg);
        return cmd_regimes(cfg, f.strict);
    } catch (const fsp::InstabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInstability;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    }
}
