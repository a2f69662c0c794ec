#include "fsp/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fsp/evolve.hpp"

namespace fsp {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size())
            throw std::invalid_argument("malformed number in list: " + item);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("boolean value expected for key: " + key);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("malformed number for key: " + key);
    return x;
}

json fit_json(const ExponentFit& f) {
    json j;
    j["model"] = f.model == FitModel::kPowerLaw ? "power" : "log";
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["prefactor"] = f.prefactor;
    j["stderr_slope"] = f.stderr_slope;
    j["residual_rms"] = f.residual_rms;
    j["count"] = f.count;
    j["window_lo"] = f.window_lo;
    j["window_hi"] = f.window_hi;
    j["liminf_constant"] = f.liminf_constant;
    return j;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["s"] = cfg.params.s;
    j["L"] = cfg.params.L;
    j["P1"] = cfg.params.P1;
    j["R"] = cfg.R;
    j["n"] = cfg.n;
    j["lambda"] = cfg.cfl_safety;
    j["T"] = cfg.final_time;
    j["record_times"] = cfg.record_times;
    j["mode"] = cfg.mode == ExperimentConfig::Mode::kExact ? "exact"
                : cfg.mode == ExperimentConfig::Mode::kEps ? "eps"
                                                           : "sweep";
    j["eps"] = cfg.eps;
    j["eps_list"] = cfg.eps_list;
    j["stefan"] = cfg.run_stefan;
    j["holder"] = cfg.run_holder;
    j["blowup"] = cfg.run_blowup;
    j["tails"] = cfg.run_tails;
    j["sandwich"] = cfg.run_sandwich;
    j["wedge"] = cfg.run_wedge;
    j["mass"] = cfg.run_mass;
    j["alphastar"] = cfg.run_alphastar;
    j["out_dir"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "s")
        cfg.params.s = parse_double(key, value);
    else if (key == "L")
        cfg.params.L = parse_double(key, value);
    else if (key == "P1")
        cfg.params.P1 = parse_double(key, value);
    else if (key == "R")
        cfg.R = parse_double(key, value);
    else if (key == "n")
        cfg.n = static_cast<int>(parse_double(key, value));
    else if (key == "lambda")
        cfg.cfl_safety = parse_double(key, value);
    else if (key == "T")
        cfg.final_time = parse_double(key, value);
    else if (key == "record_times")
        cfg.record_times = parse_double_list(value);
    else if (key == "mode") {
        if (value == "exact")
            cfg.mode = ExperimentConfig::Mode::kExact;
        else if (value == "eps")
            cfg.mode = ExperimentConfig::Mode::kEps;
        else if (value == "sweep")
            cfg.mode = ExperimentConfig::Mode::kSweep;
        else
            throw std::invalid_argument("mode must be exact, eps, or sweep");
    } else if (key == "eps")
        cfg.eps = parse_double(key, value);
    else if (key == "eps_list")
        cfg.eps_list = parse_double_list(value);
    else if (key == "stefan")
        cfg.run_stefan = parse_bool(key, value);
    else if (key == "holder")
        cfg.run_holder = parse_bool(key, value);
    else if (key == "blowup")
        cfg.run_blowup = parse_bool(key, value);
    else if (key == "tails")
        cfg.run_tails = parse_bool(key, value);
    else if (key == "sandwich")
        cfg.run_sandwich = parse_bool(key, value);
    else if (key == "wedge")
        cfg.run_wedge = parse_bool(key, value);
    else if (key == "mass")
        cfg.run_mass = parse_bool(key, value);
    else if (key == "alphastar")
        cfg.run_alphastar = parse_bool(key, value);
    else if (key == "out_dir")
        cfg.out_dir = value;
    else if (key == "seed")
        cfg.seed = static_cast<unsigned>(parse_double(key, value));
    else
        throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config file not found: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

void write_profile_csv(const std::string& path, const SelfSimilarProfile& pr) {
    std::string body = "xi,H,U,dH,d2H\n";
    char buf[192];
    for (std::size_t i = 0; i < pr.xi.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", pr.xi[i],
                      pr.H[i], pr.U[i], pr.dH[i], pr.d2H[i]);
        body += buf;
    }
    write_text_file(path, body);
}

void write_kernel_csv(const std::string& path, const KernelTable& table) {
    std::string body = "x,B,cdf\n";
    char buf[128];
    for (int i = 0; i < table.grid.n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", table.grid.x(i),
                      table.B[i], table.cdf[i]);
        body += buf;
    }
    write_text_file(path, body);
}

SelfSimilarProfile read_profile_csv(const std::string& path, const StefanParams& p) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("profile not found: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "xi,H,U,dH,d2H")
        throw std::invalid_argument("profile CSV must start with header xi,H,U,dH,d2H");
    SelfSimilarProfile pr;
    pr.params = p;
    pr.time = 1.0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        double v[5];
        const char* c = line.c_str();
        char* end = nullptr;
        for (int k = 0; k < 5; ++k) {
            v[k] = std::strtod(c, &end);
            if (end == c) throw std::invalid_argument("malformed profile row: " + line);
            c = end;
            if (k < 4) {
                if (*c != ',') throw std::invalid_argument("malformed profile row: " + line);
                ++c;
            }
        }
        pr.xi.push_back(v[0]);
        pr.H.push_back(v[1]);
        pr.U.push_back(v[2]);
        pr.dH.push_back(v[3]);
        pr.d2H.push_back(v[4]);
    }
    if (pr.xi.size() < 16) throw std::invalid_argument("profile CSV has too few rows");
    const CrossingResult cr = detect_free_boundary(pr.xi, pr.H, p.L);
    pr.xi0 = cr.xi0;
    pr.xi0_lo = cr.lo;
    pr.xi0_hi = cr.hi;
    pr.valid_lo = pr.xi.front();
    pr.valid_hi = pr.xi.back();
    return pr;
}

std::string config_json(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

std::string analysis_report_json(const ExperimentConfig& cfg,
                                 const SelfSimilarProfile& pr,
                                 double solve_seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    const double s = cfg.params.s;
    json rep;
    rep["schema_version"] = 1;
    rep["config"] = config_to_json(cfg);
    rep["xi0"] = {{"value", pr.xi0}, {"bracket_lo", pr.xi0_lo}, {"bracket_hi", pr.xi0_hi}};

    json fits = json::object();
    json checks = json::object();

    if (cfg.run_holder && s < 0.5) {
        const ExponentFit f = holder_fit_right(pr, s);
        fits["holder"] = fit_json(f);
        checks["holder_slope"] = {{"value", f.slope},
                                  {"target", 1.0 - 2.0 * s},
                                  {"tolerance", 0.1},
                                  {"pass", std::abs(f.slope - (1.0 - 2.0 * s)) <= 0.1}};
    }
    if (cfg.run_blowup) {
        const ExponentFit f = second_derivative_blowup_fit(pr, s);
        fits["blowup"] = fit_json(f);
        checks["blowup_positive_c1"] = {{"value", f.liminf_constant},
                                        {"tolerance", 0.0},
                                        {"pass", f.liminf_constant > 0.0}};
    }
    if (s == 0.5) {
        const ExponentFit f = critical_log_fit(pr);
        fits["critical"] = fit_json(f);
        checks["critical_log_coefficient"] = {
            {"value", f.slope},
            {"stderr", f.stderr_slope},
            {"pass", f.slope > 0.0 && f.slope >= 3.0 * f.stderr_slope}};
    }
    if (s > 0.5) {
        const ExponentFit f = supercritical_power_fit(pr, s);
        fits["supercritical"] = fit_json(f);
    }
    if (cfg.run_tails) {
        fits["tail_right_H"] = fit_json(tail_fit(pr, TailSide::kRight, cfg.params));
        fits["tail_left_H"] = fit_json(tail_fit(pr, TailSide::kLeft, cfg.params));
        fits["tail_right_dH"] =
            fit_json(tail_derivative_fit(pr, TailSide::kRight, cfg.params));
        fits["tail_left_dH"] =
            fit_json(tail_derivative_fit(pr, TailSide::kLeft, cfg.params));
    }
    if (s > 0.5) {
        const LateralBoundReport lb = lateral_bound_check(pr, s);
        fits["lateral"] = {{"alpha", lb.alpha},
                           {"gamma", lb.gamma},
                           {"gamma_lo", lb.gamma_lo},
                           {"gamma_hi", lb.gamma_hi},
                           {"within_bracket", lb.within_bracket}};
    }
    rep["fits"] = fits;

    if (cfg.run_stefan) {
        const StefanFormulaReport sf = stefan_formula_rhs(pr, s);
        rep["stefan_formula"] = {{"value", sf.value},
                                 {"fd_left", sf.fd_left},
                                 {"fd_right", sf.fd_right},
                                 {"mismatch_left", sf.mismatch_left},
                                 {"mismatch_right", sf.mismatch_right},
                                 {"diverges", sf.diverges}};
        checks["stefan_positive"] = {{"value", sf.value}, {"pass", sf.value > 0.0}};
    } else {
        rep["stefan_formula"] = nullptr;
    }

    if (cfg.run_wedge && s >= 0.5) {
        const WedgeReport w = wedge_verify(pr, s);
        double max_disc = 0.0;
        for (const WedgeRow& row : w.rows)
            max_disc = std::max({max_disc, row.disc_I, row.disc_II, row.disc_IV,
                                 row.disc_total});
        json jw;
        jw["found"] = w.found;
        jw["C"] = w.C;
        jw["a"] = w.a;
        jw["max_combined"] = w.max_combined;
        jw["support_margin"] = w.support_margin;
        jw["max_discrepancy"] = max_disc;
        jw["samples"] = static_cast<int>(w.rows.size());
        jw["min_linear_ratio"] = w.min_ratio;
        rep["wedge"] = jw;
    } else {
        rep["wedge"] = nullptr;
    }

    if (cfg.run_sandwich) {
        const KernelTable table =
            kernel_build(s, 1.0, UniformGrid(pr.xi.front(), pr.xi.back(),
                                             static_cast<int>(pr.xi.size())));
        const Field upper = envelope_upper(cfg.params, table);
        const Field lower = envelope_lower(cfg.params, table);
        const SandwichReport sw = sandwich_check(pr, upper, lower);
        const double tol = 1e-2 * cfg.params.P1;
        rep["sandwich"] = {{"upper_violation", sw.upper_violation},
                           {"lower_violation", sw.lower_violation},
                           {"tolerance", tol},
                           {"pass", sw.upper_violation <= tol && sw.lower_violation <= tol}};
    } else {
        rep["sandwich"] = nullptr;
    }

    if (cfg.run_mass) {
        const MassTransferReport m = mass_transfer_report(pr, cfg.params);
        json jm;
        jm["left_truncated"] = m.left_truncated;
        jm["right_truncated"] = m.right_truncated;
        jm["left_total"] = m.left_total;
        jm["right_total"] = m.right_total;
        jm["relative_mismatch"] = m.relative_mismatch;
        jm["left_divergent"] = m.left_divergent;
        jm["left_half_window_ratio"] = m.left_half_window_ratio;
        rep["fits"]["mass"] = jm;
    }

    if (cfg.run_alphastar && s < 0.5) {
        const AlphaStarResult a = alpha_star_iteration(s, 0.5);
        rep["fits"]["alpha_star"] = {{"value", a.alpha_star},
                                     {"iterations", a.iterations},
                                     {"bracket_lo", 1.0 - 2.0 * s},
                                     {"bracket_hi", 1.0 - s}};
    }

    checks["xi0_positive"] = {{"value", pr.xi0}, {"pass", pr.xi0 > 0.0}};
    rep["checks"] = checks;

    const auto t1 = std::chrono::steady_clock::now();
    const double analysis_seconds = std::chrono::duration<double>(t1 - t0).count();
    rep["timings"] = {{"solve_seconds", solve_seconds},
                      {"analysis_seconds", analysis_seconds}};
    return rep.dump(2) + "\n";
}

}  // namespace fsp
