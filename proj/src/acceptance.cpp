#include "fsp/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fsp/analysis.hpp"
#include "fsp/evolve.hpp"
#include "fsp/fraclap.hpp"
#include "fsp/kernel.hpp"
#include "fsp/profile.hpp"
#include "fsp/quadrature.hpp"

namespace fsp {

namespace {

std::string str(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    char buf[1024];
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

// Canonical configuration; every criterion runs here unless it names its
// own window or resolution.
constexpr double kR = 100.0;
constexpr int kN = 8192;
constexpr double kLambda = 0.4;
constexpr double kT = 1.0;
const double kS[3] = {0.25, 0.5, 0.75};

SolverConfig canonical_config(double R, int n, double T, std::vector<double> rec) {
    SolverConfig cfg{UniformGrid(-R, R, n), kLambda, T, false, 0.1, std::move(rec)};
    validate_solver_config(cfg);
    return cfg;
}

struct Run {
    EvolutionState final_state{0.0, Field(UniformGrid(-1.0, 1.0, 16),
                                          std::vector<double>(16, 0.0), {0.0, 0.0})};
    SelfSimilarProfile prof;
};

Run solve_canonical(double s, double R, int n, double T) {
    const StefanParams p{s, 1.0, 1.0};
    const SolverConfig cfg = canonical_config(R, n, T, {T});
    auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
    Run r{states.back(), extract_profile(states.back(), p)};
    return r;
}

double interp_abs_dh(const SelfSimilarProfile& pr, double xi_target) {
    const double t = (xi_target - pr.xi.front()) / pr.dxi();
    const int i = std::clamp(static_cast<int>(std::floor(t)), 0,
                             static_cast<int>(pr.xi.size()) - 2);
    const double w = t - i;
    return std::abs((1.0 - w) * pr.dH[i] + w * pr.dH[i + 1]);
}

class Scoreboard {
  public:
    explicit Scoreboard(std::ostream& out) : out_(out) {}

    void line(int k, bool pass, const std::string& label, const std::string& detail) {
        if (!pass) ++failed_;
        out_ << (pass ? "PASS" : "FAIL") << " criterion " << (k < 10 ? " " : "") << k
             << " (" << label << "): " << detail << "\n";
        out_.flush();
    }

    int failed() const { return failed_; }

  private:
    std::ostream& out_;
    int failed_ = 0;
};

}  // namespace

int run_acceptance(std::ostream& out) {
    Scoreboard board(out);

    // shared canonical and refined runs
    std::map<double, Run> runs, fine;
    for (double s : kS) runs.emplace(s, solve_canonical(s, kR, kN, kT));
    for (double s : kS) fine.emplace(s, solve_canonical(s, kR, 2 * kN, kT));

    // 1. discrete operator against the adaptive-quadrature oracle and the
    //    Fourier symbol A(s) |k|^{2s}
    {
        UniformGrid g(-40.0, 40.0, 1024);
        std::vector<double> v(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            v[i] = 0.5 * (1.0 - std::tanh(0.5 * x)) + 0.3 * std::exp(-x * x);
        }
        const Field f(g, v, {1.0, 0.0});
        const int idx[10] = {64, 200, 340, 430, 480, 512, 540, 590, 700, 940};
        double worst_oracle = 0.0;
        for (double s : kS) {
            const OperatorWeights w = build_weights(s, g.dx(), g.n);
            const std::vector<double> a = apply(w, f);
            for (int j : idx) {
                const double o = oracle_quadrature_point(f, s, g.x(j), 1e-8);
                worst_oracle = std::max(worst_oracle,
                                        std::abs(a[j] - o) / std::max(1.0, std::abs(o)));
            }
        }

        struct Setup {
            double s, R;
            int n;
        };
        const Setup setups[3] = {{0.25, 3500.0, 65536}, {0.5, 300.0, 8192},
                                 {0.75, 100.0, 4096}};
        double worst_symbol = 0.0;
        bool k_ok = true;
        for (const Setup& su : setups) {
            UniformGrid sg(-su.R, su.R, su.n);
            const double A = symbol_constant(su.s);
            const OperatorWeights w = build_weights(su.s, sg.dx(), sg.n);
            for (double k : {0.5, 1.0, 2.0}) {
                k_ok = k_ok && k * sg.dx() <= 0.3;
                std::vector<double> pw(sg.n);
                for (int i = 0; i < sg.n; ++i) pw[i] = std::cos(k * sg.x(i));
                const Field pf(sg, pw, {0.0, 0.0});
                const std::vector<double> a = apply(w, pf);
                const double amp = A * std::pow(k, 2.0 * su.s);
                for (int i = 0; i < sg.n; ++i) {
                    if (std::abs(sg.x(i)) > su.R / 3.0) continue;
                    worst_symbol =
                        std::max(worst_symbol, std::abs(a[i] - amp * pw[i]) / amp);
                }
            }
        }
        const bool ok = worst_oracle <= 1e-4 && worst_symbol <= 1e-2 && k_ok;
        board.line(1, ok, "operator vs quadrature oracle and Fourier symbol",
                   str("oracle max rel %.2e (tol 1e-4, 10 points, s=0.25/0.5/0.75); "
                       "symbol max rel %.2e (tol 1e-2, k dx <= 0.3)",
                       worst_oracle, worst_symbol));
    }

    // 2. solver invariants: bounds, monotonicity, comparison of ordered step
    //    data, and conservation of a compact perturbation's mass
    {
        bool ok = true;
        std::string detail;
        for (double s : kS) {
            const Run& r = runs.at(s);
            const StefanParams p{s, 1.0, 1.0};
            const double box = p.L + p.P1;

            const bool bounds =
                r.final_state.h_min >= -1e-9 && r.final_state.h_max <= box + 1e-9;

            double mono_viol = 0.0;
            const std::vector<double>& h = r.final_state.h.values;
            for (std::size_t i = 0; i + 1 < h.size(); ++i)
                mono_viol = std::max(mono_viol, h[i + 1] - h[i]);
            const bool mono = mono_viol <= 1e-11;

            // ordered initial jumps 0 and 4 dx stay ordered at time T
            const SolverConfig cfg = canonical_config(kR, kN, kT, {kT});
            ExactNonlinearity phi(p.L);
            const auto hi_run = run_from(
                cfg, s, step_initial_field(cfg.grid, p, 4.0 * cfg.grid.dx()), phi, true);
            double cmp_viol = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i)
                cmp_viol = std::max(cmp_viol, h[i] - hi_run.back().h.values[i]);
            const bool cmp = cmp_viol <= 1e-9;

            // triangular bump of height 1.2 on [2, 4]: the difference mass at
            // T must match the initial bump mass
            Field base0 = step_initial_field(cfg.grid, p);
            std::vector<double> pv = base0.values;
            for (int i = 0; i < cfg.grid.n; ++i) {
                const double x = cfg.grid.x(i);
                if (x > 2.0 && x < 4.0)
                    pv[i] = std::max(pv[i], 1.2 * (1.0 - std::abs(x - 3.0)));
            }
            const auto pert_run =
                run_from(cfg, s, Field(cfg.grid, pv, base0.closure), phi, false);
            const double dx = cfg.grid.dx();
            double mass0 = 0.0, massT = 0.0;
            for (int i = 0; i < cfg.grid.n; ++i) {
                mass0 += (pv[i] - base0.values[i]) * dx;
                massT += (pert_run.back().h.values[i] - h[i]) * dx;
            }
            const double drift = std::abs(massT - mass0) / mass0;
            const bool mass = drift <= 1e-3;

            ok = ok && bounds && mono && cmp && mass;
            detail += str("s=%.2f: bounds %s, monotone viol %.1e, comparison viol "
                          "%.1e, mass drift %.2e%s; ",
                          s, bounds ? "ok" : "VIOLATED", mono_viol, cmp_viol, drift,
                          mass ? "" : " (tol 1e-3 EXCEEDED)");
        }
        detail += "[mass drift at s=0.25 is window truncation: the difference field "
                  "carries ~R^{-2s} of its mass past |x|=100 by t=1]";
        board.line(2, ok, "solver invariants", detail);
    }

    // 3. self-similar collapse: rescaled snapshots at t = 0.5 and t = 2
    {
        bool ok = true;
        std::string detail;
        for (double s : kS) {
            const StefanParams p{s, 1.0, 1.0};
            const SolverConfig cfg = canonical_config(kR, kN, 2.0, {0.5, 2.0});
            const auto states = run_to_time(cfg, p, ExactNonlinearity(p.L));
            const double err = collapse_error(extract_profile(states[0], p),
                                              extract_profile(states[1], p));
            const double tol = 1e-2 * (p.L + p.P1);
            ok = ok && err <= tol;
            detail += str("s=%.2f sup err %.4f%s; ", s, err,
                          err <= tol ? "" : " (tol 0.02 EXCEEDED)");
        }
        detail += "[s=0.25 and s=0.75 fail at n=8192: the sup norm sits on the "
                  "front cusp sampled at effective resolutions 16x apart; the "
                  "mismatch decays only like dx^{1-2s} there]";
        board.line(3, ok, "self-similar collapse t=0.5 vs t=2", detail);
    }

    // 4. free boundary: positive, stable under refinement, invariant under
    //    the (L, P1) -> (L, P1)/A rescaling
    {
        bool ok = true;
        std::string detail;
        for (double s : kS) {
            const double xi0 = runs.at(s).prof.xi0;
            const double xi0f = fine.at(s).prof.xi0;
            const double drift = std::abs(xi0f - xi0) / xi0;
            const StefanParams p{s, 1.0, 1.0};
            const ScalingReport sr =
                scaling_check(canonical_config(kR, kN, kT, {kT}), p, 2.0);
            const double scale_rel = sr.xi0_discrepancy / sr.xi0_reference;
            const bool leg =
                xi0 > 0.0 && drift <= 0.02 && scale_rel <= 0.01;
            ok = ok && leg;
            detail += str("s=%.2f xi0=%.6f, refine drift %.2e (tol 0.02), scaling "
                          "disc %.1e (tol 0.01); ",
                          s, xi0, drift, scale_rel);
        }
        board.line(4, ok, "free boundary location", detail);
    }

    // 5. front velocity identity at s = 0.25: the kernel-weighted integral of
    //    U below the front against both one-sided derivative limits
    {
        const StefanFormulaReport sf = stefan_formula_rhs(runs.at(0.25).prof, 0.25);
        const bool ok = sf.value > 0.0 && sf.fd_left > 0.0 && sf.fd_right > 0.0 &&
                        sf.mismatch_left <= 0.10 && sf.mismatch_right <= 0.10;
        board.line(5, ok, "front velocity identity, s=0.25",
                   str("integral %.6f, -H'(xi0-) %.6f, -H'(xi0+) %.6f, mismatches "
                       "%.3f/%.3f (tol 0.10), all three positive: %s",
                       sf.value, sf.fd_left, sf.fd_right, sf.mismatch_left,
                       sf.mismatch_right,
                       sf.value > 0 && sf.fd_left > 0 && sf.fd_right > 0 ? "yes" : "NO"));
    }

    // 6. near-front regularity at s = 0.25: Holder exponent of H' and the
    //    second-derivative blow-up order
    {
        const SelfSimilarProfile& pr = runs.at(0.25).prof;
        const ExponentFit hf = holder_fit_right(pr, 0.25);
        const ExponentFit bf = second_derivative_blowup_fit(pr, 0.25);
        const bool ok = std::abs(hf.slope - 0.5) <= 0.1 &&
                        std::abs(bf.slope - (-0.5)) <= 0.15 && bf.liminf_constant > 0.0;
        board.line(6, ok, "near-front regularity orders, s=0.25",
                   str("H' Holder slope %.4f (target 0.5 +- 0.1); H'' slope %.4f "
                       "(target -0.5 +- 0.15) with floor constant %.4f > 0",
                       hf.slope, bf.slope, bf.liminf_constant));
    }

    // 7. critical logarithmic blow-up at s = 0.5
    {
        const SelfSimilarProfile& pr = runs.at(0.5).prof;
        const ExponentFit cf = critical_log_fit(pr);
        const bool log_ok = cf.slope > 0.0 && cf.slope >= 3.0 * cf.stderr_slope;

        const double d_near = 4.0 * pr.dxi();
        const double d_far = 0.1 * pr.xi0;
        const double v_near = interp_abs_dh(pr, pr.xi0 + d_near);
        const double v_far = interp_abs_dh(pr, pr.xi0 + d_far);
        const double ratio = v_near / v_far;
        const bool ladder_ok = ratio >= 2.0;

        board.line(7, log_ok && ladder_ok, "critical log blow-up, s=0.5",
                   str("|H'| =~ a + b log(1/d): b=%.4f, stderr %.4f, b >= 3 se: %s; "
                       "|H'|(4 dxi=%.4f)=%.3f vs |H'|(0.1 xi0=%.4f)=%.3f, ratio %.3f "
                       "(need >= 2) [the two distances fall in the same grid cell at "
                       "n=8192: the log ladder needs n >~ 6e4 to open a factor 2]",
                       cf.slope, cf.stderr_slope, log_ok ? "yes" : "NO", d_near, v_near,
                       d_far, v_far, ratio));
    }

    // 8. supercritical derivative blow-up at s = 0.75
    {
        const ExponentFit coarse = supercritical_power_fit(runs.at(0.75).prof, 0.75);
        FitWindows fw;  // same physical window on the doubled grid
        fw.near_cells = 8.0;
        fw.near_min_cells = 32.0;
        const ExponentFit fref = supercritical_power_fit(fine.at(0.75).prof, 0.75, fw);
        const double stab = std::abs(fref.liminf_constant - coarse.liminf_constant) /
                            coarse.liminf_constant;
        const bool slope_ok = std::abs(coarse.slope - (-0.5)) <= 0.15;
        const bool floor_ok = coarse.liminf_constant > 0.0 && stab <= 0.30;
        board.line(8, slope_ok && floor_ok, "supercritical blow-up, s=0.75",
                   str("|H'| slope %.4f (target -0.5 +- 0.15) [vertical tangent: the "
                       "-1/2 order emerges only below d ~ 1e-3 xi0, unreachable at "
                       "n=8192]; floor constant %.5f > 0, refinement shift %.1f%% "
                       "(tol 30%%)",
                       coarse.slope, coarse.liminf_constant, 100.0 * stab));
    }

    // 9. far-field decay: H on both sides at every s, plus the critical-case
    //    left derivative
    {
        bool ok = true;
        std::string detail;
        for (double s : kS) {
            const SelfSimilarProfile& pr = runs.at(s).prof;
            const StefanParams p{s, 1.0, 1.0};
            const ExponentFit rh = tail_fit(pr, TailSide::kRight, p);
            const ExponentFit lh = tail_fit(pr, TailSide::kLeft, p);
            const double pref_target = p.P1 / (2.0 * s);
            const bool leg = std::abs(rh.slope - (-2.0 * s)) <= 0.1 &&
                             std::abs(rh.prefactor - pref_target) <= 0.2 * pref_target &&
                             std::abs(lh.slope - (-2.0 * s)) <= 0.1;
            ok = ok && leg;
            detail += str("s=%.2f right %.4f/pref %.3f (targets %.1f/%.3f), left "
                          "%.4f; ",
                          s, rh.slope, rh.prefactor, -2.0 * s, pref_target, lh.slope);
        }
        const ExponentFit ld =
            tail_derivative_fit(runs.at(0.5).prof, TailSide::kLeft,
                                StefanParams{0.5, 1.0, 1.0});
        const bool ld_ok = std::abs(ld.slope - (-2.0)) <= 0.15;
        ok = ok && ld_ok;
        detail += str("s=0.50 left |H'| slope %.4f (target -2 +- 0.15)", ld.slope);
        board.line(9, ok, "far-field tail exponents", detail);
    }

    // 10. kernel table and the cumulative-kernel envelopes at s = 0.25, 0.75
    {
        bool ok = true;
        std::string detail;
        for (double s : {0.25, 0.75}) {
            const SelfSimilarProfile& pr = runs.at(s).prof;
            const StefanParams p{s, 1.0, 1.0};
            const UniformGrid g(pr.xi.front(), pr.xi.back(),
                                static_cast<int>(pr.xi.size()));
            const KernelTable table = kernel_build(s, 1.0, g);

            const bool mass_ok = std::abs(table.total_mass - 1.0) <= 1e-6;

            double cmin = 1e300, cmax = 0.0;
            for (int i = 0; i < table.grid.n; ++i) {
                const double x = table.grid.x(i);
                if (x < 20.0 || x > 100.0) continue;
                const double c = table.B[i] * std::pow(x, 1.0 + 2.0 * s);
                cmin = std::min(cmin, c);
                cmax = std::max(cmax, c);
            }
            const bool pinch_ok = cmin > 0.0 && cmax / cmin <= 5.0;

            // far asymptote, measured where the subleading x^{-2s} correction
            // has died out; inside [20, 100] it still bends the local slope
            const double slope = std::log(kernel_point_series(s, 1e5) /
                                          kernel_point_series(s, 1e4)) /
                                 std::log(10.0);
            const bool exp_ok = std::abs(slope + (1.0 + 2.0 * s)) <= 0.05;

            const SandwichReport sw = sandwich_check(
                pr, envelope_upper(p, table), envelope_lower(p, table));
            const double tol = 1e-2 * p.P1;
            const bool sw_ok = sw.upper_violation <= tol && sw.lower_violation <= tol;

            ok = ok && mass_ok && pinch_ok && exp_ok && sw_ok;
            detail += str("s=%.2f: mass-1 %.1e (tol 1e-6), B x^{1+2s} in "
                          "[%.3f, %.3f] on [20,100], far slope %.4f (target %.2f "
                          "+- 0.05), envelope viol %.2e/%.2e (tol 0.01)%s; ",
                          s, std::abs(table.total_mass - 1.0), cmin, cmax, slope,
                          -(1.0 + 2.0 * s), sw.upper_violation, sw.lower_violation,
                          sw_ok ? "" : " EXCEEDED");
        }
        detail += "[s=0.25 envelope: bound saturated at leading order on the left; "
                  "the R=100 closure inflates H near the edge by ~R^{-2s} = 0.1, "
                  "an order above the margin]";
        board.line(10, ok, "kernel table and envelope sandwich", detail);
    }

    // 11. wedge subsolution at s = 0.75 and the critical-case linear bound
    {
        const WedgeReport w = wedge_verify(runs.at(0.75).prof, 0.75);
        double max_disc = 0.0;
        for (const WedgeRow& row : w.rows)
            max_disc = std::max(
                {max_disc, row.disc_I, row.disc_II, row.disc_IV, row.disc_total});
        const WedgeReport wc = wedge_verify(runs.at(0.5).prof, 0.5);
        const bool ok = w.found && w.rows.size() == 64 && w.max_combined <= 0.0 &&
                        max_disc <= 1e-6 && wc.min_ratio > 0.0;
        board.line(11, ok, "wedge subsolution (s=0.75) and critical ratio (s=0.5)",
                   str("closed forms vs quadrature: max disc %.2e (tol 1e-6) at 64 "
                       "samples; admissible pair found: %s (C=%.2f, a=%.4f, max "
                       "combined %.4f <= 0, support margin %.2e); s=0.5 min "
                       "U/(xi0-eta) = %.4f > 0",
                       max_disc, w.found ? "yes" : "NO", w.C, w.a, w.max_combined,
                       w.support_margin, wc.min_ratio));
    }

    // 12. vanishing-regularization ladder at s = 0.25
    {
        const StefanParams p{0.25, 1.0, 1.0};
        const SolverConfig cfg = canonical_config(kR, kN, kT, {kT});
        const EpsSweepResult sw = eps_sweep(cfg, p, {0.2, 0.1, 0.05, 0.025});
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < sw.dist_to_exact.size(); ++i)
            monotone = monotone && sw.dist_to_exact[i + 1] < sw.dist_to_exact[i];
        const double dx = cfg.grid.dx();
        const bool front_ok = sw.xi_eps.back() >= sw.exact.xi0 - 5.0 * dx;
        double lip_max = 0.0;
        for (double l : sw.lipschitz) lip_max = std::max(lip_max, l);
        const bool lip_ok = lip_max <= 1.5;
        board.line(12, monotone && front_ok && lip_ok,
                   "vanishing regularization, s=0.25",
                   str("||H_eps - H||_inf = %.4f/%.4f/%.4f/%.4f (strictly "
                       "decreasing: %s); xi_eps(0.025)=%.4f vs xi0 - 5 dx = %.4f; "
                       "max |H_eps'| %.3f (bound 1.5)",
                       sw.dist_to_exact[0], sw.dist_to_exact[1], sw.dist_to_exact[2],
                       sw.dist_to_exact[3], monotone ? "yes" : "NO", sw.xi_eps.back(),
                       sw.exact.xi0 - 5.0 * dx, lip_max));
    }

    // 13. exponent iteration: fixed point at sqrt(1 - 2s) inside its bracket
    {
        bool ok = true;
        std::string detail;
        for (double s : {0.1, 0.3, 0.45}) {
            const AlphaStarResult r = alpha_star_iteration(s, 0.5);
            const double exact = std::sqrt(1.0 - 2.0 * s);
            const double err = std::abs(r.alpha_star - exact);
            const bool leg =
                err <= 1e-9 && r.alpha_star > 1.0 - 2.0 * s && r.alpha_star < 1.0 - s;
            ok = ok && leg;
            detail += str("s=%.2f |alpha*-sqrt(1-2s)|=%.1e in (%.2f, %.2f): %s; ", s,
                          err, 1.0 - 2.0 * s, 1.0 - s, leg ? "yes" : "NO");
        }
        board.line(13, ok, "exponent iteration fixed point", detail);
    }

    // 14. mass transfer: two-sided closure at s = 0.75 and the left-window
    //     growth rate at s = 0.25
    {
        const MassTransferReport hi =
            mass_transfer_report(runs.at(0.75).prof, StefanParams{0.75, 1.0, 1.0});
        const bool hi_ok = hi.relative_mismatch <= 0.10;

        const Run wide = solve_canonical(0.25, 2.0 * kR, 2 * kN, kT);
        const MassTransferReport lo =
            mass_transfer_report(wide.prof, StefanParams{0.25, 1.0, 1.0});
        const double target = std::pow(2.0, 1.0 - 2.0 * 0.25);
        const double ratio = lo.left_half_window_ratio;
        const bool lo_ok = std::abs(ratio - target) <= 0.2 * target;
        board.line(14, hi_ok && lo_ok, "mass transfer",
                   str("s=0.75 two-sided mismatch %.4f (tol 0.10); s=0.25 left mass "
                       "[-2R,0]/[-R,0] = %.4f vs 2^{1-2s} = %.4f (tol 20%%), "
                       "divergent flag %s",
                       hi.relative_mismatch, ratio, target,
                       lo.left_divergent ? "set" : "NOT SET"));
    }

    out << "summary: " << (14 - board.failed()) << "/14 criteria pass\n";
    return board.failed();
}

}  // namespace fsp
