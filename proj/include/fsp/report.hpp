#ifndef FSP_REPORT_HPP
#define FSP_REPORT_HPP

#include <string>
#include <vector>

#include "fsp/analysis.hpp"
#include "fsp/kernel.hpp"
#include "fsp/params.hpp"
#include "fsp/profile.hpp"

namespace fsp {

// Flat experiment description shared by the config file and the CLI flags.
struct ExperimentConfig {
    StefanParams params{0.25, 1.0, 1.0};
    double R = 100.0;
    int n = 8192;
    double cfl_safety = 0.4;
    double final_time = 1.0;
    std::vector<double> record_times;  // empty means {final_time}

    enum class Mode { kExact, kEps, kSweep };
    Mode mode = Mode::kExact;
    double eps = 0.1;
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};

    bool run_stefan = true;
    bool run_holder = true;
    bool run_blowup = true;
    bool run_tails = true;
    bool run_sandwich = false;  // needs a kernel table build; opt in
    bool run_wedge = true;
    bool run_mass = true;
    bool run_alphastar = true;

    std::string out_dir = ".";
    unsigned seed = 12345;
};

// One key = value per line, UTF-8, # comments; unknown keys are rejected
// with std::invalid_argument naming the key.
ExperimentConfig parse_config_file(const std::string& path);

// Applies a single key=value override (same key set as the file); used to
// let command-line flags win over the file.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Column contract: header `xi,H,U,dH,d2H`, one row per node, full
// round-trip precision, '.' decimal point.
void write_profile_csv(const std::string& path, const SelfSimilarProfile& pr);

// Rebuilds a profile from the CSV columns; the free boundary is re-detected
// from the H column at level L.  Throws std::runtime_error on a missing
// file and std::invalid_argument on a malformed one.
SelfSimilarProfile read_profile_csv(const std::string& path, const StefanParams& p);

// Kernel table dump: header `x,B,cdf`.
void write_kernel_csv(const std::string& path, const KernelTable& table);

// Full analysis pass over one profile driven by the config toggles;
// returns the report serialized as deterministic JSON with top-level keys
// config, xi0, fits, stefan_formula, wedge, sandwich, checks, timings,
// schema_version.  Fits inapplicable to the regime of s are skipped.
std::string analysis_report_json(const ExperimentConfig& cfg,
                                 const SelfSimilarProfile& pr,
                                 double solve_seconds);

// Serializes the config alone (the `config` object of the report).
std::string config_json(const ExperimentConfig& cfg);

// Writes a string to a file, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fsp

#endif
