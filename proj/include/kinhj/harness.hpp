#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kinhj/grid.hpp"

namespace kinhj {

/// Resolved settings of one experiment. Defaults reproduce the desk-scale
/// setup; full_paper switches the convergence studies to the full reference
/// resolutions (excluded from CI).
struct ExperimentConfig {
    std::string scheme = "limit";  // ap | limit | naive
    double eps = 1.0;
    std::vector<double> eps_list = {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
    std::vector<double> times = {0.15, 1.5};
    std::string init = "paper-init";
    double x_star = 10.0;
    double v_star = 10.0;
    int nx = 64;
    int nv = 61;
    double dt = 0.0;  ///< 0 = default 0.9 dv^2/2 (CFL-limited for naive)
    double t_final = 1.5;
    std::string mode = "run";  // run | eps-sweep | conv-dx | conv-dv | conv-dt | amplitude | kernel
    std::string out_dir = "out";
    std::string slice = "v0";  // v0 | min-v
    int dirac_cells = 2;       ///< on odd grids this resolves to the single x = 0 cell
    double plateau = 100.0;
    double window_r = 0.4;       ///< kernel window |x| <= window_r * T^{3/2}
    double kernel_window = 0.0;  ///< explicit window override (0 = use window_r)
    bool full_paper = false;
    double cell_step_cap = 8e9;  ///< guard: cells*steps per run
};

/// Grid implied by a config (applies the default-dt rule).
GridSpec config_grid(const ExperimentConfig& cfg);

/// Flat key = value file ('#' comments); unknown keys throw.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

struct ErrorRow {
    double param = 0.0;
    double error = 0.0;
    double local_order = 0.0;  ///< NaN on the first row
};

struct ErrorTable {
    std::string param_name;
    std::vector<ErrorRow> rows;
    double fitted_order = 0.0;  ///< least-squares log-log slope
    std::string note;
};

/// Least-squares slope of ln(e) against ln(p).
double fit_loglog_slope(std::span<const double> p, std::span<const double> e);

/// Relative sup-norm error |ref - cand|_inf / |ref|_inf. Shapes must match.
double error_metric(const PhaseField& reference, const PhaseField& candidate);

/// Samples a fine-grid field at the nodes of a coarse grid (nearest node in
/// x and v); used when comparing runs of different resolution.
PhaseField restrict_field(const GridSpec& coarse, const GridSpec& fine,
                          const PhaseField& fine_field);

/// One full run of the configured scheme; phi holds the Hopf-Cole field
/// (psi for the naive scheme), mu the velocity marginal (-eps ln rho for
/// naive, min over v for the limit scheme).
struct RunResult {
    GridSpec grid;
    PhaseField phi;
    SpatialField mu;
};
RunResult run_once(const ExperimentConfig& cfg);

/// E(eps) = error_metric(limit solution, AP solution) across cfg.eps_list at
/// t_final, one shared grid.
ErrorTable eps_sweep(const ExperimentConfig& cfg);

/// eps sweep at each entry of cfg.times.
std::vector<std::pair<double, ErrorTable>> eps_sweep_times(const ExperimentConfig& cfg);

/// Grid-refinement study; cfg.mode selects conv-dv / conv-dx / conv-dt.
/// The dt study uses exact-transport grids (dx = dt dv).
ErrorTable convergence_study(const ExperimentConfig& cfg);

struct AmplitudeSeries {
    std::vector<double> t;
    std::vector<double> amplitude;
};

/// max_i - min_i of the selected slice ("v0": row nearest v = 0,
/// "min-v": min over velocities) recorded at every step.
AmplitudeSeries amplitude_series(const ExperimentConfig& cfg);

struct DiracResult {
    GridSpec grid;
    std::vector<double> profile;    ///< min_v phi(T, x_i)
    std::vector<double> centered;   ///< profile - plateau offset at the support
    std::vector<double> kernel;     ///< continuum prediction per node
    std::vector<double> deviation;  ///< centered - kernel (single-dirac mode)
    double window = 0.0;
    double window_sup = 0.0;  ///< sup |deviation| over |x| <= window
    double x0 = 0.0;          ///< coordinate used as "x = 0"
};

/// Limit-scheme run from the Dirac surrogate plus cusp-kernel comparison.
DiracResult dirac_experiment(const ExperimentConfig& cfg);

// ------- CSV / manifest -------

void write_field_csv(const std::string& path, const GridSpec& g, const PhaseField& f);
/// Reads a field CSV written by write_field_csv (shape inferred).
PhaseField read_field_csv(const std::string& path);
void write_table_csv(const std::string& path, const ErrorTable& t);
ErrorTable read_table_csv(const std::string& path);
void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const GridSpec& g,
                    const std::vector<std::pair<std::string, std::string>>& extra = {});

/// CLI entry: subcommands run | eps-sweep | converge | amplitude | kernel.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, char** argv);

}  // namespace kinhj
