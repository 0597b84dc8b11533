#include "kinhj/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kinhj/ap_scheme.hpp"
#include "kinhj/action.hpp"
#include "kinhj/kinetic_scheme.hpp"
#include "kinhj/limit_scheme.hpp"
#include "kinhj/presets.hpp"

namespace kinhj {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int nearest_index(const std::vector<double>& nodes, double target) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), target);
    if (it == nodes.begin()) return 0;
    if (it == nodes.end()) return static_cast<int>(nodes.size()) - 1;
    auto prev = it - 1;
    return (target - *prev <= *it - target) ? static_cast<int>(prev - nodes.begin())
                                            : static_cast<int>(it - nodes.begin());
}

void check_run_budget(const GridSpec& g, double cap) {
    double work = static_cast<double>(g.nx) * g.nv * g.nt;
    if (work > cap)
        throw std::runtime_error("convergence_study: run exceeds the cell*step cap (" +
                                 fmt17(work) + " > " + fmt17(cap) + ")");
}

SpatialField density_log(const KineticState& s, const GridSpec& g) {
    SpatialField mu(g.nx);
    std::vector<double> col(g.nv);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.nv; ++j) col[j] = s.f(i, j);
        double rho = velocity_quadrature(col, g.dv);
        mu[i] = -s.eps * std::log(std::max(rho, std::numeric_limits<double>::min()));
    }
    return mu;
}

RunResult run_on_grid(const std::string& scheme, double eps,
                      const std::function<double(double, double)>& init,
                      const GridSpec& g) {
    RunResult r;
    r.grid = g;
    if (scheme == "limit") {
        LimitScheme sch(g);
        LimitState s = sch.initial_state(init);
        sch.run_to_final(s);
        r.phi = std::move(s.phi);
        r.mu = std::move(s.mu);
    } else if (scheme == "ap") {
        ApScheme sch(g, eps);
        ApState s = sch.initial_state(init);
        sch.run_to_final(s);
        r.phi = std::move(s.phi);
        r.mu = std::move(s.mu);
    } else if (scheme == "naive") {
        KineticScheme sch(g, eps);
        KineticState s = sch.initial_state(init);
        sch.run_to_final(s);
        r.phi = hopf_cole_of_f(s);
        r.mu = density_log(s, g);
    } else {
        throw std::invalid_argument("unknown scheme: " + scheme);
    }
    return r;
}

double slice_amplitude(const PhaseField& f, const std::string& slice, int j0) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    if (slice == "v0") {
        for (int i = 0; i < f.nx(); ++i) {
            double v = f(i, j0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    } else if (slice == "min-v") {
        for (int i = 0; i < f.nx(); ++i) {
            double m = f(i, 0);
            for (int j = 1; j < f.nv(); ++j) m = std::min(m, f(i, j));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    } else {
        throw std::invalid_argument("unknown slice: " + slice);
    }
    return hi - lo;
}

}  // namespace

GridSpec config_grid(const ExperimentConfig& cfg) {
    double dv = 2.0 * cfg.v_star / cfg.nv;
    double dt = cfg.dt;
    if (dt <= 0.0) {
        dt = 0.45 * dv * dv;  // 0.9 * dv^2/2, the stability-condition default
        if (cfg.scheme == "naive") {
            // the explicit baseline needs its CFL bound instead
            double dx = 2.0 * cfg.x_star / cfg.nx;
            double vmax = std::abs(dv * ((cfg.nv - 1) / 2.0));
            double transport = vmax > 0.0 ? dx / vmax : std::numeric_limits<double>::infinity();
            dt = std::min(dt, 0.9 * std::min(transport, cfg.eps));
        }
    }
    return build_grid(cfg.x_star, cfg.v_star, cfg.nx, cfg.nv, dt, cfg.t_final);
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    auto as_double = [&] { return std::stod(value); };
    auto as_int = [&] { return std::stoi(value); };
    auto as_list = [&] {
        std::vector<double> out;
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    if (key == "scheme") cfg.scheme = value;
    else if (key == "eps") cfg.eps = as_double();
    else if (key == "eps_list") cfg.eps_list = as_list();
    else if (key == "times") cfg.times = as_list();
    else if (key == "init") cfg.init = value;
    else if (key == "x_star") cfg.x_star = as_double();
    else if (key == "v_star") cfg.v_star = as_double();
    else if (key == "nx") cfg.nx = as_int();
    else if (key == "nv") cfg.nv = as_int();
    else if (key == "dt") cfg.dt = as_double();
    else if (key == "T") cfg.t_final = as_double();
    else if (key == "mode") cfg.mode = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "slice") cfg.slice = value;
    else if (key == "dirac_cells") cfg.dirac_cells = as_int();
    else if (key == "plateau") cfg.plateau = as_double();
    else if (key == "window_r") cfg.window_r = as_double();
    else if (key == "kernel_window") cfg.kernel_window = as_double();
    else if (key == "full_paper") cfg.full_paper = (value == "1" || value == "true");
    else if (key == "cell_step_cap") cfg.cell_step_cap = as_double();
    else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

double fit_loglog_slope(std::span<const double> p, std::span<const double> e) {
    if (p.size() != e.size() || p.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        double lx = std::log(p[k]);
        double ly = std::log(e[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double error_metric(const PhaseField& reference, const PhaseField& candidate) {
    if (!reference.same_shape(candidate))
        throw std::invalid_argument("error_metric: shape mismatch");
    double num = sup_diff(reference, candidate);
    double den = sup_norm(reference);
    return den > 0.0 ? num / den : num;
}

PhaseField restrict_field(const GridSpec& coarse, const GridSpec& fine,
                          const PhaseField& fine_field) {
    PhaseField out(coarse.nx, coarse.nv);
    std::vector<int> xi(coarse.nx), vj(coarse.nv);
    for (int i = 0; i < coarse.nx; ++i) xi[i] = nearest_index(fine.x, coarse.x[i]);
    for (int j = 0; j < coarse.nv; ++j) vj[j] = nearest_index(fine.v, coarse.v[j]);
    for (int j = 0; j < coarse.nv; ++j)
        for (int i = 0; i < coarse.nx; ++i) out(i, j) = fine_field(xi[i], vj[j]);
    return out;
}

RunResult run_once(const ExperimentConfig& cfg) {
    GridSpec g = config_grid(cfg);
    auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
    return run_on_grid(cfg.scheme, cfg.eps, init, g);
}

ErrorTable eps_sweep(const ExperimentConfig& cfg) {
    GridSpec g = config_grid(cfg);
    auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
    RunResult lim = run_on_grid("limit", 0.0, init, g);

    ErrorTable t;
    t.param_name = "eps";
    t.note = "E(eps) vs limit scheme at T=" + fmt17(cfg.t_final);
    std::vector<double> eps_sorted = cfg.eps_list;
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    for (double eps : eps_sorted) {
        RunResult ap = run_on_grid("ap", eps, init, g);
        ErrorRow row;
        row.param = eps;
        row.error = error_metric(lim.phi, ap.phi);
        row.local_order = std::numeric_limits<double>::quiet_NaN();
        if (!t.rows.empty()) {
            const ErrorRow& prev = t.rows.back();
            if (prev.error > 0.0 && row.error > 0.0)
                row.local_order =
                    std::log(prev.error / row.error) / std::log(prev.param / row.param);
        }
        t.rows.push_back(row);
    }
    std::vector<double> ps, es;
    for (const auto& r : t.rows)
        if (r.error > 0.0) {
            ps.push_back(r.param);
            es.push_back(r.error);
        }
    t.fitted_order = fit_loglog_slope(ps, es);
    return t;
}

std::vector<std::pair<double, ErrorTable>> eps_sweep_times(const ExperimentConfig& cfg) {
    std::vector<std::pair<double, ErrorTable>> out;
    for (double t : cfg.times) {
        ExperimentConfig c = cfg;
        c.t_final = t;
        out.emplace_back(t, eps_sweep(c));
    }
    return out;
}

ErrorTable convergence_study(const ExperimentConfig& cfg) {
    ErrorTable t;
    auto push_row = [&](double param, double error) {
        ErrorRow row;
        row.param = param;
        row.error = error;
        row.local_order = std::numeric_limits<double>::quiet_NaN();
        if (!t.rows.empty()) {
            const ErrorRow& prev = t.rows.back();
            if (prev.error > 0.0 && error > 0.0)
                row.local_order =
                    std::log(prev.error / error) / std::log(prev.param / param);
        }
        t.rows.push_back(row);
    };
    auto finish = [&] {
        std::vector<double> ps, es;
        for (const auto& r : t.rows)
            if (r.error > 0.0) {
                ps.push_back(r.param);
                es.push_back(r.error);
            }
        t.fitted_order = fit_loglog_slope(ps, es);
        return t;
    };

    if (cfg.mode == "conv-dv") {
        const int nx = 256;
        const double dt = 2.5e-5, T = 0.01;
        std::vector<int> cands = cfg.full_paper ? std::vector<int>{27, 81, 243, 729, 2187}
                                                : std::vector<int>{9, 27, 81, 243};
        int ref_nv = cfg.full_paper ? 59049 : 2187;
        t.param_name = "dv";
        t.note = "ref nv=" + std::to_string(ref_nv) + " nx=" + std::to_string(nx) +
                 " dt=" + fmt17(dt) + " T=" + fmt17(T) + " scheme=" + cfg.scheme;
        GridSpec ref_g = build_grid(cfg.x_star, cfg.v_star, nx, ref_nv, dt, T);
        check_run_budget(ref_g, cfg.cell_step_cap);
        auto init_ref = make_initial_data(cfg.init, ref_g, cfg.dirac_cells, cfg.plateau);
        RunResult ref = run_on_grid(cfg.scheme, cfg.eps, init_ref, ref_g);
        for (int nv : cands) {
            GridSpec g = build_grid(cfg.x_star, cfg.v_star, nx, nv, dt, T);
            check_run_budget(g, cfg.cell_step_cap);
            auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
            RunResult cand = run_on_grid(cfg.scheme, cfg.eps, init, g);
            // candidate evaluated at the reference nodes (nearest-node)
            PhaseField cand_on_ref = restrict_field(ref_g, g, cand.phi);
            push_row(g.dv, error_metric(ref.phi, cand_on_ref));
        }
        return finish();
    }

    if (cfg.mode == "conv-dx") {
        const int nv = 201;
        const double dt = 2.5e-5, T = 0.01;
        std::vector<int> cands = cfg.full_paper
                                     ? std::vector<int>{256, 512, 1024, 2048, 4096}
                                     : std::vector<int>{128, 256, 512, 1024};
        int ref_nx = cfg.full_paper ? 32768 : 4096;
        t.param_name = "dx";
        t.note = "ref nx=" + std::to_string(ref_nx) + " nv=" + std::to_string(nv) +
                 " dt=" + fmt17(dt) + " T=" + fmt17(T) + " scheme=" + cfg.scheme;
        GridSpec ref_g = build_grid(cfg.x_star, cfg.v_star, ref_nx, nv, dt, T);
        check_run_budget(ref_g, cfg.cell_step_cap);
        auto init_ref = make_initial_data(cfg.init, ref_g, cfg.dirac_cells, cfg.plateau);
        RunResult ref = run_on_grid(cfg.scheme, cfg.eps, init_ref, ref_g);
        for (int nx : cands) {
            GridSpec g = build_grid(cfg.x_star, cfg.v_star, nx, nv, dt, T);
            check_run_budget(g, cfg.cell_step_cap);
            auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
            RunResult cand = run_on_grid(cfg.scheme, cfg.eps, init, g);
            PhaseField cand_on_ref = restrict_field(ref_g, g, cand.phi);
            push_row(g.dx, error_metric(ref.phi, cand_on_ref));
        }
        return finish();
    }

    if (cfg.mode == "conv-dt") {
        const int nv = cfg.full_paper ? 101 : 41;
        const double T = 0.5;
        std::vector<int> cands = cfg.full_paper ? std::vector<int>{16, 32, 64, 128, 256}
                                                : std::vector<int>{16, 32, 64, 128};
        int ref_nt = cfg.full_paper ? 2048 : 512;
        t.param_name = "dt";
        t.note = "exact transport (dx = dt dv), ref nt=" + std::to_string(ref_nt) +
                 " nv=" + std::to_string(nv) + " T=" + fmt17(T) + " scheme=" + cfg.scheme;
        auto exact_grid = [&](int nt) {
            double dt = T / nt;
            double dv = 2.0 * cfg.v_star / nv;
            double dxt = dt * dv;
            int nxp = static_cast<int>(std::floor(2.0 * cfg.x_star / dxt));
            double xse = nxp * dxt / 2.0;
            GridSpec g = build_grid(xse, cfg.v_star, nxp, nv, dt, T);
            if (!exact_transport(transport_stencil(g)))
                throw std::runtime_error("conv-dt: grid is not exact-transport");
            return g;
        };
        GridSpec ref_g = exact_grid(ref_nt);
        check_run_budget(ref_g, cfg.cell_step_cap);
        auto init_ref = make_initial_data(cfg.init, ref_g, cfg.dirac_cells, cfg.plateau);
        RunResult ref = run_on_grid(cfg.scheme, cfg.eps, init_ref, ref_g);
        for (int nt : cands) {
            GridSpec g = exact_grid(nt);
            check_run_budget(g, cfg.cell_step_cap);
            auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
            RunResult cand = run_on_grid(cfg.scheme, cfg.eps, init, g);
            PhaseField cand_on_ref = restrict_field(ref_g, g, cand.phi);
            push_row(g.dt, error_metric(ref.phi, cand_on_ref));
        }
        return finish();
    }

    throw std::invalid_argument("convergence_study: mode must be conv-dv|conv-dx|conv-dt");
}

AmplitudeSeries amplitude_series(const ExperimentConfig& cfg) {
    GridSpec g = config_grid(cfg);
    auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
    const int j0 = (g.nv - 1) / 2;  // node nearest v = 0 (exact for odd nv)
    AmplitudeSeries out;

    auto record = [&](double time, const PhaseField& f) {
        out.t.push_back(time);
        out.amplitude.push_back(slice_amplitude(f, cfg.slice, j0));
    };

    if (cfg.scheme == "limit") {
        LimitScheme sch(g);
        LimitState s = sch.initial_state(init), next;
        record(s.time, s.phi);
        for (int k = 0; k < g.nt; ++k) {
            sch.step(s, next, (k + 1 == g.nt) ? g.dt_last : g.dt);
            std::swap(s, next);
            record(s.time, s.phi);
        }
    } else if (cfg.scheme == "ap") {
        ApScheme sch(g, cfg.eps);
        ApState s = sch.initial_state(init), next;
        record(s.time, s.phi);
        for (int k = 0; k < g.nt; ++k) {
            sch.step(s, next, (k + 1 == g.nt) ? g.dt_last : g.dt);
            std::swap(s, next);
            record(s.time, s.phi);
        }
    } else if (cfg.scheme == "naive") {
        KineticScheme sch(g, cfg.eps);
        KineticState s = sch.initial_state(init), next;
        record(s.time, hopf_cole_of_f(s));
        for (int k = 0; k < g.nt; ++k) {
            sch.step(s, next, (k + 1 == g.nt) ? g.dt_last : g.dt);
            std::swap(s, next);
            record(s.time, hopf_cole_of_f(s));
        }
    } else {
        throw std::invalid_argument("unknown scheme: " + cfg.scheme);
    }
    return out;
}

DiracResult dirac_experiment(const ExperimentConfig& cfg) {
    if (cfg.init != "dirac" && cfg.init != "two-dirac")
        throw std::invalid_argument("dirac_experiment: needs a dirac preset");
    GridSpec g = config_grid(cfg);
    auto init = make_initial_data(cfg.init, g, cfg.dirac_cells, cfg.plateau);
    bool has_support = false;
    for (int i = 0; i < g.nx && !has_support; ++i)
        has_support = init(g.x[i], 0.0) < cfg.plateau;
    if (!has_support)
        throw std::invalid_argument(
            "dirac_experiment: no grid cell falls inside the surrogate support "
            "(increase dirac_cells or use an odd nx)");
    RunResult run = run_on_grid("limit", 0.0, init, g);

    DiracResult r;
    r.grid = g;
    r.profile.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        double m = run.phi(i, 0);
        for (int j = 1; j < g.nv; ++j) m = std::min(m, run.phi(i, j));
        r.profile[i] = m;
    }

    const bool two = cfg.init == "two-dirac";
    const double T = cfg.t_final;
    int i0 = nearest_index(g.x, 0.0);
    double offset;
    if (two) {
        offset = std::min(r.profile[nearest_index(g.x, -5.0)],
                          r.profile[nearest_index(g.x, 5.0)]);
        r.x0 = g.x[i0];
    } else {
        offset = r.profile[i0];
        r.x0 = g.x[i0];
    }

    r.centered.resize(g.nx);
    r.kernel.resize(g.nx);
    r.deviation.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        r.centered[i] = r.profile[i] - offset;
        r.kernel[i] = two ? std::min(longtime_kernel(T, g.x[i] + 5.0),
                                     longtime_kernel(T, g.x[i] - 5.0))
                          : longtime_kernel(T, g.x[i]);
        r.deviation[i] = r.centered[i] - r.kernel[i];
    }

    r.window = cfg.kernel_window > 0.0 ? cfg.kernel_window
                                       : cfg.window_r * std::pow(T, 1.5);
    r.window_sup = 0.0;
    for (int i = 0; i < g.nx; ++i)
        if (std::abs(g.x[i]) <= r.window)
            r.window_sup = std::max(r.window_sup, std::abs(r.deviation[i]));
    return r;
}

// ---------------- CSV / manifest ----------------

void write_field_csv(const std::string& path, const GridSpec& g, const PhaseField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "i,j,x,v,value\n";
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nv; ++j)
            out << i << ',' << j << ',' << fmt17(g.x[i]) << ',' << fmt17(g.v[j]) << ','
                << fmt17(f(i, j)) << '\n';
}

PhaseField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    std::getline(in, line);  // header
    struct Entry {
        int i, j;
        double value;
    };
    std::vector<Entry> entries;
    int nx = 0, nv = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        Entry e{};
        std::getline(ss, tok, ',');
        e.i = std::stoi(tok);
        std::getline(ss, tok, ',');
        e.j = std::stoi(tok);
        std::getline(ss, tok, ',');  // x
        std::getline(ss, tok, ',');  // v
        std::getline(ss, tok, ',');
        e.value = std::stod(tok);
        entries.push_back(e);
        nx = std::max(nx, e.i + 1);
        nv = std::max(nv, e.j + 1);
    }
    PhaseField f(nx, nv);
    for (const auto& e : entries) f(e.i, e.j) = e.value;
    return f;
}

void write_table_csv(const std::string& path, const ErrorTable& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# param_name=" << t.param_name << '\n';
    out << "# fitted_order=" << fmt17(t.fitted_order) << '\n';
    if (!t.note.empty()) out << "# note=" << t.note << '\n';
    out << "param,error,order\n";
    for (const auto& r : t.rows)
        out << fmt17(r.param) << ',' << fmt17(r.error) << ',' << fmt17(r.local_order)
            << '\n';
}

ErrorTable read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    ErrorTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# param_name=", 0) == 0) {
            t.param_name = line.substr(13);
        } else if (line.rfind("# fitted_order=", 0) == 0) {
            t.fitted_order = std::stod(line.substr(15));
        } else if (line.rfind("# note=", 0) == 0) {
            t.note = line.substr(7);
        } else if (line.rfind("param,", 0) == 0 || line.empty()) {
            continue;
        } else {
            std::stringstream ss(line);
            std::string tok;
            ErrorRow r{};
            std::getline(ss, tok, ',');
            r.param = std::stod(tok);
            std::getline(ss, tok, ',');
            r.error = std::stod(tok);
            std::getline(ss, tok, ',');
            r.local_order = std::stod(tok);
            t.rows.push_back(r);
        }
    }
    return t;
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const GridSpec& g,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "scheme = " << cfg.scheme << '\n';
    out << "eps = " << fmt17(cfg.eps) << '\n';
    out << "init = " << cfg.init << '\n';
    out << "mode = " << cfg.mode << '\n';
    out << "x_star = " << fmt17(g.x_star) << '\n';
    out << "v_star = " << fmt17(g.v_star) << '\n';
    out << "nx = " << g.nx << '\n';
    out << "nv = " << g.nv << '\n';
    out << "dx = " << fmt17(g.dx) << '\n';
    out << "dv = " << fmt17(g.dv) << '\n';
    out << "dt = " << fmt17(g.dt) << '\n';
    out << "dt_last = " << fmt17(g.dt_last) << '\n';
    out << "nt = " << g.nt << '\n';
    out << "T = " << fmt17(g.t_final) << '\n';
    out << "slice = " << cfg.slice << '\n';
    // "x = 0" and "v = 0" are realized at the nearest cell centers
    out << "x0_center = " << fmt17(g.x[nearest_index(g.x, 0.0)]) << '\n';
    out << "v0_center = " << fmt17(g.v[(g.nv - 1) / 2]) << '\n';
    for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
}

// ---------------- CLI ----------------

namespace {

void add_common_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--scheme", cfg.scheme, "ap | limit | naive");
    sub->add_option("--eps", cfg.eps, "scaling parameter");
    sub->add_option("--init", cfg.init, "paper-init | equilibrium | dirac | two-dirac");
    sub->add_option("--T", cfg.t_final, "final time");
    sub->add_option("--nx", cfg.nx, "spatial cells");
    sub->add_option("--nv", cfg.nv, "velocity nodes (odd)");
    sub->add_option("--xstar", cfg.x_star, "spatial half-width");
    sub->add_option("--vstar", cfg.v_star, "velocity half-width");
    sub->add_option("--dt", cfg.dt, "time step (default 0.9 dv^2/2)");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--slice", cfg.slice, "v0 | min-v");
    sub->add_option("--dirac-cells", cfg.dirac_cells, "cells zeroed per Dirac");
    sub->add_flag("--full-paper", cfg.full_paper, "full-resolution references");
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    ExperimentConfig cfg;

    // --config is applied first so that explicit flags override file entries
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config") {
            if (k + 1 >= args.size()) {
                std::fprintf(stderr, "--config requires a path\n");
                return 2;
            }
            try {
                cfg = load_config_file(args[++k]);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "%s\n", e.what());
                return 2;
            }
        } else {
            rest.push_back(args[k]);
        }
    }

    CLI::App app{"solvers and experiments for the rescaled BGK equation in Hopf-Cole form"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run one scheme and dump the final fields");
    add_common_options(run_cmd, cfg);
    auto* sweep_cmd = app.add_subcommand("eps-sweep", "error of (S_eps) against (S_0)");
    add_common_options(sweep_cmd, cfg);
    sweep_cmd->add_option("--eps-list", cfg.eps_list, "eps values")->delimiter(',');
    sweep_cmd->add_option("--times", cfg.times, "measurement times")->delimiter(',');
    auto* conv_cmd = app.add_subcommand("converge", "grid-refinement study");
    add_common_options(conv_cmd, cfg);
    std::string conv_mode = "dv";
    conv_cmd->add_option("--mode", conv_mode, "dv | dx | dt")
        ->check(CLI::IsMember({"dv", "dx", "dt"}));
    auto* amp_cmd = app.add_subcommand("amplitude", "spatial amplitude over time");
    add_common_options(amp_cmd, cfg);
    auto* kern_cmd = app.add_subcommand("kernel", "Dirac surrogate vs cusp kernel");
    add_common_options(kern_cmd, cfg);
    kern_cmd->add_option("--window", cfg.kernel_window, "comparison window |x| <= w");
    kern_cmd->add_option("--window-r", cfg.window_r, "window as r T^{3/2}");

    std::vector<char*> argv_vec;
    std::string prog = "kinhj";
    argv_vec.push_back(prog.data());
    for (auto& s : rest) argv_vec.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv_vec.size()), argv_vec.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        auto path = [&](const std::string& name) { return cfg.out_dir + "/" + name; };

        if (run_cmd->parsed()) {
            cfg.mode = "run";
            RunResult r = run_once(cfg);
            write_field_csv(path("phi.csv"), r.grid, r.phi);
            {
                std::ofstream mu_out(path("mu.csv"));
                mu_out << "i,x,value\n";
                for (int i = 0; i < r.grid.nx; ++i)
                    mu_out << i << ',' << fmt17(r.grid.x[i]) << ',' << fmt17(r.mu[i])
                           << '\n';
            }
            write_manifest(path("manifest.txt"), cfg, r.grid,
                           {{"outputs", "phi.csv mu.csv"}});
            std::printf("run: wrote %s and %s\n", path("phi.csv").c_str(),
                        path("mu.csv").c_str());
        } else if (sweep_cmd->parsed()) {
            cfg.mode = "eps-sweep";
            auto sweeps = eps_sweep_times(cfg);
            std::ofstream out(path("errors.csv"));
            out << "time,eps,error,order\n";
            for (const auto& [time, table] : sweeps)
                for (const auto& r : table.rows)
                    out << fmt17(time) << ',' << fmt17(r.param) << ',' << fmt17(r.error)
                        << ',' << fmt17(r.local_order) << '\n';
            std::vector<std::pair<std::string, std::string>> extra;
            for (const auto& [time, table] : sweeps)
                extra.emplace_back("fitted_order_T" + fmt17(time), fmt17(table.fitted_order));
            write_manifest(path("manifest.txt"), cfg, config_grid(cfg), extra);
            for (const auto& [time, table] : sweeps)
                std::printf("eps-sweep: T=%g fitted order %.3f\n", time, table.fitted_order);
        } else if (conv_cmd->parsed()) {
            cfg.mode = "conv-" + conv_mode;
            ErrorTable table = convergence_study(cfg);
            write_table_csv(path("errors.csv"), table);
            write_manifest(path("manifest.txt"), cfg, config_grid(cfg),
                           {{"fitted_order", fmt17(table.fitted_order)},
                            {"study_note", table.note}});
            std::printf("converge %s: fitted order %.3f (%s)\n", conv_mode.c_str(),
                        table.fitted_order, table.note.c_str());
        } else if (amp_cmd->parsed()) {
            cfg.mode = "amplitude";
            AmplitudeSeries s = amplitude_series(cfg);
            std::ofstream out(path("amplitude.csv"));
            out << "t,amplitude\n";
            for (std::size_t k = 0; k < s.t.size(); ++k)
                out << fmt17(s.t[k]) << ',' << fmt17(s.amplitude[k]) << '\n';
            write_manifest(path("manifest.txt"), cfg, config_grid(cfg),
                           {{"final_amplitude", fmt17(s.amplitude.back())}});
            std::printf("amplitude: final %.6g\n", s.amplitude.back());
        } else if (kern_cmd->parsed()) {
            cfg.mode = "kernel";
            if (cfg.init != "dirac" && cfg.init != "two-dirac") cfg.init = "dirac";
            DiracResult r = dirac_experiment(cfg);
            std::ofstream out(path("profile.csv"));
            out << "x,profile,centered,kernel,deviation\n";
            for (int i = 0; i < r.grid.nx; ++i)
                out << fmt17(r.grid.x[i]) << ',' << fmt17(r.profile[i]) << ','
                    << fmt17(r.centered[i]) << ',' << fmt17(r.kernel[i]) << ','
                    << fmt17(r.deviation[i]) << '\n';
            write_manifest(path("manifest.txt"), cfg, r.grid,
                           {{"window", fmt17(r.window)},
                            {"window_sup", fmt17(r.window_sup)},
                            {"x0", fmt17(r.x0)}});
            std::printf("kernel: sup deviation %.6g over |x| <= %.6g\n", r.window_sup,
                        r.window);
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args);
}

}  // namespace kinhj
