#include "vibrodyn/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace vibrodyn {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
    }
    fs::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "time_hbar_per_eV,time_fs,re_sigma,im_sigma,abs_sigma,D,re_b,im_b\n";
    const Eigen::VectorXcd sigma_lab = expval(traj, "sigma", /*lab_frame=*/true);
    const Eigen::VectorXcd& D = traj.record("D");
    const Eigen::VectorXcd& b = traj.record("b");
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        const double t = traj.times[m];
        out += format_number(t) + "," + format_number(t * kFsPerHbarEv) + "," +
               format_number(sigma_lab(m).real()) + "," + format_number(sigma_lab(m).imag()) +
               "," + format_number(std::abs(sigma_lab(m))) + "," +
               format_number(D(m).real()) + "," + format_number(b(m).real()) + "," +
               format_number(b(m).imag()) + "\n";
    }
    return out;
}

std::string spectrum_csv(const Spectrum& s) {
    std::string out = "omega_eV,power\n";
    for (std::size_t k = 0; k < s.frequencies.size(); ++k)
        out += format_number(s.frequencies[k]) + "," + format_number(s.amplitude[k]) + "\n";
    return out;
}

ordered_json config_json(const RunSpec& spec) {
    ordered_json j;
    std::istringstream in(serialize_config(spec));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(' ') + 1);
        val.erase(0, val.find_first_not_of(' '));
        j[key] = val;
    }
    return j;
}

ordered_json collapse_json(const CollapseRevival& cr) {
    ordered_json j;
    j["collapsed"] = cr.collapsed;
    j["t_col"] = cr.collapsed ? cr.t_col : 0.0;
    j["initial_max"] = cr.initial_max;
    j["revivals"] = cr.revivals;
    j["revival_heights"] = cr.revival_heights;
    return j;
}

double rot_frame_bandwidth(const EigenBasis& basis, double omega_drive) {
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < basis.dim(); ++k) {
        double e = basis.energies[k];
        if (basis.is_excited(k)) e -= omega_drive;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return hi - lo;
}

} // namespace

RunResult run_single(const RunSpec& spec, bool write_files) {
    RunResult res;
    const SystemParams& p = spec.params;
    const EigenBasis basis = build_basis(p);
    const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);

    const double dt = spec.t_end / double(spec.grid_points - 1);
    const double bw = rot_frame_bandwidth(basis, p.omega_drive);
    if (bw >= M_PI / dt)
        throw ConfigError("grid does not resolve the fastest retained frequency (" +
                          format_number(bw) + " eV >= Nyquist " + format_number(M_PI / dt) +
                          " eV); increase grid_points or reduce t_end");

    std::vector<OperatorRep> obs{op_sigma(basis, fc), op_D(basis), op_b(basis),
                                 op_number_vibron(basis)};

    EvolveOptions eopts;
    eopts.grid_points = spec.grid_points;
    eopts.step = spec.step;

    if (spec.mode == RunMode::lindblad || spec.mode == RunMode::both) {
        DensityMatrix rho0 = initial_state(p, &res.thermal_tail);
        if (res.thermal_tail > 1e-8)
            std::cerr << "warning: thermal tail beyond truncation = "
                      << format_number(res.thermal_tail) << "\n";
        const GeneratorSchedule sched = assemble(p, basis, fc, spec.cfg);
        res.lindblad = evolve_density(rho0, sched, spec.t_end, obs, eopts);
    }
    if (spec.mode == RunMode::pure || spec.mode == RunMode::both) {
        StateVector psi0;
        psi0.amplitudes = Eigen::VectorXcd::Zero(basis.dim());
        psi0.amplitudes(0) = 1.0;
        res.pure = evolve_pure(psi0, p, basis, fc, spec.t_end, obs, eopts);
    }

    const Trajectory& traj = res.primary();

    // Spectrum of the recorded polarization. The complex-sigma spectrum is
    // computed from the rotating-frame series with the frequency axis mapped
    // back to the lab; |sigma| is frame-invariant and keeps a zero shift.
    SpectrumOptions sopt;
    sopt.window = spec.window;
    if (spec.spectrum_of == SpectrumOf::sigma) {
        sopt.lab_shift = p.omega_drive;
        sopt.span_lo = std::min(p.omega_sigma - 10.0 * p.omega_v, p.omega_drive) - p.omega_v;
        sopt.span_hi = std::max(p.omega_sigma + 10.0 * p.omega_v, p.omega_drive) + p.omega_v;
        res.spec = spectrum(traj.record("sigma"), traj.times, sopt);
    } else {
        Eigen::VectorXcd abs_series = traj.record("sigma");
        for (Eigen::Index m = 0; m < abs_series.size(); ++m)
            abs_series(m) = std::abs(abs_series(m));
        res.spec = spectrum(abs_series, traj.times, sopt);
    }
    res.peaks = find_peaks(res.spec, spec.peak_prominence);

    const Eigen::VectorXd env = envelope(traj.record("sigma"), traj.times);
    res.collapse = detect_collapse_revival(env, traj.times, p.omega_v, spec.detect);
    if (spec.mode == RunMode::both && res.pure) {
        const Eigen::VectorXd env_p = envelope(res.pure->record("sigma"), res.pure->times);
        res.collapse_pure = detect_collapse_revival(env_p, res.pure->times, p.omega_v, spec.detect);
    }
    res.estimate = estimate_collapse_time(p);

    if (spec.check_convergence) {
        res.convergence_checked = true;
        const int N_lo = std::max(4, p.N - 4);
        res.convergence = converge_in_truncation(p, spec.cfg, spec.mode == RunMode::pure,
                                                 spec.t_end, {N_lo, p.N}, eopts);
        if (!res.convergence.converged) res.exit_code = 3;
    }

    if (write_files) {
        fs::create_directories(spec.output_dir);
        const fs::path dir(spec.output_dir);
        if (res.lindblad) atomic_write(dir / "trajectory.csv", trajectory_csv(*res.lindblad));
        if (res.pure)
            atomic_write(dir / (res.lindblad ? "trajectory_pure.csv" : "trajectory.csv"),
                         trajectory_csv(*res.pure));
        atomic_write(dir / "spectrum.csv", spectrum_csv(res.spec));

        ordered_json j;
        j["version"] = kVersionTag;
        if (!spec.preset_name.empty()) j["preset"] = spec.preset_name;
        j["config"] = config_json(spec);
        j["results"]["rayleigh_weight"] = res.spec.rayleigh_weight;
        ordered_json peaks = ordered_json::array();
        for (const auto& pk : res.peaks.peaks)
            peaks.push_back({{"center_eV", pk.center}, {"width_eV", pk.width},
                             {"height", pk.height}});
        j["results"]["peaks"] = peaks;
        j["results"]["collapse_revival"] = collapse_json(res.collapse);
        if (res.collapse_pure) j["results"]["collapse_revival_pure"] = collapse_json(*res.collapse_pure);
        j["results"]["analytic"] = {{"alpha", res.estimate.alpha},
                                    {"M_alpha", res.estimate.M_alpha},
                                    {"divergent", res.estimate.divergent},
                                    {"t_col", res.estimate.divergent ? 0.0 : res.estimate.t_col_analytic},
                                    {"t_col_alt", res.estimate.divergent ? 0.0 : res.estimate.t_col_alt},
                                    {"t_rev", res.estimate.t_rev_analytic}};
        const Trajectory& tj = traj;
        j["diagnostics"] = {{"max_trace_drift", tj.max_trace_drift},
                            {"max_hermiticity_deviation", tj.max_herm_dev},
                            {"min_monitored_eigenvalue", tj.min_eigenvalue},
                            {"integrator_steps", tj.n_steps},
                            {"integrator_rejected", tj.n_rejected},
                            {"thermal_tail", res.thermal_tail}};
        ordered_json conv;
        conv["N"] = p.N;
        conv["margin_rule_N"] = required_truncation(basis.alpha);
        conv["satisfies_margin_rule"] = p.N >= required_truncation(basis.alpha);
        if (res.convergence_checked) {
            conv["ladder_N"] = res.convergence.Ns;
            conv["ladder_max_abs_diff"] = res.convergence.max_abs_diff;
            conv["converged"] = res.convergence.converged;
        }
        j["convergence"] = conv;
        atomic_write(dir / "result.json", j.dump(2) + "\n");
    }
    return res;
}

std::vector<SweepRow> run_sweep(const RunSpec& spec, bool write_files) {
    if (spec.sweep_values.empty())
        throw ConfigError("sweep: no sweep_values given (key 'sweep_values')");
    SweepOptions opts;
    opts.lindblad = spec.sweep_lindblad;
    opts.t_end = spec.sweep_t_end;
    opts.grid_points = spec.grid_points;
    opts.threads = spec.threads;
    opts.detect = spec.detect;
    opts.cfg = spec.cfg;
    const auto rows = sweep(spec.params, spec.sweep_vary, spec.sweep_values, opts);

    if (write_files) {
        fs::create_directories(spec.output_dir);
        const fs::path dir(spec.output_dir);
        std::string csv = "value,t_col_num,t_col_analytic,t_rev_num,t_rev_analytic,N,status\n";
        for (const auto& r : rows)
            csv += format_number(r.value) + "," + format_number(r.t_col_num) + "," +
                   format_number(r.t_col_analytic) + "," + format_number(r.t_rev_num) + "," +
                   format_number(r.t_rev_analytic) + "," + std::to_string(r.N_used) + "," +
                   r.status + "\n";
        atomic_write(dir / "sweep.csv", csv);

        ordered_json j;
        j["version"] = kVersionTag;
        if (!spec.preset_name.empty()) j["preset"] = spec.preset_name;
        j["config"] = config_json(spec);
        ordered_json table = ordered_json::array();
        for (const auto& r : rows)
            table.push_back({{"value", r.value},
                             {"t_col_num", r.t_col_num},
                             {"t_col_analytic", r.t_col_analytic},
                             {"t_rev_num", r.t_rev_num},
                             {"t_rev_analytic", r.t_rev_analytic},
                             {"N", r.N_used},
                             {"status", r.status}});
        j["table"] = table;
        atomic_write(dir / "sweep.json", j.dump(2) + "\n");
    }
    return rows;
}

} // namespace vibrodyn
