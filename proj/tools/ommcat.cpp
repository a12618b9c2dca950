// ommcat: two-step mechanical cat-state pipeline
//   squeeze   steady-state magnomechanical squeezing (covariance + Wigner)
//   sweep     squeezing vs drive ratio / temperature / coupling
//   subtract  pulsed phonon subtraction conditioned on photon counts
//   wigner    Fock-basis Wigner map of a stored state
//   fidelity  best cat-state match of a stored state
//   pipeline  squeeze -> subtract(k=1,2) -> wigner -> fidelity in one run
//
// Exit codes: 0 success, 1 usage/config, 2 unstable physics, 3 validity.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "omm/analysis.hpp"
#include "omm/constants.hpp"
#include "omm/errors.hpp"
#include "omm/fock.hpp"
#include "omm/gaussian.hpp"
#include "omm/io.hpp"
#include "omm/params.hpp"
#include "omm/subtraction.hpp"

namespace fs = std::filesystem;
using omm::io::json;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    int jobs = 1;
    bool dry_run = false;
    bool strict = false;

    // sweep
    std::string axis;
    double from = 0.0, to = 0.0;
    int points = 0;
    bool optimize = false;

    // subtract
    int k = 1;
    std::string input_path;

    // wigner / fidelity
    std::string state_path;
    std::string prefix = "wigner";
    std::string parity_flag = "auto";
    double alpha_max = 3.0;
    bool phase_search = false;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    int nx = 0, ny = 0;
};

class StageTimer {
  public:
    StageTimer() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

json load_tree(const Cli& cli) {
    json tree;
    if (!cli.config_path.empty())
        tree = omm::io::load_config_file(cli.config_path);
    else
        tree = json{{"schema_version", omm::io::schema_version}};
    for (const auto& ov : cli.overrides) omm::io::apply_override(tree, ov);
    return tree;
}

fs::path resolve_out_dir(const Cli& cli, const omm::io::RunConfig& cfg) {
    std::string dir = cfg.output.dir;
    if (const char* env = std::getenv("OMMCAT_OUT_DIR"); env && *env) dir = env;
    if (!cli.out_dir.empty()) dir = cli.out_dir;
    fs::create_directories(dir);
    return dir;
}

void emit_warnings(const std::vector<std::string>& warnings, omm::io::Manifest& man) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << "\n";
        man.add_warning(w);
    }
}

struct SqueezeResult {
    Eigen::Matrix4d V;
    Eigen::Matrix2d V_b;
    double S_db = 0.0;
    omm::fock::SqueezedThermalParams stp;
};

// Shared by cmd_squeeze and cmd_pipeline. Throws UnstableSystem for G+ >= G-
// (the anti-Stokes drive must dominate) and for an unstable drift spectrum.
SqueezeResult run_squeeze_stage(const omm::io::RunConfig& cfg, omm::io::Manifest& man) {
    if (cfg.drive.G_plus >= cfg.drive.G_minus)
        throw omm::UnstableSystem(
            "unstable configuration: G_plus must stay below G_minus "
            "(anti-Stokes scattering must dominate)");
    const auto A = omm::gaussian::build_drift(cfg.drive, cfg.system);
    if (!omm::gaussian::stable(A))
        throw omm::UnstableSystem(
            "unstable drift matrix: max Re(eigenvalue) = " +
            omm::io::format_double(omm::gaussian::max_real_eigenvalue(A)) + " rad/s");

    SqueezeResult r;
    const auto D = omm::gaussian::build_diffusion(cfg.system);
    r.V = omm::gaussian::solve_lyapunov(A, D);
    r.V_b = omm::gaussian::mechanical_block(r.V);
    r.S_db = omm::gaussian::squeezing_db(r.V_b);
    r.stp = omm::fock::cm_to_squeezed_thermal(r.V_b);

    man.add_derived("N_m", omm::thermal_occupation(cfg.system.omega_m, cfg.system.T));
    man.add_derived("N_b", omm::thermal_occupation(cfg.system.omega_b, cfg.system.T));
    man.add_derived("stability",
                    json{{"stable", true},
                         {"max_re_eigenvalue", omm::gaussian::max_real_eigenvalue(A)}});
    man.add_derived("S_db", r.S_db);
    man.add_derived("V_b", json::array({r.V_b(0, 0), r.V_b(0, 1), r.V_b(1, 0), r.V_b(1, 1)}));
    man.add_derived("squeezed_thermal",
                    json{{"r", r.stp.r}, {"phi", r.stp.phi}, {"nbar", r.stp.n_bar}});
    return r;
}

int cmd_squeeze(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {"system", "drive"});
    const fs::path out = resolve_out_dir(cli, cfg);
    omm::io::Manifest man("squeeze");
    man.set_resolved_config(cfg.resolved);
    emit_warnings(omm::validity_warnings(cfg.system, &cfg.drive, nullptr), man);

    if (cli.dry_run) {
        omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
        return 0;
    }
    StageTimer timer;
    const SqueezeResult r = run_squeeze_stage(cfg, man);
    man.add_timing_ms("squeeze", timer.ms());

    omm::io::write_json_file((out / "cm.json").string(), omm::io::cm_to_json(r.V));
    man.add_artifact("cm.json");
    if (cfg.output.write_wigner_csv) {
        StageTimer wt;
        const auto w = omm::gaussian::gaussian_wigner(r.V_b, cfg.numerics.grid);
        omm::io::write_wigner_csv(w, (out / "wigner_gaussian.csv").string());
        omm::io::write_json_file((out / "wigner_gaussian.json").string(),
                                 omm::io::wigner_sidecar(w, r.V_b.determinant()));
        man.add_artifact("wigner_gaussian.csv");
        man.add_artifact("wigner_gaussian.json");
        man.add_timing_ms("wigner_gaussian", wt.ms());
    }
    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    std::cout << "S = " << r.S_db << " dB; V_b = [" << r.V_b(0, 0) << ", "
              << r.V_b(0, 1) << "; " << r.V_b(1, 0) << ", " << r.V_b(1, 1) << "]\n";
    return 0;
}

int cmd_sweep(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {"system", "drive"});
    const fs::path out = resolve_out_dir(cli, cfg);
    if (cli.points < 2) throw omm::ConfigError("sweep needs at least 2 points");
    if (cli.axis != "ratio" && cli.axis != "T" && cli.axis != "G_minus")
        throw omm::ConfigError("sweep axis must be one of ratio, T, G_minus");
    if (cli.axis == "ratio" && cli.optimize)
        throw omm::ConfigError("--optimize is meaningless for the ratio axis");

    omm::io::Manifest man("sweep");
    man.set_resolved_config(cfg.resolved);
    emit_warnings(omm::validity_warnings(cfg.system, &cfg.drive, nullptr), man);
    if (cli.dry_run) {
        omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
        return 0;
    }

    StageTimer timer;
    std::vector<omm::io::SweepRow> rows(cli.points);
    const double base_ratio =
        cfg.drive.G_minus > 0.0 ? cfg.drive.G_plus / cfg.drive.G_minus : 0.0;

    auto run_point = [&](int i) {
        const double x = cli.from + (cli.to - cli.from) * i / (cli.points - 1);
        omm::SystemParams sys = cfg.system;
        double G_minus = cfg.drive.G_minus;
        double ratio = base_ratio;
        if (cli.axis == "ratio") ratio = x;
        else if (cli.axis == "T") sys.T = x;
        else G_minus = omm::constants::two_pi * x;

        omm::io::SweepRow row;
        row.T = sys.T;
        row.G_minus_over_2pi = G_minus / omm::constants::two_pi;
        try {
            if (cli.optimize) {
                const auto opt = omm::gaussian::optimize_ratio(sys, G_minus);
                row.ratio = opt.ratio;
                row.S_db = opt.S_db;
                row.stable = true;
            } else {
                row.ratio = ratio;
                auto [s, ok] = omm::gaussian::squeezing_at_ratio(sys, G_minus, ratio);
                row.S_db = s;
                row.stable = ok;
            }
        } catch (const omm::UnstableSystem&) {
            row.ratio = std::numeric_limits<double>::quiet_NaN();
            row.S_db = std::numeric_limits<double>::quiet_NaN();
            row.stable = false;  // flagged, run continues
        }
        rows[i] = row;
    };

    if (cli.jobs <= 1) {
        for (int i = 0; i < cli.points; ++i) run_point(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(cli.jobs, cli.points); ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < cli.points; i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }
    man.add_timing_ms("sweep", timer.ms());
    omm::io::write_sweep_csv(rows, (out / "sweep.csv").string());
    man.add_artifact("sweep.csv");
    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    return 0;
}

// Builds the mechanical input state for subtraction from a stored artifact:
// covariance files run through the (r, phi, nbar) bridge; fock containers load
// directly.
omm::fock::DensityMatrix load_subtract_input(const std::string& path,
                                             const omm::io::RunConfig& cfg,
                                             omm::io::Manifest& man) {
    const json j = omm::io::read_json_file(path);
    const std::string kind = j.value("kind", "");
    if (kind == "covariance") {
        const Eigen::MatrixXd V = omm::io::cm_from_json(j);
        const Eigen::Matrix2d V_b = (V.rows() == 4)
                                        ? Eigen::Matrix2d(V.block<2, 2>(2, 2))
                                        : Eigen::Matrix2d(V);
        const auto stp = omm::fock::cm_to_squeezed_thermal(V_b);
        man.add_derived("squeezed_thermal",
                        json{{"r", stp.r}, {"phi", stp.phi}, {"nbar", stp.n_bar}});
        return omm::fock::squeezed_thermal(stp, cfg.numerics.n_trunc_b,
                                           cfg.numerics.leakage_budget,
                                           cfg.numerics.allow_leakage);
    }
    return omm::io::density_from_json(j);
}

int cmd_subtract(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {"system", "pulse"});
    const fs::path out = resolve_out_dir(cli, cfg);
    omm::io::Manifest man("subtract");
    man.set_resolved_config(cfg.resolved);

    const auto th = omm::io::resolve_theta(cfg.system, cfg.pulse);
    man.add_derived("E", th.chain.E);
    man.add_derived("G_c", th.chain.G_c);
    man.add_derived("G", th.chain.G);
    man.add_derived("theta", th.theta);
    man.add_derived("tan_theta", th.tan_theta);
    man.add_derived("theta_source", th.source);
    if (th.discrepancy) {
        std::cerr << "warning: " << *th.discrepancy << "\n";
        man.add_warning(*th.discrepancy);
    }
    emit_warnings(omm::validity_warnings(cfg.system, nullptr, &th.tan_theta), man);
    if (th.tan_theta * th.tan_theta > 0.2)
        throw omm::ValidityError(
            "tan^2(theta) = " + omm::io::format_double(th.tan_theta * th.tan_theta) +
            " > 0.2: the second-order pulse expansion is invalid");
    if (cli.k < 0 || cli.k > cfg.numerics.n_trunc_c)
        throw omm::ConfigError("k = " + std::to_string(cli.k) +
                               " outside the cavity truncation n_trunc_c = " +
                               std::to_string(cfg.numerics.n_trunc_c));
    if (cli.dry_run) {
        omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
        return 0;
    }

    StageTimer timer;
    const auto rho_in = load_subtract_input(cli.input_path, cfg, man);
    man.add_derived("input_leakage", rho_in.leakage);
    const auto cs = omm::subtraction::subtract_phonons(
        rho_in, th.theta, cli.k, cfg.numerics.n_trunc_c, cfg.detection_eta,
        cfg.numerics.guard_b, cfg.numerics.guard_c);
    man.add_timing_ms("subtract", timer.ms());
    const double par = omm::analysis::parity(cs.rho_b);
    man.add_derived("k", cs.n_detected);
    man.add_derived("probability", cs.probability);
    man.add_derived("parity", par);
    if (cli.k > 0)
        man.add_derived("p_over_tan2k",
                        cs.probability / std::pow(th.tan_theta * th.tan_theta, cli.k));

    const std::string name = "state_k" + std::to_string(cli.k) + ".json";
    omm::io::write_json_file((out / name).string(), omm::io::state_to_json(cs));
    man.add_artifact(name);
    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    std::cout << "k = " << cs.n_detected << ": p = " << cs.probability
              << ", parity = " << par << "\n";
    return 0;
}

omm::GridSpec grid_from_cli(const Cli& cli, const omm::GridSpec& base) {
    omm::GridSpec g = base;
    if (cli.nx > 0) g.nx = cli.nx;
    if (cli.ny > 0) g.ny = cli.ny;
    if (cli.x_max > cli.x_min) {
        g.x_min = cli.x_min;
        g.x_max = cli.x_max;
    }
    if (cli.y_max > cli.y_min) {
        g.y_min = cli.y_min;
        g.y_max = cli.y_max;
    }
    return g;
}

int cmd_wigner(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {});
    const fs::path out = resolve_out_dir(cli, cfg);
    omm::io::Manifest man("wigner");
    man.set_resolved_config(cfg.resolved);

    const auto rho = omm::io::density_from_json(omm::io::read_json_file(cli.state_path));
    const omm::GridSpec grid = grid_from_cli(cli, cfg.numerics.grid);
    StageTimer timer;
    const auto w = omm::analysis::wigner_fock(rho, grid, cli.jobs);
    man.add_timing_ms("wigner", timer.ms());

    const double integral = w.integral();
    if (integral < 0.999 || integral > 1.001) {
        const std::string msg =
            "wigner window too small: integral = " + omm::io::format_double(integral);
        std::cerr << "warning: " << msg << "\n";
        man.add_warning(msg);
    }

    omm::io::write_wigner_csv(w, (out / (cli.prefix + ".csv")).string());
    omm::io::write_json_file((out / (cli.prefix + ".json")).string(),
                             omm::io::wigner_sidecar(w));
    man.add_artifact(cli.prefix + ".csv");
    man.add_artifact(cli.prefix + ".json");
    man.add_derived("parity", omm::analysis::parity(rho));
    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    return 0;
}

int cmd_fidelity(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {});
    const fs::path out = resolve_out_dir(cli, cfg);
    omm::io::Manifest man("fidelity");
    man.set_resolved_config(cfg.resolved);

    const json state_json = omm::io::read_json_file(cli.state_path);
    const auto rho = omm::io::density_from_json(state_json);
    const double par = omm::analysis::parity(rho);

    bool even = par >= 0.0;
    if (cli.parity_flag == "even") even = true;
    else if (cli.parity_flag == "odd") even = false;
    else if (cli.parity_flag != "auto")
        throw omm::ConfigError("--parity must be auto, even, or odd");
    if ((even && par < 0.0) || (!even && par > 0.0)) {
        const std::string msg = "parity flag disagrees with the state: <P> = " +
                                omm::io::format_double(par);
        if (cli.strict) throw omm::ConfigError(msg);
        std::cerr << "warning: " << msg << "\n";
        man.add_warning(msg);
    }

    StageTimer timer;
    const auto opt = omm::analysis::best_cat_fidelity(rho, even, cli.alpha_max,
                                                      cli.phase_search);
    const auto w = omm::analysis::wigner_fock(rho, cfg.numerics.grid, cli.jobs);
    man.add_timing_ms("fidelity", timer.ms());

    json report;
    report["schema_version"] = omm::io::schema_version;
    report["alpha_star"] = opt.alpha;
    report["alpha_phase"] = opt.phase;
    report["F_star"] = opt.fidelity;
    report["parity"] = par;
    report["target_parity"] = even ? "even" : "odd";
    report["negativity_volume"] = omm::analysis::negativity_volume(w);
    report["wigner_integral"] = w.integral();
    if (state_json.contains("k")) report["k"] = state_json["k"];
    if (state_json.contains("probability")) report["probability"] = state_json["probability"];
    omm::io::write_json_file((out / "report.json").string(), report);
    man.add_artifact("report.json");
    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    std::cout << "F* = " << opt.fidelity << " at alpha = " << opt.alpha << "\n";
    return 0;
}

int cmd_pipeline(const Cli& cli) {
    const auto cfg = omm::io::parse_config(load_tree(cli), {"system", "drive", "pulse"});
    const fs::path out = resolve_out_dir(cli, cfg);
    omm::io::Manifest man("pipeline");
    man.set_resolved_config(cfg.resolved);
    emit_warnings(omm::validity_warnings(cfg.system, &cfg.drive, nullptr), man);

    const auto th = omm::io::resolve_theta(cfg.system, cfg.pulse);
    man.add_derived("E", th.chain.E);
    man.add_derived("G_c", th.chain.G_c);
    man.add_derived("G", th.chain.G);
    man.add_derived("theta", th.theta);
    man.add_derived("tan_theta", th.tan_theta);
    man.add_derived("theta_source", th.source);
    if (th.discrepancy) {
        std::cerr << "warning: " << *th.discrepancy << "\n";
        man.add_warning(*th.discrepancy);
    }

    if (cli.dry_run) {
        omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
        return 0;
    }

    const fs::path fail_marker = out / "FAILED";
    std::error_code ec;
    fs::remove(fail_marker, ec);
    std::string stage = "squeeze";
    try {
        StageTimer t1;
        const SqueezeResult sq = run_squeeze_stage(cfg, man);
        omm::io::write_json_file((out / "cm.json").string(), omm::io::cm_to_json(sq.V));
        man.add_artifact("cm.json");
        const auto wg = omm::gaussian::gaussian_wigner(sq.V_b, cfg.numerics.grid);
        omm::io::write_wigner_csv(wg, (out / "wigner_gaussian.csv").string());
        omm::io::write_json_file((out / "wigner_gaussian.json").string(),
                                 omm::io::wigner_sidecar(wg, sq.V_b.determinant()));
        man.add_artifact("wigner_gaussian.csv");
        man.add_artifact("wigner_gaussian.json");
        man.add_timing_ms("squeeze", t1.ms());

        stage = "subtract";
        if (th.tan_theta * th.tan_theta > 0.2)
            throw omm::ValidityError("tan^2(theta) > 0.2: pulse expansion invalid");
        StageTimer t2;
        const auto rho_in = omm::fock::squeezed_thermal(
            sq.stp, cfg.numerics.n_trunc_b, cfg.numerics.leakage_budget,
            cfg.numerics.allow_leakage);
        man.add_derived("input_leakage", rho_in.leakage);
        // one evolution, conditioned on k = 1 and k = 2
        const auto joint = omm::subtraction::evolve_mixed(
            rho_in, th.theta, cfg.numerics.n_trunc_c, cfg.numerics.guard_b,
            cfg.numerics.guard_c);
        man.add_derived("joint_leakage", joint.leakage);
        json pk = json::object(), parities = json::object();
        std::vector<omm::subtraction::ConditionedState> states;
        for (int k : {1, 2}) {
            auto cs = omm::subtraction::condition_on_photons(joint, k, cfg.detection_eta);
            pk["k" + std::to_string(k)] = cs.probability;
            parities["k" + std::to_string(k)] = omm::analysis::parity(cs.rho_b);
            const std::string name = "state_k" + std::to_string(k) + ".json";
            omm::io::write_json_file((out / name).string(), omm::io::state_to_json(cs));
            man.add_artifact(name);
            states.push_back(std::move(cs));
        }
        man.add_derived("p_k", pk);
        man.add_derived("parity", parities);
        man.add_timing_ms("subtract", t2.ms());

        stage = "wigner";
        StageTimer t3;
        json negs = json::object();
        for (const auto& cs : states) {
            const auto w = omm::analysis::wigner_fock(cs.rho_b, cfg.numerics.grid, cli.jobs);
            const std::string base = "wigner_k" + std::to_string(cs.n_detected);
            omm::io::write_wigner_csv(w, (out / (base + ".csv")).string());
            omm::io::write_json_file((out / (base + ".json")).string(),
                                     omm::io::wigner_sidecar(w));
            man.add_artifact(base + ".csv");
            man.add_artifact(base + ".json");
            negs["k" + std::to_string(cs.n_detected)] = omm::analysis::negativity_volume(w);
        }
        man.add_derived("negativity_volume", negs);
        man.add_timing_ms("wigner", t3.ms());

        stage = "fidelity";
        StageTimer t4;
        json fid = json::object();
        for (const auto& cs : states) {
            const bool even = cs.n_detected % 2 == 0;
            const auto opt = omm::analysis::best_cat_fidelity(cs.rho_b, even,
                                                              cli.alpha_max,
                                                              cli.phase_search);
            json rep;
            rep["schema_version"] = omm::io::schema_version;
            rep["k"] = cs.n_detected;
            rep["alpha_star"] = opt.alpha;
            rep["alpha_phase"] = opt.phase;
            rep["F_star"] = opt.fidelity;
            rep["parity"] = omm::analysis::parity(cs.rho_b);
            rep["target_parity"] = even ? "even" : "odd";
            const std::string name = "report_k" + std::to_string(cs.n_detected) + ".json";
            omm::io::write_json_file((out / name).string(), rep);
            man.add_artifact(name);
            fid["k" + std::to_string(cs.n_detected)] =
                json{{"alpha_star", opt.alpha}, {"F_star", opt.fidelity}};
        }
        man.add_derived("best_cat", fid);
        man.add_timing_ms("fidelity", t4.ms());
    } catch (...) {
        omm::io::write_text(fail_marker.string(), "failed stage: " + stage + "\n");
        omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
        throw;
    }

    omm::io::write_json_file((out / "manifest.json").string(), man.to_json());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optomagnomechanical cat-state pipeline"};
    app.require_subcommand(1);
    Cli cli;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", cli.config_path, "config JSON (or manifest)");
        if (needs_config) c->required();
        sub->add_option("--out", cli.out_dir, "output directory");
        sub->add_option("--set", cli.overrides, "dotted-path config override key=value");
        sub->add_option("--jobs", cli.jobs, "worker threads for sweeps and grids");
        sub->add_flag("--dry-run", cli.dry_run, "derive quantities only, skip heavy stages");
        sub->add_flag("--strict", cli.strict, "escalate warnings to errors");
    };

    auto* squeeze = app.add_subcommand("squeeze", "steady-state squeezing");
    add_common(squeeze, true);

    auto* sweep = app.add_subcommand("sweep", "squeezing sweeps");
    add_common(sweep, true);
    sweep->add_option("--axis", cli.axis, "ratio | T | G_minus")->required();
    sweep->add_option("--from", cli.from, "axis start")->required();
    sweep->add_option("--to", cli.to, "axis end")->required();
    sweep->add_option("--points", cli.points, "number of points")->required();
    sweep->add_flag("--optimize", cli.optimize, "optimize G+/G- per point");

    auto* subtract = app.add_subcommand("subtract", "conditional phonon subtraction");
    add_common(subtract, true);
    subtract->add_option("--k", cli.k, "detected photon number")->required();
    subtract->add_option("--input", cli.input_path, "cm.json or state.json")->required();

    auto* wigner = app.add_subcommand("wigner", "Fock-basis Wigner map");
    add_common(wigner, false);
    wigner->add_option("--state", cli.state_path, "state JSON file")->required();
    wigner->add_option("--prefix", cli.prefix, "artifact name prefix");
    wigner->add_option("--x-min", cli.x_min, "window");
    wigner->add_option("--x-max", cli.x_max, "window");
    wigner->add_option("--y-min", cli.y_min, "window");
    wigner->add_option("--y-max", cli.y_max, "window");
    wigner->add_option("--nx", cli.nx, "grid columns");
    wigner->add_option("--ny", cli.ny, "grid rows");

    auto* fidelity = app.add_subcommand("fidelity", "best cat-state match");
    add_common(fidelity, false);
    fidelity->add_option("--state", cli.state_path, "state JSON file")->required();
    fidelity->add_option("--parity", cli.parity_flag, "auto | even | odd");
    fidelity->add_option("--alpha-max", cli.alpha_max, "search window upper edge");
    fidelity->add_flag("--phase-search", cli.phase_search, "search the phase of alpha too");

    auto* pipeline = app.add_subcommand("pipeline", "full two-step protocol");
    add_common(pipeline, true);
    pipeline->add_option("--alpha-max", cli.alpha_max, "cat search window");
    pipeline->add_flag("--phase-search", cli.phase_search, "search cat phase");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(squeeze)) return cmd_squeeze(cli);
        if (app.got_subcommand(sweep)) return cmd_sweep(cli);
        if (app.got_subcommand(subtract)) return cmd_subtract(cli);
        if (app.got_subcommand(wigner)) return cmd_wigner(cli);
        if (app.got_subcommand(fidelity)) return cmd_fidelity(cli);
        if (app.got_subcommand(pipeline)) return cmd_pipeline(cli);
    } catch (const omm::UnstableSystem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const omm::ValidityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const omm::LeakageExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
