#include "omm/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm::io {

namespace {

double two_pi_hz(const json& v) { return constants::two_pi * v.get<double>(); }

void check_keys(const json& obj, const std::set<std::string>& known,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown config key: " + path + it.key());
}

double require_num(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key))
        throw ConfigError("missing config key: " + path + key);
    if (!obj[key].is_number())
        throw ConfigError("config key is not a number: " + path + key);
    return obj[key].get<double>();
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig parse_config(const json& tree, const std::vector<std::string>& require) {
    if (!tree.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(tree, {"schema_version", "notes", "system", "drive", "pulse",
                      "numerics", "detection", "output"}, "");
    if (!tree.contains("schema_version"))
        throw ConfigError("missing config key: schema_version");
    if (tree["schema_version"].get<int>() != schema_version)
        throw ConfigError("unsupported schema_version (expected " +
                          std::to_string(schema_version) + ")");

    RunConfig cfg;
    cfg.resolved = tree;
    if (tree.contains("notes")) cfg.notes = tree["notes"].get<std::string>();

    auto need = [&](const char* section) {
        for (const auto& r : require)
            if (r == section && !tree.contains(section))
                throw ConfigError(std::string("missing config section: ") + section);
        return tree.contains(section);
    };

    if (need("system")) {
        const json& s = tree["system"];
        check_keys(s, {"omega_m_over_2pi", "omega_b_over_2pi", "omega_c_over_2pi",
                       "kappa_m_over_2pi", "kappa_b_over_2pi", "kappa_c_over_2pi",
                       "G0_over_2pi", "g0_over_2pi", "T"}, "system.");
        cfg.system.omega_m = two_pi_hz(require_num(s, "omega_m_over_2pi", "system."));
        cfg.system.omega_b = two_pi_hz(require_num(s, "omega_b_over_2pi", "system."));
        cfg.system.kappa_m = two_pi_hz(require_num(s, "kappa_m_over_2pi", "system."));
        cfg.system.kappa_b = two_pi_hz(require_num(s, "kappa_b_over_2pi", "system."));
        cfg.system.kappa_c = two_pi_hz(require_num(s, "kappa_c_over_2pi", "system."));
        cfg.system.G0 = two_pi_hz(require_num(s, "G0_over_2pi", "system."));
        cfg.system.g0 = two_pi_hz(require_num(s, "g0_over_2pi", "system."));
        cfg.system.T = require_num(s, "T", "system.");
        if (s.contains("omega_c_over_2pi")) cfg.system.omega_c = two_pi_hz(s["omega_c_over_2pi"]);
        const auto errs = validate(cfg.system);
        if (!errs.empty()) throw ConfigError("system: " + errs.front());
    }

    if (need("drive")) {
        const json& d = tree["drive"];
        check_keys(d, {"G_minus_over_2pi", "G_plus_over_2pi", "G_plus_ratio",
                       "Omega_plus_over_2pi", "Omega_minus_over_2pi"}, "drive.");
        const bool has_rabi = d.contains("Omega_plus_over_2pi") ||
                              d.contains("Omega_minus_over_2pi");
        if (has_rabi) {
            if (d.contains("G_minus_over_2pi") || d.contains("G_plus_over_2pi") ||
                d.contains("G_plus_ratio"))
                throw ConfigError("drive: give either Rabi frequencies or couplings, not both");
            cfg.drive = drive_from_rabi(cfg.system,
                                        two_pi_hz(require_num(d, "Omega_plus_over_2pi", "drive.")),
                                        two_pi_hz(require_num(d, "Omega_minus_over_2pi", "drive.")));
        } else {
            cfg.drive.G_minus = two_pi_hz(require_num(d, "G_minus_over_2pi", "drive."));
            if (d.contains("G_plus_over_2pi") && d.contains("G_plus_ratio"))
                throw ConfigError("drive: G_plus_over_2pi and G_plus_ratio are exclusive");
            if (d.contains("G_plus_over_2pi"))
                cfg.drive.G_plus = two_pi_hz(d["G_plus_over_2pi"]);
            else if (d.contains("G_plus_ratio"))
                cfg.drive.G_plus = d["G_plus_ratio"].get<double>() * cfg.drive.G_minus;
            else
                throw ConfigError("missing config key: drive.G_plus_over_2pi (or G_plus_ratio)");
        }
        const auto errs = validate(cfg.drive);
        if (!errs.empty()) throw ConfigError("drive: " + errs.front());
    }

    if (need("pulse")) {
        const json& p = tree["pulse"];
        check_keys(p, {"lambda_0", "P0", "t", "theta", "tan_theta"}, "pulse.");
        cfg.pulse.lambda_0 = require_num(p, "lambda_0", "pulse.");
        cfg.pulse.P0 = require_num(p, "P0", "pulse.");
        cfg.pulse.t = require_num(p, "t", "pulse.");
        if (p.contains("theta")) cfg.pulse.theta = p["theta"].get<double>();
        if (p.contains("tan_theta")) cfg.pulse.tan_theta = p["tan_theta"].get<double>();
        if (cfg.pulse.theta && cfg.pulse.tan_theta)
            throw ConfigError("pulse: theta and tan_theta are exclusive");
        const auto errs = validate(cfg.pulse);
        if (!errs.empty()) throw ConfigError("pulse: " + errs.front());
    }

    if (tree.contains("numerics")) {
        const json& n = tree["numerics"];
        check_keys(n, {"n_trunc_b", "n_trunc_c", "guard_b", "guard_c",
                       "leakage_budget", "allow_leakage", "grid"}, "numerics.");
        if (n.contains("n_trunc_b")) cfg.numerics.n_trunc_b = n["n_trunc_b"].get<int>();
        if (n.contains("n_trunc_c")) cfg.numerics.n_trunc_c = n["n_trunc_c"].get<int>();
        if (n.contains("guard_b")) cfg.numerics.guard_b = n["guard_b"].get<int>();
        if (n.contains("guard_c")) cfg.numerics.guard_c = n["guard_c"].get<int>();
        if (n.contains("leakage_budget")) cfg.numerics.leakage_budget = n["leakage_budget"].get<double>();
        if (n.contains("allow_leakage")) cfg.numerics.allow_leakage = n["allow_leakage"].get<bool>();
        if (n.contains("grid")) {
            const json& g = n["grid"];
            check_keys(g, {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}, "numerics.grid.");
            GridSpec& gs = cfg.numerics.grid;
            if (g.contains("x_min")) gs.x_min = g["x_min"].get<double>();
            if (g.contains("x_max")) gs.x_max = g["x_max"].get<double>();
            if (g.contains("y_min")) gs.y_min = g["y_min"].get<double>();
            if (g.contains("y_max")) gs.y_max = g["y_max"].get<double>();
            if (g.contains("nx")) gs.nx = g["nx"].get<int>();
            if (g.contains("ny")) gs.ny = g["ny"].get<int>();
            if (gs.nx < 2 || gs.ny < 2 || gs.x_max <= gs.x_min || gs.y_max <= gs.y_min)
                throw ConfigError("numerics.grid: malformed window or resolution");
        }
        if (cfg.numerics.n_trunc_b < 2 || cfg.numerics.n_trunc_c < 0 ||
            cfg.numerics.guard_b < 0 || cfg.numerics.guard_c < 0)
            throw ConfigError("numerics: truncations out of range");
    }

    if (tree.contains("detection")) {
        const json& d = tree["detection"];
        check_keys(d, {"eta"}, "detection.");
        if (d.contains("eta")) cfg.detection_eta = d["eta"].get<double>();
        if (cfg.detection_eta < 0.0 || cfg.detection_eta > 1.0)
            throw ConfigError("detection.eta must lie in [0, 1]");
    }

    if (tree.contains("output")) {
        const json& o = tree["output"];
        check_keys(o, {"dir", "write_wigner_csv", "write_states"}, "output.");
        if (o.contains("dir")) cfg.output.dir = o["dir"].get<std::string>();
        if (o.contains("write_wigner_csv")) cfg.output.write_wigner_csv = o["write_wigner_csv"].get<bool>();
        if (o.contains("write_states")) cfg.output.write_states = o["write_states"].get<bool>();
    }
    return cfg;
}

json load_config_file(const std::string& path) {
    json j = read_json_file(path);
    if (j.contains("resolved_config")) return j["resolved_config"];
    return j;
}

void apply_override(json& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key.path=value, got: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // unquoted string
    }

    json* node = &tree;
    size_t start = 0;
    while (true) {
        const size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("--set: empty key segment in " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

ThetaResolution resolve_theta(const SystemParams& sys, const PulseParams& pulse) {
    ThetaResolution r;
    r.chain = pulse_interaction(sys, pulse);
    if (pulse.tan_theta) {
        r.tan_theta = *pulse.tan_theta;
        r.theta = std::atan(r.tan_theta);
        r.source = "config_tan_theta";
    } else if (pulse.theta) {
        r.theta = *pulse.theta;
        r.tan_theta = std::tan(r.theta);
        r.source = "config_theta";
    } else {
        r.theta = r.chain.theta;
        r.tan_theta = std::tan(r.theta);
        r.source = "power_chain";
    }
    const double chain_tan = std::tan(r.chain.theta);
    if (r.source != "power_chain" &&
        std::abs(chain_tan - r.tan_theta) > 0.1 * std::max(r.tan_theta, 1e-300)) {
        r.discrepancy = "explicit tan_theta = " + format_double(r.tan_theta) +
                        " differs from the power-chain value " + format_double(chain_tan) +
                        "; using the explicit setting";
    }
    return r;
}

json cm_to_json(const Eigen::MatrixXd& V) {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = "covariance";
    j["convention"] = "vacuum-variance-1-half";
    const int n = int(V.rows());
    j["n"] = n;
    j["ordering"] = (n == 4) ? json::array({"Xm", "Ym", "Xb", "Yb"})
                             : json::array({"Xb", "Yb"});
    json entries = json::array();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) entries.push_back(V(i, k));
    j["entries"] = entries;
    return j;
}

Eigen::MatrixXd cm_from_json(const json& j) {
    if (!j.contains("kind") || j["kind"] != "covariance")
        throw ConfigError("not a covariance file");
    const int n = j.at("n").get<int>();
    if (n != 2 && n != 4) throw ConfigError("covariance must be 2x2 or 4x4");
    const auto& e = j.at("entries");
    if (int(e.size()) != n * n) throw ConfigError("covariance entry count mismatch");
    Eigen::MatrixXd V(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) V(i, k) = e[i * n + k].get<double>();
    return V;
}

namespace {

json complex_container(const Eigen::MatrixXcd& m, const char* kind, int n_trunc,
                       double leakage) {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = kind;
    j["n_trunc"] = n_trunc;
    j["layout"] = "row-major";
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    j["leakage"] = leakage;
    return j;
}

}  // namespace

json state_to_json(const fock::StateVector& s) {
    return complex_container(s.amps, "state_vector", s.n_trunc, s.leakage);
}

json state_to_json(const fock::DensityMatrix& d) {
    return complex_container(d.rho, "density_matrix", d.n_trunc, d.leakage);
}

json state_to_json(const subtraction::ConditionedState& c) {
    json j = state_to_json(c.rho_b);
    j["k"] = c.n_detected;
    j["probability"] = c.probability;
    j["theta"] = c.theta;
    return j;
}

fock::DensityMatrix density_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n_trunc").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const int dim = n + 1;
    if (kind == "state_vector") {
        if (int(re.size()) != dim) throw ConfigError("state_vector length mismatch");
        fock::StateVector s;
        s.n_trunc = n;
        s.amps.resize(dim);
        for (int i = 0; i < dim; ++i)
            s.amps(i) = fock::Complex(re[i].get<double>(), im[i].get<double>());
        s.leakage = j.value("leakage", 0.0);
        return fock::to_density(s);
    }
    if (kind == "density_matrix") {
        if (int(re.size()) != dim * dim) throw ConfigError("density_matrix size mismatch");
        fock::DensityMatrix d;
        d.n_trunc = n;
        d.rho.resize(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                d.rho(r, c) = fock::Complex(re[r * dim + c].get<double>(),
                                            im[r * dim + c].get<double>());
        d.leakage = j.value("leakage", 0.0);
        return d;
    }
    throw ConfigError("unsupported state kind: " + kind);
}

void write_wigner_csv(const WignerGrid& w, const std::string& path) {
    std::string out = "x,y,W\n";
    out.reserve(w.values.size() * 40);
    for (int j = 0; j < w.spec.ny; ++j)
        for (int i = 0; i < w.spec.nx; ++i) {
            out += format_double(w.spec.x(i));
            out += ',';
            out += format_double(w.spec.y(j));
            out += ',';
            out += format_double(w.at(i, j));
            out += '\n';
        }
    write_text(path, out);
}

json wigner_sidecar(const WignerGrid& w, std::optional<double> det_V_b) {
    json j;
    j["schema_version"] = schema_version;
    j["window"] = {{"x_min", w.spec.x_min}, {"x_max", w.spec.x_max},
                   {"y_min", w.spec.y_min}, {"y_max", w.spec.y_max}};
    j["nx"] = w.spec.nx;
    j["ny"] = w.spec.ny;
    j["convention"] = wigner_convention;
    j["integral"] = w.integral();
    j["min_value"] = w.min_value();
    double pos = 0.0, tot = 0.0;
    for (double v : w.values) {
        pos += std::abs(v);
        tot += v;
    }
    j["negativity_volume"] = (pos - tot) * w.spec.dx() * w.spec.dy();
    if (det_V_b) j["det_V_b"] = *det_V_b;
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << content;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open: " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::string out = "T,G_minus_over_2pi,ratio,S_db,stable\n";
    for (const auto& r : rows) {
        out += format_double(r.T);
        out += ',';
        out += format_double(r.G_minus_over_2pi);
        out += ',';
        out += format_double(r.ratio);
        out += ',';
        out += format_double(r.S_db);
        out += ',';
        out += r.stable ? '1' : '0';
        out += '\n';
    }
    write_text(path, out);
}

Manifest::Manifest(const std::string& command) {
    root_["schema_version"] = schema_version;
    root_["tool_version"] = tool_version;
    root_["constants_version"] = constants::version;
    root_["command"] = command;
    root_["timestamp_utc"] = iso_timestamp();
    root_["derived"] = json::object();
    root_["warnings"] = json::array();
    root_["timings_ms"] = json::object();
    root_["artifacts"] = json::array();
}

void Manifest::set_resolved_config(const json& cfg) { root_["resolved_config"] = cfg; }
void Manifest::add_derived(const std::string& key, const json& value) {
    root_["derived"][key] = value;
}
void Manifest::add_warning(const std::string& w) { root_["warnings"].push_back(w); }
void Manifest::add_timing_ms(const std::string& stage, double ms) {
    root_["timings_ms"][stage] = ms;
}
void Manifest::add_artifact(const std::string& path) { root_["artifacts"].push_back(path); }
json Manifest::to_json() const { return root_; }

}  // namespace omm::io
