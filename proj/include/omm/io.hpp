#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "omm/fock.hpp"
#include "omm/grid.hpp"
#include "omm/params.hpp"
#include "omm/subtraction.hpp"

namespace omm::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;
inline constexpr const char* tool_version = "0.1.0";

/// Numerical controls with the library defaults.
struct Numerics {
    int n_trunc_b = 60;
    int n_trunc_c = 6;
    int guard_b = 10;
    int guard_c = 2;
    double leakage_budget = 1e-6;
    bool allow_leakage = false;
    GridSpec grid;
};

struct OutputOptions {
    std::string dir = ".";
    bool write_wigner_csv = true;
    bool write_states = true;
};

/// Fully resolved run configuration (after file + --set overrides).
struct RunConfig {
    SystemParams system;
    DriveParams drive;
    PulseParams pulse;
    Numerics numerics;
    double detection_eta = 1.0;
    OutputOptions output;
    std::string notes;
    json resolved;  ///< the exact JSON tree the run used (for the manifest)
};

/// Parses a config JSON tree strictly: unknown keys anywhere are rejected with
/// their dotted path. Frequencies arrive as *_over_2pi values in Hz and are
/// converted to angular units. `require` lists the sections that must be
/// present ("system", "drive", "pulse").
RunConfig parse_config(const json& tree, const std::vector<std::string>& require);

/// Loads a config file; if the root carries "resolved_config" (a manifest), the
/// embedded config is used, which makes reruns from manifests one flag.
json load_config_file(const std::string& path);

/// Applies one dotted-path override ("drive.G_plus_ratio=0.9") onto the tree.
/// Values parse as JSON when possible and fall back to strings.
void apply_override(json& tree, const std::string& assignment);

/// theta resolution: explicit tan_theta wins, then explicit theta, then the
/// power chain. Returns the angle with a tag naming the source.
struct ThetaResolution {
    double theta = 0.0;
    double tan_theta = 0.0;
    std::string source;      // "config_tan_theta" | "config_theta" | "power_chain"
    PulseDerived chain;      // always evaluated for the manifest
    std::optional<std::string> discrepancy;  // set when an override differs from the chain
};
ThetaResolution resolve_theta(const SystemParams& sys, const PulseParams& pulse);

// ---- artifact serialization ----

/// Covariance JSON: {schema_version, kind:"covariance", n, ordering, entries,
/// convention:"vacuum-variance-1-half"}.
json cm_to_json(const Eigen::MatrixXd& V);
Eigen::MatrixXd cm_from_json(const json& j);

/// Fock container: {schema_version, kind, n_trunc, layout:"row-major", re, im,
/// leakage} plus, for conditioned states, {k, probability, theta}.
json state_to_json(const fock::StateVector& s);
json state_to_json(const fock::DensityMatrix& d);
json state_to_json(const subtraction::ConditionedState& c);

/// Reads either container kind into a density matrix (pure states are promoted).
fock::DensityMatrix density_from_json(const json& j);

/// Wigner CSV ("x,y,W" rows) and its JSON sidecar.
void write_wigner_csv(const WignerGrid& w, const std::string& path);
json wigner_sidecar(const WignerGrid& w, std::optional<double> det_V_b = std::nullopt);

/// Number formatting contract for CSV artifacts: 17 significant digits.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& content);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Sweep CSV writer; rows are (T, G_minus_over_2pi, ratio, S_db, stable).
struct SweepRow {
    double T = 0.0;
    double G_minus_over_2pi = 0.0;
    double ratio = 0.0;
    double S_db = 0.0;
    bool stable = false;
};
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Run manifest assembly. Timings/timestamps live here and only here.
class Manifest {
  public:
    explicit Manifest(const std::string& command);
    void set_resolved_config(const json& cfg);
    void add_derived(const std::string& key, const json& value);
    void add_warning(const std::string& w);
    void add_timing_ms(const std::string& stage, double ms);
    void add_artifact(const std::string& path);
    json to_json() const;

  private:
    json root_;
};

}  // namespace omm::io
