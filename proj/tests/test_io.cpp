#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "omm/errors.hpp"
#include "omm/fock.hpp"
#include "omm/io.hpp"
#include "reference_values.hpp"

using namespace omm;
using omm::io::json;

namespace {

json minimal_tree() {
    return json::parse(R"({
      "schema_version": 1,
      "system": {"omega_m_over_2pi": 1e10, "omega_b_over_2pi": 3e7,
                 "kappa_m_over_2pi": 1e6, "kappa_b_over_2pi": 100.0,
                 "kappa_c_over_2pi": 3e6, "G0_over_2pi": 10.0,
                 "g0_over_2pi": 2000.0, "T": 0.01},
      "drive": {"G_minus_over_2pi": 1e5, "G_plus_ratio": 0.885},
      "pulse": {"lambda_0": 1.55e-6, "P0": 5e-11, "t": 3e-8, "tan_theta": 0.11}
    })");
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("angular conversion and ratio resolution") {
        const auto cfg = io::parse_config(minimal_tree(), {"system", "drive", "pulse"});
        CHECK(cfg.system.omega_b == doctest::Approx(constants::two_pi * 3e7));
        CHECK(cfg.drive.G_minus == doctest::Approx(constants::two_pi * 1e5));
        CHECK(cfg.drive.G_plus == doctest::Approx(0.885 * constants::two_pi * 1e5));
        CHECK(*cfg.pulse.tan_theta == 0.11);
        CHECK(cfg.numerics.n_trunc_b == 60);  // library default
    }

    SUBCASE("unknown keys are rejected with their path") {
        json bad = minimal_tree();
        bad["system"]["coupling_g2"] = 1.0;
        try {
            io::parse_config(bad, {"system"});
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("system.coupling_g2") != std::string::npos);
        }
    }

    SUBCASE("missing required section") {
        json t = minimal_tree();
        t.erase("drive");
        CHECK_THROWS_AS(io::parse_config(t, {"system", "drive"}), ConfigError);
        CHECK_NOTHROW(io::parse_config(t, {"system"}));
    }

    SUBCASE("negative couplings are rejected at parse") {
        json t = minimal_tree();
        t["drive"] = {{"G_minus_over_2pi", 1e5}, {"G_plus_over_2pi", -1.0}};
        CHECK_THROWS_AS(io::parse_config(t, {"drive"}), ConfigError);
    }

    SUBCASE("schema version is enforced") {
        json t = minimal_tree();
        t["schema_version"] = 99;
        CHECK_THROWS_AS(io::parse_config(t, {}), ConfigError);
    }

    SUBCASE("dotted overrides take precedence") {
        json t = minimal_tree();
        io::apply_override(t, "drive.G_plus_ratio=0.5");
        io::apply_override(t, "numerics.n_trunc_b=90");
        const auto cfg = io::parse_config(t, {"system", "drive"});
        CHECK(cfg.drive.G_plus == doctest::Approx(0.5 * cfg.drive.G_minus));
        CHECK(cfg.numerics.n_trunc_b == 90);
        CHECK_THROWS_AS(io::apply_override(t, "nonsense"), ConfigError);
    }

    SUBCASE("rabi input is exclusive with direct couplings") {
        json t = minimal_tree();
        t["drive"]["Omega_plus_over_2pi"] = 1e12;
        t["drive"]["Omega_minus_over_2pi"] = 1e12;
        CHECK_THROWS_AS(io::parse_config(t, {"drive"}), ConfigError);
        t["drive"] = {{"Omega_plus_over_2pi", 1e12}, {"Omega_minus_over_2pi", 1.2e12}};
        const auto cfg = io::parse_config(t, {"system", "drive"});
        CHECK(cfg.drive.G_plus > 0.0);
        CHECK(cfg.drive.G_minus > cfg.drive.G_plus);
    }
}

TEST_CASE("theta resolution") {
    const auto cfg = io::parse_config(minimal_tree(), {"system", "pulse"});
    const auto th = io::resolve_theta(cfg.system, cfg.pulse);
    CHECK(th.source == "config_tan_theta");
    CHECK(th.tan_theta == 0.11);
    CHECK(th.chain.G == doctest::Approx(refs::chain_G).epsilon(1e-9));
    CHECK(th.discrepancy.has_value());

    omm::PulseParams chain_only = cfg.pulse;
    chain_only.tan_theta.reset();
    const auto th2 = io::resolve_theta(cfg.system, chain_only);
    CHECK(th2.source == "power_chain");
    CHECK(std::tan(th2.theta) == doctest::Approx(refs::chain_tan_theta).epsilon(1e-9));
    CHECK(!th2.discrepancy.has_value());
}

TEST_CASE("covariance and state containers round trip") {
    SUBCASE("covariance") {
        Eigen::MatrixXd V(2, 2);
        V << 0.045, 0.14, 0.14, 6.28;
        const auto j = io::cm_to_json(V);
        const auto back = io::cm_from_json(j);
        CHECK((V - back).cwiseAbs().maxCoeff() == 0.0);
        CHECK(j["ordering"][0] == "Xb");
    }

    SUBCASE("density matrix container") {
        const auto d = fock::squeezed_thermal({0.8, 0.2, 0.1}, 40);
        const auto j = io::state_to_json(d);
        const auto back = io::density_from_json(j);
        CHECK((d.rho - back.rho).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.n_trunc == 40);
        CHECK(back.leakage == d.leakage);
    }

    SUBCASE("state vector promotes to a projector") {
        const auto s = fock::squeezed_vacuum(0.7, 0.1, 30);
        const auto back = io::density_from_json(io::state_to_json(s));
        CHECK((back.rho - (s.amps * s.amps.adjoint())).cwiseAbs().maxCoeff() < 1e-16);
    }

    SUBCASE("malformed containers are rejected") {
        json j = io::state_to_json(fock::squeezed_vacuum(0.5, 0.0, 10));
        j["re"].erase(0);
        CHECK_THROWS_AS(io::density_from_json(j), ConfigError);
    }
}

TEST_CASE("deterministic formatting") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(1.0) == "1");
    // round trip exactness at 17 significant digits
    const double v = 6.457533676514099;
    CHECK(std::stod(io::format_double(v)) == v);

    std::vector<io::SweepRow> rows{{0.01, 1e5, 0.885, 6.5, true}};
    const auto tmp = std::filesystem::temp_directory_path() / "omm_sweep_test.csv";
    io::write_sweep_csv(rows, tmp.string());
    std::ifstream f(tmp);
    std::string header, line;
    std::getline(f, header);
    std::getline(f, line);
    CHECK(header == "T,G_minus_over_2pi,ratio,S_db,stable");
    CHECK(line.find("0.88500000000000001") != std::string::npos);
    std::filesystem::remove(tmp);
}

TEST_CASE("manifest carries config and stays loadable as one") {
    io::Manifest man("squeeze");
    man.set_resolved_config(minimal_tree());
    man.add_derived("S_db", 6.5);
    man.add_timing_ms("squeeze", 12.5);
    const auto tmp = std::filesystem::temp_directory_path() / "omm_manifest_test.json";
    io::write_json_file(tmp.string(), man.to_json());
    const json reloaded = io::load_config_file(tmp.string());
    CHECK(reloaded == minimal_tree());  // manifest reruns resolve to the same config
    std::filesystem::remove(tmp);
}
