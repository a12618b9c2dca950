#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omm/errors.hpp"
#include "omm/fock.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"

using namespace omm;
using namespace omm::fock;

TEST_CASE("annihilation operator") {
    const auto b1 = annihilation(1);
    CHECK(b1(0, 1) == Complex(1.0, 0.0));
    CHECK(b1(0, 0) == Complex(0.0, 0.0));
    CHECK(b1(1, 0) == Complex(0.0, 0.0));
    CHECK(b1(1, 1) == Complex(0.0, 0.0));

    const int N = 12;
    const auto b = annihilation(N);
    const Eigen::MatrixXcd comm = b * b.adjoint() - b.adjoint() * b;
    for (int n = 0; n < N; ++n)
        CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);  // last level breaks by truncation
    CHECK(std::abs(comm(N, N) + double(N)) < 1e-12);

    const Eigen::MatrixXcd num = b.adjoint() * b;
    for (int n = 0; n <= N; ++n) CHECK(std::abs(num(n, n) - double(n)) < 1e-13);
}

TEST_CASE("squeeze operator") {
    SUBCASE("r = 0 is the identity") {
        const auto S = squeeze_operator(0.0, 0.7, 10);
        CHECK((S - Eigen::MatrixXcd::Identity(11, 11)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("matches the generator-exponential oracle") {
        // guard large enough that the oracle's own truncation stays away
        const auto S = squeeze_operator(0.5, 0.2, 30);
        const auto Se = oracles::squeeze_expm(0.5, 0.2, 30, 60);
        CHECK((S - Se).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("column zero equals the squeezed-vacuum series exactly") {
        for (double r : {0.4, 1.0, 1.25}) {
            const int N = 100;
            const auto S = squeeze_operator(r, 0.3, N);
            const auto sv = squeezed_vacuum(r, 0.3, N);
            CHECK((S.col(0) - sv.amps).cwiseAbs().maxCoeff() < 1e-14);
        }
    }

    SUBCASE("unitary on the resolved subspace") {
        // Columns spread over ~n cosh(2r) levels, so the usable block shrinks
        // with r; the bounds below were calibrated against the exact tails.
        const auto S1 = squeeze_operator(1.0, 0.3, 100);
        const Eigen::MatrixXcd G1 = S1.adjoint() * S1 - Eigen::MatrixXcd::Identity(101, 101);
        CHECK(G1.topLeftCorner(4, 4).cwiseAbs().maxCoeff() < 1e-8);

        const auto S2 = squeeze_operator(1.25, -0.045, 100);
        const Eigen::MatrixXcd G2 = S2.adjoint() * S2 - Eigen::MatrixXcd::Identity(101, 101);
        CHECK(G2.topLeftCorner(2, 2).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("squeezed vacuum") {
    SUBCASE("r = 0 is the vacuum") {
        const auto s = squeezed_vacuum(0.0, 1.0, 20);
        CHECK(std::abs(s.amps(0) - 1.0) == 0.0);
        CHECK(s.amps.tail(20).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("amplitude ratio a2/a0 = e^{i phi} tanh(r)/sqrt(2)") {
        const auto s = squeezed_vacuum(0.9, -0.6, 40);
        const Complex ratio = s.amps(2) / s.amps(0);
        const Complex expect = std::polar(std::tanh(0.9) / std::sqrt(2.0), -0.6);
        CHECK(std::abs(ratio - expect) < 1e-13);
    }

    SUBCASE("odd levels vanish identically") {
        const auto s = squeezed_vacuum(1.25, 0.3, 61);
        for (int n = 1; n <= 61; n += 2) CHECK(std::abs(s.amps(n)) == 0.0);
    }

    SUBCASE("series and prefactor forms of the expansion agree") {
        // 1/sqrt(cosh r) (e^{i phi} tanh r)^n sqrt((2n)!)/(2^n n!)  versus the
        // (1-tanh^2 r)^{1/4} C_n tanh^n form used by the implementation.
        const double r = 1.1, phi = 0.47;
        const auto s = squeezed_vacuum(r, phi, 60);
        for (int n = 0; 2 * n <= 60; ++n) {
            const double lnmag = -0.5 * std::log(std::cosh(r)) +
                                 n * std::log(std::tanh(r)) +
                                 0.5 * std::lgamma(2.0 * n + 1.0) -
                                 n * std::log(2.0) - std::lgamma(n + 1.0);
            const Complex direct = std::polar(std::exp(lnmag), phi * n);
            CHECK(std::abs(s.amps(2 * n) - direct) < 1e-12);
        }
    }

    SUBCASE("norm deficit at the reference squeezing") {
        // 60 levels leak ~7e-6 of the norm at r = 1.25; 1e-8-grade work needs
        // the 100-level basis.
        const auto s60 = squeezed_vacuum(1.25, 0.0, 60);
        CHECK(s60.leakage == doctest::Approx(refs::leak_sqvac_r125_N60).epsilon(1e-3));
        const auto s100 = squeezed_vacuum(1.25, 0.0, 100);
        CHECK(s100.leakage < 1e-8);
        CHECK(s100.amps.norm() >= 1.0 - 1e-8);
    }
}

TEST_CASE("thermal state") {
    SUBCASE("nbar = 0 is the vacuum projector") {
        const auto th = thermal_state(0.0, 10);
        CHECK(std::abs(th.rho(0, 0) - 1.0) == 0.0);
        CHECK(th.rho.cwiseAbs().sum() == doctest::Approx(1.0));
    }

    SUBCASE("mean occupation reproduced to 1e-10") {
        const auto th = thermal_state(0.013, 60);
        double mean = 0.0;
        for (int n = 0; n <= 60; ++n) mean += n * th.rho(n, n).real();
        CHECK(std::abs(mean - 0.013) < 1e-10);
    }

    SUBCASE("geometric weight ratio") {
        const auto th = thermal_state(0.8, 40);
        CHECK(th.rho(1, 1).real() / th.rho(0, 0).real() ==
              doctest::Approx(0.8 / 1.8).epsilon(1e-12));
    }
}

TEST_CASE("squeezed thermal state") {
    SUBCASE("(r, nbar) = 0 is the vacuum projector") {
        const auto d = squeezed_thermal({0.0, 0.0, 0.0}, 20);
        CHECK(std::abs(d.rho(0, 0) - 1.0) < 1e-14);
    }

    SUBCASE("published parameters reproduce the published block") {
        const auto d = squeezed_thermal(
            {refs::published_r, refs::published_phi, refs::published_nbar}, 80);
        CHECK(d.leakage == doctest::Approx(refs::leak_thermal_N80).epsilon(1e-2));
        const auto V = cm_from_density(d);
        const Eigen::Matrix2d expect = refs::published_block();
        CHECK((V - expect).cwiseAbs().maxCoeff() < 0.01);
        CHECK(std::abs(V(0, 0) - expect(0, 0)) < 1e-4);  // tight: both are exact routes
    }

    SUBCASE("purity is the thermal purity, independent of r") {
        for (double r : {0.3, 1.25}) {
            const auto d = squeezed_thermal({r, -0.04, 0.013}, 90);
            const double purity = (d.rho * d.rho).trace().real();
            CHECK(purity == doctest::Approx(1.0 / (1.0 + 2.0 * 0.013)).epsilon(1e-6));
        }
    }

    SUBCASE("leakage budget is enforced and overridable") {
        const SqueezedThermalParams p{refs::published_r, refs::published_phi,
                                      refs::published_nbar};
        CHECK_THROWS_AS(squeezed_thermal(p, 60), LeakageExceeded);
        const auto d = squeezed_thermal(p, 60, default_leakage_budget, true);
        CHECK(d.leakage > 1e-6);
        CHECK(d.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("hermitian, positive, unit trace at the defaults") {
        const auto d = squeezed_thermal(
            {refs::published_r, refs::published_phi, refs::published_nbar}, 80);
        CHECK(hermiticity_error(d.rho) < 1e-12);
        CHECK(min_eigenvalue(d.rho) > -1e-10);
        CHECK(d.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("covariance bridge") {
    SUBCASE("vacuum extracts to zeros") {
        const auto p = cm_to_squeezed_thermal(0.5 * Eigen::Matrix2d::Identity());
        CHECK(p.r == 0.0);
        CHECK(p.phi == 0.0);
        CHECK(p.n_bar == 0.0);
    }

    SUBCASE("published block extracts to the published parameters") {
        const auto p = cm_to_squeezed_thermal(refs::published_block());
        CHECK(p.r == doctest::Approx(refs::published_r).epsilon(1e-12));
        CHECK(p.phi == doctest::Approx(refs::published_phi).epsilon(1e-12));
        CHECK(p.n_bar == doctest::Approx(refs::published_nbar).epsilon(1e-12));
        CHECK(std::abs(p.r - 1.25) < 0.01);
        CHECK(std::abs(p.phi - (-0.04)) < 0.01);
        CHECK(std::abs(p.n_bar - 0.013) < 0.002);
    }

    SUBCASE("unphysical block is rejected") {
        Eigen::Matrix2d V;
        V << 0.2, 0.0, 0.0, 0.2;  // det(2V) = 0.16 < 1
        CHECK_THROWS_AS(cm_to_squeezed_thermal(V), UnphysicalState);
    }

    SUBCASE("round trip over random physical parameters") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> ur(0.0, 1.5), uph(-constants::pi, constants::pi),
            un(0.0, 2.0);
        for (int i = 0; i < 50; ++i) {
            SqueezedThermalParams in;
            in.r = ur(rng);
            in.phi = uph(rng);
            in.n_bar = un(rng);
            // adaptive basis: tails widen with (2 nbar + 1) cosh(2r)
            const double spread = (2.0 * in.n_bar + 1.0) * std::cosh(2.0 * in.r);
            const int N = std::max(60, int(16.0 * spread));
            const auto rho = squeezed_thermal(in, N, 1e-5, true);
            const auto out = cm_to_squeezed_thermal(cm_from_density(rho));
            const Complex xi_in = std::polar(in.r, in.phi);
            const Complex xi_out = std::polar(out.r, out.phi);
            CHECK(std::abs(xi_out - xi_in) < 1e-4 * (1.0 + std::abs(xi_in)));
            CHECK(std::abs(out.n_bar - in.n_bar) < 1e-4 * (1.0 + in.n_bar));
        }
    }
}

TEST_CASE("cm_from_density") {
    SUBCASE("vacuum projector") {
        fock::DensityMatrix vac;
        vac.n_trunc = 10;
        vac.rho = Eigen::MatrixXcd::Zero(11, 11);
        vac.rho(0, 0) = 1.0;
        const auto V = cm_from_density(vac);
        CHECK((V - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("thermal second moments") {
        const auto V = cm_from_density(thermal_state(0.7, 80));
        CHECK(V(0, 0) == doctest::Approx(0.7 + 0.5).epsilon(1e-10));
        CHECK(V(1, 1) == doctest::Approx(0.7 + 0.5).epsilon(1e-10));
        CHECK(std::abs(V(0, 1)) < 1e-12);
    }

    SUBCASE("series squeezed vacuum is stretched along X at phi = 0") {
        const double r = 0.8;
        const auto d = to_density(squeezed_vacuum(r, 0.0, 80));
        const auto V = cm_from_density(d);
        CHECK(V(0, 0) == doctest::Approx(std::exp(2.0 * r) / 2.0).epsilon(1e-8));
        CHECK(V(1, 1) == doctest::Approx(std::exp(-2.0 * r) / 2.0).epsilon(1e-8));
    }

    SUBCASE("displacement is rejected") {
        fock::DensityMatrix d;
        d.n_trunc = 10;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(11);
        v(0) = std::sqrt(0.5);
        v(1) = std::sqrt(0.5);
        d.rho = v * v.adjoint();
        CHECK_THROWS_AS(cm_from_density(d), DisplacedState);
    }
}
