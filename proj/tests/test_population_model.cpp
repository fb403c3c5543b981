#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sitsim/equilibria.hpp"
#include "sitsim/population_model.hpp"
#include "sitsim/weather.hpp"

using namespace sitsim;

namespace {

struct Fixture {
    RateSplines splines;
    EntoParams ep;
    double mu_A2;
    Environment env;

    explicit Fixture(double K = 202000.0, int days = 4000)
        : ep(splines.at(25.0)),
          mu_A2(density_death_rate(K, ep)),
          env(Environment::constant(ep, mu_A2, K, days)) {}
};

}  // namespace

TEST_CASE("wild right-hand side") {
    Fixture fx;
    WildState y{0.0, 0.0, 0.0}, dy;
    rhs_wild(y, fx.ep, fx.mu_A2, dy);
    CHECK(dy == WildState{0.0, 0.0, 0.0});

    // Equilibrium is stationary.
    WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
    REQUIRE(eq.exists);
    rhs_wild({eq.E_star[0], eq.E_star[1], eq.E_star[2]}, fx.ep, fx.mu_A2, dy);
    for (double v : dy) CHECK(std::abs(v) < 1e-9 * eq.E_star[0]);

    rhs_wild({0.0, 0.0, 100.0}, fx.ep, fx.mu_A2, dy);
    CHECK(dy[0] == doctest::Approx(fx.ep.phi * 100.0));
    CHECK(dy[0] > 0.0);
}

TEST_CASE("SIT right-hand side reduces to the wild one") {
    Fixture fx;
    SitState y{5000.0, 800.0, 1200.0, 0.0}, dy;
    WildState yw{5000.0, 800.0, 1200.0}, dw;
    ResidualFertility rf;

    SUBCASE("no sterile males") {
        rhs_sit(y, fx.ep, fx.mu_A2, rf, dy);
        rhs_wild(yw, fx.ep, fx.mu_A2, dw);
        for (std::size_t i = 0; i < 3; ++i) CHECK(dy[i] == doctest::Approx(dw[i]));
        CHECK(dy[iMS] == 0.0);
    }
    SUBCASE("fully fertile releases act like wild males") {
        // eps = 1 is outside the admissible range for control but the
        // algebra must still collapse the fraction to 1.
        y[iMS] = 4000.0;
        CHECK(fertile_fraction(y[iM], y[iMS], {0.999999999, 1.0}) ==
              doctest::Approx(1.0));
    }
    SUBCASE("perfect sterilization with no wild males stops recruitment") {
        y[iM] = 0.0;
        y[iMS] = 4000.0;
        rhs_sit(y, fx.ep, fx.mu_A2, rf, dy);
        CHECK(dy[iF] == doctest::Approx(-fx.ep.mu_F * y[iF]));
    }
    SUBCASE("origin fraction convention preserves the extinction state") {
        CHECK(fertile_fraction(0.0, 0.0, rf) == 1.0);
        SitState zero{0.0, 0.0, 0.0, 0.0}, dz;
        rhs_sit(zero, fx.ep, fx.mu_A2, rf, dz);
        CHECK(dz == SitState{0.0, 0.0, 0.0, 0.0});
    }
}

TEST_CASE("epidemic right-hand side") {
    Fixture fx;
    EpiParams epi;
    ResidualFertility rf;
    EpiState y{}, dy{};
    y[eA] = 5000.0;
    y[eM] = 800.0;
    y[eFS] = 1200.0;
    y[eSH] = epi.N_h;

    SUBCASE("disease-free block is stationary and F_S follows the SIT F") {
        rhs_epi(y, fx.ep, fx.mu_A2, rf, epi, 25.0, dy);
        CHECK(dy[eFE] == 0.0);
        CHECK(dy[eFI] == 0.0);
        CHECK(dy[eIH] == 0.0);
        SitState ys{y[eA], y[eM], y[eFS], 0.0}, ds;
        rhs_sit(ys, fx.ep, fx.mu_A2, rf, ds);
        CHECK(dy[eFS] == doctest::Approx(ds[iF]));
    }
    SUBCASE("human population is conserved") {
        y[eIH] = 50.0;
        y[eRH] = 30.0;
        y[eSH] = epi.N_h - 80.0;
        y[eFI] = 400.0;
        rhs_epi(y, fx.ep, fx.mu_A2, rf, epi, 25.0, dy);
        CHECK(std::abs(dy[eSH] + dy[eIH] + dy[eRH]) < 1e-12 * epi.N_h);
    }
    SUBCASE("seeded outbreak grows when R_eff >> 1") {
        WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
        EpiState y0{};
        y0[eA] = eq.E_star[0];
        y0[eM] = eq.E_star[1];
        y0[eFS] = eq.E_star[2];
        y0[eSH] = epi.N_h - 1.0;
        y0[eIH] = 1.0;
        REQUIRE(r_eff(25.0, eq.E_star[2], fx.ep, epi) > 1.0);
        EpiRhs rhs{&fx.env, rf, epi};
        auto traj = integrate_trajectory<9>(rhs, y0, 0, 40, nullptr, eMS);
        CHECK(traj.final_state()[eIH] > 5.0);
    }
    SUBCASE("invalid human population") {
        EpiParams bad;
        bad.N_h = 0.0;
        CHECK_THROWS_AS(rhs_epi(y, fx.ep, fx.mu_A2, rf, bad, 25.0, dy),
                        ConfigError);
    }
}

TEST_CASE("impulse jump exactness") {
    Fixture fx;
    ResidualFertility rf;
    SitRhs rhs{&fx.env, rf};
    SitState y0{5000.0, 800.0, 1200.0, 0.0};

    ImpulseSchedule none;
    none.t0 = 0;
    none.bolus = 0.0;
    none.n_releases = 5;
    auto plain = integrate_trajectory<4>(rhs, y0, 0, 30, nullptr, iMS);
    auto zeroed = integrate_trajectory<4>(rhs, y0, 0, 30, &none, iMS);
    for (int d = 0; d <= 30; ++d)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(plain.daily[d][i] == zeroed.daily[d][i]);

    // Single release at day 3; daily samples see the pre-impulse state, so
    // M_S(3) = 0 and M_S(4) = bolus * exp(-mu_S).
    ImpulseSchedule one;
    one.t0 = 3;
    one.n_releases = 1;
    one.bolus = 120000.0;
    auto traj = integrate_trajectory<4>(rhs, y0, 0, 10, &one, iMS);
    CHECK(traj.daily[3][iMS] == 0.0);
    CHECK(traj.daily[4][iMS] ==
          doctest::Approx(one.bolus * std::exp(-fx.ep.mu_S)).epsilon(1e-9));
    // The wild components are continuous through the release instant.
    CHECK(traj.daily[3][iA] == doctest::Approx(plain.daily[3][iA]));
}

TEST_CASE("convergence to the wild equilibrium") {
    Fixture fx;
    WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
    SitState y0{0.1 * eq.E_star[0], 0.1 * eq.E_star[1], 0.1 * eq.E_star[2], 0.0};
    ResidualFertility rf;
    SitRhs rhs{&fx.env, rf};
    auto final = integrate_days<4>(rhs, y0, 0, 1000, nullptr, iMS, {},
                                   [](int, const SitState&) { return false; });
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(final[i] - eq.E_star[i]) < 0.01 * eq.E_star[i]);
}

TEST_CASE("step halving changes the sampled states below 1e-6 relative") {
    Fixture fx;
    ResidualFertility rf;
    SitRhs rhs{&fx.env, rf};
    SitState y0{20000.0, 3000.0, 5000.0, 0.0};
    ImpulseSchedule weekly;
    weekly.t0 = 0;
    weekly.n_releases = -1;
    weekly.bolus = 120000.0;
    auto coarse = integrate_trajectory<4>(rhs, y0, 0, 100, &weekly, iMS, {0.05});
    auto fine = integrate_trajectory<4>(rhs, y0, 0, 100, &weekly, iMS, {0.025});
    for (int d = 0; d <= 100; ++d)
        for (std::size_t i = 0; i < 4; ++i) {
            double scale = std::max(1.0, std::abs(fine.daily[d][i]));
            CHECK(std::abs(coarse.daily[d][i] - fine.daily[d][i]) / scale < 1e-6);
        }
}

TEST_CASE("monotone SIT pressure in the bolus size") {
    Fixture fx;
    ResidualFertility rf;  // eps = 0
    SitRhs rhs{&fx.env, rf};
    WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
    SitState y0{eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0};

    std::vector<Trajectory<4>> runs;
    for (double bolus : {0.0, 60000.0, 120000.0, 240000.0}) {
        ImpulseSchedule s;
        s.t0 = 0;
        s.n_releases = -1;
        s.bolus = bolus;
        runs.push_back(integrate_trajectory<4>(rhs, y0, 0, 200, &s, iMS));
    }
    for (std::size_t r = 1; r < runs.size(); ++r)
        for (int d = 0; d <= 200; ++d)
            CHECK(runs[r].daily[d][iF] <= runs[r - 1].daily[d][iF] + 1e-9);
}

TEST_CASE("extinction under a super-threshold continuous release rate") {
    Fixture fx;
    ResidualFertility rf;
    ReleaseThresholds th = release_thresholds(fx.ep, fx.mu_A2, rf);
    REQUIRE(th.defined);
    // Continuous rate sized to hold the standing population at 1.5 * M_T1.
    const double u_s = 1.5 * th.M_T1 * fx.ep.mu_S;
    auto rhs = [&](int, double, const SitState& y, SitState& dy) {
        rhs_sit(y, fx.ep, fx.mu_A2, rf, dy);
        dy[iMS] += u_s;
    };
    WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
    SitState y0{eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0};
    auto final = integrate_days<4>(rhs, y0, 0, 2000, nullptr, iMS, {},
                                   [](int, const SitState&) { return false; });
    CHECK(final[iA] < 1e-3 * eq.E_star[0]);
    CHECK(final[iF] < 1e-3 * eq.E_star[2]);
}

TEST_CASE("residual fertility above 1/N bounds the population from below") {
    Fixture fx;
    double N = basic_offspring(fx.ep);
    ResidualFertility rf;
    rf.eps = 1.5 / N;
    WildEquilibrium eq = wild_equilibrium(fx.ep, fx.mu_A2);
    ReleaseThresholds th0 = release_thresholds(fx.ep, fx.mu_A2, {0.0, 1.0});

    SitRhs rhs{&fx.env, rf};
    ImpulseSchedule s;
    s.t0 = 0;
    s.n_releases = -1;
    s.bolus = 100.0 * th0.M_T1;  // very massive releases
    SitState y0{eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0};
    auto traj = integrate_trajectory<4>(rhs, y0, 0, 3000, &s, iMS);

    // Tight version of the Appendix-A bound: as the standing sterile
    // population grows, A*_eps decreases to (eps*N - 1)/(N - 1) * A*.
    double bound = (rf.eps * N - 1.0) / (N - 1.0) * eq.E_star[0];
    double min_A = 1e30;
    for (int d = 2635; d <= 3000; ++d) min_A = std::min(min_A, traj.daily[d][iA]);
    CHECK(min_A >= bound * (1.0 - 1e-3));
}

TEST_CASE("blow-up and misalignment are reported") {
    Fixture fx;
    auto rhs = [&](int, double, const SitState& y, SitState& dy) {
        dy = {y[0] * y[0] * 1e3, 0.0, 0.0, 0.0};  // finite-time blow-up
    };
    SitState y0{10.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(
        integrate_days<4>(rhs, y0, 0, 50, nullptr, iMS, {},
                          [](int, const SitState&) { return false; }),
        NumericalError);

    ResidualFertility rf;
    SitRhs ok{&fx.env, rf};
    ImpulseSchedule off_mesh;
    off_mesh.t0 = 0.5112;  // not representable on the 0.05-day mesh
    off_mesh.bolus = 1.0;
    off_mesh.n_releases = 1;
    SitState y1{10.0, 10.0, 10.0, 0.0};
    CHECK_THROWS_AS(
        integrate_days<4>(ok, y1, 0, 5, &off_mesh, iMS, {},
                          [](int, const SitState&) { return false; }),
        ConfigError);
}
