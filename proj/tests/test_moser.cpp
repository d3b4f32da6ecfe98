#include <doctest.h>

#include <cmath>
#include <random>

#include "shadowlab/moser.hpp"

using namespace shadowlab;

namespace {
const double s2 = 1.0 / std::sqrt(2.0);

PhaseState random_admissible(std::mt19937_64& rng, double mu) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        PhaseState s{{0.6 + 0.35 * u(rng), 0.4 * u(rng), 0.3 * u(rng)},
                     {0.5 * u(rng), 0.9 + 0.5 * u(rng), 0.4 * u(rng)},
                     mu};
        MoserChartParams mp;
        try {
            validate(s);
            if (osculating_energy(s, mp) < -0.05) return s;
        } catch (const Error&) {
        }
    }
}
}  // namespace

TEST_CASE("moser_chart hand-evaluated example") {
    // mu = 0, q = (1,0,0), p = (0,1,0): E = -1/2, u = (0, i/sqrt2, 1/sqrt2, 0)
    PhaseState s{{1, 0, 0}, {0, 1, 0}, 0.0};
    StiefelPoint u = moser_chart(s, MoserChartParams{});
    CHECK(std::abs(u[0]) <= 1e-14);
    CHECK(std::abs(u[1] - cd(0, s2)) <= 1e-14);
    CHECK(std::abs(u[2] - cd(s2, 0)) <= 1e-14);
    CHECK(std::abs(u[3]) <= 1e-14);
}

TEST_CASE("moser_chart sends planar states into {u3 = 0}") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 30; ++it) {
        PhaseState s = random_admissible(rng, 0.0);
        s.q[2] = 0.0;
        s.p[2] = 0.0;
        StiefelPoint u = moser_chart(s, MoserChartParams{});
        CHECK(std::abs(u[3]) <= 1e-12);
    }
}

TEST_CASE("moser_chart constraint residuals on random admissible states") {
    std::mt19937_64 rng(37);
    MoserChartParams mp;
    for (int it = 0; it < 100; ++it) {
        PhaseState s = random_admissible(rng, it % 2 ? 1e-3 : 0.0);
        StiefelPoint u = moser_chart(s, mp);
        auto res = constraint_residuals(u.u, QuadricForm::standard());
        CHECK(res.quadric <= 1e-10);
        CHECK(res.norm <= 1e-10);
    }
}

TEST_CASE("moser_chart rejects states above the energy floor") {
    PhaseState s{{1, 0, 0}, {0, 2.0, 0}, 0.0};  // E = 2 - 1 = 1 > 0
    CHECK_THROWS_AS(moser_chart(s, MoserChartParams{}), EnergyAboveFloor);
}

TEST_CASE("moser_chart inverse recovers the planar circular orbit") {
    PhaseState s{{1, 0, 0}, {0, 1, 0}, 0.0};
    MoserChartParams mp;
    StiefelPoint u = moser_chart(s, mp);
    PhaseState back = moser_chart_inverse(u, 1.0, mp, 0.0);  // lambda = -2E = 1
    for (int i = 0; i < 3; ++i) {
        auto iu = static_cast<std::size_t>(i);
        CHECK(std::abs(back.q[iu] - s.q[iu]) <= 1e-10);
        CHECK(std::abs(back.p[iu] - s.p[iu]) <= 1e-10);
    }
}

TEST_CASE("moser_chart round-trips through the inverse on random states") {
    std::mt19937_64 rng(41);
    MoserChartParams mp;
    for (int it = 0; it < 50; ++it) {
        PhaseState s = random_admissible(rng, 0.0);
        double lam = -2.0 * osculating_energy(s, mp);
        StiefelPoint u = moser_chart(s, mp);
        PhaseState back = moser_chart_inverse(u, lam, mp, s.mu);
        for (int i = 0; i < 3; ++i) {
            auto iu = static_cast<std::size_t>(i);
            CHECK(std::abs(back.q[iu] - s.q[iu]) <= 1e-9);
            CHECK(std::abs(back.p[iu] - s.p[iu]) <= 1e-9);
        }
        // forward again: same model point
        StiefelPoint u2 = moser_chart(back, mp);
        for (int j = 0; j < 4; ++j) CHECK(std::abs(u2[j] - u[j]) <= 1e-9);
    }
}

TEST_CASE("moser_state_on_level hits the requested Jacobi level") {
    std::mt19937_64 rng(43);
    MoserChartParams mp;
    for (int it = 0; it < 20; ++it) {
        PhaseState s = random_admissible(rng, 0.0);
        StiefelPoint u = moser_chart(s, mp);
        PhaseState on = moser_state_on_level(u, -1.8, mp, 0.0);
        CHECK(std::abs(jacobi_constant(on) + 1.8) <= 1e-10);
        // same model point after the forward chart
        StiefelPoint u2 = moser_chart(on, mp);
        for (int j = 0; j < 4; ++j) CHECK(std::abs(u2[j] - u[j]) <= 1e-8);
    }
}
