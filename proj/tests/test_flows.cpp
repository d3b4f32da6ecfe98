#include <doctest.h>

#include <algorithm>
#include <random>

#include "shadowlab/flows.hpp"
#include "shadowlab/scenario.hpp"

using namespace shadowlab;

namespace {
const double s2 = 1.0 / std::sqrt(2.0);
const cd I{0.0, 1.0};
const KatokParams kEps{0.0618};

StiefelPoint random_katok_point(std::mt19937_64& rng) {
    StiefelPoint z = random_standard_stiefel(rng);
    return make_stiefel(katok_frame_change(z.u), 1e-10, katok_form());
}

double pdist(const StiefelPoint& a, const StiefelPoint& b) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += std::norm(a[j] - b[j]);
    return std::sqrt(s);
}
}  // namespace

TEST_CASE("katok_flow closed-form examples") {
    StiefelPoint p = make_stiefel({cd(s2, 0), I * s2, 0, 0}, 1e-12, katok_form());
    CHECK(pdist(katok_flow(p, 0.0, kEps), p) == 0.0);
    CHECK(pdist(katok_flow(p, 1.0, kEps), p) <= 1e-13);  // simple closed orbit, period 1

    StiefelPoint w2 = make_stiefel({0, 0, cd(1, 0), 0}, 1e-12, katok_form());
    CHECK(pdist(katok_flow(w2, 1.0 / (1.0 + kEps.epsilon), kEps), w2) <= 1e-13);
}

TEST_CASE("katok_flow group law and moduli preservation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> tdist(-3.0, 3.0);
    for (int it = 0; it < 40; ++it) {
        StiefelPoint p = random_katok_point(rng);
        double s = tdist(rng), t = tdist(rng);
        StiefelPoint one = katok_flow(katok_flow(p, s, kEps), t, kEps);
        StiefelPoint two = katok_flow(p, s + t, kEps);
        CHECK(pdist(one, two) <= 1e-13);
        StiefelPoint q = katok_flow(p, t, kEps);
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(std::abs(q[j]) - std::abs(p[j])) <= 1e-13);
        auto res = constraint_residuals(q.u, katok_form());
        CHECK(res.quadric <= 1e-13);
        CHECK(res.norm <= 1e-13);
        CHECK(std::abs(katok_hamiltonian(q.u, kEps) - katok_hamiltonian(p.u, kEps)) <= 1e-13);
    }
}

TEST_CASE("katok_flow frequency spectrum (1, 1, 1+eps, 1-eps)") {
    std::mt19937_64 rng(4);
    StiefelPoint p = random_katok_point(rng);
    const double h = 1e-8;
    StiefelPoint q = katok_flow(p, h, kEps);
    auto nu = katok_frequencies(kEps);
    for (int j = 0; j < 4; ++j) {
        cd fd = (q[j] - p[j]) / h;
        cd expect = 2.0 * M_PI * I * nu[static_cast<std::size_t>(j)] * p[j];
        CHECK(std::abs(fd - expect) <= 1e-6);
    }
}

TEST_CASE("spheroid_flow examples and group law") {
    SpheroidPoint s01 = make_spheroid_point(0, cd(1, 0));
    SpheroidParams ab{1.0, 2.0};
    SpheroidPoint moved = spheroid_flow(s01, 0.5, ab);
    CHECK(std::abs(moved.u - s01.u) <= 1e-15);
    CHECK(std::abs(moved.v - s01.v) <= 1e-13);

    SpheroidPoint s10 = make_spheroid_point(cd(1, 0), 0);
    SpheroidParams any{1.0, 1.618};
    CHECK(std::abs(spheroid_flow(s10, 0.0, any).u - s10.u) == 0.0);
    CHECK(std::abs(spheroid_flow(s10, 1.0, any).u - s10.u) <= 1e-13);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> tdist(-2.0, 2.0);
    SpheroidScenario scn(SpheroidParams{1.3, 0.7});
    for (int it = 0; it < 40; ++it) {
        SpheroidPoint p = as_spheroid(scn.random_point(rng));
        double s = tdist(rng), t = tdist(rng);
        SpheroidPoint one = spheroid_flow(spheroid_flow(p, s, scn.params), t, scn.params);
        SpheroidPoint two = spheroid_flow(p, s + t, scn.params);
        CHECK(std::abs(one.u - two.u) <= 1e-13);
        CHECK(std::abs(one.v - two.v) <= 1e-13);
    }
}

TEST_CASE("periodic census: 4 orbits for irrational eps") {
    CensusResult res = periodic_census(kEps, 2.0);
    REQUIRE(!res.resonant);
    REQUIRE(res.orbits.size() == 4);

    std::vector<double> periods;
    for (const auto& orb : res.orbits) periods.push_back(orb.period);
    std::sort(periods.begin(), periods.end());
    CHECK(periods[0] == doctest::Approx(1.0 / (1.0 + kEps.epsilon)).epsilon(1e-9));
    CHECK(periods[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(periods[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(periods[3] == doctest::Approx(1.0 / (1.0 - kEps.epsilon)).epsilon(1e-9));

    // the two period-1 orbits lie in {w2 = w3 = 0} with w1 = +- i w0
    int found = 0;
    for (const auto& orb : res.orbits) {
        if (orb.support != "w0,w1") continue;
        ++found;
        CHECK(std::abs(orb.representative[2]) <= 1e-14);
        CHECK(std::abs(orb.representative[3]) <= 1e-14);
        cd ratio = orb.representative[1] / orb.representative[0];
        CHECK(std::abs(std::abs(ratio.imag()) - 1.0) <= 1e-12);
        CHECK(std::abs(ratio.real()) <= 1e-12);
        CHECK(pdist(katok_flow(orb.representative, orb.period, kEps), orb.representative) <=
              1e-12);
    }
    CHECK(found == 2);
}

TEST_CASE("periodic census declines a finite count for rational eps") {
    CensusResult res = periodic_census(KatokParams{0.25}, 2.0);
    CHECK(res.resonant);
    CHECK(res.orbits.empty());
}
