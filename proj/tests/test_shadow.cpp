#include <doctest.h>

#include <random>

#include "shadowlab/shadow.hpp"

using namespace shadowlab;

namespace {
const double s2 = 1.0 / std::sqrt(2.0);
const cd I{0.0, 1.0};
const KatokParams kEps{0.0618};
}  // namespace

TEST_CASE("shadow_path along the Katok flow: linear phase, constant |c|") {
    KatokScenario scn(kEps, CoordinateFrame{0, 1, false});
    StiefelPoint start = make_stiefel({cd(s2, 0), I * s2, 0, 0}, 1e-12, katok_form());
    TransversePath path = shadow_path(scn, start, 1.0, 0.01);
    REQUIRE(path.samples.size() == 101);
    CHECK(path.transversality_ok);
    for (const auto& s : path.samples) {
        // margins are exactly 2 pi up to finite-difference error
        CHECK(std::abs(s.margin - 2.0 * M_PI) <= 1e-6);
        CHECK(std::abs(std::abs(s.label.c) - 1.0) <= 1e-12);
        // theta advances linearly: theta(t) = 2 pi t mod 2 pi
        CHECK(circle_dist(s.label.theta, std::fmod(2.0 * M_PI * s.t, 2.0 * M_PI)) <= 1e-9);
    }
}

TEST_CASE("shadow_path from a binding start reports OnBinding") {
    KatokScenario scn(kEps, CoordinateFrame{0, 1, false});
    // w0 = 0: parametrizes the binding circle; the open-book phase is undefined
    StiefelPoint binding = make_stiefel({0, 0, cd(1, 0), 0}, 1e-12, katok_form());
    CHECK_THROWS_AS(shadow_path(scn, binding, 1.0, 0.01), OnBinding);
}

TEST_CASE("conjugacy residual: the i-th Katok shadow is the spheroid flow") {
    ConjugacyGrid grid;
    grid.n_starts = 40;
    grid.n_times = 100;
    grid.T = 10.0;
    for (int axis : {1, 2, 3}) {
        ConjugacyReport rep = conjugacy_residual(kEps, axis, grid);
        CAPTURE(axis);
        CHECK(rep.max_residual <= 1e-13);
        CHECK(rep.sample_count > 0);
        if (axis == 1) CHECK(rep.spheroid.b == doctest::Approx(1.0));  // Hopf
        if (axis == 2) CHECK(rep.spheroid.b == doctest::Approx(1.0 + kEps.epsilon));
        if (axis == 3) CHECK(rep.spheroid.b == doctest::Approx(1.0 - kEps.epsilon));
    }
}

TEST_CASE("conjugacy residual: eps = 0 degenerates to the Hopf report") {
    ConjugacyGrid grid;
    grid.n_starts = 15;
    grid.n_times = 60;
    for (int axis : {1, 2, 3}) {
        ConjugacyReport rep = conjugacy_residual(KatokParams{0.0}, axis, grid);
        CHECK(rep.max_residual <= 1e-13);
        CHECK(rep.spheroid.b == doctest::Approx(1.0));
    }
}

TEST_CASE("conjugacy residual is invariant under the global circle action") {
    // the action w -> e^{i phi} w preserves the w-quadric, commutes with the
    // Katok flow and acts on sigma_i consistently on both coordinates
    ConjugacyGrid grid;
    grid.n_starts = 8;
    grid.n_times = 40;
    KatokScenario scn(kEps, CoordinateFrame{0, 2, false});
    std::mt19937_64 rng(grid.seed);
    SpheroidParams sp{1.0, 1.0 + kEps.epsilon};
    for (int it = 0; it < grid.n_starts; ++it) {
        StiefelPoint p = as_stiefel(scn.random_point(rng));
        cd phase = std::polar(1.0, 0.8371);
        ComplexVec4 rotated = p.u;
        for (auto& z : rotated) z *= phase;
        StiefelPoint q = make_stiefel(rotated, 1e-10, katok_form());
        double res_p = 0.0, res_q = 0.0;
        for (int j = 0; j <= grid.n_times; ++j) {
            double t = grid.T * j / grid.n_times;
            auto resid = [&](const StiefelPoint& pt) {
                SpheroidPoint via_flow =
                    spheroid_project(katok_flow(pt, t, kEps), scn.frame());
                SpheroidPoint via_shadow =
                    spheroid_flow(spheroid_project(pt, scn.frame()), t, sp);
                return std::sqrt(std::norm(via_flow.u - via_shadow.u) +
                                 std::norm(via_flow.v - via_shadow.v));
            };
            res_p = std::max(res_p, resid(p));
            res_q = std::max(res_q, resid(q));
        }
        CHECK(std::abs(res_p - res_q) <= 1e-13);
    }
}

TEST_CASE("semi-conjugacy: label dynamics depends only on the label (Katok)") {
    CoordinateFrame fr{0, 2, false};
    const cd c{0.3, -0.15};
    const double theta = 0.9;
    // two distinct points of one leaf
    StiefelPoint p1 = leaf_point(katok_form(), fr, theta, c, 0.25, 0.4, false);
    StiefelPoint p2 = leaf_point(katok_form(), fr, theta, c, 0.45, 2.7, true);
    for (double t : {0.13, 0.77, 1.9, 4.2}) {
        LeafLabel l1 = leaf_label(katok_flow(p1, t, kEps), fr);
        LeafLabel l2 = leaf_label(katok_flow(p2, t, kEps), fr);
        CHECK(labels_equal(l1, l2, 1e-12, 1e-12));
    }
}

TEST_CASE("dalpha antisymmetry and positivity on Katok leaves") {
    ContactWeight wgt{ContactWeight::Kind::KatokHinv, kEps.epsilon};
    std::mt19937_64 rng(51);
    std::normal_distribution<double> g(0.0, 1.0);
    StiefelPoint u = make_stiefel({cd(s2, 0), I * s2, 0, 0}, 1e-12, katok_form());
    ComplexVec4 v, w;
    for (auto& z : v) z = cd(g(rng), g(rng));
    for (auto& z : w) z = cd(g(rng), g(rng));
    CHECK(std::abs(dalpha(wgt, u.u, v, v)) <= 1e-14);
    CHECK(std::abs(dalpha(wgt, u.u, v, w) + dalpha(wgt, u.u, w, v)) <= 1e-14);

    // central fiber of the 0-page: min normalized value positive
    PositivityReport rep = leaf_symplectic_check(katok_form(), CoordinateFrame{0, 2, false}, wgt,
                                                 LeafLabel{0.0, cd(0, 0)}, 1000);
    CHECK(rep.samples >= 500);
    CHECK(rep.min_normalized > 0.0);
}

TEST_CASE("leaf positivity holds off the central fiber too") {
    ContactWeight wgt{ContactWeight::Kind::KatokHinv, kEps.epsilon};
    PositivityReport rep = leaf_symplectic_check(katok_form(), CoordinateFrame{0, 2, false}, wgt,
                                                 LeafLabel{0.3, cd(0.2, 0.1)}, 200);
    CHECK(rep.samples >= 100);
    CHECK(rep.min_normalized > 0.0);
    CHECK(rep.max_normalized >= rep.min_normalized);
}
