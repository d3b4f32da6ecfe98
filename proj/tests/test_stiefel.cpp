#include <doctest.h>

#include <random>

#include "shadowlab/flows.hpp"
#include "shadowlab/scenario.hpp"
#include "shadowlab/stiefel.hpp"

using namespace shadowlab;

namespace {
const double s2 = 1.0 / std::sqrt(2.0);
const cd I{0.0, 1.0};
}  // namespace

TEST_CASE("make_stiefel accepts points on the quadric") {
    StiefelPoint p = make_stiefel({cd(s2, 0), I * s2, 0, 0});
    CHECK(std::abs(QuadricForm::standard().eval(p.u)) <= 1e-12);
    CHECK(std::abs(vnorm(p.u) - 1.0) <= 1e-12);

    // (1/2, i/2, 1/sqrt2, 0) lies on the Katok w-quadric:
    // 1/4 - 1/4 - 2i w2 w3 = 0 with w3 = 0, norm 1/4 + 1/4 + 1/2 = 1.
    StiefelPoint q = make_stiefel({cd(0.5, 0), cd(0, 0.5), cd(s2, 0), 0}, 1e-10, katok_form());
    CHECK(std::abs(katok_form().eval(q.u)) <= 1e-12);
    CHECK(std::abs(vnorm(q.u) - 1.0) <= 1e-12);
}

TEST_CASE("make_stiefel rejects points far from the constraint set") {
    CHECK_THROWS_AS(make_stiefel({cd(1, 0), 0, 0, 0}), ConstraintViolation);
    CHECK_THROWS_AS(make_stiefel({0, 0, 0, 0}), ConstraintViolation);
}

TEST_CASE("make_stiefel round-trips: validated points re-validate") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        StiefelPoint p = random_standard_stiefel(rng);
        StiefelPoint q = make_stiefel(p.u, 1e-12);
        auto res = constraint_residuals(q.u, q.form);
        CHECK(res.quadric <= 1e-12);
        CHECK(res.norm <= 1e-12);
    }
}

TEST_CASE("katok_frame_change fixed coordinates and the paper image") {
    ComplexVec4 w = katok_frame_change({cd(1, 0), 0, 0, 0});
    CHECK(std::abs(w[0] - cd(1, 0)) == 0.0);
    CHECK(std::abs(w[1]) == 0.0);

    ComplexVec4 w2 = katok_frame_change({0, 0, cd(1, 0), 0});
    CHECK(std::abs(w2[2] - cd(s2, 0)) <= 1e-15);
    CHECK(std::abs(w2[3] - I * s2) <= 1e-15);
}

TEST_CASE("katok_frame_change is unitary and maps quadric to the w-form") {
    // oracle: the explicit 4x4 matrix, w3 = (i sqrt2/2) z2 + (sqrt2/2) z3
    const cd U[4][4] = {{1, 0, 0, 0},
                        {0, 1, 0, 0},
                        {0, 0, s2, I * s2},
                        {0, 0, I * s2, s2}};
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        ComplexVec4 z;
        for (auto& v : z) v = cd(g(rng), g(rng));
        ComplexVec4 w = katok_frame_change(z);
        CHECK(std::abs(vnorm(w) - vnorm(z)) <= 1e-14 * (1.0 + vnorm(z)));
        ComplexVec4 w_mat{};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                w_mat[static_cast<std::size_t>(r)] +=
                    U[r][c] * z[static_cast<std::size_t>(c)];
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(w[static_cast<std::size_t>(j)] - w_mat[static_cast<std::size_t>(j)]) <=
                  1e-14 * (1.0 + vnorm(z)));
        // inverse is the adjoint
        ComplexVec4 back = katok_frame_change_inverse(w);
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(back[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(j)]) <=
                  1e-13 * (1.0 + vnorm(z)));
    }

    std::mt19937_64 rng2(12);
    for (int it = 0; it < 100; ++it) {
        StiefelPoint p = random_standard_stiefel(rng2);
        ComplexVec4 w = katok_frame_change(p.u);
        CHECK(std::abs(katok_form().eval(w)) <= 1e-12);
    }
}

TEST_CASE("scr3bp_frame_change carries the quadric to the split form") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        StiefelPoint p = random_standard_stiefel(rng);
        ComplexVec4 v = scr3bp_frame_change(p.u);
        CHECK(std::abs(scr3bp_form().eval(v)) <= 1e-12);
        CHECK(std::abs(vnorm(v) - 1.0) <= 1e-12);
        ComplexVec4 back = scr3bp_frame_change_inverse(v);
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(back[static_cast<std::size_t>(j)] - p.u[static_cast<std::size_t>(j)]) <= 1e-14);
    }
}

TEST_CASE("ob_phase") {
    CoordinateFrame f{0, 1, false};
    StiefelPoint p = make_stiefel({cd(s2, 0), I * s2, 0, 0});
    CHECK(ob_phase(p, f) == doctest::Approx(0.0).epsilon(1e-14));

    StiefelPoint q = make_stiefel({I * s2, cd(s2, 0), 0, 0});
    CHECK(ob_phase(q, f) == doctest::Approx(M_PI / 2).epsilon(1e-14));

    // conjugation flips the angle
    CoordinateFrame fc{0, 1, true};
    CHECK(ob_phase(q, fc) == doctest::Approx(3 * M_PI / 2).epsilon(1e-14));

    StiefelPoint b = make_stiefel({0, 0, cd(s2, 0), I * s2});
    CHECK_THROWS_AS(ob_phase(b, f), OnBinding);
}

TEST_CASE("leaf_label") {
    StiefelPoint p = make_stiefel({cd(0.5, 0), cd(0, 0.5), cd(s2, 0), 0}, 1e-10, katok_form());
    LeafLabel lab = leaf_label(p, CoordinateFrame{0, 2, false});
    CHECK(lab.theta == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(lab.c - cd(1.0, 0.0)) <= 1e-14);

    StiefelPoint q = make_stiefel({cd(s2, 0), I * s2, 0, 0});
    LeafLabel lab2 = leaf_label(q, CoordinateFrame{0, 1, false});
    CHECK(std::abs(lab2.c - I) <= 1e-14);

    StiefelPoint b = make_stiefel({0, 0, cd(s2, 0), I * s2});
    CHECK_THROWS_AS(leaf_label(b, CoordinateFrame{0, 1, false}), OnBinding);
}

TEST_CASE("leaf_label constant on sampled leaf parametrizations") {
    // {arg u_ob = theta, u_lf = const} by construction of leaf_point
    std::mt19937_64 rng(5);
    const cd c{0.31, -0.12};
    for (double rho : {0.2, 0.35, 0.5}) {
        for (double psi : {0.0, 1.1, 3.9}) {
            StiefelPoint p = leaf_point(katok_form(), CoordinateFrame{0, 2, false}, 0.7, c, rho,
                                        psi, false);
            LeafLabel lab = leaf_label(p, CoordinateFrame{0, 2, false});
            CHECK(circle_dist(lab.theta, 0.7) <= 1e-14);
            CHECK(std::abs(lab.c - c) <= 1e-14);
        }
    }
}

TEST_CASE("spheroid_project") {
    CoordinateFrame f01{0, 1, false};
    StiefelPoint p = make_stiefel({cd(s2, 0), I * s2, 0, 0});
    SpheroidPoint s = spheroid_project(p, f01);
    CHECK(std::abs(s.u - cd(s2, 0)) <= 1e-14);
    CHECK(std::abs(s.v - I * s2) <= 1e-14);

    CoordinateFrame f02{0, 2, false};
    StiefelPoint q = make_stiefel({cd(0.5, 0), cd(0, 0.5), cd(s2, 0), 0}, 1e-10, katok_form());
    SpheroidPoint s2p = spheroid_project(q, f02);
    CHECK(std::abs(s2p.u - cd(1.0 / std::sqrt(3.0), 0)) <= 1e-14);
    CHECK(std::abs(s2p.v - cd(std::sqrt(2.0 / 3.0), 0)) <= 1e-14);
    CHECK(std::abs(std::norm(s2p.u) + std::norm(s2p.v) - 1.0) <= 1e-12);

    // (0, i/sqrt2, 0, 1/sqrt2) lies on the standard quadric: -1/2 + 1/2 = 0
    StiefelPoint d = make_stiefel({0, I * s2, 0, cd(s2, 0)});
    CHECK_THROWS_AS(spheroid_project(d, f02), DegenerateProjection);

    // projection output always satisfies the spheroid norm invariant
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        StiefelPoint r = random_standard_stiefel(rng);
        try {
            SpheroidPoint sp = spheroid_project(r, f02);
            CHECK(std::abs(std::norm(sp.u) + std::norm(sp.v) - 1.0) <= 1e-12);
        } catch (const DegenerateProjection&) {
        }
    }
}
