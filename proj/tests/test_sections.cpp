#include <doctest.h>

#include <random>

#include "shadowlab/flows.hpp"
#include "shadowlab/sections.hpp"

using namespace shadowlab;

namespace {
const QuadricForm kStd = QuadricForm::standard();

std::vector<cd> domain_grid(double r0, int n) {
    std::vector<cd> out;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            cd c(-r0 + 2.0 * r0 * ix / (n - 1), -r0 + 2.0 * r0 * iy / (n - 1));
            if (std::abs(c) <= r0 * 0.98) out.push_back(c);
        }
    return out;
}
}  // namespace

TEST_CASE("Tomography solvability invariant") {
    Tomography ok{0.0, 0.3, 0.6, CoordinateFrame{0, 2, false}};
    CHECK_NOTHROW(validate(ok));
    // t0 = 0.3 admits r0 up to sqrt(0.82/1.82) ~ 0.671
    Tomography bad{0.0, 0.3, 0.68, CoordinateFrame{0, 2, false}};
    CHECK_THROWS_AS(validate(bad), ConstraintViolation);
}

TEST_CASE("tomography_section: center of the disk") {
    for (const QuadricForm* form : {&katok_form(), &scr3bp_form()}) {
        CoordinateFrame fr = (form == &katok_form()) ? CoordinateFrame{0, 2, false}
                                                     : CoordinateFrame{2, 0, false};
        Tomography tom{0.4, 0.3, 0.6, fr};
        StiefelPoint p = tomography_section(cd(0, 0), tom, *form);
        auto res = constraint_residuals(p.u, *form);
        CHECK(res.quadric <= 1e-12);
        CHECK(res.norm <= 1e-12);
        CHECK(std::abs(p[fr.lf_axis]) <= 1e-15);
    }
}

TEST_CASE("tomography_section label round-trip is exact on a grid") {
    struct Case {
        const QuadricForm* form;
        CoordinateFrame fr;
    };
    std::vector<Case> cases{{&katok_form(), {0, 2, false}},    // mixed completion
                            {&katok_form(), {0, 1, false}},    // product completion
                            {&katok_form(), {0, 3, false}},    // mixed, other slot
                            {&scr3bp_form(), {2, 0, false}},   // product completion
                            {&scr3bp_form(), {2, 1, false}},   // mixed (zeta frame)
                            {&kStd, {0, 1, false}}};  // diagonal
    for (const auto& cs : cases) {
        Tomography tom{1.1, 0.3, 0.6, cs.fr};
        for (cd c : domain_grid(tom.r0, 10)) {
            StiefelPoint p = tomography_section(c, tom, *cs.form);
            LeafLabel lab = leaf_label(p, cs.fr);
            CHECK(circle_dist(lab.theta, tom.theta0) <= 1e-14);
            CHECK(std::abs(lab.c - c) <= 1e-14);
            // ob-modulus profile
            CHECK(std::abs(std::abs(p[cs.fr.ob_axis]) -
                           tom.t0 * std::sqrt(1.0 - 0.5 * std::norm(c))) <= 1e-13);
            auto res = constraint_residuals(p.u, *cs.form);
            CHECK(res.quadric <= 1e-12);
            CHECK(res.norm <= 1e-12);
        }
    }
}

TEST_CASE("tomography_section respects conjugated open-book phases") {
    CoordinateFrame fr{2, 0, true};
    Tomography tom{0.9, 0.3, 0.5, fr};
    StiefelPoint p = tomography_section(cd(0.2, -0.1), tom, scr3bp_form());
    LeafLabel lab = leaf_label(p, fr);
    CHECK(circle_dist(lab.theta, tom.theta0) <= 1e-14);
}

TEST_CASE("tomography_section rejects out-of-domain labels") {
    Tomography tom{0.0, 0.3, 0.6, CoordinateFrame{0, 2, false}};
    CHECK_THROWS_AS(tomography_section(cd(0.7, 0), tom, katok_form()), OutOfDomain);
}

TEST_CASE("section branches are distinct valid sections") {
    Tomography tom{0.3, 0.3, 0.6, CoordinateFrame{2, 0, false}};
    StiefelPoint a = tomography_section(cd(0.2, 0.1), tom, scr3bp_form(), false);
    StiefelPoint b = tomography_section(cd(0.2, 0.1), tom, scr3bp_form(), true);
    // prograde/retrograde sheets swap the product-pair moduli
    CHECK(std::abs(a[1]) > std::abs(a[3]));
    CHECK(std::abs(b[1]) < std::abs(b[3]));
    CHECK(std::abs(leaf_label(b, tom.frame).c - cd(0.2, 0.1)) <= 1e-14);
}

TEST_CASE("section is continuous on the punctured domain (mixed completion)") {
    // The mixed completion is smooth away from the single phase-vortex point
    // at c = 0: check continuity along a full circle and along a radius.
    Tomography tom{0.7, 0.3, 0.6, CoordinateFrame{0, 2, false}};
    const int n = 96;
    auto dist = [](const StiefelPoint& a, const StiefelPoint& b) {
        double d = 0.0;
        for (int j = 0; j < 4; ++j) d += std::norm(a[j] - b[j]);
        return std::sqrt(d);
    };
    StiefelPoint prev = tomography_section(std::polar(0.45, 0.0), tom, katok_form());
    for (int i = 1; i <= n; ++i) {
        StiefelPoint cur =
            tomography_section(std::polar(0.45, 2.0 * M_PI * i / n), tom, katok_form());
        CHECK(dist(cur, prev) <= 0.2);
        prev = cur;
    }
    prev = tomography_section(cd(0.02, 0.015), tom, katok_form());
    for (int i = 1; i < n; ++i) {
        cd c = cd(0.02, 0.015) * (1.0 + 21.0 * static_cast<double>(i) / n);
        StiefelPoint cur = tomography_section(c, tom, katok_form());
        CHECK(dist(cur, prev) <= 0.2);
        prev = cur;
    }
}

TEST_CASE("leaf_point stays on the leaf across parameters and branches") {
    struct Case {
        const QuadricForm* form;
        CoordinateFrame fr;
    };
    std::vector<Case> cases{{&katok_form(), {0, 2, false}},
                            {&scr3bp_form(), {2, 0, false}},
                            {&kStd, {0, 1, false}}};
    for (const auto& cs : cases) {
        const cd c{0.25, -0.2};
        double rho_max = leaf_rho_max(*cs.form, cs.fr, c);
        REQUIRE(rho_max > 0.1);
        for (double fr_rho : {0.2, 0.5, 0.8}) {
            double rho = fr_rho * rho_max;
            for (double psi : {0.0, 1.3, 2.9, 5.3}) {
                for (bool branch : {false, true}) {
                    StiefelPoint p = leaf_point(*cs.form, cs.fr, 0.8, c, rho, psi, branch);
                    LeafLabel lab = leaf_label(p, cs.fr);
                    CHECK(circle_dist(lab.theta, 0.8) <= 1e-12);
                    CHECK(std::abs(lab.c - c) <= 1e-12);
                    CHECK(std::abs(std::abs(p[cs.fr.ob_axis]) - rho) <= 1e-12);
                }
            }
        }
    }
}
