#include "shadowlab/sections.hpp"

#include <cmath>

namespace shadowlab {

void validate(const Tomography& tom) {
    validate_frame(tom.frame);
    if (!(tom.t0 > 0.0 && tom.t0 < 1.0))
        throw ConstraintViolation("Tomography: t0 must lie in (0,1)");
    if (!(tom.r0 > 0.0 && tom.r0 < 1.0))
        throw ConstraintViolation("Tomography: r0 must lie in (0,1)");
    if (!((1.0 - tom.r0 * tom.r0) * (1.0 - 2.0 * tom.t0 * tom.t0) >= tom.r0 * tom.r0))
        throw ConstraintViolation(
            "Tomography: solvability bound (1-r0^2)(1-2 t0^2) >= r0^2 violated");
}

namespace {

struct RemainingSlots {
    int first;   // lower remaining index
    int second;  // higher remaining index
};

RemainingSlots remaining_slots(const CoordinateFrame& f) {
    RemainingSlots r{-1, -1};
    for (int j = 0; j < 4; ++j) {
        if (j == f.ob_axis || j == f.lf_axis) continue;
        if (r.first < 0)
            r.first = j;
        else
            r.second = j;
    }
    return r;
}

// First non-negative root of a continuous function with F(0) < 0: march
// until a sign change, then bisect.
template <class Fn>
double first_positive_root(Fn&& fn, double step_hint, const char* what) {
    double f0 = fn(0.0);
    if (!(f0 < 0.0)) throw SolvabilityFailure(std::string(what) + ": no completion budget");
    double step = std::max(step_hint, 1e-6);
    double a = 0.0, fa = f0;
    int evals = 0;
    while (true) {
        double b = a + step;
        double fb = fn(b);
        if (++evals > 4000) throw SolvabilityFailure(std::string(what) + ": root search exhausted");
        if (fb >= 0.0) {
            for (int it = 0; it < 110; ++it) {
                double m = 0.5 * (a + b);
                double fm = fn(m);
                if (fm < 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            (void)fa;
            return 0.5 * (a + b);
        }
        a = b;
        fa = fb;
        if (evals % 64 == 0) step *= 2.0;
    }
}

// Canonical completion. A at the ob slot with A = |A| e^{i ob_half_phase}
// assumed exact; L at the lf slot.
ComplexVec4 complete_impl(const QuadricForm& form, const CoordinateFrame& frame, cd A,
                          double ob_half_phase, cd L, bool branch) {
    validate_frame(frame);
    RemainingSlots rem = remaining_slots(frame);
    ComplexVec4 u{};
    u[static_cast<std::size_t>(frame.ob_axis)] = A;
    u[static_cast<std::size_t>(frame.lf_axis)] = L;

    const double m = 1.0 - std::norm(A) - std::norm(L);
    if (m < -1e-14) throw SolvabilityFailure("complete_remaining_pair: norm budget exhausted");
    const cd T = form.eval(u);  // fixed contribution of the ob/lf slots

    const bool sq1 = form.is_square_slot(rem.first);
    const bool sq2 = form.is_square_slot(rem.second);

    if (sq1 && sq2) {
        // Diagonal shape: a^2 + b^2 = S, canonical half-phase solution.
        const cd S = -T;
        const double aS = std::abs(S);
        if (m + 1e-13 < aS)
            throw SolvabilityFailure("complete_remaining_pair: diagonal budget below |S|");
        const double phi = std::arg(S);
        const cd half = std::polar(1.0, 0.5 * phi);
        cd a = std::sqrt(std::max(0.5 * (m + aS), 0.0)) * half;
        cd b = cd(0.0, 1.0) * std::sqrt(std::max(0.5 * (m - aS), 0.0)) * half;
        if (branch) std::swap(a, b);
        u[static_cast<std::size_t>(rem.first)] = a;
        u[static_cast<std::size_t>(rem.second)] = b;
        return u;
    }

    if (!sq1 && !sq2) {
        // The remaining pair is the product pair: 2 kappa x_a x_b = -T.
        const cd P = -T / (2.0 * form.kappa);
        const double aP = std::abs(P);
        if (m + 1e-13 < 2.0 * aP)
            throw SolvabilityFailure("complete_remaining_pair: product budget below 2|P|");
        const double delta = std::sqrt(std::max(m * m - 4.0 * aP * aP, 0.0));
        const double big = std::sqrt(std::max(0.5 * (m + delta), 0.0));
        const cd small = big > 1e-150 ? P / big : cd(0.0, 0.0);
        cd va = big, vb = small;  // pair_a carries the large modulus by default
        if (branch) std::swap(va, vb);
        u[static_cast<std::size_t>(form.pair_a)] = va;
        u[static_cast<std::size_t>(form.pair_b)] = vb;
        return u;
    }

    // Mixed shape: one remaining square slot B, one remaining pair slot D
    // whose partner is a fixed slot with value W (the anchor); the other
    // fixed slot is a square with value |.| e^{i phiF}:
    //   F + B^2 + 2 kappa W D = 0.
    const int slotB = sq1 ? rem.first : rem.second;
    const int slotD = sq1 ? rem.second : rem.first;
    const int anchor_slot = form.partner(slotD);
    const cd W = u[static_cast<std::size_t>(anchor_slot)];
    const int fixed_square = anchor_slot == frame.ob_axis ? frame.lf_axis : frame.ob_axis;
    const cd Fsq = u[static_cast<std::size_t>(fixed_square)];
    const double f = std::abs(Fsq);
    double phiF;
    if (fixed_square == frame.ob_axis) {
        phiF = ob_half_phase;
    } else {
        phiF = std::arg(Fsq);
        if (f < 1e-300) phiF = 0.0;
    }
    // Closed-form completion: take B purely normal to the fixed square value,
    //   B = +-i sqrt(x) e^{i phiF},   D = (x - h^2) e^{2 i phiF} / (2 kappa W),
    // so the constraint closes identically; the norm equation
    //   x + (x - h^2)^2 / (4|W|^2) = m
    // is strictly convex in x with a unique root x >= h^2,
    //   x = h^2 - 2|W|^2 + 2|W| sqrt(|W|^2 - h^2 + m).
    // The solution is smooth on the punctured label disk; at W = 0 the
    // modulus |D| -> sqrt(m - h^2) is continuous and the phase is anchored
    // at its centered value (a single phase-vortex point).
    const double h2 = f * f;
    const double aW = std::abs(W);
    if (m + 1e-13 < h2 - aW * aW)
        throw SolvabilityFailure("complete_remaining_pair(mixed): norm budget below the fixed square");
    const cd ei2F = std::polar(1.0, 2.0 * phiF);
    double x;
    cd D;
    if (aW < 1e-13) {
        x = h2;
        D = std::sqrt(std::max(m - h2, 0.0)) * ei2F / form.kappa;
    } else {
        double s = std::sqrt(std::max(aW * aW - h2 + m, 0.0));
        x = std::max(h2 - 2.0 * aW * aW + 2.0 * aW * s, 0.0);
        D = (x - h2) * ei2F / (2.0 * form.kappa * W);
    }
    cd B = cd(0.0, 1.0) * std::polar(std::sqrt(x), phiF);
    if (branch) B = -B;
    u[static_cast<std::size_t>(slotB)] = B;
    u[static_cast<std::size_t>(slotD)] = D;
    return u;
}

}  // namespace

ComplexVec4 complete_remaining_pair(const QuadricForm& form, const CoordinateFrame& frame,
                                    cd ob_value, double ob_half_phase, cd lf_value, bool branch) {
    return complete_impl(form, frame, ob_value, ob_half_phase, lf_value, branch);
}

StiefelPoint tomography_section(cd c, const Tomography& tom, const QuadricForm& form,
                                bool branch) {
    validate(tom);
    if (std::abs(c) > tom.r0 * (1.0 + 1e-12))
        throw OutOfDomain("tomography_section: |c| exceeds r0");
    const cd L = c / std::sqrt(2.0);
    const double h = tom.t0 * std::sqrt(1.0 - std::norm(L));
    const double phase = tom.frame.conjugate_ob ? -tom.theta0 : tom.theta0;
    const cd A = std::polar(h, phase);
    ComplexVec4 u = complete_impl(form, tom.frame, A, phase, L, branch);
    StiefelPoint p = make_stiefel(u, 1e-10, form);
    // Preserve the prescribed slots exactly (the projection step, when taken,
    // may move them at rounding level).
    p.u[static_cast<std::size_t>(tom.frame.lf_axis)] = L;
    p.u[static_cast<std::size_t>(tom.frame.ob_axis)] = A;
    auto res = constraint_residuals(p.u, form);
    if (res.quadric > 1e-10 || res.norm > 1e-10)
        throw SolvabilityFailure("tomography_section: constraint residuals after completion");
    return p;
}

StiefelPoint leaf_point(const QuadricForm& form, const CoordinateFrame& frame, double theta, cd c,
                        double rho, double psi, bool branch) {
    validate_frame(frame);
    if (!(rho > 1e-12)) throw DegenerateLeaf("leaf_point: ob-modulus at the binding");
    const cd L = c / std::sqrt(2.0);
    const double phase = frame.conjugate_ob ? -theta : theta;
    const cd A = std::polar(rho, phase);

    RemainingSlots rem = remaining_slots(frame);
    const bool sq1 = form.is_square_slot(rem.first);
    const bool sq2 = form.is_square_slot(rem.second);

    if (sq1 && sq2) {
        ComplexVec4 u = complete_impl(form, frame, A, phase, L, false);
        cd a = u[static_cast<std::size_t>(rem.first)];
        cd b = u[static_cast<std::size_t>(rem.second)];
        double cs = std::cos(psi), sn = std::sin(psi);
        cd an = cs * a - sn * b, bn = sn * a + cs * b;
        if (branch) std::swap(an, bn);
        u[static_cast<std::size_t>(rem.first)] = an;
        u[static_cast<std::size_t>(rem.second)] = bn;
        return make_stiefel(u, 1e-9, form);
    }
    if (!sq1 && !sq2) {
        ComplexVec4 u = complete_impl(form, frame, A, phase, L, branch);
        u[static_cast<std::size_t>(form.pair_a)] *= std::polar(1.0, psi);
        u[static_cast<std::size_t>(form.pair_b)] *= std::polar(1.0, -psi);
        return make_stiefel(u, 1e-9, form);
    }

    // Mixed shape: parametrize the leaf circle by the phase of the pair slot.
    const int slotB = sq1 ? rem.first : rem.second;
    const int slotD = sq1 ? rem.second : rem.first;
    ComplexVec4 u{};
    u[static_cast<std::size_t>(frame.ob_axis)] = A;
    u[static_cast<std::size_t>(frame.lf_axis)] = L;
    const cd W = u[static_cast<std::size_t>(form.partner(slotD))];
    const cd T = form.eval(u);
    const double m = 1.0 - std::norm(A) - std::norm(L);
    if (m <= 0.0) throw DegenerateLeaf("leaf_point: norm budget exhausted at this rho");
    const cd dir = std::polar(1.0, psi);
    auto normeq = [&](double d) {
        return std::abs(T + 2.0 * form.kappa * W * d * dir) + d * d - m;
    };
    if (!(normeq(0.0) < 0.0)) throw DegenerateLeaf("leaf_point: leaf empty at this rho");
    double d = first_positive_root(normeq, std::sqrt(m) / 16.0, "leaf_point(mixed)");
    cd D = d * dir;
    cd B = std::sqrt(-(T + 2.0 * form.kappa * W * D));
    if (branch) B = -B;
    u[static_cast<std::size_t>(slotB)] = B;
    u[static_cast<std::size_t>(slotD)] = D;
    return make_stiefel(u, 1e-9, form);
}

double leaf_rho_max(const QuadricForm& form, const CoordinateFrame& frame, cd c) {
    double lo = 1e-6, hi = std::sqrt(std::max(1.0 - 0.5 * std::norm(c), 0.0)) - 1e-9;
    auto ok = [&](double rho) {
        try {
            leaf_point(form, frame, 0.0, c, rho, 0.0, false);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    if (!ok(lo)) return 0.0;
    if (ok(hi)) return hi;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace shadowlab
