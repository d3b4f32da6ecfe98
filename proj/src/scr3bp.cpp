#include "shadowlab/scr3bp.hpp"

#include <cmath>

namespace shadowlab {

namespace {
double dist(const Vec3& a, const Vec3& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}
}  // namespace

Vec3 heavy_primary(double mu) { return {-mu, 0.0, 0.0}; }
Vec3 light_primary(double mu) { return {1.0 - mu, 0.0, 0.0}; }

void validate(const PhaseState& s, double collision_guard) {
    if (!(s.mu >= 0.0 && s.mu <= 1.0))
        throw ConstraintViolation("PhaseState: mu must lie in [0,1]");
    for (double x : s.q)
        if (!std::isfinite(x)) throw ConstraintViolation("PhaseState: non-finite q");
    for (double x : s.p)
        if (!std::isfinite(x)) throw ConstraintViolation("PhaseState: non-finite p");
    if (s.mu < 1.0 && dist(s.q, heavy_primary(s.mu)) < collision_guard)
        throw CollisionGuard("PhaseState: within collision guard of the heavy primary");
    if (s.mu > 0.0 && dist(s.q, light_primary(s.mu)) < collision_guard)
        throw CollisionGuard("PhaseState: within collision guard of the light primary");
}

PhaseDerivative scr3bp_derivative(const PhaseState& s, double collision_guard) {
    const Vec3 qH = heavy_primary(s.mu), qL = light_primary(s.mu);
    const double mH = 1.0 - s.mu, mL = s.mu;
    const double dH = dist(s.q, qH), dL = dist(s.q, qL);
    if ((mH > 0.0 && dH < collision_guard) || (mL > 0.0 && dL < collision_guard))
        throw CollisionGuard("scr3bp_derivative: collision guard tripped");

    PhaseDerivative d;
    d.dq = {s.p[0] + s.q[1], s.p[1] - s.q[0], s.p[2]};

    Vec3 grad{0.0, 0.0, 0.0};  // gradient of the potential part of H
    if (mH > 0.0) {
        double r3 = dH * dH * dH;
        for (int i = 0; i < 3; ++i) grad[i] += mH * (s.q[i] - qH[i]) / r3;
    }
    if (mL > 0.0) {
        double r3 = dL * dL * dL;
        for (int i = 0; i < 3; ++i) grad[i] += mL * (s.q[i] - qL[i]) / r3;
    }
    d.dp = {s.p[1] - grad[0], -s.p[0] - grad[1], -grad[2]};
    return d;
}

double jacobi_constant(const PhaseState& s) {
    const double kin = 0.5 * (s.p[0] * s.p[0] + s.p[1] * s.p[1] + s.p[2] * s.p[2]);
    const double rot = s.p[0] * s.q[1] - s.p[1] * s.q[0];
    double pot = 0.0;
    if (s.mu < 1.0) pot -= (1.0 - s.mu) / dist(s.q, heavy_primary(s.mu));
    if (s.mu > 0.0) pot -= s.mu / dist(s.q, light_primary(s.mu));
    return kin + rot + pot;
}

LagrangePoint lagrange_L1(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw ConstraintViolation("lagrange_L1: mu must lie in (0,1)");
    // Collinear equilibrium between the primaries: x in (-mu, 1-mu),
    //   g(x) = x - (1-mu)/(x+mu)^2 + mu/(1-mu-x)^2 = 0.
    auto g = [mu](double x) {
        double a = x + mu, b = 1.0 - mu - x;
        return x - (1.0 - mu) / (a * a) + mu / (b * b);
    };
    double lo = -mu + 1e-9, hi = 1.0 - mu - 1e-9;
    double glo = g(lo), ghi = g(hi);
    if (!(glo < 0.0 && ghi > 0.0))
        throw RootNotBracketed("lagrange_L1: collinear equation not bracketed");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (gm <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    LagrangePoint L;
    L.x = 0.5 * (lo + hi);
    // rotating-frame equilibrium momentum p = (0, x, 0)
    PhaseState eq{{L.x, 0.0, 0.0}, {0.0, L.x, 0.0}, mu};
    L.critical_value = jacobi_constant(eq);
    return L;
}

}  // namespace shadowlab
