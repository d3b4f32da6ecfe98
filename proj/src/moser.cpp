#include "shadowlab/moser.hpp"

#include <cmath>

namespace shadowlab {

namespace {
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
}  // namespace

void validate(const MoserChartParams& mp) {
    if (!(mp.energy_floor < 0.0))
        throw ConstraintViolation("MoserChartParams: energy_floor must be negative");
}

Vec3 chart_center(const MoserChartParams& mp, double mu) {
    return mp.primary_center == Primary::Heavy ? heavy_primary(mu) : light_primary(mu);
}

double chart_mass(const MoserChartParams& mp, double mu) {
    return mp.primary_center == Primary::Heavy ? 1.0 - mu : mu;
}

double osculating_energy(const PhaseState& s, const MoserChartParams& mp) {
    const Vec3 qc = chart_center(mp, s.mu);
    const double mc = chart_mass(mp, s.mu);
    Vec3 rel{s.q[0] - qc[0], s.q[1] - qc[1], s.q[2] - qc[2]};
    return 0.5 * dot(s.p, s.p) - mc / norm(rel);
}

StiefelPoint moser_chart(const PhaseState& s, const MoserChartParams& mp) {
    validate(mp);
    const double E = osculating_energy(s, mp);
    if (!(E < mp.energy_floor))
        throw EnergyAboveFloor("moser_chart: osculating energy above the floor");
    const Vec3 qc = chart_center(mp, s.mu);
    const double lam = -2.0 * E;
    const double sq = std::sqrt(lam);

    Vec3 qp{lam * (s.q[0] - qc[0]), lam * (s.q[1] - qc[1]), lam * (s.q[2] - qc[2])};
    Vec3 pp{s.p[0] / sq, s.p[1] / sq, s.p[2] / sq};

    const double n2 = dot(pp, pp);
    const double A = 0.5 * (n2 + 1.0);
    std::array<double, 4> x{(n2 - 1.0) / (n2 + 1.0), pp[0] / A, pp[1] / A, pp[2] / A};

    const double sdot = dot(qp, pp);
    std::array<double, 4> y{sdot, A * qp[0] - sdot * pp[0], A * qp[1] - sdot * pp[1],
                            A * qp[2] - sdot * pp[2]};
    double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
    if (!(ny > 0.0)) throw ConstraintViolation("moser_chart: degenerate fiber vector");

    ComplexVec4 u;
    const double inv = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < 4; ++j)
        u[static_cast<std::size_t>(j)] =
            cd(x[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j)] / ny) * inv;
    return make_stiefel(u, 1e-10);
}

PhaseState moser_chart_inverse(const StiefelPoint& u, double lambda, const MoserChartParams& mp,
                               double mu) {
    validate(mp);
    if (!(lambda > 0.0)) throw ConstraintViolation("moser_chart_inverse: lambda must be positive");
    const Vec3 qc = chart_center(mp, mu);
    const double mc = chart_mass(mp, mu);

    std::array<double, 4> x, yh;
    const double s2 = std::sqrt(2.0);
    for (int j = 0; j < 4; ++j) {
        x[static_cast<std::size_t>(j)] = s2 * u[j].real();
        yh[static_cast<std::size_t>(j)] = s2 * u[j].imag();
    }
    if (std::abs(1.0 - x[0]) < 1e-12)
        throw DegenerateProjection("moser_chart_inverse: stereographic pole (infinite momentum)");

    Vec3 pp{x[1] / (1.0 - x[0]), x[2] / (1.0 - x[0]), x[3] / (1.0 - x[0])};
    const double A = 1.0 / (1.0 - x[0]);
    // |y| = mc exactly on the osculating level E1 = -1/2 of the mc-Kepler problem.
    const double sdot = mc * yh[0];
    Vec3 qp{(mc * yh[1] + sdot * pp[0]) / A, (mc * yh[2] + sdot * pp[1]) / A,
            (mc * yh[3] + sdot * pp[2]) / A};

    const double sq = std::sqrt(lambda);
    PhaseState out;
    out.mu = mu;
    for (int i = 0; i < 3; ++i) {
        out.q[static_cast<std::size_t>(i)] =
            qc[static_cast<std::size_t>(i)] + qp[static_cast<std::size_t>(i)] / lambda;
        out.p[static_cast<std::size_t>(i)] = sq * pp[static_cast<std::size_t>(i)];
    }
    return out;
}

PhaseState moser_state_on_level(const StiefelPoint& u, double jacobi_c,
                                const MoserChartParams& mp, double mu) {
    auto H = [&](double lam) {
        return jacobi_constant(moser_chart_inverse(u, lam, mp, mu)) - jacobi_c;
    };
    // H(lam) = -lam/2 + O(sqrt(lam)) for large lam: scan downward from a
    // level that is certainly below the target and bisect the first sign
    // change (the largest root = the most-bound osculating orbit, which is
    // the one inside the bounded Hill component).
    double hi = std::max(4.0 * std::abs(jacobi_c) + 10.0, 8.0);
    double lo = 1e-6;
    const int n_scan = 2000;
    double prev_lam = hi, prev_val = H(hi);
    double a = 0.0, b = 0.0;
    bool found = false;
    for (int i = 1; i <= n_scan; ++i) {
        double lam = hi + (lo - hi) * static_cast<double>(i) / n_scan;
        double val = H(lam);
        if (std::isfinite(val) && std::isfinite(prev_val) && prev_val * val <= 0.0) {
            a = lam;
            b = prev_lam;
            found = true;
            break;
        }
        prev_lam = lam;
        prev_val = val;
    }
    if (!found)
        throw RootNotBracketed("moser_state_on_level: no lambda reaches the Jacobi level");
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (a + b);
        if (H(a) * H(mid) <= 0.0)
            b = mid;
        else
            a = mid;
    }
    double lam = 0.5 * (a + b);
    PhaseState out = moser_chart_inverse(u, lam, mp, mu);
    validate(out);
    return out;
}

}  // namespace shadowlab
