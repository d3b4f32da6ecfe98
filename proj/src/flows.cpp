#include "shadowlab/flows.hpp"

#include <cmath>

namespace shadowlab {

void validate(const KatokParams& k) {
    if (!(k.epsilon >= 0.0 && k.epsilon < 1.0))
        throw ConstraintViolation("KatokParams: epsilon must lie in [0,1)");
}

const QuadricForm& katok_form() {
    static const QuadricForm f = QuadricForm::split(2, 3, cd(0.0, -1.0));
    return f;
}

const QuadricForm& scr3bp_form() {
    static const QuadricForm f = QuadricForm::split(1, 3, cd(1.0, 0.0));
    return f;
}

std::array<double, 4> katok_frequencies(const KatokParams& k) {
    return {1.0, 1.0, 1.0 + k.epsilon, 1.0 - k.epsilon};
}

StiefelPoint katok_flow(const StiefelPoint& p, double t, const KatokParams& k) {
    validate(k);
    if (!(p.form == katok_form()))
        throw ConstraintViolation("katok_flow: point must carry the Katok w-form");
    auto nu = katok_frequencies(k);
    ComplexVec4 w = p.u;
    for (int j = 0; j < 4; ++j)
        w[static_cast<std::size_t>(j)] *= std::polar(1.0, 2.0 * M_PI * t * nu[static_cast<std::size_t>(j)]);
    return StiefelPoint{w, p.form};
}

double katok_hamiltonian(const ComplexVec4& w, const KatokParams& k) {
    return norm2(w) + k.epsilon * (std::norm(w[2]) - std::norm(w[3]));
}

void validate(const SpheroidParams& sp) {
    if (!(sp.a > 0.0 && sp.b > 0.0))
        throw ConstraintViolation("SpheroidParams: a, b must be positive");
}

SpheroidPoint spheroid_flow(const SpheroidPoint& s, double t, const SpheroidParams& sp) {
    validate(sp);
    return SpheroidPoint{s.u * std::polar(1.0, 2.0 * M_PI * sp.a * t),
                         s.v * std::polar(1.0, 2.0 * M_PI * sp.b * t)};
}

StiefelPoint hopf_flow(const StiefelPoint& p, double t) {
    ComplexVec4 u = p.u;
    cd ph = std::polar(1.0, 2.0 * M_PI * t);
    for (auto& z : u) z *= ph;
    return StiefelPoint{u, p.form};
}

namespace {

// Commensurability of two positive frequencies at denominators bounded by
// q_max: does a/b admit a rational approximation p/q, q <= q_max, with
// |a/b - p/q| < tol? Continued-fraction convergents.
bool commensurable(double a, double b, long q_max, double tol) {
    double x = a / b;
    long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) < tol) return q1 <= q_max;
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long ai = static_cast<long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (q1 > q_max) return false;
    }
    return std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) < tol && q1 <= q_max;
}

// Smallest T in (0, T_max] with nu_j * T integral for all j in the support.
double common_period(const std::vector<double>& nus, double T_max) {
    double base = 1.0 / nus.front();
    for (long k = 1; static_cast<double>(k) * base <= T_max + 1e-12; ++k) {
        double T = static_cast<double>(k) * base;
        bool ok = true;
        for (double nu : nus) {
            double m = nu * T;
            if (std::abs(m - std::round(m)) > 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok) return T;
    }
    return 0.0;
}

}  // namespace

CensusResult periodic_census(const KatokParams& k, double T_max) {
    validate(k);
    if (T_max < 1.0 / (1.0 - k.epsilon))
        throw ConstraintViolation("periodic_census: T_max below the longest simple period");
    auto nu = katok_frequencies(k);
    const long q_max = static_cast<long>(std::ceil(T_max * 2.0)) + 4;
    const double tol = 1e-9;

    CensusResult res;
    // Cross-group commensurability means orbit families of positive dimension
    // (e.g. support {0,1,2} becomes feasible); decline a finite count.
    bool r02 = commensurable(nu[0], nu[2], q_max, tol);
    bool r03 = commensurable(nu[0], nu[3], q_max, tol);
    bool r23 = commensurable(nu[2], nu[3], q_max, tol);
    if ((k.epsilon > 0.0 && (r02 || r03 || r23)) || k.epsilon == 0.0) {
        res.resonant = true;
        res.note = "commensurate frequency groups: periodic orbits come in families, no finite census";
        return res;
    }

    const double s = 1.0 / std::sqrt(2.0);
    const cd i{0.0, 1.0};
    // Support {w0,w1}: w1 = +-i w0 on |w0| = 1/sqrt2, period 1 (two circles).
    res.orbits.push_back({make_stiefel({cd(s, 0), i * s, 0, 0}, 1e-12, katok_form()), 1.0, "w0,w1"});
    res.orbits.push_back({make_stiefel({cd(s, 0), -i * s, 0, 0}, 1e-12, katok_form()), 1.0, "w0,w1"});
    // Support {w2}: the circle |w2| = 1, period 1/(1+eps).
    res.orbits.push_back({make_stiefel({0, 0, cd(1, 0), 0}, 1e-12, katok_form()),
                          common_period({nu[2]}, T_max), "w2"});
    // Support {w3}: period 1/(1-eps).
    res.orbits.push_back({make_stiefel({0, 0, 0, cd(1, 0)}, 1e-12, katok_form()),
                          common_period({nu[3]}, T_max), "w3"});
    res.note = "irrational eps: exactly 4 simple closed orbits";
    return res;
}

}  // namespace shadowlab
