#include "shadowlab/shadow.hpp"

#include <cmath>
#include <limits>

namespace shadowlab {

namespace {
double principal(double x) {
    while (x > M_PI) x -= 2.0 * M_PI;
    while (x < -M_PI) x += 2.0 * M_PI;
    return x;
}
}  // namespace

namespace {

// Unwrapped phase samples over one dense window, subdivided until raw jumps
// stay below pi/2 (nearest-branch continuation; jumps persisting at depth
// mean the path runs into the binding).
void extend_unwrap(const Scenario& scn, const Walker& w, double ta, double ra, double ua,
                   double tb, std::vector<std::pair<double, double>>& out, int depth) {
    double rb = scn.phase_of(w.at(tb));
    double d = principal(rb - ra);
    if (std::abs(d) < 0.5 * M_PI) {
        out.emplace_back(tb, ua + d);
        return;
    }
    if (depth >= 48) throw TransversalityLoss("phase unwrap: jump unresolved at machine dt");
    double tm = 0.5 * (ta + tb);
    if (!(tm > ta && tm < tb))
        throw TransversalityLoss("phase unwrap: jump unresolved at machine dt");
    extend_unwrap(scn, w, ta, ra, ua, tm, out, depth + 1);
    auto [tmid, umid] = out.back();
    extend_unwrap(scn, w, tmid, scn.phase_of(w.at(tmid)), umid, tb, out, depth + 1);
}

}  // namespace

TransversePath shadow_path(const Scenario& scn, const ModelPoint& start, double T, double dt) {
    if (!(T > 0.0 && dt > 0.0)) throw ConstraintViolation("shadow_path: T and dt must be positive");
    TransversePath path;
    path.source = scn.name();

    auto w = scn.walker(start);
    const int n = static_cast<int>(std::floor(T / dt + 0.5));

    double t_prev = 0.0;
    double raw_prev = scn.phase_of(w->at(0.0));
    double u_prev = raw_prev;

    path.samples.push_back({0.0, scn.label_of(w->at(0.0)), 0.0});
    bool first_margin_pending = true;

    int next = 1;
    while (next <= n) {
        w->step();
        double tb = w->t_end();
        std::vector<std::pair<double, double>> seg;
        seg.emplace_back(t_prev, u_prev);
        extend_unwrap(scn, *w, t_prev, raw_prev, u_prev, tb, seg, 0);

        // unwrapped phase inside this window via the nearest lower anchor
        auto theta_local = [&](double t) {
            std::size_t j = seg.size() - 1;
            while (j > 0 && seg[j].first > t) --j;
            double rj = scn.phase_of(w->at(seg[j].first));
            return seg[j].second + principal(scn.phase_of(w->at(t)) - rj);
        };

        double h = std::min({1e-6, 0.25 * (tb - t_prev), 0.25 * dt});
        if (first_margin_pending && tb >= h) {
            // one-sided margin at t = 0
            path.samples[0].margin = (theta_local(std::min(2.0 * h, tb)) - u_prev) /
                                     std::min(2.0 * h, tb);
            first_margin_pending = false;
        }
        while (next <= n) {
            double t = dt * static_cast<double>(next);
            if (t > tb) break;
            PathSample s;
            s.t = t;
            s.label = scn.label_of(w->at(t));
            double lo = std::max(t_prev, t - h), hi = std::min(tb, t + h);
            s.margin = (theta_local(hi) - theta_local(lo)) / (hi - lo);
            path.samples.push_back(std::move(s));
            ++next;
        }
        t_prev = tb;
        u_prev = seg.back().second;
        raw_prev = scn.phase_of(w->at(tb));
    }

    path.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& s : path.samples) path.min_margin = std::min(path.min_margin, s.margin);
    path.transversality_ok = path.min_margin > 0.0;
    return path;
}

ConjugacyReport conjugacy_residual(const KatokParams& k, int axis, const ConjugacyGrid& grid) {
    validate(k);
    if (axis < 1 || axis > 3) throw ConstraintViolation("conjugacy_residual: axis must be 1, 2 or 3");

    SpheroidParams sp{1.0, 1.0};
    if (axis == 2) sp.b = 1.0 + k.epsilon;
    if (axis == 3) sp.b = 1.0 - k.epsilon;

    CoordinateFrame fr{0, axis, false};
    ConjugacyReport rep;
    rep.frame = fr;
    rep.spheroid = sp;

    KatokScenario scn(k, fr);
    std::mt19937_64 rng(grid.seed);

    int produced = 0;
    while (produced < grid.n_starts) {
        StiefelPoint p = as_stiefel(scn.random_point(rng));
        // stay away from the degenerate locus of sigma_i; the two moduli are
        // conserved by the flow, so the start check suffices
        double plane = std::sqrt(std::norm(p[0]) + std::norm(p[axis]));
        if (plane < 0.2) continue;
        ++produced;
        SpheroidPoint base = spheroid_project(p, fr);
        for (int j = 0; j <= grid.n_times; ++j) {
            double t = grid.T * static_cast<double>(j) / grid.n_times;
            SpheroidPoint via_flow = spheroid_project(katok_flow(p, t, k), fr);
            SpheroidPoint via_shadow = spheroid_flow(base, t, sp);
            double res = std::sqrt(std::norm(via_flow.u - via_shadow.u) +
                                   std::norm(via_flow.v - via_shadow.v));
            rep.max_residual = std::max(rep.max_residual, res);
            ++rep.sample_count;
        }
    }
    return rep;
}

double alpha_std(const ComplexVec4& u, const ComplexVec4& v) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
        s += std::imag(std::conj(u[static_cast<std::size_t>(j)]) * v[static_cast<std::size_t>(j)]);
    return s;
}

double dalpha_std(const ComplexVec4& v, const ComplexVec4& w) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
        s += std::imag(std::conj(v[static_cast<std::size_t>(j)]) * w[static_cast<std::size_t>(j)]);
    return 2.0 * s;
}

namespace {

double katok_h(const ComplexVec4& u, double eps) {
    return norm2(u) + eps * (std::norm(u[2]) - std::norm(u[3]));
}

double katok_dh(const ComplexVec4& u, const ComplexVec4& v, double eps) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
        s += 2.0 * std::real(std::conj(u[static_cast<std::size_t>(j)]) * v[static_cast<std::size_t>(j)]);
    s += 2.0 * eps * (std::real(std::conj(u[2]) * v[2]) - std::real(std::conj(u[3]) * v[3]));
    return s;
}

}  // namespace

double dalpha(const ContactWeight& wgt, const ComplexVec4& u, const ComplexVec4& v,
              const ComplexVec4& w) {
    if (wgt.kind == ContactWeight::Kind::One) return dalpha_std(v, w);
    // d(f alpha) = df ^ alpha + f dalpha with f = 1/H_eps
    double H = katok_h(u, wgt.epsilon);
    double f = 1.0 / H;
    double dfv = -katok_dh(u, v, wgt.epsilon) / (H * H);
    double dfw = -katok_dh(u, w, wgt.epsilon) / (H * H);
    return dfv * alpha_std(u, w) - dfw * alpha_std(u, v) + f * dalpha_std(v, w);
}

PositivityReport leaf_symplectic_check(const QuadricForm& form, const CoordinateFrame& frame,
                                       const ContactWeight& weight, const LeafLabel& leaf,
                                       int n_samples) {
    if (n_samples < 1) throw ConstraintViolation("leaf_symplectic_check: need n_samples >= 1");
    double rho_hi = leaf_rho_max(form, frame, leaf.c);
    if (!(rho_hi > 1e-3)) throw DegenerateLeaf("leaf_symplectic_check: empty leaf interior");
    double rho_lo = std::max(0.04, 0.05 * rho_hi);
    rho_hi *= 0.92;

    const int n_rho = std::max(2, static_cast<int>(std::round(std::sqrt(n_samples / 2.0))));
    const int n_psi = std::max(4, (n_samples + n_rho - 1) / n_rho);

    PositivityReport rep;
    rep.min_normalized = std::numeric_limits<double>::infinity();
    rep.max_normalized = -std::numeric_limits<double>::infinity();

    const double h_rho = 1e-6, h_psi = 1e-6;
    auto sub = [](const ComplexVec4& a, const ComplexVec4& b, double s) {
        ComplexVec4 out;
        for (std::size_t j = 0; j < 4; ++j) out[j] = (a[j] - b[j]) / s;
        return out;
    };
    // nearest-branch pick for finite differences across the canonical sheets
    auto near_point = [&](double rho, double psi, bool branch, const ComplexVec4& ref) {
        StiefelPoint p1 = leaf_point(form, frame, leaf.theta, leaf.c, rho, psi, branch);
        StiefelPoint p2 = leaf_point(form, frame, leaf.theta, leaf.c, rho, psi, !branch);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            d1 += std::norm(p1.u[j] - ref[j]);
            d2 += std::norm(p2.u[j] - ref[j]);
        }
        return d1 <= d2 ? p1 : p2;
    };

    int taken = 0;
    for (int b = 0; b < 2 && taken < n_samples; ++b) {
        bool branch = b == 1;
        for (int ir = 0; ir < n_rho && taken < n_samples; ++ir) {
            double rho = rho_lo + (rho_hi - rho_lo) * (ir + 0.5) / n_rho;
            for (int ip = 0; ip < n_psi && taken < n_samples; ++ip) {
                double psi = 2.0 * M_PI * (ip + 0.37) / n_psi;
                StiefelPoint p;
                try {
                    p = leaf_point(form, frame, leaf.theta, leaf.c, rho, psi, branch);
                } catch (const Error&) {
                    continue;
                }
                ComplexVec4 vr, vp;
                try {
                    vr = sub(near_point(rho + h_rho, psi, branch, p.u).u,
                             near_point(rho - h_rho, psi, branch, p.u).u, 2.0 * h_rho);
                    vp = sub(near_point(rho, psi + h_psi, branch, p.u).u,
                             near_point(rho, psi - h_psi, branch, p.u).u, 2.0 * h_psi);
                } catch (const Error&) {
                    continue;
                }
                // normalized evaluation: dalpha(v, w) / |v ^ w|
                double nv = 0.0, nw = 0.0, dotr = 0.0;
                for (std::size_t j = 0; j < 4; ++j) {
                    nv += std::norm(vr[j]);
                    nw += std::norm(vp[j]);
                    dotr += std::real(std::conj(vr[j]) * vp[j]);
                }
                double gram = nv * nw - dotr * dotr;
                if (!(gram > 1e-18))
                    throw DegenerateLeaf("leaf_symplectic_check: parametrization rank drop");
                // orientation convention: fiber-phase direction first, then
                // the ob-radial direction (the complex orientation of the leaf)
                double val = dalpha(weight, p.u, vp, vr) / std::sqrt(gram);
                rep.min_normalized = std::min(rep.min_normalized, val);
                rep.max_normalized = std::max(rep.max_normalized, val);
                ++taken;
            }
        }
    }
    rep.samples = taken;
    if (taken == 0) throw DegenerateLeaf("leaf_symplectic_check: no admissible samples");
    return rep;
}

}  // namespace shadowlab
