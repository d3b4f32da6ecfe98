#include "shadowlab/poincare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <functional>
#include <thread>

namespace shadowlab {

namespace {

double principal(double x) {
    while (x > M_PI) x -= 2.0 * M_PI;
    while (x < -M_PI) x += 2.0 * M_PI;
    return x;
}

/// Unwrapped phase samples along one walker step, subdivided until
/// consecutive raw-phase jumps stay below pi/2.
struct PhaseTrack {
    const Scenario& scn;
    const Walker& walker;

    double raw(double t) const { return scn.phase_of(walker.at(t)); }

    // Appends (t, unwrapped) samples over (ta, tb], given the unwrapped value
    // at ta. Recursion depth is bounded; hitting the bound means the phase is
    // not resolvable at machine step sizes (in practice: binding approach).
    void extend(double ta, double ra, double ua, double tb,
                std::vector<std::pair<double, double>>& out, int depth) const {
        double rb = raw(tb);
        double d = principal(rb - ra);
        if (std::abs(d) < 0.5 * M_PI || depth >= 48) {
            if (depth >= 48)
                throw TransversalityLoss("page_crossings: phase jump unresolved at machine dt");
            out.emplace_back(tb, ua + d);
            return;
        }
        double tm = 0.5 * (ta + tb);
        if (!(tm > ta && tm < tb))
            throw TransversalityLoss("page_crossings: phase jump unresolved at machine dt");
        extend(ta, ra, ua, tm, out, depth + 1);
        auto [tmid, umid] = out.back();
        extend(tmid, raw(tmid), umid, tb, out, depth + 1);
    }
};

}  // namespace

std::vector<CrossingEvent> page_crossings(const Scenario& scn, const ModelPoint& start,
                                          double theta0, int k_max, CrossingOptions opts) {
    if (k_max < 0) throw ConstraintViolation("page_crossings: k_max must be >= 0");
    std::vector<CrossingEvent> events;
    if (k_max == 0) return events;

    double t_budget = opts.t_max > 0.0
                          ? opts.t_max
                          : scn.page_period_hint() * (static_cast<double>(k_max) + 3.0);

    auto w = scn.walker(start);
    PhaseTrack track{scn, *w};

    double t_prev = 0.0;
    double raw_prev = track.raw(0.0);
    double u_prev = raw_prev;

    // First crossing level strictly above the start (a start on the page,
    // within the guard, counts from the next full turn).
    double offset = std::fmod(theta0 - u_prev, 2.0 * M_PI);
    if (offset < 0.0) offset += 2.0 * M_PI;
    if (offset <= opts.start_page_guard) offset += 2.0 * M_PI;
    double next_level = u_prev + offset;
    double last_level = next_level - 2.0 * M_PI;

    std::size_t steps = 0;
    while (static_cast<int>(events.size()) < k_max) {
        w->step();
        if (++steps > opts.max_steps)
            throw IntegrationBudgetExceeded("page_crossings: step budget exhausted");
        if (w->t_end() > t_budget)
            throw IntegrationBudgetExceeded("page_crossings: time budget exhausted");

        std::vector<std::pair<double, double>> seg;
        seg.emplace_back(t_prev, u_prev);
        track.extend(t_prev, raw_prev, u_prev, w->t_end(), seg, 0);

        for (std::size_t i = 1; i < seg.size() && static_cast<int>(events.size()) < k_max; ++i) {
            double ta = seg[i - 1].first, ua = seg[i - 1].second;
            double tb = seg[i].first, ub = seg[i].second;
            if (ub < last_level - opts.refine_tol)
                throw TransversalityLoss("page_crossings: downward page crossing");
            while (ub >= next_level && static_cast<int>(events.size()) < k_max) {
                // refine theta(t) = next_level in [ta, tb] (bisection with a
                // secant acceleration on the dense output); within the
                // bracket |theta - ua| < pi, so a single principal-branch
                // continuation from ta is valid
                const double raw_a = track.raw(ta);
                auto theta_local = [&](double t) { return ua + principal(track.raw(t) - raw_a); };
                double lo = ta, hi = tb;
                double flo = ua - next_level, fhi = ub - next_level;
                double t_star = hi, f_star = fhi;
                for (int it = 0; it < 200 && std::abs(f_star) > opts.refine_tol; ++it) {
                    double t_try = 0.5 * (lo + hi);
                    if (it % 3 != 2 && fhi != flo) {
                        double t_secant = lo - flo * (hi - lo) / (fhi - flo);
                        if (t_secant > lo && t_secant < hi) t_try = t_secant;
                    }
                    double f_try = theta_local(t_try) - next_level;
                    if (f_try <= 0.0) {
                        lo = t_try;
                        flo = f_try;
                    } else {
                        hi = t_try;
                        fhi = f_try;
                    }
                    t_star = t_try;
                    f_star = f_try;
                }
                if (std::abs(f_star) > opts.refine_tol)
                    throw TransversalityLoss("page_crossings: crossing refinement stalled");

                // transversality margin d theta / dt at the crossing
                double h = std::max(1e-9, std::min(1e-6, 0.25 * (tb - ta)));
                double t_lo = std::max(w->t_begin(), t_star - h);
                double t_hi = std::min(w->t_end(), t_star + h);
                double margin = principal(track.raw(t_hi) - track.raw(t_lo)) / (t_hi - t_lo);
                if (!(margin > 0.0))
                    throw TransversalityLoss("page_crossings: non-positive crossing margin");
                if (!events.empty() &&
                    std::abs(t_star - events.back().t_cross) < opts.grazing_gap)
                    throw TransversalityLoss("page_crossings: grazing (double) crossing");

                CrossingEvent ev;
                ev.t_cross = t_star;
                ev.point = w->at(t_star);
                ev.phase = w->phase_at(t_star);
                ev.index = static_cast<int>(events.size()) + 1;
                ev.refinement_residual = std::abs(f_star);
                ev.margin = margin;
                ev.jacobi_drift = w->max_jacobi_drift();
                events.push_back(std::move(ev));

                last_level = next_level;
                next_level += 2.0 * M_PI;
            }
        }
        t_prev = w->t_end();
        raw_prev = track.raw(t_prev);
        u_prev = seg.back().second;
    }
    return events;
}

ReturnSample return_map_sample(cd c, int k, const Tomography& tom, const Scenario& scn,
                               CrossingOptions opts) {
    if (k < 1) throw ConstraintViolation("return_map: k must be >= 1");
    ModelPoint s = scn.section_point(c, tom);
    auto events = page_crossings(scn, s, tom.theta0, k, opts);
    ReturnSample out{scn.label_of(events.back().point).c, events.back(),
                     scn.aux_fiber_coordinate(events.back().point)};
    return out;
}

cd return_map(cd c, int k, const Tomography& tom, const Scenario& scn, CrossingOptions opts) {
    return return_map_sample(c, k, tom, scn, opts).value;
}

int displacement_winding(const std::vector<cd>& loop_values) {
    std::vector<cd> v = loop_values;
    if (v.size() >= 2 && std::abs(v.front() - v.back()) == 0.0) v.pop_back();
    if (v.size() < 3) throw ConstraintViolation("displacement_winding: need at least 3 points");
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        cd a = v[i], b = v[(i + 1) % v.size()];
        if (std::abs(a) < 1e-12 || std::abs(b) < 1e-12)
            throw ZeroOnLoop("displacement_winding: displacement vanishes on the loop");
        double d = std::arg(b / a);
        if (std::abs(d) >= 0.5 * M_PI)
            throw AdaptiveRefineNeeded("displacement_winding: phase step >= pi/2");
        total += d;
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

namespace {

using EvalFn = std::function<cd(cd)>;  // the displacement field d(c) = f(c) - c

/// Winding of d around the polygon through `corners`, inserting midpoints on
/// edges until the phase-step rule holds (bounded depth).
int polygon_winding(const EvalFn& d, const std::vector<cd>& corners, int max_depth) {
    struct SegPoint {
        cd c;
        cd val;
    };
    std::vector<SegPoint> pts;
    for (const cd& c : corners) pts.push_back({c, d(c)});
    for (int depth = 0; depth < max_depth; ++depth) {
        bool ok = true;
        std::vector<SegPoint> next;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const SegPoint& a = pts[i];
            const SegPoint& b = pts[(i + 1) % pts.size()];
            next.push_back(a);
            if (std::abs(a.val) < 1e-12 || std::abs(b.val) < 1e-12)
                throw ZeroOnLoop("polygon_winding: displacement vanishes on the loop");
            if (std::abs(std::arg(b.val / a.val)) >= 0.5 * M_PI) {
                cd mid = 0.5 * (a.c + b.c);
                next.push_back({mid, d(mid)});
                ok = false;
            }
        }
        if (ok) {
            std::vector<cd> vals;
            vals.reserve(pts.size());
            for (const auto& p : pts) vals.push_back(p.val);
            return displacement_winding(vals);
        }
        pts = std::move(next);
    }
    throw AdaptiveRefineNeeded("polygon_winding: refinement depth exhausted");
}

struct NewtonResult {
    cd c;
    cd residual;
    bool converged = false;
};

NewtonResult damped_newton(const EvalFn& d, cd c0, double domain_radius,
                           const RecurrenceOptions& opts) {
    NewtonResult res{c0, d(c0), false};
    for (int it = 0; it < opts.max_newton_iters; ++it) {
        if (std::abs(res.residual) <= opts.newton_tol) {
            res.converged = true;
            return res;
        }
        const double h = opts.fd_step;
        cd dx = (d(res.c + h) - res.residual) / h;
        cd dy = (d(res.c + cd(0.0, h)) - res.residual) / h;
        double det = dx.real() * dy.imag() - dy.real() * dx.imag();
        if (std::abs(det) < 1e-18) return res;
        double rx = -res.residual.real(), ry = -res.residual.imag();
        cd step{(rx * dy.imag() - ry * dy.real()) / det, (ry * dx.real() - rx * dx.imag()) / det};
        double damp = 1.0;
        for (int half = 0; half < 8; ++half) {
            cd trial = res.c + damp * step;
            if (std::abs(trial) >= domain_radius) {
                damp *= 0.5;
                continue;
            }
            cd r_trial = d(trial);
            if (std::abs(r_trial) < std::abs(res.residual)) {
                res.c = trial;
                res.residual = r_trial;
                break;
            }
            damp *= 0.5;
        }
    }
    res.converged = std::abs(res.residual) <= opts.newton_tol;
    return res;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int nw = std::min(threads, n);
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

RecurrenceScan find_recurrent_points(const Tomography& tom, int k, const Scenario& scn, int grid_n,
                                     RecurrenceOptions opts) {
    validate(tom);
    if (grid_n < 2) throw ConstraintViolation("find_recurrent_points: grid_n must be >= 2");

    RecurrenceScan scan;
    scan.grid_n = grid_n;
    const double R = tom.r0 * opts.grid_margin;

    struct Cell {
        cd c;
        bool valid = false;
        cd f{};
        double margin = 0.0;
        double drift = 0.0;
        std::optional<double> aux_rot;
        std::string diag;
        bool failed_transversality = false;
    };
    std::vector<Cell> grid(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
    auto node_c = [&](int ix, int iy) {
        double x = -R + 2.0 * R * static_cast<double>(ix) / (grid_n - 1);
        double y = -R + 2.0 * R * static_cast<double>(iy) / (grid_n - 1);
        return cd(x, y);
    };

    parallel_for(grid_n * grid_n, opts.threads, [&](int idx) {
        int ix = idx % grid_n, iy = idx / grid_n;
        Cell& cell = grid[static_cast<std::size_t>(idx)];
        cell.c = node_c(ix, iy);
        if (std::abs(cell.c) > R) return;
        try {
            ReturnSample s = return_map_sample(cell.c, k, tom, scn, opts.crossing);
            cell.f = s.value;
            cell.margin = s.event.margin;
            cell.drift = s.event.jacobi_drift;
            cell.valid = true;
            if (s.aux) {
                cd a0 = *scn.aux_fiber_coordinate(scn.section_point(cell.c, tom));
                if (std::abs(a0) > 1e-9 && std::abs(*s.aux) > 1e-9)
                    cell.aux_rot = std::arg(*s.aux / a0);
            }
        } catch (const TransversalityLoss& e) {
            cell.failed_transversality = true;
            cell.diag = e.what();
        } catch (const Error& e) {
            cell.diag = e.what();
        }
    });

    for (const Cell& cell : grid) {
        if (std::abs(cell.c) > R) continue;
        GridNode node;
        node.c = cell.c;
        node.margin = cell.margin;
        node.jacobi_drift = cell.drift;
        node.aux_rotation = cell.aux_rot;
        node.diagnostic = cell.diag;
        if (cell.valid) {
            node.displacement = cell.f - cell.c;
            node.residual = std::abs(node.displacement);
            node.status =
                node.residual <= opts.direct_tol ? NodeStatus::DirectRecurrent : NodeStatus::LabelMismatch;
        } else {
            node.status = cell.failed_transversality ? NodeStatus::TransversalityLoss
                                                     : NodeStatus::Failed;
        }
        scan.nodes.push_back(std::move(node));
    }

    // Cached displacement evaluations for winding loops and Newton runs.
    std::map<std::pair<double, double>, cd> cache;
    auto disp = [&](cd c) -> cd {
        auto key = std::make_pair(c.real(), c.imag());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        cd v = return_map(c, k, tom, scn, opts.crossing) - c;
        cache.emplace(key, v);
        return v;
    };
    for (const Cell& cell : grid)
        if (cell.valid) cache.emplace(std::make_pair(cell.c.real(), cell.c.imag()), cell.f - cell.c);

    auto at = [&](int ix, int iy) -> const Cell& {
        return grid[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid_n) +
                    static_cast<std::size_t>(ix)];
    };

    std::vector<RecurrenceCertificate> certs;
    for (int iy = 0; iy + 1 < grid_n; ++iy) {
        for (int ix = 0; ix + 1 < grid_n; ++ix) {
            const Cell* corners[4] = {&at(ix, iy), &at(ix + 1, iy), &at(ix + 1, iy + 1),
                                      &at(ix, iy + 1)};
            bool usable = true;
            for (const Cell* c : corners) usable = usable && c->valid;
            if (!usable) continue;
            ++scan.cells_examined;
            int w = 0;
            try {
                std::vector<cd> poly{corners[0]->c, corners[1]->c, corners[2]->c, corners[3]->c};
                w = polygon_winding(disp, poly, opts.max_subdivision_depth);
            } catch (const ZeroOnLoop&) {
                // a node already certifies itself through the direct test
                continue;
            } catch (const AdaptiveRefineNeeded&) {
                ++scan.cells_skipped;
                continue;
            } catch (const Error&) {
                ++scan.cells_skipped;
                continue;
            }
            if (w == 0) continue;
            ++scan.cells_with_winding;

            cd center = 0.25 * (corners[0]->c + corners[1]->c + corners[2]->c + corners[3]->c);
            NewtonResult nr;
            try {
                nr = damped_newton(disp, center, tom.r0 * 0.999, opts);
            } catch (const Error&) {
                continue;
            }
            if (!nr.converged) continue;

            // small-loop re-certification around the refined point
            int w_small = 0;
            try {
                double r_loop = std::max(8.0 * opts.fd_step, 1e-5);
                std::vector<cd> loop;
                for (int j = 0; j < 12; ++j)
                    loop.push_back(nr.c + std::polar(r_loop, 2.0 * M_PI * j / 12.0));
                w_small = polygon_winding(disp, loop, opts.max_subdivision_depth);
            } catch (const Error&) {
                w_small = w;  // keep the cell winding when the small loop degenerates
            }
            if (w_small == 0) w_small = w;

            RecurrenceCertificate cert;
            cert.c_star = nr.c;
            cert.k = k;
            cert.winding = w_small;
            cert.residual = std::abs(nr.residual);
            cert.tomography = tom;
            try {
                ReturnSample s = return_map_sample(nr.c, k, tom, scn, opts.crossing);
                cert.point = scn.section_point(nr.c, tom);
                cert.phase = s.event.phase;
            } catch (const Error&) {
                cert.point = scn.section_point(nr.c, tom);
            }
            certs.push_back(std::move(cert));
        }
    }

    // dedupe: cells around one zero converge to the same point
    std::sort(certs.begin(), certs.end(),
              [](const RecurrenceCertificate& a, const RecurrenceCertificate& b) {
                  return a.residual < b.residual;
              });
    const double merge_tol = std::max(1e-7, 4.0 * opts.fd_step);
    for (const auto& cert : certs) {
        bool dup = false;
        for (const auto& kept : scan.certificates)
            if (std::abs(kept.c_star - cert.c_star) <= merge_tol) dup = true;
        if (!dup) scan.certificates.push_back(cert);
    }
    return scan;
}

double area_ratio(const std::vector<cd>& loop, int k, const Tomography& tom, const Scenario& scn,
                  CrossingOptions opts) {
    std::vector<cd> src = loop;
    if (src.size() >= 2 && std::abs(src.front() - src.back()) < 1e-15) src.pop_back();
    if (src.size() < 3) throw ConstraintViolation("area_ratio: need at least 3 loop vertices");

    std::vector<cd> img(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) img[i] = return_map(src[i], k, tom, scn, opts);

    auto shoelace = [](const std::vector<cd>& poly) {
        double a = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const cd& p = poly[i];
            const cd& q = poly[(i + 1) % poly.size()];
            a += p.real() * q.imag() - q.real() * p.imag();
        }
        return 0.5 * a;
    };

    if (scn.closed_form()) return shoelace(img) / shoelace(src);

    // SCR3BP family: pull the phase-space symplectic form back through the
    // section and integrate it over the enclosed region (triangle fan with
    // centroid quadrature).
    const auto* s3 = dynamic_cast<const Scr3bpScenario*>(&scn);
    if (!s3) return shoelace(img) / shoelace(src);

    auto weight = [&](cd c) {
        const double h = 1e-5;
        auto st = [&](cd cc) { return s3->state_of(as_stiefel(s3->section_point(cc, tom))); };
        PhaseState xp = st(c + h), xm = st(c - h), yp = st(c + cd(0, h)), ym = st(c - cd(0, h));
        std::array<double, 6> ex{}, ey{};
        for (int i = 0; i < 3; ++i) {
            auto iu = static_cast<std::size_t>(i);
            ex[iu] = (xp.q[iu] - xm.q[iu]) / (2 * h);
            ex[iu + 3] = (xp.p[iu] - xm.p[iu]) / (2 * h);
            ey[iu] = (yp.q[iu] - ym.q[iu]) / (2 * h);
            ey[iu + 3] = (yp.p[iu] - ym.p[iu]) / (2 * h);
        }
        double om = 0.0;  // sum dq_i ^ dp_i
        for (std::size_t i = 0; i < 3; ++i) om += ex[i] * ey[i + 3] - ey[i] * ex[i + 3];
        return om;
    };

    auto weighted_area = [&](const std::vector<cd>& poly) {
        cd centroid{0.0, 0.0};
        for (const cd& p : poly) centroid += p;
        centroid /= static_cast<double>(poly.size());
        double area = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const cd& a = poly[i];
            const cd& b = poly[(i + 1) % poly.size()];
            double tri = 0.5 * ((a.real() - centroid.real()) * (b.imag() - centroid.imag()) -
                                (b.real() - centroid.real()) * (a.imag() - centroid.imag()));
            cd mid = (a + b + centroid) / 3.0;
            area += tri * weight(mid);
        }
        return area;
    };

    return weighted_area(img) / weighted_area(src);
}

}  // namespace shadowlab
