#include "shadowlab/scenario.hpp"

#include <cmath>
#include <functional>

namespace shadowlab {

const StiefelPoint& as_stiefel(const ModelPoint& p) {
    const StiefelPoint* sp = std::get_if<StiefelPoint>(&p);
    if (!sp) throw ConstraintViolation("expected a Stiefel model point");
    return *sp;
}

const SpheroidPoint& as_spheroid(const ModelPoint& p) {
    const SpheroidPoint* sp = std::get_if<SpheroidPoint>(&p);
    if (!sp) throw ConstraintViolation("expected a spheroid model point");
    return *sp;
}

StiefelPoint random_standard_stiefel(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<double, 4> x, y;
    for (;;) {
        for (auto& v : x) v = gauss(rng);
        for (auto& v : y) v = gauss(rng);
        double nx = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        if (nx < 1e-6) continue;
        for (auto& v : x) v /= nx;
        double d = x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
        for (int j = 0; j < 4; ++j) y[static_cast<std::size_t>(j)] -= d * x[static_cast<std::size_t>(j)];
        double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
        if (ny < 1e-6) continue;
        ComplexVec4 u;
        const double inv = 1.0 / std::sqrt(2.0);
        for (int j = 0; j < 4; ++j)
            u[static_cast<std::size_t>(j)] =
                cd(x[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j)] / ny) * inv;
        return make_stiefel(u, 1e-12);
    }
}

namespace {

/// Closed-form flows advance by a fixed natural step; dense output is exact.
class ClosedFormWalker final : public Walker {
  public:
    using FlowFn = std::function<ModelPoint(double)>;

    ClosedFormWalker(FlowFn flow, double dt) : flow_(std::move(flow)), dt_(dt) {}

    double t_begin() const override { return std::max(0.0, t_ - dt_); }
    double t_end() const override { return t_; }
    void step() override { t_ += dt_; }
    ModelPoint at(double t) const override { return flow_(t); }

  private:
    FlowFn flow_;
    double dt_;
    double t_ = 0.0;
};

}  // namespace

// ---------------------------------------------------------------- Katok

double KatokScenario::phase_of(const ModelPoint& p) const {
    return ob_phase(as_stiefel(p), frame_);
}

LeafLabel KatokScenario::label_of(const ModelPoint& p) const {
    return leaf_label(as_stiefel(p), frame_);
}

ModelPoint KatokScenario::section_point(cd c, const Tomography& tom) const {
    return tomography_section(c, tom, katok_form());
}

std::unique_ptr<Walker> KatokScenario::walker(const ModelPoint& start) const {
    StiefelPoint s = as_stiefel(start);
    KatokParams k = params;
    return std::make_unique<ClosedFormWalker>(
        [s, k](double t) -> ModelPoint { return katok_flow(s, t, k); }, 1.0 / 32.0);
}

ModelPoint KatokScenario::random_point(std::mt19937_64& rng) const {
    StiefelPoint z = random_standard_stiefel(rng);
    return make_stiefel(katok_frame_change(z.u), 1e-10, katok_form());
}

// ------------------------------------------------------------- Spheroid

double SpheroidScenario::phase_of(const ModelPoint& p) const {
    const SpheroidPoint& s = as_spheroid(p);
    if (std::abs(s.v) <= 1e-12) throw OnBinding("spheroid: point on the binding {v = 0}");
    cd w = conjugate_ob ? std::conj(s.v) : s.v;
    double th = std::arg(w);
    return th < 0.0 ? th + 2.0 * M_PI : th;
}

LeafLabel SpheroidScenario::label_of(const ModelPoint& p) const {
    // The disk-like page is the graph of u over {arg v = theta}; the base
    // coordinate is u itself.
    return LeafLabel{phase_of(p), as_spheroid(p).u};
}

ModelPoint SpheroidScenario::section_point(cd c, const Tomography& tom) const {
    validate(tom);
    if (std::abs(c) > tom.r0 * (1.0 + 1e-12))
        throw OutOfDomain("spheroid section: |c| exceeds r0");
    double vmod = std::sqrt(std::max(1.0 - std::norm(c), 0.0));
    double phase = conjugate_ob ? -tom.theta0 : tom.theta0;
    return make_spheroid_point(c, std::polar(vmod, phase));
}

std::unique_ptr<Walker> SpheroidScenario::walker(const ModelPoint& start) const {
    SpheroidPoint s = as_spheroid(start);
    SpheroidParams sp = params;
    return std::make_unique<ClosedFormWalker>(
        [s, sp](double t) -> ModelPoint { return spheroid_flow(s, t, sp); },
        1.0 / (32.0 * std::max(sp.a, sp.b)));
}

ModelPoint SpheroidScenario::random_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> gauss(0.0, 1.0);
    cd u{gauss(rng), gauss(rng)}, v{gauss(rng), gauss(rng)};
    double n = std::sqrt(std::norm(u) + std::norm(v));
    return make_spheroid_point(u / n, v / n);
}

// --------------------------------------------------------------- Kepler

double KeplerScenario::phase_of(const ModelPoint& p) const {
    return ob_phase(as_stiefel(p), frame_);
}

LeafLabel KeplerScenario::label_of(const ModelPoint& p) const {
    return leaf_label(as_stiefel(p), frame_);
}

ModelPoint KeplerScenario::section_point(cd c, const Tomography& tom) const {
    return tomography_section(c, tom, QuadricForm::standard());
}

std::unique_ptr<Walker> KeplerScenario::walker(const ModelPoint& start) const {
    StiefelPoint s = as_stiefel(start);
    return std::make_unique<ClosedFormWalker>(
        [s](double t) -> ModelPoint { return hopf_flow(s, t); }, 1.0 / 32.0);
}

ModelPoint KeplerScenario::random_point(std::mt19937_64& rng) const {
    return random_standard_stiefel(rng);
}

// --------------------------------------------------------------- SCR3BP

namespace {

class Scr3bpWalker final : public Walker {
  public:
    Scr3bpWalker(const PhaseState& s0, const IntegratorControl& ctrl, const MoserChartParams& mp)
        : stepper_(s0, ctrl), chart_(mp) {}

    double t_begin() const override { return stepper_.t_begin(); }
    double t_end() const override { return stepper_.t_end(); }
    void step() override { stepper_.step(); }

    ModelPoint at(double t) const override {
        PhaseState s = stepper_.state_at(t);
        StiefelPoint u = moser_chart(s, chart_);
        return make_stiefel(scr3bp_frame_change(u.u), 1e-9, scr3bp_form());
    }

    double max_jacobi_drift() const override { return stepper_.max_jacobi_drift(); }

    std::optional<PhaseState> phase_at(double t) const override { return stepper_.state_at(t); }

  private:
    Scr3bpStepper stepper_;
    MoserChartParams chart_;
};

}  // namespace

double Scr3bpScenario::phase_of(const ModelPoint& p) const {
    return ob_phase(as_stiefel(p), frame_);
}

LeafLabel Scr3bpScenario::label_of(const ModelPoint& p) const {
    return leaf_label(as_stiefel(p), frame_);
}

ModelPoint Scr3bpScenario::section_point(cd c, const Tomography& tom) const {
    return tomography_section(c, tom, scr3bp_form(), retro_branch);
}

PhaseState Scr3bpScenario::state_of(const StiefelPoint& v_model) const {
    StiefelPoint u = make_stiefel(scr3bp_frame_change_inverse(v_model.u), 1e-9);
    return moser_state_on_level(u, jacobi_c, chart, mu);
}

StiefelPoint Scr3bpScenario::model_of(const PhaseState& s) const {
    StiefelPoint u = moser_chart(s, chart);
    return make_stiefel(scr3bp_frame_change(u.u), 1e-9, scr3bp_form());
}

std::unique_ptr<Walker> Scr3bpScenario::walker(const ModelPoint& start) const {
    PhaseState s0 = state_of(as_stiefel(start));
    return std::make_unique<Scr3bpWalker>(s0, control, chart);
}

double Scr3bpScenario::page_period_hint() const {
    // One page turn is one anomalistic period 2 pi m_c / lambda^{3/2}; the
    // bounded Hill component below H(L1) has lambda of order |2 jacobi_c|,
    // so a generous bound suffices.
    return 4.0 * M_PI;
}

std::optional<cd> Scr3bpScenario::aux_fiber_coordinate(const ModelPoint& p) const {
    return std::sqrt(2.0) * as_stiefel(p)[1];  // sqrt2 * zeta
}

ModelPoint Scr3bpScenario::random_point(std::mt19937_64& rng) const {
    StiefelPoint z = random_standard_stiefel(rng);
    return make_stiefel(scr3bp_frame_change(z.u), 1e-10, scr3bp_form());
}

}  // namespace shadowlab
