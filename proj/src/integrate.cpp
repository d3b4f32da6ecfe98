#include "shadowlab/integrate.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace shadowlab {

namespace {

using state_t = std::array<double, 6>;

state_t pack(const PhaseState& s) {
    return {s.q[0], s.q[1], s.q[2], s.p[0], s.p[1], s.p[2]};
}

PhaseState unpack(const state_t& x, double mu) {
    return PhaseState{{x[0], x[1], x[2]}, {x[3], x[4], x[5]}, mu};
}

struct Scr3bpSystem {
    double mu;
    double guard;
    std::size_t* evals;

    void operator()(const state_t& x, state_t& dxdt, double /*t*/) const {
        ++(*evals);
        PhaseState s = unpack(x, mu);
        PhaseDerivative d = scr3bp_derivative(s, guard);
        dxdt = {d.dq[0], d.dq[1], d.dq[2], d.dp[0], d.dp[1], d.dp[2]};
    }
};

using dense_stepper_t = boost::numeric::odeint::result_of::make_dense_output<
    boost::numeric::odeint::runge_kutta_dopri5<state_t>>::type;

constexpr std::size_t kRhsPerAttempt = 6;  // dopri5 is FSAL

}  // namespace

struct Scr3bpStepper::Impl {
    double mu;
    IntegratorControl ctrl;
    std::size_t evals = 0;
    std::size_t steps = 0;
    double h0 = 0.0;
    double jac0 = 0.0;
    double max_drift = 0.0;
    dense_stepper_t stepper;

    Impl(const PhaseState& s0, const IntegratorControl& c)
        : mu(s0.mu),
          ctrl(c),
          stepper(boost::numeric::odeint::make_dense_output(c.abs_tol, c.rel_tol,
                                                            boost::numeric::odeint::runge_kutta_dopri5<state_t>())) {
        validate(s0, c.collision_guard);
        jac0 = jacobi_constant(s0);
        stepper.initialize(pack(s0), 0.0, c.init_dt);
    }

    Scr3bpSystem system() { return Scr3bpSystem{mu, ctrl.collision_guard, &evals}; }

    void do_step() {
        if (steps >= ctrl.max_steps)
            throw IntegrationBudgetExceeded("Scr3bpStepper: step budget exhausted");
        auto interval = stepper.do_step(system());
        ++steps;
        double h = interval.second - interval.first;
        if (!(h > 1e-15 * std::max(1.0, std::abs(interval.second))))
            throw StepFailure("Scr3bpStepper: step size underflow");
        double drift = std::abs(jacobi_constant(unpack(stepper.current_state(), mu)) - jac0);
        max_drift = std::max(max_drift, drift);
    }
};

Scr3bpStepper::Scr3bpStepper(const PhaseState& s0, const IntegratorControl& ctrl)
    : impl_(std::make_unique<Impl>(s0, ctrl)) {}
Scr3bpStepper::~Scr3bpStepper() = default;
Scr3bpStepper::Scr3bpStepper(Scr3bpStepper&&) noexcept = default;
Scr3bpStepper& Scr3bpStepper::operator=(Scr3bpStepper&&) noexcept = default;

double Scr3bpStepper::t_begin() const {
    return impl_->steps == 0 ? impl_->stepper.current_time()
                             : impl_->stepper.previous_time();
}
double Scr3bpStepper::t_end() const { return impl_->stepper.current_time(); }

void Scr3bpStepper::step() { impl_->do_step(); }

PhaseState Scr3bpStepper::state_at(double t) const {
    state_t x;
    if (impl_->steps == 0) {
        x = impl_->stepper.current_state();
    } else {
        impl_->stepper.calc_state(t, x);
    }
    return unpack(x, impl_->mu);
}

std::size_t Scr3bpStepper::steps() const { return impl_->steps; }
std::size_t Scr3bpStepper::rhs_evals() const { return impl_->evals; }
double Scr3bpStepper::jacobi_reference() const { return impl_->jac0; }
double Scr3bpStepper::max_jacobi_drift() const { return impl_->max_drift; }

Trajectory integrate(const PhaseState& s, double T, const IntegratorControl& ctrl) {
    validate(s, ctrl.collision_guard);
    if (T < 0.0) throw ConstraintViolation("integrate: T must be non-negative");

    Trajectory traj;
    traj.samples.push_back({0.0, s});
    if (T == 0.0) return traj;

    Scr3bpStepper stepper(s, ctrl);
    while (stepper.t_end() < T) {
        stepper.step();
        double t = std::min(stepper.t_end(), T);
        traj.samples.push_back({t, stepper.state_at(t)});
        if (stepper.t_end() >= T) break;
    }
    traj.steps = stepper.steps();
    std::size_t attempts = stepper.rhs_evals() / kRhsPerAttempt;
    traj.rejected_steps = attempts > traj.steps ? attempts - traj.steps : 0;
    traj.max_jacobi_drift = stepper.max_jacobi_drift();
    return traj;
}

}  // namespace shadowlab
