#ifndef SHADOWLAB_INTEGRATE_HPP
#define SHADOWLAB_INTEGRATE_HPP

// Adaptive embedded Runge-Kutta integration of the SCR3BP field with dense
// output (Dormand-Prince 5(4) behind the scenes).

#include <cstddef>
#include <memory>
#include <vector>

#include "shadowlab/scr3bp.hpp"

namespace shadowlab {

struct IntegratorControl {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double collision_guard = kDefaultCollisionGuard;
    double init_dt = 1e-3;
    std::size_t max_steps = 20000000;
};

struct TrajectorySample {
    double t = 0.0;
    PhaseState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // strictly increasing t
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;  // derived from RHS evaluation counts
    double max_jacobi_drift = 0.0;
};

/// Integrate for time T >= 0, sampling at the accepted steps.
Trajectory integrate(const PhaseState& s, double T, const IntegratorControl& ctrl = {});

/// Stateful adaptive stepper with dense output on the last accepted step,
/// for event detection along a single flow line.
class Scr3bpStepper {
  public:
    Scr3bpStepper(const PhaseState& s0, const IntegratorControl& ctrl = {});
    ~Scr3bpStepper();
    Scr3bpStepper(Scr3bpStepper&&) noexcept;
    Scr3bpStepper& operator=(Scr3bpStepper&&) noexcept;

    double t_begin() const;  // start of the current dense interval
    double t_end() const;    // end of the current dense interval
    void step();             // accept one more step
    PhaseState state_at(double t) const;  // t within [t_begin, t_end]

    std::size_t steps() const;
    std::size_t rhs_evals() const;
    double jacobi_reference() const;
    double max_jacobi_drift() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace shadowlab

#endif
