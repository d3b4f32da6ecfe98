#ifndef SHADOWLAB_SCR3BP_HPP
#define SHADOWLAB_SCR3BP_HPP

// Spatial circular restricted three-body problem in the rotating frame:
//   H = |p|^2/2 + p1 q2 - p2 q1 - (1-mu)/|q - qH| - mu/|q - qL|,
// heavy primary at (-mu,0,0), light primary at (1-mu,0,0).

#include <array>

#include "shadowlab/errors.hpp"

namespace shadowlab {

using Vec3 = std::array<double, 3>;

constexpr double kDefaultCollisionGuard = 1e-6;

struct PhaseState {
    Vec3 q{};
    Vec3 p{};
    double mu = 0.0;
};

Vec3 heavy_primary(double mu);
Vec3 light_primary(double mu);

void validate(const PhaseState& s, double collision_guard = kDefaultCollisionGuard);

struct PhaseDerivative {
    Vec3 dq{};
    Vec3 dp{};
};

/// Hamiltonian vector field of the rotating-frame SCR3BP. Throws
/// CollisionGuard when the state is within collision_guard of a primary
/// with positive mass.
PhaseDerivative scr3bp_derivative(const PhaseState& s,
                                  double collision_guard = kDefaultCollisionGuard);

/// The Jacobi constant: the value of the rotating-frame Hamiltonian.
double jacobi_constant(const PhaseState& s);

struct LagrangePoint {
    double x = 0.0;              // position on the axis between the primaries
    double critical_value = 0.0; // H at the equilibrium (the first critical energy)
};

/// First collinear Lagrange point (between the primaries) by bisection on
/// the collinear equilibrium equation, plus its critical energy value.
LagrangePoint lagrange_L1(double mu);

}  // namespace shadowlab

#endif
