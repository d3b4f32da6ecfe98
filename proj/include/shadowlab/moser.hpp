#ifndef SHADOWLAB_MOSER_HPP
#define SHADOWLAB_MOSER_HPP

// Moser chart: the regularization identifying negative-energy states with
// points of the Stiefel model V = {sum u^2 = 0, |u| = 1} (the standard
// quadric form, before any scenario re-frame).

#include "shadowlab/scr3bp.hpp"
#include "shadowlab/stiefel.hpp"

namespace shadowlab {

enum class Primary { Heavy, Light };

struct MoserChartParams {
    Primary primary_center = Primary::Heavy;
    double energy_floor = -1e-3;  // reject states with osculating energy above this
};

void validate(const MoserChartParams& mp);

Vec3 chart_center(const MoserChartParams& mp, double mu);
double chart_mass(const MoserChartParams& mp, double mu);

/// Osculating Kepler energy about the chart's primary.
double osculating_energy(const PhaseState& s, const MoserChartParams& mp);

/// Forward chart. Requires osculating energy < energy_floor; the output
/// satisfies the standard quadric constraints to 1e-10. Planar states land
/// in {u3 = 0}.
StiefelPoint moser_chart(const PhaseState& s, const MoserChartParams& mp);

/// Closed-form inverse at a prescribed rescaling lambda = -2E > 0.
PhaseState moser_chart_inverse(const StiefelPoint& u, double lambda, const MoserChartParams& mp,
                               double mu);

/// Inverse pinned to a Jacobi level: solves jacobi_constant = jacobi_c for
/// lambda (largest root, the bounded Hill component) and returns the state.
PhaseState moser_state_on_level(const StiefelPoint& u, double jacobi_c,
                                const MoserChartParams& mp, double mu);

}  // namespace shadowlab

#endif
