#ifndef SHADOWLAB_SECTIONS_HPP
#define SHADOWLAB_SECTIONS_HPP

// Symplectic tomography sections of the page Lefschetz fibrations, and
// explicit parametrized sampling of foliation leaves.

#include "shadowlab/stiefel.hpp"

namespace shadowlab {

/// Horizontal symplectic tomography over the page theta0: the section
/// prescribes |u_ob| = t0 * sqrt(1 - |u_lf|^2) and covers the closed
/// sub-disk |c| <= r0 of the Lefschetz base.
struct Tomography {
    double theta0 = 0.0;
    double t0 = 0.3;
    double r0 = 0.6;
    CoordinateFrame frame;
};

/// Enforces the solvability bound (1 - r0^2)(1 - 2 t0^2) >= r0^2 and ranges.
void validate(const Tomography& tom);

/// Completes the two remaining coordinates of a model point given the
/// open-book value (at frame.ob_axis) and the Lefschetz value (at
/// frame.lf_axis), subject to Q(u) = 0 and |u| = 1. `ob_half_phase` is the
/// smooth half-phase of the ob value's square (arg(ob) for a constructed
/// section); `branch` selects the second canonical sheet.
ComplexVec4 complete_remaining_pair(const QuadricForm& form, const CoordinateFrame& frame,
                                    cd ob_value, double ob_half_phase, cd lf_value, bool branch);

/// The section point s(c). Throws OutOfDomain if |c| > r0 and
/// SolvabilityFailure if the canonical completion fails (cannot occur under
/// the Tomography invariant; asserted anyway). The result satisfies
/// leaf_label(s(c)) = (theta0, c) exactly.
StiefelPoint tomography_section(cd c, const Tomography& tom, const QuadricForm& form,
                                bool branch = false);

/// A point of the leaf {ob phase = theta, label = c} parametrized by the
/// ob-modulus rho and a circle parameter psi (the leaf's fiber direction).
/// Throws DegenerateLeaf when the parametrization rank-drops or the leaf is
/// empty at the requested rho.
StiefelPoint leaf_point(const QuadricForm& form, const CoordinateFrame& frame, double theta, cd c,
                        double rho, double psi, bool branch = false);

/// Largest ob-modulus for which the leaf {theta, c} is non-empty.
double leaf_rho_max(const QuadricForm& form, const CoordinateFrame& frame, cd c);

}  // namespace shadowlab

#endif
