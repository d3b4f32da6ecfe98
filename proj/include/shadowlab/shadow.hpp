#ifndef SHADOWLAB_SHADOW_HPP
#define SHADOWLAB_SHADOW_HPP

// Transverse shadow paths, holomorphic-shadow semi-conjugacy residuals
// (Katok vs spheroid flows), and symplectic positivity of foliation leaves.

#include <vector>

#include "shadowlab/scenario.hpp"

namespace shadowlab {

struct PathSample {
    double t = 0.0;
    LeafLabel label;
    double margin = 0.0;  // d(ob_phase)/dt, finite-difference estimate
};

struct TransversePath {
    std::vector<PathSample> samples;
    std::string source;            // scenario id
    bool transversality_ok = true; // all margins positive
    double min_margin = 0.0;
};

/// Leaf labels sampled along the flow line through `start`, with unwrapped
/// open-book phase margins. Non-positive margins are flagged, not fatal.
TransversePath shadow_path(const Scenario& scn, const ModelPoint& start, double T, double dt);

struct ConjugacyReport {
    double max_residual = 0.0;
    int sample_count = 0;
    CoordinateFrame frame;
    SpheroidParams spheroid;
};

struct ConjugacyGrid {
    int n_starts = 100;
    int n_times = 100;
    double T = 10.0;
    std::uint64_t seed = 2024;
};

/// Max over starts and times of |sigma_i(katok_flow(p,t)) -
/// spheroid_flow(sigma_i(p), t, S_i)|, S_1 = (1,1), S_2 = (1,1+eps),
/// S_3 = (1,1-eps). The i-th holomorphic shadow of the Katok flow.
ConjugacyReport conjugacy_residual(const KatokParams& k, int axis, const ConjugacyGrid& grid);

/// alpha = weight * alpha_std with alpha_std = (i/2) sum (u du_bar - u_bar du).
struct ContactWeight {
    enum class Kind { One, KatokHinv } kind = Kind::One;
    double epsilon = 0.0;
};

/// alpha_std(v) at u.
double alpha_std(const ComplexVec4& u, const ComplexVec4& v);
/// d(alpha_std)(v, w).
double dalpha_std(const ComplexVec4& v, const ComplexVec4& w);
/// d(f alpha_std)(v, w) at u for the given weight f.
double dalpha(const ContactWeight& wgt, const ComplexVec4& u, const ComplexVec4& v,
              const ComplexVec4& w);

struct PositivityReport {
    double min_normalized = 0.0;
    double max_normalized = 0.0;
    int samples = 0;
};

/// Samples the leaf {theta, c}, builds tangent pairs by differentiating the
/// local (rho, psi) parametrization, and reports the extremes of
/// d(alpha)(v1, v2) normalized by the tangent-frame area.
PositivityReport leaf_symplectic_check(const QuadricForm& form, const CoordinateFrame& frame,
                                       const ContactWeight& weight, const LeafLabel& leaf,
                                       int n_samples);

}  // namespace shadowlab

#endif
