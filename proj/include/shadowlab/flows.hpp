#ifndef SHADOWLAB_FLOWS_HPP
#define SHADOWLAB_FLOWS_HPP

// Closed-form Reeb flows: the 5-dimensional Katok example in its
// w-coordinates, spheroid flows on S(a,b), and the Hopf flow on the
// standard quadric model.

#include <string>
#include <vector>

#include "shadowlab/stiefel.hpp"

namespace shadowlab {

struct KatokParams {
    double epsilon = (std::sqrt(5.0) - 1.0) / 20.0;  // quadratic irrational, ~0.0618
};

void validate(const KatokParams& k);

/// The Katok quadric form in w-coordinates: w0^2 + w1^2 - 2i w2 w3 = 0.
const QuadricForm& katok_form();

/// The scr3bp re-frame form: v0^2 + v2^2 + 2 v1 v3 = 0.
const QuadricForm& scr3bp_form();

/// Reeb flow of the Katok contact form alpha_eps on the Brieskorn model,
/// diagonal in w-coordinates with frequencies (1, 1, 1+eps, 1-eps).
StiefelPoint katok_flow(const StiefelPoint& p, double t, const KatokParams& k);

/// Per-coordinate frequencies of the Katok flow.
std::array<double, 4> katok_frequencies(const KatokParams& k);

/// H_eps(w) = |w|^2 + eps(|w2|^2 - |w3|^2); the Katok contact form is
/// alpha_eps = H_eps^{-1} alpha_std.
double katok_hamiltonian(const ComplexVec4& w, const KatokParams& k);

struct SpheroidParams {
    double a = 1.0;
    double b = 1.0;
};

void validate(const SpheroidParams& sp);

/// Reeb flow on S(a,b): (u,v) -> (e^{2pi i a t} u, e^{2pi i b t} v).
SpheroidPoint spheroid_flow(const SpheroidPoint& s, double t, const SpheroidParams& sp);

/// Hopf flow on the standard quadric model: u -> e^{2pi i t} u.
StiefelPoint hopf_flow(const StiefelPoint& p, double t);

/// One simple periodic orbit of the Katok flow.
struct PeriodicOrbit {
    StiefelPoint representative;
    double period = 0.0;
    std::string support;  // which w-coordinates are non-zero, e.g. "w0,w1"
};

struct CensusResult {
    std::vector<PeriodicOrbit> orbits;
    bool resonant = false;  // commensurate frequencies: orbit families, no finite count
    std::string note;
};

/// Detects the closed-form periodic orbits of the Katok flow by frequency-
/// support analysis: a support set admits periodic orbits iff its
/// frequencies are pairwise commensurable and the constraint set is
/// non-empty. For irrational eps this yields exactly 4 simple orbits with
/// periods {1, 1, 1/(1+eps), 1/(1-eps)}. Rational eps is reported as
/// resonant and no finite count is claimed.
CensusResult periodic_census(const KatokParams& k, double T_max);

}  // namespace shadowlab

#endif
