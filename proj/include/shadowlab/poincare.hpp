#ifndef SHADOWLAB_POINCARE_HPP
#define SHADOWLAB_POINCARE_HPP

// Page-crossing event detection, return maps f_D and f_{k,D}, winding-number
// fixed-point certificates, recurrence detection and area diagnostics.

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/scenario.hpp"

namespace shadowlab {

struct CrossingOptions {
    double t_max = 0.0;  // 0: derived from the scenario's page period hint
    std::size_t max_steps = 2000000;
    double refine_tol = 1e-10;
    double grazing_gap = 1e-12;  // two crossings closer than this are grazing
    double start_page_guard = 1e-9;  // starts this close to the page do not count as a crossing
};

struct CrossingEvent {
    double t_cross = 0.0;
    ModelPoint point;
    std::optional<PhaseState> phase;
    int index = 0;  // k >= 1
    double refinement_residual = 0.0;
    double margin = 0.0;  // d(theta)/dt at the crossing, must be positive
    double jacobi_drift = 0.0;
};

/// First k_max upward crossings of the unwrapped open-book phase through
/// theta0 (mod 2pi). Downward or grazing crossings raise TransversalityLoss;
/// exceeding the time or step budget raises IntegrationBudgetExceeded.
std::vector<CrossingEvent> page_crossings(const Scenario& scn, const ModelPoint& start,
                                          double theta0, int k_max, CrossingOptions opts = {});

struct ReturnSample {
    cd value;  // the Lefschetz base value of the k-th crossing: f_{k,D}(c)
    CrossingEvent event;
    std::optional<cd> aux;  // scenario's auxiliary fiber coordinate at the crossing
};

/// f_{k,D}: the label of the k-th page crossing of the flow line through the
/// tomography section point s(c). Implements the k-th return of one flow
/// line; it is not the k-th iterate of f_D.
ReturnSample return_map_sample(cd c, int k, const Tomography& tom, const Scenario& scn,
                               CrossingOptions opts = {});
cd return_map(cd c, int k, const Tomography& tom, const Scenario& scn, CrossingOptions opts = {});

/// Winding number of an ordered closed loop of displacement values around 0,
/// by summed principal-branch phase increments. Each increment must be
/// smaller than pi/2 (AdaptiveRefineNeeded otherwise); values of modulus
/// below 1e-12 raise ZeroOnLoop.
int displacement_winding(const std::vector<cd>& loop_values);

struct RecurrenceCertificate {
    cd c_star;
    int k = 1;
    int winding = 0;
    double residual = 0.0;
    Tomography tomography;
    ModelPoint point;
    std::optional<PhaseState> phase;
};

enum class NodeStatus { DirectRecurrent, LabelMismatch, TransversalityLoss, Failed };

struct GridNode {
    cd c;
    NodeStatus status = NodeStatus::Failed;
    double residual = 0.0;
    cd displacement{0.0, 0.0};
    double margin = 0.0;        // crossing margin of the k-th event
    double jacobi_drift = 0.0;  // drift accumulated up to the k-th event
    std::optional<double> aux_rotation;  // rotation of the auxiliary fiber coordinate
    std::string diagnostic;
};

struct RecurrenceOptions {
    double direct_tol = 1e-6;
    double newton_tol = 1e-6;
    int max_newton_iters = 40;
    double fd_step = 1e-6;
    int max_subdivision_depth = 6;
    double grid_margin = 0.95;  // grid spans [-r0*margin, r0*margin]^2
    int threads = 1;
    CrossingOptions crossing;
};

struct RecurrenceScan {
    std::vector<RecurrenceCertificate> certificates;
    std::vector<GridNode> nodes;  // row-major over the valid grid nodes
    int grid_n = 0;
    int cells_examined = 0;
    int cells_with_winding = 0;
    int cells_skipped = 0;  // AdaptiveRefineNeeded persisted through subdivision
};

/// Grid scan of the displacement field f_{k,D}(c) - c. Nodes passing the
/// direct residual test are recorded; cells whose boundary winding is
/// non-zero are refined by damped finite-difference Newton and re-certified
/// by a small-loop winding check.
RecurrenceScan find_recurrent_points(const Tomography& tom, int k, const Scenario& scn, int grid_n,
                                     RecurrenceOptions opts = {});

/// Ratio of enclosed areas of the image loop to the source loop in the
/// leaf-label chart, with the scenario's induced area weight (flat for
/// closed-form scenarios, phase-space pullback for the SCR3BP family).
double area_ratio(const std::vector<cd>& loop, int k, const Tomography& tom, const Scenario& scn,
                  CrossingOptions opts = {});

}  // namespace shadowlab

#endif
