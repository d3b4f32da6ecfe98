#ifndef SHADOWLAB_SCENARIO_HPP
#define SHADOWLAB_SCENARIO_HPP

// Uniform scenario interface over the closed-form flows (Katok, spheroid,
// Hopf/Kepler) and the integrated SCR3BP family, exposing model points,
// leaf labels, tomography sections and flow walkers.

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>

#include "shadowlab/flows.hpp"
#include "shadowlab/integrate.hpp"
#include "shadowlab/moser.hpp"
#include "shadowlab/sections.hpp"

namespace shadowlab {

using ModelPoint = std::variant<StiefelPoint, SpheroidPoint>;

/// Incremental view of one flow line with dense output on the last step.
class Walker {
  public:
    virtual ~Walker() = default;
    virtual double t_begin() const = 0;
    virtual double t_end() const = 0;
    virtual void step() = 0;
    virtual ModelPoint at(double t) const = 0;
    virtual double max_jacobi_drift() const { return 0.0; }
    virtual std::optional<PhaseState> phase_at(double /*t*/) const { return std::nullopt; }
};

class Scenario {
  public:
    virtual ~Scenario() = default;
    virtual std::string name() const = 0;
    virtual const CoordinateFrame& frame() const = 0;
    virtual const QuadricForm* model_form() const { return nullptr; }  // null: C^2 model
    virtual bool closed_form() const = 0;

    virtual double phase_of(const ModelPoint& p) const = 0;
    virtual LeafLabel label_of(const ModelPoint& p) const = 0;
    virtual ModelPoint section_point(cd c, const Tomography& tom) const = 0;
    virtual std::unique_ptr<Walker> walker(const ModelPoint& start) const = 0;

    /// Rough upper bound on one page turn, used for time budgets.
    virtual double page_period_hint() const { return 1.0; }

    /// Secondary fiber coordinate recorded for rotation-profile diagnostics
    /// (the scr3bp scenario reports sqrt2 * zeta).
    virtual std::optional<cd> aux_fiber_coordinate(const ModelPoint&) const { return std::nullopt; }

    /// Random point of the model, for property suites.
    virtual ModelPoint random_point(std::mt19937_64& rng) const = 0;
};

struct KatokScenario final : Scenario {
    KatokParams params;
    CoordinateFrame frame_{0, 2, false};

    KatokScenario() = default;
    KatokScenario(KatokParams k, CoordinateFrame f) : params(k), frame_(f) {}

    std::string name() const override { return "katok"; }
    const CoordinateFrame& frame() const override { return frame_; }
    const QuadricForm* model_form() const override { return &katok_form(); }
    bool closed_form() const override { return true; }
    double phase_of(const ModelPoint& p) const override;
    LeafLabel label_of(const ModelPoint& p) const override;
    ModelPoint section_point(cd c, const Tomography& tom) const override;
    std::unique_ptr<Walker> walker(const ModelPoint& start) const override;
    ModelPoint random_point(std::mt19937_64& rng) const override;
};

struct SpheroidScenario final : Scenario {
    SpheroidParams params;
    bool conjugate_ob = false;
    CoordinateFrame frame_{1, 0, false};  // ob: the v coordinate, lf: the u coordinate

    SpheroidScenario() = default;
    explicit SpheroidScenario(SpheroidParams sp) : params(sp) {}

    std::string name() const override { return "spheroid"; }
    const CoordinateFrame& frame() const override { return frame_; }
    bool closed_form() const override { return true; }
    double phase_of(const ModelPoint& p) const override;
    LeafLabel label_of(const ModelPoint& p) const override;
    ModelPoint section_point(cd c, const Tomography& tom) const override;
    std::unique_ptr<Walker> walker(const ModelPoint& start) const override;
    double page_period_hint() const override { return 1.0 / params.b; }
    ModelPoint random_point(std::mt19937_64& rng) const override;
};

/// The spatial Kepler problem through its regularized model: the Hopf flow
/// on the standard quadric.
struct KeplerScenario final : Scenario {
    CoordinateFrame frame_{0, 1, false};

    KeplerScenario() = default;
    explicit KeplerScenario(CoordinateFrame f) : frame_(f) {}

    std::string name() const override { return "kepler"; }
    const CoordinateFrame& frame() const override { return frame_; }
    const QuadricForm* model_form() const override {
        static const QuadricForm std_form = QuadricForm::standard();
        return &std_form;
    }
    bool closed_form() const override { return true; }
    double phase_of(const ModelPoint& p) const override;
    LeafLabel label_of(const ModelPoint& p) const override;
    ModelPoint section_point(cd c, const Tomography& tom) const override;
    std::unique_ptr<Walker> walker(const ModelPoint& start) const override;
    ModelPoint random_point(std::mt19937_64& rng) const override;
};

/// SCR3BP (mu >= 0) at a fixed Jacobi level, integrated in the rotating
/// frame and viewed through the Moser chart in the re-framed coordinates
/// v = (u0, zeta, u3, zeta'). Default frame: pages by arg(v2) = arg(u3)
/// (binding = planar problem), Lefschetz coordinate v0 = u0.
struct Scr3bpScenario final : Scenario {
    double mu = 0.0;
    double jacobi_c = -1.8;
    MoserChartParams chart;
    IntegratorControl control;
    CoordinateFrame frame_{2, 0, false};
    bool retro_branch = false;  // vertical tomography variant

    std::string scenario_label = "scr3bp";

    std::string name() const override { return scenario_label; }
    const CoordinateFrame& frame() const override { return frame_; }
    const QuadricForm* model_form() const override { return &scr3bp_form(); }
    bool closed_form() const override { return false; }
    double phase_of(const ModelPoint& p) const override;
    LeafLabel label_of(const ModelPoint& p) const override;
    ModelPoint section_point(cd c, const Tomography& tom) const override;
    std::unique_ptr<Walker> walker(const ModelPoint& start) const override;
    double page_period_hint() const override;
    std::optional<cd> aux_fiber_coordinate(const ModelPoint& p) const override;
    ModelPoint random_point(std::mt19937_64& rng) const override;

    /// Phase state on the scenario's Jacobi level under the chart.
    PhaseState state_of(const StiefelPoint& v_model) const;
    /// Model point of a phase state.
    StiefelPoint model_of(const PhaseState& s) const;
};

/// Random point of the standard quadric (orthonormal 2-frame model).
StiefelPoint random_standard_stiefel(std::mt19937_64& rng);

const StiefelPoint& as_stiefel(const ModelPoint& p);
const SpheroidPoint& as_spheroid(const ModelPoint& p);

}  // namespace shadowlab

#endif
