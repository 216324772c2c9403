#pragma once

#include "campaign/baselines.hpp"
#include "campaign/exposure.hpp"
#include "campaign/hawkes.hpp"
#include "campaign/optimizer.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace campaign {

// Produces the events of one stage at a time. The controller recomputes the
// boundary state from the returned events unless the source overrides it
// (the certainty-equivalent source feeds predicted states back directly).
class EventSource {
public:
    virtual ~EventSource() = default;
    virtual EventSequence stage_events(Index stage, const Vec& u_m) = 0;
    virtual std::optional<Vec> state_override(Index /*next_stage*/) { return std::nullopt; }
    virtual std::uint64_t seed() const { return 0; }
};

// Live Ogata-thinning simulator. Each stage draws from its own substream so
// method comparisons under common random numbers stay aligned stage by stage.
class SimulatorSource final : public EventSource {
public:
    SimulatorSource(const NetworkModel& model, const StageSchedule& schedule,
                    std::uint64_t seed, std::uint64_t replication = 0,
                    hawkes::SimulateOptions opts = {});
    EventSequence stage_events(Index stage, const Vec& u_m) override;
    std::uint64_t seed() const override { return seed_; }

private:
    const NetworkModel* model_;
    StageSchedule schedule_;
    Rng base_;
    Vec x_;
    std::uint64_t seed_;
    hawkes::SimulateOptions opts_;
};

// Replays a recorded event log (held-out-style evaluation); controls are ignored.
class RecordedSource final : public EventSource {
public:
    RecordedSource(EventSequence events, const StageSchedule& schedule);
    EventSequence stage_events(Index stage, const Vec& u_m) override;

private:
    EventSequence events_;
    StageSchedule schedule_;
};

// Noise-free source: produces no events and reports the certainty-equivalent
// mean state transition, so replanning sees exactly what the planner assumed.
class CertaintyEquivalentSource final : public EventSource {
public:
    CertaintyEquivalentSource(const NetworkModel& model, const StageSchedule& schedule,
                              std::shared_ptr<const MatrixBackend> backend);
    EventSequence stage_events(Index stage, const Vec& u_m) override;
    std::optional<Vec> state_override(Index next_stage) override;

private:
    const NetworkModel* model_;
    StageSchedule schedule_;
    std::shared_ptr<const MatrixBackend> backend_;
    Vec x_, pending_;
};

struct StageRecord {
    Vec u;
    Vec x;                   // observed state at the stage start
    Vec predicted_exposure;  // block of the solve/plan that produced u
    Vec realized_exposure;   // mode-consistent window exposure
    double predicted_objective_stage = 0.0;  // higher is better (LES negated)
    double objective_stage = 0.0;            // realized, higher is better
    Index event_count = 0;
};

struct InterventionPlan {
    std::string method;
    ObjectiveKind objective = ObjectiveKind::cem;
    ExposureMode mode = ExposureMode::cumulative;
    std::uint64_t seed = 0;
    std::vector<StageRecord> stages;
    EventSequence events;  // full horizon
    double objective_total = 0.0;            // realized (headline)
    double predicted_objective_total = 0.0;
    bool failed = false;
    Index failed_stage = -1;
    std::string status;

    std::string to_json() const;
};

struct RealizedObjective {
    std::vector<double> per_stage;  // higher is better for all kinds
    double total = 0.0;
};

// CEM: (1/n) sum_i min(exposure, beta); MEM: min_i; LES: -(1/n)||D e - target||^2,
// per stage and summed. Stage windows are [tau_m, tau_{m+1}) in per-stage mode
// and [0, tau_{m+1}) in cumulative mode.
RealizedObjective evaluate_realized_objective(const EventSequence& events,
                                              const ObjectiveSpec& objective,
                                              const StageSchedule& schedule,
                                              const Mat& B, ExposureMode mode);

// One full open-loop solve at stage l given observed state x_l.
SolveReport open_loop_plan(const std::shared_ptr<const OperatorTable>& ops,
                           const ObjectiveSpec& objective,
                           const ConstraintSet& constraints, Index l, const Vec& x_l,
                           ExposureMode mode);

// Certainty-equivalent closed loop: replan at every stage from the observed
// state, keep only the first control, advance through the event source.
InterventionPlan closed_loop_run(const std::shared_ptr<const OperatorTable>& ops,
                                 const ObjectiveSpec& objective,
                                 const ConstraintSet& constraints, EventSource& source,
                                 ExposureMode mode);

// Solve once at stage 0 and execute the fixed controls.
InterventionPlan open_loop_run(const std::shared_ptr<const OperatorTable>& ops,
                               const ObjectiveSpec& objective,
                               const ConstraintSet& constraints, EventSource& source,
                               ExposureMode mode);

// Run a per-stage heuristic inside the same loop (observes states and
// previous-stage exposures). rng drives RND draws.
InterventionPlan heuristic_run(const baselines::HeuristicSpec& heuristic,
                               const std::shared_ptr<const OperatorTable>& ops,
                               const ObjectiveSpec& objective,
                               const ConstraintSet& constraints, EventSource& source,
                               ExposureMode mode, Rng rng);

} // namespace campaign
