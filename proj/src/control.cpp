#include "campaign/control.hpp"

#include "campaign/ratesolver.hpp"

#include "json.hpp"

#include <cmath>
#include <stdexcept>

namespace campaign {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vec_to_json(const Vec& v) {
    ordered_json arr = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

// Per-stage objective value with "higher is better" orientation for every
// kind (LES costs are negated).
double signed_stage_objective(const ObjectiveSpec& spec, Index n, Index stage,
                              const Vec& exposure) {
    const double v = objective_of_exposures(spec, n, stage, exposure);
    return spec.kind == ObjectiveKind::les ? -v : v;
}

struct PolicyResult {
    Vec u;
    Vec predicted_block;
};

using Policy = std::function<PolicyResult(Index stage, const Vec& x, const Vec& prev_exposure)>;

InterventionPlan run_loop(const std::shared_ptr<const OperatorTable>& ops,
                          const ObjectiveSpec& objective, EventSource& source,
                          ExposureMode mode, const Policy& policy,
                          const std::string& method) {
    const NetworkModel& model = ops->model();
    const StageSchedule& sched = ops->schedule();
    const Index n = model.n, M = sched.M;

    InterventionPlan plan;
    plan.method = method;
    plan.objective = objective.kind;
    plan.mode = mode;
    plan.seed = source.seed();
    plan.events.horizon = sched.T;

    Vec x = Vec::Zero(n);  // x_0 = 0
    Vec prev_exposure = Vec::Zero(n);

    for (Index m = 0; m < M; ++m) {
        StageRecord rec;
        rec.x = x;
        PolicyResult pr;
        try {
            pr = policy(m, x, prev_exposure);
        } catch (const std::exception& err) {
            plan.failed = true;
            plan.failed_stage = m;
            plan.status = err.what();
            break;
        }
        rec.u = pr.u;

        EventSequence stage_ev = source.stage_events(m, pr.u);
        rec.event_count = static_cast<Index>(stage_ev.events.size());
        for (const Event& e : stage_ev.events) plan.events.events.push_back(e);

        rec.predicted_exposure = pr.predicted_block;
        rec.predicted_objective_stage =
            signed_stage_objective(objective, n, m, pr.predicted_block);

        const double window_a = mode == ExposureMode::per_stage ? sched.tau(m) : 0.0;
        rec.realized_exposure =
            hawkes::exposure_counts(plan.events, model.B, window_a, sched.tau(m + 1));
        rec.objective_stage = signed_stage_objective(objective, n, m, rec.realized_exposure);

        const auto override_state = source.state_override(m + 1);
        x = override_state ? *override_state
                           : hawkes::state_at(model, stage_ev, x, sched.tau(m), sched.tau(m + 1));
        prev_exposure =
            hawkes::exposure_counts(stage_ev, model.B, sched.tau(m), sched.tau(m + 1));
        plan.stages.push_back(std::move(rec));
    }

    for (const StageRecord& rec : plan.stages) {
        plan.predicted_objective_total += rec.predicted_objective_stage;
        plan.objective_total += rec.objective_stage;
    }
    return plan;
}

} // namespace

SimulatorSource::SimulatorSource(const NetworkModel& model, const StageSchedule& schedule,
                                 std::uint64_t seed, std::uint64_t replication,
                                 hawkes::SimulateOptions opts)
    : model_(&model), schedule_(schedule), base_(Rng(seed).stream(replication)),
      x_(Vec::Zero(model.n)), seed_(seed), opts_(opts) {}

EventSequence SimulatorSource::stage_events(Index stage, const Vec& u_m) {
    std::vector<Vec> controls(stage + 1, Vec());
    controls[stage] = u_m;
    EventSequence ev = hawkes::simulate(*model_, controls, schedule_, x_,
                                        schedule_.tau(stage), schedule_.tau(stage + 1),
                                        base_.stream(stage), opts_);
    x_ = hawkes::state_at(*model_, ev, x_, schedule_.tau(stage), schedule_.tau(stage + 1));
    return ev;
}

RecordedSource::RecordedSource(EventSequence events, const StageSchedule& schedule)
    : events_(std::move(events)), schedule_(schedule) {}

EventSequence RecordedSource::stage_events(Index stage, const Vec&) {
    EventSequence out;
    out.horizon = schedule_.T;
    const double a = schedule_.tau(stage), b = schedule_.tau(stage + 1);
    for (const Event& e : events_.events)
        if (e.time >= a && e.time < b) out.events.push_back(e);
    return out;
}

CertaintyEquivalentSource::CertaintyEquivalentSource(
    const NetworkModel& model, const StageSchedule& schedule,
    std::shared_ptr<const MatrixBackend> backend)
    : model_(&model), schedule_(schedule), backend_(std::move(backend)),
      x_(Vec::Zero(model.n)), pending_(Vec::Zero(model.n)) {}

EventSequence CertaintyEquivalentSource::stage_events(Index, const Vec& u_m) {
    const Vec drive = model_->mu + u_m;
    const double delta = schedule_.delta();
    pending_ = ratesolver::psi_action(*model_, delta, drive, *backend_) - drive +
               backend_->expm_st(delta, x_);
    x_ = pending_;
    EventSequence empty;
    empty.horizon = schedule_.T;
    return empty;
}

std::optional<Vec> CertaintyEquivalentSource::state_override(Index) { return pending_; }

RealizedObjective evaluate_realized_objective(const EventSequence& events,
                                              const ObjectiveSpec& objective,
                                              const StageSchedule& schedule,
                                              const Mat& B, ExposureMode mode) {
    const Index n = B.rows();
    RealizedObjective out;
    for (Index m = 0; m < schedule.M; ++m) {
        const double a = mode == ExposureMode::per_stage ? schedule.tau(m) : 0.0;
        const Vec expo = hawkes::exposure_counts(events, B, a, schedule.tau(m + 1));
        const double v = signed_stage_objective(objective, n, m, expo);
        out.per_stage.push_back(v);
        out.total += v;
    }
    return out;
}

SolveReport open_loop_plan(const std::shared_ptr<const OperatorTable>& ops,
                           const ObjectiveSpec& objective,
                           const ConstraintSet& constraints, Index l, const Vec& x_l,
                           ExposureMode mode) {
    const LinearExposureModel lem = build_exposure_model(ops, l, constraints, mode);
    return solve_objective(lem, objective, ops->model().mu, x_l);
}

InterventionPlan closed_loop_run(const std::shared_ptr<const OperatorTable>& ops,
                                 const ObjectiveSpec& objective,
                                 const ConstraintSet& constraints, EventSource& source,
                                 ExposureMode mode) {
    const NetworkModel& model = ops->model();
    const Index n = model.n;
    Policy policy = [&](Index m, const Vec& x, const Vec&) {
        const LinearExposureModel lem = build_exposure_model(ops, m, constraints, mode);
        const SolveReport rep = solve_objective(lem, objective, model.mu, x);
        if (!rep.success)
            throw std::runtime_error("stage " + std::to_string(m) +
                                     " solve failed: " + rep.status);
        PolicyResult pr;
        pr.u = rep.u_hat.head(n);
        pr.predicted_block = mean_exposure(lem, rep.u_hat, model.mu, x).head(n);
        return pr;
    };
    return run_loop(ops, objective, source, mode, policy, "CLL");
}

InterventionPlan open_loop_run(const std::shared_ptr<const OperatorTable>& ops,
                               const ObjectiveSpec& objective,
                               const ConstraintSet& constraints, EventSource& source,
                               ExposureMode mode) {
    const NetworkModel& model = ops->model();
    const Index n = model.n;
    const LinearExposureModel lem0 = build_exposure_model(ops, 0, constraints, mode);
    const SolveReport rep0 = solve_objective(lem0, objective, model.mu, Vec::Zero(n));
    Vec full_prediction;
    if (rep0.success)
        full_prediction = mean_exposure(lem0, rep0.u_hat, model.mu, Vec::Zero(n));

    Policy policy = [&](Index m, const Vec&, const Vec&) {
        if (!rep0.success)
            throw std::runtime_error("open-loop solve failed: " + rep0.status);
        PolicyResult pr;
        pr.u = rep0.u_hat.segment(m * n, n);
        pr.predicted_block = full_prediction.segment(m * n, n);
        return pr;
    };
    return run_loop(ops, objective, source, mode, policy, "OPL");
}

InterventionPlan heuristic_run(const baselines::HeuristicSpec& heuristic,
                               const std::shared_ptr<const OperatorTable>& ops,
                               const ObjectiveSpec& objective,
                               const ConstraintSet& constraints, EventSource& source,
                               ExposureMode mode, Rng rng) {
    if (!baselines::compatible(heuristic.kind, objective.kind))
        throw std::invalid_argument(std::string("heuristic ") +
                                    baselines::to_string(heuristic.kind) +
                                    " does not serve objective " +
                                    to_string(objective.kind));
    const NetworkModel& model = ops->model();
    const Index n = model.n;
    Policy policy = [&, rng](Index m, const Vec& x, const Vec& prev_exposure) mutable {
        PolicyResult pr;
        Rng stage_rng = rng.stream(m);
        pr.u = baselines::allocate(heuristic, model, constraints, m, x, prev_exposure,
                                   objective, stage_rng);
        const LinearExposureModel lem = build_exposure_model(ops, m, constraints, mode);
        Vec u_hat = Vec::Zero(lem.dim());
        u_hat.head(n) = pr.u;
        pr.predicted_block = mean_exposure(lem, u_hat, model.mu, x).head(n);
        return pr;
    };
    return run_loop(ops, objective, source, mode, policy,
                    baselines::to_string(heuristic.kind));
}

std::string InterventionPlan::to_json() const {
    ordered_json j;
    j["method"] = method;
    j["objective"] = to_string(objective);
    j["mode"] = to_string(mode);
    j["seed"] = seed;
    j["failed"] = failed;
    j["failed_stage"] = failed_stage;
    j["status"] = status;
    j["tolerances"] = {{"lp_certificate", 1e-7}, {"qp_projected_gradient", 1e-8},
                       {"feasibility", 1e-9}};
    j["stages"] = ordered_json::array();
    for (const StageRecord& rec : stages) {
        ordered_json s;
        s["u"] = vec_to_json(rec.u);
        s["x"] = vec_to_json(rec.x);
        s["predicted_exposure"] = vec_to_json(rec.predicted_exposure);
        s["realized_exposure"] = vec_to_json(rec.realized_exposure);
        s["predicted_objective_stage"] = rec.predicted_objective_stage;
        s["objective_stage"] = rec.objective_stage;
        s["event_count"] = rec.event_count;
        j["stages"].push_back(std::move(s));
    }
    j["predicted_objective_total"] = predicted_objective_total;
    j["objective_total"] = objective_total;
    return j.dump(2);
}

} // namespace campaign
