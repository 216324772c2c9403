#pragma once

#include "campaign/exposure.hpp"
#include "campaign/lp.hpp"
#include "campaign/qp.hpp"

#include <string>
#include <vector>

namespace campaign {

enum class ObjectiveKind { cem, mem, les };

const char* to_string(ObjectiveKind k);
ObjectiveKind objective_from_string(const std::string& s);

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::cem;
    std::vector<Vec> beta;    // CEM per-stage exposure caps
    Mat D;                    // LES shaping matrix; empty means identity
    std::vector<Vec> target;  // LES per-stage targets

    void validate(Index n, Index M) const;
    Mat shaping(Index n) const;  // D or identity
};

struct SolveReport {
    bool success = false;
    std::string status;
    Vec u_hat;                 // stacked controls for stages l..M-1
    double objective = 0.0;    // CEM: (1/n) sum min(E, beta); MEM: sum_m min_i E;
                               // LES: (1/n) ||D E - target||^2 (minimized)
    double solver_objective = 0.0;  // raw LP/QP objective at the solution
    double budget_residual = 0.0;
    double cap_residual = 0.0;
    double nonneg_residual = 0.0;
    double certificate_residual = 0.0;  // LP: max(dual, complementarity); QP: pg norm
    int iterations = 0;
    std::string failure_dump;  // LP text form when the solver failed
};

SolveReport solve_cem(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l,
                      const std::vector<Vec>& beta);
SolveReport solve_mem(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l);
SolveReport solve_les(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l,
                      const Mat& D, const std::vector<Vec>& target);

// Dispatch on spec.kind using the spec's stage parameters.
SolveReport solve_objective(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                            const Vec& mu, const Vec& x_l);

// Model-predicted objective of an arbitrary stacked control through the same
// linear exposure map the solvers use.
double predicted_objective(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                           const Vec& mu, const Vec& x_l, const Vec& u_hat);

// Objective value of stacked exposures (shared by predicted and realized paths).
double objective_of_exposures(const ObjectiveSpec& spec, Index n, Index first_stage,
                              const Vec& stacked_exposure);

} // namespace campaign
