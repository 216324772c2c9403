#include "campaign/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace campaign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnboundedSurrogate = 1e12;

Vec stack_tail(const std::vector<Vec>& per_stage, Index l, Index N, Index n,
               const char* what) {
    if (static_cast<Index>(per_stage.size()) < l + N)
        throw std::invalid_argument(std::string(what) + ": missing per-stage vectors");
    Vec out(N * n);
    for (Index r = 0; r < N; ++r) {
        if (per_stage[l + r].size() != n)
            throw std::invalid_argument(std::string(what) + ": wrong vector length");
        out.segment(r * n, n) = per_stage[l + r];
    }
    return out;
}

// Shared LP skeleton for CEM and MEM: variables (u_hat, h) with
// h_rows picking which h coordinate each exposure row bounds.
struct ExposureLp {
    LpProblem problem;
    Index nu = 0;  // number of control variables
};

ExposureLp build_exposure_lp(const LinearExposureModel& lem, const Vec& mu,
                             const Vec& x_l, Index n_aux,
                             const std::vector<Index>& aux_of_row,
                             const Vec& aux_upper, const Vec& aux_cost) {
    const Index nu = lem.dim();
    const Index rows = nu + lem.remaining();
    const Index cols = nu + n_aux;

    const Mat X = lem.X();
    const Vec off = lem.offset(mu, x_l);

    ExposureLp out;
    out.nu = nu;
    LpProblem& p = out.problem;
    p.c = Vec::Zero(cols);
    p.c.tail(n_aux) = aux_cost;
    p.A = Mat::Zero(rows, cols);
    p.b = Vec::Zero(rows);

    // h_i - (X u)_i <= offset_i
    p.A.topLeftCorner(nu, nu) = -X;
    for (Index i = 0; i < nu; ++i) p.A(i, nu + aux_of_row[i]) = 1.0;
    p.b.head(nu) = off;

    // Per-stage budgets.
    for (Index r = 0; r < lem.remaining(); ++r) {
        p.A.block(nu + r, r * lem.n(), 1, lem.n()) =
            lem.constraints.price[lem.l + r].transpose();
        p.b(nu + r) = lem.constraints.budget[lem.l + r];
    }

    p.lower = Vec::Zero(cols);
    p.upper = Vec::Zero(cols);
    for (Index r = 0; r < lem.remaining(); ++r)
        p.upper.segment(r * lem.n(), lem.n()) = lem.constraints.cap[lem.l + r];
    p.upper.tail(n_aux) = aux_upper;
    return out;
}

void fill_feasibility(SolveReport& rep, const LinearExposureModel& lem) {
    const Index n = lem.n();
    rep.budget_residual = 0.0;
    rep.cap_residual = 0.0;
    rep.nonneg_residual = 0.0;
    for (Index r = 0; r < lem.remaining(); ++r) {
        const Vec u = rep.u_hat.segment(r * n, n);
        const Index m = lem.l + r;
        rep.budget_residual = std::max(
            rep.budget_residual, lem.constraints.price[m].dot(u) - lem.constraints.budget[m]);
        rep.cap_residual = std::max(rep.cap_residual, (u - lem.constraints.cap[m]).maxCoeff());
        rep.nonneg_residual = std::max(rep.nonneg_residual, -u.minCoeff());
    }
    rep.budget_residual = std::max(rep.budget_residual, 0.0);
    rep.cap_residual = std::max(rep.cap_residual, 0.0);
    rep.nonneg_residual = std::max(rep.nonneg_residual, 0.0);
}

Vec sanitize_caps(const Vec& raw, std::string& status) {
    Vec out = raw;
    bool replaced = false;
    for (Index i = 0; i < out.size(); ++i) {
        if (!(out(i) < kUnboundedSurrogate)) {
            out(i) = kUnboundedSurrogate;
            replaced = true;
        }
    }
    if (replaced)
        status += "[warning: unbounded caps replaced by 1e12 surrogate]";
    return out;
}

} // namespace

const char* to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::cem: return "cem";
        case ObjectiveKind::mem: return "mem";
        case ObjectiveKind::les: return "les";
    }
    return "unknown";
}

ObjectiveKind objective_from_string(const std::string& s) {
    if (s == "cem" || s == "CEM") return ObjectiveKind::cem;
    if (s == "mem" || s == "MEM") return ObjectiveKind::mem;
    if (s == "les" || s == "LES") return ObjectiveKind::les;
    throw std::invalid_argument("unknown objective: " + s);
}

void ObjectiveSpec::validate(Index n, Index M) const {
    if (kind == ObjectiveKind::cem) {
        if (static_cast<Index>(beta.size()) != M)
            throw std::invalid_argument("ObjectiveSpec: CEM needs one beta vector per stage");
        for (const Vec& b : beta)
            if (b.size() != n || (b.array() < 0.0).any())
                throw std::invalid_argument("ObjectiveSpec: beta must be nonnegative length-n");
    }
    if (kind == ObjectiveKind::les) {
        if (static_cast<Index>(target.size()) != M)
            throw std::invalid_argument("ObjectiveSpec: LES needs one target vector per stage");
        for (const Vec& g : target)
            if (g.size() != n || (g.array() < 0.0).any())
                throw std::invalid_argument("ObjectiveSpec: targets must be nonnegative length-n");
        if (D.size() != 0 && D.cols() != n)
            throw std::invalid_argument("ObjectiveSpec: D must have n columns");
    }
}

Mat ObjectiveSpec::shaping(Index n) const {
    return D.size() == 0 ? Mat(Mat::Identity(n, n)) : D;
}

SolveReport solve_cem(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l,
                      const std::vector<Vec>& beta) {
    const Index n = lem.n(), N = lem.remaining(), nu = lem.dim();
    SolveReport rep;
    const Vec beta_hat_raw = stack_tail(beta, lem.l, N, n, "solve_cem");
    const Vec beta_hat = sanitize_caps(beta_hat_raw, rep.status);

    std::vector<Index> aux_of_row(nu);
    for (Index i = 0; i < nu; ++i) aux_of_row[i] = i;
    ExposureLp lp = build_exposure_lp(lem, mu, x_l, nu, aux_of_row, beta_hat,
                                      Vec::Constant(nu, 1.0 / static_cast<double>(n)));

    const LpSolution s = lp_solve(lp.problem);
    rep.u_hat = s.x.head(nu);
    rep.iterations = s.iterations;
    rep.solver_objective = s.objective;
    rep.certificate_residual = std::max(s.dual_residual, s.complementarity_residual);
    rep.status += to_string(s.status);
    rep.success = s.status == LpStatus::optimal;
    if (!rep.success) rep.failure_dump = lp_format(lp.problem);

    const Vec expo = mean_exposure(lem, rep.u_hat, mu, x_l);
    rep.objective = expo.cwiseMin(beta_hat).sum() / static_cast<double>(n);
    fill_feasibility(rep, lem);
    return rep;
}

SolveReport solve_mem(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l) {
    const Index n = lem.n(), N = lem.remaining(), nu = lem.dim();
    SolveReport rep;

    std::vector<Index> aux_of_row(nu);
    for (Index i = 0; i < nu; ++i) aux_of_row[i] = i / n;  // one h per stage
    ExposureLp lp = build_exposure_lp(lem, mu, x_l, N, aux_of_row,
                                      Vec::Constant(N, kUnboundedSurrogate),
                                      Vec::Constant(N, 1.0));

    const LpSolution s = lp_solve(lp.problem);
    rep.u_hat = s.x.head(nu);
    rep.iterations = s.iterations;
    rep.solver_objective = s.objective;
    rep.certificate_residual = std::max(s.dual_residual, s.complementarity_residual);
    rep.status += to_string(s.status);
    rep.success = s.status == LpStatus::optimal;
    if (!rep.success) rep.failure_dump = lp_format(lp.problem);

    const Vec expo = mean_exposure(lem, rep.u_hat, mu, x_l);
    rep.objective = 0.0;
    for (Index r = 0; r < N; ++r) rep.objective += expo.segment(r * n, n).minCoeff();
    fill_feasibility(rep, lem);
    return rep;
}

SolveReport solve_les(const LinearExposureModel& lem, const Vec& mu, const Vec& x_l,
                      const Mat& D, const std::vector<Vec>& target) {
    const Index n = lem.n(), N = lem.remaining(), nu = lem.dim();
    SolveReport rep;
    const Vec gamma_hat = stack_tail(target, lem.l, N, n, "solve_les");
    const Mat Dm = D.size() == 0 ? Mat(Mat::Identity(n, n)) : D;
    if (Dm.cols() != n) throw std::invalid_argument("solve_les: D must have n columns");
    const double inv_n = 1.0 / static_cast<double>(n);

    const Vec off = lem.offset(mu, x_l);
    auto apply_D = [&](const Vec& v) {
        Vec out(N * Dm.rows());
        for (Index r = 0; r < N; ++r)
            out.segment(r * Dm.rows(), Dm.rows()) = Dm * v.segment(r * n, n);
        return out;
    };
    auto apply_Dt = [&](const Vec& v) {
        Vec out(N * n);
        for (Index r = 0; r < N; ++r)
            out.segment(r * n, n) = Dm.transpose() * v.segment(r * Dm.rows(), Dm.rows());
        return out;
    };
    auto residual = [&](const Vec& u) { return Vec(apply_D(lem.apply_X(u) + off) - gamma_hat); };
    auto value = [&](const Vec& u) { return inv_n * residual(u).squaredNorm(); };
    auto gradient = [&](const Vec& u) {
        return Vec(2.0 * inv_n * lem.apply_X_transpose(apply_Dt(residual(u))));
    };

    BoxBudgetSet set;
    set.block = n;
    for (Index r = 0; r < N; ++r) {
        set.price.push_back(lem.constraints.price[lem.l + r]);
        set.budget.push_back(lem.constraints.budget[lem.l + r]);
        set.cap.push_back(lem.constraints.cap[lem.l + r]);
    }

    // Power iteration for a Lipschitz bound on the gradient (largest
    // eigenvalue of (2/n) X^T D^T D X).
    Vec v = Vec::Ones(nu).normalized();
    double lam = 0.0;
    for (int it = 0; it < 30; ++it) {
        Vec w = 2.0 * inv_n * lem.apply_X_transpose(apply_Dt(apply_D(lem.apply_X(v))));
        lam = w.norm();
        if (lam <= 0.0) break;
        v = w / lam;
    }

    const QpResult q = qp_solve(value, gradient, set, Vec::Zero(nu),
                                lam > 0.0 ? 1.05 * lam : 0.0);
    rep.u_hat = q.x;
    rep.iterations = q.iterations;
    rep.solver_objective = q.objective;
    rep.objective = q.objective;
    rep.certificate_residual = q.projected_gradient_norm;
    rep.success = q.converged;
    rep.status += q.converged ? "optimal" : "iteration_limit";
    fill_feasibility(rep, lem);
    return rep;
}

SolveReport solve_objective(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                            const Vec& mu, const Vec& x_l) {
    switch (spec.kind) {
        case ObjectiveKind::cem: return solve_cem(lem, mu, x_l, spec.beta);
        case ObjectiveKind::mem: return solve_mem(lem, mu, x_l);
        case ObjectiveKind::les: return solve_les(lem, mu, x_l, spec.D, spec.target);
    }
    throw std::logic_error("solve_objective: unknown kind");
}

double objective_of_exposures(const ObjectiveSpec& spec, Index n, Index first_stage,
                              const Vec& stacked_exposure) {
    const Index N = stacked_exposure.size() / n;
    double total = 0.0;
    switch (spec.kind) {
        case ObjectiveKind::cem:
            for (Index r = 0; r < N; ++r)
                total += stacked_exposure.segment(r * n, n)
                             .cwiseMin(spec.beta.at(first_stage + r))
                             .sum() / static_cast<double>(n);
            return total;
        case ObjectiveKind::mem:
            for (Index r = 0; r < N; ++r)
                total += stacked_exposure.segment(r * n, n).minCoeff();
            return total;
        case ObjectiveKind::les: {
            const Mat Dm = spec.shaping(n);
            for (Index r = 0; r < N; ++r)
                total += (Dm * stacked_exposure.segment(r * n, n) -
                          spec.target.at(first_stage + r)).squaredNorm() /
                         static_cast<double>(n);
            return total;
        }
    }
    throw std::logic_error("objective_of_exposures: unknown kind");
}

double predicted_objective(const LinearExposureModel& lem, const ObjectiveSpec& spec,
                           const Vec& mu, const Vec& x_l, const Vec& u_hat) {
    return objective_of_exposures(spec, lem.n(), lem.l,
                                  mean_exposure(lem, u_hat, mu, x_l));
}

} // namespace campaign
