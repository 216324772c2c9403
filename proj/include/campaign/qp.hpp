#pragma once

#include "campaign/types.hpp"

#include <functional>
#include <vector>

namespace campaign {

// Product over stages of { u : 0 <= u <= cap_m, price_m^T u <= budget_m }.
// Projection is exact: per-block box clamp plus a 1-d dual bisection on the
// budget hyperplane.
struct BoxBudgetSet {
    Index block = 0;  // block size n
    std::vector<Vec> price;
    std::vector<double> budget;
    std::vector<Vec> cap;

    Index dim() const { return block * static_cast<Index>(budget.size()); }
    Vec project(const Vec& v) const;
    bool contains(const Vec& v, double tol = 1e-9) const;
};

Vec project_box_budget(const Vec& v, const Vec& price, double budget, const Vec& cap);

struct QpOptions {
    double tol = 1e-8;        // projected-gradient norm target
    int max_iterations = 20000;
};

struct QpResult {
    Vec x;
    double objective = 0.0;
    double projected_gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Minimize a smooth convex f over the set by FISTA with backtracking and
// gradient-based adaptive restart. lipschitz_hint may be 0 (backtracking
// finds a workable step).
QpResult qp_solve(const std::function<double(const Vec&)>& value,
                  const std::function<Vec(const Vec&)>& gradient,
                  const BoxBudgetSet& set, const Vec& x0,
                  double lipschitz_hint = 0.0, const QpOptions& opts = {});

} // namespace campaign
