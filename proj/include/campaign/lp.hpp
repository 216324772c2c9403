#pragma once

#include "campaign/types.hpp"

#include <string>

namespace campaign {

// maximize c^T x  subject to  A x <= b,  lower <= x <= upper.
// upper entries may be +infinity; lower must be finite and x = lower must be
// feasible (A lower <= b), which holds for every program built here since
// u_hat = 0 is always feasible.
struct LpProblem {
    Vec c;
    Mat A;
    Vec b;
    Vec lower;
    Vec upper;
};

enum class LpStatus { optimal, iteration_limit, unbounded, infeasible };

const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    Vec x;             // structural variables
    Vec y;             // row duals (y >= 0)
    Vec reduced_cost;  // d_j = c_j - y^T A_j
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementarity_residual = 0.0;
    int iterations = 0;
};

struct LpOptions {
    int max_iterations = 50000;
    double entering_tol = 1e-9;
    double pivot_tol = 1e-11;
    int refactor_every = 100;
    int stall_limit = 40;  // degenerate steps before switching to Bland's rule
};

// Revised simplex over bounded variables. Entering choice is Dantzig
// (largest reduced cost, lowest index on ties); after stall_limit degenerate
// steps it falls back to Bland's rule until the objective moves again, which
// guarantees termination. Fully deterministic.
LpSolution lp_solve(const LpProblem& p, const LpOptions& opts = {});

// Plain-text dump of an instance for offline inspection.
std::string lp_format(const LpProblem& p);

} // namespace campaign
