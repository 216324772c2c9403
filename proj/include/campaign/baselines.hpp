#pragma once

#include "campaign/model.hpp"
#include "campaign/optimizer.hpp"
#include "campaign/rng.hpp"

#include <string>

namespace campaign {
namespace baselines {

enum class HeuristicKind { opl, rnd, prk, wei, wfl, prp, grd, rel };

const char* to_string(HeuristicKind k);
HeuristicKind heuristic_from_string(const std::string& s);

struct HeuristicSpec {
    HeuristicKind kind = HeuristicKind::rnd;
    double damping = 0.85;  // PRK PageRank damping
};

// OPL and RND serve every objective; PRK/WEI pair with CEM, WFL/PRP with MEM,
// GRD/REL with LES.
bool compatible(HeuristicKind kind, ObjectiveKind objective);

// PageRank scores by power iteration with uniform teleport for dangling
// nodes. Nonnegative, sums to one.
Vec pagerank(const Mat& adjacency, double damping = 0.85, double tol = 1e-10,
             int max_iterations = 100000);

// Allocate the budget proportionally to the scores, clip at the caps, and
// recycle the residual among uncapped users until the budget is spent (up to
// 1e-9) or everyone is capped. Zero-price users are filled for free.
Vec redistribute(const Vec& scores, const Vec& price, double budget, const Vec& cap);

// Raise the lowest levels toward a common water line; the final allocation is
// clamp(L - levels, 0, cap) with L chosen by bisection so the spend matches
// the budget. Equal levels fill at equal rates.
Vec water_fill(const Vec& levels, const Vec& price, double budget, const Vec& cap);

// One-stage heuristic allocation. x_m is the observed residual-intensity
// state, prev_exposure the realized exposure of the previous stage. The
// objective supplies targets for GRD/REL. rng is consumed by RND only.
Vec allocate(const HeuristicSpec& spec, const NetworkModel& model,
             const ConstraintSet& constraints, Index stage, const Vec& x_m,
             const Vec& prev_exposure, const ObjectiveSpec& objective, Rng& rng);

} // namespace baselines
} // namespace campaign
