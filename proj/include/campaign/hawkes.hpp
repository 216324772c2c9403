#pragma once

#include "campaign/model.hpp"
#include "campaign/rng.hpp"

#include <cstdint>
#include <vector>

namespace campaign {
namespace hawkes {

// Conditional intensity at t given the history strictly before t:
// exo(t) + sum_{t_k < t} A[:, d_k] e^{-omega (t - t_k)}.
// Throws std::domain_error if t lies outside [0, horizon].
Vec intensity_at(const NetworkModel& model, const EventSequence& events,
                 const PiecewiseExo& exo, double t);

struct SimulateOptions {
    std::uint64_t max_events = 10'000'000;  // explosion guard
};

// Exact Ogata-thinning draw of the process on [t_a, t_b) under exogenous
// drive mu + u_m per stage. x_init is the residual endogenous intensity
// carried into t_a; it decays as x_init * e^{-omega (t - t_a)}.
// Deterministic in (inputs, rng state). Events are stamped in [t_a, t_b).
EventSequence simulate(const NetworkModel& model, const std::vector<Vec>& controls,
                       const StageSchedule& schedule, const Vec& x_init,
                       double t_a, double t_b, Rng rng,
                       const SimulateOptions& opts = {});

// Residual endogenous intensity at t, advanced from x_prev at t_prev using
// the events in [t_prev, t):
// x(t) = x_prev e^{-omega (t - t_prev)} + sum_{t_k in [t_prev, t)} A[:, d_k] e^{-omega (t - t_k)}.
Vec state_at(const NetworkModel& model, const EventSequence& events,
             const Vec& x_prev, double t_prev, double t);

// B times the per-user event counts inside [t_a, t_b).
Vec exposure_counts(const EventSequence& events, const Mat& B,
                    double t_a, double t_b);

// Per-user event counts inside [t_a, t_b).
Vec counts_in_window(const EventSequence& events, Index n, double t_a, double t_b);

} // namespace hawkes
} // namespace campaign
