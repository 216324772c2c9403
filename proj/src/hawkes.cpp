#include "campaign/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace campaign {
namespace hawkes {

Vec intensity_at(const NetworkModel& model, const EventSequence& events,
                 const PiecewiseExo& exo, double t) {
    if (t < 0.0 || t > events.horizon)
        throw std::domain_error("intensity_at: t outside [0, horizon]");
    Vec lambda = exo.at(t);
    for (const Event& e : events.events) {
        if (e.time >= t) break;  // strict: an event does not excite itself
        lambda += model.A.col(e.user) * std::exp(-model.omega * (t - e.time));
    }
    return lambda;
}

EventSequence simulate(const NetworkModel& model, const std::vector<Vec>& controls,
                       const StageSchedule& schedule, const Vec& x_init,
                       double t_a, double t_b, Rng rng,
                       const SimulateOptions& opts) {
    if (t_a < 0.0 || t_b > schedule.T || t_a > t_b)
        throw std::domain_error("simulate: window outside [0, T]");
    if (!model.allow_unstable && !model.stable())
        throw std::invalid_argument("simulate: unstable model (rho(A)/omega >= 1) rejected; "
                                    "set allow_unstable to override");
    if (x_init.size() != model.n)
        throw std::invalid_argument("simulate: x_init must have length n");

    const Index n = model.n;
    EventSequence seq;
    seq.horizon = schedule.T;

    Vec endo = x_init;  // residual endogenous intensity, decays between events
    double t = t_a;
    Index stage = (t_b > t_a) ? schedule.stage_of(t_a) : 0;

    auto exo_level = [&](Index m) -> Vec {
        if (m < static_cast<Index>(controls.size()) && controls[m].size() == n)
            return model.mu + controls[m];
        return model.mu;
    };

    Vec exo = exo_level(stage);
    double exo_sum = exo.sum();

    while (t < t_b) {
        const double stage_end = std::min(t_b, schedule.tau(stage + 1));
        const double bound = exo_sum + endo.sum();  // nonincreasing until next event

        if (bound <= 0.0) {
            t = stage_end;
        } else {
            const double wait = rng.exponential(bound);
            if (t + wait >= stage_end) {
                endo *= std::exp(-model.omega * (stage_end - t));
                t = stage_end;
            } else {
                endo *= std::exp(-model.omega * wait);
                t += wait;
                const double lambda_total = exo_sum + endo.sum();
                if (rng.uniform01() * bound <= lambda_total) {
                    // Accepted: attribute the event to a user by intensity share.
                    double threshold = rng.uniform01() * lambda_total;
                    Index user = n - 1;
                    double acc = 0.0;
                    for (Index i = 0; i < n; ++i) {
                        acc += exo(i) + endo(i);
                        if (threshold <= acc) { user = i; break; }
                    }
                    seq.events.push_back(Event{t, user});
                    if (seq.events.size() > opts.max_events)
                        throw std::runtime_error(
                            "simulate: event count exceeded the explosion cap of " +
                            std::to_string(opts.max_events) +
                            " (unstable or near-critical parameters)");
                    endo += model.A.col(user);
                }
                continue;
            }
        }

        if (t >= t_b) break;
        ++stage;
        exo = exo_level(stage);
        exo_sum = exo.sum();
    }

    return seq;
}

Vec state_at(const NetworkModel& model, const EventSequence& events,
             const Vec& x_prev, double t_prev, double t) {
    if (t < t_prev) throw std::domain_error("state_at: t must be >= t_prev");
    Vec x = x_prev * std::exp(-model.omega * (t - t_prev));
    for (const Event& e : events.events) {
        if (e.time < t_prev || e.time >= t) continue;
        x += model.A.col(e.user) * std::exp(-model.omega * (t - e.time));
    }
    return x;
}

Vec counts_in_window(const EventSequence& events, Index n, double t_a, double t_b) {
    Vec counts = Vec::Zero(n);
    for (const Event& e : events.events) {
        if (e.time >= t_a && e.time < t_b) counts(e.user) += 1.0;
    }
    return counts;
}

Vec exposure_counts(const EventSequence& events, const Mat& B,
                    double t_a, double t_b) {
    return B * counts_in_window(events, B.cols(), t_a, t_b);
}

} // namespace hawkes
} // namespace campaign
