#include "campaign/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace campaign {
namespace baselines {

const char* to_string(HeuristicKind k) {
    switch (k) {
        case HeuristicKind::opl: return "OPL";
        case HeuristicKind::rnd: return "RND";
        case HeuristicKind::prk: return "PRK";
        case HeuristicKind::wei: return "WEI";
        case HeuristicKind::wfl: return "WFL";
        case HeuristicKind::prp: return "PRP";
        case HeuristicKind::grd: return "GRD";
        case HeuristicKind::rel: return "REL";
    }
    return "?";
}

HeuristicKind heuristic_from_string(const std::string& s) {
    if (s == "OPL" || s == "opl") return HeuristicKind::opl;
    if (s == "RND" || s == "rnd") return HeuristicKind::rnd;
    if (s == "PRK" || s == "prk") return HeuristicKind::prk;
    if (s == "WEI" || s == "wei") return HeuristicKind::wei;
    if (s == "WFL" || s == "wfl") return HeuristicKind::wfl;
    if (s == "PRP" || s == "prp") return HeuristicKind::prp;
    if (s == "GRD" || s == "grd") return HeuristicKind::grd;
    if (s == "REL" || s == "rel") return HeuristicKind::rel;
    throw std::invalid_argument("unknown heuristic: " + s);
}

bool compatible(HeuristicKind kind, ObjectiveKind objective) {
    switch (kind) {
        case HeuristicKind::opl:
        case HeuristicKind::rnd: return true;
        case HeuristicKind::prk:
        case HeuristicKind::wei: return objective == ObjectiveKind::cem;
        case HeuristicKind::wfl:
        case HeuristicKind::prp: return objective == ObjectiveKind::mem;
        case HeuristicKind::grd:
        case HeuristicKind::rel: return objective == ObjectiveKind::les;
    }
    return false;
}

Vec pagerank(const Mat& adjacency, double damping, double tol, int max_iterations) {
    const Index n = adjacency.rows();
    if (adjacency.cols() != n || n == 0)
        throw std::invalid_argument("pagerank: adjacency must be square and nonempty");

    Vec outdeg = Vec::Zero(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (adjacency(i, j) != 0.0) outdeg(i) += 1.0;

    Vec r = Vec::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < max_iterations; ++it) {
        Vec next = Vec::Constant(n, (1.0 - damping) / static_cast<double>(n));
        double dangling = 0.0;
        for (Index i = 0; i < n; ++i) {
            if (outdeg(i) == 0.0) {
                dangling += r(i);
                continue;
            }
            const double share = damping * r(i) / outdeg(i);
            for (Index j = 0; j < n; ++j)
                if (adjacency(i, j) != 0.0) next(j) += share;
        }
        next.array() += damping * dangling / static_cast<double>(n);
        const double change = (next - r).lpNorm<1>();
        r = next;
        if (change <= tol) break;
    }
    return r;
}

Vec redistribute(const Vec& scores, const Vec& price, double budget, const Vec& cap) {
    const Index n = scores.size();
    if (price.size() != n || cap.size() != n)
        throw std::invalid_argument("redistribute: dimension mismatch");
    if ((scores.array() < 0.0).any())
        throw std::invalid_argument("redistribute: scores must be nonnegative");

    Vec u = Vec::Zero(n);
    // Zero-price users with positive score cost nothing; fill them outright.
    for (Index i = 0; i < n; ++i)
        if (scores(i) > 0.0 && price(i) == 0.0) u(i) = cap(i);

    double remaining = budget;
    const double tol = 1e-9;
    for (Index pass = 0; pass <= n; ++pass) {
        if (remaining <= tol) break;
        double total_score = 0.0;
        for (Index i = 0; i < n; ++i)
            if (scores(i) > 0.0 && price(i) > 0.0 && u(i) < cap(i) - 1e-15)
                total_score += scores(i);
        if (total_score <= 0.0) break;

        double spent = 0.0;
        for (Index i = 0; i < n; ++i) {
            if (!(scores(i) > 0.0 && price(i) > 0.0 && u(i) < cap(i) - 1e-15)) continue;
            const double want = remaining * scores(i) / total_score / price(i);
            const double take = std::min(want, cap(i) - u(i));
            u(i) += take;
            spent += take * price(i);
        }
        remaining -= spent;
        if (spent <= 0.0) break;
    }
    return u;
}

Vec water_fill(const Vec& levels, const Vec& price, double budget, const Vec& cap) {
    const Index n = levels.size();
    if (price.size() != n || cap.size() != n)
        throw std::invalid_argument("water_fill: dimension mismatch");

    auto spend_at = [&](double level) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i)
            s += price(i) * std::clamp(level - levels(i), 0.0, cap(i));
        return s;
    };

    const double level_max = (levels + cap).maxCoeff();
    if (spend_at(level_max) <= budget) {
        // Budget covers capping everyone who can still rise.
        Vec u(n);
        for (Index i = 0; i < n; ++i) u(i) = std::clamp(level_max - levels(i), 0.0, cap(i));
        return u;
    }

    double lo = levels.minCoeff(), hi = level_max;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (spend_at(mid) <= budget ? lo : hi) = mid;
    }
    Vec u(n);
    for (Index i = 0; i < n; ++i) u(i) = std::clamp(lo - levels(i), 0.0, cap(i));
    return u;
}

namespace {

Vec greedy_fill(const Vec& gaps, const Vec& price, double budget, const Vec& cap) {
    const Index n = gaps.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return gaps(a) > gaps(b); });

    Vec u = Vec::Zero(n);
    double remaining = budget;
    // Users whose target is already met receive nothing (same convention as
    // the proportional rules with all-zero scores).
    for (Index i = 0; i < n; ++i)
        if (price(i) == 0.0 && gaps(i) > 0.0) u(i) = cap(i);

    const double quantum = budget / (100.0 * static_cast<double>(n));
    if (quantum > 0.0) {
        for (Index oi : order) {
            if (price(oi) == 0.0 || gaps(oi) <= 0.0) continue;
            const double room = (cap(oi) - u(oi)) * price(oi);
            const double quanta = std::floor(std::min(remaining, room) / quantum);
            const double take = quanta * quantum;
            u(oi) += take / price(oi);
            remaining -= take;
            if (remaining < quantum) break;
        }
    }
    // Finish with sub-quantum remainders so the budget is exhausted unless
    // every positive-gap user is capped.
    for (Index oi : order) {
        if (remaining <= 1e-12) break;
        if (price(oi) == 0.0 || gaps(oi) <= 0.0) continue;
        const double room = (cap(oi) - u(oi)) * price(oi);
        const double take = std::min(remaining, room);
        u(oi) += take / price(oi);
        remaining -= take;
    }
    return u;
}

} // namespace

Vec allocate(const HeuristicSpec& spec, const NetworkModel& model,
             const ConstraintSet& constraints, Index stage, const Vec& x_m,
             const Vec& prev_exposure, const ObjectiveSpec& objective, Rng& rng) {
    const Index n = model.n;
    const Vec& price = constraints.price.at(stage);
    const double budget = constraints.budget.at(stage);
    const Vec& cap = constraints.cap.at(stage);

    switch (spec.kind) {
        case HeuristicKind::opl:
            throw std::logic_error("allocate: OPL is a planned policy, not a per-stage rule");
        case HeuristicKind::rnd: {
            Vec u(n);
            for (Index i = 0; i < n; ++i) u(i) = rng.uniform(0.0, cap(i));
            const double spend = price.dot(u);
            if (spend > budget) u *= (spend > 0.0 ? budget / spend : 0.0);
            return u;
        }
        case HeuristicKind::prk: {
            Mat adj = model.B;
            adj.diagonal().setZero();
            const Vec r = pagerank(adj, spec.damping);
            const Vec scores = ((cap - x_m).array() * r.array()).max(0.0).matrix();
            return redistribute(scores, price, budget, cap);
        }
        case HeuristicKind::wei: {
            const Vec q = model.A.colwise().sum().transpose();
            const Vec scores = ((cap - x_m).array() * q.array()).max(0.0).matrix();
            return redistribute(scores, price, budget, cap);
        }
        case HeuristicKind::wfl:
            return water_fill(prev_exposure, price, budget, cap);
        case HeuristicKind::prp: {
            const Vec scores = (prev_exposure.array() + 1e-6).inverse().matrix();
            return redistribute(scores, price, budget, cap);
        }
        case HeuristicKind::grd: {
            const Vec gaps = (objective.target.at(stage) - prev_exposure).cwiseMax(0.0);
            return greedy_fill(gaps, price, budget, cap);
        }
        case HeuristicKind::rel: {
            const Vec scores = (objective.target.at(stage) - prev_exposure).cwiseMax(0.0);
            return redistribute(scores, price, budget, cap);
        }
    }
    throw std::logic_error("allocate: unknown heuristic");
}

} // namespace baselines
} // namespace campaign
