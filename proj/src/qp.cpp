#include "campaign/qp.hpp"

#include <cmath>
#include <stdexcept>

namespace campaign {

Vec project_box_budget(const Vec& v, const Vec& price, double budget, const Vec& cap) {
    Vec w = v.cwiseMax(0.0).cwiseMin(cap);
    const double spend = price.dot(w);
    if (spend <= budget) return w;

    // KKT form of the projection: w(theta) = clamp(v - theta * price, 0, cap)
    // with theta >= 0 chosen so the budget binds; price^T w(theta) is
    // nonincreasing in theta and reaches 0 (zero-price coordinates never
    // contribute spend), so bisection always brackets.
    auto spend_at = [&](double theta) {
        return price.dot(Vec((v - theta * price).cwiseMax(0.0).cwiseMin(cap)));
    };
    double lo = 0.0, hi = 1.0;
    while (spend_at(hi) > budget) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e18) break;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (spend_at(mid) > budget ? lo : hi) = mid;
    }
    return (v - hi * price).cwiseMax(0.0).cwiseMin(cap);
}

Vec BoxBudgetSet::project(const Vec& v) const {
    if (v.size() != dim()) throw std::invalid_argument("BoxBudgetSet::project: dimension mismatch");
    Vec out(v.size());
    for (std::size_t m = 0; m < budget.size(); ++m) {
        const Index off = static_cast<Index>(m) * block;
        out.segment(off, block) =
            project_box_budget(v.segment(off, block), price[m], budget[m], cap[m]);
    }
    return out;
}

bool BoxBudgetSet::contains(const Vec& v, double tol) const {
    if (v.size() != dim()) return false;
    for (std::size_t m = 0; m < budget.size(); ++m) {
        const Index off = static_cast<Index>(m) * block;
        const Vec u = v.segment(off, block);
        if ((u.array() < -tol).any()) return false;
        if (((u - cap[m]).array() > tol).any()) return false;
        if (price[m].dot(u) > budget[m] + tol) return false;
    }
    return true;
}

QpResult qp_solve(const std::function<double(const Vec&)>& value,
                  const std::function<Vec(const Vec&)>& gradient,
                  const BoxBudgetSet& set, const Vec& x0,
                  double lipschitz_hint, const QpOptions& opts) {
    double L = lipschitz_hint > 0.0 ? lipschitz_hint : 1.0;

    Vec x = set.project(x0);
    Vec y = x;
    double theta = 1.0;
    QpResult result;

    auto pg_norm = [&](const Vec& at, const Vec& g) {
        return (at - set.project(at - g)).norm();
    };

    Vec gx = gradient(x);
    result.projected_gradient_norm = pg_norm(x, gx);
    int it = 0;
    for (; it < opts.max_iterations && result.projected_gradient_norm > opts.tol; ++it) {
        const Vec gy = gradient(y);
        const double fy = value(y);

        // Backtracking on the proximal step. The descent-lemma slack must be
        // relative: near the optimum the value differences sit at rounding
        // level and an absolute test would inflate L without bound.
        L = std::max(L * 0.9, lipschitz_hint > 0.0 ? 0.01 * lipschitz_hint : 0.0);
        if (L <= 0.0) L = 1.0;
        Vec x_next;
        for (int bt = 0; bt < 60; ++bt) {
            x_next = set.project(y - gy / L);
            const Vec d = x_next - y;
            if (value(x_next) <=
                fy + gy.dot(d) + 0.5 * L * d.squaredNorm() + 1e-12 * (1.0 + std::abs(fy)))
                break;
            L *= 2.0;
        }

        // Gradient-based adaptive restart.
        if (gy.dot(x_next - x) > 0.0) {
            theta = 1.0;
            y = x;
            continue;
        }

        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        y = x_next + ((theta - 1.0) / theta_next) * (x_next - x);
        x = x_next;
        theta = theta_next;

        gx = gradient(x);
        result.projected_gradient_norm = pg_norm(x, gx);
    }

    result.x = x;
    result.objective = value(x);
    result.iterations = it;
    result.converged = result.projected_gradient_norm <= opts.tol;
    return result;
}

} // namespace campaign
