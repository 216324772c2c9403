#include "campaign/lp.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace campaign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::iteration_limit: return "iteration_limit";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

LpSolution lp_solve(const LpProblem& p, const LpOptions& opts) {
    const Index ns = p.c.size();
    const Index m = p.b.size();
    if (p.A.rows() != m || p.A.cols() != ns || p.lower.size() != ns || p.upper.size() != ns)
        throw std::invalid_argument("lp_solve: inconsistent problem dimensions");

    const Index total = ns + m;  // structural + slack
    Vec lo(total), up(total), cost(total);
    lo.head(ns) = p.lower;
    up.head(ns) = p.upper;
    cost.head(ns) = p.c;
    lo.tail(m).setZero();
    up.tail(m).setConstant(kInf);
    cost.tail(m).setZero();

    auto column = [&](Index j) -> Vec {
        if (j < ns) return p.A.col(j);
        Vec e = Vec::Zero(m);
        e(j - ns) = 1.0;
        return e;
    };

    // Start from x = lower with the all-slack basis.
    Vec x(total);
    x.head(ns) = p.lower;
    x.tail(m) = p.b - p.A * p.lower;

    LpSolution sol;
    if ((x.tail(m).array() < -1e-9).any()) {
        sol.status = LpStatus::infeasible;
        sol.x = x.head(ns);
        return sol;
    }
    x.tail(m) = x.tail(m).cwiseMax(0.0);

    std::vector<Index> basis(m);
    std::vector<bool> is_basic(total, false), at_upper(total, false);
    for (Index i = 0; i < m; ++i) {
        basis[i] = ns + i;
        is_basic[ns + i] = true;
    }

    Mat Binv = Mat::Identity(m, m);

    auto refactorize = [&]() {
        Mat B(m, m);
        for (Index i = 0; i < m; ++i) B.col(i) = column(basis[i]);
        Binv = B.partialPivLu().inverse();
        // Recompute basic values from the nonbasic bounds for consistency.
        Vec rhs = p.b;
        for (Index j = 0; j < total; ++j)
            if (!is_basic[j] && x(j) != 0.0) rhs -= column(j) * x(j);
        const Vec xb = Binv * rhs;
        for (Index i = 0; i < m; ++i) x(basis[i]) = xb(i);
    };

    double last_objective = cost.dot(x);
    int stall = 0;
    bool bland = false;
    int pivots_since_refactor = 0;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        // Dual estimate and reduced costs.
        Vec cb(m);
        for (Index i = 0; i < m; ++i) cb(i) = cost(basis[i]);
        const Vec y = Binv.transpose() * cb;
        const Vec yA = p.A.transpose() * y;

        Index entering = -1;
        double best = opts.entering_tol;
        for (Index j = 0; j < total; ++j) {
            if (is_basic[j]) continue;
            const double d = cost(j) - (j < ns ? yA(j) : y(j - ns));
            const bool eligible = at_upper[j] ? (d < -opts.entering_tol)
                                              : (d > opts.entering_tol);
            if (!eligible) continue;
            if (bland) { entering = j; break; }
            if (std::abs(d) > best) {
                best = std::abs(d);
                entering = j;
            }
        }

        if (entering < 0) {
            sol.status = LpStatus::optimal;
            sol.iterations = iter;
            break;
        }

        const double d_enter =
            cost(entering) - (entering < ns ? yA(entering) : y(entering - ns));
        const double sigma = d_enter > 0.0 ? 1.0 : -1.0;  // move off lower (+) or upper (-)
        const Vec w = Binv * column(entering);

        // Ratio test: the entering variable moves by t >= 0 in direction sigma;
        // basic variable i changes at rate -sigma w_i.
        const double flip_t = up(entering) - lo(entering);
        double t_row = kInf;
        Index leaving_pos = -1;
        for (Index i = 0; i < m; ++i) {
            const double g = sigma * w(i);
            const Index bi = basis[i];
            double t_i;
            if (g > opts.pivot_tol) {
                t_i = (x(bi) - lo(bi)) / g;
            } else if (g < -opts.pivot_tol) {
                if (up(bi) == kInf) continue;
                t_i = (up(bi) - x(bi)) / (-g);
            } else {
                continue;
            }
            if (t_i < 0.0) t_i = 0.0;
            if (leaving_pos < 0 || t_i < t_row - 1e-12) {
                t_row = t_i;
                leaving_pos = i;
            } else if (t_i <= t_row + 1e-12) {
                // Tie: Bland takes the lowest variable index; otherwise prefer
                // the largest pivot magnitude, then the lowest variable index.
                const bool take =
                    bland ? basis[i] < basis[leaving_pos]
                          : (std::abs(w(i)) > std::abs(w(leaving_pos)) + 1e-15 ||
                             (std::abs(std::abs(w(i)) - std::abs(w(leaving_pos))) <= 1e-15 &&
                              basis[i] < basis[leaving_pos]));
                if (take) {
                    t_row = std::min(t_row, t_i);
                    leaving_pos = i;
                }
            }
        }

        if (flip_t == kInf && t_row == kInf) {
            sol.status = LpStatus::unbounded;
            sol.iterations = iter;
            break;
        }

        if (flip_t <= t_row) {
            // Bound flip: the entering variable crosses to its opposite bound.
            for (Index i = 0; i < m; ++i) x(basis[i]) -= sigma * flip_t * w(i);
            at_upper[entering] = !at_upper[entering];
            x(entering) = at_upper[entering] ? up(entering) : lo(entering);
        } else {
            const double t = t_row;
            for (Index i = 0; i < m; ++i) x(basis[i]) -= sigma * t * w(i);
            x(entering) += sigma * t;

            const Index leave = basis[leaving_pos];
            const double g = sigma * w(leaving_pos);
            at_upper[leave] = g < 0.0;  // it was increasing, so it hit its upper bound
            x(leave) = at_upper[leave] ? up(leave) : lo(leave);
            is_basic[leave] = false;
            is_basic[entering] = true;
            at_upper[entering] = false;
            basis[leaving_pos] = entering;

            const double piv = w(leaving_pos);
            const Vec pivot_row = Binv.row(leaving_pos) / piv;
            for (Index r = 0; r < m; ++r) {
                if (r == leaving_pos) continue;
                const double f = w(r);
                if (f != 0.0) Binv.row(r) -= f * pivot_row.transpose();
            }
            Binv.row(leaving_pos) = pivot_row.transpose();
            if (++pivots_since_refactor >= opts.refactor_every) {
                refactorize();
                pivots_since_refactor = 0;
            }
        }

        const double objective = cost.dot(x);
        if (objective > last_objective + 1e-12 * (1.0 + std::abs(last_objective))) {
            stall = 0;
            bland = false;
        } else if (++stall >= opts.stall_limit) {
            bland = true;
        }
        last_objective = objective;
    }

    if (sol.status == LpStatus::iteration_limit) sol.iterations = opts.max_iterations;

    // Certificates at the final iterate.
    Vec cb(m);
    for (Index i = 0; i < m; ++i) cb(i) = cost(basis[i]);
    const Vec y = Binv.transpose() * cb;
    const Vec d = p.c - p.A.transpose() * y;

    sol.x = x.head(ns);
    sol.y = y;
    sol.reduced_cost = d;
    sol.objective = p.c.dot(sol.x);

    const Vec row_slack = p.b - p.A * sol.x;
    double primal = std::max(0.0, -row_slack.minCoeff());
    primal = std::max(primal, (p.lower - sol.x).maxCoeff());
    for (Index j = 0; j < ns; ++j)
        if (up(j) != kInf) primal = std::max(primal, sol.x(j) - up(j));
    sol.primal_residual = std::max(primal, 0.0);

    double dual = std::max(0.0, -y.minCoeff());
    double comp = 0.0;
    for (Index i = 0; i < m; ++i) comp = std::max(comp, std::abs(y(i) * row_slack(i)));
    for (Index j = 0; j < ns; ++j) {
        if (is_basic[j]) {
            dual = std::max(dual, std::abs(d(j)));
        } else if (d(j) > 0.0) {
            if (up(j) == kInf) dual = std::max(dual, d(j));
            else comp = std::max(comp, std::abs(d(j) * (up(j) - sol.x(j))));
        } else if (d(j) < 0.0) {
            comp = std::max(comp, std::abs(d(j) * (sol.x(j) - lo(j))));
        }
    }
    sol.dual_residual = dual;
    sol.complementarity_residual = comp;
    return sol;
}

std::string lp_format(const LpProblem& p) {
    std::ostringstream os;
    os << "maximize\n ";
    for (Index j = 0; j < p.c.size(); ++j) {
        if (p.c(j) == 0.0) continue;
        os << (p.c(j) >= 0 ? " + " : " - ") << std::abs(p.c(j)) << " x" << j;
    }
    os << "\nsubject to\n";
    for (Index i = 0; i < p.A.rows(); ++i) {
        os << " r" << i << ":";
        for (Index j = 0; j < p.A.cols(); ++j) {
            if (p.A(i, j) == 0.0) continue;
            os << (p.A(i, j) >= 0 ? " + " : " - ") << std::abs(p.A(i, j)) << " x" << j;
        }
        os << " <= " << p.b(i) << "\n";
    }
    os << "bounds\n";
    for (Index j = 0; j < p.c.size(); ++j)
        os << " " << p.lower(j) << " <= x" << j << " <= " << p.upper(j) << "\n";
    os << "end\n";
    return os.str();
}

} // namespace campaign
