#include "campaign/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace campaign {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

void NetworkModel::validate() const {
    require(n >= 1, "NetworkModel: n must be >= 1");
    require(A.rows() == n && A.cols() == n, "NetworkModel: A must be n x n");
    require(B.rows() == n && B.cols() == n, "NetworkModel: B must be n x n");
    require(mu.size() == n, "NetworkModel: mu must have length n");
    require(omega > 0.0, "NetworkModel: omega must be positive");
    require((A.array() >= 0.0).all(), "NetworkModel: A must be entrywise nonnegative");
    require((B.array() >= 0.0).all(), "NetworkModel: B must be entrywise nonnegative");
    require((mu.array() >= 0.0).all(), "NetworkModel: mu must be entrywise nonnegative");
    for (Index i = 0; i < n; ++i) {
        require(B(i, i) == 1.0, "NetworkModel: B must have unit diagonal");
    }

    // omega must stay clear of Spectrum(A) or the shift A - omega*I is singular.
    Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    const auto& ev = es.eigenvalues();
    for (Index i = 0; i < ev.size(); ++i) {
        require(std::abs(ev(i) - std::complex<double>(omega, 0.0)) > 1e-10,
                "NetworkModel: omega coincides with an eigenvalue of A");
    }

    if (!allow_unstable) {
        require(stability_ratio() < 1.0,
                "NetworkModel: unstable (rho(A)/omega >= 1); set allow_unstable to accept");
    }
}

double NetworkModel::spectral_radius() const {
    if (n == 0) return 0.0;
    if (cached_rho_ < 0.0) {
        Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
        cached_rho_ = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return cached_rho_;
}

double NetworkModel::stability_ratio() const {
    return spectral_radius() / omega;
}

void EventSequence::validate(Index n) const {
    double prev = 0.0;
    for (const Event& e : events) {
        if (e.time < prev || e.time > horizon)
            throw std::invalid_argument("EventSequence: times must be nondecreasing within [0, horizon]");
        if (e.user < 0 || e.user >= n)
            throw std::invalid_argument("EventSequence: user index out of range");
        prev = e.time;
    }
}

void EventSequence::write_csv(std::ostream& os) const {
    os << "time,user\n";
    char buf[64];
    for (const Event& e : events) {
        std::snprintf(buf, sizeof(buf), "%.12g,%lld\n", e.time,
                      static_cast<long long>(e.user));
        os << buf;
    }
}

EventSequence EventSequence::read_csv(std::istream& is, double horizon) {
    EventSequence seq;
    seq.horizon = horizon;
    std::string line;
    if (!std::getline(is, line) || line.rfind("time,user", 0) != 0)
        throw std::invalid_argument("event CSV: missing 'time,user' header");
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("event CSV line " + std::to_string(lineno) + ": expected 'time,user'");
        seq.events.push_back(Event{std::stod(line.substr(0, comma)),
                                   static_cast<Index>(std::stoll(line.substr(comma + 1)))});
    }
    return seq;
}

StageSchedule::StageSchedule(Index stages, double horizon) : M(stages), T(horizon) {
    if (M < 1) throw std::invalid_argument("StageSchedule: M must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("StageSchedule: T must be positive");
}

double StageSchedule::tau(Index m) const {
    if (m < 0 || m > M) throw std::out_of_range("StageSchedule::tau: index out of range");
    if (m == M) return T;  // exact right endpoint
    return static_cast<double>(m) * delta();
}

Index StageSchedule::stage_of(double t) const {
    if (t < 0.0 || t > T) throw std::out_of_range("StageSchedule::stage_of: t outside [0, T]");
    const Index m = static_cast<Index>(std::floor(t / delta()));
    return std::min(m, M - 1);
}

void ConstraintSet::validate(Index n, Index M) const {
    require(static_cast<Index>(price.size()) == M &&
                static_cast<Index>(budget.size()) == M &&
                static_cast<Index>(cap.size()) == M,
            "ConstraintSet: need one (price, budget, cap) triple per stage");
    for (Index m = 0; m < M; ++m) {
        require(price[m].size() == n && cap[m].size() == n,
                "ConstraintSet: price/cap vectors must have length n");
        require((price[m].array() >= 0.0).all(), "ConstraintSet: prices must be nonnegative");
        require((cap[m].array() >= 0.0).all(), "ConstraintSet: caps must be nonnegative");
        require(budget[m] >= 0.0, "ConstraintSet: budgets must be nonnegative");
    }
}

bool ConstraintSet::feasible(Index m, const Vec& u, double tol) const {
    if (m < 0 || m >= stages() || u.size() != cap[m].size()) return false;
    if ((u.array() < -tol).any()) return false;
    if (((u - cap[m]).array() > tol).any()) return false;
    return price[m].dot(u) <= budget[m] + tol;
}

void PiecewiseExo::validate() const {
    require(!breakpoints.empty() && breakpoints.size() == levels.size(),
            "PiecewiseExo: need one level per breakpoint");
    require(breakpoints.front() == 0.0, "PiecewiseExo: first breakpoint must be 0");
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        require(breakpoints[k] > breakpoints[k - 1],
                "PiecewiseExo: breakpoints must be strictly increasing");
        require(levels[k].size() == levels[0].size(),
                "PiecewiseExo: level dimensions must agree");
    }
    for (const Vec& c : levels) {
        require((c.array() >= 0.0).all(), "PiecewiseExo: levels must be nonnegative");
    }
}

Vec PiecewiseExo::at(double t) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(breakpoints.begin(), it));
    if (k == 0) throw std::out_of_range("PiecewiseExo::at: t before first breakpoint");
    return levels[k - 1];
}

PiecewiseExo PiecewiseExo::constant(const Vec& level) {
    return PiecewiseExo{{0.0}, {level}};
}

PiecewiseExo PiecewiseExo::from_controls(const Vec& mu, const std::vector<Vec>& u,
                                         const StageSchedule& schedule) {
    PiecewiseExo exo;
    for (Index m = 0; m < schedule.M; ++m) {
        exo.breakpoints.push_back(schedule.tau(m));
        exo.levels.push_back(m < static_cast<Index>(u.size()) ? Vec(mu + u[m]) : mu);
    }
    return exo;
}

} // namespace campaign
