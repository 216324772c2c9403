#pragma once

#include "campaign/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace campaign {

// Multivariate Hawkes model with exponential kernel Phi(t) = A e^{-omega t}
// plus the exposure matrix B used to turn activity counts into exposures.
struct NetworkModel {
    Index n = 0;
    Mat A;       // influence coefficients, a_ij >= 0 (column j excites row i)
    double omega = 0.0;
    Vec mu;      // baseline exogenous intensity, >= 0
    Mat B;       // exposure matrix, >= 0, unit diagonal
    bool allow_unstable = false;

    // Throws std::invalid_argument on any violated invariant:
    // nonnegativity, unit diagonal of B, omega > 0, omega not within
    // 1e-10 of an eigenvalue of A, and rho(A)/omega < 1 unless
    // allow_unstable is set.
    void validate() const;

    double spectral_radius() const;
    double stability_ratio() const;  // rho(A) / omega
    bool stable() const { return stability_ratio() < 1.0; }

private:
    // Filled on first use; models are immutable after construction, so
    // compute it (via validate or a first query) before sharing across threads.
    mutable double cached_rho_ = -1.0;
};

struct Event {
    double time = 0.0;
    Index user = 0;
};

// Time-ordered activity records over [0, horizon].
struct EventSequence {
    double horizon = 0.0;
    std::vector<Event> events;

    void validate(Index n) const;  // ordering, bounds, user range

    // CSV with header "time,user"; times with 12 significant digits,
    // users 0-based.
    void write_csv(std::ostream& os) const;
    static EventSequence read_csv(std::istream& is, double horizon);
};

// Equal partition 0 = tau_0 < ... < tau_M = T with stage length T/M.
struct StageSchedule {
    Index M = 0;
    double T = 0.0;

    StageSchedule() = default;
    StageSchedule(Index stages, double horizon);

    double delta() const { return T / static_cast<double>(M); }
    double tau(Index m) const;                   // m in [0, M]
    Index stage_of(double t) const;              // stage m with tau_m <= t < tau_{m+1}
};

// Per-stage action space U_m = { u | c_m^T u <= C_m, 0 <= u <= alpha_m }.
struct ConstraintSet {
    std::vector<Vec> price;     // c_m
    std::vector<double> budget; // C_m
    std::vector<Vec> cap;       // alpha_m

    Index stages() const { return static_cast<Index>(budget.size()); }
    void validate(Index n, Index M) const;
    bool feasible(Index m, const Vec& u, double tol = 1e-9) const;
};

// Right-continuous step function: value on [tau_k, tau_{k+1}) is level_k,
// and level_{K-1} extends beyond the last breakpoint.
struct PiecewiseExo {
    std::vector<double> breakpoints;  // starts at 0, strictly increasing
    std::vector<Vec> levels;          // one per breakpoint

    void validate() const;
    Vec at(double t) const;
    static PiecewiseExo constant(const Vec& level);
    static PiecewiseExo from_controls(const Vec& mu, const std::vector<Vec>& u,
                                      const StageSchedule& schedule);
};

} // namespace campaign
