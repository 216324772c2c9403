#include "campaign/ratesolver.hpp"

#include <cmath>
#include <stdexcept>

namespace campaign {
namespace ratesolver {

namespace {

void check_time(double t, const char* who) {
    if (t < 0.0) throw std::domain_error(std::string(who) + ": t must be >= 0");
}

Mat materialize(Index n, const std::function<Vec(const Vec&)>& action) {
    Mat out(n, n);
    Vec e = Vec::Zero(n);
    for (Index j = 0; j < n; ++j) {
        e(j) = 1.0;
        out.col(j) = action(e);
        e(j) = 0.0;
    }
    return out;
}

} // namespace

Vec psi_action(const NetworkModel& model, double t, const Vec& v,
               const MatrixBackend& backend) {
    check_time(t, "psi");
    const Vec ev = backend.expm_st(t, v);
    return ev + model.omega * backend.solve_shifted(ev - v);
}

Mat psi(const NetworkModel& model, double t, const MatrixBackend& backend) {
    check_time(t, "psi");
    if (backend.mode() == BackendMode::dense) {
        const Mat E = backend.expm_st_matrix(t);
        const Mat I = Mat::Identity(model.n, model.n);
        Mat Psi = E;
        for (Index j = 0; j < model.n; ++j)
            Psi.col(j) += model.omega * backend.solve_shifted(Vec(E.col(j) - I.col(j)));
        return Psi;
    }
    if (model.n > backend.options().dense_limit)
        throw std::logic_error("psi: refusing to materialize an n x n operator above the dense limit");
    return materialize(model.n, [&](const Vec& v) { return psi_action(model, t, v, backend); });
}

Vec v_action(double t, const Vec& v, const MatrixBackend& backend) {
    check_time(t, "v_action");
    return backend.solve_shifted(backend.expm_st(t, v) - v);
}

Vec psi_integral_action(const NetworkModel& model, double t, const Vec& v,
                        const MatrixBackend& backend) {
    check_time(t, "psi_integral");
    const Vec w = v_action(t, v, backend);
    return w + model.omega * backend.solve_shifted(Vec(w - t * v));
}

Mat psi_integral(const NetworkModel& model, double t, const MatrixBackend& backend) {
    check_time(t, "psi_integral");
    if (model.n > backend.options().dense_limit)
        throw std::logic_error("psi_integral: refusing to materialize above the dense limit");
    return materialize(model.n, [&](const Vec& v) {
        return psi_integral_action(model, t, v, backend);
    });
}

Mat upsilon(const NetworkModel& model, double t, const MatrixBackend& backend) {
    check_time(t, "upsilon");
    if (model.n > backend.options().dense_limit)
        throw std::logic_error("upsilon: refusing to materialize above the dense limit");
    return materialize(model.n, [&](const Vec& v) {
        return Vec(model.B * v_action(t, v, backend));
    });
}

Mat gamma(const NetworkModel& model, double t, const MatrixBackend& backend) {
    check_time(t, "gamma");
    if (model.n > backend.options().dense_limit)
        throw std::logic_error("gamma: refusing to materialize above the dense limit");
    return materialize(model.n, [&](const Vec& v) {
        return gamma_action(model, t, v, backend);
    });
}

Vec upsilon_action(const NetworkModel& model, double t, const Vec& v,
                   const MatrixBackend& backend) {
    check_time(t, "upsilon");
    return model.B * v_action(t, v, backend);
}

Vec gamma_action(const NetworkModel& model, double t, const Vec& v,
                 const MatrixBackend& backend) {
    check_time(t, "gamma");
    const Vec w = v_action(t, v, backend);
    return model.B * (w + model.omega * backend.solve_shifted(Vec(w - t * v)));
}

Vec upsilon_transpose_action(const NetworkModel& model, double t, const Vec& v,
                             const MatrixBackend& backend) {
    check_time(t, "upsilon_transpose");
    // (B V)^T v = V^T B^T v = (e^{S^T t} - I) S^{-T} (B^T v).
    const Vec y = backend.solve_shifted_transpose(Vec(model.B.transpose() * v));
    return backend.expm_st_transpose(t, y) - y;
}

Vec gamma_transpose_action(const NetworkModel& model, double t, const Vec& v,
                           const MatrixBackend& backend) {
    check_time(t, "gamma_transpose");
    // Gamma(t)^T v = [V + omega S^{-1} (V - t I)]^T B^T v.
    const Vec y = Vec(model.B.transpose() * v);
    auto vt = [&](const Vec& w) {  // V(t)^T w
        const Vec z = backend.solve_shifted_transpose(w);
        return Vec(backend.expm_st_transpose(t, z) - z);
    };
    const Vec sy = backend.solve_shifted_transpose(y);
    return vt(y) + model.omega * (vt(sy) - t * sy);
}

Vec eta_piecewise(const NetworkModel& model, const PiecewiseExo& exo, double t,
                  const MatrixBackend& backend) {
    exo.validate();
    check_time(t, "eta_piecewise");
    Vec eta = Vec::Zero(model.n);
    Vec prev = Vec::Zero(model.n);
    for (std::size_t k = 0; k < exo.breakpoints.size(); ++k) {
        if (exo.breakpoints[k] > t) break;
        const Vec dc = exo.levels[k] - prev;
        eta += psi_action(model, t - exo.breakpoints[k], dc, backend);
        prev = exo.levels[k];
    }
    return eta;
}

Vec eta_piecewise_integral(const NetworkModel& model, const PiecewiseExo& exo,
                           double t_a, double t_b, const MatrixBackend& backend) {
    exo.validate();
    if (t_a < 0.0 || t_b < t_a)
        throw std::domain_error("eta_piecewise_integral: need 0 <= t_a <= t_b");
    Vec out = Vec::Zero(model.n);
    Vec prev = Vec::Zero(model.n);
    for (std::size_t k = 0; k < exo.breakpoints.size(); ++k) {
        const double bk = exo.breakpoints[k];
        if (bk >= t_b) break;
        const Vec dc = exo.levels[k] - prev;
        const double hi = t_b - bk;
        const double lo = std::max(t_a - bk, 0.0);
        out += psi_integral_action(model, hi, dc, backend);
        if (lo > 0.0) out -= psi_integral_action(model, lo, dc, backend);
        prev = exo.levels[k];
    }
    return out;
}

Vec eta_general(const NetworkModel& model, const std::function<Vec(double)>& exo_fn,
                double t, double quadrature_step, const MatrixBackend& backend) {
    check_time(t, "eta_general");
    if (!(quadrature_step > 0.0))
        throw std::domain_error("eta_general: quadrature_step must be positive");
    if (t == 0.0) return exo_fn(0.0);

    const int panels = std::max(1, static_cast<int>(std::ceil(t / quadrature_step)));
    const double h = t / panels;

    // I_{j+1} = e^{S h} (I_j + (h/2) mu_j) + (h/2) mu_{j+1}^-: composite
    // trapezoid of int_0^t e^{S (t - s)} mu(s) ds with one short-step action
    // per panel. Right panel endpoints are sampled just below the grid point
    // so a right-continuous jump aligned with the grid is integrated with its
    // left limit, keeping the O(h^2) order on piecewise-constant drives.
    const double below = 1e-9 * h;
    Vec integral = Vec::Zero(model.n);
    for (int j = 0; j < panels; ++j) {
        const Vec mu_left = exo_fn(j * h);
        const Vec mu_right = exo_fn((j + 1) * h - below);
        integral = backend.expm_st(h, Vec(integral + 0.5 * h * mu_left)) + 0.5 * h * mu_right;
    }
    return exo_fn(t) + model.A * integral;
}

} // namespace ratesolver
} // namespace campaign
