#pragma once

#include "campaign/backend.hpp"
#include "campaign/model.hpp"

#include <functional>

namespace campaign {
namespace ratesolver {

// Psi(t) = e^{(A - omega I) t} + omega (A - omega I)^{-1} (e^{(A - omega I) t} - I).
// Maps a constant exogenous level c to the mean intensity Psi(t) c.
Mat psi(const NetworkModel& model, double t, const MatrixBackend& backend);
Vec psi_action(const NetworkModel& model, double t, const Vec& v,
               const MatrixBackend& backend);

// V(t) = (A - omega I)^{-1} (e^{(A - omega I) t} - I) = int_0^t e^{(A - omega I) s} ds.
Vec v_action(double t, const Vec& v, const MatrixBackend& backend);

// int_0^t Psi(s) ds = V(t) + omega (A - omega I)^{-1} (V(t) - t I).
Mat psi_integral(const NetworkModel& model, double t, const MatrixBackend& backend);
Vec psi_integral_action(const NetworkModel& model, double t, const Vec& v,
                        const MatrixBackend& backend);

// Upsilon(t) = B V(t);  Gamma(t) = B int_0^t Psi(s) ds.
Mat upsilon(const NetworkModel& model, double t, const MatrixBackend& backend);
Mat gamma(const NetworkModel& model, double t, const MatrixBackend& backend);
Vec upsilon_action(const NetworkModel& model, double t, const Vec& v,
                   const MatrixBackend& backend);
Vec gamma_action(const NetworkModel& model, double t, const Vec& v,
                 const MatrixBackend& backend);

// Transposed actions, for gradients of objectives built on Gamma/Upsilon.
Vec upsilon_transpose_action(const NetworkModel& model, double t, const Vec& v,
                             const MatrixBackend& backend);
Vec gamma_transpose_action(const NetworkModel& model, double t, const Vec& v,
                           const MatrixBackend& backend);

// Mean intensity under a piecewise-constant exogenous drive:
// eta(t) = sum_{k : tau_k <= t} Psi(t - tau_k) (c_k - c_{k-1}), c_{-1} = 0.
Vec eta_piecewise(const NetworkModel& model, const PiecewiseExo& exo, double t,
                  const MatrixBackend& backend);

// Exact integral of eta over [t_a, t_b] for piecewise-constant exo
// (used to compare against binned event counts without quadrature error).
Vec eta_piecewise_integral(const NetworkModel& model, const PiecewiseExo& exo,
                           double t_a, double t_b, const MatrixBackend& backend);

// Mean intensity for a general exogenous drive:
// eta(t) = mu(t) + A int_0^t e^{(A - omega I)(t - s)} mu(s) ds,
// with the integral evaluated by composite trapezoid on a uniform grid of
// step <= quadrature_step. Right panel endpoints are sampled from the left,
// so the O(step^2) order holds for piecewise-constant drives whose jumps sit
// on the grid. Throws std::domain_error on an empty grid.
Vec eta_general(const NetworkModel& model, const std::function<Vec(double)>& exo_fn,
                double t, double quadrature_step, const MatrixBackend& backend);

} // namespace ratesolver
} // namespace campaign
