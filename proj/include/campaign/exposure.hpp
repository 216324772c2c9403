#pragma once

#include "campaign/backend.hpp"
#include "campaign/model.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace campaign {

// cumulative: row-block m predicts B E[N(tau_{m+1}) - N(tau_l)], which is what
// the telescoped Gamma coefficients of the stacked system produce verbatim.
// per_stage: row-differenced system, so row-block m predicts the exposure
// accrued within stage m only, B E[N(tau_{m+1}) - N(tau_m)].
enum class ExposureMode { cumulative, per_stage };

const char* to_string(ExposureMode mode);
ExposureMode exposure_mode_from_string(const std::string& s);

// Cache of Gamma_k = Gamma(k Delta) and Upsilon_k = Upsilon(k Delta) for
// k = 0..M. Built once per (model, schedule) and shared read-only across
// replanning stages and threads. Dense backends materialize the matrices;
// matrix-free backends evaluate actions on demand.
class OperatorTable {
public:
    OperatorTable(const NetworkModel& model, const StageSchedule& schedule,
                  std::shared_ptr<const MatrixBackend> backend);

    Index n() const { return model_->n; }
    Index stages() const { return schedule_.M; }
    const NetworkModel& model() const { return *model_; }
    const StageSchedule& schedule() const { return schedule_; }
    const MatrixBackend& backend() const { return *backend_; }
    bool materialized() const { return !gammas_.empty(); }

    Vec gamma_mul(Index k, const Vec& v) const;
    Vec upsilon_mul(Index k, const Vec& v) const;
    Vec gamma_tmul(Index k, const Vec& v) const;
    Vec upsilon_tmul(Index k, const Vec& v) const;

    const Mat& gamma_mat(Index k) const;
    const Mat& upsilon_mat(Index k) const;

private:
    std::shared_ptr<const NetworkModel> model_;
    StageSchedule schedule_;
    std::shared_ptr<const MatrixBackend> backend_;
    std::vector<Mat> gammas_, upsilons_;  // empty in matrix-free mode
};

// The affine map from stacked controls u_hat = (u_l; ...; u_{M-1}) to stacked
// mean exposures, together with the feasible-set blocks Z u_hat <= z.
struct LinearExposureModel {
    std::shared_ptr<const OperatorTable> ops;
    Index l = 0;
    ExposureMode mode = ExposureMode::cumulative;
    ConstraintSet constraints;  // full campaign constraints; tail stages l..M-1 apply

    Index n() const { return ops->n(); }
    Index total_stages() const { return ops->stages(); }
    Index remaining() const { return total_stages() - l; }
    Index dim() const { return n() * remaining(); }

    Vec apply_X(const Vec& u_hat) const;
    Vec apply_X_transpose(const Vec& r_hat) const;
    Vec offset(const Vec& mu, const Vec& x_l) const;  // Y mu + W x_l

    Mat X() const;  // materialized blocks; requires a dense-backed table
    Mat Y() const;
    Mat W() const;
    Mat Z() const;  // budget rows, cap rows, nonnegativity rows
    Vec z() const;

    void dump_blocks(std::ostream& os) const;  // CSV: block,row,col,value
};

LinearExposureModel build_exposure_model(std::shared_ptr<const OperatorTable> ops,
                                         Index l, const ConstraintSet& constraints,
                                         ExposureMode mode);

// E_hat = X u_hat + Y mu + W x_l. Throws std::invalid_argument on a
// dimension mismatch.
Vec mean_exposure(const LinearExposureModel& lem, const Vec& u_hat, const Vec& mu,
                  const Vec& x_l);

} // namespace campaign
