#include "campaign/exposure.hpp"

#include "campaign/ratesolver.hpp"

#include <ostream>
#include <stdexcept>

namespace campaign {

const char* to_string(ExposureMode mode) {
    return mode == ExposureMode::cumulative ? "cumulative" : "per-stage";
}

ExposureMode exposure_mode_from_string(const std::string& s) {
    if (s == "cumulative") return ExposureMode::cumulative;
    if (s == "per-stage" || s == "per_stage") return ExposureMode::per_stage;
    throw std::invalid_argument("unknown exposure mode: " + s);
}

OperatorTable::OperatorTable(const NetworkModel& model, const StageSchedule& schedule,
                             std::shared_ptr<const MatrixBackend> backend)
    : model_(std::make_shared<NetworkModel>(model)), schedule_(schedule),
      backend_(std::move(backend)) {
    if (backend_->mode() == BackendMode::dense) {
        gammas_.reserve(schedule_.M + 1);
        upsilons_.reserve(schedule_.M + 1);
        gammas_.push_back(Mat::Zero(model.n, model.n));
        upsilons_.push_back(Mat::Zero(model.n, model.n));
        for (Index k = 1; k <= schedule_.M; ++k) {
            const double t = static_cast<double>(k) * schedule_.delta();
            gammas_.push_back(ratesolver::gamma(*model_, t, *backend_));
            upsilons_.push_back(ratesolver::upsilon(*model_, t, *backend_));
        }
    }
}

Vec OperatorTable::gamma_mul(Index k, const Vec& v) const {
    if (k == 0) return Vec::Zero(n());
    if (materialized()) return gammas_[k] * v;
    return ratesolver::gamma_action(*model_, k * schedule_.delta(), v, *backend_);
}

Vec OperatorTable::upsilon_mul(Index k, const Vec& v) const {
    if (k == 0) return Vec::Zero(n());
    if (materialized()) return upsilons_[k] * v;
    return ratesolver::upsilon_action(*model_, k * schedule_.delta(), v, *backend_);
}

Vec OperatorTable::gamma_tmul(Index k, const Vec& v) const {
    if (k == 0) return Vec::Zero(n());
    if (materialized()) return gammas_[k].transpose() * v;
    return ratesolver::gamma_transpose_action(*model_, k * schedule_.delta(), v, *backend_);
}

Vec OperatorTable::upsilon_tmul(Index k, const Vec& v) const {
    if (k == 0) return Vec::Zero(n());
    if (materialized()) return upsilons_[k].transpose() * v;
    return ratesolver::upsilon_transpose_action(*model_, k * schedule_.delta(), v, *backend_);
}

const Mat& OperatorTable::gamma_mat(Index k) const {
    if (!materialized()) throw std::logic_error("OperatorTable: matrices not materialized (matrix-free backend)");
    return gammas_.at(k);
}

const Mat& OperatorTable::upsilon_mat(Index k) const {
    if (!materialized()) throw std::logic_error("OperatorTable: matrices not materialized (matrix-free backend)");
    return upsilons_.at(k);
}

namespace {

// Row r, column c coefficient of X as a signed combination of Gamma_k:
// fills (k, weight) pairs; r, c are stage offsets from the replanning index.
void x_block_terms(ExposureMode mode, Index r, Index c,
                   std::vector<std::pair<Index, double>>& terms) {
    terms.clear();
    if (c > r) return;
    if (c == r) {
        terms.emplace_back(1, 1.0);  // Gamma_1 on the diagonal in both modes
        return;
    }
    const Index j = r - c;
    if (mode == ExposureMode::cumulative) {
        terms.emplace_back(j + 1, 1.0);
        terms.emplace_back(j, -1.0);
    } else {
        terms.emplace_back(j + 1, 1.0);
        terms.emplace_back(j, -2.0);
        if (j >= 1) terms.emplace_back(j - 1, 1.0);
    }
}

} // namespace

Vec LinearExposureModel::apply_X(const Vec& u_hat) const {
    const Index N = remaining(), nn = n();
    if (u_hat.size() != dim())
        throw std::invalid_argument("apply_X: stacked control has wrong dimension");
    Vec out = Vec::Zero(dim());
    std::vector<std::pair<Index, double>> terms;
    for (Index r = 0; r < N; ++r) {
        for (Index c = 0; c <= r; ++c) {
            x_block_terms(mode, r, c, terms);
            const Vec uc = u_hat.segment(c * nn, nn);
            for (const auto& [k, w] : terms) {
                if (k == 0) continue;  // Gamma_0 = 0
                out.segment(r * nn, nn) += w * ops->gamma_mul(k, uc);
            }
        }
    }
    return out;
}

Vec LinearExposureModel::apply_X_transpose(const Vec& r_hat) const {
    const Index N = remaining(), nn = n();
    if (r_hat.size() != dim())
        throw std::invalid_argument("apply_X_transpose: vector has wrong dimension");
    Vec out = Vec::Zero(dim());
    std::vector<std::pair<Index, double>> terms;
    for (Index r = 0; r < N; ++r) {
        const Vec rr = r_hat.segment(r * nn, nn);
        for (Index c = 0; c <= r; ++c) {
            x_block_terms(mode, r, c, terms);
            for (const auto& [k, w] : terms) {
                if (k == 0) continue;
                out.segment(c * nn, nn) += w * ops->gamma_tmul(k, rr);
            }
        }
    }
    return out;
}

Vec LinearExposureModel::offset(const Vec& mu, const Vec& x_l) const {
    const Index N = remaining(), nn = n();
    if (mu.size() != nn || x_l.size() != nn)
        throw std::invalid_argument("offset: mu and x_l must have length n");
    Vec out(dim());
    for (Index r = 0; r < N; ++r) {
        Vec block = ops->gamma_mul(r + 1, mu) + ops->upsilon_mul(r + 1, x_l);
        if (mode == ExposureMode::per_stage && r >= 1) {
            block -= ops->gamma_mul(r, mu) + ops->upsilon_mul(r, x_l);
        }
        out.segment(r * nn, nn) = block;
    }
    return out;
}

Mat LinearExposureModel::X() const {
    const Index N = remaining(), nn = n();
    Mat out = Mat::Zero(dim(), dim());
    std::vector<std::pair<Index, double>> terms;
    for (Index r = 0; r < N; ++r)
        for (Index c = 0; c <= r; ++c) {
            x_block_terms(mode, r, c, terms);
            for (const auto& [k, w] : terms) {
                if (k == 0) continue;
                out.block(r * nn, c * nn, nn, nn) += w * ops->gamma_mat(k);
            }
        }
    return out;
}

Mat LinearExposureModel::Y() const {
    const Index N = remaining(), nn = n();
    Mat out(dim(), nn);
    for (Index r = 0; r < N; ++r) {
        out.middleRows(r * nn, nn) = ops->gamma_mat(r + 1);
        if (mode == ExposureMode::per_stage && r >= 1)
            out.middleRows(r * nn, nn) -= ops->gamma_mat(r);
    }
    return out;
}

Mat LinearExposureModel::W() const {
    const Index N = remaining(), nn = n();
    Mat out(dim(), nn);
    for (Index r = 0; r < N; ++r) {
        out.middleRows(r * nn, nn) = ops->upsilon_mat(r + 1);
        if (mode == ExposureMode::per_stage && r >= 1)
            out.middleRows(r * nn, nn) -= ops->upsilon_mat(r);
    }
    return out;
}

Mat LinearExposureModel::Z() const {
    const Index N = remaining(), nn = n();
    Mat out = Mat::Zero(N + 2 * dim(), dim());
    for (Index r = 0; r < N; ++r)
        out.block(r, r * nn, 1, nn) = constraints.price[l + r].transpose();
    out.middleRows(N, dim()) = Mat::Identity(dim(), dim());
    out.middleRows(N + dim(), dim()) = -Mat::Identity(dim(), dim());
    return out;
}

Vec LinearExposureModel::z() const {
    const Index N = remaining(), nn = n();
    Vec out = Vec::Zero(N + 2 * dim());
    for (Index r = 0; r < N; ++r) {
        out(r) = constraints.budget[l + r];
        out.segment(N + r * nn, nn) = constraints.cap[l + r];
    }
    return out;
}

void LinearExposureModel::dump_blocks(std::ostream& os) const {
    os << "block,row,col,value\n";
    auto emit = [&os](const char* name, const Mat& M) {
        for (Index i = 0; i < M.rows(); ++i)
            for (Index j = 0; j < M.cols(); ++j)
                if (M(i, j) != 0.0) os << name << ',' << i << ',' << j << ',' << M(i, j) << '\n';
    };
    emit("X", X());
    emit("Y", Y());
    emit("W", W());
    emit("Z", Z());
    const Vec zz = z();
    for (Index i = 0; i < zz.size(); ++i) os << "z," << i << ",0," << zz(i) << '\n';
}

LinearExposureModel build_exposure_model(std::shared_ptr<const OperatorTable> ops,
                                         Index l, const ConstraintSet& constraints,
                                         ExposureMode mode) {
    if (l < 0 || l >= ops->stages())
        throw std::invalid_argument("build_exposure_model: need 0 <= l < M");
    constraints.validate(ops->n(), ops->stages());
    LinearExposureModel lem;
    lem.ops = std::move(ops);
    lem.l = l;
    lem.mode = mode;
    lem.constraints = constraints;
    return lem;
}

Vec mean_exposure(const LinearExposureModel& lem, const Vec& u_hat, const Vec& mu,
                  const Vec& x_l) {
    if (u_hat.size() != lem.dim())
        throw std::invalid_argument("mean_exposure: stacked control has wrong dimension");
    return lem.apply_X(u_hat) + lem.offset(mu, x_l);
}

} // namespace campaign
