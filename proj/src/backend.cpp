#include "campaign/backend.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace campaign {

LinOp make_linop(const Mat& M) {
    const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
    return LinOp{M.rows(), [M](const Vec& v) { return Vec(M * v); }, norm1};
}

Mat expm_dense(const Mat& M) {
    // Higham (2005) Pade order 13 coefficients.
    static const double b[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const Index n = M.rows();
    const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    Mat A = M;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        A /= std::pow(2.0, squarings);
    }

    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A2 * A4;
    const Mat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                       b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    const Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
                  b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

    Mat R = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

Vec expm_action(const LinOp& op, const Vec& v) {
    constexpr double theta = 3.0;       // keep the scaled 1-norm small
    constexpr int max_terms = 160;
    constexpr double term_tol = 1e-16;

    const int s = std::max(1, static_cast<int>(std::ceil(op.norm1 / theta)));
    Vec f = v;
    for (int step = 0; step < s; ++step) {
        Vec b = f;
        Vec term = f;
        double prev_norm = term.lpNorm<1>();
        bool converged = (prev_norm == 0.0);
        for (int k = 1; k <= max_terms && !converged; ++k) {
            term = op.apply(term) / (static_cast<double>(s) * k);
            b += term;
            const double tn = term.lpNorm<1>();
            // Two consecutive tiny terms guard against alternating-sign stalls.
            if (tn <= term_tol * b.lpNorm<1>() && prev_norm <= term_tol * b.lpNorm<1>())
                converged = true;
            prev_norm = tn;
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "expm_action: Taylor step did not converge within " << max_terms
                << " terms (last term 1-norm " << prev_norm << ")";
            throw std::runtime_error(msg.str());
        }
        f = b;
    }
    return f;
}

GmresResult gmres(const LinOp& op, const Vec& b, double tol, int max_iterations,
                  int restart) {
    const Index n = op.n;
    GmresResult result;
    result.x = Vec::Zero(n);

    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        result.converged = true;
        return result;
    }

    int total_iters = 0;
    while (total_iters < max_iterations) {
        Vec r = b - op.apply(result.x);
        double beta = r.norm();
        if (beta <= tol * bnorm) {
            result.residual = beta / bnorm;
            result.converged = true;
            return result;
        }

        const int m = std::min<int>(restart, max_iterations - total_iters);
        Mat V(n, m + 1);
        Mat H = Mat::Zero(m + 1, m);
        Vec cs = Vec::Zero(m), sn = Vec::Zero(m);
        Vec g = Vec::Zero(m + 1);
        V.col(0) = r / beta;
        g(0) = beta;

        int k = 0;
        for (; k < m; ++k) {
            Vec w = op.apply(V.col(k));
            for (Index j = 0; j <= k; ++j) {
                H(j, k) = V.col(j).dot(w);
                w -= H(j, k) * V.col(j);
            }
            // One re-orthogonalization pass keeps the basis usable.
            for (Index j = 0; j <= k; ++j) {
                const double h2 = V.col(j).dot(w);
                H(j, k) += h2;
                w -= h2 * V.col(j);
            }
            H(k + 1, k) = w.norm();
            if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);

            for (Index j = 0; j < k; ++j) {
                const double t = cs(j) * H(j, k) + sn(j) * H(j + 1, k);
                H(j + 1, k) = -sn(j) * H(j, k) + cs(j) * H(j + 1, k);
                H(j, k) = t;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            if (denom == 0.0) { ++k; break; }
            cs(k) = H(k, k) / denom;
            sn(k) = H(k + 1, k) / denom;
            H(k, k) = denom;
            H(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            ++total_iters;
            if (std::abs(g(k + 1)) <= tol * bnorm) { ++k; break; }
        }

        // Back substitution on the k x k triangular system.
        Vec y = Vec::Zero(k);
        for (Index i = k - 1; i >= 0; --i) {
            double s = g(i);
            for (Index j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
            y(i) = s / H(i, i);
        }
        result.x += V.leftCols(k) * y;

        const double res = (b - op.apply(result.x)).norm() / bnorm;
        result.iterations = total_iters;
        result.residual = res;
        if (res <= tol) {
            result.converged = true;
            return result;
        }
        if (k == 0) break;  // breakdown; no progress possible
    }
    return result;
}

MatrixBackend::MatrixBackend(const NetworkModel& model, BackendOptions opts)
    : opts_(opts), n_(model.n), omega_(model.omega) {
    if (opts_.mode == BackendMode::dense) {
        if (n_ > opts_.dense_limit)
            throw std::invalid_argument("MatrixBackend: dense mode requires n <= dense_limit");
        S_ = model.A - omega_ * Mat::Identity(n_, n_);
        lu_ = std::make_shared<Eigen::PartialPivLU<Mat>>(S_);
        norm1_S_ = S_.cwiseAbs().colwise().sum().maxCoeff();
    } else {
        A_sparse_ = model.A.sparseView();
        A_sparse_.makeCompressed();
        A_sparse_t_ = Eigen::SparseMatrix<double>(A_sparse_.transpose());
        norm1_S_ = model.A.cwiseAbs().colwise().sum().maxCoeff() + omega_;
    }
}

void MatrixBackend::require_dense(const char* what) const {
    if (opts_.mode != BackendMode::dense)
        throw std::logic_error(std::string(what) + " requires the dense backend");
}

Vec MatrixBackend::expm_st(double t, const Vec& v) const {
    if (opts_.mode == BackendMode::dense) {
        LinOp op{n_,
                 [this, t](const Vec& w) { return Vec(t * (S_ * w)); },
                 std::abs(t) * norm1_S_};
        return expm_action(op, v);
    }
    LinOp op{n_,
             [this, t](const Vec& w) { return Vec(t * (A_sparse_ * w - omega_ * w)); },
             std::abs(t) * norm1_S_};
    return expm_action(op, v);
}

Vec MatrixBackend::expm_st_transpose(double t, const Vec& v) const {
    if (opts_.mode == BackendMode::dense) {
        LinOp op{n_,
                 [this, t](const Vec& w) { return Vec(t * (S_.transpose() * w)); },
                 std::abs(t) * S_.cwiseAbs().rowwise().sum().maxCoeff()};
        return expm_action(op, v);
    }
    LinOp op{n_,
             [this, t](const Vec& w) { return Vec(t * (A_sparse_t_ * w - omega_ * w)); },
             std::abs(t) * (A_sparse_t_.toDense().cwiseAbs().colwise().sum().maxCoeff() + omega_)};
    return expm_action(op, v);
}

Vec MatrixBackend::solve_shifted(const Vec& b) const {
    if (opts_.mode == BackendMode::dense) return lu_->solve(b);
    LinOp op{n_, [this](const Vec& w) { return Vec(A_sparse_ * w - omega_ * w); }, norm1_S_};
    GmresResult r = gmres(op, b, opts_.tol, opts_.max_iterations);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "solve_shifted: GMRES stagnated at relative residual " << r.residual
            << " after " << r.iterations << " iterations";
        throw std::runtime_error(msg.str());
    }
    return r.x;
}

Vec MatrixBackend::solve_shifted_transpose(const Vec& b) const {
    if (opts_.mode == BackendMode::dense) return lu_->transpose().solve(b);
    LinOp op{n_, [this](const Vec& w) { return Vec(A_sparse_t_ * w - omega_ * w); }, norm1_S_};
    GmresResult r = gmres(op, b, opts_.tol, opts_.max_iterations);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "solve_shifted_transpose: GMRES stagnated at relative residual "
            << r.residual << " after " << r.iterations << " iterations";
        throw std::runtime_error(msg.str());
    }
    return r.x;
}

Mat MatrixBackend::expm_st_matrix(double t) const {
    require_dense("expm_st_matrix");
    return expm_dense(Mat(t * S_));
}

} // namespace campaign
