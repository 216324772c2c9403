#pragma once

#include "campaign/model.hpp"

#include <Eigen/LU>
#include <Eigen/Sparse>

#include <functional>
#include <memory>

namespace campaign {

enum class BackendMode { dense, matrix_free };

struct BackendOptions {
    BackendMode mode = BackendMode::dense;
    double tol = 1e-10;        // iterative solve tolerance (relative)
    int max_iterations = 500;  // Krylov iteration budget
    Index dense_limit = 2000;  // largest n for which operators may be materialized
};

// Matrix-vector operator with a bound on its induced 1-norm (the bound
// drives the scaling choice in expm_action).
struct LinOp {
    Index n = 0;
    std::function<Vec(const Vec&)> apply;
    double norm1 = 0.0;
};

LinOp make_linop(const Mat& M);

// Dense matrix exponential: Pade order 13 with scaling and squaring.
Mat expm_dense(const Mat& M);

// e^{M} v by repeated truncated-Taylor steps on M/s, s = ceil(norm1/theta).
// Throws std::runtime_error if a Taylor step fails to converge.
Vec expm_action(const LinOp& op, const Vec& v);

struct GmresResult {
    Vec x;
    double residual = 0.0;  // ||b - Mx|| / ||b||
    int iterations = 0;
    bool converged = false;
};

GmresResult gmres(const LinOp& op, const Vec& b, double tol, int max_iterations,
                  int restart = 50);

// Bound to one model's shift S = A - omega I. Dense mode factorizes S once;
// matrix-free mode keeps A sparse and runs GMRES / Taylor actions only.
class MatrixBackend {
public:
    MatrixBackend(const NetworkModel& model, BackendOptions opts = {});

    const BackendOptions& options() const { return opts_; }
    BackendMode mode() const { return opts_.mode; }
    Index n() const { return n_; }

    // Action of e^{S t} (and of its transpose) on a vector.
    Vec expm_st(double t, const Vec& v) const;
    Vec expm_st_transpose(double t, const Vec& v) const;

    // Solve (A - omega I) x = b; throws std::runtime_error with the final
    // residual if the iterative path stagnates.
    Vec solve_shifted(const Vec& b) const;
    Vec solve_shifted_transpose(const Vec& b) const;

    // Dense e^{S t}; requires n <= dense_limit.
    Mat expm_st_matrix(double t) const;

private:
    void require_dense(const char* what) const;

    BackendOptions opts_;
    Index n_ = 0;
    double omega_ = 0.0;
    Mat S_;                                      // dense shift (dense mode)
    std::shared_ptr<Eigen::PartialPivLU<Mat>> lu_;
    Eigen::SparseMatrix<double> A_sparse_;       // matrix-free mode
    Eigen::SparseMatrix<double> A_sparse_t_;
    double norm1_S_ = 0.0;
};

} // namespace campaign
