#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace mvcg {

/// Accumulator for regression targets: b = sum over samples of phi * y.
struct MomentVector {
    Eigen::VectorXd b;

    explicit MomentVector(int d) : b(Eigen::VectorXd::Zero(d)) {}
    void add(const Eigen::VectorXd& phi, double y) { b += phi * y; }
};

/// Regularized second-moment matrix lambda*I + sum phi phi^T with a Cholesky
/// handle kept consistent with it. Quadratic forms and ridge solves go
/// through the factorization; no explicit inverse is formed.
///
/// Updates are rank-one on the factor; a full refactorization runs every 512
/// adds to bound drift, and the matrix is re-symmetrized after each update.
class GramState {
public:
    GramState(int d, double lambda);

    /// Adds one sample phi phi^T. Requires a matching dimension.
    void add(const Eigen::VectorXd& phi);

    /// phi^T Lambda^{-1} phi, always positive for nonzero phi.
    double quad_form(const Eigen::VectorXd& phi) const;

    /// min(beta * sqrt(quad_form), cap): the clipped uncertainty width.
    double bonus(const Eigen::VectorXd& phi, double beta, double cap) const;

    /// Solves Lambda w = b, i.e. the ridge normal equations.
    Eigen::VectorXd ridge_solve(const Eigen::VectorXd& b) const;

    int dim() const { return d_; }
    double lambda() const { return lambda_; }
    int count() const { return count_; }
    const Eigen::MatrixXd& matrix() const { return lambda_mat_; }

private:
    void refactor();
    void check_dim(const Eigen::VectorXd& v) const;

    int d_;
    double lambda_;
    Eigen::MatrixXd lambda_mat_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    int count_ = 0;
    int adds_since_refactor_ = 0;
};

} // namespace mvcg
