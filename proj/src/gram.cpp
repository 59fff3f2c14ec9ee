#include "mvcg/gram.hpp"

#include <cmath>
#include <stdexcept>

namespace mvcg {

namespace {
constexpr int kRefactorEvery = 512;
}

GramState::GramState(int d, double lambda) : d_(d), lambda_(lambda) {
    if (d < 1)
        throw std::invalid_argument("gram dimension must be >= 1");
    if (!(lambda > 0.0))
        throw std::invalid_argument("ridge parameter must be positive");
    lambda_mat_ = lambda * Eigen::MatrixXd::Identity(d, d);
    refactor();
}

void GramState::check_dim(const Eigen::VectorXd& v) const {
    if (v.size() != d_)
        throw std::invalid_argument("feature dimension mismatch");
}

void GramState::refactor() {
    llt_.compute(lambda_mat_);
    if (llt_.info() != Eigen::Success)
        throw std::runtime_error("Gram factorization failed");
    adds_since_refactor_ = 0;
}

void GramState::add(const Eigen::VectorXd& phi) {
    check_dim(phi);
    lambda_mat_.noalias() += phi * phi.transpose();
    lambda_mat_ = ((lambda_mat_ + lambda_mat_.transpose()) * 0.5).eval();
    ++count_;
    if (++adds_since_refactor_ >= kRefactorEvery)
        refactor();
    else
        llt_.rankUpdate(phi, 1.0);
}

double GramState::quad_form(const Eigen::VectorXd& phi) const {
    check_dim(phi);
    return phi.dot(llt_.solve(phi));
}

double GramState::bonus(const Eigen::VectorXd& phi, double beta, double cap) const {
    if (beta < 0.0)
        throw std::invalid_argument("bonus scale must be nonnegative");
    if (!(cap > 0.0))
        throw std::invalid_argument("bonus cap must be positive");
    return std::min(beta * std::sqrt(quad_form(phi)), cap);
}

Eigen::VectorXd GramState::ridge_solve(const Eigen::VectorXd& b) const {
    check_dim(b);
    return llt_.solve(b);
}

} // namespace mvcg
