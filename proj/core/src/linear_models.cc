#include "ieoe/linear_models.h"

#include <algorithm>
#include <cmath>

#include "ieoe/error.h"

namespace ieoe {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

MatrixXd Augment(const MatrixXd& x) {
  MatrixXd xa(x.rows(), x.cols() + 1);
  xa.leftCols(x.cols()) = x;
  xa.col(x.cols()).setOnes();
  return xa;
}

// Intercepts are unpenalized; the tiny diagonal keeps the Newton system
// positive definite when the intercept direction is flat.
constexpr double kInterceptJitter = 1e-10;

}  // namespace

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LinearModel FitRidge(const MatrixXd& x, const VectorXd& y, double alpha) {
  if (x.rows() == 0) throw Error(ErrorCode::kEmptySubset, "no rows to fit");
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ridge alpha must be > 0");
  }
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const MatrixXd xc = x.rowwise() - x_mean;
  const VectorXd yc = y.array() - y_mean;
  MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += alpha;
  Eigen::LDLT<MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error(ErrorCode::kSingularSystem, "ridge normal equations singular");
  }
  LinearModel m;
  m.coef = ldlt.solve(xc.transpose() * yc);
  if (!m.coef.allFinite()) {
    throw Error(ErrorCode::kSingularSystem, "ridge solution not finite");
  }
  m.intercept = y_mean - x_mean.dot(m.coef.transpose());
  return m;
}

LinearModel FitLogistic(const MatrixXd& x, const VectorXd& y, double c,
                        const NewtonOptions& opts) {
  if (x.rows() == 0) throw Error(ErrorCode::kEmptySubset, "no rows to fit");
  if (!(c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "logistic C must be > 0");
  }
  const Index n = x.rows();
  const Index d = x.cols();
  const MatrixXd xa = Augment(x);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double pen = 1.0 / (c * static_cast<double>(n));

  auto objective = [&](const VectorXd& theta) {
    const VectorXd z = xa * theta;
    double f = 0.0;
    for (Index i = 0; i < n; ++i) f += Softplus(z(i)) - y(i) * z(i);
    return f * inv_n + 0.5 * pen * theta.head(d).squaredNorm();
  };

  VectorXd theta = VectorXd::Zero(d + 1);
  double f = objective(theta);
  for (int it = 0; it < opts.max_iter; ++it) {
    const VectorXd z = xa * theta;
    VectorXd p(n), s(n);
    for (Index i = 0; i < n; ++i) {
      p(i) = Sigmoid(z(i));
      s(i) = p(i) * (1.0 - p(i));
    }
    VectorXd grad = xa.transpose() * (p - y) * inv_n;
    grad.head(d) += pen * theta.head(d);
    if (grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) break;

    MatrixXd hess = xa.transpose() * (xa.array().colwise() * s.array()).matrix();
    hess *= inv_n;
    hess.diagonal().head(d).array() += pen;
    hess(d, d) += kInterceptJitter;
    const VectorXd step = hess.ldlt().solve(-grad);
    const double slope = grad.dot(step);
    if (!step.allFinite() || slope >= 0.0) break;

    double t = 1.0;
    VectorXd next;
    double f_next = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next = theta + t * step;
      f_next = objective(next);
      if (f_next <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    theta = std::move(next);
    const double improvement = f - f_next;
    f = f_next;
    if (improvement <= 1e-16 * std::max(1.0, std::abs(f))) break;
  }
  LinearModel m;
  m.coef = theta.head(d);
  m.intercept = theta(d);
  return m;
}

VectorXd SoftmaxModel::Logits(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  return coef * x.transpose() + intercept;
}

SoftmaxModel FitSoftmax(const MatrixXd& x, std::span<const int> labels,
                        int n_classes, double c, const NewtonOptions& opts) {
  if (x.rows() == 0) throw Error(ErrorCode::kEmptySubset, "no rows to fit");
  if (!(c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "logistic C must be > 0");
  }
  if (static_cast<Index>(labels.size()) != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels do not match rows");
  }
  const Index n = x.rows();
  const Index d = x.cols();
  const Index p = d + 1;
  const Index k = n_classes;
  const MatrixXd xa = Augment(x);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double pen = 1.0 / (c * static_cast<double>(n));

  // theta is k x p, row-major by class.
  auto probs = [&](const MatrixXd& theta, double* loss) {
    MatrixXd z = xa * theta.transpose();  // n x k
    double f = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double zmax = z.row(i).maxCoeff();
      double sum = 0.0;
      for (Index a = 0; a < k; ++a) {
        z(i, a) = std::exp(z(i, a) - zmax);
        sum += z(i, a);
      }
      z.row(i) /= sum;
      f += -std::log(std::max(z(i, labels[static_cast<std::size_t>(i)]),
                              1e-300));
    }
    if (loss) {
      *loss = f * inv_n + 0.5 * pen * theta.leftCols(d).squaredNorm();
    }
    return z;
  };

  MatrixXd theta = MatrixXd::Zero(k, p);
  double f = 0.0;
  MatrixXd prob = probs(theta, &f);
  for (int it = 0; it < opts.max_iter; ++it) {
    MatrixXd resid = prob;
    for (Index i = 0; i < n; ++i) resid(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
    MatrixXd grad_m = resid.transpose() * xa * inv_n;  // k x p
    grad_m.leftCols(d) += pen * theta.leftCols(d);
    VectorXd grad(k * p);
    for (Index a = 0; a < k; ++a) grad.segment(a * p, p) = grad_m.row(a).transpose();
    if (grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) break;

    MatrixXd hess = MatrixXd::Zero(k * p, k * p);
    VectorXd s(n);
    for (Index a = 0; a < k; ++a) {
      for (Index b = a; b < k; ++b) {
        for (Index i = 0; i < n; ++i) {
          s(i) = prob(i, a) * ((a == b ? 1.0 : 0.0) - prob(i, b));
        }
        MatrixXd block =
            xa.transpose() * (xa.array().colwise() * s.array()).matrix();
        block *= inv_n;
        hess.block(a * p, b * p, p, p) = block;
        if (a != b) hess.block(b * p, a * p, p, p) = block.transpose();
      }
      hess.diagonal().segment(a * p, d).array() += pen;
      hess(a * p + d, a * p + d) += kInterceptJitter;
    }
    const VectorXd step = hess.ldlt().solve(-grad);
    const double slope = grad.dot(step);
    if (!step.allFinite() || slope >= 0.0) break;

    double t = 1.0;
    MatrixXd next;
    MatrixXd next_prob;
    double f_next = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next = theta;
      for (Index a = 0; a < k; ++a) {
        next.row(a) += t * step.segment(a * p, p).transpose();
      }
      next_prob = probs(next, &f_next);
      if (f_next <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    theta = std::move(next);
    prob = std::move(next_prob);
    const double improvement = f - f_next;
    f = f_next;
    if (improvement <= 1e-16 * std::max(1.0, std::abs(f))) break;
  }
  SoftmaxModel m;
  m.coef = theta.leftCols(d);
  m.intercept = theta.col(d);
  return m;
}

}  // namespace ieoe
