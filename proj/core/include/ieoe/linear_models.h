#ifndef IEOE_LINEAR_MODELS_H_
#define IEOE_LINEAR_MODELS_H_

#include <span>

#include <Eigen/Dense>

namespace ieoe {

struct LinearModel {
  Eigen::VectorXd coef;
  double intercept = 0.0;

  double Score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return x.dot(coef.transpose()) + intercept;
  }
};

// Ridge regression with an unpenalized intercept: centers X and y, then
// solves (Xc'Xc + alpha I) beta = Xc'yc. Throws kSingularSystem when the
// factorization fails.
LinearModel FitRidge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     double alpha);

struct NewtonOptions {
  int max_iter = 10000;
  double grad_tol = 1e-8;
};

// L2-regularized logistic regression, sklearn's parameterization
// 0.5 |w|^2 + C sum_i logloss_i with an unpenalized intercept. Targets may
// be soft labels in [0, 1].
LinearModel FitLogistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        double c, const NewtonOptions& opts = {});

struct SoftmaxModel {
  Eigen::MatrixXd coef;       // n_classes x d
  Eigen::VectorXd intercept;  // n_classes

  // Class logits for one row.
  Eigen::VectorXd Logits(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

// Multinomial logistic regression (all classes parameterized, L2 on the
// coefficients, intercepts unpenalized).
SoftmaxModel FitSoftmax(const Eigen::MatrixXd& x, std::span<const int> labels,
                        int n_classes, double c,
                        const NewtonOptions& opts = {});

double Sigmoid(double z);

}  // namespace ieoe

#endif  // IEOE_LINEAR_MODELS_H_
