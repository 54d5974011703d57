#pragma once
// Conditional probability estimators: multinomial logistic regression
// (unpenalized, ridge, lasso, elastic net) plus external probability
// ingestion. Reference-class parameterization with class k as reference.
#include <string>
#include <vector>

#include "setlabel/types.hpp"

namespace setlabel {

enum class PenaltyKind { none, ridge, lasso, elastic_net };

struct Penalty {
  PenaltyKind kind = PenaltyKind::none;
  double lambda = 0.0;
  double mix = 0.5;  // elastic net L1 weight; lasso = 1, ridge = 0

  static Penalty none() { return {}; }
  static Penalty ridge(double lambda) { return {PenaltyKind::ridge, lambda, 0.0}; }
  static Penalty lasso(double lambda) { return {PenaltyKind::lasso, lambda, 1.0}; }
  static Penalty elastic_net(double lambda, double mix) {
    return {PenaltyKind::elastic_net, lambda, mix};
  }
};

struct OptConfig {
  double tol = 1e-8;      // gradient (or KKT residual) max-norm
  int max_iter = 500;
  bool require_convergence = false;  // throw NonConvergence instead of flagging
};

struct FitMeta {
  int iterations = 0;
  double objective = 0.0;  // mean NLL + lambda * penalty at the solution
  double grad_norm = 0.0;  // final gradient / KKT residual max-norm
  bool converged = false;
  std::vector<double> objective_trace;  // objective after each accepted step
};

struct MultinomialModel {
  int k = 0;
  int p = 0;
  Eigen::MatrixXd coef;  // (k-1) x (p+1); column 0 = intercept; class k = reference
  Penalty penalty;
  FitMeta fit_meta;
};

// Maximizes the penalized multinomial log-likelihood. Newton with step
// halving for none/ridge; proximal gradient (ISTA with backtracking) for
// lasso/elastic net. Penalized fits standardize features internally and
// report coefficients on the original scale. Throws EmptyClass,
// DegenerateDesign (constant column or n <= p without penalty), and
// NonConvergence when opt.require_convergence is set.
MultinomialModel fit_multinomial(const LabeledDataset& ds, const LabelSpace& space,
                                 const Penalty& penalty = Penalty::none(),
                                 const OptConfig& opt = {});

// Row-stochastic softmax probabilities; throws DimensionMismatch when X's
// column count differs from the model's.
ClassProbabilities predict_proba(const MultinomialModel& model, const FeatureMatrix& X);

// Validated external probability matrix: header p1..pK; rows renormalized
// only when within 1e-6 of summing to 1, otherwise RowSumError.
ClassProbabilities ingest_probabilities(const std::string& path, const LabelSpace& space);

// Exposed for gradient checks and tests. The objective is the mean negative
// log-likelihood plus the full penalty term; the gradient covers the smooth
// components only (log-likelihood and any L2 part), since the L1 part is
// handled by the proximal operator and has no gradient at zero.
double multinomial_objective(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& X,
                             const std::vector<int>& labels, int k,
                             const Penalty& penalty = Penalty::none());
Eigen::MatrixXd multinomial_gradient(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& X,
                                     const std::vector<int>& labels, int k,
                                     const Penalty& penalty = Penalty::none());

}  // namespace setlabel
