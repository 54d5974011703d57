#include "setlabel/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "setlabel/io.hpp"

namespace setlabel {
namespace {

// Design matrix with a leading intercept column.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xt(X.rows(), X.cols() + 1);
  Xt.col(0).setOnes();
  Xt.rightCols(X.cols()) = X;
  return Xt;
}

// Softmax probabilities (n x k) for coef (k-1) x (p+1) against X with
// intercept column already present.
Eigen::MatrixXd softmax_probs(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& Xt) {
  const long n = Xt.rows();
  const long km1 = coef.rows();
  Eigen::MatrixXd eta = Xt * coef.transpose();  // n x (k-1)
  Eigen::MatrixXd probs(n, km1 + 1);
  for (long i = 0; i < n; ++i) {
    double m = 0.0;  // reference class logit
    for (long c = 0; c < km1; ++c) m = std::max(m, eta(i, c));
    double denom = std::exp(-m);
    for (long c = 0; c < km1; ++c) denom += std::exp(eta(i, c) - m);
    for (long c = 0; c < km1; ++c) probs(i, c) = std::exp(eta(i, c) - m) / denom;
    probs(i, km1) = std::exp(-m) / denom;
  }
  return probs;
}

double l2_part(const Penalty& pen) {
  switch (pen.kind) {
    case PenaltyKind::ridge: return pen.lambda;
    case PenaltyKind::elastic_net: return pen.lambda * (1.0 - pen.mix);
    default: return 0.0;
  }
}

double l1_part(const Penalty& pen) {
  switch (pen.kind) {
    case PenaltyKind::lasso: return pen.lambda;
    case PenaltyKind::elastic_net: return pen.lambda * pen.mix;
    default: return 0.0;
  }
}

// Mean NLL plus the smooth L2 penalty (intercept column excluded).
double smooth_objective(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& Xt,
                        const std::vector<int>& labels, double l2) {
  const Eigen::MatrixXd probs = softmax_probs(coef, Xt);
  const long n = Xt.rows();
  double nll = 0.0;
  for (long i = 0; i < n; ++i) {
    nll -= std::log(std::max(probs(i, labels[static_cast<std::size_t>(i)] - 1), 1e-300));
  }
  nll /= static_cast<double>(n);
  if (l2 > 0.0) {
    nll += 0.5 * l2 * coef.rightCols(coef.cols() - 1).squaredNorm();
  }
  return nll;
}

Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& Xt,
                                const std::vector<int>& labels, double l2) {
  const Eigen::MatrixXd probs = softmax_probs(coef, Xt);
  const long n = Xt.rows();
  const long km1 = coef.rows();
  Eigen::MatrixXd R = probs.leftCols(km1);  // residual P - Y
  for (long i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y <= km1) R(i, y - 1) -= 1.0;
  }
  Eigen::MatrixXd g = (R.transpose() * Xt) / static_cast<double>(n);
  if (l2 > 0.0) {
    g.rightCols(g.cols() - 1) += l2 * coef.rightCols(coef.cols() - 1);
  }
  return g;
}

// Newton with step halving on the smooth objective (none/ridge).
void fit_newton(Eigen::MatrixXd& coef, const Eigen::MatrixXd& Xt,
                const std::vector<int>& labels, double l2, const OptConfig& opt,
                FitMeta& meta) {
  const long n = Xt.rows();
  const long q = Xt.cols();
  const long km1 = coef.rows();
  const long dim = km1 * q;

  double obj = smooth_objective(coef, Xt, labels, l2);
  meta.objective_trace.push_back(obj);

  for (meta.iterations = 0; meta.iterations < opt.max_iter; ++meta.iterations) {
    const Eigen::MatrixXd probs = softmax_probs(coef, Xt);
    Eigen::MatrixXd grad_m = smooth_gradient(coef, Xt, labels, l2);
    meta.grad_norm = grad_m.cwiseAbs().maxCoeff();
    if (meta.grad_norm <= opt.tol) {
      meta.converged = true;
      return;
    }

    // Full Hessian over flattened (class, column) coordinates.
    Eigen::MatrixXd H(dim, dim);
    for (long a = 0; a < km1; ++a) {
      for (long b = a; b < km1; ++b) {
        Eigen::VectorXd w(n);
        for (long i = 0; i < n; ++i) {
          const double pa = probs(i, a);
          const double pb = probs(i, b);
          w(i) = a == b ? pa * (1.0 - pa) : -pa * pb;
        }
        Eigen::MatrixXd block =
            (Xt.transpose() * w.asDiagonal() * Xt) / static_cast<double>(n);
        if (a == b && l2 > 0.0) {
          for (long j = 1; j < q; ++j) block(j, j) += l2;
        }
        H.block(a * q, b * q, q, q) = block;
        if (a != b) H.block(b * q, a * q, q, q) = block.transpose();
      }
    }

    Eigen::VectorXd g(dim);
    for (long a = 0; a < km1; ++a) g.segment(a * q, q) = grad_m.row(a).transpose();

    Eigen::VectorXd d = Eigen::LDLT<Eigen::MatrixXd>(H).solve(-g);
    if (!d.allFinite() || g.dot(d) >= 0.0) d = -g;  // fall back to steepest descent

    // Backtracking on the objective keeps the trace monotone.
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      Eigen::MatrixXd trial = coef;
      for (long a = 0; a < km1; ++a) {
        trial.row(a) += step * d.segment(a * q, q).transpose();
      }
      const double trial_obj = smooth_objective(trial, Xt, labels, l2);
      if (trial_obj <= obj) {
        coef = std::move(trial);
        obj = trial_obj;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    meta.objective_trace.push_back(obj);
    if (!accepted) return;  // no descent direction left; grad_norm reports why
  }
  // Ran out of iterations: leave converged false with the last gradient norm.
  meta.grad_norm =
      smooth_gradient(coef, Xt, labels, l2).cwiseAbs().maxCoeff();
  meta.converged = meta.grad_norm <= opt.tol;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// ISTA with backtracking (lasso / elastic net). Monotone in the full
// objective; convergence measured by the KKT residual max-norm.
void fit_proximal(Eigen::MatrixXd& coef, const Eigen::MatrixXd& Xt,
                  const std::vector<int>& labels, double l1, double l2,
                  const OptConfig& opt, FitMeta& meta) {
  const long q = Xt.cols();
  const long km1 = coef.rows();

  auto l1_norm = [&](const Eigen::MatrixXd& B) {
    return B.rightCols(q - 1).cwiseAbs().sum();
  };
  auto kkt_residual = [&](const Eigen::MatrixXd& B, const Eigen::MatrixXd& g) {
    double r = 0.0;
    for (long a = 0; a < km1; ++a) {
      r = std::max(r, std::abs(g(a, 0)));  // intercept: plain gradient
      for (long j = 1; j < q; ++j) {
        const double b = B(a, j);
        const double gj = g(a, j);
        const double res = b != 0.0 ? std::abs(gj + l1 * (b > 0 ? 1.0 : -1.0))
                                    : std::max(0.0, std::abs(gj) - l1);
        r = std::max(r, res);
      }
    }
    return r;
  };

  double f = smooth_objective(coef, Xt, labels, l2);
  meta.objective_trace.push_back(f + l1 * l1_norm(coef));
  double step = 1.0;

  for (meta.iterations = 0; meta.iterations < opt.max_iter; ++meta.iterations) {
    const Eigen::MatrixXd g = smooth_gradient(coef, Xt, labels, l2);
    meta.grad_norm = kkt_residual(coef, g);
    if (meta.grad_norm <= opt.tol) {
      meta.converged = true;
      return;
    }

    bool accepted = false;
    for (int half = 0; half < 80; ++half) {
      Eigen::MatrixXd trial = coef - step * g;
      for (long a = 0; a < km1; ++a) {
        for (long j = 1; j < q; ++j) {
          trial(a, j) = soft_threshold(trial(a, j), step * l1);
        }
      }
      const double f_trial = smooth_objective(trial, Xt, labels, l2);
      const Eigen::MatrixXd diff = trial - coef;
      const double quad = f + g.cwiseProduct(diff).sum() +
                          diff.squaredNorm() / (2.0 * step);
      if (f_trial <= quad + 1e-15) {
        coef = std::move(trial);
        f = f_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    meta.objective_trace.push_back(f + l1 * l1_norm(coef));
    if (!accepted) break;
    step *= 1.25;  // cautious growth so the search stays local
  }
  const Eigen::MatrixXd g = smooth_gradient(coef, Xt, labels, l2);
  meta.grad_norm = kkt_residual(coef, g);
  meta.converged = meta.grad_norm <= opt.tol;
}

}  // namespace

double multinomial_objective(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& X,
                             const std::vector<int>& labels, int k,
                             const Penalty& penalty) {
  (void)k;
  const Eigen::MatrixXd Xt = with_intercept(X);
  double obj = smooth_objective(coef, Xt, labels, l2_part(penalty));
  const double l1 = l1_part(penalty);
  if (l1 > 0.0) obj += l1 * coef.rightCols(coef.cols() - 1).cwiseAbs().sum();
  return obj;
}

Eigen::MatrixXd multinomial_gradient(const Eigen::MatrixXd& coef, const Eigen::MatrixXd& X,
                                     const std::vector<int>& labels, int k,
                                     const Penalty& penalty) {
  (void)k;
  return smooth_gradient(coef, with_intercept(X), labels, l2_part(penalty));
}

MultinomialModel fit_multinomial(const LabeledDataset& ds, const LabelSpace& space,
                                 const Penalty& penalty, const OptConfig& opt) {
  const long n = ds.features.n();
  const long p = ds.features.p();
  const int k = space.k;
  if (static_cast<long>(ds.labels.size()) != n) {
    throw DimensionMismatch("fit_multinomial: labels length != feature rows");
  }

  std::vector<long> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    const int y = ds.labels[i];
    if (y < 1 || y > k) {
      throw LabelOutOfRange("fit_multinomial: label " + std::to_string(y) +
                            " at row " + std::to_string(i));
    }
    ++counts[static_cast<std::size_t>(y - 1)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw EmptyClass("fit_multinomial: class " + std::to_string(c + 1) +
                       " has no observations");
    }
  }

  const bool penalized = penalty.kind != PenaltyKind::none && penalty.lambda > 0.0;
  if (!penalized) {
    if (n <= p) {
      throw DegenerateDesign("fit_multinomial: n <= p requires a penalty (n=" +
                             std::to_string(n) + ", p=" + std::to_string(p) + ")");
    }
    for (long j = 0; j < p; ++j) {
      const double mn = ds.features.values.col(j).minCoeff();
      const double mx = ds.features.values.col(j).maxCoeff();
      if (mn == mx) {
        throw DegenerateDesign("fit_multinomial: column " + std::to_string(j + 1) +
                               " is constant; unpenalized fit is unidentified");
      }
    }
  }

  // Penalized fits run on standardized features (population sd); coefficients
  // are mapped back to the original scale below.
  Eigen::MatrixXd X = ds.features.values;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd sd = Eigen::VectorXd::Ones(p);
  if (penalized) {
    for (long j = 0; j < p; ++j) {
      mu(j) = X.col(j).mean();
      const double var = (X.col(j).array() - mu(j)).square().mean();
      sd(j) = var > 0.0 ? std::sqrt(var) : 1.0;
      X.col(j) = (X.col(j).array() - mu(j)) / sd(j);
    }
  }
  const Eigen::MatrixXd Xt = with_intercept(X);

  MultinomialModel model;
  model.k = k;
  model.p = static_cast<int>(p);
  model.penalty = penalty;
  model.coef = Eigen::MatrixXd::Zero(k - 1, p + 1);

  const double l1 = l1_part(penalty);
  const double l2 = l2_part(penalty);
  if (l1 > 0.0) {
    fit_proximal(model.coef, Xt, ds.labels, l1, l2, opt, model.fit_meta);
  } else {
    fit_newton(model.coef, Xt, ds.labels, l2, opt, model.fit_meta);
  }

  model.fit_meta.objective =
      smooth_objective(model.coef, Xt, ds.labels, l2) +
      (l1 > 0.0 ? l1 * model.coef.rightCols(p).cwiseAbs().sum() : 0.0);

  if (penalized) {
    for (long a = 0; a < k - 1; ++a) {
      double shift = 0.0;
      for (long j = 0; j < p; ++j) {
        const double orig = model.coef(a, j + 1) / sd(j);
        shift += orig * mu(j);
        model.coef(a, j + 1) = orig;
      }
      model.coef(a, 0) -= shift;
    }
  }

  if (!model.fit_meta.converged && opt.require_convergence) {
    throw NonConvergence("fit_multinomial: no convergence after " +
                         std::to_string(model.fit_meta.iterations) +
                         " iterations (residual " +
                         std::to_string(model.fit_meta.grad_norm) + ")");
  }
  return model;
}

ClassProbabilities predict_proba(const MultinomialModel& model, const FeatureMatrix& X) {
  if (X.p() != model.p) {
    throw DimensionMismatch("predict_proba: feature count " + std::to_string(X.p()) +
                            " != model's " + std::to_string(model.p));
  }
  ClassProbabilities probs;
  probs.p = softmax_probs(model.coef, with_intercept(X.values));
  return probs;
}

ClassProbabilities ingest_probabilities(const std::string& path, const LabelSpace& space) {
  ClassProbabilities probs = io::read_probabilities(path, space.k);
  for (long i = 0; i < probs.n(); ++i) {
    double sum = 0.0;
    for (int c = 0; c < probs.k(); ++c) {
      const double v = probs.p(i, c);
      if (std::isnan(v) || v < -1e-9 || v > 1.0 + 1e-9) {
        throw RowSumError("ingest_probabilities: row " + std::to_string(i) +
                          " entry outside [0,1]: " + std::to_string(v));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw RowSumError("ingest_probabilities: row " + std::to_string(i) +
                        " sums to " + std::to_string(sum) +
                        " (renormalization tolerance 1e-6)");
    }
    for (int c = 0; c < probs.k(); ++c) probs.p(i, c) /= sum;
  }
  validate_probabilities(probs);
  return probs;
}

}  // namespace setlabel
