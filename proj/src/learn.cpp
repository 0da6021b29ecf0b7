// Copyright 2026 The aesfeat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aes/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "aes/errors.hpp"

namespace aes {
namespace {

constexpr double kTau = 1e-12;
// Above this many data rows the kernel is computed row by row instead of
// being cached as a full Gram matrix.
constexpr std::size_t kGramLimit = 6000;

std::size_t default_max_iterations(std::size_t l) {
  return std::max<std::size_t>(10'000'000, 100 * l);
}

bool in_up(double y, double b, double C) { return (y > 0 && b < C) || (y < 0 && b > 0); }
bool in_low(double y, double b, double C) { return (y > 0 && b > 0) || (y < 0 && b < C); }

// Kernel row provider: either a view into a precomputed Gram matrix or two
// scratch buffers filled on demand.
class KernelRows {
 public:
  KernelRows(const Matrix* gram, const Matrix* X) : gram_(gram), X_(X) {
    const std::size_t n = gram ? gram->rows() : X->rows();
    diag_.resize(n);
    for (std::size_t r = 0; r < n; ++r) diag_[r] = gram ? (*gram)(r, r) : dot(X->row(r), X->row(r));
    if (!gram) {
      buf_[0].resize(n);
      buf_[1].resize(n);
    }
  }

  std::span<const double> row(std::size_t r, int slot) {
    if (gram_) return gram_->row(r);
    if (cached_[slot] != r) {
      auto xr = X_->row(r);
      for (std::size_t s = 0; s < diag_.size(); ++s) buf_[slot][s] = dot(xr, X_->row(s));
      cached_[slot] = r;
    }
    return buf_[slot];
  }

  double diag(std::size_t r) const { return diag_[r]; }

 private:
  const Matrix* gram_;
  const Matrix* X_;
  std::vector<double> diag_;
  std::vector<double> buf_[2];
  std::size_t cached_[2] = {std::numeric_limits<std::size_t>::max(),
                            std::numeric_limits<std::size_t>::max()};
};

double compute_rho(const DualProblem& P, std::span<const double> beta, std::span<const double> G) {
  double ub = std::numeric_limits<double>::infinity();
  double lb = -ub;
  double sum_free = 0;
  std::size_t nr_free = 0;
  for (std::size_t t = 0; t < beta.size(); ++t) {
    const double yG = P.y[t] * G[t];
    if (beta[t] >= P.C) {
      if (P.y[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (beta[t] <= 0) {
      if (P.y[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++nr_free;
      sum_free += yG;
    }
  }
  if (nr_free > 0) return sum_free / static_cast<double>(nr_free);
  if (std::isinf(ub) && std::isinf(lb)) return 0.0;
  if (std::isinf(ub)) return lb;
  if (std::isinf(lb)) return ub;
  return (ub + lb) / 2;
}

// Upper bound on f(beta) - f* from weak duality: for any multiplier nu of
// the equality constraint, f* >= f(beta) - G'beta + C * sum_t min(0, G_t + nu y_t).
// The bound is convex and piecewise linear in nu, so its minimum sits at one
// of the breakpoints nu = -y_t G_t.
double duality_gap_bound(const DualProblem& P, std::span<const double> beta,
                         std::span<const double> G) {
  const std::size_t l = beta.size();
  double gb = 0;
  std::vector<double> up, down;  // breakpoints of y = +1 and y = -1 terms
  for (std::size_t t = 0; t < l; ++t) {
    gb += G[t] * beta[t];
    (P.y[t] > 0 ? up : down).push_back(-P.y[t] * G[t]);
  }
  std::sort(up.begin(), up.end());
  std::sort(down.begin(), down.end());
  // up terms:   C * max(0, b - nu);  down terms: C * max(0, nu - b).
  std::vector<double> up_suffix(up.size() + 1, 0.0), down_prefix(down.size() + 1, 0.0);
  for (std::size_t k = up.size(); k-- > 0;) up_suffix[k] = up_suffix[k + 1] + up[k];
  for (std::size_t k = 0; k < down.size(); ++k) down_prefix[k + 1] = down_prefix[k] + down[k];
  auto penalty = [&](double nu) {
    const auto a = static_cast<std::size_t>(std::upper_bound(up.begin(), up.end(), nu) - up.begin());
    const auto b = static_cast<std::size_t>(std::lower_bound(down.begin(), down.end(), nu) - down.begin());
    const double above = up_suffix[a] - nu * static_cast<double>(up.size() - a);
    const double below = nu * static_cast<double>(b) - down_prefix[b];
    return P.C * (above + below);
  };
  double best = std::numeric_limits<double>::infinity();
  for (double nu : up) best = std::min(best, penalty(nu));
  for (double nu : down) best = std::min(best, penalty(nu));
  if (up.empty() || down.empty()) best = 0;  // the penalty vanishes at one end
  return std::max(0.0, gb + best);
}

DualSolution solve_with(const DualProblem& P, KernelRows& K, double tol, double gap_tol,
                        std::size_t max_iter) {
  const std::size_t l = P.y.size();
  const double C = P.C;
  if (max_iter == 0) max_iter = default_max_iterations(l);
  DualSolution sol;
  sol.beta.assign(l, 0.0);
  sol.gradient = P.p;
  auto& beta = sol.beta;
  auto& G = sol.gradient;

  while (true) {
    // Working-set selection.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (!in_up(P.y[t], beta[t], C)) continue;
      const double v = -P.y[t] * G[t];
      if (v >= gmax) {
        gmax = v;
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = l;
    std::span<const double> Ki;
    if (i < l) Ki = K.row(P.row[i], 0);
    for (std::size_t t = 0; t < l; ++t) {
      if (!in_low(P.y[t], beta[t], C)) continue;
      const double v = P.y[t] * G[t];
      gmax2 = std::max(gmax2, v);
      if (i == l) continue;
      const double grad_diff = gmax + v;
      if (grad_diff <= 0) continue;
      double quad = K.diag(P.row[i]) + K.diag(P.row[t]) - 2.0 * Ki[P.row[t]];
      if (quad <= 0) quad = kTau;
      const double obj = -(grad_diff * grad_diff) / quad;
      if (obj <= best) {
        best = obj;
        j = t;
      }
    }
    if (i == l || j == l) {
      sol.converged = true;
      break;
    }
    if (gmax + gmax2 < tol) {
      // KKT-optimal at this threshold; also require the certified objective
      // gap, tightening the threshold until it holds.
      sol.gap = duality_gap_bound(P, beta, G);
      if (sol.gap <= gap_tol || tol < 1e-14) {
        sol.converged = true;
        break;
      }
      tol *= 0.1;
      continue;
    }
    if (sol.iterations >= max_iter) break;
    ++sol.iterations;

    auto Kj = K.row(P.row[j], 1);
    if (i < l) Ki = K.row(P.row[i], 0);
    const double yi = P.y[i], yj = P.y[j];
    const double old_i = beta[i], old_j = beta[j];
    double quad = K.diag(P.row[i]) + K.diag(P.row[j]) - 2.0 * Ki[P.row[j]];
    if (quad <= 0) quad = kTau;
    if (yi != yj) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = beta[i] - beta[j];
      beta[i] += delta;
      beta[j] += delta;
      if (diff > 0) {
        if (beta[j] < 0) {
          beta[j] = 0;
          beta[i] = diff;
        }
      } else if (beta[i] < 0) {
        beta[i] = 0;
        beta[j] = -diff;
      }
      if (diff > 0) {
        if (beta[i] > C) {
          beta[i] = C;
          beta[j] = C - diff;
        }
      } else if (beta[j] > C) {
        beta[j] = C;
        beta[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = beta[i] + beta[j];
      beta[i] -= delta;
      beta[j] += delta;
      if (sum > C) {
        if (beta[i] > C) {
          beta[i] = C;
          beta[j] = sum - C;
        }
      } else if (beta[j] < 0) {
        beta[j] = 0;
        beta[i] = sum;
      }
      if (sum > C) {
        if (beta[j] > C) {
          beta[j] = C;
          beta[i] = sum - C;
        }
      } else if (beta[i] < 0) {
        beta[i] = 0;
        beta[j] = sum;
      }
    }
    const double di = (beta[i] - old_i) * yi;
    const double dj = (beta[j] - old_j) * yj;
    for (std::size_t t = 0; t < l; ++t) {
      const std::size_t r = P.row[t];
      G[t] += P.y[t] * (Ki[r] * di + Kj[r] * dj);
    }
  }

  sol.rho = compute_rho(P, beta, G);
  sol.gap = duality_gap_bound(P, beta, G);
  double v = 0;
  for (std::size_t t = 0; t < l; ++t) v += beta[t] * (G[t] + P.p[t]);
  sol.objective = v / 2;
  return sol;
}

std::vector<double> fresh_gradient(const DualProblem& P, const Matrix& gram,
                                   std::span<const double> beta) {
  const std::size_t l = P.y.size();
  std::vector<double> G(P.p.begin(), P.p.end());
  for (std::size_t t = 0; t < l; ++t) {
    double s = 0;
    for (std::size_t u = 0; u < l; ++u) {
      if (beta[u] != 0) s += P.y[u] * beta[u] * gram(P.row[u], P.row[t]);
    }
    G[t] += P.y[t] * s;
  }
  return G;
}

LinearMachine machine_from(const DualProblem& P, const Matrix& X, const DualSolution& sol,
                           const Matrix* gram, double tol) {
  LinearMachine m;
  m.weights.assign(X.cols(), 0.0);
  for (std::size_t t = 0; t < P.y.size(); ++t) {
    if (sol.beta[t] == 0) continue;
    const double coef = P.y[t] * sol.beta[t];
    auto x = X.row(P.row[t]);
    for (std::size_t c = 0; c < X.cols(); ++c) m.weights[c] += coef * x[c];
  }
  m.bias = -sol.rho;
  m.objective = sol.objective;
  m.iterations = sol.iterations;
  m.beta = sol.beta;
  if (gram) {
    m.kkt = kkt_check(P, *gram, sol.beta, sol.rho, tol);
  } else {
    m.kkt.ok = sol.converged;
  }
  return m;
}

LinearMachine train_problem(const Matrix& X, const DualProblem& P, const SmoOptions& opt,
                            Execution exec) {
  if (X.rows() <= kGramLimit) {
    const Matrix gram = gram_matrix(X, exec);
    KernelRows K(&gram, nullptr);
    const DualSolution sol = solve_with(P, K, opt.tolerance, opt.gap_tolerance, opt.max_iterations);
    return machine_from(P, X, sol, &gram, opt.tolerance);
  }
  KernelRows K(nullptr, &X);
  const DualSolution sol = solve_with(P, K, opt.tolerance, opt.gap_tolerance, opt.max_iterations);
  return machine_from(P, X, sol, nullptr, opt.tolerance);
}

constexpr Proficiency kClassOrder[] = {Proficiency::low, Proficiency::medium, Proficiency::high};

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

nlohmann::json machine_json(const LinearMachine& m) {
  return {{"weights", m.weights}, {"bias", m.bias}, {"objective", m.objective},
          {"iterations", m.iterations}};
}

LinearMachine machine_from_json(const nlohmann::json& j) {
  LinearMachine m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.objective = j.value("objective", 0.0);
  m.iterations = j.value("iterations", std::size_t{0});
  m.kkt.ok = true;
  return m;
}

}  // namespace

void SmoOptions::check() const {
  if (!(C > 0) || !std::isfinite(C)) throw ConfigError("C must be positive");
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
  if (!(tolerance > 0) || !std::isfinite(tolerance)) throw ConfigError("tolerance must be positive");
  if (!(gap_tolerance > 0) || !std::isfinite(gap_tolerance)) {
    throw ConfigError("gap tolerance must be positive");
  }
}

DualProblem svc_problem(std::span<const double> labels, double C) {
  DualProblem P;
  P.C = C;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) throw ValidationError("binary labels must be +1 or -1");
    P.y.push_back(labels[i]);
    P.p.push_back(-1.0);
    P.row.push_back(i);
  }
  return P;
}

DualProblem svr_problem(std::span<const double> targets, double C, double epsilon) {
  DualProblem P;
  P.C = C;
  const std::size_t n = targets.size();
  P.y.resize(2 * n);
  P.p.resize(2 * n);
  P.row.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    P.y[i] = 1.0;
    P.p[i] = epsilon - targets[i];
    P.row[i] = i;
    P.y[i + n] = -1.0;
    P.p[i + n] = epsilon + targets[i];
    P.row[i + n] = i;
  }
  return P;
}

Matrix gram_matrix(const Matrix& X, Execution exec) {
  const std::size_t n = X.rows();
  Matrix K(n, n);
  for_each_index(n, exec, [&](std::size_t r) {
    auto xr = X.row(r);
    for (std::size_t s = 0; s < n; ++s) K(r, s) = dot(xr, X.row(s));
  });
  return K;
}

DualSolution solve_dual(const DualProblem& problem, const Matrix& gram, double tolerance,
                        double gap_tolerance, std::size_t max_iterations) {
  KernelRows K(&gram, nullptr);
  return solve_with(problem, K, tolerance, gap_tolerance, max_iterations);
}

double dual_objective(const DualProblem& problem, const Matrix& gram,
                      std::span<const double> beta) {
  const std::vector<double> G = fresh_gradient(problem, gram, beta);
  double v = 0;
  for (std::size_t t = 0; t < beta.size(); ++t) v += beta[t] * (G[t] + problem.p[t]);
  return v / 2;
}

KktReport kkt_check(const DualProblem& problem, const Matrix& gram,
                    std::span<const double> beta, double rho, double tolerance) {
  const auto& P = problem;
  KktReport r;
  const std::vector<double> G = fresh_gradient(P, gram, beta);
  double m = -std::numeric_limits<double>::infinity();
  double M = std::numeric_limits<double>::infinity();
  double eq = 0;
  for (std::size_t t = 0; t < beta.size(); ++t) {
    r.bound_violation = std::max({r.bound_violation, -beta[t], beta[t] - P.C});
    eq += P.y[t] * beta[t];
    const double yG = P.y[t] * G[t];
    if (in_up(P.y[t], beta[t], P.C)) {
      m = std::max(m, -yG);
      r.slackness_residual = std::max(r.slackness_residual, rho - yG);
    }
    if (in_low(P.y[t], beta[t], P.C)) {
      M = std::min(M, -yG);
      r.slackness_residual = std::max(r.slackness_residual, yG - rho);
    }
  }
  r.equality_residual = std::abs(eq);
  r.max_violation = (std::isinf(m) || std::isinf(M)) ? 0.0 : std::max(0.0, m - M);
  // Slack for the rounding between the solver's incremental gradient and
  // the one recomputed here.
  const double slack = tolerance * (1 + 1e-9) + 1e-12;
  r.ok = r.bound_violation <= 0 && r.equality_residual <= 1e-9 * std::max(1.0, P.C) &&
         r.max_violation <= slack && r.slackness_residual <= slack;
  return r;
}

LinearMachine train_svc(const Matrix& X, std::span<const double> labels, const SmoOptions& opt,
                        Execution exec) {
  opt.check();
  if (labels.size() != X.rows()) throw ValidationError("label count does not match rows");
  bool pos = false, neg = false;
  for (double y : labels) (y > 0 ? pos : neg) = true;
  if (!pos || !neg) throw ValidationError("degenerate model: training data has a single class");
  return train_problem(X, svc_problem(labels, opt.C), opt, exec);
}

LinearMachine train_svr(const Matrix& X, std::span<const double> targets, const SmoOptions& opt,
                        Execution exec) {
  opt.check();
  if (targets.size() != X.rows()) throw ValidationError("target count does not match rows");
  if (X.rows() < 2) throw ValidationError("regression needs at least two rows");
  return train_problem(X, svr_problem(targets, opt.C, opt.epsilon), opt, exec);
}

Proficiency PairwiseClassifier::predict(std::span<const double> x) const {
  std::array<int, kNumClasses> votes{};
  for (const PairwiseMachine& m : machines) {
    const Proficiency winner = m.machine.decision(x) > 0 ? m.first : m.second;
    ++votes[static_cast<std::size_t>(winner)];
  }
  Proficiency best = classes.front();
  for (Proficiency c : classes) {
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

PairwiseClassifier train_pairwise(const Matrix& X, std::span<const Proficiency> labels,
                                  const SmoOptions& opt, Execution exec) {
  opt.check();
  if (labels.size() != X.rows()) throw ValidationError("label count does not match rows");
  PairwiseClassifier clf;
  for (Proficiency c : kClassOrder) {
    if (std::find(labels.begin(), labels.end(), c) != labels.end()) clf.classes.push_back(c);
  }
  if (clf.classes.size() < 2) {
    throw ValidationError("degenerate model: training data has a single class");
  }
  for (std::size_t a = 0; a < clf.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < clf.classes.size(); ++b) {
      clf.machines.push_back({clf.classes[a], clf.classes[b], {}});
    }
  }
  for_each_index(clf.machines.size(), exec, [&](std::size_t k) {
    PairwiseMachine& pm = clf.machines[k];
    std::vector<std::size_t> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == pm.first || labels[i] == pm.second) {
        rows.push_back(i);
        y.push_back(labels[i] == pm.first ? 1.0 : -1.0);
      }
    }
    pm.machine = train_svc(X.select_rows(rows), y, opt, Execution::serial);
  });
  return clf;
}

std::vector<Proficiency> LinearModel::predict_labels(const FeatureMatrix& data) const {
  if (task != Task::classification) throw ConfigError("model was trained for regression");
  const Matrix X = preprocessor.transform(data);
  std::vector<Proficiency> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = classifier.predict(X.row(r));
  return out;
}

std::vector<double> LinearModel::predict_scores(const FeatureMatrix& data) const {
  if (task != Task::regression) throw ConfigError("model was trained for classification");
  const Matrix X = preprocessor.transform(data);
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = regressor.decision(X.row(r));
  return out;
}

nlohmann::json LinearModel::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["task"] = to_string(task);
  j["profile_name"] = preprocessor.profile().name;
  j["preprocessor"] = preprocessor.to_json();
  j["feature_names"] = preprocessor.expanded_names();
  j["hyperparameters"] = {{"C", options.C},
                          {"epsilon", options.epsilon},
                          {"tolerance", options.tolerance},
                          {"gap_tolerance", options.gap_tolerance},
                          {"seed", options.seed}};
  if (task == Task::classification) {
    nlohmann::json classes = nlohmann::json::array();
    for (Proficiency c : classifier.classes) classes.push_back(to_string(c));
    j["classes"] = classes;
    nlohmann::json machines = nlohmann::json::array();
    for (const PairwiseMachine& m : classifier.machines) {
      nlohmann::json mj = machine_json(m.machine);
      mj["first"] = to_string(m.first);
      mj["second"] = to_string(m.second);
      machines.push_back(mj);
    }
    j["machines"] = machines;
  } else {
    j["regressor"] = machine_json(regressor);
  }
  return j;
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  LinearModel m;
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported model format version");
    }
    m.task = parse_task(j.at("task").get<std::string>());
    m.preprocessor = Preprocessor::from_json(j.at("preprocessor"));
    const auto& h = j.at("hyperparameters");
    m.options.C = h.at("C").get<double>();
    m.options.epsilon = h.at("epsilon").get<double>();
    m.options.tolerance = h.at("tolerance").get<double>();
    m.options.gap_tolerance = h.value("gap_tolerance", SmoOptions{}.gap_tolerance);
    m.options.seed = h.at("seed").get<std::uint64_t>();
    auto parse_class = [](const nlohmann::json& v) {
      auto p = parse_proficiency(v.get<std::string>());
      if (!p) throw ValidationError("unknown class in model file");
      return *p;
    };
    const std::size_t dim = m.preprocessor.dimension();
    if (m.task == Task::classification) {
      for (const auto& c : j.at("classes")) m.classifier.classes.push_back(parse_class(c));
      for (const auto& mj : j.at("machines")) {
        PairwiseMachine pm{parse_class(mj.at("first")), parse_class(mj.at("second")),
                           machine_from_json(mj)};
        if (pm.machine.weights.size() != dim) throw ValidationError("weight length mismatch");
        m.classifier.machines.push_back(std::move(pm));
      }
      const std::size_t k = m.classifier.classes.size();
      if (k < 2 || m.classifier.machines.size() != k * (k - 1) / 2) {
        throw ValidationError("model must hold k(k-1)/2 pairwise machines");
      }
    } else {
      m.regressor = machine_from_json(j.at("regressor"));
      if (m.regressor.weights.size() != dim) throw ValidationError("weight length mismatch");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  return m;
}

std::vector<double> regression_targets(const FeatureMatrix& data) {
  std::vector<double> y;
  y.reserve(data.rows.size());
  for (const FeatureVector& v : data.rows) {
    if (v.score) y.push_back(*v.score);
    else if (v.label) y.push_back(static_cast<double>(static_cast<int>(*v.label)));
    else throw ValidationError("essay '" + v.id + "' has neither a score nor a label");
  }
  return y;
}

std::vector<Proficiency> class_labels(const FeatureMatrix& data) {
  std::vector<Proficiency> y;
  y.reserve(data.rows.size());
  for (const FeatureVector& v : data.rows) {
    if (!v.label) throw ValidationError("essay '" + v.id + "' has no label");
    y.push_back(*v.label);
  }
  return y;
}

LinearModel train_classifier(const FeatureMatrix& train, const SmoOptions& opt, Execution exec) {
  if (train.rows.size() < 2) throw ValidationError("training needs at least two rows");
  LinearModel m;
  m.task = Task::classification;
  m.options = opt;
  m.preprocessor = Preprocessor::fit(train);
  m.classifier = train_pairwise(m.preprocessor.transform(train), class_labels(train), opt, exec);
  return m;
}

LinearModel train_regressor(const FeatureMatrix& train, const SmoOptions& opt, Execution exec) {
  if (train.rows.size() < 2) throw ValidationError("training needs at least two rows");
  LinearModel m;
  m.task = Task::regression;
  m.options = opt;
  m.preprocessor = Preprocessor::fit(train);
  m.regressor = train_svr(m.preprocessor.transform(train), regression_targets(train), opt, exec);
  return m;
}

LinearModel train_model(const FeatureMatrix& train, Task task, const SmoOptions& opt,
                        Execution exec) {
  return task == Task::classification ? train_classifier(train, opt, exec)
                                      : train_regressor(train, opt, exec);
}

std::vector<std::size_t> fold_assignment(const FeatureMatrix& data, Task task, std::size_t folds,
                                         std::uint64_t seed) {
  const std::size_t n = data.rows.size();
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (folds > n) {
    throw ConfigError("cannot split " + std::to_string(n) + " rows into " +
                      std::to_string(folds) + " folds");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(n);
  std::size_t deal = 0;
  auto assign = [&](std::vector<std::size_t> idx) {
    shuffle(idx, rng);
    for (std::size_t i : idx) fold[i] = deal++ % folds;
  };
  if (task == Task::classification) {
    const std::vector<Proficiency> y = class_labels(data);
    for (Proficiency c : kClassOrder) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == c) idx.push_back(i);
      }
      assign(std::move(idx));
    }
  } else {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    assign(std::move(idx));
  }
  return fold;
}

CrossValidation cross_validate(const FeatureMatrix& data, Task task, std::size_t folds,
                               std::uint64_t seed, const SmoOptions& opt, Execution exec) {
  opt.check();
  CrossValidation cv;
  cv.assignment = fold_assignment(data, task, folds, seed);
  const std::size_t n = data.rows.size();
  std::vector<Proficiency> gold_labels;
  std::vector<double> gold_scores;
  if (task == Task::classification) {
    gold_labels = class_labels(data);
    cv.predicted_labels.assign(n, Proficiency::low);
  } else {
    gold_scores = regression_targets(data);
    cv.predicted_scores.assign(n, 0.0);
  }
  cv.folds.resize(folds);
  for_each_index(folds, exec, [&](std::size_t f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < n; ++i) (cv.assignment[i] == f ? test_idx : train_idx).push_back(i);
    const FeatureMatrix train = data.subset(train_idx);
    const FeatureMatrix test = data.subset(test_idx);
    const LinearModel model = train_model(train, task, opt, Execution::serial);
    if (task == Task::classification) {
      const auto pred = model.predict_labels(test);
      std::vector<Proficiency> gold;
      for (std::size_t t = 0; t < test_idx.size(); ++t) {
        cv.predicted_labels[test_idx[t]] = pred[t];
        gold.push_back(gold_labels[test_idx[t]]);
      }
      cv.folds[f] = classification_report(pred, gold);
    } else {
      const auto pred = model.predict_scores(test);
      std::vector<double> gold;
      for (std::size_t t = 0; t < test_idx.size(); ++t) {
        cv.predicted_scores[test_idx[t]] = pred[t];
        gold.push_back(gold_scores[test_idx[t]]);
      }
      cv.folds[f] = regression_report(pred, gold);
    }
  });
  cv.pooled = task == Task::classification
                  ? classification_report(cv.predicted_labels, gold_labels)
                  : regression_report(cv.predicted_scores, gold_scores);
  return cv;
}

ReliefData relief_data(const FeatureMatrix& data) {
  ReliefData d;
  d.names = data.profile.features;
  d.categorical.assign(d.names.size(), false);
  std::vector<std::string> prompts, l1s;
  for (const FeatureVector& v : data.rows) {
    prompts.push_back(v.prompt);
    l1s.push_back(v.l1);
  }
  const auto prompt_vocab = build_vocabulary(prompts);
  const auto l1_vocab = build_vocabulary(l1s);
  const bool with_prompt = data.profile.include_prompt;
  const bool with_l1 = data.profile.include_l1;
  if (with_prompt) {
    d.names.push_back("prompt");
    d.categorical.push_back(true);
  }
  if (with_l1) {
    d.names.push_back("l1");
    d.categorical.push_back(true);
  }
  d.X = Matrix(data.rows.size(), d.names.size());
  auto code = [](const std::vector<std::string>& vocab, const std::string& v) {
    return static_cast<double>(std::lower_bound(vocab.begin(), vocab.end(), v) - vocab.begin());
  };
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const FeatureVector& v = data.rows[r];
    std::size_t c = 0;
    for (double x : v.values) d.X(r, c++) = x;
    if (with_prompt) d.X(r, c++) = code(prompt_vocab, v.prompt);
    if (with_l1) d.X(r, c++) = code(l1_vocab, v.l1);
  }
  return d;
}

namespace {

// Per-attribute difference table helper: numeric columns scaled by their
// range, categorical columns compared for equality.
struct DiffTable {
  const ReliefData& data;
  std::vector<double> scale;  // 1 / range, 0 for constant columns

  explicit DiffTable(const ReliefData& d) : data(d), scale(d.X.cols(), 0.0) {
    if (d.categorical.size() != d.X.cols()) throw ValidationError("relief: column kinds mismatch");
    for (std::size_t c = 0; c < d.X.cols(); ++c) {
      if (d.categorical[c] || d.X.rows() == 0) continue;
      double lo = d.X(0, c), hi = d.X(0, c);
      for (std::size_t r = 1; r < d.X.rows(); ++r) {
        lo = std::min(lo, d.X(r, c));
        hi = std::max(hi, d.X(r, c));
      }
      if (hi > lo) scale[c] = 1.0 / (hi - lo);
    }
  }

  double diff(std::size_t c, std::size_t i, std::size_t j) const {
    const double a = data.X(i, c), b = data.X(j, c);
    if (data.categorical[c]) return a == b ? 0.0 : 1.0;
    return std::abs(a - b) * scale[c];
  }

  double distance(std::size_t i, std::size_t j) const {
    double s = 0;
    for (std::size_t c = 0; c < data.X.cols(); ++c) s += diff(c, i, j);
    return s;
  }
};

// The k nearest rows among `candidates` (ascending distance, then index).
std::vector<std::size_t> nearest(std::vector<std::pair<double, std::size_t>> candidates,
                                 std::size_t k) {
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end());
  std::vector<std::size_t> out(take);
  for (std::size_t t = 0; t < take; ++t) out[t] = candidates[t].second;
  return out;
}

void check_relief_size(std::size_t rows, std::size_t k) {
  if (k == 0) throw ConfigError("k-neighbors must be positive");
  if (rows <= k) {
    throw ConfigError("Relief needs more rows (" + std::to_string(rows) + ") than k-neighbors (" +
                      std::to_string(k) + ")");
  }
}

}  // namespace

std::vector<double> relieff_weights(const ReliefData& data, std::span<const Proficiency> labels,
                                    std::size_t k, Execution exec) {
  const std::size_t n = data.X.rows(), d = data.X.cols();
  if (labels.size() != n) throw ValidationError("label count does not match rows");
  check_relief_size(n, k);
  const DiffTable table(data);
  std::array<double, kNumClasses> prior{};
  for (Proficiency c : labels) prior[static_cast<std::size_t>(c)] += 1.0 / static_cast<double>(n);

  Matrix contrib(n, d);
  for_each_index(n, exec, [&](std::size_t i) {
    std::array<std::vector<std::pair<double, std::size_t>>, kNumClasses> by_class;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      by_class[static_cast<std::size_t>(labels[j])].push_back({table.distance(i, j), j});
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    auto row = contrib.row(i);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (by_class[c].empty()) continue;
      const std::vector<std::size_t> nn = nearest(std::move(by_class[c]), k);
      double w;
      if (c == own) {
        w = -1.0;
      } else {
        if (!(1.0 - prior[own] > 0)) continue;
        w = prior[c] / (1.0 - prior[own]);
      }
      w /= static_cast<double>(nn.size());
      for (std::size_t a = 0; a < d; ++a) {
        double s = 0;
        for (std::size_t j : nn) s += table.diff(a, i, j);
        row[a] += w * s;
      }
    }
  });
  std::vector<double> W(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) W[a] += contrib(i, a);
  }
  for (double& w : W) w /= static_cast<double>(n);
  return W;
}

std::vector<double> rrelieff_weights(const ReliefData& data, std::span<const double> targets,
                                     std::size_t k, Execution exec) {
  const std::size_t n = data.X.rows(), d = data.X.cols();
  if (targets.size() != n) throw ValidationError("target count does not match rows");
  check_relief_size(n, k);
  const DiffTable table(data);
  const auto [tmin, tmax] = std::minmax_element(targets.begin(), targets.end());
  const double tscale = *tmax > *tmin ? 1.0 / (*tmax - *tmin) : 0.0;

  // Columns 0..d-1: N_dA, d..2d-1: N_dC&dA, 2d: N_dC.
  Matrix contrib(n, 2 * d + 1);
  for_each_index(n, exec, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.push_back({table.distance(i, j), j});
    }
    const std::vector<std::size_t> nn = nearest(std::move(cand), k);
    const double w = 1.0 / static_cast<double>(nn.size());
    auto row = contrib.row(i);
    for (std::size_t j : nn) {
      const double dc = std::abs(targets[i] - targets[j]) * tscale;
      row[2 * d] += dc * w;
      for (std::size_t a = 0; a < d; ++a) {
        const double da = table.diff(a, i, j);
        row[a] += da * w;
        row[d + a] += dc * da * w;
      }
    }
  });
  std::vector<double> sums(2 * d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < sums.size(); ++c) sums[c] += contrib(i, c);
  }
  const double m = static_cast<double>(n);
  const double ndc = sums[2 * d];
  std::vector<double> W(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    const double first = ndc > 0 ? sums[d + a] / ndc : 0.0;
    const double second = m - ndc > 0 ? (sums[a] - sums[d + a]) / (m - ndc) : 0.0;
    W[a] = first - second;
  }
  return W;
}

FeatureRanking rank_features(std::span<const std::string> names, std::span<const double> weights) {
  if (names.size() != weights.size()) throw ValidationError("name/weight count mismatch");
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  FeatureRanking r;
  for (std::size_t i : order) r.entries.push_back({names[i], weights[i]});
  return r;
}

FeatureRanking relieff(const FeatureMatrix& data, Task task, std::size_t k, Execution exec) {
  const ReliefData rd = relief_data(data);
  const std::vector<double> w = task == Task::classification
                                    ? relieff_weights(rd, class_labels(data), k, exec)
                                    : rrelieff_weights(rd, regression_targets(data), k, exec);
  return rank_features(rd.names, w);
}

std::vector<std::size_t> subsample_balance(std::span<const std::optional<Proficiency>> labels,
                                           std::uint64_t seed) {
  if (labels.empty()) throw ConfigError("balancing needs labelled data");
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) throw ConfigError("balancing needs a label on every essay (row " +
                                      std::to_string(i) + " has none)");
    by_class[static_cast<std::size_t>(*labels[i])].push_back(i);
  }
  std::size_t minority = labels.size();
  for (const auto& v : by_class) {
    if (!v.empty()) minority = std::min(minority, v.size());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (auto& v : by_class) {
    if (v.empty()) continue;
    // Partial Fisher-Yates: the first `minority` slots are a uniform sample.
    for (std::size_t i = 0; i < minority && i + 1 < v.size(); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (v.size() - i));
      std::swap(v[i], v[j]);
    }
    keep.insert(keep.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(minority));
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace aes
