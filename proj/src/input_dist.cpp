#include "molcap/input_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "molcap/errors.hpp"

namespace molcap {

DiscreteDist::DiscreteDist(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty() || atoms_.size() != weights_.size()) {
    throw std::invalid_argument("distribution needs equal, non-zero numbers of atoms and weights");
  }
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (!std::isfinite(atoms_[j])) throw std::invalid_argument("atoms must be finite");
    if (j > 0 && !(atoms_[j] > atoms_[j - 1])) {
      throw std::invalid_argument("atoms must be strictly increasing");
    }
    if (!(weights_[j] > 0.0)) throw std::invalid_argument("weights must be positive");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to one (got " + std::to_string(total) + ")");
  }
}

DiscreteDist DiscreteDist::point_mass(double x) { return DiscreteDist({x}, {1.0}); }

DiscreteDist DiscreteDist::normalized(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size()) throw std::invalid_argument("atoms/weights length mismatch");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  std::vector<double> xs, ws;
  for (std::size_t idx : order) {
    if (!(weights[idx] > 0.0)) continue;
    if (!xs.empty() && xs.back() == atoms[idx]) {
      ws.back() += weights[idx];
    } else {
      xs.push_back(atoms[idx]);
      ws.push_back(weights[idx]);
    }
  }
  if (xs.empty()) throw std::invalid_argument("distribution has no positive weight");
  const double total = std::accumulate(ws.begin(), ws.end(), 0.0);
  for (double& w : ws) w /= total;
  return DiscreteDist(std::move(xs), std::move(ws));
}

void DiscreteDist::check_support(const ReceptorParams& params) const {
  for (double x : atoms_) {
    if (!(x >= 0.0 && x <= params.m_max)) {
      throw DomainError("atom " + std::to_string(x) + " outside [0, M]");
    }
  }
}

double DiscreteDist::expectation(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) s += weights_[j] * f(atoms_[j]);
  return s;
}

double binary_entropy_unchecked(double p) noexcept {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  return binary_entropy_unchecked(p);
}

MomentVector moments(const DiscreteDist& dist, const ReceptorParams& params, int order) {
  if (order < 1) throw std::invalid_argument("moment order must be at least 1");
  MomentVector m{std::vector<double>(order, 0.0)};
  for (std::size_t j = 0; j < dist.size(); ++j) {
    const double a = alpha(dist.atoms()[j], params);
    double pw = 1.0;
    for (int i = 0; i < order; ++i) {
      pw *= a;
      m.values[i] += dist.weights()[j] * pw;
    }
  }
  return m;
}

std::vector<TestFunction> moment_functions(const ReceptorParams& params, int order,
                                           bool with_entropy) {
  std::vector<TestFunction> funcs;
  for (int i = 1; i <= order; ++i) {
    funcs.emplace_back([params, i](double x) { return std::pow(alpha_unchecked(x, params), i); });
  }
  if (with_entropy) {
    funcs.emplace_back(
        [params](double x) { return binary_entropy_unchecked(alpha_unchecked(x, params)); });
  }
  return funcs;
}

DiscreteDist reduce_support(const DiscreteDist& dist, std::span<const TestFunction> funcs,
                            const ReduceOptions& options) {
  const std::size_t k = funcs.size();
  if (dist.size() <= k + 1) return dist;

  std::vector<double> xs = dist.atoms();
  std::vector<double> ps = dist.weights();
  // Evaluate every function once per atom; rows follow atoms as they are deleted.
  std::vector<std::vector<double>> values(xs.size(), std::vector<double>(k + 1, 1.0));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) values[j][i] = funcs[i](xs[j]);
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(k + 1);
  const Eigen::Index cols = rows + 1;
  Eigen::MatrixXd a(rows, cols);
  while (xs.size() > k + 1) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = values[c][r];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(cols - 1);

    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double residual = (a * v).cwiseAbs().maxCoeff();
    if (!(residual <= options.null_residual_tol * scale)) {
      throw NumericalRankError("null vector residual " + std::to_string(residual) +
                               " exceeds tolerance");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (v(c) != 0.0) {
        if (v(c) < 0.0) v = -v;
        break;
      }
    }
    if (v.minCoeff() >= 0.0) v = -v;

    double step = std::numeric_limits<double>::infinity();
    Eigen::Index pivot = -1;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (v(c) < 0.0) {
        const double t = -ps[c] / v(c);
        if (t < step) {
          step = t;
          pivot = c;
        }
      }
    }
    for (Eigen::Index c = 0; c < cols; ++c) ps[c] += step * v(c);
    ps[pivot] = 0.0;

    std::size_t keep = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (ps[j] >= options.delete_threshold) {
        if (keep != j) {
          xs[keep] = xs[j];
          ps[keep] = ps[j];
          values[keep] = std::move(values[j]);
        }
        ++keep;
      }
    }
    xs.resize(keep);
    ps.resize(keep);
    values.resize(keep);
  }
  const double total = std::accumulate(ps.begin(), ps.end(), 0.0);
  for (double& p : ps) p /= total;
  return DiscreteDist(std::move(xs), std::move(ps));
}

}  // namespace molcap
