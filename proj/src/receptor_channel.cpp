#include "molcap/receptor_channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "molcap/errors.hpp"

namespace molcap {

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

std::vector<double> alphas_of(const DiscreteDist& dist, const ReceptorParams& params) {
  dist.check_support(params);
  std::vector<double> a(dist.size());
  std::transform(dist.atoms().begin(), dist.atoms().end(), a.begin(),
                 [&](double x) { return alpha_unchecked(x, params); });
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// FullState

FullState::FullState(std::uint64_t bits, int n_receptors) : bits_(bits), n_(n_receptors) {
  if (n_receptors < 1 || n_receptors > 63) throw std::invalid_argument("FullState: N out of range");
  if (bits >> n_receptors) throw std::invalid_argument("FullState: bits exceed N receptors");
}

FullState FullState::encode(std::span<const ReceptorState> states) {
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j] == ReceptorState::Bound) bits |= std::uint64_t{1} << j;
  }
  return FullState(bits, static_cast<int>(states.size()));
}

std::vector<ReceptorState> FullState::decode() const {
  std::vector<ReceptorState> out(n_);
  for (int j = 0; j < n_; ++j) out[j] = bound(j) ? ReceptorState::Bound : ReceptorState::Unbound;
  return out;
}

int FullState::bound_count() const noexcept { return std::popcount(bits_); }

// ---------------------------------------------------------------------------
// Kernel and stationary law

double LumpedKernel::max_row_defect() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    worst = std::max(worst, std::abs(matrix.row(r).sum() - 1.0));
  }
  return worst;
}

double StationaryDist::bound_probability() const {
  const int n = static_cast<int>(pi_count.size()) - 1;
  double s = 0.0;
  for (int b = 1; b <= n; ++b) s += pi_count[b] * b;
  return s / n;
}

double full_transition_prob_alpha(const FullState& y0, const FullState& y1, double a,
                                  double beta) {
  if (y0.size() != y1.size()) throw std::invalid_argument("state sizes differ");
  const int n = y0.size();
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t b0 = y0.bits(), b1 = y1.bits();
  const int n_uu = std::popcount(~b0 & ~b1 & mask);
  const int n_ub = std::popcount(~b0 & b1 & mask);
  const int n_bu = std::popcount(b0 & ~b1 & mask);
  const int n_bb = std::popcount(b0 & b1);
  return std::pow(1.0 - a, n_uu) * std::pow(a, n_ub) * std::pow(beta, n_bu) *
         std::pow(1.0 - beta, n_bb);
}

double full_transition_prob(const FullState& y0, const FullState& y1, double x,
                            const ReceptorParams& params) {
  return full_transition_prob_alpha(y0, y1, alpha(x, params), params.beta);
}

LumpedKernel lumped_kernel(const DiscreteDist& dist, const ReceptorParams& params) {
  params.validate();
  ChannelEvaluator eval(params.n_receptors, params.beta);
  eval.prepare(alphas_of(dist, params), dist.weights());
  return LumpedKernel{eval.kernel()};
}

StationaryDist stationary_distribution(const LumpedKernel& kernel) {
  const Eigen::Index s = kernel.matrix.rows();
  if (s < 2 || kernel.matrix.cols() != s) throw std::invalid_argument("kernel must be square, N ≥ 1");
  if (kernel.matrix(0, 0) >= 1.0) throw DegenerateInputError();

  Eigen::MatrixXd system = kernel.matrix.transpose() - Eigen::MatrixXd::Identity(s, s);
  system.row(s - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s);
  rhs(s - 1) = 1.0;
  const Eigen::VectorXd pi = system.partialPivLu().solve(rhs);

  StationaryDist out;
  out.pi_count.assign(pi.data(), pi.data() + s);
  out.residual = (pi.transpose() * kernel.matrix - pi.transpose()).cwiseAbs().maxCoeff();
  return out;
}

double entropy_output_given_past(const DiscreteDist& dist, const ReceptorParams& params) {
  params.validate();
  ChannelEvaluator eval(params.n_receptors, params.beta);
  return eval.analyze(alphas_of(dist, params), dist.weights()).h_output_given_past;
}

double entropy_output_given_input_and_past(const DiscreteDist& dist,
                                           const ReceptorParams& params) {
  params.validate();
  ChannelEvaluator eval(params.n_receptors, params.beta);
  return eval.analyze(alphas_of(dist, params), dist.weights()).h_output_given_input_and_past;
}

double iid_rate(const DiscreteDist& dist, const ReceptorParams& params) {
  params.validate();
  dist.check_support(params);
  if (dist.is_point_mass()) return 0.0;
  ChannelEvaluator eval(params.n_receptors, params.beta);
  return eval.analyze(alphas_of(dist, params), dist.weights()).rate;
}

double finite_horizon_rate(const DiscreteDist& dist, const ReceptorParams& params, int n_epochs,
                           std::span<const double> p0_count) {
  params.validate();
  const int n = params.n_receptors;
  if (n_epochs < 1) throw std::invalid_argument("n_epochs must be positive");
  if (static_cast<int>(p0_count.size()) != n + 1) {
    throw std::invalid_argument("initial law must have N+1 entries");
  }
  ChannelEvaluator eval(n, params.beta);
  eval.prepare(alphas_of(dist, params), dist.weights());
  const auto& row_entropy = eval.row_entropies();
  const double mean_h2 = eval.mean_h2_alpha();
  const double h2b = binary_entropy_unchecked(params.beta);

  // Mutual information per epoch given Y_{i−1} has count b:
  //   H(Y_i | Y_{i−1}=y) − [b·H₂(β) + (N−b)·E H₂(α(X))].
  Eigen::RowVectorXd p(n + 1);
  for (int b = 0; b <= n; ++b) p(b) = p0_count[b];
  double total = 0.0;
  for (int i = 0; i < n_epochs; ++i) {
    for (int b = 0; b <= n; ++b) {
      total += p(b) * (row_entropy[b] - b * h2b - (n - b) * mean_h2);
    }
    p = p * eval.kernel();
  }
  return total / n_epochs;
}

// ---------------------------------------------------------------------------
// ChannelEvaluator

ChannelEvaluator::ChannelEvaluator(int n_receptors, double beta)
    : n_(n_receptors),
      beta_(beta),
      h2_beta_(binary_entropy(beta)),
      binom_((n_receptors + 1) * (n_receptors + 1), 0.0),
      mixed_moment_((n_receptors + 1) * (n_receptors + 1), 0.0),
      row_entropy_(n_receptors + 1, 0.0),
      kernel_(n_receptors + 1, n_receptors + 1),
      system_(n_receptors + 1, n_receptors + 1),
      rhs_(n_receptors + 1),
      pi_(n_receptors + 1) {
  if (n_receptors < 1) throw DomainError("n_receptors must be positive");
  const int s = n_ + 1;
  for (int r = 0; r <= n_; ++r) {
    binom_[r * s] = 1.0;
    for (int c = 1; c <= r; ++c) {
      binom_[r * s + c] = binom_[(r - 1) * s + c - 1] + (c <= r - 1 ? binom_[(r - 1) * s + c] : 0.0);
    }
  }
}

void ChannelEvaluator::accumulate(std::span<const double> alphas,
                                  std::span<const double> weights) {
  if (alphas.size() != weights.size() || alphas.empty()) {
    throw std::invalid_argument("alphas and weights must be non-empty and equal length");
  }
  const int s = n_ + 1;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::fill(mixed_moment_.begin(), mixed_moment_.end(), 0.0);
  mean_h2_alpha_ = 0.0;
  m1_ = 0.0;
  double pu[64], pb[64];
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double w = weights[k] / total;
    const double a = alphas[k];
    pu[0] = pb[0] = 1.0;
    for (int i = 1; i <= n_; ++i) {
      pu[i] = pu[i - 1] * (1.0 - a);
      pb[i] = pb[i - 1] * a;
    }
    for (int i = 0; i <= n_; ++i) {
      for (int j = 0; i + j <= n_; ++j) mixed_moment_[i * s + j] += w * pu[i] * pb[j];
    }
    mean_h2_alpha_ += w * binary_entropy_unchecked(a);
    m1_ += w * a;
  }
}

void ChannelEvaluator::build_kernel() {
  const int s = n_ + 1;
  double bpow[64], cpow[64];
  bpow[0] = cpow[0] = 1.0;
  for (int i = 1; i <= n_; ++i) {
    bpow[i] = bpow[i - 1] * beta_;
    cpow[i] = cpow[i - 1] * (1.0 - beta_);
  }
  kernel_.setZero();
  for (int b = 0; b <= n_; ++b) {
    const int u = n_ - b;
    // H(Y₁|Y₀=y) factorizes: the unbound block contributes −Σ C(u,N₂) e log e with
    // e = E[(1−α)^{u−N₂} α^{N₂}], and the bound block contributes b·H₂(β).
    double h_unbound = 0.0;
    for (int n2 = 0; n2 <= u; ++n2) {
      const double e = mixed_moment_[(u - n2) * s + n2];
      const double ce = binom_[u * s + n2] * e;
      h_unbound -= binom_[u * s + n2] * xlog2x(e);
      for (int n3 = 0; n3 <= b; ++n3) {
        kernel_(b, b + n2 - n3) += ce * binom_[b * s + n3] * bpow[n3] * cpow[b - n3];
      }
    }
    row_entropy_[b] = h_unbound + b * h2_beta_;
  }
}

void ChannelEvaluator::solve_stationary() {
  if (!(m1_ > 0.0)) throw DegenerateInputError();
  const int s = n_ + 1;
  system_ = kernel_.transpose();
  system_.diagonal().array() -= 1.0;
  system_.row(s - 1).setOnes();
  rhs_.setZero();
  rhs_(s - 1) = 1.0;
  pi_ = system_.partialPivLu().solve(rhs_);
}

void ChannelEvaluator::prepare(std::span<const double> alphas,
                               std::span<const double> weights) {
  accumulate(alphas, weights);
  build_kernel();
}

ChannelAnalysis ChannelEvaluator::analyze(std::span<const double> alphas,
                                          std::span<const double> weights) {
  prepare(alphas, weights);
  solve_stationary();

  ChannelAnalysis out;
  out.kernel.matrix = kernel_;
  out.stationary.pi_count.assign(pi_.data(), pi_.data() + n_ + 1);
  out.stationary.residual =
      (pi_.transpose() * kernel_ - pi_.transpose()).cwiseAbs().maxCoeff();
  double h_past = 0.0;
  for (int b = 0; b <= n_; ++b) h_past += pi_(b) * row_entropy_[b];
  const double p_bound = out.stationary.bound_probability();
  out.h_output_given_past = h_past;
  out.h_output_given_input_and_past =
      n_ * (p_bound * h2_beta_ + (1.0 - p_bound) * mean_h2_alpha_);
  out.rate = out.h_output_given_past - out.h_output_given_input_and_past;
  return out;
}

double ChannelEvaluator::rate(std::span<const double> alphas, std::span<const double> weights) {
  // A single effective binding probability carries no information.
  bool constant = true;
  double first = -1.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    if (first < 0.0) {
      first = alphas[k];
    } else if (alphas[k] != first) {
      constant = false;
      break;
    }
  }
  if (constant) return 0.0;

  accumulate(alphas, weights);
  build_kernel();
  solve_stationary();
  double h_past = 0.0, bound = 0.0;
  for (int b = 0; b <= n_; ++b) {
    h_past += pi_(b) * row_entropy_[b];
    bound += pi_(b) * b;
  }
  const double p_bound = bound / n_;
  return h_past - n_ * (p_bound * h2_beta_ + (1.0 - p_bound) * mean_h2_alpha_);
}

}  // namespace molcap
