#include "molcap/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "molcap/rng.hpp"

namespace molcap {

int Trajectory::bound_count(std::size_t t) const { return std::popcount(outputs.at(t)); }

namespace {

std::uint64_t stationary_start(const DiscreteDist& dist, const ReceptorParams& params,
                               RandomStream& rng) {
  const int n = params.n_receptors;
  const bool degenerate = std::all_of(dist.atoms().begin(), dist.atoms().end(),
                                      [](double x) { return x == 0.0; });
  if (degenerate) return 0;
  const StationaryDist pi = stationary_distribution(lumped_kernel(dist, params));
  double u = rng.uniform();
  int count = n;
  for (int b = 0; b <= n; ++b) {
    u -= std::max(pi.pi_count[b], 0.0);
    if (u < 0.0) {
      count = b;
      break;
    }
  }
  // Exchangeability: the bound receptors form a uniformly random subset of size `count`.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t bits = 0;
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
    bits |= std::uint64_t{1} << idx[i];
  }
  return bits;
}

struct TransitionCounts {
  int n = 1;
  std::vector<double> bins;  // (b, N₂, N₃) flattened, each axis of size n + 1
  double bound_sum = 0.0;    // Σ b over transition origins
  double transitions = 0.0;

  explicit TransitionCounts(int n_receptors)
      : n(n_receptors), bins(static_cast<std::size_t>(n_receptors + 1) * (n_receptors + 1) *
                                 (n_receptors + 1),
                             0.0) {}

  std::size_t index(int b, int n2, int n3) const {
    return (static_cast<std::size_t>(b) * (n + 1) + n2) * (n + 1) + n3;
  }

  void add(std::uint64_t y0, std::uint64_t y1) {
    const int b = std::popcount(y0);
    const int n2 = std::popcount(~y0 & y1);
    const int n3 = std::popcount(y0 & ~y1);
    bins[index(b, n2, n3)] += 1.0;
    bound_sum += b;
    transitions += 1.0;
  }

  TransitionCounts& operator+=(const TransitionCounts& o) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += o.bins[i];
    bound_sum += o.bound_sum;
    transitions += o.transitions;
    return *this;
  }
};

double log2_binomial(int n, int k) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

struct PlugIn {
  double h_past;
  double h_input_past;
  double bound_fraction;
};

PlugIn plug_in(const TransitionCounts& c, double h2_beta, double mean_h2_alpha) {
  const int n = c.n;
  double h = 0.0;
  for (int b = 0; b <= n; ++b) {
    double row = 0.0;
    for (int n2 = 0; n2 <= n - b; ++n2) {
      for (int n3 = 0; n3 <= b; ++n3) row += c.bins[c.index(b, n2, n3)];
    }
    if (row == 0.0) continue;
    for (int n2 = 0; n2 <= n - b; ++n2) {
      for (int n3 = 0; n3 <= b; ++n3) {
        const double k = c.bins[c.index(b, n2, n3)];
        if (k == 0.0) continue;
        // Each of the C(N−b,N₂)·C(b,N₃) successors of this type is equally likely.
        const double log_mult = log2_binomial(n - b, n2) + log2_binomial(b, n3);
        h -= (k / c.transitions) * (std::log2(k / row) - log_mult);
      }
    }
  }
  const double p_bound = c.bound_sum / (c.transitions * n);
  return {h, n * (p_bound * h2_beta + (1.0 - p_bound) * mean_h2_alpha), p_bound};
}

std::size_t burn_in(const Trajectory& traj, const EstimatorOptions& options) {
  if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0)) {
    throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
  }
  return static_cast<std::size_t>(options.burn_in_fraction * static_cast<double>(traj.steps()));
}

}  // namespace

Trajectory simulate_trajectory(const DiscreteDist& dist, const ReceptorParams& params,
                               std::size_t t_steps, std::uint64_t seed, InitialState y0_mode) {
  params.validate();
  dist.check_support(params);
  if (t_steps < 1) throw std::invalid_argument("t_steps must be at least 1");
  const int n = params.n_receptors;

  RandomStream rng(seed, 0);
  Trajectory traj;
  traj.n_receptors = n;
  traj.seed = seed;
  traj.inputs.resize(t_steps);
  traj.outputs.resize(t_steps + 1);

  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.weights().begin(), dist.weights().end(), cdf.begin());
  std::vector<double> alphas(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) alphas[k] = alpha_unchecked(dist.atoms()[k], params);

  std::uint64_t y = y0_mode == InitialState::StationarySample ? stationary_start(dist, params, rng)
                                                              : 0;
  traj.outputs[0] = y;
  const double beta = params.beta;
  for (std::size_t t = 0; t < t_steps; ++t) {
    const double u = rng.uniform() * cdf.back();
    const auto k = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    traj.inputs[t] = dist.atoms()[k];
    const double a = alphas[k];
    std::uint64_t next = 0;
    for (int j = 0; j < n; ++j) {
      const bool bound = (y >> j) & 1U;
      const double v = rng.uniform();
      const bool next_bound = bound ? !(v < beta) : (v < a);
      if (next_bound) next |= std::uint64_t{1} << j;
    }
    y = next;
    traj.outputs[t + 1] = y;
  }
  return traj;
}

std::vector<double> empirical_stationary(const Trajectory& traj, const EstimatorOptions& options) {
  const std::size_t start = burn_in(traj, options);
  std::vector<double> hist(traj.n_receptors + 1, 0.0);
  for (std::size_t t = start; t < traj.outputs.size(); ++t) hist[std::popcount(traj.outputs[t])] += 1.0;
  const double total = static_cast<double>(traj.outputs.size() - start);
  for (double& h : hist) h /= total;
  return hist;
}

Eigen::MatrixXd empirical_kernel(const Trajectory& traj, const EstimatorOptions& options) {
  const int n = traj.n_receptors;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (std::size_t t = burn_in(traj, options); t < traj.steps(); ++t) {
    counts(std::popcount(traj.outputs[t]), std::popcount(traj.outputs[t + 1])) += 1.0;
  }
  for (int b = 0; b <= n; ++b) {
    const double row = counts.row(b).sum();
    if (row > 0.0) counts.row(b) /= row;
  }
  return counts;
}

RateEstimate empirical_rate(const Trajectory& traj, const DiscreteDist& dist,
                            const ReceptorParams& params, const EstimatorOptions& options) {
  params.validate();
  if (traj.n_receptors != params.n_receptors) {
    throw std::invalid_argument("trajectory and parameters disagree on N");
  }
  const int n = params.n_receptors;
  const std::size_t start = burn_in(traj, options);
  const std::size_t total = traj.steps() - start;
  if (total < 2) throw std::invalid_argument("trajectory too short after burn-in");

  const double h2_beta = binary_entropy(params.beta);
  const double mean_h2 = dist.expectation(
      [&](double x) { return binary_entropy_unchecked(alpha(x, params)); });

  const std::size_t block =
      options.block_length > 0
          ? options.block_length
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(total))));
  const std::size_t n_blocks = std::max<std::size_t>(1, total / block);

  std::vector<TransitionCounts> blocks(n_blocks, TransitionCounts(n));
  TransitionCounts all(n);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t t = start + i;
    const std::size_t blk = std::min(i / block, n_blocks - 1);
    blocks[blk].add(traj.outputs[t], traj.outputs[t + 1]);
  }
  for (const auto& b : blocks) all += b;

  const PlugIn full = plug_in(all, h2_beta, mean_h2);
  RateEstimate est;
  est.h_output_given_past = full.h_past;
  est.h_output_given_input_and_past = full.h_input_past;
  est.rate = full.h_past - full.h_input_past;
  est.bound_fraction = full.bound_fraction;
  est.transitions = total;

  for (int b = 0; b <= n; ++b) {
    double row = 0.0;
    for (int n2 = 0; n2 <= n - b; ++n2) {
      for (int n3 = 0; n3 <= b; ++n3) row += all.bins[all.index(b, n2, n3)];
    }
    if (row > 0.0 && row < static_cast<double>(options.min_bin_samples)) est.sparse_bins = true;
  }

  RandomStream rng(traj.seed, 1);
  const int reps = std::max(2, options.bootstrap_resamples);
  double mean = 0.0, m2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    TransitionCounts sample(n);
    for (std::size_t k = 0; k < n_blocks; ++k) sample += blocks[rng.below(n_blocks)];
    const PlugIn p = plug_in(sample, h2_beta, mean_h2);
    const double value = p.h_past - p.h_input_past;
    const double delta = value - mean;
    mean += delta / (r + 1);
    m2 += delta * (value - mean);
  }
  est.std_error = std::sqrt(m2 / (reps - 1));
  // Sparse count rows make the plug-in biased; report doubled error bars rather than a false precision.
  if (est.sparse_bins) est.std_error *= 2.0;
  return est;
}

}  // namespace molcap
