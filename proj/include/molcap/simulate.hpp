#pragma once

#include <cstdint>
#include <vector>

#include "molcap/input_dist.hpp"
#include "molcap/receptor_channel.hpp"
#include "molcap/receptor_params.hpp"

namespace molcap {

enum class InitialState { AllUnbound, StationarySample };

/// One realization of the channel: T inputs x₁..x_T and T + 1 outputs y₀..y_T.
struct Trajectory {
  std::vector<double> inputs;
  std::vector<std::uint64_t> outputs;  ///< FullState bit patterns
  int n_receptors = 1;
  std::uint64_t seed = 0;

  std::size_t steps() const noexcept { return inputs.size(); }
  int bound_count(std::size_t t) const;
};

/// Draws x_t i.i.d. from `dist`; each bound receptor unbinds w.p. β, each unbound one binds w.p. α(x_t).
Trajectory simulate_trajectory(const DiscreteDist& dist, const ReceptorParams& params,
                               std::size_t t_steps, std::uint64_t seed, InitialState y0_mode);

struct EstimatorOptions {
  double burn_in_fraction = 0.1;
  int bootstrap_resamples = 32;
  std::size_t block_length = 0;     ///< 0 selects ⌊√T⌋
  std::size_t min_bin_samples = 30; ///< fewer transitions out of a visited count flags sparsity
};

/// Normalized histogram of bound counts over y after discarding the burn-in prefix.
std::vector<double> empirical_stationary(const Trajectory& traj,
                                         const EstimatorOptions& options = {});

/// Empirical lumped transition matrix (row-normalized pair counts after burn-in).
Eigen::MatrixXd empirical_kernel(const Trajectory& traj, const EstimatorOptions& options = {});

struct RateEstimate {
  double rate = 0.0;              ///< bits per epoch
  double std_error = 0.0;         ///< block-bootstrap standard error
  double h_output_given_past = 0.0;
  double h_output_given_input_and_past = 0.0;
  double bound_fraction = 0.0;    ///< π̂₁(B)
  std::size_t transitions = 0;
  bool sparse_bins = false;       ///< set when some visited count had too few transitions
};

/// Plug-in rate estimate. H(Y₁|Y₀) is estimated from transition-type counts
/// (b, N₂, N₃) with the exact multiplicity C(N−b,N₂)·C(b,N₃) of equally likely
/// full-state successors, and H(Y₁|X₁,Y₀) from π̂₁(B) and the known E[H₂(α(X))].
RateEstimate empirical_rate(const Trajectory& traj, const DiscreteDist& dist,
                            const ReceptorParams& params, const EstimatorOptions& options = {});

}  // namespace molcap
