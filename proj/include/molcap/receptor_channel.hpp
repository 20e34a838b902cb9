#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "molcap/input_dist.hpp"
#include "molcap/receptor_params.hpp"

namespace molcap {

enum class ReceptorState : std::uint8_t { Unbound = 0, Bound = 1 };

/// Joint state of N receptors; bit j set means receptor j is bound.
class FullState {
 public:
  FullState(std::uint64_t bits, int n_receptors);

  static FullState encode(std::span<const ReceptorState> states);
  std::vector<ReceptorState> decode() const;

  std::uint64_t bits() const noexcept { return bits_; }
  int size() const noexcept { return n_; }
  bool bound(int j) const noexcept { return (bits_ >> j) & 1U; }
  int bound_count() const noexcept;

  friend bool operator==(const FullState&, const FullState&) = default;

 private:
  std::uint64_t bits_;
  int n_;
};

/// (N+1)×(N+1) transition matrix over bound counts, input-averaged.
struct LumpedKernel {
  Eigen::MatrixXd matrix;

  int n_receptors() const noexcept { return static_cast<int>(matrix.rows()) - 1; }
  double max_row_defect() const;
};

struct StationaryDist {
  std::vector<double> pi_count;  ///< stationary law of the bound count
  double residual = 0.0;         ///< ‖πT − π‖_∞

  /// Stationary probability that a single receptor is bound: Σ_b π(b)·b/N.
  double bound_probability() const;
};

/// (1−α)^{N₁} α^{N₂} β^{N₃} (1−β)^{N₄} for one epoch under fixed input x.
double full_transition_prob(const FullState& y0, const FullState& y1, double x,
                            const ReceptorParams& params);

/// Same product with the binding probability given directly.
double full_transition_prob_alpha(const FullState& y0, const FullState& y1, double a,
                                  double beta);

LumpedKernel lumped_kernel(const DiscreteDist& dist, const ReceptorParams& params);

/// Direct solve of π = πT, Σπ = 1. Throws DegenerateInputError when row 0 never leaves state 0.
StationaryDist stationary_distribution(const LumpedKernel& kernel);

/// H(Y₁|Y₀) in bits over the full 2^N output alphabet, stationary regime.
double entropy_output_given_past(const DiscreteDist& dist, const ReceptorParams& params);

/// H(Y₁|X₁,Y₀) = N[π₁(B)H₂(β) + π₁(U)E H₂(α(X))] in bits, stationary regime.
double entropy_output_given_input_and_past(const DiscreteDist& dist,
                                           const ReceptorParams& params);

/// Stationary i.i.d. information rate H(Y₁|Y₀) − H(Y₁|X₁,Y₀), bits per epoch.
/// Zero for point masses without touching the stationary solve.
double iid_rate(const DiscreteDist& dist, const ReceptorParams& params);

/// (1/n)·I(X^n; Y^n) for a finite horizon started from a bound-count law p0
/// (receptors exchangeable within each count). Converges to iid_rate as n grows.
double finite_horizon_rate(const DiscreteDist& dist, const ReceptorParams& params, int n_epochs,
                           std::span<const double> p0_count);

/// All stationary quantities at once, evaluated from binding probabilities.
struct ChannelAnalysis {
  LumpedKernel kernel;
  StationaryDist stationary;
  double h_output_given_past = 0.0;
  double h_output_given_input_and_past = 0.0;
  double rate = 0.0;
};

/// Works on binding probabilities α_k = α(x_k) with weights p_k. Reusable scratch
/// buffers make repeated evaluation allocation-free; not thread-safe per instance.
class ChannelEvaluator {
 public:
  ChannelEvaluator(int n_receptors, double beta);

  int n_receptors() const noexcept { return n_; }
  double beta() const noexcept { return beta_; }

  ChannelAnalysis analyze(std::span<const double> alphas, std::span<const double> weights);

  /// iid rate only. Weights need not be normalized: they are rescaled to sum one.
  double rate(std::span<const double> alphas, std::span<const double> weights);

  /// Builds the kernel and row entropies without solving for π (valid for degenerate inputs).
  void prepare(std::span<const double> alphas, std::span<const double> weights);
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
  double mean_h2_alpha() const noexcept { return mean_h2_alpha_; }

  /// Per-count entropy H(Y₁|Y₀=y) for any full state y with bound count b.
  const std::vector<double>& row_entropies() const noexcept { return row_entropy_; }

 private:
  void accumulate(std::span<const double> alphas, std::span<const double> weights);
  void build_kernel();
  void solve_stationary();

  int n_;
  double beta_;
  double h2_beta_;
  std::vector<double> binom_;         // (n+1)×(n+1) Pascal table
  std::vector<double> mixed_moment_;  // E[(1−α)^i α^j], i + j ≤ n, stored (n+1)×(n+1)
  std::vector<double> row_entropy_;
  double mean_h2_alpha_ = 0.0;
  double m1_ = 0.0;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd system_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd pi_;
};

}  // namespace molcap
