#pragma once

#include <functional>
#include <span>
#include <vector>

#include "molcap/receptor_params.hpp"

namespace molcap {

/// Finite probability measure on [0, M]: strictly increasing atoms, positive weights summing to one.
class DiscreteDist {
 public:
  DiscreteDist() = default;

  /// Validates the invariants; throws std::invalid_argument on violation.
  DiscreteDist(std::vector<double> atoms, std::vector<double> weights);

  static DiscreteDist point_mass(double x);

  /// Sorts atoms, merges exact duplicates, drops non-positive weights and renormalizes.
  static DiscreteDist normalized(std::vector<double> atoms, std::vector<double> weights);

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool is_point_mass() const noexcept { return atoms_.size() == 1; }

  /// Throws DomainError unless every atom lies in [0, M].
  void check_support(const ReceptorParams& params) const;

  double expectation(const std::function<double(double)>& f) const;

  friend bool operator==(const DiscreteDist&, const DiscreteDist&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// (m₁, ..., m_N) with m_i = E[α(X)^i]; nonincreasing since α ∈ [0, 1).
struct MomentVector {
  std::vector<double> values;
};

/// H₂(p) in bits with 0·log 0 = 0. Throws DomainError for p outside [0, 1].
double binary_entropy(double p);

/// Binary entropy without the range check, for inner loops.
double binary_entropy_unchecked(double p) noexcept;

MomentVector moments(const DiscreteDist& dist, const ReceptorParams& params, int order);

using TestFunction = std::function<double(double)>;

struct ReduceOptions {
  double delete_threshold = 1e-14;
  double null_residual_tol = 1e-10;
};

/// Caratheodory-type support reduction.
///
/// Returns a measure on a subset of the atoms of `dist` with at most K + 1 atoms
/// (K = funcs.size()) that preserves E[f] for every f in `funcs` and total mass.
/// Each pivot takes the first K + 2 surviving atoms, finds a null vector v of
/// the (K+1)×(K+2) matrix with rows (f₁(x_j), ..., f_K(x_j), 1), orients v so
/// its first nonzero entry is positive, and moves weight along v until the first
/// weight hits zero. Weights below `delete_threshold` are removed together.
/// Throws NumericalRankError when the null vector residual exceeds the tolerance.
DiscreteDist reduce_support(const DiscreteDist& dist, std::span<const TestFunction> funcs,
                            const ReduceOptions& options = {});

/// The function set {α, α², ..., α^N} and, when `with_entropy`, H₂∘α.
std::vector<TestFunction> moment_functions(const ReceptorParams& params, int order,
                                           bool with_entropy);

}  // namespace molcap
