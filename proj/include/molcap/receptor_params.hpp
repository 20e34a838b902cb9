#pragma once

#include <cstdint>

namespace molcap {

/// Physical and channel constants of an N-receptor ligand-binding receiver.
struct ReceptorParams {
  double k_plus = 1.0;   ///< binding rate constant, 1/(concentration·time)
  double k_minus = 1.0;  ///< unbinding rate constant, 1/time
  double beta = 0.5;     ///< per-epoch unbinding probability of a bound receptor
  int n_receptors = 1;
  double m_max = 1.0;    ///< maximum concentration M

  /// Throws DomainError when any invariant is violated.
  void validate() const;

  /// Parameters whose binding probability at x = M equals `alpha_max`, for fixed k₋ and M.
  static ReceptorParams from_alpha_max(double alpha_max, double beta, int n_receptors,
                                       double k_minus = 1.0, double m_max = 1.0);
};

/// Per-epoch binding probability of an unbound receptor at concentration x:
/// k₊x / (k₋ + k₊x). Throws DomainError for x outside [0, M].
double alpha(double x, const ReceptorParams& params);

/// Same map without the range check; used in inner loops after validation.
inline double alpha_unchecked(double x, const ReceptorParams& params) {
  const double kx = params.k_plus * x;
  return kx / (params.k_minus + kx);
}

}  // namespace molcap
