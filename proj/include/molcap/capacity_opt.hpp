#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "molcap/input_dist.hpp"
#include "molcap/receptor_params.hpp"

namespace molcap {

struct OptimizerConfig {
  int k_max = 0;                ///< support-size cap; 0 selects N + 2
  int n_starts = 8;             ///< random starts per support size K = 2..k_max
  std::uint64_t seed = 1;
  int max_iters = 400;          ///< coordinate-ascent sweeps per start
  double tol = 1e-10;           ///< sweep improvement (bits) that counts as converged
  double merge_eps = 1e-4;      ///< atom-merge radius as a fraction of M
  double weight_floor = 1e-6;
  double kkt_tol = 1e-5;        ///< residual bound for a VALID certificate
  int threads = 1;
  std::vector<DiscreteDist> initial;  ///< extra user-supplied starts, evaluated before random ones

  int effective_k_max(int n_receptors) const { return k_max > 0 ? k_max : n_receptors + 2; }
  void validate() const;
};

enum class CertificateStatus { Valid, Invalid, Underdetermined };

std::string to_string(CertificateStatus status);

/// First-order certificate for f(a) = H₂(a) + Σ_{j=0}^N λ_j a^j: f(α_i) = 0 at every
/// atom and f'(α_i) = 0 at interior atoms, plus the root count of f' on [α(0), α(M)].
struct KKTCertificate {
  std::vector<double> lambdas;          ///< λ₀..λ_N
  double stationarity_residual = 0.0;   ///< max |f(α_i)|
  double derivative_residual = 0.0;     ///< max |f'(α_i)| over interior atoms, 0 if none
  int root_count = 0;                   ///< roots of f' incl. tangential ones
  std::vector<double> roots;            ///< refined root locations in α
  int support_size = 0;                 ///< atoms after merge and weight floor
  int interior_atoms = 0;
  int equations = 0;
  CertificateStatus status = CertificateStatus::Invalid;

  bool valid() const noexcept { return status == CertificateStatus::Valid; }
};

struct StartRecord {
  int start_index = 0;
  int support_cap = 0;   ///< K the start was run with
  double rate_bits = 0.0;
  int sweeps = 0;
  bool converged = false;
};

struct CapacityResult {
  DiscreteDist dist;
  double rate_bits = 0.0;
  KKTCertificate certificate;
  std::vector<StartRecord> starts_log;
};

/// Upper bound ⌊(N+4)/2⌋ on the support size of an optimal i.i.d. input.
int support_bound(int n_receptors);

/// (N+4)/2 before rounding.
double support_bound_raw(int n_receptors);

/// Merges atoms closer than merge_eps·M (weight-averaged location) and drops weights below
/// the floor, then renormalizes.
DiscreteDist effective_support(const DiscreteDist& dist, const ReceptorParams& params,
                               double merge_eps, double weight_floor);

/// Maximizes the stationary i.i.d. rate over discrete inputs with K = 2..k_max atoms by
/// multistart projected coordinate ascent. Deterministic given the config, independent
/// of `threads`. Throws ConvergenceError when no start converges.
CapacityResult optimize_iid(const ReceptorParams& params, const OptimizerConfig& config);

struct KKTOptions {
  double merge_eps = 1e-4;
  double weight_floor = 1e-6;
  double residual_tol = 1e-5;
  int scan_points = 100000;
  double boundary_eps = 1e-9;  ///< relative distance to 0 or M that counts as a boundary atom
};

KKTCertificate kkt_certificate(const DiscreteDist& dist, const ReceptorParams& params,
                               const KKTOptions& options = {});

struct GridRow {
  DiscreteDist dist;
  double rate_bits = 0.0;
};

struct GridOptions {
  std::size_t max_points = 20'000'000;
};

/// iid rate over every k-atom distribution with atoms on the uniform grid
/// {0, M/(g−1), ..., M} and weights on the simplex lattice with step 1/(g−1).
/// Throws std::length_error when the lattice exceeds max_points.
std::vector<GridRow> grid_rate_curve(const ReceptorParams& params, int grid_size, int k,
                                     const GridOptions& options = {});

/// Best row of grid_rate_curve without materializing the table; ties keep the first row
/// in lattice order.
GridRow grid_best(const ReceptorParams& params, int grid_size, int k,
                  const GridOptions& options = {});

/// Number of lattice points grid_rate_curve would evaluate.
double grid_point_count(int grid_size, int k);

}  // namespace molcap
