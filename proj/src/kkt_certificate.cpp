#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "molcap/capacity_opt.hpp"

namespace molcap {

namespace {

double h2_derivative(double a) { return std::log2((1.0 - a) / a); }

struct Lagrangian {
  std::vector<double> lambdas;

  // f'(a) = H₂'(a) + Σ_{j≥1} j λ_j a^{j−1}
  double derivative(double a) const {
    double poly = 0.0;
    for (std::size_t j = lambdas.size() - 1; j >= 1; --j) {
      poly = poly * a + static_cast<double>(j) * lambdas[j];
    }
    return h2_derivative(a) + poly;
  }

  double value(double a) const {
    double poly = 0.0;
    for (std::size_t j = lambdas.size(); j-- > 0;) poly = poly * a + lambdas[j];
    return binary_entropy_unchecked(a) + poly;
  }
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double bisect_root(const Lagrangian& f, double lo, double hi) {
  int s_lo = sign_of(f.derivative(lo));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const int s = sign_of(f.derivative(mid));
    if (s == 0) return mid;
    if (s == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Minimum of |f'| on [lo, hi] by golden section.
double min_abs_derivative(const Lagrangian& f, double lo, double hi, double* where) {
  constexpr double g = 0.6180339887498949;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = std::abs(f.derivative(x1)), f2 = std::abs(f.derivative(x2));
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(f.derivative(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(f.derivative(x2));
    }
  }
  *where = f1 < f2 ? x1 : x2;
  return std::min(f1, f2);
}

void count_roots(const Lagrangian& f, double lo, double hi, int points, KKTCertificate& cert) {
  constexpr double kTangentTol = 1e-12;
  std::vector<double> grid(points), vals(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / (points - 1);
    vals[k] = f.derivative(grid[k]);  // +∞ at a = 0 keeps a well-defined sign
  }
  int last_sign = 0;
  int last_index = -1;
  for (int k = 0; k < points; ++k) {
    const int s = sign_of(vals[k]);
    if (s == 0) {
      cert.roots.push_back(grid[k]);
      last_sign = 0;
      last_index = k;
      continue;
    }
    if (last_sign != 0 && s != last_sign) {
      cert.roots.push_back(bisect_root(f, grid[last_index], grid[k]));
    }
    last_sign = s;
    last_index = k;
  }
  // Tangential roots: local minima of |f'| touching zero without a sign change.
  for (int k = 1; k + 1 < points; ++k) {
    const double left = std::abs(vals[k - 1]), mid = std::abs(vals[k]), right = std::abs(vals[k + 1]);
    if (!(mid <= left && mid <= right) || mid == 0.0) continue;
    if (sign_of(vals[k - 1]) != sign_of(vals[k]) || sign_of(vals[k + 1]) != sign_of(vals[k])) {
      continue;
    }
    double where = grid[k];
    if (min_abs_derivative(f, grid[k - 1], grid[k + 1], &where) < kTangentTol) {
      cert.roots.push_back(where);
    }
  }
  std::sort(cert.roots.begin(), cert.roots.end());
  cert.root_count = static_cast<int>(cert.roots.size());
}

}  // namespace

KKTCertificate kkt_certificate(const DiscreteDist& dist, const ReceptorParams& params,
                               const KKTOptions& options) {
  params.validate();
  dist.check_support(params);
  const DiscreteDist eff =
      effective_support(dist, params, options.merge_eps, options.weight_floor);
  const int n = params.n_receptors;
  const int k = static_cast<int>(eff.size());

  KKTCertificate cert;
  cert.support_size = k;

  std::vector<double> a(k);
  std::vector<bool> interior(k);
  for (int i = 0; i < k; ++i) {
    const double x = eff.atoms()[i];
    a[i] = alpha_unchecked(x, params);
    interior[i] = x > options.boundary_eps * params.m_max &&
                  x < (1.0 - options.boundary_eps) * params.m_max;
    cert.interior_atoms += interior[i] ? 1 : 0;
  }
  cert.equations = k + cert.interior_atoms;

  // Rows: f(α_i) = 0 for all atoms, then f'(α_i) = 0 for interior atoms.
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(cert.equations, n + 1);
  Eigen::VectorXd rhs(cert.equations);
  int row = 0;
  for (int i = 0; i < k; ++i, ++row) {
    double pw = 1.0;
    for (int j = 0; j <= n; ++j, pw *= a[i]) system(row, j) = pw;
    rhs(row) = -binary_entropy_unchecked(a[i]);
  }
  for (int i = 0; i < k; ++i) {
    if (!interior[i]) continue;
    double pw = 1.0;
    for (int j = 1; j <= n; ++j, pw *= a[i]) system(row, j) = j * pw;
    rhs(row) = -h2_derivative(a[i]);
    ++row;
  }
  const Eigen::VectorXd lambda = system.completeOrthogonalDecomposition().solve(rhs);
  Lagrangian f{std::vector<double>(lambda.data(), lambda.data() + n + 1)};
  cert.lambdas = f.lambdas;

  for (int i = 0; i < k; ++i) {
    cert.stationarity_residual = std::max(cert.stationarity_residual, std::abs(f.value(a[i])));
    if (interior[i]) {
      cert.derivative_residual = std::max(cert.derivative_residual, std::abs(f.derivative(a[i])));
    }
  }

  const double lo = alpha_unchecked(0.0, params);
  const double hi = alpha_unchecked(params.m_max, params);
  count_roots(f, lo, hi, std::max(options.scan_points, 3), cert);

  if (k < 2 || cert.equations < n + 1) {
    cert.status = CertificateStatus::Underdetermined;
  } else if (cert.stationarity_residual <= options.residual_tol &&
             cert.derivative_residual <= options.residual_tol && cert.root_count <= n + 1) {
    cert.status = CertificateStatus::Valid;
  } else {
    cert.status = CertificateStatus::Invalid;
  }
  return cert;
}

}  // namespace molcap
