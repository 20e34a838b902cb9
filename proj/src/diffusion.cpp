#include "molcap/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "molcap/errors.hpp"

namespace molcap {

void DiffusionConfig::validate() const {
  if (!(d_coeff > 0.0)) throw DomainError("diffusion coefficient must be positive");
  if (!(delta > 0.0)) throw DomainError("sampling period must be positive");
  if (!(kernel_exponent > 0.0)) throw DomainError("kernel exponent must be positive");
  if (!(r_dist > 0.0)) {
    // With r = 0 the kernel behaves like t^{−e} near t = 0 and h₁ diverges for e ≥ 1.
    throw IllPosedError("receiver distance must be positive: h_1 integral diverges at r = 0");
  }
}

void EmissionSchedule::validate() const {
  for (double f : rates) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw DomainError("emission rates must be finite and >= 0");
  }
}

double impulse_response(double t, const DiffusionConfig& config) {
  if (t <= 0.0) return 0.0;
  const double four_dt = 4.0 * config.d_coeff * t;
  return std::exp(-config.r_dist * config.r_dist / four_dt) /
         std::pow(std::numbers::pi * four_dt, config.kernel_exponent);
}

std::vector<double> impulse_coeffs(const DiffusionConfig& config, int n_max) {
  config.validate();
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  std::vector<double> h(n_max + 1, 0.0);
  constexpr double kRelTol = 1e-10;
  constexpr unsigned kMaxDepth = 30;
  for (int n = 1; n <= n_max; ++n) {
    // Substituting s = nΔ − τ integrates the kernel over one epoch [(n−1)Δ, nΔ].
    const double lo = (n - 1) * config.delta;
    const double hi = n * config.delta;
    double err = 0.0;
    h[n] = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double s) { return impulse_response(s, config); }, lo, hi, kMaxDepth, kRelTol, &err);
    if (!(h[n] > 0.0)) {
      throw IllPosedError("impulse coefficient h_" + std::to_string(n) +
                          " underflowed to zero; increase delta or reduce r");
    }
  }
  return h;
}

std::vector<double> impulse_coeffs_closed_form(const DiffusionConfig& config, int n_max) {
  config.validate();
  if (config.kernel_exponent != 1.0) {
    throw std::invalid_argument("closed form exists only for kernel_exponent = 1");
  }
  const double a = config.r_dist * config.r_dist / (4.0 * config.d_coeff);
  const double pre = 1.0 / (4.0 * std::numbers::pi * config.d_coeff);
  // E₁(z) = −Ei(−z) for z > 0.
  auto e1 = [](double z) { return -std::expint(-z); };
  std::vector<double> h(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    const double upper = e1(a / (n * config.delta));
    const double lower = n == 1 ? 0.0 : e1(a / ((n - 1) * config.delta));
    h[n] = pre * (upper - lower);
  }
  return h;
}

std::vector<double> concentration_sequence(const EmissionSchedule& schedule,
                                           std::span<const double> h) {
  const std::size_t len = schedule.rates.size();
  if (h.size() < len) {
    throw std::invalid_argument("coefficient vector shorter than schedule (" +
                                std::to_string(h.size()) + " < " + std::to_string(len) + ")");
  }
  std::vector<double> c(len, 0.0);
  for (std::size_t m = 0; m < len; ++m) {
    double s = 0.0;
    for (std::size_t n = 0; n <= m; ++n) s += schedule.rates[n] * h[m - n];
    c[m] = s;
  }
  return c;
}

std::vector<double> receiver_samples(const EmissionSchedule& schedule, std::span<const double> h) {
  const std::size_t len = schedule.rates.size();
  if (h.size() < len + 1) throw std::invalid_argument("coefficient vector too short");
  std::vector<double> c(len, 0.0);
  for (std::size_t k = 1; k <= len; ++k) {
    double s = 0.0;
    for (std::size_t n = 0; n < k; ++n) s += schedule.rates[n] * h[k - n];
    c[k - 1] = s;
  }
  return c;
}

InversionResult invert_concentration(std::span<const double> samples, std::span<const double> h) {
  const std::size_t len = samples.size();
  if (h.size() < len + 1) throw std::invalid_argument("coefficient vector too short");
  if (!(h[1] > 1e-300)) throw IllPosedError("leading coefficient h_1 is not positive");
  InversionResult out;
  out.rates.assign(len, 0.0);
  for (std::size_t k = 1; k <= len; ++k) {
    double s = samples[k - 1];
    for (std::size_t n = 0; n + 1 < k; ++n) s -= out.rates[n] * h[k - n];
    out.rates[k - 1] = s / h[1];
    if (out.rates[k - 1] < 0.0) out.negative_rates = true;
  }
  return out;
}

std::vector<double> master_equation_solve(std::span<const double> concentration_per_epoch,
                                          double k_plus, double k_minus, double p0,
                                          double delta) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("initial bound probability outside [0, 1]");
  if (!(k_plus > 0.0 && k_minus > 0.0 && delta > 0.0)) {
    throw DomainError("rate constants and sampling period must be positive");
  }
  std::vector<double> p(concentration_per_epoch.size() + 1);
  p[0] = p0;
  for (std::size_t i = 0; i < concentration_per_epoch.size(); ++i) {
    const double c = concentration_per_epoch[i];
    if (!(c >= 0.0)) throw DomainError("concentrations must be nonnegative");
    const double rho = k_plus * c + k_minus;
    const double p_inf = k_plus * c / rho;
    p[i + 1] = std::clamp(p_inf + (p[i] - p_inf) * std::exp(-rho * delta), 0.0, 1.0);
  }
  return p;
}

}  // namespace molcap
