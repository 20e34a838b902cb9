#pragma once

#include <span>
#include <vector>

namespace molcap {

/// Free-space diffusion from a point source to the receiver, sampled every Δ.
struct DiffusionConfig {
  double d_coeff = 1.0;          ///< diffusion coefficient D, length²/time
  double r_dist = 1.0;           ///< transmitter–receiver distance |x_r|
  double delta = 1.0;            ///< sampling period Δ
  double kernel_exponent = 1.0;  ///< power of (4πDt) in the Green's function denominator

  void validate() const;
};

/// Green's function of the diffusion equation at the receiver:
/// (4πDt)^{−e} · exp(−r²/(4Dt)) for t > 0, zero otherwise.
double impulse_response(double t, const DiffusionConfig& config);

/// Piecewise-constant emission rates F₀, F₁, ... (one per epoch), all ≥ 0.
struct EmissionSchedule {
  std::vector<double> rates;

  void validate() const;
};

/// h₀..h_{n_max}; h₀ = 0 and h_n = ∫₀^Δ K(nΔ − τ) dτ by adaptive Gauss–Kronrod quadrature.
std::vector<double> impulse_coeffs(const DiffusionConfig& config, int n_max);

/// Exponential-integral form of h_n, valid for kernel_exponent = 1:
/// (1/(4πD))·[E₁(a/(nΔ)) − E₁(a/((n−1)Δ))], a = r²/(4D).
std::vector<double> impulse_coeffs_closed_form(const DiffusionConfig& config, int n_max);

/// c_m = Σ_{n=0}^{m} F_n h_{m−n} for m = 0..len−1. Requires h.size() ≥ len.
std::vector<double> concentration_sequence(const EmissionSchedule& schedule,
                                           std::span<const double> h);

/// Receiver samples c_r(Δ), ..., c_r(LΔ) for a schedule of length L; the input of
/// invert_concentration. Requires h.size() ≥ L + 1.
std::vector<double> receiver_samples(const EmissionSchedule& schedule, std::span<const double> h);

struct InversionResult {
  std::vector<double> rates;  ///< recovered F₀..F_{m−1}; may be negative for inconsistent data
  bool negative_rates = false;
};

/// Forward substitution led by h₁ recovering F from c_r(Δ)..c_r(mΔ).
/// Throws IllPosedError when h₁ is not safely positive.
InversionResult invert_concentration(std::span<const double> samples, std::span<const double> h);

/// Bound probability of one receptor under dp/dt = k₊c(t)(1 − p) − k₋p with c constant on
/// each epoch. Returns p(0), p(Δ), ..., p(nΔ) by exact exponential propagation.
std::vector<double> master_equation_solve(std::span<const double> concentration_per_epoch,
                                          double k_plus, double k_minus, double p0, double delta);

}  // namespace molcap
