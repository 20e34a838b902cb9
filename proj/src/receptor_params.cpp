#include "molcap/receptor_params.hpp"

#include <cmath>
#include <string>

#include "molcap/errors.hpp"

namespace molcap {

void ReceptorParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1), got " + std::to_string(beta));
  }
  if (!(k_plus > 0.0) || !std::isfinite(k_plus)) throw DomainError("k_plus must be positive");
  if (!(k_minus > 0.0) || !std::isfinite(k_minus)) throw DomainError("k_minus must be positive");
  if (n_receptors < 1 || n_receptors > 63) {
    throw DomainError("n_receptors must lie in [1, 63], got " + std::to_string(n_receptors));
  }
  if (!(m_max > 0.0) || !std::isfinite(m_max)) throw DomainError("m_max must be positive");
}

ReceptorParams ReceptorParams::from_alpha_max(double alpha_max, double beta, int n_receptors,
                                              double k_minus, double m_max) {
  if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
    throw DomainError("alpha_max must lie in (0, 1)");
  }
  ReceptorParams p;
  p.k_minus = k_minus;
  p.m_max = m_max;
  p.beta = beta;
  p.n_receptors = n_receptors;
  // α(M) = k₊M / (k₋ + k₊M)  ⇔  k₊ = α k₋ / ((1 − α) M)
  p.k_plus = alpha_max * k_minus / ((1.0 - alpha_max) * m_max);
  p.validate();
  return p;
}

double alpha(double x, const ReceptorParams& params) {
  if (!(x >= 0.0 && x <= params.m_max)) {
    throw DomainError("concentration " + std::to_string(x) + " outside [0, " +
                      std::to_string(params.m_max) + "]");
  }
  return alpha_unchecked(x, params);
}

}  // namespace molcap
