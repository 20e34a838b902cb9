#include "molcap/capacity_opt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "molcap/errors.hpp"
#include "molcap/receptor_channel.hpp"
#include "molcap/rng.hpp"

namespace molcap {

void OptimizerConfig::validate() const {
  if (k_max != 0 && k_max < 2) throw std::invalid_argument("k_max must be at least 2");
  if (n_starts < 1) throw std::invalid_argument("n_starts must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(merge_eps >= 0.0 && merge_eps < 1.0)) throw std::invalid_argument("merge_eps must lie in [0, 1)");
  if (!(weight_floor >= 0.0 && weight_floor < 1.0)) {
    throw std::invalid_argument("weight_floor must lie in [0, 1)");
  }
  if (!(kkt_tol > 0.0)) throw std::invalid_argument("kkt_tol must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Valid: return "VALID";
    case CertificateStatus::Invalid: return "INVALID";
    case CertificateStatus::Underdetermined: return "UNDERDETERMINED";
  }
  return "INVALID";
}

int support_bound(int n_receptors) {
  if (n_receptors < 1) throw DomainError("n_receptors must be positive");
  return (n_receptors + 4) / 2;
}

double support_bound_raw(int n_receptors) { return (n_receptors + 4) / 2.0; }

DiscreteDist effective_support(const DiscreteDist& dist, const ReceptorParams& params,
                               double merge_eps, double weight_floor) {
  const double radius = merge_eps * params.m_max;
  std::vector<double> xs, ws;
  double cluster_last = 0.0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    const double x = dist.atoms()[j], w = dist.weights()[j];
    if (!xs.empty() && x - cluster_last <= radius) {
      const double total = ws.back() + w;
      xs.back() = (xs.back() * ws.back() + x * w) / total;
      ws.back() = total;
    } else {
      xs.push_back(x);
      ws.push_back(w);
    }
    cluster_last = x;
  }
  std::vector<double> kept_x, kept_w;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (ws[j] >= weight_floor) {
      kept_x.push_back(std::clamp(xs[j], 0.0, params.m_max));
      kept_w.push_back(ws[j]);
    }
  }
  if (kept_x.empty()) {
    const auto heaviest = std::max_element(ws.begin(), ws.end()) - ws.begin();
    return DiscreteDist::point_mass(xs[heaviest]);
  }
  return DiscreteDist::normalized(std::move(kept_x), std::move(kept_w));
}

namespace {

constexpr double kGolden = 0.6180339887498949;

/// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

/// Local search state for one start. Atoms may be unsorted or coincide while iterating.
class LocalSearch {
 public:
  LocalSearch(const ReceptorParams& params, const OptimizerConfig& config)
      : params_(params), config_(config), eval_(params.n_receptors, params.beta) {}

  struct Outcome {
    DiscreteDist dist;
    double rate = 0.0;
    int sweeps = 0;
    bool converged = false;
  };

  Outcome run(std::vector<double> atoms, std::vector<double> weights) {
    atoms_ = std::move(atoms);
    weights_ = std::move(weights);
    alphas_.resize(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) alphas_[i] = alpha_unchecked(atoms_[i], params_);
    moves_.assign(atoms_.size(), 0.05 * params_.m_max);
    step_ = 1.0;
    double value = objective();

    Outcome out;
    out.converged = config_.max_iters == 0;
    for (int sweep = 0; sweep < config_.max_iters; ++sweep) {
      const double before = value;
      value = weight_phase(value);
      value = atom_phase(value);
      out.sweeps = sweep + 1;
      if (value - before <= config_.tol) {
        out.converged = true;
        break;
      }
    }
    std::vector<double> xs, ws;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (weights_[i] > 0.0) {
        xs.push_back(atoms_[i]);
        ws.push_back(weights_[i]);
      }
    }
    out.dist = DiscreteDist::normalized(std::move(xs), std::move(ws));
    out.rate = iid_rate(out.dist, params_);
    return out;
  }

 private:
  double objective() { return eval_.rate(alphas_, weights_); }

  double objective_with_atom(std::size_t i, double x) {
    const double saved_x = atoms_[i], saved_a = alphas_[i];
    atoms_[i] = x;
    alphas_[i] = alpha_unchecked(x, params_);
    const double v = objective();
    atoms_[i] = saved_x;
    alphas_[i] = saved_a;
    return v;
  }

  // Projected gradient ascent on the simplex; gradients by central differences of the
  // scale-invariant objective R(p / Σp).
  double weight_phase(double value) {
    const std::size_t k = weights_.size();
    if (k < 2) return value;
    constexpr double h = 1e-6;
    for (int inner = 0; inner < 4; ++inner) {
      std::vector<double> grad(k);
      for (std::size_t i = 0; i < k; ++i) {
        const double saved = weights_[i];
        weights_[i] = saved + h;
        const double up = objective();
        if (saved > h) {
          weights_[i] = saved - h;
          grad[i] = (up - objective()) / (2.0 * h);
        } else {
          grad[i] = (up - value) / h;
        }
        weights_[i] = saved;
      }
      const double mean = std::accumulate(grad.begin(), grad.end(), 0.0) / static_cast<double>(k);
      for (double& g : grad) g -= mean;

      const std::vector<double> base = weights_;
      double step = std::min(step_ * 2.0, 1e3);
      bool improved = false;
      for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
        for (std::size_t i = 0; i < k; ++i) weights_[i] = base[i] + step * grad[i];
        project_to_simplex(weights_);
        const double trial = objective();
        if (trial > value) {
          const double gain = trial - value;
          value = trial;
          step_ = step;
          improved = true;
          if (gain <= 0.1 * config_.tol) inner = 4;
          break;
        }
      }
      if (!improved) {
        weights_ = base;
        break;
      }
    }
    return value;
  }

  double atom_phase(double value) {
    const double m = params_.m_max;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (weights_[i] <= 0.0) continue;
      auto f = [&](double x) { return objective_with_atom(i, x); };
      double best_x = atoms_[i], best = value;
      auto consider = [&](double x, double v) {
        if (v > best) {
          best = v;
          best_x = x;
        }
      };
      consider(0.0, f(0.0));
      consider(m, f(m));

      // Coarse golden-section pass over the whole interval.
      double lo = 0.0, hi = m;
      double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      while (hi - lo > 1e-3 * m) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          f2 = f(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          f1 = f(x1);
        }
      }
      consider(x1, f1);
      consider(x2, f2);

      // Local refinement around the incumbent, bracket sized by the last accepted move.
      const double radius = std::clamp(4.0 * moves_[i], 1e-6 * m, 0.25 * m);
      const double a = std::max(0.0, best_x - radius), b = std::min(m, best_x + radius);
      if (b > a) {
        const auto [xr, neg] = boost::math::tools::brent_find_minima(
            [&](double x) { return -f(x); }, a, b, 40);
        consider(xr, -neg);
      }

      if (best > value) {
        moves_[i] = std::max(std::abs(best_x - atoms_[i]), 1e-9 * m);
        atoms_[i] = best_x;
        alphas_[i] = alpha_unchecked(best_x, params_);
        value = best;
      } else {
        moves_[i] *= 0.5;
      }
    }
    return value;
  }

  ReceptorParams params_;
  OptimizerConfig config_;
  ChannelEvaluator eval_;
  std::vector<double> atoms_, weights_, alphas_, moves_;
  double step_ = 1.0;
};

struct StartPlan {
  int index = 0;
  std::vector<double> atoms;
  std::vector<double> weights;
};

struct StartResult {
  StartRecord record;
  DiscreteDist dist;
};

/// Higher rate first, then lexicographically smaller atoms, then earlier start.
bool better(const StartResult& a, const StartResult& b) {
  if (a.record.rate_bits != b.record.rate_bits) return a.record.rate_bits > b.record.rate_bits;
  if (a.dist.atoms() != b.dist.atoms()) {
    return std::lexicographical_compare(a.dist.atoms().begin(), a.dist.atoms().end(),
                                        b.dist.atoms().begin(), b.dist.atoms().end());
  }
  return a.record.start_index < b.record.start_index;
}

StartResult run_start(const StartPlan& plan, const ReceptorParams& params,
                      const OptimizerConfig& config) {
  LocalSearch search(params, config);
  auto raw = search.run(plan.atoms, plan.weights);

  StartResult out;
  out.record.start_index = plan.index;
  out.record.support_cap = static_cast<int>(plan.atoms.size());
  out.record.sweeps = raw.sweeps;
  out.record.converged = raw.converged;
  out.dist = raw.dist;
  out.record.rate_bits = raw.rate;

  // Collapse near-coincident atoms and negligible weights, then re-polish on the smaller support.
  const DiscreteDist reduced =
      effective_support(raw.dist, params, config.merge_eps, config.weight_floor);
  if (reduced.size() < raw.dist.size() && reduced.size() >= 2) {
    auto polished = search.run(reduced.atoms(), reduced.weights());
    if (polished.converged && polished.rate >= raw.rate - 1e-12) {
      out.dist = polished.dist;
      out.record.rate_bits = polished.rate;
      out.record.sweeps += polished.sweeps;
      out.record.converged = true;
    }
  }
  return out;
}

std::vector<StartPlan> make_starts(const ReceptorParams& params, const OptimizerConfig& config) {
  std::vector<StartPlan> starts;
  int index = 0;
  for (const auto& d : config.initial) {
    d.check_support(params);
    starts.push_back({index++, d.atoms(), d.weights()});
  }
  const int k_max = config.effective_k_max(params.n_receptors);
  for (int k = 2; k <= k_max; ++k) {
    for (int s = 0; s < config.n_starts; ++s, ++index) {
      RandomStream rng(config.seed + static_cast<std::uint64_t>(index), 0);
      StartPlan plan{index, std::vector<double>(k), std::vector<double>(k)};
      for (int i = 0; i < k; ++i) plan.atoms[i] = rng.uniform() * params.m_max;
      std::sort(plan.atoms.begin(), plan.atoms.end());
      double total = 0.0;
      for (int i = 0; i < k; ++i) total += plan.weights[i] = rng.exponential();
      for (double& w : plan.weights) w /= total;
      starts.push_back(std::move(plan));
    }
  }
  return starts;
}

}  // namespace

CapacityResult optimize_iid(const ReceptorParams& params, const OptimizerConfig& config) {
  params.validate();
  config.validate();
  const std::vector<StartPlan> starts = make_starts(params, config);
  std::vector<StartResult> results(starts.size());

  const int threads = std::min<int>(config.threads, static_cast<int>(starts.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) results[i] = run_start(starts[i], params, config);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) {
          results[i] = run_start(starts[i], params, config);
        }
      });
    }
  }

  CapacityResult out;
  const StartResult* best = nullptr;
  for (const auto& r : results) {
    out.starts_log.push_back(r.record);
    if (!r.record.converged) continue;
    if (best == nullptr || better(r, *best)) best = &r;
  }
  if (best == nullptr) {
    std::ostringstream msg;
    msg << "no optimizer start converged within " << config.max_iters << " sweeps (tol "
        << config.tol << "); final rates:";
    for (const auto& r : results) msg << ' ' << r.record.rate_bits;
    throw ConvergenceError(msg.str());
  }
  out.dist = best->dist;
  out.rate_bits = best->record.rate_bits;

  KKTOptions kkt;
  kkt.merge_eps = config.merge_eps;
  kkt.weight_floor = config.weight_floor;
  kkt.residual_tol = config.kkt_tol;
  out.certificate = kkt_certificate(out.dist, params, kkt);
  return out;
}

}  // namespace molcap
