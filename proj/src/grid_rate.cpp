#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "molcap/capacity_opt.hpp"
#include "molcap/receptor_channel.hpp"

namespace molcap {

namespace {

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// Visits every (atom indices, weight parts) pair in lexicographic order.
void for_each_lattice_point(const ReceptorParams& params, int grid_size, int k,
                            const GridOptions& options,
                            const std::function<void(const std::vector<double>& atoms,
                                                     const std::vector<double>& alphas,
                                                     const std::vector<double>& weights)>& visit) {
  params.validate();
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  if (k < 1 || k > grid_size) throw std::invalid_argument("support size must lie in [1, grid_size]");
  const double count = grid_point_count(grid_size, k);
  if (count > static_cast<double>(options.max_points)) {
    throw std::length_error("grid of " + std::to_string(count) + " points exceeds the cap of " +
                            std::to_string(options.max_points) + "; use a smaller grid_size or k");
  }
  const int divisions = grid_size - 1;
  std::vector<double> grid(grid_size), grid_alpha(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    grid[i] = params.m_max * static_cast<double>(i) / divisions;
    grid_alpha[i] = alpha_unchecked(grid[i], params);
  }
  grid[divisions] = params.m_max;

  std::vector<int> idx(k);
  std::vector<int> parts(k);
  std::vector<double> atoms(k), alphas(k), weights(k);

  // Compositions of `divisions` into k positive parts, in lexicographic order.
  std::function<void(int, int)> weights_rec = [&](int pos, int remaining) {
    if (pos == k - 1) {
      parts[pos] = remaining;
      for (int i = 0; i < k; ++i) weights[i] = static_cast<double>(parts[i]) / divisions;
      visit(atoms, alphas, weights);
      return;
    }
    for (int p = 1; p <= remaining - (k - 1 - pos); ++p) {
      parts[pos] = p;
      weights_rec(pos + 1, remaining - p);
    }
  };
  std::function<void(int, int)> atoms_rec = [&](int pos, int first) {
    if (pos == k) {
      for (int i = 0; i < k; ++i) {
        atoms[i] = grid[idx[i]];
        alphas[i] = grid_alpha[idx[i]];
      }
      weights_rec(0, divisions);
      return;
    }
    for (int i = first; i <= grid_size - (k - pos); ++i) {
      idx[pos] = i;
      atoms_rec(pos + 1, i + 1);
    }
  };
  atoms_rec(0, 0);
}

}  // namespace

double grid_point_count(int grid_size, int k) {
  return choose(grid_size, k) * choose(grid_size - 2, k - 1);
}

std::vector<GridRow> grid_rate_curve(const ReceptorParams& params, int grid_size, int k,
                                     const GridOptions& options) {
  std::vector<GridRow> rows;
  for_each_lattice_point(params, grid_size, k, options,
                         [&](const auto& atoms, const auto&, const auto& weights) {
                           DiscreteDist d(atoms, weights);
                           rows.push_back({d, iid_rate(d, params)});
                         });
  return rows;
}

GridRow grid_best(const ReceptorParams& params, int grid_size, int k, const GridOptions& options) {
  ChannelEvaluator eval(params.n_receptors, params.beta);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_atoms, best_weights;
  for_each_lattice_point(params, grid_size, k, options,
                         [&](const auto& atoms, const auto& alphas, const auto& weights) {
                           const double r = eval.rate(alphas, weights);
                           if (r > best) {
                             best = r;
                             best_atoms = atoms;
                             best_weights = weights;
                           }
                         });
  DiscreteDist d = DiscreteDist::normalized(best_atoms, best_weights);
  return {d, iid_rate(d, params)};
}

}  // namespace molcap
