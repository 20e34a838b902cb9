// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "molcap/capacity_opt.hpp"
#include "molcap/diffusion.hpp"
#include "molcap/input_dist.hpp"
#include "molcap/receptor_channel.hpp"
#include "molcap/rng.hpp"
#include "molcap/simulate.hpp"
#include "oracles/full_state_chain.hpp"
#include "oracles/generators.hpp"
#include "oracles/rk4.hpp"

using namespace molcap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

int random_int(RandomStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Verdict lumping_oracle() {
  RandomStream rng(101, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ReceptorParams p = testing::random_params(rng, random_int(rng, 1, 4));
    const DiscreteDist d = testing::random_dist(rng, random_int(rng, 1, 6), p.m_max);
    const auto full = oracle::build_full_chain(d, p);
    const auto pi = stationary_distribution(lumped_kernel(d, p));
    const auto pi_ref = oracle::lumped_pi(full);
    for (std::size_t b = 0; b < pi_ref.size(); ++b) worst = std::max(worst, std::abs(pi.pi_count[b] - pi_ref[b]));
    const double h1 = oracle::h_output_given_past(full);
    const double h2 = oracle::h_output_given_input_and_past(full, d, p);
    worst = std::max(worst, std::abs(entropy_output_given_past(d, p) - h1));
    worst = std::max(worst, std::abs(entropy_output_given_input_and_past(d, p) - h2));
    worst = std::max(worst, std::abs(iid_rate(d, p) - (d.is_point_mass() ? 0.0 : h1 - h2)));
  }
  return {worst <= 1e-9, "200 cases, max deviation " + sci(worst) + " (limit 1e-9)"};
}

Verdict moment_sufficiency() {
  RandomStream rng(102, 0);
  double kernel_dev = 0.0, entropy_dev = 0.0;
  bool distinct = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = random_int(rng, 1, 4);
    const ReceptorParams p = testing::random_params(rng, n);
    const DiscreteDist d = testing::random_dist(rng, random_int(rng, n + 2, 12), p.m_max);
    const auto funcs = moment_functions(p, n, false);
    const DiscreteDist twin = reduce_support(d, funcs);
    distinct = distinct && twin.size() < d.size();
    const auto ka = lumped_kernel(d, p).matrix;
    const auto kb = lumped_kernel(twin, p).matrix;
    kernel_dev = std::max(kernel_dev, (ka - kb).cwiseAbs().maxCoeff());
    entropy_dev = std::max(entropy_dev, std::abs(entropy_output_given_past(d, p) - entropy_output_given_past(twin, p)));
  }
  return {distinct && kernel_dev <= 1e-12 && entropy_dev <= 1e-10,
          "100 pairs, kernel " + sci(kernel_dev) + " (limit 1e-12), H(Y1|Y0) " + sci(entropy_dev) +
              " (limit 1e-10)" + (distinct ? "" : ", some pair was not reduced")};
}

Verdict rate_invariance() {
  RandomStream rng(103, 0);
  double worst = 0.0;
  std::size_t largest_excess = 0;
  bool sizes_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = random_int(rng, 1, 6);
    const ReceptorParams p = testing::random_params(rng, n);
    const DiscreteDist d = testing::random_dist(rng, random_int(rng, 1, 20), p.m_max);
    const DiscreteDist r = reduce_support(d, moment_functions(p, n, true));
    if (r.size() > static_cast<std::size_t>(n + 2)) {
      sizes_ok = false;
      largest_excess = std::max(largest_excess, r.size() - (n + 2));
    }
    worst = std::max(worst, std::abs(iid_rate(d, p) - iid_rate(r, p)));
  }
  return {sizes_ok && worst <= 1e-8, "100 dists, |rate change| " + sci(worst) + " (limit 1e-8), support " +
                                         (sizes_ok ? "<= N+2 throughout" : "exceeded N+2 by " + std::to_string(largest_excess))};
}

Verdict two_point_optimum() {
  double worst_atom = 0.0, worst_gap = -1.0;
  int failures = 0;
  for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double a_max : {0.2, 0.5, 0.8, 0.95}) {
      const ReceptorParams p = ReceptorParams::from_alpha_max(a_max, beta, 1, 1.0, 10.0);
      const CapacityResult r = optimize_iid(p, OptimizerConfig{});
      const GridRow lattice = grid_best(p, 101, 2);
      const double gap = lattice.rate_bits - r.rate_bits;
      worst_gap = std::max(worst_gap, gap);
      double dev = 1.0;
      if (r.dist.size() == 2) {
        dev = std::max(std::abs(r.dist.atoms()[0]), std::abs(r.dist.atoms()[1] - p.m_max)) / p.m_max;
      }
      worst_atom = std::max(worst_atom, dev);
      if (dev > 1e-6 || gap > 1e-6) ++failures;
    }
  }
  return {failures == 0, "20 points, atom offset " + sci(worst_atom) + "·M (limit 1e-6), lattice minus optimizer " +
                             sci(worst_gap) + " (limit 1e-6)"};
}

Verdict support_and_roots() {
  RandomStream rng(105, 0);
  int runs = 0, valid = 0, underdetermined = 0, invalid = 0, violations = 0;
  int worst_margin = -1000;  // max of root_count − (N+1) over every run, VALID or not
  std::string where;
  for (int n : {2, 3, 4}) {
    for (int set = 0; set < 5; ++set) {
      ReceptorParams p;
      if (set == 0) {
        p.k_plus = 1.0;
        p.k_minus = 1.0;
        p.m_max = 10.0;
        p.beta = 0.5;
        p.n_receptors = n;
      } else {
        p = testing::random_params(rng, n);
      }
      OptimizerConfig c;
      c.k_max = n + 2;
      c.n_starts = 50;
      c.seed = 500 + set;
      const CapacityResult r = optimize_iid(p, c);
      ++runs;
      const KKTCertificate& k = r.certificate;
      worst_margin = std::max(worst_margin, k.root_count - (n + 1));
      bool ok = k.support_size <= support_bound(n) && static_cast<int>(r.dist.size()) <= support_bound(n);
      if (k.status == CertificateStatus::Valid) {
        ++valid;
        ok = ok && k.root_count <= n + 1;
      } else if (k.status == CertificateStatus::Underdetermined) {
        ++underdetermined;
      } else {
        ++invalid;
      }
      if (!ok) {
        ++violations;
        where += " N=" + std::to_string(n) + "/set" + std::to_string(set);
      }
    }
  }
  return {violations == 0, std::to_string(runs) + " runs (" + std::to_string(valid) + " VALID, " +
                               std::to_string(underdetermined) + " UNDERDETERMINED, " + std::to_string(invalid) +
                               " INVALID), violations " + std::to_string(violations) + where +
                               ", max root_count - (N+1) over all runs " + std::to_string(worst_margin)};
}

Verdict monte_carlo() {
  ReceptorParams p;
  p.k_plus = 1.0;
  p.k_minus = 1.0;
  p.m_max = 1.0;
  p.beta = 0.5;
  p.n_receptors = 1;
  const DiscreteDist d({0.0, 1.0}, {0.5, 0.5});
  const double analytic = iid_rate(d, p);
  const auto full = oracle::build_full_chain(d, p);
  const double brute = oracle::h_output_given_past(full) - oracle::h_output_given_input_and_past(full, d, p);
  const bool confirmed = std::abs(analytic - brute) <= 1e-9 && std::abs(analytic - 0.207519) <= 5e-7;
  int inside = 0;
  for (int run = 0; run < 100; ++run) {
    const Trajectory t = simulate_trajectory(d, p, 1'000'000, 9000 + run, InitialState::StationarySample);
    const RateEstimate e = empirical_rate(t, d, p);
    if (std::abs(e.rate - analytic) <= 3.0 * e.std_error) ++inside;
  }
  return {confirmed && inside >= 95, "analytic " + std::to_string(analytic) + " (brute force diff " +
                                         sci(std::abs(analytic - brute)) + "), inside 3σ in " +
                                         std::to_string(inside) + "/100 runs (need 95)"};
}

Verdict diffusion() {
  RandomStream rng(107, 0);
  double quad_dev = 0.0, trip_dev = 0.0, rk_dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    DiffusionConfig c;
    c.d_coeff = 0.1 + 5.0 * rng.uniform();
    c.r_dist = 0.2 + 3.0 * rng.uniform();
    c.delta = 0.05 + 2.0 * rng.uniform();
    const auto h = impulse_coeffs(c, 100);
    const double a = c.r_dist * c.r_dist / (4.0 * c.d_coeff);
    for (int n = 1; n <= 100; ++n) {
      const double upper = boost::math::expint(1, a / (n * c.delta));
      const double lower = n == 1 ? 0.0 : boost::math::expint(1, a / ((n - 1) * c.delta));
      const double closed = (upper - lower) / (4.0 * std::numbers::pi * c.d_coeff);
      quad_dev = std::max(quad_dev, std::abs(h[n] - closed) / closed);
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    DiffusionConfig c;
    c.d_coeff = 0.1 + 5.0 * rng.uniform();
    c.delta = 0.05 + 2.0 * rng.uniform();
    // Forward substitution is stable while h₁ dominates, i.e. r²/(4DΔ) ≤ 1/2.
    c.r_dist = std::sqrt(2.0 * c.d_coeff * c.delta) * (0.2 + 0.8 * rng.uniform());
    const auto h = impulse_coeffs(c, 64);
    EmissionSchedule s;
    s.rates.resize(64);
    for (double& f : s.rates) f = 10.0 * rng.uniform();
    const auto inv = invert_concentration(receiver_samples(s, h), h);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 64; ++i) {
      err = std::max(err, std::abs(inv.rates[i] - s.rates[i]));
      scale = std::max(scale, std::abs(s.rates[i]));
    }
    trip_dev = std::max(trip_dev, err / scale);
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> conc(32);
    for (double& v : conc) v = 5.0 * rng.uniform();
    const double kp = 0.5 + rng.uniform(), km = 0.5 + rng.uniform(), p0 = rng.uniform(), dt = 0.2 + rng.uniform();
    const auto exact = master_equation_solve(conc, kp, km, p0, dt);
    const auto ref = oracle::rk4_bound_probability(conc, kp, km, p0, dt, 1024);
    for (std::size_t i = 0; i < exact.size(); ++i) rk_dev = std::max(rk_dev, std::abs(exact[i] - ref[i]));
  }
  return {quad_dev <= 1e-8 && trip_dev <= 1e-9 && rk_dev <= 1e-8,
          "quadrature vs E1 " + sci(quad_dev) + " (limit 1e-8), round trip " + sci(trip_dev) +
              " (limit 1e-9), master equation vs RK4 " + sci(rk_dev) + " (limit 1e-8)"};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Verdict cli_determinism() {
  const fs::path scratch = fs::path(MOLCAP_ACCEPTANCE_SCRATCH);
  fs::remove_all(scratch);
  int configs = 0, mismatched = 0, failed = 0;
  std::size_t files = 0;
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(fs::path(MOLCAP_SOURCE_DIR) / "configs")) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());
  for (const fs::path& config : entries) {
    const std::string stem = config.stem().string();
    const std::string command = stem.substr(0, stem.find('_'));
    std::map<std::string, std::string> runs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = scratch / (stem + "_" + std::to_string(k));
      const std::string cmd = std::string(MOLCAP_CLI_PATH) + " " + command + " --config " + config.string() +
                              " --out " + out.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ++failed;
      runs[k] = snapshot(out);
    }
    ++configs;
    files += runs[0].size();
    if (runs[0].empty() || runs[0] != runs[1]) ++mismatched;
  }
  return {configs > 0 && mismatched == 0 && failed == 0,
          std::to_string(configs) + " configs, " + std::to_string(files) + " artifacts, " +
              std::to_string(mismatched) + " differing, " + std::to_string(failed) + " failed runs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> body;
    double time_limit_s;  ///< 0 means no limit
  };
  const std::vector<Criterion> criteria = {
      {1, "lumped chain vs full-state brute force", lumping_oracle, 30.0},
      {2, "equal moments give equal kernels", moment_sufficiency, 0.0},
      {3, "support reduction keeps the rate", rate_invariance, 0.0},
      {4, "two-point optimum for one receptor", two_point_optimum, 120.0},
      {5, "support bound and root count for N = 2, 3, 4", support_and_roots, 600.0},
      {6, "Monte Carlo rate consistency", monte_carlo, 0.0},
      {7, "diffusion coefficients, inversion, master equation", diffusion, 0.0},
      {8, "CLI reruns are byte-identical", cli_determinism, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += ", over the time limit";
    }
    char timing[64];
    if (c.time_limit_s > 0.0) std::snprintf(timing, sizeof timing, "%.1f s, limit %.0f s", secs, c.time_limit_s);
    else std::snprintf(timing, sizeof timing, "%.1f s", secs);
    std::printf("%s  [%d] %s: %s (%s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), timing);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
