#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "io.hpp"
#include "molcap/capacity_opt.hpp"
#include "molcap/diffusion.hpp"
#include "molcap/errors.hpp"
#include "molcap/receptor_channel.hpp"
#include "molcap/simulate.hpp"

namespace molcap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  json doc;
  fs::path config_dir;
  fs::path out_dir;
  std::string format;
};

Run load(const std::string& command, const CommandOptions& options, const std::string& default_format) {
  Run run;
  run.doc = read_json(options.config);
  require_schema(run.doc, command + ".config.schema.json");
  run.config_dir = options.config.parent_path();
  const json output = run.doc.value("output", json::object());
  run.out_dir = options.out ? *options.out : fs::path(output.value("path", std::string(".")));
  run.format = options.format ? *options.format : output.value("format", default_format);
  if (run.format != "json" && run.format != "csv") {
    throw ConfigError("--format must be json or csv, got '" + run.format + "'");
  }
  fs::create_directories(run.out_dir);
  return run;
}

OptimizerConfig parse_optimizer(const json& block, const CommandOptions& options) {
  OptimizerConfig c;
  c.k_max = block.value("k_max", c.k_max);
  c.n_starts = block.value("n_starts", c.n_starts);
  c.seed = block.value("seed", c.seed);
  c.max_iters = block.value("max_iters", c.max_iters);
  c.tol = block.value("tol", c.tol);
  c.merge_eps = block.value("merge_eps", c.merge_eps);
  c.weight_floor = block.value("weight_floor", c.weight_floor);
  c.kkt_tol = block.value("kkt_tol", c.kkt_tol);
  c.threads = block.value("threads", c.threads);
  if (block.contains("initial")) {
    for (const auto& d : block.at("initial")) c.initial.push_back(parse_dist(d));
  }
  if (options.seed) c.seed = *options.seed;
  if (options.threads) c.threads = *options.threads;
  c.validate();
  return c;
}

json certificate_json(const KKTCertificate& k) {
  return {{"status", to_string(k.status)},
          {"lambdas", k.lambdas},
          {"stationarity_residual", k.stationarity_residual},
          {"derivative_residual", k.derivative_residual},
          {"root_count", k.root_count},
          {"roots", k.roots},
          {"support_size", k.support_size},
          {"interior_atoms", k.interior_atoms},
          {"equations", k.equations}};
}

json capacity_json(const ReceptorParams& p, const OptimizerConfig& c, const CapacityResult& r) {
  json starts = json::array();
  for (const auto& s : r.starts_log) {
    starts.push_back({{"start_index", s.start_index},
                      {"support_cap", s.support_cap},
                      {"rate_bits", s.rate_bits},
                      {"sweeps", s.sweeps},
                      {"converged", s.converged}});
  }
  return {{"schema_version", 1},
          {"receptor", receptor_json(p)},
          {"rate_bits", r.rate_bits},
          {"dist", dist_json(r.dist, &p)},
          {"support_size", static_cast<int>(r.dist.size())},
          {"support_bound", support_bound(p.n_receptors)},
          {"support_bound_raw", support_bound_raw(p.n_receptors)},
          {"within_bound", r.certificate.support_size <= support_bound(p.n_receptors)},
          {"certificate", certificate_json(r.certificate)},
          {"starts", starts},
          {"optimizer",
           {{"k_max", c.effective_k_max(p.n_receptors)},
            {"n_starts", c.n_starts},
            {"seed", c.seed},
            {"max_iters", c.max_iters},
            {"tol", c.tol},
            {"merge_eps", c.merge_eps},
            {"weight_floor", c.weight_floor},
            {"kkt_tol", c.kkt_tol}}}};
}

const std::vector<std::string> kRowHeader = {
    "n_receptors", "beta",         "alpha_max",     "k_plus",      "k_minus",   "m_max",
    "rate_bits",   "support_size", "support_bound", "certificate", "root_count"};

void add_row(CsvTable& table, const ReceptorParams& p, const CapacityResult& r) {
  table.cell(static_cast<long long>(p.n_receptors))
      .cell(p.beta)
      .cell(alpha(p.m_max, p))
      .cell(p.k_plus)
      .cell(p.k_minus)
      .cell(p.m_max)
      .cell(r.rate_bits)
      .cell(static_cast<long long>(r.dist.size()))
      .cell(static_cast<long long>(support_bound(p.n_receptors)))
      .cell(to_string(r.certificate.status))
      .cell(static_cast<long long>(r.certificate.root_count));
  table.end_row();
}

json row_json(const ReceptorParams& p, const CapacityResult& r) {
  return {{"n_receptors", p.n_receptors},
          {"beta", p.beta},
          {"alpha_max", alpha(p.m_max, p)},
          {"k_plus", p.k_plus},
          {"k_minus", p.k_minus},
          {"m_max", p.m_max},
          {"rate_bits", r.rate_bits},
          {"support_size", static_cast<int>(r.dist.size())},
          {"support_bound", support_bound(p.n_receptors)},
          {"certificate", to_string(r.certificate.status)},
          {"root_count", r.certificate.root_count}};
}

std::string support_text(const DiscreteDist& d) {
  std::string s = "{";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ", ";
    s += format_number(d.atoms()[i]);
  }
  return s + "}";
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

int cmd_capacity(const CommandOptions& options, std::ostream& out) {
  const Run run = load("capacity", options, "json");
  const ReceptorParams params = parse_receptor(run.doc.at("receptor"));
  const OptimizerConfig config = parse_optimizer(run.doc.value("optimizer", json::object()), options);
  const CapacityResult result = optimize_iid(params, config);

  if (run.format == "json") {
    write_json(run.out_dir / "capacity.json", capacity_json(params, config, result));
  } else {
    CsvTable row(kRowHeader);
    add_row(row, params, result);
    write_file(run.out_dir / "capacity.csv", row.text());
    CsvTable atoms({"x", "p", "alpha"});
    for (std::size_t i = 0; i < result.dist.size(); ++i) {
      atoms.cell(result.dist.atoms()[i]).cell(result.dist.weights()[i]).cell(alpha(result.dist.atoms()[i], params));
      atoms.end_row();
    }
    write_file(run.out_dir / "capacity_dist.csv", atoms.text());
  }
  const int n = params.n_receptors;
  out << "capacity: N=" << n << " rate=" << fixed(result.rate_bits, 9) << " bits/epoch"
      << " support=" << result.dist.size() << " " << support_text(result.dist)
      << " bound=" << support_bound(n) << " ((N+4)/2=" << support_bound_raw(n) << ")"
      << " certificate=" << to_string(result.certificate.status)
      << " root_count=" << result.certificate.root_count << " (limit " << n + 1 << ")\n";
  return kOk;
}

std::vector<double> expand_range(const json& range) {
  if (range.is_array()) return range.get<std::vector<double>>();
  const double start = range.at("start").get<double>();
  const double stop = range.at("stop").get<double>();
  const int count = range.at("count").get<int>();
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return v;
}

int cmd_sweep(const CommandOptions& options, std::ostream& out) {
  const Run run = load("sweep", options, "csv");
  const json& axes = run.doc.at("sweep");
  const json base = run.doc.value("receptor", json::object());
  if (axes.contains("alpha_max") && axes.contains("k_plus")) {
    throw ConfigError("sweep: alpha_max and k_plus cannot both be swept");
  }
  CommandOptions serial = options;
  serial.threads = 1;
  const OptimizerConfig config = parse_optimizer(run.doc.value("optimizer", json::object()), serial);

  auto values = [&](const char* key) -> std::vector<json> {
    std::vector<json> v;
    if (!axes.contains(key)) {
      v.push_back(nullptr);
      return v;
    }
    if (std::string(key) == "n_receptors") {
      for (int n : axes.at(key).get<std::vector<int>>()) v.push_back(n);
    } else {
      for (double x : expand_range(axes.at(key))) v.push_back(x);
    }
    return v;
  };
  std::vector<ReceptorParams> points;
  for (const json& n : values("n_receptors")) {
    for (const json& beta : values("beta")) {
      for (const json& a : values("alpha_max")) {
        for (const json& k : values("k_plus")) {
          json block = base;
          if (!n.is_null()) block["n_receptors"] = n;
          if (!beta.is_null()) block["beta"] = beta;
          if (!a.is_null()) {
            block.erase("k_plus");
            block["alpha_max"] = a;
          }
          if (!k.is_null()) {
            block.erase("alpha_max");
            block["k_plus"] = k;
          }
          for (const char* key : {"n_receptors", "beta"}) {
            if (!block.contains(key)) throw ConfigError(std::string("sweep: ") + key + " set neither in receptor nor in sweep");
          }
          points.push_back(parse_receptor(block));
        }
      }
    }
  }

  std::vector<CapacityResult> results(points.size());
  std::vector<std::exception_ptr> failures(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      try {
        results[i] = optimize_iid(points[i], config);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, options.threads.value_or(run.doc.value("optimizer", json::object()).value("threads", 1)));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  if (run.format == "csv") {
    CsvTable table(kRowHeader);
    for (std::size_t i = 0; i < points.size(); ++i) add_row(table, points[i], results[i]);
    write_file(run.out_dir / "sweep.csv", table.text());
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) rows.push_back(row_json(points[i], results[i]));
    write_json(run.out_dir / "sweep.json", {{"schema_version", 1}, {"rows", rows}});
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    out << "sweep: N=" << p.n_receptors << " beta=" << format_number(p.beta)
        << " alpha_max=" << fixed(alpha(p.m_max, p), 6) << " rate=" << fixed(results[i].rate_bits, 9)
        << " support=" << results[i].dist.size() << " certificate=" << to_string(results[i].certificate.status)
        << "\n";
  }
  out << "sweep: " << points.size() << " grid points\n";
  return kOk;
}

int cmd_simulate(const CommandOptions& options, std::ostream& out) {
  const Run run = load("simulate", options, "json");
  const ReceptorParams params = parse_receptor(run.doc.at("receptor"));
  const DiscreteDist dist = parse_dist(run.doc.at("input"));
  dist.check_support(params);
  const auto steps = run.doc.at("steps").get<std::size_t>();
  const std::uint64_t seed = options.seed ? *options.seed : run.doc.value("seed", std::uint64_t{1});
  const std::string init = run.doc.value("initial_state", std::string("stationary"));
  const bool write_traj = run.doc.value("write_trajectory", true);
  EstimatorOptions est_opts;
  const json est_block = run.doc.value("estimator", json::object());
  est_opts.burn_in_fraction = est_block.value("burn_in_fraction", est_opts.burn_in_fraction);
  est_opts.bootstrap_resamples = est_block.value("bootstrap_resamples", est_opts.bootstrap_resamples);
  est_opts.block_length = est_block.value("block_length", est_opts.block_length);
  est_opts.min_bin_samples = est_block.value("min_bin_samples", est_opts.min_bin_samples);

  const double analytic = iid_rate(dist, params);
  const double analytic_bound = stationary_distribution(lumped_kernel(dist, params)).bound_probability();
  const Trajectory traj = simulate_trajectory(
      dist, params, steps, seed, init == "all_unbound" ? InitialState::AllUnbound : InitialState::StationarySample);
  const RateEstimate est = empirical_rate(traj, dist, params, est_opts);

  json traj_file = nullptr;
  if (write_traj) {
    CsvTable table({"t", "x", "count_bound"});
    table.cell(0LL).empty_cell().cell(static_cast<long long>(traj.bound_count(0)));
    table.end_row();
    for (std::size_t t = 1; t <= traj.steps(); ++t) {
      table.cell(static_cast<long long>(t)).cell(traj.inputs[t - 1]).cell(static_cast<long long>(traj.bound_count(t)));
      table.end_row();
    }
    write_file(run.out_dir / "trajectory.csv", table.text());
    traj_file = "trajectory.csv";
  }
  const double lo = est.rate - 3.0 * est.std_error;
  const double hi = est.rate + 3.0 * est.std_error;
  const bool inside = analytic >= lo && analytic <= hi;
  const std::size_t block = est_opts.block_length ? est_opts.block_length
                                                  : static_cast<std::size_t>(std::sqrt(static_cast<double>(steps)));
  write_json(run.out_dir / "estimate.json",
             {{"schema_version", 1},
              {"receptor", receptor_json(params)},
              {"input", dist_json(dist, &params)},
              {"steps", steps},
              {"seed", seed},
              {"initial_state", init},
              {"burn_in_fraction", est_opts.burn_in_fraction},
              {"bootstrap_resamples", est_opts.bootstrap_resamples},
              {"block_length", block},
              {"analytic_rate", analytic},
              {"rate", est.rate},
              {"std_error", est.std_error},
              {"band_lower", lo},
              {"band_upper", hi},
              {"analytic_within_3sigma", inside},
              {"h_output_given_past", est.h_output_given_past},
              {"h_output_given_input_and_past", est.h_output_given_input_and_past},
              {"bound_fraction", est.bound_fraction},
              {"analytic_bound_fraction", analytic_bound},
              {"transitions", est.transitions},
              {"sparse_bins", est.sparse_bins},
              {"trajectory_file", traj_file}});
  out << "simulate: analytic=" << fixed(analytic, 6) << " empirical=" << fixed(est.rate, 6) << " +/- "
      << fixed(est.std_error, 6) << " bits/epoch, 3-sigma band [" << fixed(lo, 6) << ", " << fixed(hi, 6)
      << "] " << (inside ? "contains" : "MISSES") << " the analytic rate"
      << (est.sparse_bins ? " (sparse bins, error bar doubled)" : "") << "\n";
  return kOk;
}

std::vector<double> read_schedule_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open schedule file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty schedule file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) {
      if (!col.empty() && col.back() == '\r') col.pop_back();
      header.push_back(col);
    }
  }
  const auto it = std::find(header.begin(), header.end(), "rate");
  if (it == header.end()) throw ConfigError(path.string() + ": header has no 'rate' column");
  const std::size_t col = it - header.begin();
  std::vector<double> rates;
  for (int row = 2; std::getline(in, line); ++row) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c <= col; ++c) {
      if (!std::getline(ss, cell, ',')) throw ConfigError(path.string() + ": row " + std::to_string(row) + " is short");
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || (res.ptr != cell.data() + cell.size() && *res.ptr != '\r')) {
      throw ConfigError(path.string() + ": row " + std::to_string(row) + ": bad number '" + cell + "'");
    }
    rates.push_back(v);
  }
  return rates;
}

int cmd_diffusion(const CommandOptions& options, std::ostream& out) {
  const Run run = load("diffusion", options, "json");
  const json& block = run.doc.at("diffusion");
  DiffusionConfig config;
  config.d_coeff = block.at("d_coeff").get<double>();
  config.r_dist = block.at("r_dist").get<double>();
  config.delta = block.at("delta").get<double>();
  config.kernel_exponent = block.value("kernel_exponent", 1.0);
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("diffusion: ") + e.what());
  }
  const int epochs = run.doc.at("epochs").get<int>();
  const json& sched = run.doc.at("schedule");
  EmissionSchedule schedule;
  std::string kind;
  if (sched.contains("impulse")) {
    kind = "impulse";
    schedule.rates.assign(epochs, 0.0);
    schedule.rates[0] = 1.0;
  } else if (sched.contains("rates")) {
    kind = "rates";
    schedule.rates = sched.at("rates").get<std::vector<double>>();
  } else {
    kind = "csv";
    fs::path p = sched.at("csv").get<std::string>();
    if (p.is_relative()) p = run.config_dir / p;
    schedule.rates = read_schedule_csv(p);
  }
  if (static_cast<int>(schedule.rates.size()) != epochs) {
    throw ConfigError("schedule has " + std::to_string(schedule.rates.size()) + " rates but epochs = " +
                      std::to_string(epochs));
  }
  try {
    schedule.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }

  std::vector<std::string> files;
  const std::vector<double> h = impulse_coeffs(config, epochs);
  const bool closed = config.kernel_exponent == 1.0;
  json closed_diff = nullptr;
  {
    std::vector<std::string> header = {"n", "h"};
    std::vector<double> hc;
    if (closed) {
      header.push_back("h_closed_form");
      hc = impulse_coeffs_closed_form(config, epochs);
      double worst = 0.0;
      for (int n = 1; n <= epochs; ++n) worst = std::max(worst, std::abs(h[n] - hc[n]) / std::abs(hc[n]));
      closed_diff = worst;
    }
    CsvTable table(header);
    for (int n = 0; n <= epochs; ++n) {
      table.cell(static_cast<long long>(n)).cell(h[n]);
      if (closed) table.cell(hc[n]);
      table.end_row();
    }
    write_file(run.out_dir / "coefficients.csv", table.text());
    files.push_back("coefficients.csv");
  }

  const std::vector<double> c = concentration_sequence(schedule, h);
  {
    CsvTable table({"t", "value"});
    for (int m = 0; m < epochs; ++m) {
      table.cell(m * config.delta).cell(c[m]);
      table.end_row();
    }
    write_file(run.out_dir / "concentration.csv", table.text());
    files.push_back("concentration.csv");
  }
  json impulse_diff = nullptr;
  if (kind == "impulse") {
    double worst = 0.0;
    for (int m = 0; m < epochs; ++m) worst = std::max(worst, std::abs(c[m] - h[m]));
    impulse_diff = worst;
  }

  const std::vector<double> samples = receiver_samples(schedule, h);
  json round_trip = {{"performed", false}, {"max_rel_error", nullptr}, {"negative_rates", nullptr}};
  if (run.doc.value("invert", false)) {
    const InversionResult inv = invert_concentration(samples, h);
    double err = 0.0, scale = 0.0;
    for (int n = 0; n < epochs; ++n) {
      err = std::max(err, std::abs(inv.rates[n] - schedule.rates[n]));
      scale = std::max(scale, std::abs(schedule.rates[n]));
    }
    const double rel = scale > 0.0 ? err / scale : err;
    round_trip = {{"performed", true}, {"max_rel_error", rel}, {"negative_rates", inv.negative_rates}};
    CsvTable table({"t", "value"});
    for (int n = 0; n < epochs; ++n) {
      table.cell(n * config.delta).cell(inv.rates[n]);
      table.end_row();
    }
    write_file(run.out_dir / "inverted.csv", table.text());
    files.push_back("inverted.csv");
    out << "diffusion: round-trip max relative error " << format_number(rel) << "\n";
  }

  const bool with_master = run.doc.contains("master_equation");
  if (with_master) {
    const json& me = run.doc.at("master_equation");
    const std::vector<double> p = master_equation_solve(samples, me.at("k_plus").get<double>(),
                                                        me.at("k_minus").get<double>(),
                                                        me.value("p0", 0.0), config.delta);
    CsvTable table({"t", "value"});
    for (std::size_t n = 0; n < p.size(); ++n) {
      table.cell(static_cast<double>(n) * config.delta).cell(p[n]);
      table.end_row();
    }
    write_file(run.out_dir / "bound_probability.csv", table.text());
    files.push_back("bound_probability.csv");
  }

  write_json(run.out_dir / "diffusion.json",
             {{"schema_version", 1},
              {"diffusion",
               {{"d_coeff", config.d_coeff},
                {"r_dist", config.r_dist},
                {"delta", config.delta},
                {"kernel_exponent", config.kernel_exponent}}},
              {"epochs", epochs},
              {"schedule", kind},
              {"closed_form", {{"included", closed}, {"max_rel_diff", closed_diff}}},
              {"round_trip", round_trip},
              {"impulse_max_abs_diff", impulse_diff},
              {"master_equation", with_master},
              {"files", files}});
  out << "diffusion: " << epochs << " epochs, schedule=" << kind;
  if (closed) out << ", quadrature vs closed form max relative difference " << format_number(closed_diff.get<double>());
  out << "\n";
  return kOk;
}

int cmd_reduce(const CommandOptions& options, std::ostream& out) {
  const Run run = load("reduce", options, "json");
  const DiscreteDist dist = parse_dist(run.doc.at("dist"));
  const std::string selector = run.doc.at("functions").get<std::string>();
  std::vector<TestFunction> funcs;
  std::vector<std::string> names;
  if (selector == "mean") {
    funcs.emplace_back([](double x) { return x; });
    names.emplace_back("x");
  } else {
    if (!run.doc.contains("receptor")) throw ConfigError("reduce: functions '" + selector + "' need a receptor block");
    const ReceptorParams params = parse_receptor(run.doc.at("receptor"));
    dist.check_support(params);
    const int order = run.doc.value("order", params.n_receptors);
    funcs = moment_functions(params, order, selector == "moments_entropy");
    for (int j = 1; j <= order; ++j) names.push_back("alpha^" + std::to_string(j));
    if (selector == "moments_entropy") names.emplace_back("h2_alpha");
  }
  const DiscreteDist reduced = reduce_support(dist, funcs);

  CsvTable table({"function", "before", "after", "delta"});
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    const double before = dist.expectation(funcs[i]);
    const double after = reduced.expectation(funcs[i]);
    worst = std::max(worst, std::abs(after - before));
    table.cell(names[i]).cell(before).cell(after).cell(after - before);
    table.end_row();
    rows.push_back({{"name", names[i]}, {"before", before}, {"after", after}, {"delta", after - before}});
  }
  write_file(run.out_dir / "expectations.csv", table.text());
  write_json(run.out_dir / "reduced.json",
             {{"schema_version", 1},
              {"functions", selector},
              {"input", dist_json(dist)},
              {"reduced", dist_json(reduced)},
              {"expectations", rows},
              {"max_abs_delta", worst}});
  out << "reduce: " << dist.size() << " atoms -> " << reduced.size() << " atoms " << support_text(reduced)
      << ", max |delta| = " << format_number(worst) << "\n";
  return kOk;
}

}  // namespace

int run_command(const std::string& name, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  const std::string prefix = "molcap " + name + ": ";
  try {
    if (name == "capacity") return cmd_capacity(options, out);
    if (name == "sweep") return cmd_sweep(options, out);
    if (name == "simulate") return cmd_simulate(options, out);
    if (name == "diffusion") return cmd_diffusion(options, out);
    if (name == "reduce") return cmd_reduce(options, out);
    err << prefix << "unknown command\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << prefix << e.what() << "\n";
    return kConfigError;
  } catch (const DegenerateInputError& e) {
    err << prefix << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::logic_error& e) {
    // DomainError, invalid_argument and length_error all signal unusable parameters.
    err << prefix << "invalid parameter: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << prefix << "config: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << prefix << "output: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << prefix << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace molcap::cli
