#include "hetquant/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "hetquant/bounds.hpp"
#include "hetquant/distributions.hpp"
#include "hetquant/exact.hpp"
#include "hetquant/montecarlo.hpp"

namespace hetquant::cli {
namespace {

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

template <typename T>
T parse_scalar(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_colon(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return parts;
}

// Thresholds come from either --t or --t-grid.
struct ThresholdFlags {
  std::optional<double> single;
  std::string grid;

  void attach(CLI::App* cmd, const char* t_help) {
    auto* t = cmd->add_option("--t", single, t_help);
    auto* g = cmd->add_option("--t-grid", grid, "grid lo:hi:steps (inclusive)");
    t->excludes(g);
  }

  std::vector<double> values() const {
    if (single) return {*single};
    if (grid.empty()) throw UsageError("one of --t or --t-grid is required");
    return parse_grid(grid);
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

void require_base(const HeteroSample& sample, BaseKind kind, std::string_view which) {
  if (sample.common_base() != kind) {
    throw std::domain_error("--which " + std::string(which) + " requires every law to be " +
                            std::string(to_string(kind)));
  }
}

// ---- exact ---------------------------------------------------------------

struct ExactArgs {
  std::string sample_path;
  double p = 0.5;
  ThresholdFlags thresholds;
};

void cmd_exact(const ExactArgs& a, Context& ctx) {
  const auto ts = a.thresholds.values();
  const auto sample = load_sample(a.sample_path);
  const auto tails = upper_tail_grid(sample, a.p, ts);
  ctx.out << "t,upper_tail,cdf\n";
  for (const auto& tail : tails) {
    ctx.out << format_number(tail.t) << ',' << format_number(tail.prob) << ','
            << format_number(order_stat_cdf(sample, a.p, tail.t)) << '\n';
  }
}

// ---- bound ---------------------------------------------------------------

struct BoundArgs {
  std::string sample_path;
  std::string which;
  double p = 0.5;
  std::optional<double> tau;
  ThresholdFlags thresholds;
};

void cmd_bound(const BoundArgs& a, Context& ctx) {
  const auto ts = a.thresholds.values();
  if (a.which == "percentile" && !a.tau) throw UsageError("--which percentile needs --tau");
  const auto sample = load_sample(a.sample_path);
  const auto sigmas = sample.sigmas();
  auto& out = ctx.out;

  if (a.which == "theorem1" || a.which == "corollary1") {
    const bool t1 = a.which == "theorem1";
    out << "t,upper_bound,upper_ok,lower_bound,lower_ok\n";
    for (double t : ts) {
      const auto up = t1 ? theorem1_upper(sample, a.p, t) : corollary1_upper(sample, a.p, t);
      const auto lo = t1 ? theorem1_lower(sample, a.p, t) : corollary1_lower(sample, a.p, t);
      out << format_number(t) << ',' << format_number(up.prob_bound) << ','
          << fmt_bool(up.condition_ok) << ',' << format_number(lo.prob_bound) << ','
          << fmt_bool(lo.condition_ok) << '\n';
    }
  } else if (a.which == "theorem2") {
    if (!sample.common_base()) {
      throw std::domain_error("--which theorem2 requires every law to share one base distribution");
    }
    out << "t,bound,ok\n";
    for (double t : ts) {
      const auto b = theorem2_median_bound(sample, t);
      out << format_number(t) << ',' << format_number(b.prob_bound) << ','
          << fmt_bool(b.condition_ok) << '\n';
    }
  } else if (a.which == "normal" || a.which == "cauchy" || a.which == "laplace") {
    const BaseKind kind = a.which == "normal"   ? BaseKind::Normal
                          : a.which == "cauchy" ? BaseKind::Cauchy
                                                : BaseKind::Laplace;
    require_base(sample, kind, a.which);
    out << "t,radius,bound,coverage,ok\n";
    for (double t : ts) {
      const auto r = kind == BaseKind::Normal   ? normal_median_radius(sigmas, t)
                     : kind == BaseKind::Cauchy ? cauchy_median_radius(sigmas, t)
                                                : laplace_median_radius(sigmas, t);
      out << format_number(t) << ',' << format_number(*r.radius) << ','
          << format_number(r.prob_bound) << ',' << format_number(1.0 - r.prob_bound) << ','
          << fmt_bool(r.condition_ok) << '\n';
    }
  } else if (a.which == "percentile") {
    require_base(sample, BaseKind::Normal, a.which);
    out << "t,upper_center,upper_radius,upper_bound,upper_ok,"
           "lower_center,lower_radius,lower_bound,lower_ok\n";
    for (double t : ts) {
      const auto b = normal_percentile_bound(sigmas, *a.tau, t);
      out << format_number(t);
      for (const auto* side : {&b.upper, &b.lower}) {
        out << ',' << format_number(side->center) << ',' << format_number(*side->bound.radius)
            << ',' << format_number(side->bound.prob_bound) << ','
            << fmt_bool(side->bound.condition_ok);
      }
      out << '\n';
    }
  } else {
    throw UsageError("unknown --which '" + a.which + "'");
  }
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string sample_path;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::string statistic = "median-abs";
  std::string median = "order-index";
  double p = 0.5;
  std::optional<double> t;
};

void cmd_simulate(const SimulateArgs& a, Context& ctx) {
  Statistic stat;
  if (a.statistic == "median-abs") {
    stat = Statistic::median_abs();
  } else {
    if (!a.t) throw UsageError("--statistic " + a.statistic + " needs --t");
    stat = a.statistic == "order-tail" ? Statistic::order_stat_tail(a.p, *a.t)
                                       : Statistic::median_tail(*a.t);
  }
  const auto convention =
      a.median == "order-index" ? MedianConvention::OrderIndex : MedianConvention::Conventional;
  McConfig config{load_sample(a.sample_path), a.replicates, a.seed, stat, convention};
  const auto est = run(config);
  if (est.single_replicate) ctx.err << "warning: one replicate, std_error reported as 0\n";
  ctx.out << "mean,std_error,replicates,seed\n"
          << format_number(est.mean) << ',' << format_number(est.std_error) << ','
          << est.replicates << ',' << est.seed << '\n';
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::size_t n1 = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::string n2_range;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::optional<double> target;
};

std::pair<std::size_t, std::size_t> parse_range(std::string_view text) {
  const auto parts = split_colon(text);
  if (parts.size() != 2) throw UsageError("expected range lo:hi, got '" + std::string(text) + "'");
  const auto lo = parse_scalar<std::size_t>(parts[0], "range start");
  const auto hi = parse_scalar<std::size_t>(parts[1], "range end");
  if (lo > hi) throw UsageError("empty range '" + std::string(text) + "'");
  return {lo, hi};
}

void cmd_sweep(const SweepArgs& a, Context& ctx) {
  const auto [lo, hi] = parse_range(a.n2_range);
  std::ofstream file;
  if (!a.out_path.empty()) {
    file.open(a.out_path);
    if (!file) throw std::runtime_error("cannot write output file '" + a.out_path + "'");
  }
  std::ostream& csv = a.out_path.empty() ? ctx.out : file;
  // With CSV on stdout the summary goes to stderr.
  std::ostream& summary = a.out_path.empty() ? ctx.err : ctx.out;

  const auto rows = sweep_n2(a.n1, a.sigma1, a.sigma2, lo, hi, a.replicates, a.seed);
  csv << "n2,mean,std_error\n";
  for (const auto& row : rows) {
    csv << row.n2 << ',' << format_number(row.estimate.mean) << ','
        << format_number(row.estimate.std_error) << '\n';
  }
  csv.flush();
  if (!csv) throw std::runtime_error("failed writing output file '" + a.out_path + "'");

  if (a.target) {
    const auto hit = std::find_if(rows.begin(), rows.end(),
                                  [&](const SweepRow& r) { return r.estimate.mean <= *a.target; });
    if (hit != rows.end()) {
      summary << "smallest n2 with mean <= " << format_number(*a.target) << ": " << hit->n2 << '\n';
    } else {
      summary << "no n2 in range has mean <= " << format_number(*a.target) << '\n';
    }
  }
}

// ---- plan ----------------------------------------------------------------

struct PlanArgs {
  std::size_t n1 = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double target = 0.0;
  double t = 0.0;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
};

void cmd_plan(const PlanArgs& a, Context& ctx) {
  const auto plan = plan_n2(a.n1, a.sigma1, a.sigma2, a.target, a.t);
  auto& out = ctx.out;
  if (!plan.n2) {
    out << "# infeasible under the bound's conditions for n2 <= 1000000\n"
        << "n2,radius,coverage,mc_mean,mc_se\n"
        << "NA,NA,NA,NA,NA\n";
    return;
  }
  const std::size_t n2 = *plan.n2;
  const std::size_t n = a.n1 + n2;
  const double coverage = 1.0 - 2.0 * std::exp(n % 2 == 0 ? -2.0 * a.t : -0.5 * a.t);

  std::vector<ScaledLaw> laws(a.n1, ScaledLaw(BaseKind::Normal, a.sigma1));
  laws.insert(laws.end(), n2, ScaledLaw(BaseKind::Normal, a.sigma2));
  McConfig config{HeteroSample(std::move(laws)), a.replicates, a.seed, Statistic::median_abs()};
  const auto est = run(config);

  out << "# smallest n2 with radius <= " << format_number(a.target) << ": " << n2
      << " (radius " << format_number(plan.radius) << ", probability >= "
      << format_number(coverage) << "; Monte Carlo E|M| " << format_number(est.mean) << ")\n"
      << "n2,radius,coverage,mc_mean,mc_se\n"
      << n2 << ',' << format_number(plan.radius) << ',' << format_number(coverage) << ','
      << format_number(est.mean) << ',' << format_number(est.std_error) << '\n';
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
  std::string sample_path;
  double p = 0.5;
  std::string grid;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

void cmd_compare(const CompareArgs& a, Context& ctx) {
  const auto ts = parse_grid(a.grid);
  const auto sample = load_sample(a.sample_path);
  const auto rows = empirical_vs_bound(sample, a.p, ts, a.replicates, a.seed);
  ctx.out << "t,exact,mc,mc_se,theorem1,corollary1,t1_ok,c1_ok\n";
  for (const auto& r : rows) {
    ctx.out << format_number(r.t) << ',' << format_number(r.exact) << ','
            << format_number(r.mc.mean) << ',' << format_number(r.mc.std_error) << ','
            << format_number(r.theorem1.prob_bound) << ',' << format_number(r.corollary1.prob_bound)
            << ',' << fmt_bool(r.theorem1.condition_ok) << ','
            << fmt_bool(r.corollary1.condition_ok) << '\n';
  }
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const auto parts = split_colon(text);
  if (parts.size() != 3) throw UsageError("expected grid lo:hi:steps, got '" + std::string(text) + "'");
  const auto lo = parse_scalar<double>(parts[0], "grid start");
  const auto hi = parse_scalar<double>(parts[1], "grid end");
  const auto steps = parse_scalar<std::size_t>(parts[2], "grid step count");
  if (steps == 0) throw UsageError("grid '" + std::string(text) + "' is empty");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw UsageError("grid endpoints must be finite");
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = steps == 1 ? lo
              : i + 1 == steps
                  ? hi
                  : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return grid;
}

std::string format_number(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

PlanResult plan_n2(std::size_t n1, double sigma1, double sigma2, double target, double t,
                   std::size_t max_n2) {
  if (n1 < 1 || !(sigma1 > 0.0) || !(sigma2 > 0.0) || !(target > 0.0) || !(t > 0.0)) {
    throw std::domain_error("plan inputs must be positive");
  }
  PlanResult result;
  for (std::size_t n2 = 0; n2 <= max_n2; ++n2) {
    const double n = static_cast<double>(n1 + n2);
    const double harmonic = static_cast<double>(n1) / sigma1 + static_cast<double>(n2) / sigma2;
    const double radius = kNormalMedianConstant * std::sqrt(n * t) / harmonic;
    const double min_sigma = n2 > 0 ? std::min(sigma1, sigma2) : sigma1;
    const bool parity_ok = (n1 + n2) % 2 == 0 || n * t >= 4.0;
    result.radius = radius;
    if (radius <= target && radius <= 0.5 * min_sigma && parity_ok) {
      result.n2 = n2;
      return result;
    }
  }
  return result;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact distributions and concentration bounds for percentiles of "
               "independent, non-identically distributed samples",
               "hetquant"};
  app.require_subcommand(1);

  const std::vector<std::string> statistics = {"median-abs", "order-tail", "median-tail"};

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "exact tail and CDF of X^(floor(pn))");
  exact_cmd->add_option("sample", exact.sample_path, "sample file")->required();
  exact_cmd->add_option("--p", exact.p, "percentile level, order statistic floor(p n)");
  exact.thresholds.attach(exact_cmd, "threshold t");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "closed-form concentration bounds");
  bound_cmd->add_option("sample", bound.sample_path, "sample file")->required();
  bound_cmd->add_option("--which", bound.which, "bound family")
      ->required()
      ->check(CLI::IsMember(
          {"theorem1", "corollary1", "theorem2", "normal", "cauchy", "laplace", "percentile"}));
  bound_cmd->add_option("--p", bound.p, "percentile level (theorem1, corollary1)");
  bound_cmd->add_option("--tau", bound.tau, "offset from the median (percentile)");
  bound.thresholds.attach(bound_cmd, "deviation or confidence parameter t");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a statistic");
  sim_cmd->add_option("sample", sim.sample_path, "sample file")->required();
  sim_cmd->add_option("--replicates", sim.replicates)->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--statistic", sim.statistic)->check(CLI::IsMember(statistics));
  sim_cmd->add_option("--median", sim.median, "median convention")
      ->check(CLI::IsMember({"order-index", "conventional"}));
  sim_cmd->add_option("--p", sim.p, "percentile level (order-tail)");
  sim_cmd->add_option("--t", sim.t, "tail threshold");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "E|M| of a two-group normal sample against n2");
  sweep_cmd->add_option("--n1", sweep.n1)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--sigma1", sweep.sigma1)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--sigma2", sweep.sigma2)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--n2", sweep.n2_range, "range lo:hi (inclusive)")->required();
  sweep_cmd->add_option("--replicates", sweep.replicates)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed)->required();
  sweep_cmd->add_option("--out", sweep.out_path, "CSV output file (default stdout)");
  sweep_cmd->add_option("--target", sweep.target, "report the smallest n2 with mean <= target");

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "smallest n2 whose median radius meets a target");
  plan_cmd->add_option("--n1", plan.n1)->required()->check(CLI::PositiveNumber);
  plan_cmd->add_option("--sigma1", plan.sigma1)->required()->check(CLI::PositiveNumber);
  plan_cmd->add_option("--sigma2", plan.sigma2)->required()->check(CLI::PositiveNumber);
  plan_cmd->add_option("--target", plan.target)->required()->check(CLI::PositiveNumber);
  plan_cmd->add_option("--confidence-t", plan.t)->required()->check(CLI::PositiveNumber);
  plan_cmd->add_option("--replicates", plan.replicates, "Monte Carlo cross-check replicates")
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--seed", plan.seed);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "exact, Monte Carlo and bounds side by side");
  cmp_cmd->add_option("sample", cmp.sample_path, "sample file")->required();
  cmp_cmd->add_option("--p", cmp.p, "percentile level");
  cmp_cmd->add_option("--t-grid", cmp.grid, "deviation grid lo:hi:steps")->required();
  cmp_cmd->add_option("--replicates", cmp.replicates)->required()->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--seed", cmp.seed)->required();

  CLI::App* active = &app;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    active = app.get_subcommands().front();

    Context ctx{out, err};
    if (active == exact_cmd) cmd_exact(exact, ctx);
    else if (active == bound_cmd) cmd_bound(bound, ctx);
    else if (active == sim_cmd) cmd_simulate(sim, ctx);
    else if (active == sweep_cmd) cmd_sweep(sweep, ctx);
    else if (active == plan_cmd) cmd_plan(plan, ctx);
    else if (active == cmp_cmd) cmd_compare(cmp, ctx);
    return kSuccess;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace hetquant::cli
