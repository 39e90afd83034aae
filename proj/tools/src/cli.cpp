#include "ssalt/cli.hpp"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "ssalt/bayes.hpp"
#include "ssalt/error.hpp"
#include "ssalt/fisher.hpp"
#include "ssalt/fixtures.hpp"
#include "ssalt/io.hpp"
#include "ssalt/likelihood.hpp"
#include "ssalt/model.hpp"
#include "ssalt/planner.hpp"
#include "ssalt/simulate.hpp"

namespace ssalt::cli {

namespace {

/// Fully resolved options shared by the subcommands.
struct RunConfig {
  std::vector<double> plan{950.0, 1200.0, 1400.0};
  double tau = 400.0;
  double censor = 700.0;
  double threshold = 1.0;
  int n = 30;
  std::uint64_t seed = 1;
  std::vector<double> p_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> theta_star;  // a,b,c,d,sx2,sy2,rho
  std::vector<double> theta;       // mu_X1,mu_X2,mu_Y1,mu_Y2,sx2,sy2,rho
  double prior_var = 1e4;
  int iters = 50000;
  int burnin = 10000;
  std::string out;
  std::string chain_out;
  std::string plot_prefix;
  std::string data;
  std::string fixture;
  std::string space = "link";
  int starts = 8;
  int replicates = 500;
  unsigned threads = 1;
  bool sigma_as_sd = false;
  bool standard_errors = false;
  bool printed_assembly = false;
};

StressPlan make_plan(const RunConfig& c) {
  if (c.plan.size() != 3) {
    throw DomainError("--plan expects s0,s1,s2");
  }
  StressPlan plan =
      StressPlan::two_level(c.plan[0], c.plan[1], c.plan[2], c.tau, c.censor,
                            c.threshold);
  plan.validate();
  return plan;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string describe(const std::string& command, const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17) << "command=" << command
     << " plan=" << join(c.plan) << " tau=" << c.tau << " censor=" << c.censor
     << " threshold=" << c.threshold << " n=" << c.n << " seed=" << c.seed;
  if (!c.theta_star.empty()) os << " theta_star=" << join(c.theta_star);
  if (!c.theta.empty()) os << " theta=" << join(c.theta);
  if (!c.data.empty()) os << " data=" << c.data;
  if (!c.fixture.empty()) os << " fixture=" << c.fixture;
  if (command == "plan") {
    os << " p_grid=" << join(c.p_grid) << " sigma_as_sd=" << c.sigma_as_sd;
  }
  if (command == "bayes") {
    os << " prior_var=" << c.prior_var << " iters=" << c.iters
       << " burnin=" << c.burnin;
  }
  if (command == "fit" || command == "mc-study") {
    os << " space=" << c.space << " starts=" << c.starts;
  }
  if (command == "mc-study") os << " replicates=" << c.replicates;
  if (command == "fisher" || command == "plan") {
    os << " assembly=" << (c.printed_assembly ? "printed" : "expectation");
  }
  return os.str();
}

ThetaLink theta_star_of(const RunConfig& c) {
  if (c.theta_star.empty()) return fixtures::table1_theta_star();
  if (c.theta_star.size() != 7) {
    throw DomainError("--theta-star expects 7 values a,b,c,d,sx2,sy2,rho");
  }
  std::array<double, 7> a{};
  std::copy(c.theta_star.begin(), c.theta_star.end(), a.begin());
  ThetaLink link = ThetaLink::from_array(a);
  link.validate();
  return link;
}

/// Natural theta from --theta, else --theta-star through the link, else the
/// given fallback.
ThetaNatural theta_of(const RunConfig& c, const StressPlan& plan,
                      const ThetaNatural& fallback) {
  if (!c.theta.empty()) {
    if (c.theta.size() != 7) {
      throw DomainError("--theta expects 7 values mu_X1,mu_X2,mu_Y1,mu_Y2,"
                        "sx2,sy2,rho");
    }
    ThetaNatural t = ThetaNatural::from_vector(c.theta);
    t.validate();
    return t;
  }
  if (!c.theta_star.empty()) return link_to_natural(theta_star_of(c), plan);
  return fallback;
}

Dataset load_data(const RunConfig& c) {
  if (!c.data.empty() && !c.fixture.empty()) {
    throw DomainError("use either --data or --fixture, not both");
  }
  if (!c.data.empty()) return io::parse_dataset(c.data, make_plan(c));
  if (c.fixture == "table3-300") return fixtures::table3_dataset(300);
  if (c.fixture == "table3-400") return fixtures::table3_dataset(400);
  if (c.fixture == "table3-500") return fixtures::table3_dataset(500);
  if (c.fixture == "table6") return fixtures::table6_dataset();
  if (c.fixture.empty()) throw DomainError("a dataset is required (--data)");
  throw DomainError("unknown fixture '" + c.fixture +
                    "' (table3-300, table3-400, table3-500, table6)");
}

/// Writes to --out when given, else to the stream.
void emit(const std::string& path, std::ostream& fallback,
          const std::string& text) {
  if (path.empty()) {
    fallback << text;
    if (!text.empty() && text.back() != '\n') fallback << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
  if (!os) throw DomainError("failed writing '" + path + "'");
}

FitOptions fit_options(const RunConfig& c) {
  FitOptions o;
  if (c.space == "link") {
    o.space = DriftSpace::kLink;
  } else if (c.space == "natural") {
    o.space = DriftSpace::kNatural;
  } else {
    throw DomainError("--space must be 'link' or 'natural'");
  }
  o.starts = c.starts;
  o.seed = c.seed;
  o.threads = c.threads;
  o.standard_errors = c.standard_errors;
  return o;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const StressPlan plan = make_plan(c);
  if (c.n < 0) throw DomainError("--n must be non-negative");
  const ThetaNatural theta = link_to_natural(theta_star_of(c), plan);
  const Dataset data =
      simulate_dataset(static_cast<std::size_t>(c.n), theta, plan, c.seed);
  io::RunMetadata meta{c.seed, describe("simulate", c)};
  std::ostringstream os;
  io::write_dataset(os, data, &meta);
  emit(c.out, out, os.str());
  return kExitOk;
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset data = load_data(c);
  const FitOptions o = fit_options(c);
  const FitResult fit = c.theta.empty() && c.theta_star.empty()
                            ? fit_mle(data, o)
                            : fit_mle(data, theta_of(c, data.plan, {}), o);
  emit(c.out, out, io::to_json(fit, {c.seed, describe("fit", c)}));
  if (!fit.converged) {
    err << "fit: optimizer did not converge (best log-likelihood "
        << fit.loglik << ")\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_bayes(const RunConfig& c, std::ostream& out) {
  const Dataset data = load_data(c);
  ThetaLink init;
  if (!c.theta_star.empty()) {
    init = theta_star_of(c);
  } else {
    FitOptions o = fit_options(c);
    o.space = DriftSpace::kLink;
    const FitResult fit = fit_mle(data, o);
    init = *fit.theta_link_hat;
  }
  PriorConfig prior;
  prior.normal_variance = c.prior_var;
  MhConfig mh;
  mh.total = c.iters;
  mh.burn_in = c.burnin;
  const Chain chain = rw_mh(data, init, prior, mh, c.seed);
  const io::RunMetadata meta{c.seed, describe("bayes", c)};
  if (!c.chain_out.empty()) {
    std::ofstream os(c.chain_out);
    if (!os) throw DomainError("cannot open '" + c.chain_out + "'");
    io::write_metadata_lines(os, meta);
    write_chain_csv(os, chain);
  }
  emit(c.out, out, io::to_json(summarize_chain(chain), meta));
  return kExitOk;
}

int cmd_fisher(const RunConfig& c, std::ostream& out) {
  const StressPlan plan = make_plan(c);
  const ThetaNatural theta =
      theta_of(c, plan, link_to_natural(fixtures::table1_theta_star(), plan));
  const InfoMatrix info =
      fisher_matrix(theta, plan, c.n,
                    c.printed_assembly ? FisherAssembly::kPrinted
                                       : FisherAssembly::kExpectation);
  emit(c.out, out, io::to_json(info, {c.seed, describe("fisher", c)}));
  return kExitOk;
}

int cmd_plan(const RunConfig& c, std::ostream& out) {
  const StressPlan plan = make_plan(c);
  const ThetaNatural theta =
      theta_of(c, plan, fixtures::section5_estimates(!c.sigma_as_sd));
  PlannerOptions o;
  o.threads = c.threads;
  o.assembly = c.printed_assembly ? FisherAssembly::kPrinted
                                  : FisherAssembly::kExpectation;
  const auto rows = plan_report(c.p_grid, theta, plan, c.n, o);
  const io::RunMetadata meta{c.seed, describe("plan", c)};
  std::ostringstream table;
  io::write_metadata_lines(table, meta);
  write_plan_csv(table, rows);
  emit(c.out, out, table.str());
  if (!c.plot_prefix.empty()) {
    std::ostringstream tau_csv, cv_csv;
    io::write_metadata_lines(tau_csv, meta);
    write_tau_curve_csv(tau_csv, rows);
    io::write_metadata_lines(cv_csv, meta);
    write_cv_curve_csv(cv_csv, rows);
    emit(c.plot_prefix + "_tau.csv", out, tau_csv.str());
    emit(c.plot_prefix + "_cv.csv", out, cv_csv.str());
  }
  return kExitOk;
}

int cmd_mc_study(const RunConfig& c, std::ostream& out) {
  const StressPlan plan = make_plan(c);
  if (c.n <= 0 || c.replicates <= 0) {
    throw DomainError("--n and --replicates must be positive");
  }
  const ThetaNatural truth = link_to_natural(theta_star_of(c), plan);
  McStudyOptions o;
  o.fit = fit_options(c);
  o.threads = c.threads;
  const McStudyReport report =
      mc_study(static_cast<std::size_t>(c.replicates),
               static_cast<std::size_t>(c.n), truth, plan, c.seed, o);
  const io::RunMetadata meta{c.seed, describe("mc-study", c)};
  std::ostringstream os;
  io::write_mc_csv(os, report, &meta);
  emit(c.out, out, os.str());
  return kExitOk;
}

void add_plan_options(CLI::App* app, RunConfig& c) {
  app->add_option("--plan", c.plan, "Stresses s0,s1,s2 (degrees C)")
      ->delimiter(',')
      ->expected(3);
  app->add_option("--tau", c.tau, "Stress changing time");
  app->add_option("--censor", c.censor, "Censoring time C");
  app->add_option("--threshold", c.threshold, "Failure threshold D");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  CLI::App app{"Bivariate-Wiener step-stress ALT toolkit", "ssalt"};
  app.set_version_flag("--version", std::string(SSALT_VERSION));
  app.require_subcommand(1);
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker cap (0 = all cores)");
  app.add_option("--out", c.out, "Output path (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate a dataset (CSV)");
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit (JSON)");
  auto* bayes = app.add_subcommand("bayes", "Random-walk MH posterior");
  auto* fisher = app.add_subcommand("fisher", "Fisher information (JSON)");
  auto* plan = app.add_subcommand("plan", "Optimal stress changing times");
  auto* mc = app.add_subcommand("mc-study", "Monte Carlo MLE study (CSV)");
  for (auto* sub : {sim, fit, bayes, fisher, plan, mc}) {
    add_plan_options(sub, c);
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--threads", c.threads, "Worker cap (0 = all cores)");
    sub->add_option("--out", c.out, "Output path (default: stdout)");
  }
  for (auto* sub : {sim, fit, bayes, fisher, mc}) {
    sub->add_option("--theta-star", c.theta_star, "a,b,c,d,sx2,sy2,rho")
        ->delimiter(',')
        ->expected(7);
  }
  for (auto* sub : {sim, fisher, plan, mc}) {
    sub->add_option("--n", c.n, "Number of items");
  }
  for (auto* sub : {fit, bayes}) {
    sub->add_option("--data", c.data, "Dataset CSV (delta,t,y)");
    sub->add_option("--fixture", c.fixture,
                    "Embedded data: table3-300|table3-400|table3-500|table6");
  }
  for (auto* sub : {fit, bayes, mc}) {
    sub->add_option("--space", c.space, "Fit space: link|natural");
    sub->add_option("--starts", c.starts, "Multi-start count");
  }
  for (auto* sub : {fit, fisher, plan}) {
    sub->add_option("--theta", c.theta,
                    "mu_X1,mu_X2,mu_Y1,mu_Y2,sx2,sy2,rho")
        ->delimiter(',')
        ->expected(7);
  }
  for (auto* sub : {fisher, plan}) {
    sub->add_flag("--printed-assembly", c.printed_assembly,
                  "Use the literal count-conditional assembly");
  }
  fit->add_flag("--standard-errors", c.standard_errors,
                "Finite-difference standard errors");
  bayes->add_option("--prior-var", c.prior_var, "Normal prior variance");
  bayes->add_option("--iters", c.iters, "Total iterations");
  bayes->add_option("--burnin", c.burnin, "Burn-in iterations");
  bayes->add_option("--chain-out", c.chain_out, "Chain CSV path");
  plan->add_option("--p-grid", c.p_grid, "Percentile levels")->delimiter(',');
  plan->add_option("--plot-prefix", c.plot_prefix,
                   "Write <prefix>_tau.csv and <prefix>_cv.csv");
  plan->add_flag("--sigma-as-sd", c.sigma_as_sd,
                 "Read the reference scale estimates as standard deviations");
  mc->add_option("--replicates", c.replicates, "Replicate count");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SSALT_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ssalt: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(c, out);
    if (fit->parsed()) return cmd_fit(c, out, err);
    if (bayes->parsed()) return cmd_bayes(c, out);
    if (fisher->parsed()) return cmd_fisher(c, out);
    if (plan->parsed()) return cmd_plan(c, out);
    if (mc->parsed()) return cmd_mc_study(c, out);
  } catch (const std::exception& e) {
    err << "ssalt: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace ssalt::cli
