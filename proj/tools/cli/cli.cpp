#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <pthread.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmsbayes/classifier.hpp"
#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/diagnostics.hpp"
#include "mmsbayes/elicitation.hpp"
#include "mmsbayes/error.hpp"
#include "mmsbayes/hierarchical.hpp"
#include "mmsbayes/http_server.hpp"
#include "mmsbayes/json_io.hpp"
#include "mmsbayes/session.hpp"
#include "mmsbayes/tally.hpp"
#include "plot.hpp"

namespace mmsbayes::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string beta_text(const BetaParams& p) {
  return "Beta(" + g6(p.alpha()) + ", " + g6(p.beta()) + ")";
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw UsageError(flag + " expects comma-separated numbers, got '" + text + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(flag + " is empty");
  return values;
}

BetaParams parse_beta_flag(const std::string& text, const std::string& flag) {
  const auto v = parse_number_list(text, flag);
  if (v.size() != 2) throw UsageError(flag + " expects a,b");
  return BetaParams(v[0], v[1]);
}

void emit(std::ostream& out, const json& j) {
  out << j.dump(2) << '\n';
}

void print_summary(std::ostream& out, const PosteriorSummary& s) {
  out << "mean       " << g6(s.mean) << '\n';
  out << "mode       " << (s.mode ? g6(*s.mode) : std::string("undefined")) << '\n';
  out << "variance   " << g6(s.variance) << '\n';
  out << g6(100 * s.interval.level) << "% interval [" << g6(s.interval.lower) << ", "
      << g6(s.interval.upper) << "]\n";
}

struct PlotFlags {
  std::string path;
  std::string format;
  std::size_t grid = 512;

  void add(CLI::App* app) {
    app->add_option("--plot", path, "Write a density plot to this path");
    app->add_option("--plot-format", format, "csv-grid or svg (default: from extension)");
    app->add_option("--grid", grid, "Density grid points")->check(CLI::Range(2, 100000));
  }

  std::optional<PlotArtifact> artifact() const {
    if (path.empty()) {
      if (!format.empty()) throw UsageError("--plot-format needs --plot");
      return std::nullopt;
    }
    return PlotArtifact{format.empty() ? plot_format_for_path(path)
                                       : plot_format_from_string(format),
                        path};
  }
};

json plot_json(const std::optional<PlotArtifact>& artifact) {
  if (!artifact) return json();
  return json{{"format", artifact->format == PlotFormat::svg ? "svg" : "csv-grid"},
              {"path", artifact->path}};
}

// elicit ---------------------------------------------------------------------

struct ElicitFlags {
  std::optional<double> mean;
  std::optional<double> ess;
  std::string quantiles;
  PlotFlags plot;
  bool json = false;
};

int cmd_elicit(const ElicitFlags& f, std::ostream& out) {
  const bool by_moments = f.mean || f.ess;
  if (by_moments && !f.quantiles.empty()) {
    throw UsageError("--mean/--ess and --quantiles are mutually exclusive");
  }
  if (!by_moments && f.quantiles.empty()) {
    throw UsageError("give --mean and --ess, or --quantiles");
  }
  if (by_moments && !(f.mean && f.ess)) {
    throw UsageError("--mean and --ess go together");
  }
  const auto artifact = f.plot.artifact();

  std::optional<QuantileFit> fit;
  BetaParams params(1, 1);
  if (by_moments) {
    params = fit_beta_from_mean_ess(*f.mean, *f.ess);
  } else {
    const auto v = parse_number_list(f.quantiles, "--quantiles");
    if (v.size() != 4) throw UsageError("--quantiles expects q1,theta1,q2,theta2");
    fit = fit_beta_from_quantiles({v[0], v[1]}, {v[2], v[3]});
    params = fit->params;
  }
  const auto summary = summarize_beta(params);
  if (artifact) {
    write_plot(*artifact, preview(params, f.plot.grid), "Prior " + beta_text(params),
               summary.mean);
  }

  if (f.json) {
    json j{{"params", json_io::to_json(params)},
           {"summary", json_io::to_json(summary)},
           {"plot", plot_json(artifact)}};
    if (fit) {
      j["fit"] = {{"converged", fit->converged()}, {"residual", fit->residual}};
    }
    emit(out, j);
  } else {
    out << "prior      " << beta_text(params) << '\n';
    if (fit) {
      out << "fit        " << (fit->converged() ? "converged" : "not converged")
          << ", residual " << g6(fit->residual) << '\n';
    }
    print_summary(out, summary);
    if (artifact) out << "plot       " << artifact->path << '\n';
  }
  if (fit && !fit->converged()) {
    throw DomainError("quantile fit did not converge (residual " + g6(fit->residual) + ")");
  }
  return kExitOk;
}

// posterior ------------------------------------------------------------------

struct PosteriorFlags {
  std::string prior;
  std::string csv;
  std::optional<std::uint64_t> y;
  std::optional<std::uint64_t> n;
  double level = kDefaultCredibleLevel;
  bool permissive = false;
  PlotFlags plot;
  bool json = false;
};

int cmd_posterior(const PosteriorFlags& f, std::ostream& out) {
  const BetaParams prior = parse_beta_flag(f.prior, "--prior");
  const bool counts = f.y || f.n;
  if (counts && !f.csv.empty()) throw UsageError("--csv and --y/--n are mutually exclusive");
  if (!counts && f.csv.empty()) throw UsageError("give --csv, or --y and --n");
  if (counts && !(f.y && f.n)) throw UsageError("--y and --n go together");
  const auto artifact = f.plot.artifact();

  CountVector data;
  std::size_t bags = 0;
  if (counts) {
    if (*f.y > *f.n) throw DomainError("--y exceeds --n");
    data = CountVector::binary(*f.y, *f.n);
  } else {
    const auto tallies =
        read_tally_csv(f.csv, f.permissive ? CsvMode::permissive : CsvMode::strict);
    data = pooled_blue(tallies);
    bags = tallies.size();
  }
  const BetaPosterior post = update_beta_binomial(prior, data);
  const auto summary = summarize_beta(post.params, f.level);
  if (artifact) {
    write_plot(*artifact, density_grid(post.params, f.plot.grid),
               "Posterior " + beta_text(post.params), summary.mean);
  }

  if (f.json) {
    emit(out, json{{"prior", json_io::to_json(prior)},
                   {"data", {{"blue", data[0]}, {"total", data.total()}, {"bags", bags}}},
                   {"posterior", json_io::to_json(post.params)},
                   {"summary", json_io::to_json(summary)},
                   {"plot", plot_json(artifact)}});
  } else {
    out << "prior      " << beta_text(prior) << '\n';
    out << "data       y = " << data[0] << ", n = " << data.total();
    if (!counts) out << " (" << bags << " bags)";
    out << '\n';
    out << "posterior  " << beta_text(post.params) << '\n';
    print_summary(out, summary);
    if (artifact) out << "plot       " << artifact->path << '\n';
  }
  return kExitOk;
}

// classify -------------------------------------------------------------------

struct ClassifyFlags {
  std::string csv;
  std::string profiles;
  bool full = false;
  bool permissive = false;
  bool json = false;
};

int cmd_classify(const ClassifyFlags& f, std::ostream& out) {
  const ProfileSet set = load_factory_profiles(f.profiles);
  const auto bags =
      read_tally_csv(f.csv, f.permissive ? CsvMode::permissive : CsvMode::strict);
  if (bags.empty()) throw DomainError("no bags in " + f.csv);

  FactoryPosterior result{Simplex::uniform(2), 0.0};
  if (f.full) {
    CountVector pooled = CountVector::zeros(kColours.size());
    for (const auto& b : bags) {
      if (b.counts.size() != kColours.size()) {
        throw DomainError("--full needs six-colour counts for every bag");
      }
      pooled += b.counts;
    }
    result = classify_full(pooled, set.profiles);
  } else {
    result = classify_blue(pooled_blue(bags), set.profiles);
  }
  std::vector<std::string> names;
  for (const auto& p : set.profiles) names.push_back(p.name);
  const std::size_t best = result.probs[0] >= result.probs[1] ? 0 : 1;
  const CountVector blue = pooled_blue(bags);

  std::vector<std::pair<const BagTally*, LotCodeResult>> lots;
  for (const auto& b : bags) {
    if (b.lot_code) lots.emplace_back(&b, parse_lot_code(*b.lot_code, set.profiles));
  }

  if (f.json) {
    json checks = json::array();
    for (const auto& [bag, parsed] : lots) {
      checks.push_back({{"bag_id", bag->bag_id},
                        {"lot_code", *bag->lot_code},
                        {"parsed", json_io::to_json(parsed)}});
    }
    emit(out, json{{"likelihood", f.full ? "multinomial" : "binomial"},
                   {"data", {{"blue", blue[0]}, {"total", blue.total()}, {"bags", bags.size()}}},
                   {"classification", json_io::to_json(result, names)},
                   {"most_probable", names[best]},
                   {"lot_checks", checks},
                   {"warnings", set.warnings}});
  } else {
    for (const auto& w : set.warnings) out << "warning    " << w << '\n';
    out << "data       y = " << blue[0] << ", n = " << blue.total() << " ("
        << bags.size() << " bags, " << (f.full ? "six colours" : "blue vs not blue")
        << ")\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      out << "P(" << names[i] << ") = " << g6(result.probs[i]) << '\n';
    }
    out << "log BF     " << g6(result.log_bayes_factor) << " (" << names[0] << " vs "
        << names[1] << ")\n";
    out << "verdict    " << names[best] << '\n';
    if (lots.empty()) {
      out << "lot codes  none recorded\n";
    } else {
      for (const auto& [bag, parsed] : lots) {
        out << "lot code   " << bag->bag_id << ' ' << *bag->lot_code << " -> "
            << parsed.factory.value_or("unknown") << " (" << parsed.reason << ")\n";
      }
    }
  }
  return kExitOk;
}

// gibbs ----------------------------------------------------------------------

struct GibbsFlags {
  std::string csv;
  std::string alpha = "1";
  std::string eta = "1";
  std::size_t factories = 2;
  std::uint64_t iters = 10000;
  std::uint64_t burn = 2000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  bool exact_check = false;
  bool permissive = false;
  bool json = false;
};

DirichletParams concentration_flag(const std::string& text, std::size_t size,
                                   const std::string& flag) {
  const auto v = parse_number_list(text, flag);
  if (v.size() == 1) return DirichletParams::symmetric(size, v[0]);
  if (v.size() != size) {
    throw UsageError(flag + " needs 1 or " + std::to_string(size) + " values");
  }
  return DirichletParams(v);
}

double max_discrepancy(const MixturePosteriorSummary& a, const MixturePosteriorSummary& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.assignment_probs.size(); ++i) {
    for (std::size_t f = 0; f < a.assignment_probs[i].size(); ++f) {
      worst = std::max(worst, std::abs(a.assignment_probs[i][f] - b.assignment_probs[i][f]));
    }
  }
  for (std::size_t f = 0; f < a.beta_means.size(); ++f) {
    for (std::size_t k = 0; k < a.beta_means[f].size(); ++k) {
      worst = std::max(worst, std::abs(a.beta_means[f][k] - b.beta_means[f][k]));
    }
  }
  return worst;
}

int cmd_gibbs(const GibbsFlags& f, std::ostream& out) {
  if (f.thin == 0) throw UsageError("--thin must be at least 1");
  if (f.chains == 0) throw UsageError("--chains must be at least 1");
  if (f.burn >= f.iters) throw UsageError("--burn must be smaller than --iters");
  const auto bags =
      read_tally_csv(f.csv, f.permissive ? CsvMode::permissive : CsvMode::strict);
  if (bags.empty()) throw DomainError("no bags in " + f.csv);
  const std::size_t categories = bags.front().counts.size();

  const auto alpha_values = parse_number_list(f.alpha, "--alpha");
  const std::size_t factories = alpha_values.size() == 1 ? f.factories : alpha_values.size();
  if (factories < 2) throw UsageError("need at least two factories");
  const HierarchicalPriors priors{concentration_flag(f.alpha, factories, "--alpha"),
                                  concentration_flag(f.eta, categories, "--eta")};
  const ChainConfig config{f.iters, f.burn, f.thin, f.seed};

  const auto chains = run_chains(bags, priors, config, f.chains);
  const auto summary = summarize_chains(chains);

  std::optional<double> discrepancy;
  std::string skipped;
  if (f.exact_check) {
    if (factories != 2) {
      skipped = "exact check needs two factories";
    } else if (bags.size() > kExactMaxBags) {
      skipped = "exact check needs at most " + std::to_string(kExactMaxBags) + " bags";
    } else {
      discrepancy =
          max_discrepancy(summary, exact_posterior(bags, priors, Labeling::canonical));
    }
  }

  if (f.json) {
    json diag = json::array();
    for (std::size_t c = 0; c < chains.size(); ++c) {
      json scalars = json::array();
      for (const auto& d : diagnostics(chains[c])) scalars.push_back(json_io::to_json(d));
      diag.push_back({{"chain", c}, {"seed", chains[c].seed}, {"scalars", scalars}});
    }
    json bag_ids = json::array();
    for (const auto& b : bags) bag_ids.push_back(b.bag_id);
    json j{{"bags", bag_ids},
           {"config",
            {{"iterations", f.iters}, {"burn_in", f.burn}, {"thin", f.thin},
             {"seed", f.seed}, {"chains", f.chains}}},
           {"priors",
            {{"alpha", priors.alpha.concentration()},
             {"eta", priors.eta.concentration()}}},
           {"summary", json_io::to_json(summary)},
           {"diagnostics", diag}};
    if (f.exact_check) {
      j["exact_check"] = discrepancy ? json{{"max_abs_discrepancy", *discrepancy}}
                                     : json{{"skipped", skipped}};
    }
    emit(out, j);
    return kExitOk;
  }

  out << "bags       " << bags.size() << ", categories " << categories << ", factories "
      << factories << '\n';
  out << "chains     " << chains.size() << " x " << chains.front().states.size()
      << " recorded states (seed " << f.seed << ")\n";
  out << "theta      ";
  for (std::size_t k = 0; k < factories; ++k) {
    out << (k ? " " : "") << g6(summary.theta_mean[k]);
  }
  out << '\n';
  for (std::size_t k = 0; k < factories; ++k) {
    out << "beta[" << k << "]    ";
    for (std::size_t c = 0; c < categories; ++c) {
      out << (c ? " " : "") << g6(summary.beta_means[k][c]);
    }
    out << '\n';
  }
  for (std::size_t b = 0; b < bags.size(); ++b) {
    out << "P(z) " << bags[b].bag_id << "  ";
    for (std::size_t k = 0; k < factories; ++k) {
      out << (k ? " " : "") << g6(summary.assignment_probs[b][k]);
    }
    out << '\n';
  }
  std::optional<double> min_ess;
  std::optional<double> max_rhat;
  for (const auto& chain : chains) {
    for (const auto& d : diagnostics(chain)) {
      if (d.effective_sample_size) {
        min_ess = std::min(min_ess.value_or(INFINITY), *d.effective_sample_size);
      }
      if (d.split_r_hat) max_rhat = std::max(max_rhat.value_or(0.0), *d.split_r_hat);
    }
  }
  out << "min ESS    " << (min_ess ? g6(*min_ess) : std::string("undefined")) << '\n';
  out << "max R-hat  " << (max_rhat ? g6(*max_rhat) : std::string("undefined")) << '\n';
  if (f.exact_check) {
    if (discrepancy) {
      out << "exact check max |discrepancy| = " << g6(*discrepancy) << '\n';
    } else {
      out << "exact check skipped: " << skipped << '\n';
    }
  }
  return kExitOk;
}

// simulate -------------------------------------------------------------------

struct SimulateFlags {
  std::string theta;
  std::string beta_file;
  std::size_t bags = 0;
  std::uint64_t bag_size = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
};

std::string truth_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.rfind('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".truth.json";
  }
  return csv_path + ".truth.json";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << content) || !file.flush()) {
    throw std::runtime_error("cannot write " + path);
  }
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  if (f.bags == 0) throw UsageError("--bags must be at least 1");
  if (f.bag_size == 0) throw UsageError("--bag-size must be at least 1");
  const ProfileSet set = load_factory_profiles(f.beta_file);
  const Simplex theta = Simplex::normalized(parse_number_list(f.theta, "--theta"));
  if (theta.size() != set.profiles.size()) {
    throw UsageError("--theta needs one weight per profile in --beta-file");
  }
  std::vector<Simplex> beta;
  for (const auto& p : set.profiles) beta.push_back(p.colour_proportions);

  Rng rng(f.seed);
  const auto sim = simulate_bags(theta, beta, std::vector<std::uint64_t>(f.bags, f.bag_size), rng);
  write_file(f.out, format_tally_csv(sim.bags));

  json truth_beta = json::array();
  for (const auto& p : set.profiles) {
    json colours = json::object();
    for (std::size_t k = 0; k < kColours.size(); ++k) {
      colours[std::string(kColours[k])] = p.colour_proportions[k];
    }
    truth_beta.push_back({{"name", p.name}, {"colours", colours}});
  }
  json z = json::array();
  for (std::size_t b = 0; b < sim.bags.size(); ++b) {
    z.push_back({{"bag_id", sim.bags[b].bag_id}, {"factory", sim.z[b]}});
  }
  const json truth{{"seed", f.seed},
                   {"theta", theta.weights()},
                   {"bag_size", f.bag_size},
                   {"factories", truth_beta},
                   {"assignments", z}};
  const std::string sidecar = truth_path(f.out);
  write_file(sidecar, truth.dump(2) + "\n");

  if (f.json) {
    emit(out, json{{"csv", f.out}, {"truth", sidecar}, {"bags", sim.bags.size()}});
  } else {
    out << "wrote " << sim.bags.size() << " bags to " << f.out << '\n';
    out << "truth      " << sidecar << '\n';
  }
  return kExitOk;
}

// serve ----------------------------------------------------------------------

struct ServeFlags {
  std::string addr = "127.0.0.1:8080";
  std::string data_dir;
  std::string profiles;
  std::string static_dir;
  bool json = false;
};

int cmd_serve(const ServeFlags& f, std::ostream& out) {
  const auto colon = f.addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr expects host:port");
  HttpServerOptions http;
  http.host = f.addr.substr(0, colon);
  try {
    std::size_t used = 0;
    http.port = std::stoi(f.addr.substr(colon + 1), &used);
    if (used != f.addr.size() - colon - 1 || http.port < 0 || http.port > 65535) {
      throw std::out_of_range("port");
    }
  } catch (const std::logic_error&) {
    throw UsageError("--addr has an invalid port");
  }
  http.static_dir = f.static_dir;

  SessionStoreOptions options;
  options.data_dir = f.data_dir;
  if (options.data_dir.empty()) {
    if (const char* env = std::getenv("MMSBAYES_DATA_DIR")) options.data_dir = env;
  }
  std::string profiles = f.profiles;
  if (profiles.empty()) {
    if (const char* env = std::getenv("MMSBAYES_PROFILES")) profiles = env;
  }
  if (!profiles.empty()) options.profiles = load_factory_profiles(profiles).profiles;
  if (!options.data_dir.empty()) std::filesystem::create_directories(options.data_dir);

  // Block the stop signals before any server thread exists, then wait for one.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionStore store(std::move(options));
  HttpServer server(store, http);
  const int port = server.bind();
  server.start();
  if (f.json) {
    emit(out, json{{"listening", "http://" + http.host + ":" + std::to_string(port)}});
  } else {
    out << "listening on http://" << http.host << ':' << port << std::endl;
  }
  out.flush();
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian analysis of m&m's colour counts", "mmsbayes"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  ElicitFlags elicit;
  auto* e = app.add_subcommand("elicit", "Fit a beta prior to elicited beliefs");
  e->add_option("--mean", elicit.mean, "Prior mean of the blue proportion");
  e->add_option("--ess", elicit.ess, "Effective sample size (alpha + beta)");
  e->add_option("--quantiles", elicit.quantiles,
                "Two CDF statements as q1,theta1,q2,theta2");
  elicit.plot.add(e);
  e->add_flag("--json", elicit.json, "Machine-readable output");

  PosteriorFlags posterior;
  auto* p = app.add_subcommand("posterior", "Beta-binomial update of the blue proportion");
  p->add_option("--prior", posterior.prior, "Prior as alpha,beta")->required();
  p->add_option("--csv", posterior.csv, "Tally CSV")->check(CLI::ExistingFile);
  p->add_option("--y", posterior.y, "Blue count");
  p->add_option("--n", posterior.n, "Total count");
  p->add_option("--level", posterior.level, "Credible level")->check(CLI::Range(0.0, 1.0));
  p->add_flag("--permissive", posterior.permissive, "Accept bag_id,blue,total CSVs");
  posterior.plot.add(p);
  p->add_flag("--json", posterior.json, "Machine-readable output");

  ClassifyFlags classify;
  auto* c = app.add_subcommand("classify", "Which factory filled these bags?");
  c->add_option("--csv", classify.csv, "Tally CSV")->required()->check(CLI::ExistingFile);
  c->add_option("--profiles", classify.profiles, "Factory profile JSON")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_flag("--full", classify.full, "Use all six colours");
  c->add_flag("--permissive", classify.permissive, "Accept bag_id,blue,total CSVs");
  c->add_flag("--json", classify.json, "Machine-readable output");

  GibbsFlags gibbs;
  auto* g = app.add_subcommand("gibbs", "Gibbs sampler for the two-level mixture");
  g->add_option("--csv", gibbs.csv, "Tally CSV")->required()->check(CLI::ExistingFile);
  g->add_option("--alpha", gibbs.alpha, "Mixture-weight prior: one value or one per factory");
  g->add_option("--eta", gibbs.eta, "Colour prior: one value or one per category");
  g->add_option("--factories", gibbs.factories, "Factories when --alpha is a single value");
  g->add_option("--iters", gibbs.iters, "Sweeps per chain");
  g->add_option("--burn", gibbs.burn, "Burn-in sweeps");
  g->add_option("--thin", gibbs.thin, "Keep every thin-th sweep");
  g->add_option("--seed", gibbs.seed, "Root seed")->required();
  g->add_option("--chains", gibbs.chains, "Independent chains, run concurrently");
  g->add_flag("--exact-check", gibbs.exact_check, "Compare with exact enumeration");
  g->add_flag("--permissive", gibbs.permissive, "Accept bag_id,blue,total CSVs");
  g->add_flag("--json", gibbs.json, "Machine-readable output");

  SimulateFlags simulate;
  auto* s = app.add_subcommand("simulate", "Draw synthetic bags from factory profiles");
  s->add_option("--theta", simulate.theta, "Factory weights, comma-separated")->required();
  s->add_option("--beta-file", simulate.beta_file, "Factory profile JSON")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--bags", simulate.bags, "Number of bags")->required();
  s->add_option("--bag-size", simulate.bag_size, "Candies per bag")->required();
  s->add_option("--seed", simulate.seed, "Seed")->required();
  s->add_option("--out", simulate.out, "Output CSV")->required();
  s->add_flag("--json", simulate.json, "Machine-readable output");

  ServeFlags serve;
  auto* v = app.add_subcommand("serve", "Run the classroom session service");
  v->add_option("--addr", serve.addr, "host:port to listen on");
  v->add_option("--data-dir", serve.data_dir, "Event log directory (env MMSBAYES_DATA_DIR)");
  v->add_option("--profiles", serve.profiles, "Factory profile JSON (env MMSBAYES_PROFILES)");
  v->add_option("--static-dir", serve.static_dir, "Serve a built web UI from here");
  v->add_flag("--json", serve.json, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: usage: " << one_line(ex.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (e->parsed()) return cmd_elicit(elicit, out);
    if (p->parsed()) return cmd_posterior(posterior, out);
    if (c->parsed()) return cmd_classify(classify, out);
    if (g->parsed()) return cmd_gibbs(gibbs, out);
    if (s->parsed()) return cmd_simulate(simulate, out);
    if (v->parsed()) return cmd_serve(serve, out);
  } catch (const UsageError& ex) {
    err << "error: usage: " << one_line(ex.what()) << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: data: " << one_line(ex.what()) << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace mmsbayes::cli
