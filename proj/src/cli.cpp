#include "collision_census/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "collision_census/density_sim.hpp"
#include "collision_census/error.hpp"
#include "collision_census/exact_oracle.hpp"
#include "collision_census/netsize.hpp"
#include "collision_census/recollision_stats.hpp"
#include "collision_census/rng.hpp"
#include "collision_census/topology.hpp"

namespace census {

namespace {

// RFC 4180 quoting for fields carrying ',' or '"'.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

/// Frozen hypercube constant c in 0.7^m + c / sqrt(A): the largest excess
/// (beta(m) - 0.7^m) sqrt(A) over m <= 50 on the 6-cube, 0.2499998..., rounded up.
constexpr double kHypercubeConstant = 0.25;

struct OptionSpec {
  std::string name;
  std::string default_value;
  std::string help;
  bool flag = false;
};

// Execution-only keys, never embedded in outputs.
bool execution_only(const std::string& key) { return key == "out" || key == "threads" || key == "config"; }

std::vector<OptionSpec> common_options(std::string format) {
  return {
      {"seed", "1", "master seed"},
      {"threads", "0", "worker threads (0: COLLISION_CENSUS_THREADS or hardware)"},
      {"out", "", "output path (default: stdout)"},
      {"format", std::move(format), "csv or json"},
      {"config", "", "config file or earlier output; flags override its entries"},
  };
}

std::vector<OptionSpec> topology_options() {
  return {
      {"family", "torus2d", "torus2d | torus | ring | hypercube | complete | regular | explicit"},
      {"side", "", "side length (torus, torus2d) or node count (ring)"},
      {"dims", "", "torus dimension count (default 2) or hypercube bit count"},
      {"nodes", "", "node count for complete / regular"},
      {"degree", "3", "degree for regular"},
      {"graph-seed", "1", "seed of the random regular graph"},
      {"graph-file", "", "edge-list file for explicit"},
  };
}

std::vector<OptionSpec> options_for(const std::string& sub) {
  std::vector<OptionSpec> specs;
  const auto append = [&](std::vector<OptionSpec> more) { specs.insert(specs.end(), more.begin(), more.end()); };
  if (sub == "simulate-density") {
    append(topology_options());
    append({{"agents", "", "total agents n + 1"},
            {"rounds", "", "rounds t"},
            {"trials", "1", "independent trials"},
            {"algorithm", "encounter", "encounter | independent | frequency"},
            {"label-frac", "0", "label probability for frequency runs"}});
    append(common_options("csv"));
  } else if (sub == "recollision-profile") {
    append(topology_options());
    append({{"mmax", "64", "largest lag m"},
            {"trials", "100000", "trials"},
            {"mode", "pair", "pair | equalization"},
            {"start", "0", "start node for the oracle column"}});
    append(common_options("csv"));
  } else if (sub == "netsize") {
    append(topology_options());
    append({{"seed-vertex", "0", "crawl seed vertex"},
            {"eps", "0.2", "target relative error"},
            {"delta", "0.1", "target failure probability"},
            {"t", "64", "collision-counting rounds"},
            {"boost-runs", "15", "odd number of runs for the median"},
            {"walks", "0", "walk count n (0: plan from eps, delta)"},
            {"burn-in", "-1", "burn-in length M (-1: derive from lambda)"},
            {"lambda", "-1", "spectral lambda (-1: compute exactly)"},
            {"b-t", "0", "B(t) for planning (0: exact degree-weighted sum)"},
            {"size-guess", "0", "|V| guess for planning (0: true size)"},
            {"c-burn", "4", "burn-in constant"},
            {"c-plan", "2", "planning constant"},
            {"lazy", "false", "hold with probability 1/2 (bipartite graphs)", true}});
    append(common_options("json"));
  } else if (sub == "verify") {
    append(topology_options());
    append({{"mmax", "64", "largest lag m"}, {"start", "0", "start node"}});
    append(common_options("csv"));
  }
  return specs;
}

class Options {
 public:
  explicit Options(const ExperimentConfig& config) : config_(config) {}

  bool has(const std::string& key) const {
    const auto it = config_.options.find(key);
    return it != config_.options.end() && !it->second.empty();
  }

  const std::string& text(const std::string& key) const {
    const auto it = config_.options.find(key);
    if (it == config_.options.end() || it->second.empty()) throw Error(Errc::precondition, "--" + key + ": missing");
    return it->second;
  }

  std::int64_t integer(const std::string& key) const {
    const auto& s = text(key);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(Errc::parse, "--" + key + ": expected an integer, got '" + s + "'");
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const auto& s = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(Errc::parse, "--" + key + ": expected a non-negative integer, got '" + s + "'");
    return v;
  }

  std::int64_t positive(const std::string& key) const {
    const auto v = integer(key);
    if (v < 1) throw Error(Errc::precondition, "--" + key + ": must be >= 1");
    return v;
  }

  double real(const std::string& key) const {
    const auto& s = text(key);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(Errc::parse, "--" + key + ": expected a number, got '" + s + "'");
    return v;
  }

  bool boolean(const std::string& key) const {
    const auto& s = text(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw Error(Errc::parse, "--" + key + ": expected true or false, got '" + s + "'");
  }

 private:
  const ExperimentConfig& config_;
};

std::shared_ptr<const Topology> make_topology(const Options& opt) {
  const auto& family = opt.text("family");
  auto dims = [&](int fallback) { return opt.has("dims") ? static_cast<int>(opt.positive("dims")) : fallback; };
  if (family == "torus2d") return std::make_shared<Topology>(Topology::torus({opt.integer("side"), opt.integer("side")}));
  if (family == "torus") {
    const int k = dims(2);
    return std::make_shared<Topology>(Topology::torus(std::vector<std::int64_t>(k, opt.integer("side"))));
  }
  if (family == "ring") return std::make_shared<Topology>(Topology::ring(opt.integer("side")));
  if (family == "hypercube") return std::make_shared<Topology>(Topology::hypercube(static_cast<int>(opt.integer("dims"))));
  if (family == "complete") return std::make_shared<Topology>(complete_graph(opt.integer("nodes")));
  if (family == "regular") {
    Rng rng(opt.unsigned_integer("graph-seed"));
    return std::make_shared<Topology>(
        random_regular_graph(opt.integer("nodes"), static_cast<int>(opt.integer("degree")), rng, true));
  }
  if (family == "explicit") return std::make_shared<Topology>(load_edge_list(opt.text("graph-file")));
  throw Error(Errc::unknown_family, "--family: unknown family '" + family + "'");
}

/// Theoretical beta bound for the CLI tables. Returns nullopt when no family bound applies.
std::optional<double> family_bound(const std::string& family, const Topology& topo, int m, bool frozen_hypercube) {
  const double a = static_cast<double>(topo.node_count());
  switch (topo.family()) {
    case Family::ring: return theoretical_beta({BoundFamily::ring, a}, m);
    case Family::torus:
      if (topo.dimensions() == 2 && family != "torus") return theoretical_beta({BoundFamily::torus2d, a}, m);
      if (topo.dimensions() == 1) return theoretical_beta({BoundFamily::ring, a}, m);
      return theoretical_beta({BoundFamily::torus_kd, a, topo.dimensions()}, m);
    case Family::hypercube:
      if (frozen_hypercube) return std::pow(0.7, m) + kHypercubeConstant / std::sqrt(a);
      return theoretical_beta({BoundFamily::hypercube, a}, m);
    case Family::explicit_graph:
      if (!topo.is_regular() || topo.node_count() > kSpectralGuard) return std::nullopt;
      return theoretical_beta({BoundFamily::expander, a, 0, spectral_lambda(topo)}, m);
  }
  return std::nullopt;
}

std::string csv_header_block(const ExperimentConfig& config) {
  std::string out = "# collision_census " + std::string(kVersion) + "\n";
  std::istringstream lines(config.to_text());
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  return out;
}

nlohmann::ordered_json config_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["subcommand"] = config.subcommand;
  for (const auto& [k, v] : config.options) j[k] = v;
  return j;
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

// CSV rows are gathered in memory; the file is written in one piece.
void emit_density(const ExperimentConfig& config, const Options& opt, std::ostream& out) {
  SimConfig sim;
  sim.topology = make_topology(opt);
  sim.agents = opt.positive("agents");
  sim.rounds = opt.positive("rounds");
  sim.seed = opt.unsigned_integer("seed");
  sim.label_fraction = opt.real("label-frac");
  const auto& algorithm = opt.text("algorithm");
  if (algorithm == "encounter") sim.algorithm = Algorithm::encounter;
  else if (algorithm == "independent") sim.algorithm = Algorithm::independent;
  else if (algorithm == "frequency") sim.algorithm = Algorithm::frequency;
  else throw Error(Errc::precondition, "--algorithm: unknown algorithm '" + algorithm + "'");
  const auto trials = static_cast<std::size_t>(opt.positive("trials"));
  const auto threads = static_cast<unsigned>(opt.unsigned_integer("threads"));
  validate(sim);
  const bool json = opt.text("format") == "json";

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  if (sim.algorithm == Algorithm::frequency) {
    const auto results = run_frequency_trials(sim, trials, threads);
    csv << "trial,agent,c,d_tilde,d_tilde_P,f_tilde_P\n";
    for (std::size_t k = 0; k < results.size(); ++k)
      for (std::size_t a = 0; a < results[k].size(); ++a) {
        const auto& e = results[k][a];
        if (json) {
          rows.push_back({{"trial", k}, {"agent", a}, {"c", e.all.collisions}, {"d_tilde", e.all.estimate},
                          {"d_tilde_P", e.labeled_estimate},
                          {"f_tilde_P", e.frequency ? nlohmann::ordered_json(*e.frequency) : nullptr}});
        } else {
          csv << k << ',' << a << ',' << e.all.collisions << ',' << format_real(e.all.estimate) << ','
              << format_real(e.labeled_estimate) << ',' << optional_real(e.frequency) << '\n';
        }
      }
  } else {
    const auto results = run_density_trials(sim, trials, threads);
    csv << "trial,agent,c,d_tilde\n";
    for (std::size_t k = 0; k < results.size(); ++k)
      for (std::size_t a = 0; a < results[k].size(); ++a) {
        const auto& e = results[k][a];
        if (json) rows.push_back({{"trial", k}, {"agent", a}, {"c", e.collisions}, {"d_tilde", e.estimate}});
        else csv << k << ',' << a << ',' << e.collisions << ',' << format_real(e.estimate) << '\n';
      }
  }
  if (json) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_json(config);
    doc["density"] = sim.density();
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
  } else {
    out << csv_header_block(config) << csv.str();
  }
}

void emit_profile(const ExperimentConfig& config, const Options& opt, std::ostream& out) {
  const auto topo = make_topology(opt);
  const int m_max = static_cast<int>(opt.integer("mmax"));
  if (m_max < 0) throw Error(Errc::precondition, "--mmax: must be >= 0");
  const auto trials = opt.unsigned_integer("trials");
  if (trials < 1) throw Error(Errc::precondition, "--trials: must be >= 1");
  const auto seed = opt.unsigned_integer("seed");
  const auto threads = static_cast<unsigned>(opt.unsigned_integer("threads"));
  const auto& mode = opt.text("mode");
  const auto start = static_cast<Node>(opt.integer("start"));
  if (mode != "pair" && mode != "equalization") throw Error(Errc::precondition, "--mode: expected pair or equalization");

  const bool pair = mode == "pair";
  const auto profile = pair ? empirical_beta_profile(*topo, m_max, trials, seed, threads)
                            : empirical_equalization_profile(*topo, m_max, trials, seed, threads);
  std::optional<BetaProfile> oracle;
  if (topo->node_count() <= kOracleGuard)
    oracle = pair ? oracle_beta_profile(*topo, start, m_max) : oracle_equalization_profile(*topo, start, m_max);

  const auto& family = opt.text("family");
  if (opt.text("format") == "json") {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_json(config);
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (int m = 0; m <= m_max; ++m) {
      const auto bound = family_bound(family, *topo, m, false);
      rows.push_back({{"m", m},
                      {"beta_hat", profile.values[m]},
                      {"se", profile.standard_errors[m]},
                      {"oracle_value", oracle ? nlohmann::ordered_json(oracle->values[m]) : nullptr},
                      {"theoretical_value", bound ? nlohmann::ordered_json(*bound) : nullptr}});
    }
    out << doc.dump(2) << '\n';
    return;
  }
  std::ostringstream csv;
  csv << "m,beta_hat,se,oracle_value,theoretical_value\n";
  for (int m = 0; m <= m_max; ++m) {
    csv << m << ',' << format_real(profile.values[m]) << ',' << format_real(profile.standard_errors[m]) << ','
        << (oracle ? format_real(oracle->values[m]) : "") << ',' << optional_real(family_bound(family, *topo, m, false))
        << '\n';
  }
  out << csv_header_block(config) << csv.str();
}

void emit_verify(const ExperimentConfig& config, const Options& opt, std::ostream& out) {
  const auto topo = make_topology(opt);
  check_oracle_size(*topo);
  const int m_max = static_cast<int>(opt.integer("mmax"));
  if (m_max < 0) throw Error(Errc::precondition, "--mmax: must be >= 0");
  const auto start = static_cast<Node>(opt.integer("start"));
  const auto pair = recollision_profile<double>(*topo, start, m_max);
  const auto single = equalization_profile<double>(*topo, start, m_max);
  const auto& family = opt.text("family");
  const bool json = opt.text("format") == "json";

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "family,params,m,exact_recollision,exact_equalization,theoretical_bound,bound_satisfied\n";
  for (int m = 0; m <= m_max; ++m) {
    const auto bound = family_bound(family, *topo, m, true);
    const bool satisfied = bound && pair[m] <= *bound * (1.0 + 1e-12);
    if (json) {
      rows.push_back({{"family", family},
                      {"params", topo->describe()},
                      {"m", m},
                      {"exact_recollision", pair[m]},
                      {"exact_equalization", single[m]},
                      {"theoretical_bound", bound ? nlohmann::ordered_json(*bound) : nullptr},
                      {"bound_satisfied", bound ? nlohmann::ordered_json(satisfied) : nullptr}});
    } else {
      csv << csv_field(family) << ',' << csv_field(topo->describe()) << ',' << m << ',' << format_real(pair[m]) << ','
          << format_real(single[m]) << ',' << optional_real(bound) << ','
          << (bound ? (satisfied ? "true" : "false") : "") << '\n';
    }
  }
  if (json) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_json(config);
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
  } else {
    out << csv_header_block(config) << csv.str();
  }
}

nlohmann::ordered_json queries_json(const QueryCounters& q) {
  return {{"neighborhood", q.neighborhood}, {"degree", q.degree}, {"bootstrap", q.bootstrap}};
}

void emit_netsize(const ExperimentConfig& config, const Options& opt, std::ostream& out) {
  const auto topo = make_topology(opt);
  const bool lazy = opt.boolean("lazy");
  const double eps = opt.real("eps");
  const double delta = opt.real("delta");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::precondition, "--eps: must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::precondition, "--delta: must lie in (0, 1)");
  const auto rounds = opt.positive("t");
  const auto stats = graph_stats(*topo);
  if (!lazy && topo->is_bipartite())
    throw Error(Errc::bipartite, "--family: " + topo->describe() + " is bipartite; pass --lazy");

  double lambda = opt.real("lambda");
  std::int64_t burn_in = opt.integer("burn-in");
  if (burn_in < 0) {
    if (lambda < 0.0) {
      if (!topo->is_regular() || topo->node_count() > kSpectralGuard)
        throw Error(Errc::precondition, "--lambda: required for irregular or large graphs");
      lambda = spectral_lambda(*topo);
      // The lazy walk (I + W) / 2 has eigenvalues (1 + mu) / 2.
      if (lazy) lambda = (1.0 + std::max(spectral_lambda(*topo, Spectrum::positive), 0.0)) / 2.0;
    }
    burn_in = burn_in_length(lambda, static_cast<double>(stats.edges), delta, opt.real("c-burn"));
  }

  double b_t = opt.real("b-t");
  if (b_t <= 0.0) {
    if (topo->node_count() <= 1024) {
      const auto beta = degree_weighted_beta_profile<double>(*topo, static_cast<int>(rounds));
      b_t = 0.0;
      for (std::size_t m = 0; m < beta.size(); ++m) b_t += beta[m];
    } else {
      b_t = 1.0;
    }
  }
  const double size_guess = opt.real("size-guess") > 0.0 ? opt.real("size-guess") : static_cast<double>(stats.nodes);
  std::int64_t walks = opt.integer("walks");
  if (walks <= 0) walks = plan_walk_count(rounds, b_t, stats, eps, delta, size_guess, opt.real("c-plan"));

  PipelineConfig pc;
  pc.seed_vertex = static_cast<Node>(opt.integer("seed-vertex"));
  pc.walks = static_cast<std::size_t>(walks);
  pc.burn_in = burn_in;
  pc.rounds = rounds;
  pc.boost_runs = static_cast<std::size_t>(opt.positive("boost-runs"));
  pc.seed = opt.unsigned_integer("seed");
  pc.lazy = lazy;
  const auto result = run_pipeline(topo, pc, static_cast<unsigned>(opt.unsigned_integer("threads")));

  // The run whose estimate is the median supplies the reported C and D.
  const PipelineRun* median_run = nullptr;
  for (const auto& run : result.runs)
    if (result.size && run.size && *run.size == *result.size) median_run = &run;

  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["config"] = config_json(config);
  doc["A_tilde"] = result.size ? nlohmann::ordered_json(*result.size) : nullptr;
  doc["C"] = median_run ? nlohmann::ordered_json(median_run->statistic) : nullptr;
  doc["D"] = median_run ? nlohmann::ordered_json(median_run->inverse_degree) : nullptr;
  doc["n"] = walks;
  doc["M"] = burn_in;
  doc["t"] = rounds;
  doc["queries"] = queries_json(result.queries);
  doc["lambda"] = lambda;
  doc["B_t"] = b_t;
  doc["c_burn"] = opt.real("c-burn");
  doc["c_plan"] = opt.real("c-plan");
  doc["lazy"] = lazy;
  auto& runs = doc["per_run"] = nlohmann::ordered_json::array();
  for (const auto& run : result.runs)
    runs.push_back({{"A_tilde", run.size ? nlohmann::ordered_json(*run.size) : nullptr},
                    {"C", run.statistic},
                    {"D", run.inverse_degree},
                    {"queries", queries_json(run.queries)}});
  out << doc.dump(2) << '\n';
}

void dispatch(const ExperimentConfig& embedded, const ExperimentConfig& config, std::ostream& out) {
  const Options opt(config);
  const auto& format = opt.text("format");
  if (format != "csv" && format != "json") throw Error(Errc::precondition, "--format: expected csv or json");
  if (config.subcommand == "simulate-density") emit_density(embedded, opt, out);
  else if (config.subcommand == "recollision-profile") emit_profile(embedded, opt, out);
  else if (config.subcommand == "netsize") emit_netsize(embedded, opt, out);
  else if (config.subcommand == "verify") emit_verify(embedded, opt, out);
  else throw Error(Errc::precondition, "unknown subcommand '" + config.subcommand + "'");
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string ExperimentConfig::to_text() const {
  std::string out = "subcommand=" + subcommand + "\n";
  for (const auto& [k, v] : options) out += k + "=" + v + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::parse_text(std::string_view text) {
  ExperimentConfig config;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool comment = !line.empty() && line.front() == '#';
    if (comment) {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (comment) continue;
      break;  // first data line of an embedded CSV
    }
    const std::string key(line.substr(0, eq));
    const std::string value(line.substr(eq + 1));
    if (key == "subcommand") config.subcommand = value;
    else config.options[key] = value;
    if (end == text.size()) break;
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse, "--config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto doc = nlohmann::json::parse(text);
      ExperimentConfig config;
      for (const auto& [k, v] : doc.at("config").items()) {
        if (k == "subcommand") config.subcommand = v.get<std::string>();
        else config.options[k] = v.get<std::string>();
      }
      return config;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse, std::string("--config: ") + e.what());
    }
  }
  return parse_text(text);
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> subcommands{"simulate-density", "recollision-profile", "netsize", "verify"};
  CLI::App app{"Random-walk collision census: density and network-size estimation", "collision_census"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Bound {
    CLI::App* app = nullptr;
    std::vector<OptionSpec> specs;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> handles;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& name : subcommands) {
    auto b = std::make_unique<Bound>();
    b->app = app.add_subcommand(name);
    b->specs = options_for(name);
    for (const auto& spec : b->specs) {
      if (spec.flag) b->handles[spec.name] = b->app->add_flag("--" + spec.name, b->flags[spec.name], spec.help);
      else b->handles[spec.name] = b->app->add_option("--" + spec.name, b->values[spec.name], spec.help);
    }
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (auto& b : bound) {
      if (!b->app->parsed()) continue;
      ExperimentConfig config;
      config.subcommand = b->app->get_name();
      for (const auto& spec : b->specs) config.options[spec.name] = spec.default_value;
      if (b->handles["config"]->count() > 0) {
        const auto file = ExperimentConfig::load(b->values["config"]);
        if (!file.subcommand.empty() && file.subcommand != config.subcommand)
          throw Error(Errc::precondition, "--config: file is for '" + file.subcommand + "'");
        for (const auto& [k, v] : file.options) {
          if (!config.options.contains(k)) throw Error(Errc::precondition, "--config: unknown key '" + k + "'");
          if (!execution_only(k)) config.options[k] = v;
        }
      }
      for (const auto& spec : b->specs) {
        if (b->handles[spec.name]->count() == 0) continue;
        config.options[spec.name] = spec.flag ? (b->flags[spec.name] ? "true" : "false") : b->values[spec.name];
      }

      ExperimentConfig embedded = config;
      for (auto it = embedded.options.begin(); it != embedded.options.end();)
        it = execution_only(it->first) ? embedded.options.erase(it) : std::next(it);

      // Results are fully computed before the output file is opened.
      std::ostringstream buffer;
      dispatch(embedded, config, buffer);
      const auto& path = config.options["out"];
      if (path.empty() || path == "-") {
        out << buffer.str();
      } else {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(Errc::precondition, "--out: cannot open '" + path + "'");
        file << buffer.str();
        if (!file) throw Error(Errc::precondition, "--out: write failed for '" + path + "'");
      }
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace census
