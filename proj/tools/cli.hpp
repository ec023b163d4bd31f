#pragma once

// Experiment runner behind the `mergedpow` executable. Kept in a header so the
// test suite can drive commands in-process.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mergedpow/mergedpow.hpp"

namespace mergedpow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// I/O and other failures that are not the caller's fault.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sweep {
  std::string param;
  double start{0.0};
  double stop{0.0};
  double step{1.0};

  std::vector<double> values() const {
    std::vector<double> out;
    const double slack = step * 1e-9;
    for (std::size_t k = 0;; ++k) {
      const double v = start + static_cast<double>(k) * step;
      if (v > stop + slack) break;
      out.push_back(v);
    }
    return out;
  }
};

struct Options {
  std::string command;
  // configuration
  std::string h_text, b_text, c_text;
  std::vector<double> h, b, c;
  double delta{0.0};
  double horizon{1000.0};
  std::size_t trials{20};
  std::uint64_t seed{1};
  // output
  std::string sweep_text;
  std::optional<Sweep> sweep;
  std::string format{"csv"};
  std::string out_path;
  bool no_timestamp{false};
  std::string trace_path;
  // classify
  bool refine{false};
  double z{3.0};
  // attack
  double reveal{0.0};  // 0 selects the horizon
  // cost
  std::string prices_text;
  std::vector<double> prices;
  double c1{0.0};  // 0 selects c[0]
  // difficulty
  std::string d_text, kappa_text, q_text;
  std::vector<double> d, kappa, q;
  double d1{0.0};
  double reward{1.0};
  double epoch_length{1e4};
  double min_fraction{0.1};
  double step_down{0.05};
  double elasticity{0.0};
  std::size_t epochs{100};
  std::vector<std::string> shock_texts;
  std::vector<CostShock> shocks;
  // backdoor
  std::size_t n{4};
  double p{0.25};
};

inline std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_double(piece, field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

inline Sweep parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  require(parts.size() == 4, "sweep: expected param:start:stop:step");
  Sweep s{parts[0], parse_double(parts[1], "sweep start"), parse_double(parts[2], "sweep stop"),
          parse_double(parts[3], "sweep step")};
  require(!s.param.empty(), "sweep: parameter name is empty");
  require(s.step > 0.0, "sweep: step must be positive");
  require(s.start <= s.stop, "sweep: start must not exceed stop");
  return s;
}

inline CostShock parse_shock(const std::string& text) {
  const auto parts = split(text, ':');
  require(parts.size() == 3, "shock: expected epoch:type:factor");
  const double epoch = parse_double(parts[0], "shock epoch");
  const double type = parse_double(parts[1], "shock type");
  require(epoch >= 0.0 && epoch == std::floor(epoch), "shock: epoch must be a nonnegative integer");
  require(type >= 1.0 && type == std::floor(type), "shock: type must be a positive integer");
  return {static_cast<std::size_t>(epoch), static_cast<std::size_t>(type) - 1,
          parse_double(parts[2], "shock factor")};
}

// Sets a named scalar (delta, horizon, reveal, n, p, trials) or a vector
// entry written as h<i>, b<i>, c<i>, price<i> with 1-based i.
inline void set_param(Options& o, const std::string& name, double value) {
  auto as_count = [&](const std::string& field) {
    require(value >= 0.0 && value == std::floor(value), field + ": must be a nonnegative integer");
    return static_cast<std::size_t>(value);
  };
  if (name == "delta") { o.delta = value; return; }
  if (name == "horizon") { o.horizon = value; return; }
  if (name == "reveal") { o.reveal = value; return; }
  if (name == "p") { o.p = value; return; }
  if (name == "n") { o.n = as_count("n"); return; }
  if (name == "trials") { o.trials = as_count("trials"); return; }
  for (const auto& [prefix, vec] : std::initializer_list<std::pair<std::string, std::vector<double>*>>{
           {"price", &o.prices}, {"h", &o.h}, {"b", &o.b}, {"c", &o.c}}) {
    if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
        name.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
      const auto idx = std::stoul(name.substr(prefix.size()));
      require(idx >= 1 && idx <= vec->size(), "sweep: index out of range in '" + name + "'");
      (*vec)[idx - 1] = value;
      return;
    }
  }
  throw ValidationError("sweep: unknown parameter '" + name + "'");
}

inline BlockrateConfiguration make_config(const Options& o) {
  require(!o.c.empty(), "c: score constants are required (--c)");
  require(o.h.size() == o.c.size(), "h: expected " + std::to_string(o.c.size()) + " honest rates (--h)");
  require(o.b.empty() || o.b.size() == o.c.size(),
          "b: expected " + std::to_string(o.c.size()) + " adversary rates (--b)");
  return BlockrateConfiguration::from_vectors(o.h, o.b, o.c, o.delta);
}

inline ArrivalTrace load_trace(const std::string& path, std::size_t types) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("trace: cannot open '" + path + "'");
  return read_trace(in, types);
}

// ---------------------------------------------------------------------------
// Commands. Each produces one table for the current option values.

inline Table cmd_bounds(const Options& o) {
  const auto config = make_config(o);
  const auto bp = bound_pair(config);
  Table t{{"delta", "zero_delay", "lower_bound", "upper_bound", "lambda_a"}, {}};
  t.add_row({config.delta(), bp.zero_delay, bp.lower, bp.upper, adversary_rate(config)});
  return t;
}

inline Table cmd_classify(const Options& o) {
  const auto config = make_config(o);
  std::optional<RefinementSettings> refine;
  if (o.refine) refine = RefinementSettings{o.horizon, o.trials, o.seed, o.z};
  const auto v = classify(config, refine);
  Table t{{"delta", "lambda_a", "lower_bound", "upper_bound", "verdict"}, {}};
  std::vector<Cell> row{config.delta(), v.lambda_a, v.bounds.lower, v.bounds.upper, to_string(v.verdict)};
  if (o.refine) {
    t.columns.insert(t.columns.end(), {"simulated_mean", "simulated_stderr", "refined"});
    if (v.simulated) {
      row.insert(row.end(), {v.simulated->mean_rate, v.simulated->std_error, to_string(*v.refined)});
    } else {
      row.insert(row.end(), {std::string{}, std::string{}, std::string{}});
    }
  }
  t.add_row(std::move(row));
  return t;
}

inline Table cmd_growth(const Options& o) {
  const auto config = make_config(o);
  if (!o.trace_path.empty()) {
    const auto trace = load_trace(o.trace_path, config.size());
    const auto scores = config.scores();
    Table t{{"delta", "horizon", "events", "deletion_rate", "fully_delayed_rate", "increase_rate"}, {}};
    t.add_row({config.delta(), trace.horizon, static_cast<std::int64_t>(trace.events.size()),
               guaranteed_score_rate(delta_interval_deletion(trace, config.delta(), scores), trace.horizon),
               fully_delayed_rate(trace, config.delta(), scores),
               guaranteed_score_rate(small_block_increase(trace, config.delta(), scores), trace.horizon)});
    return t;
  }
  const auto est = estimate_growth_rate(config, o.horizon, o.trials, o.seed);
  const auto bp = bound_pair(config);
  Table t{{"delta", "horizon", "trials", "seed", "mean_rate", "std_error", "lower_bound", "upper_bound"}, {}};
  t.add_row({est.delta, est.horizon, static_cast<std::int64_t>(est.trials),
             static_cast<std::int64_t>(est.seed), est.mean_rate, est.std_error, bp.lower, bp.upper});
  return t;
}

inline Table cmd_attack(const Options& o) {
  const auto config = make_config(o);
  const double reveal = o.reveal > 0.0 ? o.reveal : o.horizon;
  const auto r = simulate_private_attack(config, o.horizon, reveal, o.trials, o.seed);
  const auto bp = bound_pair(config);
  Table t{{"delta", "lambda_a", "lower_bound", "upper_bound", "horizon", "reveal_time", "trials",
           "adversary_wins", "win_fraction"},
          {}};
  t.add_row({config.delta(), adversary_rate(config), bp.lower, bp.upper, r.horizon, r.reveal_time,
             static_cast<std::int64_t>(r.trials), static_cast<std::int64_t>(r.adversary_wins),
             r.win_fraction});
  return t;
}

inline Table cmd_cost(const Options& o) {
  require(!o.c.empty(), "c: score constants are required (--c)");
  require(o.h.size() == o.c.size(), "h: expected " + std::to_string(o.c.size()) + " honest rates (--h)");
  require(o.prices.size() == o.c.size(),
          "prices: expected " + std::to_string(o.c.size()) + " prices (--prices)");
  const PriceVector prices(o.prices);
  const auto best = min_attack_cost(o.h, o.c, prices);
  const auto c_opt = optimal_score_constants(prices, o.c1 > 0.0 ? o.c1 : o.c.front());
  const auto best_opt = min_attack_cost(o.h, c_opt, prices);
  double separate = 0.0;
  for (std::size_t i = 0; i < o.h.size(); ++i) separate += o.prices[i] * o.h[i];

  Table t{{"min_cost", "cheapest_type"}, {}};
  std::vector<Cell> row{best.cost, static_cast<std::int64_t>(best.cheapest + 1)};
  for (std::size_t i = 0; i < o.c.size(); ++i) {
    t.columns.push_back("b_" + std::to_string(i + 1));
    row.emplace_back(best.allocation[i]);
  }
  for (std::size_t i = 0; i < o.c.size(); ++i) {
    t.columns.push_back("optimal_c_" + std::to_string(i + 1));
    row.emplace_back(c_opt[i]);
  }
  t.columns.insert(t.columns.end(), {"optimal_min_cost", "sum_p_h"});
  row.insert(row.end(), {best_opt.cost, separate});
  if (!o.kappa.empty()) {
    require(o.d1 > 0.0, "d1: required with --kappa (--d1)");
    const auto d = relative_difficulty(o.d1, o.kappa);
    for (std::size_t i = 0; i < d.size(); ++i) {
      t.columns.push_back("d_" + std::to_string(i + 1));
      row.emplace_back(d[i]);
    }
  }
  t.add_row(std::move(row));
  return t;
}

inline Table cmd_difficulty(const Options& o) {
  AdjustmentParams params;
  require(!o.kappa.empty(), "kappa: costs per hash are required (--kappa)");
  if (!o.d.empty()) {
    params.difficulties = o.d;
  } else {
    require(o.d1 > 0.0, "d: give --d or --d1 with --kappa");
    params.difficulties = relative_difficulty(o.d1, o.kappa);
  }
  params.cost_per_hash = o.kappa;
  params.hashrates = o.q;
  params.block_reward = o.reward;
  params.epoch_length = o.epoch_length;
  params.min_fraction = o.min_fraction;
  params.step_down = o.step_down;
  params.elasticity = o.elasticity;
  params.epochs = o.epochs;
  params.shocks = o.shocks;
  const auto series = simulate_difficulty_adjustment(params, o.seed);

  const std::size_t n = params.type_count();
  Table t{{"epoch"}, {}};
  for (const char* prefix : {"d_", "fraction_", "hashrate_"})
    for (std::size_t i = 0; i < n; ++i) t.columns.push_back(prefix + std::to_string(i + 1));
  for (const auto& rec : series) {
    std::vector<Cell> row{static_cast<std::int64_t>(rec.epoch)};
    for (double v : rec.difficulties) row.emplace_back(v);
    for (double v : rec.fractions) row.emplace_back(v);
    for (double v : rec.hashrates) row.emplace_back(v);
    t.add_row(std::move(row));
  }
  return t;
}

inline Table cmd_backdoor(const Options& o) {
  const double exact = backdoor_insecurity_probability(o.n, o.p);
  const auto mc = backdoor_monte_carlo(o.n, o.p, o.trials, o.seed);
  Table t{{"n", "p", "exact", "monte_carlo", "monte_carlo_stderr", "trials"}, {}};
  t.add_row({static_cast<std::int64_t>(o.n), o.p, exact, mc.probability, mc.std_error,
             static_cast<std::int64_t>(mc.trials)});
  return t;
}

inline Table cmd_figure2(const Options& o) {
  Options fig = o;
  fig.h = {2.0, 1.0};
  fig.c = {1.0, 2.0};
  fig.b.clear();
  Table t{{"delta", "lower_bound", "simulated_mean", "simulated_stderr", "upper_bound"}, {}};
  for (std::size_t k = 0; k <= 10; ++k) {
    fig.delta = 0.5 * static_cast<double>(k);
    const auto config = make_config(fig);
    const auto bp = bound_pair(config);
    const auto est = estimate_growth_rate(config, fig.horizon, fig.trials, fig.seed);
    t.add_row({fig.delta, bp.lower, est.mean_rate, est.std_error, bp.upper});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

inline nlohmann::ordered_json config_json(const Options& o) {
  nlohmann::ordered_json j;
  j["command"] = o.command;
  j["h"] = o.h;
  j["b"] = o.b;
  j["c"] = o.c;
  j["delta"] = o.delta;
  j["horizon"] = o.horizon;
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  if (o.sweep) j["sweep"] = {{"param", o.sweep->param}, {"start", o.sweep->start},
                             {"stop", o.sweep->stop}, {"step", o.sweep->step}};
  if (!o.trace_path.empty()) j["trace"] = o.trace_path;
  if (o.command == "classify") {
    j["refine"] = o.refine;
    j["z"] = o.z;
  }
  if (o.command == "attack") j["reveal"] = o.reveal > 0.0 ? o.reveal : o.horizon;
  if (o.command == "cost") {
    j["prices"] = o.prices;
    j["c1"] = o.c1 > 0.0 ? o.c1 : (o.c.empty() ? 0.0 : o.c.front());
    if (!o.kappa.empty()) {
      j["kappa"] = o.kappa;
      j["d1"] = o.d1;
    }
  }
  if (o.command == "difficulty") {
    j["d"] = o.d;
    j["d1"] = o.d1;
    j["kappa"] = o.kappa;
    j["q"] = o.q;
    j["reward"] = o.reward;
    j["epoch_length"] = o.epoch_length;
    j["min_fraction"] = o.min_fraction;
    j["step_down"] = o.step_down;
    j["elasticity"] = o.elasticity;
    j["epochs"] = o.epochs;
    j["shocks"] = o.shock_texts;
  }
  if (o.command == "backdoor") {
    j["n"] = o.n;
    j["p"] = o.p;
  }
  return j;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline void emit(const Options& o, const Table& t, std::ostream& out) {
  if (o.format == "csv") {
    write_csv(out, t);
    return;
  }
  nlohmann::ordered_json j;
  j["config"] = config_json(o);
  if (!o.no_timestamp) j["timestamp"] = utc_timestamp();
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = cell_json(r[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

// Runs `fn` once, or once per sweep value with the swept column prepended
// unless the table already reports it.
inline Table run_with_sweep(Options o, const std::function<Table(const Options&)>& fn) {
  if (!o.sweep) return fn(o);
  Table all;
  for (double v : o.sweep->values()) {
    set_param(o, o.sweep->param, v);
    Table t = fn(o);
    const bool present =
        std::find(t.columns.begin(), t.columns.end(), o.sweep->param) != t.columns.end();
    if (!present) {
      t.columns.insert(t.columns.begin(), o.sweep->param);
      for (auto& row : t.rows) row.insert(row.begin(), Cell{v});
    }
    if (all.columns.empty()) all.columns = t.columns;
    require(all.columns == t.columns, "sweep: output columns changed between sweep points");
    for (auto& row : t.rows) all.rows.push_back(std::move(row));
  }
  return all;
}

inline void resolve(Options& o) {
  o.h = parse_list(o.h_text, "h");
  o.b = parse_list(o.b_text, "b");
  o.c = parse_list(o.c_text, "c");
  o.prices = parse_list(o.prices_text, "prices");
  o.d = parse_list(o.d_text, "d");
  o.kappa = parse_list(o.kappa_text, "kappa");
  o.q = parse_list(o.q_text, "q");
  o.shocks.clear();
  for (const auto& s : o.shock_texts) o.shocks.push_back(parse_shock(s));
  require(o.format == "csv" || o.format == "json", "format: must be csv or json");
  if (!o.sweep_text.empty()) o.sweep = parse_sweep(o.sweep_text);
}

inline void write_trace_file(const Options& o, std::ostream& out) {
  require(!o.h.empty(), "h: honest rates are required (--h)");
  const auto trace = generate_trace(o.h, o.horizon, o.seed);
  write_trace(out, trace);
}

// Entry point: args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Multi-hash proof-of-work security experiments", "mergedpow"};
  app.require_subcommand(1);
  // -h would collide with --h.
  app.set_help_flag("--help", "Print this help message and exit");

  auto add_config = [&o](CLI::App* sub) {
    sub->add_option("--h", o.h_text, "Honest blockrates, comma-separated (blocks/s)");
    sub->add_option("--b", o.b_text, "Adversary blockrates, comma-separated (blocks/s)");
    sub->add_option("--c", o.c_text, "Score constants, comma-separated (points/block)");
    sub->add_option("--delta", o.delta, "Network delay bound (s)");
  };
  auto add_sim = [&o](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "Simulated time per trial (s)");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--seed", o.seed, "Base seed");
  };
  auto add_output = [&o](CLI::App* sub, bool sweepable) {
    if (sweepable) sub->add_option("--sweep", o.sweep_text, "param:start:stop:step");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--out", o.out_path, "Output path (default: stdout)");
    sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from JSON output");
  };

  std::map<std::string, std::function<Table(const Options&)>> commands;

  auto* figure2 = app.add_subcommand("figure2", "Growth-rate bounds and simulation for h=(2,1), c=(1,2), delta 0..5");
  add_sim(figure2);
  add_output(figure2, false);
  commands["figure2"] = cmd_figure2;

  auto* bounds = app.add_subcommand("bounds", "Closed-form lower/upper growth-rate bounds");
  add_config(bounds);
  add_output(bounds, true);
  commands["bounds"] = cmd_bounds;

  auto* cls = app.add_subcommand("classify", "Classify a configuration against the bounds");
  add_config(cls);
  add_sim(cls);
  add_output(cls, true);
  cls->add_flag("--refine", o.refine, "Simulate lambda_h when the bounds are indeterminate");
  cls->add_option("--z", o.z, "Standard errors required by --refine");
  commands["classify"] = cmd_classify;

  auto* growth = app.add_subcommand("growth", "Monte Carlo estimate of the honest growth rate");
  add_config(growth);
  add_sim(growth);
  add_output(growth, true);
  growth->add_option("--trace", o.trace_path, "Evaluate a single trace file instead of sampling");
  commands["growth"] = cmd_growth;

  auto* attack = app.add_subcommand("attack", "Private-mining attack race");
  add_config(attack);
  add_sim(attack);
  add_output(attack, true);
  attack->add_option("--reveal", o.reveal, "Reveal time (s, default: horizon)");
  commands["attack"] = cmd_attack;

  auto* cost = app.add_subcommand("cost", "Minimum zero-delay attack cost and optimal scores");
  cost->add_option("--h", o.h_text, "Honest blockrates");
  cost->add_option("--c", o.c_text, "Score constants");
  cost->add_option("--prices", o.prices_text, "Adversary cost per block of each type (dollars/block)");
  cost->add_option("--c1", o.c1, "First score constant for the optimal scores (default: c_1)");
  cost->add_option("--kappa", o.kappa_text, "Costs per hash, for relative difficulties");
  cost->add_option("--d1", o.d1, "Reference difficulty of type 1");
  add_output(cost, true);
  commands["cost"] = cmd_cost;

  auto* diff = app.add_subcommand("difficulty", "Minimum-fraction difficulty adjustment simulation");
  diff->add_option("--d", o.d_text, "Initial difficulties (hashes/block)");
  diff->add_option("--d1", o.d1, "Type-1 difficulty; others follow the equal cost-per-block rule");
  diff->add_option("--kappa", o.kappa_text, "Costs per hash (dollars/hash)");
  diff->add_option("--q", o.q_text, "Initial honest hashrates (hashes/s)");
  diff->add_option("--reward", o.reward, "Block reward (dollars/block)");
  diff->add_option("--epoch-length", o.epoch_length, "Epoch length (s)");
  diff->add_option("--min-fraction", o.min_fraction, "Block-share threshold");
  diff->add_option("--step-down", o.step_down, "Fractional difficulty decrease per adjustment");
  diff->add_option("--elasticity", o.elasticity, "Hashrate response per dollar/s of margin");
  diff->add_option("--epochs", o.epochs, "Number of epochs");
  diff->add_option("--shock", o.shock_texts, "Cost shock epoch:type:factor (repeatable)");
  diff->add_option("--seed", o.seed, "Seed");
  add_output(diff, false);
  commands["difficulty"] = cmd_difficulty;

  auto* backdoor = app.add_subcommand("backdoor", "Probability that at least half the hash types are compromised");
  backdoor->add_option("--n", o.n, "Number of hash types");
  backdoor->add_option("--p", o.p, "Per-type compromise probability");
  backdoor->add_option("--trials", o.trials, "Monte Carlo trials (default 100000)");
  backdoor->add_option("--seed", o.seed, "Seed");
  add_output(backdoor, true);
  commands["backdoor"] = cmd_backdoor;

  auto* trace = app.add_subcommand("trace", "Generate an arrival trace in the time,type_index text format");
  trace->add_option("--h", o.h_text, "Blockrates per type");
  trace->add_option("--horizon", o.horizon, "Horizon (s)");
  trace->add_option("--seed", o.seed, "Seed");
  trace->add_option("--out", o.out_path, "Output path (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  o.command = chosen->get_name();
  if (o.command == "backdoor" && chosen->count("--trials") == 0) o.trials = 100000;

  try {
    resolve(o);
    std::ostringstream buffer;
    if (o.command == "trace") {
      write_trace_file(o, buffer);
    } else {
      emit(o, run_with_sweep(o, commands.at(o.command)), buffer);
    }
    if (o.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file) throw RuntimeError("out: cannot open '" + o.out_path + "' for writing");
      file << buffer.str();
      if (!file) throw RuntimeError("out: write to '" + o.out_path + "' failed");
    }
  } catch (const ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace mergedpow::cli
