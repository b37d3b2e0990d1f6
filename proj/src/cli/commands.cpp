#include "strsub/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace strsub::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultGeneratedK = 3;

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

Instance truncate(const Instance& instance, std::size_t K) {
  if (const auto* t = std::get_if<task::TaskAssignmentInstance>(&instance)) {
    if (t->K() == K) return *t;
    std::vector<double> p;
    for (std::size_t i = 0; i < t->n(); ++i)
      for (std::size_t j = 0; j < K; ++j)
        for (std::size_t a = 0; a < t->m(); ++a) p.push_back(t->p(i, j, a));
    return task::TaskAssignmentInstance(t->n(), t->m(), K, std::move(p),
                                        t->lower_table(), t->upper_table());
  }
  if (const auto* me = std::get_if<measurement::MeasurementInstance>(&instance)) {
    if (me->K() == K) return *me;
    return measurement::MeasurementInstance(
        std::vector<double>(me->sigma_sq().begin(),
                            me->sigma_sq().begin() + static_cast<long>(K)),
        me->e_grid());
  }
  const auto& table = std::get<TableOracle>(instance);
  if (table.horizon() == K) return table;
  std::map<ActionString, double> values;
  for (const auto& [s, v] : table.values())
    if (s.length() <= K) values.emplace(s, v);
  return TableOracle(table.alphabet_size(), K, std::move(values));
}

Instance generate(const RunConfig& config, Model model, std::size_t horizon) {
  switch (model) {
    case Model::kTaskAssignment:
      return task::random_instance(config.seed, config.n, config.m, horizon,
                                   config.p_low, config.p_high);
    case Model::kAdaptiveMeasurement:
      if (!config.sigma_sq.empty())
        return measurement::MeasurementInstance(
            config.sigma_sq, measurement::uniform_grid(config.grid_points));
      return measurement::random_instance(config.seed, horizon,
                                          config.grid_points,
                                          config.sigma_order);
    case Model::kTable:
      break;
  }
  throw std::invalid_argument("the table model requires --instance");
}

struct OracleHolder {
  std::unique_ptr<ObjectiveOracle> owned;
  const ObjectiveOracle* oracle = nullptr;
};

OracleHolder make_oracle(const Instance& instance) {
  OracleHolder h;
  if (const auto* t = std::get_if<task::TaskAssignmentInstance>(&instance)) {
    h.owned = std::make_unique<task::TaskAssignmentObjective>(*t);
  } else if (const auto* me =
                 std::get_if<measurement::MeasurementInstance>(&instance)) {
    h.owned = std::make_unique<measurement::MeasurementObjective>(*me);
  }
  h.oracle = h.owned ? h.owned.get() : &std::get<TableOracle>(instance);
  return h;
}

// Per-stage GO-concavity slack, recomputed for comparison with the closed
// form inequality of the measurement model.
std::vector<double> go_stage_margins(const ObjectiveOracle& oracle,
                                     std::size_t K, const GreedyTrace& greedy,
                                     const OptimalResult& optimal) {
  std::vector<double> margins;
  for (std::size_t i = 1; i < K; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(K);
    const double spliced = oracle.evaluate(
        concat(greedy.prefix(i), optimal.argmax.suffix_from(i)));
    margins.push_back(spliced - (w * greedy.value_at(i) +
                                 (1.0 - w) * optimal.value));
  }
  return margins;
}

void fill_conditions(RunReport& report, const Instance& instance,
                     const ObjectiveOracle& oracle) {
  const std::size_t K = report.K;
  const bool full_optimum = report.optimal.argmax.length() == K;

  if (const auto* t = std::get_if<task::TaskAssignmentInstance>(&instance)) {
    TaskConditions c;
    c.diminishing = task::check_diminishing_condition(*t);
    c.half = task::check_half_condition(*t);
    if (t->n() == 1) {
      c.prior = task::check_prior_condition(*t, report.greedy.value_at(1));
      if (full_optimum) {
        c.go = task::check_go_condition(*t, report.optimal, task::GoIndex::kOi);
        if (report.config.go_index_oj)
          c.go_oj =
              task::check_go_condition(*t, report.optimal, task::GoIndex::kOj);
      }
    }
    report.model_conditions = std::move(c);
  } else if (const auto* me =
                 std::get_if<measurement::MeasurementInstance>(&instance)) {
    MeasurementConditions c;
    c.sigma = measurement::check_sigma_condition(*me);
    c.prior = measurement::check_prior_condition(*me);
    if (!report.optimal.argmax.empty())
      c.first_stage =
          measurement::verify_g1_equals_o1(*me, report.optimal, report.greedy);
    if (full_optimum && K >= 2) {
      const auto margins =
          go_stage_margins(oracle, K, report.greedy, report.optimal);
      bool agree = true;
      for (std::size_t i = 1; i < K; ++i) {
        auto terms =
            measurement::go_inequality_terms(*me, report.greedy, report.optimal, i);
        const bool generic = margins[i - 1] >= -report.config.tol;
        if (terms.holds != generic) agree = false;
        c.go_terms.push_back(terms);
      }
      c.go_terms_agree = agree;
    }
    report.model_conditions = std::move(c);
  }
}

RunReport run(const RunConfig& config, const std::string& command,
              bool with_checks) {
  const Stopwatch total;
  const Instance instance = make_instance(config);
  const OracleHolder holder = make_oracle(instance);
  const ObjectiveOracle& base = *holder.oracle;
  CountingOracle oracle(base);

  RunReport report;
  report.command = command;
  report.config = config;
  report.model = model_of(instance);
  report.K = horizon_of(instance);
  report.alphabet_size = base.alphabet_size();
  const std::size_t K = report.K;

  CheckOptions check;
  check.tol = config.tol;
  check.budget = config.budget;
  check.threads = config.threads;

  {
    const Stopwatch sw;
    report.greedy = greedy(oracle, K);
    report.timings.greedy_ms = sw.elapsed_ms();
    report.evaluation_counts.greedy = oracle.calls();
    oracle.reset();
  }
  {
    const Stopwatch sw;
    report.optimal = exhaustive_optimal(oracle, K, check.solver());
    report.timings.optimal_ms = sw.elapsed_ms();
    report.evaluation_counts.optimal = oracle.calls();
    oracle.reset();
  }

  if (base.evaluate(report.greedy.result()) != report.greedy.value())
    throw InvariantViolation("greedy value does not reproduce");
  if (report.optimal.value <
      report.greedy.value() - bound_slack(report.optimal.value, config.tol))
    throw InvariantViolation("exhaustive optimum below the greedy value");

  {
    const Stopwatch sw;
    report.eta = compute_eta(oracle, K, report.greedy, report.optimal);
    report.sigma_hat = compute_sigma_restricted(oracle, K, check);
    report.bound = assemble_bound_report(K, report.greedy, report.optimal,
                                         report.eta, report.sigma_hat,
                                         config.tol);
    report.timings.bound_ms = sw.elapsed_ms();
    report.evaluation_counts.bound = oracle.calls();
    oracle.reset();
  }

  {
    const Stopwatch sw;
    if (with_checks) {
      auto mono = check_k_monotone(oracle, K, check);
      auto dim = check_k_diminishing(oracle, K, check);
      auto sub = combine_k_submodular(mono, dim);
      report.properties.push_back(std::move(mono));
      report.properties.push_back(std::move(dim));
      report.properties.push_back(std::move(sub));
      report.properties.push_back(
          check_postfix_monotone_restricted(oracle, K, check));
      report.properties.push_back(
          check_go_concavity(oracle, K, report.greedy, report.optimal, check));
    }
    fill_conditions(report, instance, oracle);
    report.timings.checks_ms = sw.elapsed_ms();
    report.evaluation_counts.checks = oracle.calls();
  }

  auto& counts = report.evaluation_counts;
  counts.total = counts.greedy + counts.optimal + counts.bound + counts.checks;
  report.timings.total_ms = total.elapsed_ms();
  return report;
}

json string_json(const ActionString& s) { return s.indices(); }

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json counterexample_json(const Counterexample& c) {
  json j = {{"M", string_json(c.m)}, {"N", string_json(c.n)}};
  j["action"] = c.action ? json(c.action->index) : json(nullptr);
  j["stage"] = c.stage ? json(*c.stage) : json(nullptr);
  j["description"] = c.describe();
  return j;
}

json property_json(const PropertyReport& p) {
  json j;
  j["property_name"] = property_name(p.property);
  j["applicable"] = p.applicable;
  if (!p.applicable) j["reason_if_not"] = p.reason_if_not;
  j["holds"] = p.holds;
  j["worst_margin"] = p.worst_margin;  // non-finite values dump as null
  j["counterexample"] =
      p.counterexample ? counterexample_json(*p.counterexample) : json(nullptr);
  j["num_checked"] = p.num_checked;
  return j;
}

json curvature_json(const CurvatureEstimate& c) {
  json j;
  j["applicable"] = c.applicable;
  j["value"] = c.applicable ? json(c.value) : json(nullptr);
  if (!c.applicable) j["reason_if_not"] = c.reason_if_not;
  json maximizer = json::object();
  if (c.stage) maximizer["stage"] = *c.stage;
  if (c.action) maximizer["action"] = c.action->index;
  if (c.continuation) maximizer["continuation"] = string_json(*c.continuation);
  j["maximizer"] = std::move(maximizer);
  if (c.action || c.skipped_actions > 0)
    j["skipped_actions"] = c.skipped_actions;
  return j;
}

json bound_json(const BoundReport& b) {
  return {{"greedy_value", b.greedy_value},
          {"optimal_value", b.optimal_value},
          {"ratio", optional_json(b.ratio)},
          {"factor_thm3", b.factor_thm3},
          {"eta", optional_json(b.eta)},
          {"factor_thm4", optional_json(b.factor_thm4)},
          {"sigma_hat", optional_json(b.sigma_hat)},
          {"factor_thm2", optional_json(b.factor_thm2)},
          {"factor_thm2_certified", false},
          {"satisfied_thm3", b.satisfied_thm3},
          {"satisfied_thm4", b.satisfied_thm4}};
}

json go_condition_json(const task::GoCondition& g) {
  return {{"index", g.index == task::GoIndex::kOi ? "o_i" : "o_j"},
          {"products", g.products},
          {"margins", g.margins},
          {"worst_margin", g.worst_margin},
          {"holds", g.holds}};
}

json conditions_json(const RunReport& report) {
  if (const auto* t = std::get_if<TaskConditions>(&report.model_conditions)) {
    json j;
    j["diminishing_condition"] = {{"l_hat", t->diminishing.l_hat},
                                  {"u_hat", t->diminishing.u_hat},
                                  {"margin", t->diminishing.margin},
                                  {"holds", t->diminishing.holds},
                                  {"extrapolated", t->diminishing.extrapolated}};
    j["half_condition"] = {{"l_hat", t->half.l_hat},
                           {"margin", t->half.margin},
                           {"holds", t->half.holds},
                           {"extrapolated", t->half.extrapolated}};
    if (t->prior)
      j["prior_condition"] = {{"c", t->prior->c},
                              {"threshold", t->prior->threshold},
                              {"first_value", t->prior->first_value},
                              {"margin", t->prior->margin},
                              {"holds", t->prior->holds}};
    else
      j["prior_condition"] = nullptr;
    j["go_condition"] = t->go ? go_condition_json(*t->go) : json(nullptr);
    if (t->go_oj) {
      j["go_condition_oj"] = go_condition_json(*t->go_oj);
      j["go_variants_differ"] = !t->go || t->go->holds != t->go_oj->holds ||
                                t->go->products != t->go_oj->products;
    }
    return j;
  }
  if (const auto* me =
          std::get_if<MeasurementConditions>(&report.model_conditions)) {
    json j;
    j["sigma_condition"] = {{"margins", me->sigma.margins},
                            {"worst_margin", me->sigma.worst_margin},
                            {"holds", me->sigma.holds}};
    j["prior_condition"] = {{"a", me->prior.a},
                            {"b", me->prior.b},
                            {"lhs", me->prior.lhs},
                            {"rhs", me->prior.rhs},
                            {"margin", me->prior.margin},
                            {"holds", me->prior.holds},
                            {"degenerate", me->prior.degenerate}};
    if (me->first_stage)
      j["first_stage"] = {{"e1", me->first_stage->e1},
                          {"e1_star", me->first_stage->e1_star},
                          {"gap", me->first_stage->gap},
                          {"equal", me->first_stage->equal},
                          {"stage1_product", me->first_stage->stage1_product}};
    else
      j["first_stage"] = nullptr;
    json terms = json::array();
    for (const auto& t : me->go_terms)
      terms.push_back({{"stage", t.stage},
                       {"s_star_i", t.s_star_i},
                       {"s_bar_star", t.s_bar_star},
                       {"s_i", t.s_i},
                       {"a_i", t.a_i},
                       {"c_k", t.c_k},
                       {"lhs", t.lhs},
                       {"rhs", t.rhs},
                       {"relative_gap", t.relative_gap},
                       {"holds", t.holds}});
    j["go_inequality_terms"] = std::move(terms);
    j["go_terms_agree"] =
        me->go_terms_agree ? json(*me->go_terms_agree) : json(nullptr);
    return j;
  }
  return nullptr;
}

json config_json(const RunConfig& c, Model model, std::size_t K) {
  json j;
  j["model"] = model_name(model);
  j["instance"] = c.instance_path ? json(*c.instance_path) : json(nullptr);
  if (!c.instance_path) {
    json gen = {{"seed", c.seed}};
    if (model == Model::kTaskAssignment) {
      gen["n"] = c.n;
      gen["m"] = c.m;
      gen["p_low"] = c.p_low;
      gen["p_high"] = c.p_high;
    } else if (model == Model::kAdaptiveMeasurement) {
      gen["grid_points"] = c.grid_points;
      if (!c.sigma_sq.empty()) gen["sigma_sq"] = c.sigma_sq;
      else
        gen["sigma_order"] =
            c.sigma_order == measurement::SigmaOrder::kNonDecreasing
                ? "nondecreasing"
            : c.sigma_order == measurement::SigmaOrder::kNonIncreasing
                ? "nonincreasing"
                : "unordered";
    }
    j["generator"] = std::move(gen);
  } else {
    j["generator"] = nullptr;
  }
  j["K"] = K;
  j["tol"] = c.tol;
  j["budget"] = c.budget;
  j["go_index_oj"] = c.go_index_oj;
  return j;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return v;
}

// "1,2,5-8" -> {1,2,5,6,7,8}
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      seeds.push_back(parse_count(item));
      continue;
    }
    const std::uint64_t lo = parse_count(item.substr(0, dash));
    const std::uint64_t hi = parse_count(item.substr(dash + 1));
    if (lo > hi) throw std::invalid_argument("empty seed range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::size_t as_positive_integer(double v, const std::string& param) {
  if (!(v >= 1.0) || v != std::floor(v))
    throw std::invalid_argument("sweep parameter " + param +
                                " needs positive integers");
  return static_cast<std::size_t>(v);
}

void write_output(const std::string& text, const RunConfig& config,
                  std::ostream& out) {
  if (!config.out) {
    out << text;
    return;
  }
  std::ofstream file(*config.out);
  if (!file) throw std::runtime_error("cannot write " + *config.out);
  file << text;
}

}  // namespace

const PropertyReport* RunReport::find(Property p) const {
  for (const auto& r : properties)
    if (r.property == p) return &r;
  return nullptr;
}

Instance make_instance(const RunConfig& config) {
  Instance instance = [&]() -> Instance {
    if (config.instance_path) {
      Instance loaded = load_instance(*config.instance_path);
      if (config.model && *config.model != model_of(loaded))
        throw ParseError(*config.instance_path + ": model is '" +
                         std::string(model_name(model_of(loaded))) +
                         "' but --model says '" +
                         std::string(model_name(*config.model)) + "'");
      return loaded;
    }
    const Model model = config.model.value_or(Model::kTaskAssignment);
    std::size_t horizon =
        config.generate_K.value_or(config.K.value_or(kDefaultGeneratedK));
    if (model == Model::kAdaptiveMeasurement && !config.sigma_sq.empty())
      horizon = config.sigma_sq.size();
    return generate(config, model, horizon);
  }();

  const std::size_t horizon = horizon_of(instance);
  const std::size_t K = config.K.value_or(horizon);
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (K > horizon)
    throw std::invalid_argument("K=" + std::to_string(K) +
                                " exceeds the instance horizon " +
                                std::to_string(horizon));
  return truncate(instance, K);
}

RunReport run_solve(const RunConfig& config) {
  return run(config, "solve", false);
}

RunReport run_verify(const RunConfig& config) {
  return run(config, "verify", true);
}

json report_body(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["config"] = config_json(r.config, r.model, r.K);
  j["alphabet_size"] = r.alphabet_size;

  json prefixes = json::array();
  for (const auto& p : r.greedy.prefixes) prefixes.push_back(string_json(p));
  j["greedy"] = {{"string", string_json(r.greedy.result())},
                 {"value", r.greedy.value()},
                 {"prefixes", std::move(prefixes)},
                 {"values", r.greedy.values},
                 {"per_stage_argmax_ties", r.greedy.per_stage_argmax_ties}};
  j["optimal"] = {{"argmax", string_json(r.optimal.argmax)},
                  {"value", r.optimal.value},
                  {"num_evaluated", r.optimal.num_evaluated}};

  json props = json::array();
  for (const auto& p : r.properties) props.push_back(property_json(p));
  j["properties"] = std::move(props);
  j["curvatures"] = {{"eta", curvature_json(r.eta)},
                     {"sigma_hat", curvature_json(r.sigma_hat)}};
  j["bound"] = bound_json(r.bound);
  j["model_conditions"] = conditions_json(r);
  j["evaluation_counts"] = {{"greedy", r.evaluation_counts.greedy},
                            {"optimal", r.evaluation_counts.optimal},
                            {"bound", r.evaluation_counts.bound},
                            {"checks", r.evaluation_counts.checks},
                            {"total", r.evaluation_counts.total}};
  return j;
}

json to_json(const RunReport& r) {
  json j = report_body(r);
  j["execution"] = {{"threads", r.config.threads},
                    {"timings_ms",
                     {{"greedy", r.timings.greedy_ms},
                      {"optimal", r.timings.optimal_ms},
                      {"bound", r.timings.bound_ms},
                      {"checks", r.timings.checks_ms},
                      {"total", r.timings.total_ms}}}};
  return j;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "param",          "value",
      "seed",           "model",
      "K",              "m",
      "greedy_value",   "optimal_value",
      "ratio",          "factor_thm3",
      "eta",            "factor_thm4",
      "sigma_hat",      "factor_thm2",
      "satisfied_thm3", "satisfied_thm4",
      "k_monotone",     "k_diminishing",
      "go_concave",     "condition_margin",
      "diminishing_condition_margin",
      "prior_condition_margin",
  };
  return columns;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + "\n";
}

std::string csv_row(const RunReport& r, const std::string& param,
                    const std::string& value, const std::string& seed) {
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  auto property = [&](Property p) -> std::string {
    const PropertyReport* rep = r.find(p);
    if (!rep) return "";
    if (!rep->applicable) return "n/a";
    return flag(rep->holds);
  };

  std::string condition, diminishing, prior;
  if (const auto* t = std::get_if<TaskConditions>(&r.model_conditions)) {
    condition = format_double(t->half.margin);
    diminishing = format_double(t->diminishing.margin);
    if (t->prior) prior = format_double(t->prior->margin);
  } else if (const auto* me =
                 std::get_if<MeasurementConditions>(&r.model_conditions)) {
    condition = format_double(me->sigma.worst_margin);
    prior = format_double(me->prior.margin);
  }

  const std::vector<std::string> fields = {
      param,
      value,
      seed,
      std::string(model_name(r.model)),
      std::to_string(r.K),
      std::to_string(r.alphabet_size),
      format_double(r.bound.greedy_value),
      format_double(r.bound.optimal_value),
      format_optional(r.bound.ratio),
      format_double(r.bound.factor_thm3),
      format_optional(r.bound.eta),
      format_optional(r.bound.factor_thm4),
      format_optional(r.bound.sigma_hat),
      format_optional(r.bound.factor_thm2),
      flag(r.bound.satisfied_thm3),
      flag(r.bound.satisfied_thm4),
      property(Property::kKMonotone),
      property(Property::kKDiminishing),
      property(Property::kKGoConcave),
      condition,
      diminishing,
      prior,
  };
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ',';
    out += fields[k];
  }
  return out + "\n";
}

std::string format_report(const RunReport& report, OutputFormat format) {
  if (format == OutputFormat::kCsv) return csv_header() + csv_row(report);
  return to_json(report).dump(2) + "\n";
}

std::string run_sweep(const RunConfig& config, const SweepSpec& sweep) {
  const Model model = config.instance_path
                          ? model_of(load_instance(*config.instance_path))
                          : config.model.value_or(Model::kTaskAssignment);
  const std::string& p = sweep.param;
  const bool generated = !config.instance_path;

  auto require = [&](bool ok, const char* what) {
    if (!ok)
      throw std::invalid_argument("sweep parameter '" + p + "' " + what);
  };
  const bool task = model == Model::kTaskAssignment;
  const bool meas = model == Model::kAdaptiveMeasurement;
  if (p == "L_hat" || p == "p_low" || p == "p_high" || p == "m" || p == "n") {
    require(task, "applies to the task_assignment model only");
    require(generated, "requires a generated instance");
  } else if (p == "grid_points" || p == "sigma_growth") {
    require(meas, "applies to the adaptive_measurement model only");
    require(generated, "requires a generated instance");
  } else if (p != "K") {
    throw std::invalid_argument("unknown sweep parameter '" + p + "'");
  }

  std::string out = csv_header();
  for (double value : sweep.values) {
    for (std::uint64_t seed : sweep.seeds) {
      RunConfig c = config;
      c.seed = seed;
      if (p == "L_hat" || p == "p_low") {
        c.p_low = value;
      } else if (p == "p_high") {
        c.p_high = value;
      } else if (p == "m") {
        c.m = as_positive_integer(value, p);
      } else if (p == "n") {
        c.n = as_positive_integer(value, p);
      } else if (p == "grid_points") {
        c.grid_points = as_positive_integer(value, p);
      } else if (p == "sigma_growth") {
        require(value > 0.0, "needs positive values");
        const std::size_t K = config.K.value_or(kDefaultGeneratedK);
        c.sigma_sq.assign(K, 1.0);
        for (std::size_t j = 1; j < K; ++j)
          c.sigma_sq[j] = c.sigma_sq[j - 1] * value;
      } else {
        c.K = as_positive_integer(value, p);
        if (generated) {
          // Generate once at the largest K and truncate, so every K of a
          // seed sees the same instance.
          double largest = 0.0;
          for (double v : sweep.values) largest = std::max(largest, v);
          c.generate_K = as_positive_integer(largest, p);
          if (meas && c.sigma_sq.empty())
            c.sigma_sq = std::get<measurement::MeasurementInstance>(
                             generate(c, model, *c.generate_K))
                             .sigma_sq();
        }
      }
      const std::string value_text = format_double(value);
      const RunReport report = run_verify(c);
      out += csv_row(report, p, value_text, std::to_string(seed));
    }
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"String-submodular greedy/optimal solver and condition checker",
               "strsub"};
  app.require_subcommand(1);

  RunConfig config;
  std::string model_text;
  std::string format_text = "json";
  std::string sigma_order_text = "nondecreasing";
  std::size_t K = 0;
  std::string sweep_param, sweep_values, sweep_seeds;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", model_text,
                    "task_assignment | adaptive_measurement | table");
    sub->add_option("--instance", config.instance_path, "Instance file (JSON)");
    sub->add_option("--K", K, "Horizon (default: instance horizon)");
    sub->add_option("--seed", config.seed, "Generator seed");
    sub->add_option("--n", config.n, "Subtasks (generated task instances)");
    sub->add_option("--m", config.m, "Agents (generated task instances)");
    sub->add_option("--p-low", config.p_low, "Lower probability bound");
    sub->add_option("--p-high", config.p_high, "Upper probability bound");
    sub->add_option("--sigma-sq", config.sigma_sq, "Noise variances")
        ->delimiter(',');
    sub->add_option("--sigma-order", sigma_order_text,
                    "nondecreasing | nonincreasing | unordered");
    sub->add_option("--grid-points", config.grid_points,
                    "Uniform grid size on [0.5, 1]");
    sub->add_option("--out", config.out, "Output path (default: stdout)");
  };
  auto add_run = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--tol", config.tol, "Absolute inequality slack");
    sub->add_option("--budget", config.budget, "Maximum enumerated strings");
    sub->add_option("--threads", config.threads, "Worker threads");
    sub->add_flag("--go-index-oj", config.go_index_oj,
                  "Also evaluate the o_j variant of the task GO condition");
  };

  CLI::App* solve = app.add_subcommand("solve", "Greedy vs exhaustive optimum");
  add_run(solve);
  solve->add_option("--format", format_text, "json | csv");
  CLI::App* verify = app.add_subcommand("verify", "Run every property check");
  add_run(verify);
  verify->add_option("--format", format_text, "json | csv");
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  add_run(sweep);
  sweep->add_option("--param", sweep_param, "Parameter to sweep")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "Seeds, e.g. 1,2,10-20 (empty: no rows)")
      ->expected(0, 1);
  CLI::App* gen = app.add_subcommand("gen", "Write a generated instance");
  add_common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!model_text.empty()) {
      config.model = parse_model(model_text);
      if (!config.model)
        throw std::invalid_argument("unknown model '" + model_text + "'");
    }
    if (K > 0) config.K = K;
    if (format_text == "csv")
      config.format = OutputFormat::kCsv;
    else if (format_text != "json")
      throw std::invalid_argument("unknown format '" + format_text + "'");
    if (sigma_order_text == "nondecreasing")
      config.sigma_order = measurement::SigmaOrder::kNonDecreasing;
    else if (sigma_order_text == "nonincreasing")
      config.sigma_order = measurement::SigmaOrder::kNonIncreasing;
    else if (sigma_order_text == "unordered")
      config.sigma_order = measurement::SigmaOrder::kUnordered;
    else
      throw std::invalid_argument("unknown sigma order '" + sigma_order_text +
                                  "'");
    if (!(config.tol > 0.0)) throw std::invalid_argument("--tol must be > 0");
    if (config.budget == 0) throw std::invalid_argument("--budget must be > 0");
    if (config.threads == 0) config.threads = 1;

    if (solve->parsed()) {
      write_output(format_report(run_solve(config), config.format), config,
                   out);
    } else if (verify->parsed()) {
      write_output(format_report(run_verify(config), config.format), config,
                   out);
    } else if (sweep->parsed()) {
      SweepSpec spec;
      spec.param = sweep_param;
      for (const auto& v : split(sweep_values))
        spec.values.push_back(parse_number(v));
      spec.seeds = sweep->count("--seeds") > 0
                       ? parse_seeds(sweep_seeds)
                       : std::vector<std::uint64_t>{config.seed};
      write_output(run_sweep(config, spec), config, out);
    } else if (gen->parsed()) {
      write_output(serialize_instance(make_instance(config)), config, out);
    }
  } catch (const InstanceTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace strsub::cli
