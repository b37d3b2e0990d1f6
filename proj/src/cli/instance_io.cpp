#include "strsub/cli/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace strsub::cli {

using nlohmann::json;

namespace {

// Field accessors that report the offending path on failure.
class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& field,
                         const std::string& what) const {
    throw ParseError(std::string(source_) + ": field '" + field + "': " +
                     what);
  }

  const json& member(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(key, "missing");
    return *it;
  }

  std::size_t positive(const json& obj, const std::string& key) const {
    const json& v = member(obj, key);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
      fail(key, "expected a positive integer");
    return v.get<std::size_t>();
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  const json& array(const json& v, const std::string& field,
                    std::size_t expected) const {
    if (!v.is_array()) fail(field, "expected an array");
    if (v.size() != expected)
      fail(field, "expected " + std::to_string(expected) + " entries, got " +
                      std::to_string(v.size()));
    return v;
  }

  std::vector<double> numbers(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      out.push_back(number(v[k], field + "[" + std::to_string(k) + "]"));
    return out;
  }

 private:
  std::string_view source_;
};

std::string idx(std::size_t k) { return "[" + std::to_string(k) + "]"; }

task::TaskAssignmentInstance parse_task(const json& doc, const Reader& r) {
  const std::size_t n = r.positive(doc, "n");
  const std::size_t m = r.positive(doc, "m");
  const std::size_t K = r.positive(doc, "K");

  auto matrix = [&](const std::string& key) {
    std::vector<double> out;
    const json& rows = r.array(r.member(doc, key), key, n);
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = r.array(rows[i], key + idx(i), m);
      for (std::size_t a = 0; a < m; ++a)
        out.push_back(r.number(row[a], key + idx(i) + idx(a)));
    }
    return out;
  };
  std::vector<double> lower = matrix("L");
  std::vector<double> upper = matrix("U");

  std::vector<double> p;
  const json& subtasks = r.array(r.member(doc, "p"), "p", n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& stages = r.array(subtasks[i], "p" + idx(i), K);
    for (std::size_t j = 0; j < K; ++j) {
      const std::string field = "p" + idx(i) + idx(j);
      const json& agents = r.array(stages[j], field, m);
      for (std::size_t a = 0; a < m; ++a)
        p.push_back(r.number(agents[a], field + idx(a)));
    }
  }
  try {
    return task::TaskAssignmentInstance(n, m, K, std::move(p),
                                        std::move(lower), std::move(upper));
  } catch (const std::invalid_argument& e) {
    r.fail("p", e.what());
  }
}

measurement::MeasurementInstance parse_measurement(const json& doc,
                                                   const Reader& r) {
  std::vector<double> sigma_sq = r.numbers(r.member(doc, "sigma_sq"), "sigma_sq");
  if (auto k = doc.find("K"); k != doc.end()) {
    if (!k->is_number_integer() || k->get<long long>() < 0 ||
        k->get<std::size_t>() != sigma_sq.size())
      r.fail("K", "must equal the length of sigma_sq");
  }
  const json& spec = r.member(doc, "e_grid");
  std::vector<double> grid;
  if (spec.is_array()) {
    grid = r.numbers(spec, "e_grid");
  } else if (spec.is_object()) {
    const std::size_t count = r.positive(spec, "count");
    double lo = measurement::kGridMin;
    double hi = measurement::kGridMax;
    if (auto it = spec.find("min"); it != spec.end())
      lo = r.number(*it, "e_grid.min");
    if (auto it = spec.find("max"); it != spec.end())
      hi = r.number(*it, "e_grid.max");
    grid = measurement::uniform_grid(count, lo, hi);
  } else {
    r.fail("e_grid", "expected a list or {count, min, max}");
  }
  try {
    return measurement::MeasurementInstance(std::move(sigma_sq),
                                            std::move(grid));
  } catch (const std::invalid_argument& e) {
    r.fail("sigma_sq/e_grid", e.what());
  }
}

TableOracle parse_table(const json& doc, const Reader& r) {
  const std::size_t m = r.positive(doc, "m");
  const std::size_t K = r.positive(doc, "K");
  const json& entries = r.member(doc, "entries");
  if (!entries.is_array()) r.fail("entries", "expected an array");
  std::map<ActionString, double> values;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string field = "entries" + idx(k);
    const json& e = entries[k];
    if (!e.is_object()) r.fail(field, "expected an object");
    const json& s = r.member(e, "string");
    if (!s.is_array()) r.fail(field + ".string", "expected an array");
    std::vector<ActionId> actions;
    for (const json& a : s) {
      if (!a.is_number_integer() || a.get<long long>() < 0)
        r.fail(field + ".string", "expected non-negative action indices");
      actions.emplace_back(a.get<std::size_t>());
    }
    const double v = r.number(r.member(e, "value"), field + ".value");
    if (!values.emplace(ActionString(std::move(actions)), v).second)
      r.fail(field, "duplicate string");
  }
  try {
    return TableOracle(m, K, std::move(values));
  } catch (const std::invalid_argument& e) {
    r.fail("entries", e.what());
  }
}

}  // namespace

std::string_view model_name(Model model) {
  switch (model) {
    case Model::kTaskAssignment:
      return "task_assignment";
    case Model::kAdaptiveMeasurement:
      return "adaptive_measurement";
    case Model::kTable:
      return "table";
  }
  return "unknown";
}

std::optional<Model> parse_model(std::string_view name) {
  for (Model m : {Model::kTaskAssignment, Model::kAdaptiveMeasurement,
                  Model::kTable})
    if (model_name(m) == name) return m;
  return std::nullopt;
}

Model model_of(const Instance& instance) {
  return static_cast<Model>(instance.index());
}

std::size_t horizon_of(const Instance& instance) {
  return std::visit(
      [](const auto& inst) -> std::size_t {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TableOracle>)
          return inst.horizon();
        else
          return inst.K();
      },
      instance);
}

Instance parse_instance(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  const Reader r(source);
  if (!doc.is_object()) r.fail("<root>", "expected an object");

  const json& version = r.member(doc, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    r.fail("schema_version",
           "unsupported version (expected " + std::to_string(kSchemaVersion) +
               ")");
  const json& name = r.member(doc, "model");
  if (!name.is_string()) r.fail("model", "expected a string");
  const auto model = parse_model(name.get<std::string>());
  if (!model) r.fail("model", "unknown model '" + name.get<std::string>() + "'");

  switch (*model) {
    case Model::kTaskAssignment:
      return parse_task(doc, r);
    case Model::kAdaptiveMeasurement:
      return parse_measurement(doc, r);
    case Model::kTable:
      return parse_table(doc, r);
  }
  r.fail("model", "unreachable");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), path);
}

std::string serialize_instance(const Instance& instance) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model"] = model_name(model_of(instance));

  if (const auto* t = std::get_if<task::TaskAssignmentInstance>(&instance)) {
    doc["n"] = t->n();
    doc["m"] = t->m();
    doc["K"] = t->K();
    json lower = json::array(), upper = json::array(), p = json::array();
    for (std::size_t i = 0; i < t->n(); ++i) {
      json lrow = json::array(), urow = json::array(), stages = json::array();
      for (std::size_t a = 0; a < t->m(); ++a) {
        lrow.push_back(t->lower(i, a));
        urow.push_back(t->upper(i, a));
      }
      for (std::size_t j = 0; j < t->K(); ++j) {
        json agents = json::array();
        for (std::size_t a = 0; a < t->m(); ++a) agents.push_back(t->p(i, j, a));
        stages.push_back(std::move(agents));
      }
      lower.push_back(std::move(lrow));
      upper.push_back(std::move(urow));
      p.push_back(std::move(stages));
    }
    doc["L"] = std::move(lower);
    doc["U"] = std::move(upper);
    doc["p"] = std::move(p);
  } else if (const auto* me =
                 std::get_if<measurement::MeasurementInstance>(&instance)) {
    doc["K"] = me->K();
    doc["sigma_sq"] = me->sigma_sq();
    if (me->e_grid() == measurement::uniform_grid(me->grid_size()))
      doc["e_grid"] = {{"count", me->grid_size()},
                       {"min", measurement::kGridMin},
                       {"max", measurement::kGridMax}};
    else
      doc["e_grid"] = me->e_grid();
  } else {
    const auto& table = std::get<TableOracle>(instance);
    doc["m"] = table.alphabet_size();
    doc["K"] = table.horizon();
    json entries = json::array();
    for (const auto& [s, v] : table.values())
      entries.push_back({{"string", s.indices()}, {"value", v}});
    doc["entries"] = std::move(entries);
  }
  return doc.dump(2) + "\n";
}

}  // namespace strsub::cli
