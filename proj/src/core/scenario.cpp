#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace adyn {

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": JSON syntax error";
    const std::string what = e.what();
    const auto pos = what.find("parse error");
    if (pos != std::string::npos) os << " (" << what.substr(pos) << ")";
    throw ConfigError(os.str());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

void set_path(Json& j, const std::string& dotted, const Json& value) {
  if (dotted.empty()) throw ConfigError("empty override path");
  Json* cur = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed override path '" + dotted + "'");
    if (!cur->is_object()) {
      if (!cur->is_null()) throw ConfigError("override path '" + dotted + "' crosses a non-object value");
      *cur = Json::object();
    }
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

// ------------------------------------------------------------ Section

Section::Section(const Json& j, std::string where) : j_(j.is_null() ? Json::object() : j), where_(std::move(where)) {
  if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
}

bool Section::has(const std::string& key) const { return j_.contains(key); }

const Json& Section::at(const std::string& key, const char* expected) const {
  if (!j_.contains(key)) throw ConfigError(where_ + ": missing field '" + key + "'");
  used_.insert(key);
  const Json& v = j_.at(key);
  const std::string e = expected;
  const bool ok = (e == "number" && v.is_number()) || (e == "boolean" && v.is_boolean()) ||
                  (e == "string" && v.is_string()) || (e == "array" && v.is_array()) || e == "any";
  if (!ok) throw ConfigError(where_ + "." + key + ": expected " + e);
  return v;
}

double Section::number(const std::string& key) const {
  const double v = at(key, "number").get<double>();
  if (!std::isfinite(v)) throw ConfigError(where_ + "." + key + ": must be finite");
  return v;
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::int64_t Section::integer(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (v != std::floor(v)) throw ConfigError(where_ + "." + key + ": expected an integer");
  return static_cast<std::int64_t>(v);
}

bool Section::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key, "boolean").get<bool>() : fallback;
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key, "string").get<std::string>() : fallback;
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const Json& a = at(key, "array");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::int64_t> Section::integers(const std::string& key, const std::vector<std::int64_t>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<std::int64_t> out;
  for (double v : numbers(key, {})) {
    if (v != std::floor(v)) throw ConfigError(where_ + "." + key + ": expected an array of integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

Json Section::raw(const std::string& key) const { return at(key, "any"); }

void Section::finish() const {
  for (const auto& [key, value] : j_.items())
    if (!used_.contains(key)) throw ConfigError(where_ + ": unknown field '" + key + "'");
}

// ------------------------------------------------------------ Scenario

Json RunSpec::to_json() const {
  return {{"horizon", horizon},   {"record_dt", record_dt},   {"seed", seed},
          {"replicates", replicates}, {"threads", threads}, {"max_events", max_events},
          {"event_log", event_log}};
}

Json Scenario::section(const std::string& name) const {
  return config.contains(name) ? config.at(name) : Json::object();
}

Scenario Scenario::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  static const std::set<std::string> known{"model", "initial", "run",       "sweep", "ibm", "ode",
                                           "tss",   "canonical", "invasion", "compare", "ess", "description"};
  for (const auto& [key, v] : j.items())
    if (!known.contains(key)) throw ConfigError("scenario: unknown section '" + key + "'");

  Scenario s;
  s.model = DemographyModel::from_json(j.contains("model") ? j.at("model") : Json::object());

  const Section run(j.contains("run") ? j.at("run") : Json::object(), "run");
  s.run.horizon = run.number("horizon", s.run.horizon);
  s.run.record_dt = run.number("record_dt", s.run.record_dt);
  const std::int64_t seed = run.integer("seed", 1);
  if (seed < 0) throw ConfigError("run.seed: must be nonnegative");
  s.run.seed = static_cast<std::uint64_t>(seed);
  s.run.replicates = run.integer("replicates", s.run.replicates);
  s.run.threads = static_cast<int>(run.integer("threads", s.run.threads));
  const std::int64_t max_events = run.integer("max_events", static_cast<std::int64_t>(s.run.max_events));
  s.run.event_log = run.boolean("event_log", s.run.event_log);
  run.finish();
  if (s.run.horizon < 0.0) throw ConfigError("run.horizon: must be nonnegative");
  if (s.run.record_dt < 0.0) throw ConfigError("run.record_dt: must be nonnegative");
  if (s.run.replicates < 1) throw ConfigError("run.replicates: must be at least 1");
  if (s.run.threads < 1) throw ConfigError("run.threads: must be at least 1");
  if (max_events < 1) throw ConfigError("run.max_events: must be positive");
  s.run.max_events = static_cast<std::uint64_t>(max_events);

  const Section init(j.contains("initial") ? j.at("initial") : Json::object(), "initial");
  if (init.has("genotypes")) {
    const Json list = init.raw("genotypes");
    if (!list.is_array() || list.empty()) throw ConfigError("initial.genotypes: expected a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Section g(list[i], "initial.genotypes[" + std::to_string(i) + "]");
      const double u1 = g.number("u1");
      const double u2 = g.number("u2");
      const double d = g.number("density");
      g.finish();
      if (!s.model.space.contains(u1) || !s.model.space.contains(u2))
        throw ConfigError("initial.genotypes[" + std::to_string(i) + "]: allele outside the trait space");
      if (d < 0.0) throw ConfigError("initial.genotypes[" + std::to_string(i) + "].density: must be nonnegative");
      s.initial.emplace_back(Genotype(u1, u2), d);
    }
  } else {
    double u = 0.5 * (s.model.space.lo + s.model.space.hi);
    double d = -1.0;
    if (init.has("monomorphic")) {
      const Section mono(init.raw("monomorphic"), "initial.monomorphic");
      u = mono.number("u", u);
      d = mono.number("density", -1.0);
      mono.finish();
    }
    if (!s.model.space.contains(u)) throw ConfigError("initial.monomorphic.u: outside the trait space");
    if (d < 0.0) d = s.model.carrying_capacity(u);
    s.initial.emplace_back(Genotype::homozygote(u), d);
  }
  init.finish();

  if (j.contains("sweep")) {
    const Section sw(j.at("sweep"), "sweep");
    s.sweep.parameter = sw.string("parameter", "");
    const Json values = sw.raw("values");
    sw.finish();
    if (s.sweep.parameter.empty()) throw ConfigError("sweep.parameter: must be a nonempty dotted path");
    if (s.sweep.parameter.rfind("sweep", 0) == 0) throw ConfigError("sweep.parameter: cannot sweep the sweep");
    if (!values.is_array() || values.empty()) throw ConfigError("sweep.values: expected a nonempty array");
    for (const auto& v : values) s.sweep.values.push_back(v);
  }

  s.input = j;
  s.config = j;
  s.config["model"] = s.model.to_json();
  s.config["run"] = s.run.to_json();
  Json init_json = Json::object();
  Json list = Json::array();
  for (const auto& [g, d] : s.initial) list.push_back({{"u1", g.first()}, {"u2", g.second()}, {"density", d}});
  init_json["genotypes"] = list;
  s.config["initial"] = init_json;
  return s;
}

std::vector<std::string> time_scale_advisory(const DemographyModel& model) {
  std::vector<std::string> out;
  if (model.mu_K <= 0.0) return out;
  const double lhs = std::log(static_cast<double>(model.K)) / model.sigma;
  const double rhs = 1.0 / (static_cast<double>(model.K) * model.mu_K);
  if (!(lhs < rhs)) {
    std::ostringstream os;
    os << "time-scale window violated: ln(K)/sigma = " << lhs << " is not below 1/(K mu_K) = " << rhs
       << "; mutant invasions may overlap";
    out.push_back(os.str());
  }
  return out;
}

}  // namespace adyn
