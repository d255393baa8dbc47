#include "tclab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "tclab/cond_ops.hpp"
#include "tclab/duality.hpp"
#include "tclab/errors.hpp"

namespace tclab::cli {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::SchemaError, path + ": " + msg);
}

ExtReal parse_value(const json& v, const std::string& path) {
  if (v.is_number()) return ExtReal(v.get<double>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return ExtReal::pos_inf();
    if (s == "-inf") return ExtReal::neg_inf();
  }
  schema(path, "expected a number or \"inf\"/\"-inf\", got " + v.dump());
}

std::vector<ExtReal> parse_row(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array");
  if (v.size() != n) schema(path, "expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
  std::vector<ExtReal> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(parse_value(v[i], path + "/" + std::to_string(i)));
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw Error(ErrorCode::UnknownIdentifier, std::string(what) + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(std::string_view id) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = id.find(':', start);
    parts.emplace_back(id.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

RiskFamily parse_family(std::string_view id) {
  auto parts = split(id);
  if (parts.size() == 2 && parts[0] == "raroc") return raroc_family(parse_number(parts[1], id));
  throw Error(ErrorCode::UnknownIdentifier, "risk family '" + std::string(id) + "'");
}

ojson ext(ExtReal v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return v.value();
}

ojson values(const RandomVariable& x) {
  ojson a = ojson::array();
  for (auto v : x.values()) a.push_back(ext(v));
  return a;
}

ojson rows(const AdaptedProcess& x) {
  ojson a = ojson::array();
  for (const auto& r : x.rows()) a.push_back(values(r));
  return a;
}

ojson witness_json(const TcWitness& w) {
  ojson j;
  j["condition"] = w.condition;
  j["instance"] = w.instance;
  j["t"] = w.t;
  j["s"] = w.s;
  j["outcome"] = w.outcome;
  j["atom"] = w.atom;
  j["lhs"] = ext(w.lhs);
  j["rhs"] = ext(w.rhs);
  j["x"] = rows(w.x);
  const auto& space = *w.x.space();
  j["outcomes"] = space.outcomes();
  j["probs"] = std::vector<double>(space.probs().begin(), space.probs().end());
  ojson parts = ojson::array();
  for (int t = 0; t <= space.horizon(); ++t) parts.push_back(space.atoms(t));
  j["partitions"] = parts;
  j["m"] = w.m ? values(*w.m) : ojson(nullptr);
  return j;
}

ojson verdict_json(const Verdict& v) {
  ojson j;
  j["holds"] = v.holds;
  j["checked"] = v.checked;
  j["seed"] = v.seed;
  j["eps"] = v.eps;
  j["direction"] = to_string(v.direction);
  ojson conds = ojson::array();
  for (const auto& c : v.conditions) conds.push_back({{"name", c.name}, {"holds", c.holds}, {"evaluated", c.evaluated}});
  j["conditions"] = conds;
  j["shrink_steps"] = v.shrink_steps;
  j["witness"] = v.witness ? witness_json(*v.witness) : ojson(nullptr);
  return j;
}

ojson rule_witness_json(const RuleWitness& w) {
  ojson j;
  j["property"] = w.property;
  j["t"] = w.t;
  j["s"] = w.s;
  j["outcome"] = w.outcome;
  j["lhs"] = ext(w.lhs);
  j["rhs"] = ext(w.rhs);
  j["m"] = values(w.m);
  j["m_other"] = w.m_other ? values(*w.m_other) : ojson(nullptr);
  j["x"] = rows(w.x);
  return j;
}

ojson axiom_witness_json(const AxiomWitness& w) {
  ojson j;
  j["t"] = w.t;
  j["atom_mask"] = w.atom_mask;
  j["outcome"] = w.outcome;
  j["lhs"] = ext(w.lhs);
  j["rhs"] = ext(w.rhs);
  j["x"] = rows(w.x);
  j["y"] = w.y ? rows(*w.y) : ojson(nullptr);
  return j;
}

void render(const ojson& report, const std::string& format, std::ostream& out) {
  if (format == "text") {
    for (const auto& [key, value] : report.items())
      out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
}

struct Session {
  SessionConfig config;
  std::string measure, rule, direction, scope = "one-step", notion, process, var, benchmark, index, family;
  int t = -1;
  double x = 1.0;

  // weak-process:<dir> and semiweak:<dir> carry their own direction; an
  // explicit --direction must agree with it.
  Direction resolve_direction() const {
    auto p = split(rule);
    std::optional<Direction> implied;
    if (p.size() == 2 && (p[0] == "weak-process" || p[0] == "semiweak")) implied = parse_direction(p[1]);
    if (direction.empty()) return implied.value_or(Direction::Accept);
    auto given = parse_direction(direction);
    if (implied && *implied != given)
      throw Error(ErrorCode::InvalidArgument, "--direction " + direction + " contradicts rule '" + rule + "'");
    return given;
  }

  TreeDocument doc() const { return config.tree.empty() ? parse_tree(s4_document()) : load_tree(config.tree); }

  void validate() {
    if (!(config.eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "--eps must be > 0");
    if (!(config.bisection_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--bisection-tol must be > 0");
    if (config.format != "json" && config.format != "text")
      throw Error(ErrorCode::InvalidArgument, "--format must be json or text");
    if (const char* env = std::getenv("TCLAB_SEED")) {
      std::string s(env);
      std::size_t used = 0;
      try {
        config.seed = std::stoull(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw Error(ErrorCode::InvalidArgument, "TCLAB_SEED='" + s + "' is not a 64-bit integer");
    }
  }

  ojson header(const std::string& command) const {
    ojson j;
    j["command"] = command;
    j["tree"] = config.tree.empty() ? "builtin:s4" : config.tree;
    j["seed"] = config.seed;
    j["eps"] = config.eps;
    j["samples"] = config.samples;
    return j;
  }

  CheckOptions check_options(const TreeDocument& d, Kind kind) const {
    CheckOptions o;
    o.space = d.space;
    o.samples = config.samples;
    o.seed = config.seed;
    o.eps = config.eps;
    o.parallel = !config.serial;
    if (kind == Kind::Processes) {
      for (const auto& [name, p] : d.processes) o.inputs.push_back(p);
    } else {
      for (const auto& [name, v] : d.variables) o.inputs.push_back(AdaptedProcess::terminal(v));
    }
    return o;
  }

  ConverterOptions converter_options() const {
    ConverterOptions c;
    c.tol = config.bisection_tol;
    c.eps = config.eps;
    c.seed = config.seed;
    return c;
  }

  AdaptedProcess argument(const TreeDocument& d) const {
    if (!process.empty() && !var.empty()) throw Error(ErrorCode::InvalidArgument, "give either --process or --var");
    if (!process.empty()) {
      auto it = d.processes.find(process);
      if (it == d.processes.end()) throw Error(ErrorCode::UnknownIdentifier, "process '" + process + "'");
      return it->second;
    }
    if (!var.empty()) return AdaptedProcess::terminal(variable(d));
    throw Error(ErrorCode::InvalidArgument, "one of --process or --var is required");
  }

  const RandomVariable& variable(const TreeDocument& d) const {
    auto it = d.variables.find(var);
    if (it == d.variables.end()) throw Error(ErrorCode::UnknownIdentifier, "variable '" + var + "'");
    return it->second;
  }

  std::vector<int> times(const TreeDocument& d) const {
    if (t >= 0) {
      d.space->check_time(t);
      return {t};
    }
    std::vector<int> ts;
    for (int u = 0; u <= d.space->horizon(); ++u) ts.push_back(u);
    return ts;
  }
};

int cmd_evaluate(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto phi = parse_measure(s.measure);
  auto x = s.argument(d);
  ojson r = s.header("evaluate");
  r["measure"] = phi.name();
  r["argument"] = s.process.empty() ? s.var : s.process;
  ojson vals;
  for (int t : s.times(d)) vals[std::to_string(t)] = values(phi(t, x));
  r["values"] = vals;
  render(r, s.config.format, out);
  return 0;
}

int cmd_check(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto phi = parse_measure(s.measure);
  auto dir = s.resolve_direction();
  auto opts = s.check_options(d, phi.kind());
  ojson r = s.header("check");
  r["measure"] = phi.name();
  Verdict v;
  if (!s.rule.empty()) {
    if (!s.notion.empty() && s.notion != "mu")
      throw Error(ErrorCode::InvalidArgument, "--rule applies to --notion mu only");
    auto mu = parse_rule(s.rule, d, dir);
    auto scope = parse_scope(s.scope);
    r["notion"] = "mu";
    r["rule"] = mu.name();
    r["scope"] = to_string(scope);
    v = check_mu_tc(phi, mu, dir, scope, opts);
  } else if (s.notion == "weak") {
    r["notion"] = "weak";
    v = check_weak_tc(phi, dir, opts);
  } else if (s.notion == "semiweak") {
    r["notion"] = "semiweak";
    v = check_semiweak_tc(phi, dir, opts);
  } else if (s.notion == "benchmark") {
    auto it = d.benchmarks.find(s.benchmark.empty() ? "zero" : s.benchmark);
    if (it == d.benchmarks.end()) throw Error(ErrorCode::UnknownIdentifier, "benchmark set '" + s.benchmark + "'");
    std::vector<RandomVariable> gens;
    for (const auto& name : it->second) gens.push_back(d.variables.at(name));
    r["notion"] = "benchmark";
    r["benchmark"] = it->first;
    v = check_benchmark_tc(phi, gens, dir, opts);
  } else {
    throw Error(ErrorCode::InvalidArgument, "give --rule or --notion weak|semiweak|benchmark");
  }
  r["inputs"] = opts.inputs.size();
  r["verdict"] = verdict_json(v);
  render(r, s.config.format, out);
  return v.holds ? 0 : 2;
}

int cmd_dual_check(const Session& s, std::ostream& out) {
  auto d = s.doc();
  const auto& m = s.variable(d);
  ojson r = s.header("dual-check");
  r["var"] = s.var;
  bool all = true;
  ojson per = ojson::array();
  for (int t : s.times(d)) {
    auto primal_inf = cond_essinf(m, t);
    auto dual_inf = dual_essinf(m, t);
    auto primal_sup = cond_esssup(m, t);
    auto dual_sup = dual_esssup(m, t);
    bool eq = primal_inf == dual_inf && primal_sup == dual_sup;
    all = all && eq;
    per.push_back({{"t", t},
                   {"cond_essinf", values(primal_inf)},
                   {"dual_essinf", values(dual_inf)},
                   {"cond_esssup", values(primal_sup)},
                   {"dual_esssup", values(dual_sup)},
                   {"equal", eq}});
  }
  r["results"] = per;
  r["equal"] = all;
  render(r, s.config.format, out);
  return all ? 0 : 2;
}

int cmd_index_to_risk(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto index = parse_measure(s.index);
  auto v = s.argument(d);
  auto c = s.converter_options();
  ojson r = s.header("convert index-to-risk");
  r["index"] = index.name();
  r["x"] = s.x;
  r["bisection_tol"] = c.tol;
  ojson vals;
  for (int t : s.times(d)) vals[std::to_string(t)] = values(risk_family_from_index(index, s.x, t, v, c));
  r["values"] = vals;
  render(r, s.config.format, out);
  return 0;
}

int cmd_risk_to_index(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto family = parse_family(s.family);
  auto v = s.argument(d);
  auto c = s.converter_options();
  ojson r = s.header("convert risk-to-index");
  r["family"] = family.name;
  r["bisection_tol"] = c.tol;
  ojson vals;
  for (int t : s.times(d)) vals[std::to_string(t)] = values(index_from_risk_family(family, t, v, c));
  r["values"] = vals;
  render(r, s.config.format, out);
  return 0;
}

int cmd_classify(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto mu = parse_rule(s.rule, d, s.resolve_direction());
  auto rep = classify(mu, d.space, s.config.samples, s.config.seed, s.config.eps);
  ojson r = s.header("classify-rule");
  r["rule"] = mu.name();
  r["checked"] = rep.checked;
  r["local"] = rep.local;
  r["monotone"] = rep.monotone;
  r["x_invariant"] = rep.x_invariant;
  r["sx_invariant"] = rep.sx_invariant;
  r["projective"] = rep.projective;
  r["declared"] = {{"x_invariant", rep.declared.x_invariant},
                   {"sx_invariant", rep.declared.sx_invariant},
                   {"projective", rep.declared.projective}};
  r["contradictions"] = rep.contradictions;
  ojson ws = ojson::array();
  for (const auto& w : rep.witnesses) ws.push_back(rule_witness_json(w));
  r["witnesses"] = ws;
  render(r, s.config.format, out);
  return rep.contradictions.empty() ? 0 : 2;
}

int cmd_axioms(const Session& s, std::ostream& out) {
  auto d = s.doc();
  auto phi = parse_measure(s.measure);
  auto rep = check_lm_axioms(phi, d.space, s.config.samples, s.config.seed, s.config.eps);
  ojson r = s.header("axioms");
  r["measure"] = phi.name();
  r["checked"] = rep.checked;
  r["local"] = rep.local;
  r["monotone"] = rep.monotone;
  r["locality_witness"] = rep.locality_witness ? axiom_witness_json(*rep.locality_witness) : ojson(nullptr);
  r["monotonicity_witness"] =
      rep.monotonicity_witness ? axiom_witness_json(*rep.monotonicity_witness) : ojson(nullptr);
  render(r, s.config.format, out);
  return rep.local && rep.monotone ? 0 : 2;
}

int cmd_demo(const Session& s, std::ostream& out) {
  auto d = parse_tree(s4_document());
  const auto& v1 = d.processes.at("V1");
  ojson r = s.header("demo");
  r["tree"] = "builtin:s4";
  r["dglr_V1_t0"] = ext(dglr_measure()(0, v1)[0]);

  struct Headline {
    std::string name;
    LMMeasure phi;
    Direction dir;
    bool expected;
    std::size_t samples;
  };
  std::vector<Headline> heads = {
      {"dglr semiweak accept", dglr_measure(), Direction::Accept, true, 500},
      {"dglr semiweak reject", dglr_measure(), Direction::Reject, true, 500},
      {"draroc:0.5 semiweak accept", draroc_measure(0.5), Direction::Accept, true, 10000},
      {"draroc:0.5 semiweak reject", draroc_measure(0.5), Direction::Reject, false, 10000},
  };
  r.erase("samples");
  CheckOptions o;
  o.seed = s.config.seed;
  o.eps = s.config.eps;
  o.parallel = !s.config.serial;
  o.inputs = {v1};
  bool reproduced = true;
  ojson rs = ojson::array();
  for (const auto& h : heads) {
    o.samples = h.samples;
    auto v = check_semiweak_tc(h.phi, h.dir, o);
    ojson j;
    j["check"] = h.name;
    j["samples"] = h.samples;
    j["expected_holds"] = h.expected;
    j["found_holds"] = v.holds;
    j["reproduced"] = v.holds == h.expected;
    j["verdict"] = verdict_json(v);
    reproduced = reproduced && v.holds == h.expected;
    rs.push_back(j);
  }
  r["headlines"] = rs;
  r["all_reproduced"] = reproduced;
  render(r, s.config.format, out);
  return reproduced ? 0 : 2;
}

}  // namespace

TreeDocument parse_tree(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) schema("", "document must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "outcomes" && key != "probs" && key != "partitions" && key != "variables" && key != "processes" &&
        key != "benchmarks")
      schema("/" + key, "unknown field");
  }
  for (const char* key : {"outcomes", "probs", "partitions"})
    if (!j.contains(key)) schema(std::string("/") + key, "missing required field");

  const auto& jo = j["outcomes"];
  if (!jo.is_array()) schema("/outcomes", "expected an array");
  std::vector<std::string> outcomes;
  for (std::size_t i = 0; i < jo.size(); ++i) {
    if (!jo[i].is_string()) schema("/outcomes/" + std::to_string(i), "expected a string");
    outcomes.push_back(jo[i].get<std::string>());
  }
  const auto& jp = j["probs"];
  if (!jp.is_array()) schema("/probs", "expected an array");
  std::vector<double> probs;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    if (!jp[i].is_number()) schema("/probs/" + std::to_string(i), "expected a number");
    probs.push_back(jp[i].get<double>());
  }
  if (probs.size() != outcomes.size())
    schema("/probs", "expected " + std::to_string(outcomes.size()) + " weights, got " + std::to_string(probs.size()));
  const auto& jt = j["partitions"];
  if (!jt.is_array() || jt.empty()) schema("/partitions", "expected a non-empty array");
  std::vector<Partition> partitions;
  for (std::size_t t = 0; t < jt.size(); ++t) {
    std::string pt = "/partitions/" + std::to_string(t);
    if (!jt[t].is_array()) schema(pt, "expected an array of atoms");
    Partition part;
    for (std::size_t a = 0; a < jt[t].size(); ++a) {
      std::string pa = pt + "/" + std::to_string(a);
      if (!jt[t][a].is_array()) schema(pa, "expected an array of outcome indices");
      Atom atom;
      for (std::size_t k = 0; k < jt[t][a].size(); ++k) {
        const auto& w = jt[t][a][k];
        if (!w.is_number_unsigned()) schema(pa + "/" + std::to_string(k), "expected a non-negative integer");
        atom.push_back(w.get<std::size_t>());
      }
      part.push_back(std::move(atom));
    }
    partitions.push_back(std::move(part));
  }

  TreeDocument doc;
  doc.space = FilteredSpace::build(std::move(outcomes), std::move(probs), std::move(partitions));
  const std::size_t n = doc.space->size();
  const int horizon = doc.space->horizon();

  if (j.contains("variables")) {
    const auto& jv = j["variables"];
    if (!jv.is_object()) schema("/variables", "expected an object");
    for (const auto& [name, value] : jv.items())
      doc.variables.emplace(name, RandomVariable(doc.space, parse_row(value, n, "/variables/" + name)));
  }
  if (j.contains("processes")) {
    const auto& jq = j["processes"];
    if (!jq.is_object()) schema("/processes", "expected an object");
    for (const auto& [name, value] : jq.items()) {
      std::string pp = "/processes/" + name;
      if (!value.is_array()) schema(pp, "expected an array of rows");
      if (value.size() != static_cast<std::size_t>(horizon + 1))
        schema(pp, "expected " + std::to_string(horizon + 1) + " rows, got " + std::to_string(value.size()));
      std::vector<RandomVariable> rs;
      for (int t = 0; t <= horizon; ++t) {
        RandomVariable row(doc.space, parse_row(value[static_cast<std::size_t>(t)], n, pp + "/" + std::to_string(t)));
        if (!is_measurable(row, t))
          throw Error(ErrorCode::AdaptednessError, "process '" + name + "' row " + std::to_string(t) +
                                                       " is not F_" + std::to_string(t) + "-measurable");
        rs.push_back(std::move(row));
      }
      doc.processes.emplace(name, AdaptedProcess(doc.space, std::move(rs)));
    }
  }
  doc.benchmarks["zero"] = {};
  if (j.contains("benchmarks")) {
    const auto& jb = j["benchmarks"];
    if (!jb.is_object()) schema("/benchmarks", "expected an object");
    for (const auto& [name, value] : jb.items()) {
      std::string pb = "/benchmarks/" + name;
      if (!value.is_array()) schema(pb, "expected an array of variable names");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string() || !doc.variables.count(value[i].get<std::string>()))
          schema(pb + "/" + std::to_string(i), "expected the name of a variable, got " + value[i].dump());
        names.push_back(value[i].get<std::string>());
      }
      doc.benchmarks[name] = std::move(names);
    }
  }
  return doc;
}

TreeDocument load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read tree file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tree(buf.str());
}

std::string s4_document() {
  return R"({
  "outcomes": ["w1", "w2", "w3", "w4"],
  "probs": [0.25, 0.25, 0.25, 0.25],
  "partitions": [[[0, 1, 2, 3]], [[0, 1], [2, 3]], [[0], [1], [2], [3]]],
  "variables": {"m1": [1, 3, 2, 5]},
  "processes": {"V1": [[0, 0, 0, 0], [0, 0, 0, 0], [2, -1, 4, -3]]}
})";
}

LMMeasure parse_measure(std::string_view id) {
  auto p = split(id);
  if (p.size() == 1 && p[0] == "cexp") return cond_expectation_measure();
  if (p.size() == 1 && p[0] == "dglr") return dglr_measure();
  if (p.size() == 1 && p[0] == "esssup") return esssup_measure();
  if (p.size() == 2 && p[0] == "draroc") return draroc_measure(parse_number(p[1], id));
  if (p.size() == 3 && p[0] == "raroc-family")
    return raroc_family_measure(parse_number(p[1], id), parse_number(p[2], id));
  throw Error(ErrorCode::UnknownIdentifier, "measure '" + std::string(id) + "'");
}

UpdateRule parse_rule(std::string_view id, const TreeDocument& doc, Direction direction) {
  auto p = split(id);
  if (p.size() == 1 && p[0] == "essinf") return essinf_rule();
  if (p.size() == 1 && p[0] == "esssup") return esssup_rule();
  if (p.size() == 1 && p[0] == "expectation") return expectation_rule();
  if (p.size() == 2 && p[0] == "discounted") return discounted_rule(parse_number(p[1], id));
  if (p.size() == 2 && p[0] == "weak-process") return process_weak_rule(parse_direction(p[1]));
  if (p.size() == 2 && p[0] == "semiweak") return semiweak_rule(parse_direction(p[1]));
  if (p.size() >= 3 && p[0] == "benchmark") {
    auto it = doc.benchmarks.find(p[1]);
    if (it == doc.benchmarks.end()) throw Error(ErrorCode::UnknownIdentifier, "benchmark set '" + p[1] + "'");
    auto measure_id = std::string(id.substr(p[0].size() + p[1].size() + 2));
    std::vector<RandomVariable> gens;
    for (const auto& name : it->second) gens.push_back(doc.variables.at(name));
    return benchmark_rule(std::move(gens), parse_measure(measure_id), direction);
  }
  throw Error(ErrorCode::UnknownIdentifier, "rule '" + std::string(id) + "'");
}

Direction parse_direction(std::string_view text) {
  if (text == "accept") return Direction::Accept;
  if (text == "reject") return Direction::Reject;
  throw Error(ErrorCode::UnknownIdentifier, "direction '" + std::string(text) + "'");
}

Scope parse_scope(std::string_view text) {
  if (text == "one-step") return Scope::OneStep;
  if (text == "full") return Scope::Full;
  throw Error(ErrorCode::UnknownIdentifier, "scope '" + std::string(text) + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session s;
  CLI::App app{"Time-consistency checks for dynamic LM-measures on finite scenario trees", "tclab"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* c) {
    c->add_option("--tree", s.config.tree, "Scenario-tree JSON file (default: built-in S4 fixture)");
    c->add_option("--eps", s.config.eps, "Comparison tolerance");
    c->add_option("--bisection-tol", s.config.bisection_tol, "Bisection tolerance of the converters");
    c->add_option("--seed", s.config.seed, "Random seed (TCLAB_SEED overrides)");
    c->add_option("--samples", s.config.samples, "Random instances");
    c->add_option("--format", s.config.format, "json or text");
    c->add_flag("--serial", s.config.serial, "Run sweeps on one thread");
  };

  std::function<int(std::ostream&)> action;
  auto bind = [&](CLI::App* c, int (*fn)(const Session&, std::ostream&)) {
    c->callback([&action, &s, fn] { action = [&s, fn](std::ostream& o) { return fn(s, o); }; });
  };

  auto* ev = app.add_subcommand("evaluate", "Evaluate a measure on a named variable or process");
  common(ev);
  ev->add_option("--measure", s.measure)->required();
  ev->add_option("--process", s.process);
  ev->add_option("--var", s.var);
  ev->add_option("--t", s.t, "Time (default: all)");
  bind(ev, cmd_evaluate);

  auto* ck = app.add_subcommand("check", "Check a time-consistency notion; exit 2 when violated");
  common(ck);
  ck->add_option("--measure", s.measure)->required();
  ck->add_option("--rule", s.rule, "Update rule identifier");
  ck->add_option("--notion", s.notion, "mu (with --rule), weak, semiweak or benchmark");
  ck->add_option("--benchmark", s.benchmark, "Benchmark set for --notion benchmark");
  ck->add_option("--direction", s.direction, "accept or reject (default: implied by the rule, else accept)");
  ck->add_option("--scope", s.scope, "one-step or full");
  bind(ck, cmd_check);

  auto* dc = app.add_subcommand("dual-check", "Compare conditional essinf/esssup with their dual forms");
  common(dc);
  dc->add_option("--var", s.var)->required();
  dc->add_option("--t", s.t, "Time (default: all)");
  bind(dc, cmd_dual_check);

  auto* cv = app.add_subcommand("convert", "Index / risk-family converters");
  cv->require_subcommand(1);
  auto* i2r = cv->add_subcommand("index-to-risk", "phi^x from an acceptability index");
  common(i2r);
  i2r->add_option("--index", s.index)->required();
  i2r->add_option("--x", s.x)->required();
  i2r->add_option("--process", s.process);
  i2r->add_option("--var", s.var);
  i2r->add_option("--t", s.t, "Time (default: all)");
  bind(i2r, cmd_index_to_risk);
  auto* r2i = cv->add_subcommand("risk-to-index", "Acceptability index from a risk family");
  common(r2i);
  r2i->add_option("--family", s.family, "raroc:<alpha>")->required();
  r2i->add_option("--process", s.process);
  r2i->add_option("--var", s.var);
  r2i->add_option("--t", s.t, "Time (default: all)");
  bind(r2i, cmd_risk_to_index);

  auto* cr = app.add_subcommand("classify-rule", "Test locality, monotonicity and invariance flags of a rule");
  common(cr);
  cr->add_option("--rule", s.rule)->required();
  cr->add_option("--direction", s.direction, "Direction used by benchmark rules");
  bind(cr, cmd_classify);

  auto* ax = app.add_subcommand("axioms", "Test locality and monotonicity of a measure");
  common(ax);
  ax->add_option("--measure", s.measure)->required();
  bind(ax, cmd_axioms);

  auto* dm = app.add_subcommand("demo", "Rerun the headline results on the S4 fixture and random trees");
  common(dm);
  bind(dm, cmd_demo);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    s.validate();
    return action(out);
  } catch (const Error& e) {
    std::string_view msg = e.what();
    auto prefix = std::string(to_string(e.code())) + ": ";
    if (msg.substr(0, prefix.size()) == prefix) msg.remove_prefix(prefix.size());
    err << "error[" << to_string(e.code()) << "]: " << msg << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tclab::cli
