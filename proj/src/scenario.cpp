#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "json.hpp"

namespace wci {

using Json = nlohmann::ordered_json;

const char *model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Rc: return "rc";
    case ModelKind::WilsonCowan: return "wilson-cowan";
    default: return "coupled";
  }
}

std::vector<double> InstantSpec::expand() const {
  if (generator && !list.empty())
    throw Error(ErrorCode::Config, "instants: give either a generator or a list");
  return generator ? generator->expand() : list;
}

// ---------------------------------------------------------------- model

void ScenarioConfig::validate() const {
  if (!(horizon > 0) || !std::isfinite(horizon))
    throw Error(ErrorCode::Config, "horizon must be positive");
  solver.validate();
  classifier.validate();
  if (output.csv_every < 1) throw Error(ErrorCode::Config, "csv_every must be >= 1");
  if (analysis.grid_n < 16) throw Error(ErrorCode::Config, "grid_n must be >= 16");
  if (!(analysis.domain_bound > 0)) throw Error(ErrorCode::Config, "domain_bound must be > 0");
  if (!(analysis.layer_width > 0)) throw Error(ErrorCode::Config, "layer_width must be > 0");
  if (!(analysis.probe_horizon > 0)) throw Error(ErrorCode::Config, "probe_horizon must be > 0");
  if (!(analysis.c2_tol > 0)) throw Error(ErrorCode::Config, "c2_tol must be > 0");
  for (double m : analysis.convergence_mu)
    if (!(m > 0)) throw Error(ErrorCode::Config, "convergence mu values must be > 0");

  const ImpulseSchedule sched = schedule();
  sched.validate();
  if (kind == ModelKind::Rc) {
    rc.validate();
    if (!sched.empty()) throw Error(ErrorCode::Config, "rc scenarios take no impulses");
  } else {
    population.validate();
    if (kind == ModelKind::Coupled) {
      if (!passive) throw Error(ErrorCode::Config, "coupled scenarios need a passive pair");
      passive->validate();
    } else if (passive) {
      throw Error(ErrorCode::Config, "passive pair only allowed for coupled scenarios");
    }
    if (mu.empty()) throw Error(ErrorCode::Config, "mu list is empty");
    classifier.projection.validate(dimension());
  }
  for (double m : mu)
    if (!(m > 0) || !std::isfinite(m)) throw Error(ErrorCode::Config, "mu values must be > 0");
  if (initial_states.empty()) throw Error(ErrorCode::Config, "no initial states");
  for (const auto &x : initial_states) {
    if (x.size() != dimension())
      throw Error(ErrorCode::Config, "initial state has wrong dimension");
    for (double v : x)
      if (!std::isfinite(v)) throw Error(ErrorCode::Config, "initial state must be finite");
  }
  for (const auto &r : regimes) {
    if (!(r.mu > 0)) throw Error(ErrorCode::Config, "regime mu must be > 0");
    if (r.states.empty()) throw Error(ErrorCode::Config, "regime lists no states");
    for (std::size_t s : r.states)
      if (s >= initial_states.size())
        throw Error(ErrorCode::Config, "regime state index out of range");
  }
}

std::size_t ScenarioConfig::dimension() const {
  switch (kind) {
    case ModelKind::Rc: return 1;
    case ModelKind::WilsonCowan: return 2;
    default: return 4;
  }
}

ImpulseSchedule ScenarioConfig::schedule() const {
  ImpulseSchedule s;
  s.theta_instants = theta.expand();
  s.eta_instants = eta.expand();
  s.regular_jump = regular_jump;
  s.singular_jump = singular_jump;
  s.negative_base = negative_base;
  return s;
}

System ScenarioConfig::system(double m) const {
  switch (kind) {
    case ModelKind::Rc: return System::rc_circuit(rc);
    case ModelKind::WilsonCowan: return System::single(population.with_time_constants(m, m));
    default:
      if (!passive) throw Error(ErrorCode::Config, "coupled scenarios need a passive pair");
      return System::coupled(population.with_time_constants(m, m), *passive);
  }
}

std::vector<SweepRegime> ScenarioConfig::sweep_regimes() const {
  std::vector<SweepRegime> out;
  if (!regimes.empty()) {
    for (const auto &r : regimes) {
      SweepRegime s{r.mu, {}};
      for (std::size_t k : r.states) s.initial_states.push_back(initial_states.at(k));
      out.push_back(std::move(s));
    }
    return out;
  }
  for (double m : mu) out.push_back({m, initial_states});
  return out;
}

// ---------------------------------------------------------------- builtins

namespace {

ScenarioConfig base(std::string name, std::string description, ModelKind kind) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.kind = kind;
  if (kind == ModelKind::WilsonCowan) c.classifier.projection.axes = {0, 1};
  return c;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"rc", "model0", "model0+impulses", "3states", "periodic", "coupled"};
}

ScenarioConfig builtin_scenario(std::string_view name) {
  if (name == "rc") {
    auto c = base("rc", "RC membrane, V' = (-V + I R) / (R C), V(0) = 0", ModelKind::Rc);
    c.rc = {1.0, 0.1, 1.0};
    c.mu = {0.1};
    c.initial_states = {{0.0}};
    c.horizon = 1.0;
    return c;
  }
  if (name == "model0" || name == "model0+impulses") {
    auto c = base(std::string(name), "", ModelKind::WilsonCowan);
    c.population = presets::model0();
    c.initial_states = {{0.25, 0.0}};
    c.horizon = 14.0;
    if (name == "model0") {
      c.description = "two stable states and a saddle, no impulses";
      c.mu = {1.0};
      return c;
    }
    c.description = "swap impulses at 2i/3 and singular impulses at (2i-1)/3";
    c.theta.generator = presets::model0_theta();
    c.eta.generator = presets::model0_eta();
    c.regular_jump = jump_preset("swap-model0");
    c.singular_jump = jump_preset("singular-model0");
    c.mu = {0.1};
    c.analysis.convergence_mu = {0.3, 0.2, 0.1, 0.05, 0.02, 0.01};
    c.analysis.convergence_threshold = 2e-3;
    return c;
  }
  if (name == "3states") {
    auto c = base("3states", "three stable states with quadratic impulses",
                  ModelKind::WilsonCowan);
    c.population = presets::three_states();
    c.theta.generator = presets::coupled_theta();
    c.eta.generator = presets::coupled_eta();
    c.regular_jump = jump_preset("quadratic-3states");
    c.singular_jump = jump_preset("singular-model0");
    c.mu = {1.0};
    c.initial_states = {{0.21, 0.20}};
    c.horizon = 104.95;
    return c;
  }
  if (name == "periodic") {
    auto c = base("periodic", "oscillating pair with a limit cycle", ModelKind::WilsonCowan);
    c.population = presets::oscillator();
    c.mu = {1.0};
    c.initial_states = {{0.17, 0.25}};
    c.horizon = 50.0;
    return c;
  }
  if (name == "coupled") {
    auto c = base("coupled", "impulsive three-state pair next to the oscillating pair",
                  ModelKind::Coupled);
    c.population = presets::three_states();
    c.passive = presets::oscillator();
    c.theta.generator = presets::coupled_theta();
    c.eta.generator = presets::coupled_eta();
    c.regular_jump = jump_preset("quadratic-3states");
    c.singular_jump = jump_preset("singular-model0");
    c.mu = {1.0, 0.2, 0.1, 0.05};
    c.initial_states = {{0.4656, 0.1101, 0.1101, 0.04766},
                        {-0.01, 0.0, 0.17, 0.25},
                        {0.21, 0.20, 0.20, 0.15},
                        {0.5, 0.5, 0.3, 0.3}};
    c.regimes = {{1.0, {1, 2}}, {0.2, {1, 2, 3}}, {0.1, {1, 2, 3}}, {0.05, {1, 2, 3}}};
    c.horizon = 104.95;
    c.classifier.transient_cut = 0;
    c.output.csv_every = 10;
    return c;
  }
  throw Error(ErrorCode::Config, "unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- JSON

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Obj {
 public:
  Obj(const Json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const char *key) const { return j_.contains(key); }

  const Json *take(const char *key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <class T>
  void get(const char *key, T &out) {
    if (const Json *v = take(key)) out = convert<T>(*v, sub(key));
  }

  void done() const {
    for (const auto &item : j_.items())
      if (!seen_.count(item.key())) fail("unknown key '" + item.key() + "'");
  }

  std::string sub(const char *key) const { return path_ + "." + key; }
  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(ErrorCode::Config, path_ + ": " + msg);
  }

  template <class T>
  static T convert(const Json &v, const std::string &path) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw Error(ErrorCode::Config, path + ": expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw Error(ErrorCode::Config, path + ": expected an integer");
      return v.get<int>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw Error(ErrorCode::Config, path + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw Error(ErrorCode::Config, path + ": expected an array");
      std::vector<double> out;
      for (const auto &e : v) out.push_back(convert<double>(e, path + "[]"));
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) throw Error(ErrorCode::Config, path + ": expected an array");
      std::vector<int> out;
      for (const auto &e : v) out.push_back(convert<int>(e, path + "[]"));
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported type");
    }
  }

 private:
  const Json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

Json sigmoid_json(const SigmoidParams &s) { return Json{{"a", s.slope}, {"theta", s.threshold}}; }

SigmoidParams parse_sigmoid(const Json &j, const std::string &path) {
  Obj o(j, path);
  SigmoidParams s;
  o.get("a", s.slope);
  o.get("theta", s.threshold);
  o.done();
  return s;
}

Json population_json(const PopulationParams &p) {
  return Json{{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"c4", p.c4},
              {"ke", p.ke}, {"ki", p.ki}, {"re", p.re}, {"ri", p.ri},
              {"P", p.P},   {"Q", p.Q},   {"mu_e", p.mu_e}, {"mu_i", p.mu_i},
              {"sigmoid_e", sigmoid_json(p.sig_e)},
              {"sigmoid_i", sigmoid_json(p.sig_i)}};
}

PopulationParams parse_population(const Json &j, const std::string &path) {
  Obj o(j, path);
  PopulationParams p;
  o.get("c1", p.c1); o.get("c2", p.c2); o.get("c3", p.c3); o.get("c4", p.c4);
  o.get("ke", p.ke); o.get("ki", p.ki); o.get("re", p.re); o.get("ri", p.ri);
  o.get("P", p.P); o.get("Q", p.Q);
  o.get("mu_e", p.mu_e); o.get("mu_i", p.mu_i);
  if (const Json *s = o.take("sigmoid_e")) p.sig_e = parse_sigmoid(*s, o.sub("sigmoid_e"));
  if (const Json *s = o.take("sigmoid_i")) p.sig_i = parse_sigmoid(*s, o.sub("sigmoid_i"));
  o.done();
  return p;
}

Json term_json(const JumpTerm &t) {
  return Json{{"alpha", t.alpha},
              {"power", {t.power_num, t.power_den}},
              {"shift", t.shift},
              {"shift_power", t.shift_power},
              {"mu_power", t.mu_power},
              {"gamma", t.gamma},
              {"poly", t.poly}};
}

JumpTerm parse_term(const Json &j, const std::string &path) {
  Obj o(j, path);
  JumpTerm t;
  o.get("alpha", t.alpha);
  if (const Json *p = o.take("power")) {
    const auto v = Obj::convert<std::vector<int>>(*p, o.sub("power"));
    if (v.size() != 2) o.fail("power must be [numerator, denominator]");
    t.power_num = v[0];
    t.power_den = v[1];
  }
  o.get("shift", t.shift);
  o.get("shift_power", t.shift_power);
  o.get("mu_power", t.mu_power);
  o.get("gamma", t.gamma);
  o.get("poly", t.poly);
  o.done();
  t.validate();
  return t;
}

Json jump_json(const JumpMap &m) {
  Json j = Json::object();
  if (!m.preset.empty()) j["preset"] = m.preset;
  j["E"] = term_json(m.E);
  j["I"] = term_json(m.I);
  return j;
}

JumpMap parse_jump(const Json &j, const std::string &path) {
  if (j.is_string()) return jump_preset(j.get<std::string>());
  Obj o(j, path);
  JumpMap m;
  std::string preset;
  o.get("preset", preset);
  if (!preset.empty()) m = jump_preset(preset);
  const Json *e = o.take("E");
  const Json *i = o.take("I");
  if (e || i) m.preset = preset;
  if (e) m.E = parse_term(*e, o.sub("E"));
  if (i) m.I = parse_term(*i, o.sub("I"));
  o.done();
  return m;
}

Json instants_json(const InstantSpec &s) {
  if (s.generator) {
    const auto &g = *s.generator;
    return Json{{"generator",
                 {{"slope", g.slope}, {"offset", g.offset}, {"divisor", g.divisor},
                  {"first", g.first}, {"last", g.last}}}};
  }
  return Json{{"list", s.list}};
}

InstantSpec parse_instants(const Json &j, const std::string &path) {
  Obj o(j, path);
  InstantSpec s;
  if (const Json *g = o.take("generator")) {
    Obj go(*g, o.sub("generator"));
    InstantGenerator gen;
    go.get("slope", gen.slope);
    go.get("offset", gen.offset);
    go.get("divisor", gen.divisor);
    go.get("first", gen.first);
    go.get("last", gen.last);
    go.done();
    s.generator = gen;
  }
  o.get("list", s.list);
  o.done();
  return s;
}

const char *policy_name(NegativeBasePolicy p) {
  return p == NegativeBasePolicy::Clamp ? "clamp" : "reject";
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig &c) {
  Json j = Json::object();
  j["name"] = c.name;
  j["description"] = c.description;
  j["model"] = model_kind_name(c.kind);
  if (c.kind == ModelKind::Rc) {
    j["rc"] = {{"R", c.rc.resistance}, {"C", c.rc.capacitance}, {"I", c.rc.current}};
  } else {
    j["population"] = population_json(c.population);
    if (c.passive) j["passive"] = population_json(*c.passive);
    j["impulses"] = {{"theta", instants_json(c.theta)},
                     {"eta", instants_json(c.eta)},
                     {"regular_jump", jump_json(c.regular_jump)},
                     {"singular_jump", jump_json(c.singular_jump)},
                     {"negative_base", policy_name(c.negative_base)}};
  }
  j["mu"] = c.mu;
  j["initial_states"] = c.initial_states;
  Json regimes = Json::array();
  for (const auto &r : c.regimes) regimes.push_back({{"mu", r.mu}, {"states", r.states}});
  j["regimes"] = regimes;
  j["horizon"] = c.horizon;
  j["solver"] = {{"rel_tol", c.solver.rel_tol},
                 {"abs_tol", c.solver.abs_tol},
                 {"max_step", c.solver.max_step},
                 {"min_step", c.solver.min_step},
                 {"sample_stride", c.solver.sample_stride}};
  const auto &k = c.classifier;
  j["classifier"] = {{"transient_cut", k.transient_cut},
                     {"merge_radius", k.merge_radius},
                     {"loop_tol", k.loop_tol},
                     {"settle_ratio", k.settle_ratio},
                     {"settle_floor", k.settle_floor},
                     {"angle_bins", k.angle_bins},
                     {"cluster_stride", k.cluster_stride},
                     {"classify_stride", k.classify_stride},
                     {"closure_every", k.closure_every},
                     {"projection", k.projection.axes}};
  const auto &a = c.analysis;
  j["analysis"] = {{"domain_bound", a.domain_bound},
                   {"grid_n", a.grid_n},
                   {"c2_tol", a.c2_tol},
                   {"c3_mu", a.c3.mu},
                   {"c3_radius", a.c3.radius},
                   {"c3_final_tol", a.c3.final_tol},
                   {"layer_width", a.layer_width},
                   {"probe_horizon", a.probe_horizon},
                   {"convergence_mu", a.convergence_mu},
                   {"convergence_threshold", a.convergence_threshold}};
  j["output"] = {{"csv_every", c.output.csv_every}};
  return j.dump(2) + "\n";
}

ScenarioConfig parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error &e) {
    throw Error(ErrorCode::Config, std::string("scenario is not valid JSON: ") + e.what());
  }
  Obj o(root, "scenario");
  ScenarioConfig c;
  o.get("name", c.name);
  o.get("description", c.description);
  std::string model = "wilson-cowan";
  o.get("model", model);
  if (model == "rc") c.kind = ModelKind::Rc;
  else if (model == "wilson-cowan") c.kind = ModelKind::WilsonCowan;
  else if (model == "coupled") c.kind = ModelKind::Coupled;
  else o.fail("model must be rc, wilson-cowan or coupled");

  if (const Json *r = o.take("rc")) {
    Obj ro(*r, o.sub("rc"));
    ro.get("R", c.rc.resistance);
    ro.get("C", c.rc.capacitance);
    ro.get("I", c.rc.current);
    ro.done();
  }
  if (const Json *p = o.take("population")) c.population = parse_population(*p, o.sub("population"));
  if (const Json *p = o.take("passive")) c.passive = parse_population(*p, o.sub("passive"));
  if (const Json *imp = o.take("impulses")) {
    Obj io(*imp, o.sub("impulses"));
    if (const Json *v = io.take("theta")) c.theta = parse_instants(*v, io.sub("theta"));
    if (const Json *v = io.take("eta")) c.eta = parse_instants(*v, io.sub("eta"));
    if (const Json *v = io.take("regular_jump")) c.regular_jump = parse_jump(*v, io.sub("regular_jump"));
    if (const Json *v = io.take("singular_jump")) c.singular_jump = parse_jump(*v, io.sub("singular_jump"));
    std::string policy = "clamp";
    io.get("negative_base", policy);
    if (policy == "clamp") c.negative_base = NegativeBasePolicy::Clamp;
    else if (policy == "reject") c.negative_base = NegativeBasePolicy::Reject;
    else io.fail("negative_base must be clamp or reject");
    io.done();
  }
  o.get("mu", c.mu);
  if (const Json *v = o.take("initial_states")) {
    if (!v->is_array()) o.fail("initial_states must be an array of arrays");
    for (const auto &x : *v)
      c.initial_states.push_back(Obj::convert<std::vector<double>>(x, o.sub("initial_states")));
  }
  if (const Json *v = o.take("regimes")) {
    if (!v->is_array()) o.fail("regimes must be an array");
    for (const auto &r : *v) {
      Obj ro(r, o.sub("regimes[]"));
      RegimeSpec spec;
      ro.get("mu", spec.mu);
      std::vector<int> states;
      ro.get("states", states);
      for (int s : states) {
        if (s < 0) ro.fail("state index must be >= 0");
        spec.states.push_back(static_cast<std::size_t>(s));
      }
      ro.done();
      c.regimes.push_back(spec);
    }
  }
  o.get("horizon", c.horizon);
  if (const Json *v = o.take("solver")) {
    Obj so(*v, o.sub("solver"));
    so.get("rel_tol", c.solver.rel_tol);
    so.get("abs_tol", c.solver.abs_tol);
    so.get("max_step", c.solver.max_step);
    so.get("min_step", c.solver.min_step);
    so.get("sample_stride", c.solver.sample_stride);
    so.done();
  }
  if (c.kind == ModelKind::WilsonCowan) c.classifier.projection.axes = {0, 1};
  if (const Json *v = o.take("classifier")) {
    Obj co(*v, o.sub("classifier"));
    auto &k = c.classifier;
    co.get("transient_cut", k.transient_cut);
    co.get("merge_radius", k.merge_radius);
    co.get("loop_tol", k.loop_tol);
    co.get("settle_ratio", k.settle_ratio);
    co.get("settle_floor", k.settle_floor);
    co.get("angle_bins", k.angle_bins);
    co.get("cluster_stride", k.cluster_stride);
    co.get("classify_stride", k.classify_stride);
    co.get("closure_every", k.closure_every);
    co.get("projection", k.projection.axes);
    co.done();
  }
  if (const Json *v = o.take("analysis")) {
    Obj ao(*v, o.sub("analysis"));
    auto &a = c.analysis;
    ao.get("domain_bound", a.domain_bound);
    ao.get("grid_n", a.grid_n);
    ao.get("c2_tol", a.c2_tol);
    ao.get("c3_mu", a.c3.mu);
    ao.get("c3_radius", a.c3.radius);
    ao.get("c3_final_tol", a.c3.final_tol);
    ao.get("layer_width", a.layer_width);
    ao.get("probe_horizon", a.probe_horizon);
    ao.get("convergence_mu", a.convergence_mu);
    ao.get("convergence_threshold", a.convergence_threshold);
    ao.done();
  }
  if (const Json *v = o.take("output")) {
    Obj oo(*v, o.sub("output"));
    oo.get("csv_every", c.output.csv_every);
    oo.done();
  }
  o.done();
  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace wci
