#include "lk/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace lk {
namespace {

std::string trim(const std::string& s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) fail(key + ": empty value");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) fail(key + ": not a number: '" + v + "'");
  if (!std::isfinite(x)) fail(key + ": not finite: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) fail(key + ": not an integer: '" + v + "'");
  return x;
}

bool to_switch(const std::string& key, const std::string& value) {
  if (value == "on") return true;
  if (value == "off") return false;
  fail(key + ": expected on/off, got '" + value + "'");
}

// Ordered key -> value store; every key must be consumed exactly once.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) fail("line " + std::to_string(lineno) + ": empty key");
      if (kv.values_.count(key)) fail("duplicate key '" + key + "'");
      kv.values_[key] = trim(line.substr(eq + 1));
    }
    return kv;
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) fail("missing required key '" + key + "'");
    return *v;
  }

  void finish() const {
    if (values_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : values_) {
      if (!keys.empty()) keys += ", ";
      keys += "'" + k + "'";
    }
    fail("unknown key(s): " + keys);
  }

 private:
  std::map<std::string, std::string> values_;
};

Complex json_entry(const nlohmann::json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  fail("matrix entry must be a number or an [re, im] pair");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::istringstream in(value);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(to_int(key, tok));
  if (out.empty()) fail(key + ": empty list");
  return out;
}

// Method token: rk | if-dense | if-lr-exact | if-lr-taylor:<k>, with an
// optional @<eps> suffix overriding the shared truncation threshold.
MethodSpec parse_method(const std::string& token, const RunConfig& cfg) {
  MethodSpec m;
  m.label = token;
  std::string body = token;
  const auto at = body.find('@');
  std::optional<double> eps;
  if (at != std::string::npos) {
    eps = to_double("methods", body.substr(at + 1));
    body = body.substr(0, at);
  }
  if (body == "rk") {
    m.kind = MethodSpec::Kind::PlainRk;
  } else if (body == "if-dense") {
    m.kind = MethodSpec::Kind::IfDense;
  } else if (body == "if-lr-exact") {
    m.kind = MethodSpec::Kind::IfLowRank;
  } else if (body.rfind("if-lr-taylor:", 0) == 0) {
    m.kind = MethodSpec::Kind::IfLowRank;
    m.exact_flow = false;
    m.taylor_order = to_int("methods", body.substr(13));
    if (m.taylor_order < 1) fail("methods: taylor order must be >= 1");
  } else {
    fail("methods: unknown token '" + token + "'");
  }
  if (m.kind == MethodSpec::Kind::IfLowRank) {
    m.policy = cfg.policy;
    m.epsilon_dt_power = cfg.epsilon_dt_power;
    if (eps) {
      m.policy.epsilon = *eps;
      m.epsilon_dt_power = 0;
    }
  } else if (eps) {
    fail("methods: '" + token + "' does not truncate");
  }
  return m;
}

void parse_time_grid(KeyValues& kv, RunConfig& cfg) {
  std::string tf = kv.require("t_final");
  bool revival_units = false;
  if (tf.size() > 2 && tf.compare(tf.size() - 2, 2, "tr") == 0) {
    revival_units = true;
    tf = trim(tf.substr(0, tf.size() - 2));
  }
  cfg.t_final = to_double("t_final", tf);
  if (cfg.t_final <= 0) fail("t_final must be positive");
  if (revival_units) {
    if (cfg.scenario != RunConfig::Scenario::Jc) fail("t_final: 'tr' units need scenario=jc");
    const double amp = cfg.jc.amplitude > 0.0 ? cfg.jc.amplitude : std::sqrt(cfg.jc.m / 3.0);
    cfg.t_final *= revival_time(cfg.jc.coupling, amp);
  }
}

void parse_step_keys(KeyValues& kv, RunConfig& cfg) {
  const auto steps = kv.take("steps");
  const auto dt = kv.take("dt");
  if (steps && dt) fail("give either steps or dt, not both");
  if (!steps && !dt) fail("one of steps / dt is required");
  if (steps) {
    cfg.steps = to_int("steps", *steps);
    if (cfg.steps < 1) fail("steps must be >= 1");
    cfg.dt = cfg.t_final / cfg.steps;
  } else {
    cfg.dt = to_double("dt", *dt);
    if (cfg.dt <= 0) fail("dt must be positive");
    const double ratio = cfg.t_final / cfg.dt;
    cfg.steps = static_cast<int>(std::llround(ratio));
    if (cfg.steps < 1 || std::abs(ratio - cfg.steps) > 1e-9 * ratio)
      fail("dt must divide t_final into a whole number of steps");
  }
}

void parse_scenario(KeyValues& kv, RunConfig& cfg) {
  const std::string s = kv.require("scenario");
  if (s == "jc") {
    cfg.scenario = RunConfig::Scenario::Jc;
    if (auto v = kv.take("m")) cfg.jc.m = to_int("m", *v);
    if (auto v = kv.take("lambda")) cfg.jc.coupling = to_double("lambda", *v);
    if (auto v = kv.take("kappa")) cfg.jc.kappa = to_double("kappa", *v);
    if (auto v = kv.take("v")) cfg.jc.amplitude = to_double("v", *v);
  } else if (s == "stiff") {
    cfg.scenario = RunConfig::Scenario::Stiff;
    if (auto v = kv.take("gamma")) cfg.stiff_rate = to_double("gamma", *v);
    if (auto v = kv.take("h")) cfg.stiff_h = parse_matrix_json(*v);
    if (auto v = kv.take("observe_index")) cfg.observe_index = to_int("observe_index", *v);
  } else if (s == "custom") {
    cfg.scenario = RunConfig::Scenario::Custom;
    cfg.custom_h = parse_matrix_json(kv.require("h"));
    for (int i = 1;; ++i) {
      const std::string base = "jump" + std::to_string(i) + "_";
      auto rate = kv.take(base + "gamma");
      auto op = kv.take(base + "op");
      if (!rate && !op) break;
      if (!rate || !op) fail(base + "gamma and " + base + "op must appear together");
      cfg.custom_jumps.push_back({to_double(base + "gamma", *rate), parse_matrix_json(*op)});
    }
    cfg.custom_v0 = parse_matrix_json(kv.require("v0"));
    if (auto v = kv.take("observe_index")) cfg.observe_index = to_int("observe_index", *v);
  } else {
    fail("scenario: expected jc/stiff/custom, got '" + s + "'");
  }
}

void parse_method_keys(KeyValues& kv, RunConfig& cfg, bool need_integrator) {
  if (need_integrator) {
    const std::string in = kv.require("integrator");
    if (in == "rk") cfg.integrator = RunConfig::Integrator::Rk;
    else if (in == "if-dense") cfg.integrator = RunConfig::Integrator::IfDense;
    else if (in == "if-lowrank") cfg.integrator = RunConfig::Integrator::IfLowRank;
    else fail("integrator: expected rk/if-dense/if-lowrank, got '" + in + "'");
  }
  cfg.tableau = tableau_by_name(kv.take("tableau").value_or("rk4"));
  if (auto v = kv.take("flow")) {
    if (*v == "exact") {
      cfg.exact_flow = true;
    } else if (v->rfind("taylor:", 0) == 0) {
      cfg.exact_flow = false;
      cfg.taylor_order = to_int("flow", v->substr(7));
      if (cfg.taylor_order < 1) fail("flow: taylor order must be >= 1");
    } else {
      fail("flow: expected exact or taylor:<k>, got '" + *v + "'");
    }
  }
}

void parse_truncation_keys(KeyValues& kv, RunConfig& cfg) {
  if (auto v = kv.take("epsilon")) {
    cfg.policy.epsilon = to_double("epsilon", *v);
    if (cfg.policy.epsilon < 0) fail("epsilon must be >= 0");
  }
  if (auto v = kv.take("epsilon_policy")) {
    if (*v == "fixed") {
      cfg.epsilon_dt_power = 0;
    } else if (v->rfind("dt_pow:", 0) == 0) {
      cfg.epsilon_dt_power = to_int("epsilon_policy", v->substr(7));
      if (cfg.epsilon_dt_power < 1) fail("epsilon_policy: power must be >= 1");
    } else {
      fail("epsilon_policy: expected fixed or dt_pow:<q>, got '" + *v + "'");
    }
  }
  if (auto v = kv.take("rmax")) {
    if (*v != "inf") {
      const int r = to_int("rmax", *v);
      if (r < 1) fail("rmax must be >= 1 or inf");
      cfg.policy.r_max = r;
    }
  }
  if (auto v = kv.take("pre_truncate")) cfg.policy.pre_truncate = to_switch("pre_truncate", *v);
  if (auto v = kv.take("epsilon_pre")) {
    cfg.policy.epsilon_pre = to_double("epsilon_pre", *v);
    if (cfg.policy.epsilon_pre < 0) fail("epsilon_pre must be >= 0");
  }
}

}  // namespace

Matrix parse_matrix_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("matrix JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) fail("matrix JSON must be a non-empty array of rows");
  const auto& first = j[0];
  if (!first.is_array() || first.empty()) fail("matrix rows must be non-empty arrays");
  const auto cols = first.size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != cols) fail("matrix rows must all have equal length");
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = json_entry(row[static_cast<std::size_t>(c)]);
  }
  if (!is_finite(m)) fail("matrix JSON has non-finite entries");
  return m;
}

RunConfig parse_config(const std::string& text, RunConfig::Mode mode) {
  KeyValues kv = KeyValues::parse(text);
  RunConfig cfg;
  cfg.mode = mode;
  parse_scenario(kv, cfg);

  switch (mode) {
    case RunConfig::Mode::Simulate:
      parse_method_keys(kv, cfg, true);
      parse_truncation_keys(kv, cfg);
      parse_time_grid(kv, cfg);
      parse_step_keys(kv, cfg);
      if (auto v = kv.take("sample_stride")) {
        cfg.sample_stride = to_int("sample_stride", *v);
        if (cfg.sample_stride < 1) fail("sample_stride must be >= 1");
      }
      break;
    case RunConfig::Mode::Converge: {
      parse_method_keys(kv, cfg, false);
      parse_truncation_keys(kv, cfg);
      parse_time_grid(kv, cfg);
      const std::string ms = kv.require("methods");
      std::istringstream in(ms);
      std::string tok;
      while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail("methods: empty token");
        cfg.methods.push_back(parse_method(tok, cfg));
      }
      if (cfg.methods.empty()) fail("methods: empty list");
      cfg.steps_list = parse_int_list("steps_list", kv.require("steps_list"));
      for (int s : cfg.steps_list)
        if (s < 1) fail("steps_list entries must be >= 1");
      const std::string ref = kv.require("ref");
      if (ref.rfind("self:", 0) != 0) fail("ref: expected self:<steps>, got '" + ref + "'");
      cfg.ref_self_steps = to_int("ref", ref.substr(5));
      if (cfg.ref_self_steps < 1) fail("ref: steps must be >= 1");
      break;
    }
    case RunConfig::Mode::KrausVerify:
      parse_method_keys(kv, cfg, false);
      cfg.dt = to_double("dt", kv.require("dt"));
      if (cfg.dt <= 0) fail("dt must be positive");
      if (auto v = kv.take("n_random")) {
        cfg.n_random = to_int("n_random", *v);
        if (cfg.n_random < 1) fail("n_random must be >= 1");
      }
      if (auto v = kv.take("seed")) cfg.seed = static_cast<unsigned>(to_int("seed", *v));
      break;
    case RunConfig::Mode::ChoiProbe:
      parse_method_keys(kv, cfg, true);
      parse_truncation_keys(kv, cfg);
      if (cfg.integrator == RunConfig::Integrator::IfLowRank)
        fail("choi-probe needs a dense integrator (rk or if-dense)");
      cfg.dt = to_double("dt", kv.require("dt"));
      if (cfg.dt <= 0) fail("dt must be positive");
      break;
  }

  if (auto v = kv.take("out")) cfg.out_path = *v;
  kv.finish();
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig::Mode mode) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), mode);
}

}  // namespace lk
