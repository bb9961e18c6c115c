#include "cs2d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "cs2d/errors.hpp"
#include "cs2d/thermal.hpp"

namespace cs2d {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

template <class E>
E parse_enum(const json& v, const std::string& field,
             std::initializer_list<std::pair<const char*, E>> table) {
  if (!v.is_string()) throw InvalidConfig(field, "must be a string");
  const auto s = v.get<std::string>();
  std::string options;
  for (const auto& [name, e] : table) {
    if (s == name) return e;
    options += options.empty() ? name : std::string(", ") + name;
  }
  throw InvalidConfig(field, "must be one of: " + options);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InvalidConfig(where, "must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k))
      throw InvalidConfig(where.empty() ? k : where + "." + k, "unknown key");
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw InvalidConfig(field, "must be a number");
  return v.get<double>();
}

// Reads `key` in SI, or `key_suffix` scaled by `factor`; both is an error.
bool read_scaled(const json& obj, const std::string& where,
                 const std::string& key, const std::string& suffix,
                 double factor, double& out) {
  const bool plain = obj.contains(key);
  const bool alt = obj.contains(key + suffix);
  const std::string f = where + "." + key;
  if (plain && alt)
    throw InvalidConfig(f, "given both as " + key + " and " + key + suffix);
  if (plain) out = number(obj.at(key), f);
  if (alt) out = number(obj.at(key + suffix), f + suffix) * factor;
  return plain || alt;
}

bool read_hz(const json& o, const std::string& w, const std::string& k,
             double& out) {
  return read_scaled(o, w, k, "_hz", kTwoPi, out);
}

bool read_deg(const json& o, const std::string& w, const std::string& k,
              double& out) {
  return read_scaled(o, w, k, "_deg", kDeg, out);
}

TrapConfig trap_from_json(const json& o) {
  const std::string w = "trap";
  reject_unknown(o, w,
                 {"omega_osc", "omega_osc_hz", "omega_x", "omega_x_hz",
                  "omega_y", "omega_y_hz", "depth_U0", "depth_U0_uK",
                  "theta_yag", "theta_yag_deg", "lattice_period", "alpha",
                  "alpha_deg", "pol_phase", "pol_phase_deg", "delta_1",
                  "delta_2"});
  TrapConfig t = reference_trap();
  read_hz(o, w, "omega_osc", t.omega_osc);
  read_hz(o, w, "omega_x", t.omega_x);
  read_hz(o, w, "omega_y", t.omega_y);
  read_scaled(o, w, "depth_U0", "_uK", 1e-6 * Constants{}.k_B, t.depth_U0);
  read_deg(o, w, "theta_yag", t.theta_yag);
  if (o.contains("lattice_period"))
    t.lattice_period = number(o.at("lattice_period"), w + ".lattice_period");
  read_deg(o, w, "alpha", t.alpha);
  read_deg(o, w, "pol_phase", t.pol_phase);
  if (o.contains("delta_1")) t.delta_1 = number(o.at("delta_1"), w + ".delta_1");
  if (o.contains("delta_2")) t.delta_2 = number(o.at("delta_2"), w + ".delta_2");
  return t;
}

json trap_to_json(const TrapConfig& t) {
  return {{"omega_osc", t.omega_osc}, {"omega_x", t.omega_x},
          {"omega_y", t.omega_y},     {"depth_U0", t.depth_U0},
          {"theta_yag", t.theta_yag}, {"lattice_period", t.lattice_period},
          {"alpha", t.alpha},         {"pol_phase", t.pol_phase},
          {"delta_1", t.delta_1},     {"delta_2", t.delta_2}};
}

Phase phase_from_json(const json& o, const std::string& w) {
  reject_unknown(o, w,
                 {"phase", "duration", "sample_interval", "alpha_new",
                  "alpha_new_deg", "cooling_rate"});
  Phase p;
  if (!o.contains("phase")) throw InvalidConfig(w + ".phase", "is required");
  p.kind = parse_enum<PhaseKind>(o.at("phase"), w + ".phase",
                                 {{"cool", PhaseKind::cool},
                                  {"free_thermalize", PhaseKind::free_thermalize},
                                  {"rescale_alpha", PhaseKind::rescale_alpha}});
  if (!o.contains("duration"))
    throw InvalidConfig(w + ".duration", "is required");
  p.duration = number(o.at("duration"), w + ".duration");
  if (o.contains("sample_interval"))
    p.sample_interval = number(o.at("sample_interval"), w + ".sample_interval");
  read_deg(o, w, "alpha_new", p.alpha_new);
  if (o.contains("cooling_rate"))
    p.cooling_rate = number(o.at("cooling_rate"), w + ".cooling_rate");
  return p;
}

json phase_to_json(const Phase& p) {
  json j = {{"phase", to_string(p.kind)},
            {"duration", p.duration},
            {"sample_interval", p.sample_interval}};
  if (p.kind == PhaseKind::rescale_alpha) j["alpha_new"] = p.alpha_new;
  if (p.kind == PhaseKind::cool) j["cooling_rate"] = p.cooling_rate;
  return j;
}

DsmcSettings dsmc_from_json(const json& o) {
  const std::string w = "dsmc";
  reject_unknown(o, w,
                 {"dt", "planes", "target_tau", "cell_fraction", "selection",
                  "inelastic_weight", "axial_split", "quasi2d_rate"});
  DsmcSettings d;
  if (o.contains("dt")) d.dt = number(o.at("dt"), w + ".dt");
  if (o.contains("planes")) {
    if (!o.at("planes").is_number_integer())
      throw InvalidConfig(w + ".planes", "must be an integer");
    d.planes = o.at("planes").get<int>();
  }
  if (o.contains("target_tau"))
    d.target_tau = number(o.at("target_tau"), w + ".target_tau");
  if (o.contains("cell_fraction"))
    d.cell_fraction = number(o.at("cell_fraction"), w + ".cell_fraction");
  if (o.contains("selection"))
    d.selection = parse_enum<PairSelection>(
        o.at("selection"), w + ".selection",
        {{"ntc", PairSelection::ntc}, {"exhaustive", PairSelection::exhaustive}});
  if (o.contains("inelastic_weight"))
    d.inelastic_weight =
        number(o.at("inelastic_weight"), w + ".inelastic_weight");
  if (o.contains("axial_split"))
    d.axial_split = parse_enum<AxialSplit>(
        o.at("axial_split"), w + ".axial_split",
        {{"pair_state", AxialSplit::pair_state},
         {"single_atom", AxialSplit::single_atom}});
  if (o.contains("quasi2d_rate"))
    d.quasi2d_rate = number(o.at("quasi2d_rate"), w + ".quasi2d_rate");
  return d;
}

json dsmc_to_json(const DsmcSettings& d) {
  return {{"dt", d.dt},
          {"planes", d.planes},
          {"target_tau", d.target_tau},
          {"cell_fraction", d.cell_fraction},
          {"selection",
           d.selection == PairSelection::ntc ? "ntc" : "exhaustive"},
          {"inelastic_weight", d.inelastic_weight},
          {"axial_split", d.axial_split == AxialSplit::pair_state
                              ? "pair_state"
                              : "single_atom"},
          {"quasi2d_rate", d.quasi2d_rate}};
}

SidebandSettings sideband_from_json(const json& o) {
  const std::string w = "sideband";
  reject_unknown(o, w,
                 {"omega_osc", "omega_osc_hz", "Omega_R", "Omega_R_hz",
                  "Gamma_prime", "Gamma_prime_hz", "zeeman_splitting",
                  "zeeman_splitting_hz", "detuning_delta",
                  "detuning_delta_hz", "sigma_minus_fraction", "parity",
                  "pol_phase", "pol_phase_deg", "n_max", "eta",
                  "explicit_repump", "initial_mean_n", "spread_sigma",
                  "spread_sigma_hz", "spread_points", "table"});
  SidebandSettings s;
  auto& m = s.model;
  read_hz(o, w, "omega_osc", m.omega_osc);
  read_hz(o, w, "Omega_R", m.Omega_R);
  read_hz(o, w, "Gamma_prime", m.Gamma_prime);
  read_hz(o, w, "zeeman_splitting", m.zeeman_splitting);
  read_hz(o, w, "detuning_delta", m.detuning_delta);
  read_hz(o, w, "spread_sigma", s.spread_sigma);
  if (o.contains("sigma_minus_fraction"))
    m.sigma_minus_fraction =
        number(o.at("sigma_minus_fraction"), w + ".sigma_minus_fraction");
  double phase = 0.0;
  const bool has_phase = read_deg(o, w, "pol_phase", phase);
  if (o.contains("parity")) {
    if (has_phase)
      throw InvalidConfig(w + ".parity", "given together with pol_phase");
    const auto k = parse_enum<ParityKind>(
        o.at("parity"), w + ".parity",
        {{"odd", ParityKind::odd}, {"even", ParityKind::even}});
    phase = k == ParityKind::odd ? 0.0 : std::numbers::pi / 2;
  }
  m.parity = coupling_parity(phase);
  if (o.contains("n_max")) {
    if (!o.at("n_max").is_number_integer())
      throw InvalidConfig(w + ".n_max", "must be an integer");
    m.n_max = o.at("n_max").get<int>();
  }
  if (o.contains("eta")) m.eta = number(o.at("eta"), w + ".eta");
  if (o.contains("explicit_repump")) {
    if (!o.at("explicit_repump").is_boolean())
      throw InvalidConfig(w + ".explicit_repump", "must be a boolean");
    m.explicit_repump = o.at("explicit_repump").get<bool>();
  }
  if (o.contains("initial_mean_n"))
    s.initial_mean_n = number(o.at("initial_mean_n"), w + ".initial_mean_n");
  if (o.contains("spread_points")) {
    if (!o.at("spread_points").is_number_integer())
      throw InvalidConfig(w + ".spread_points", "must be an integer");
    s.spread_points = o.at("spread_points").get<int>();
  }
  if (o.contains("table")) {
    const auto& t = o.at("table");
    if (!t.is_array()) throw InvalidConfig(w + ".table", "must be an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string wi = w + ".table[" + std::to_string(i) + "]";
      reject_unknown(t[i], wi,
                     {"Gamma_prime", "Gamma_prime_hz", "detuning_delta",
                      "detuning_delta_hz", "sigma_minus_fraction"});
      SidebandRow r{m.Gamma_prime, 0.0, 0.0};
      read_hz(t[i], wi, "Gamma_prime", r.Gamma_prime);
      read_hz(t[i], wi, "detuning_delta", r.detuning_delta);
      if (t[i].contains("sigma_minus_fraction"))
        r.sigma_minus_fraction = number(t[i].at("sigma_minus_fraction"),
                                        wi + ".sigma_minus_fraction");
      s.table.push_back(r);
    }
  }
  return s;
}

json sideband_to_json(const SidebandSettings& s) {
  const auto& m = s.model;
  json table = json::array();
  for (const auto& r : s.table)
    table.push_back({{"Gamma_prime", r.Gamma_prime},
                     {"detuning_delta", r.detuning_delta},
                     {"sigma_minus_fraction", r.sigma_minus_fraction}});
  // parity as its phase keeps mixed couplings representable
  const double phase = std::atan2(std::sqrt(m.parity.even_weight),
                                  std::sqrt(m.parity.odd_weight));
  return {{"omega_osc", m.omega_osc},
          {"Omega_R", m.Omega_R},
          {"Gamma_prime", m.Gamma_prime},
          {"zeeman_splitting", m.zeeman_splitting},
          {"detuning_delta", m.detuning_delta},
          {"sigma_minus_fraction", m.sigma_minus_fraction},
          {"pol_phase", phase},
          {"n_max", m.n_max},
          {"eta", m.eta},
          {"explicit_repump", m.explicit_repump},
          {"initial_mean_n", s.initial_mean_n},
          {"spread_sigma", s.spread_sigma},
          {"spread_points", s.spread_points},
          {"table", table}};
}

std::vector<std::string> known_columns(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::classical3d:
      return {"v_x_rms", "v_y_rms", "v_z_rms", "x_rms", "y_rms", "z_rms",
              "T_x",     "T_y",     "T_z",     "alpha", "collisions"};
    case ScenarioMode::quantized_axial:
      return {"v_x_rms",    "v_y_rms",         "x_rms",      "y_rms",
              "mean_axial_n", "ground_fraction", "T_x",      "T_y",
              "T_z",        "alpha",           "collisions", "above_threshold",
              "excitations", "deexcitations"};
    case ScenarioMode::sideband_rate_model:
      return {"mean_n", "kT_over_hw", "ground_fraction", "p3_*"};
    case ScenarioMode::analytic_only:
      return {};
  }
  return {};
}

}  // namespace

std::string to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::classical3d: return "classical3d";
    case ScenarioMode::quantized_axial: return "quantized_axial";
    case ScenarioMode::sideband_rate_model: return "sideband_rate_model";
    case ScenarioMode::analytic_only: return "analytic_only";
  }
  return "?";
}

std::string to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::cool: return "cool";
    case PhaseKind::free_thermalize: return "free_thermalize";
    case PhaseKind::rescale_alpha: return "rescale_alpha";
  }
  return "?";
}

ScenarioConfig scenario_from_json(const json& doc) {
  reject_unknown(doc, "",
                 {"name", "mode", "trap", "N", "T_init", "schedule", "sweep",
                  "replicas", "seed", "outputs", "dsmc", "sideband"});
  ScenarioConfig s;
  s.trap = reference_trap();
  if (doc.contains("name")) {
    if (!doc.at("name").is_string())
      throw InvalidConfig("name", "must be a string");
    s.name = doc.at("name").get<std::string>();
  }
  if (!doc.contains("mode")) throw InvalidConfig("mode", "is required");
  s.mode = parse_enum<ScenarioMode>(
      doc.at("mode"), "mode",
      {{"classical3d", ScenarioMode::classical3d},
       {"quantized_axial", ScenarioMode::quantized_axial},
       {"sideband_rate_model", ScenarioMode::sideband_rate_model},
       {"analytic_only", ScenarioMode::analytic_only}});
  if (doc.contains("trap")) s.trap = trap_from_json(doc.at("trap"));
  if (doc.contains("N")) {
    if (!doc.at("N").is_number_integer())
      throw InvalidConfig("N", "must be an integer");
    s.N = doc.at("N").get<long>();
  }
  if (doc.contains("T_init")) {
    const auto& t = doc.at("T_init");
    if (t.is_number()) {
      s.T_init.fill(t.get<double>());
    } else if (t.is_array() && t.size() == 3) {
      for (int a = 0; a < 3; ++a)
        s.T_init[a] = number(t[a], "T_init[" + std::to_string(a) + "]");
    } else {
      throw InvalidConfig("T_init", "must be a number or [Tx, Ty, Tz]");
    }
  }
  if (doc.contains("schedule")) {
    const auto& sc = doc.at("schedule");
    if (!sc.is_array()) throw InvalidConfig("schedule", "must be an array");
    for (std::size_t i = 0; i < sc.size(); ++i)
      s.schedule.push_back(
          phase_from_json(sc[i], "schedule[" + std::to_string(i) + "]"));
  }
  if (doc.contains("sweep")) {
    const auto& sw = doc.at("sweep");
    reject_unknown(sw, "sweep", {"parameter", "values"});
    Sweep sweep;
    if (!sw.contains("parameter") || !sw.at("parameter").is_string())
      throw InvalidConfig("sweep.parameter", "must be a string");
    sweep.parameter = sw.at("parameter").get<std::string>();
    if (!sw.contains("values") || !sw.at("values").is_array())
      throw InvalidConfig("sweep.values", "must be an array");
    for (std::size_t i = 0; i < sw.at("values").size(); ++i)
      sweep.values.push_back(number(sw.at("values")[i],
                                    "sweep.values[" + std::to_string(i) + "]"));
    s.sweep = sweep;
  }
  if (doc.contains("replicas")) {
    if (!doc.at("replicas").is_number_integer())
      throw InvalidConfig("replicas", "must be an integer");
    s.replicas = doc.at("replicas").get<int>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() &&
        !doc.at("seed").is_number_integer())
      throw InvalidConfig("seed", "must be a non-negative integer");
    if (doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() < 0)
      throw InvalidConfig("seed", "must be a non-negative integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    if (!o.is_array()) throw InvalidConfig("outputs", "must be an array");
    for (const auto& v : o) {
      if (!v.is_string()) throw InvalidConfig("outputs", "entries are names");
      s.outputs.push_back(v.get<std::string>());
    }
  }
  if (doc.contains("dsmc")) s.dsmc = dsmc_from_json(doc.at("dsmc"));
  if (doc.contains("sideband"))
    s.sideband = sideband_from_json(doc.at("sideband"));
  validate(s);
  return s;
}

json to_json(const ScenarioConfig& s) {
  json sched = json::array();
  for (const auto& p : s.schedule) sched.push_back(phase_to_json(p));
  json j = {{"name", s.name},
            {"mode", to_string(s.mode)},
            {"trap", trap_to_json(s.trap)},
            {"N", s.N},
            {"T_init", s.T_init},
            {"schedule", sched},
            {"replicas", s.replicas},
            {"seed", s.seed},
            {"outputs", s.outputs},
            {"dsmc", dsmc_to_json(s.dsmc)},
            {"sideband", sideband_to_json(s.sideband)}};
  if (s.sweep)
    j["sweep"] = {{"parameter", s.sweep->parameter},
                  {"values", s.sweep->values}};
  return j;
}

void validate(const ScenarioConfig& s) {
  validate(s.trap);
  if (s.replicas < 1) throw InvalidConfig("replicas", "must be >= 1");
  const bool gas = s.mode == ScenarioMode::classical3d ||
                   s.mode == ScenarioMode::quantized_axial;
  if (gas) {
    if (s.N < 2) throw InvalidConfig("N", "must be >= 2");
    if (!(s.T_init[0] > 0.0 && s.T_init[1] > 0.0))
      throw InvalidConfig("T_init", "horizontal temperatures must be > 0");
    if (!(s.T_init[2] >= 0.0))
      throw InvalidConfig("T_init", "vertical temperature must be >= 0");
    if (s.mode == ScenarioMode::classical3d && !(s.T_init[2] > 0.0))
      throw InvalidConfig("T_init", "classical vertical temperature must be > 0");
    if (s.schedule.empty())
      throw InvalidConfig("schedule", "needs at least one phase");
  }
  if (s.mode == ScenarioMode::analytic_only && !(s.T_init[0] > 0.0))
    throw InvalidConfig("T_init", "must be > 0");
  for (std::size_t i = 0; i < s.schedule.size(); ++i) {
    const auto& p = s.schedule[i];
    const std::string w = "schedule[" + std::to_string(i) + "]";
    if (!(p.duration > 0.0)) throw InvalidConfig(w + ".duration", "must be > 0");
    if (p.sample_interval < 0.0 || p.sample_interval > p.duration)
      throw InvalidConfig(w + ".sample_interval", "must lie in [0, duration]");
    if (p.kind == PhaseKind::rescale_alpha &&
        !(p.alpha_new >= 0.0 && p.alpha_new < std::numbers::pi / 2))
      throw InvalidConfig(w + ".alpha_new", "must lie in [0, pi/2)");
    if (p.kind == PhaseKind::cool) {
      if (s.mode == ScenarioMode::classical3d)
        throw InvalidConfig(w + ".phase",
                            "cool needs quantized_axial or sideband_rate_model");
      if (s.mode == ScenarioMode::quantized_axial && !(p.cooling_rate >= 0.0))
        throw InvalidConfig(w + ".cooling_rate", "must be >= 0");
    }
  }
  if (s.sweep) {
    if (s.sweep->values.empty())
      throw InvalidConfig("sweep.values", "grid must be non-empty");
    if (s.sweep->parameter.empty())
      throw InvalidConfig("sweep.parameter", "must be non-empty");
    if (s.sweep->parameter == "T_init" || s.sweep->parameter == "kT_over_hw")
      for (double v : s.sweep->values)
        if (!(v > 0.0)) throw InvalidConfig("sweep.values", "must be > 0");
  }
  const auto& d = s.dsmc;
  if (!(d.dt >= 0.0)) throw InvalidConfig("dsmc.dt", "must be >= 0");
  if (d.planes < 0) throw InvalidConfig("dsmc.planes", "must be >= 0");
  if (gas && d.planes > s.N / 2)
    throw InvalidConfig("dsmc.planes", "needs at least 2 atoms per plane");
  if (!(d.target_tau > 0.0))
    throw InvalidConfig("dsmc.target_tau", "must be > 0");
  if (!(d.cell_fraction > 0.0))
    throw InvalidConfig("dsmc.cell_fraction", "must be > 0");
  if (!(d.inelastic_weight >= 0.0 && d.inelastic_weight <= 0.5))
    throw InvalidConfig("dsmc.inelastic_weight", "must lie in [0, 0.5]");
  if (!(d.quasi2d_rate > 0.0))
    throw InvalidConfig("dsmc.quasi2d_rate", "must be > 0");
  if (s.mode == ScenarioMode::sideband_rate_model) {
    validate(s.sideband.model);
    if (!(s.sideband.initial_mean_n >= 0.0))
      throw InvalidConfig("sideband.initial_mean_n", "must be >= 0");
    if (!(s.sideband.spread_sigma >= 0.0))
      throw InvalidConfig("sideband.spread_sigma", "must be >= 0");
    if (s.sideband.spread_points < 1)
      throw InvalidConfig("sideband.spread_points", "must be >= 1");
    for (std::size_t i = 0; i < s.sideband.table.size(); ++i)
      if (!(s.sideband.table[i].Gamma_prime > 0.0))
        throw InvalidConfig(
            "sideband.table[" + std::to_string(i) + "].Gamma_prime",
            "must be > 0");
  }
  const auto cols = known_columns(s.mode);
  for (const auto& o : s.outputs) {
    const bool ok =
        std::find(cols.begin(), cols.end(), o) != cols.end() ||
        (o.rfind("p3_", 0) == 0 &&
         std::find(cols.begin(), cols.end(), "p3_*") != cols.end());
    if (!ok)
      throw InvalidConfig("outputs", "unknown column '" + o + "' for mode " +
                                         to_string(s.mode));
  }
}

void apply_override(json& doc, const std::string& key,
                    const std::string& value) {
  if (key.empty()) throw InvalidConfig("override", "empty key");
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw InvalidConfig(key, "malformed key path");
    if (dot == std::string::npos) {
      if (!node->is_object()) throw InvalidConfig(key, "parent is not an object");
      // a unit-suffixed key replaces its SI sibling and vice versa
      for (const char* suffix : {"_hz", "_deg", "_uK"}) {
        const std::string sfx(suffix);
        if (part.size() > sfx.size() &&
            part.compare(part.size() - sfx.size(), sfx.size(), sfx) == 0)
          node->erase(part.substr(0, part.size() - sfx.size()));
        node->erase(part + sfx);
      }
      (*node)[part] = parsed;
      return;
    }
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (...) {
        throw InvalidConfig(key, "array index expected at '" + part + "'");
      }
      if (idx >= node->size()) throw InvalidConfig(key, "index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->contains(part)) (*node)[part] = json::object();
      node = &(*node)[part];
    }
    start = dot + 1;
  }
}

ScenarioConfig sweep_point(const ScenarioConfig& base, double value) {
  if (!base.sweep) return base;
  const std::string& p = base.sweep->parameter;
  ScenarioConfig s = base;
  s.sweep.reset();
  if (p == "T_init" || p == "kT_over_hw") {
    // the sweep value is the equilibrium temperature; T_init keeps its shape
    const Constants c;
    const double w = base.trap.omega_osc;
    const double target =
        p == "T_init" ? value : value * c.hbar * w / c.k_B;
    const bool quantized = base.mode == ScenarioMode::quantized_axial;
    auto energy = [&](const std::array<double, 3>& T) {
      const double z = quantized ? c.hbar * w * thermal_state(T[2], w, c).mean_n
                                 : c.k_B * T[2];
      return c.k_B * (T[0] + T[1]) + z;
    };
    const double goal = energy({target, target, target});
    double lo = 0.0, hi = 1.0;
    auto scaled = [&](double f) {
      return std::array<double, 3>{base.T_init[0] * f, base.T_init[1] * f,
                                   base.T_init[2] * f};
    };
    while (energy(scaled(hi)) < goal) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (energy(scaled(mid)) < goal ? lo : hi) = mid;
    }
    s.T_init = scaled(0.5 * (lo + hi));
    validate(s);
    return s;
  }
  json doc = to_json(s);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  apply_override(doc, p, buf);
  return scenario_from_json(doc);
}

std::string config_hash(const json& doc) {
  // nlohmann::json objects are key-ordered, so dump() is canonical
  const std::string s = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cs2d
