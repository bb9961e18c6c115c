#include "cs2d/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <thread>

#include "cs2d/collision_oracles.hpp"
#include "cs2d/csv.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/mean_density.hpp"
#include "cs2d/sideband.hpp"
#include "cs2d/stats.hpp"
#include "cs2d/thermal.hpp"

#ifndef CS2D_VERSION
#define CS2D_VERSION "unknown"
#endif

namespace cs2d {

namespace {

constexpr double kPi = std::numbers::pi;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_gas(ScenarioMode m) {
  return m == ScenarioMode::classical3d || m == ScenarioMode::quantized_axial;
}

// Mean energy per atom of the horizontal axes plus the vertical one.
double energy_per_atom(GasMode mode, const std::array<double, 3>& T,
                       double omega_osc, const Constants& c) {
  const double horiz = c.k_B * (T[0] + T[1]);
  if (mode == GasMode::classical3d) return horiz + c.k_B * T[2];
  return horiz + c.hbar * omega_osc * thermal_state(T[2], omega_osc, c).mean_n;
}

double temperature_from_energy(GasMode mode, double e, double omega_osc,
                               const Constants& c) {
  if (mode == GasMode::classical3d) return e / (3.0 * c.k_B);
  // 2 k T + hbar w nbar(T) is increasing in T
  double lo = 0.0, hi = e / (2.0 * c.k_B);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = energy_per_atom(mode, {mid, mid, mid}, omega_osc, c);
    (f > e ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

GasMode gas_mode(ScenarioMode m) {
  return m == ScenarioMode::quantized_axial ? GasMode::quantized_axial
                                            : GasMode::classical3d;
}

std::vector<std::string> gas_columns(GasMode m) {
  if (m == GasMode::classical3d)
    return {"v_x_rms", "v_y_rms", "v_z_rms", "x_rms", "y_rms", "z_rms",
            "T_x",     "T_y",     "T_z",     "alpha", "collisions"};
  return {"v_x_rms",      "v_y_rms",         "x_rms",      "y_rms",
          "mean_axial_n", "ground_fraction", "T_x",        "T_y",
          "T_z",          "alpha",           "collisions", "above_threshold",
          "excitations",  "deexcitations"};
}

std::string unit_of(const std::string& col) {
  if (col.rfind("v_", 0) == 0) return "m/s";
  if (col.size() == 5 && col.substr(1) == "_rms") return "m";
  if (col.rfind("T_", 0) == 0) return "K";
  if (col == "alpha") return "rad";
  if (col == "t") return "s";
  return "1";
}

void adiabatic_rescale(GasState& s, const TrapConfig& to) {
  const std::array<double, 3> w0{s.trap.omega_x, s.trap.omega_y,
                                 s.trap.omega_osc};
  const std::array<double, 3> w1{to.omega_x, to.omega_y, to.omega_osc};
  const int axes = s.mode == GasMode::quantized_axial ? 2 : 3;
  for (auto& p : s.particles)
    for (int a = 0; a < axes; ++a) {
      const double f = std::sqrt(w1[a] / w0[a]);
      p.r[a] /= f;
      p.v[a] *= f;
    }
  s.trap = to;
}

void apply_cooling(GasState& s, double rate, double h, Rng& rng,
                   const Constants& c) {
  if (rate <= 0.0) return;
  std::uniform_real_distribution<double> uniform;
  const double v_rec = c.hbar * kTwoPi / c.lambda_D2 / c.m_Cs;
  for (auto& p : s.particles) {
    if (p.axial_n <= 0) continue;
    if (uniform(rng) < -std::expm1(-p.axial_n * rate * h)) {
      --p.axial_n;
      // one spontaneous photon per cooling cycle, random direction
      const double cth = 2.0 * uniform(rng) - 1.0;
      const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
      const double phi = kTwoPi * uniform(rng);
      p.v[0] += v_rec * sth * std::cos(phi);
      p.v[1] += v_rec * sth * std::sin(phi);
    }
  }
}

struct Normalization {
  double n_bar, n_2D;
};

Normalization normalization(const std::vector<long>& counts,
                            const TrapConfig& trap, double T,
                            const Constants& c) {
  std::vector<PlanePopulation> planes;
  for (std::size_t i = 0; i < counts.size(); ++i)
    planes.push_back({static_cast<int>(i), counts[i]});
  const double v = std::sqrt(c.k_B * T / c.m_Cs);
  const auto d = mean_density(planes, v / trap.omega_x, v / trap.omega_y,
                              well_rms_width(T, trap.omega_osc, c), true);
  return {d.n_bar, d.n_2D_bar};
}

}  // namespace

const char* version_string() { return "cs2d " CS2D_VERSION; }

std::vector<long> plan_planes(const ScenarioConfig& s, const Constants& c) {
  int P = s.dsmc.planes;
  if (P == 0) {
    const auto& t = s.trap;
    double per_partner_rate = 0.0;  // 1/tau per atom of the same plane
    const double T0 = equilibrium_temperature(s, c);
    const double v = std::sqrt(c.k_B * T0 / c.m_Cs);
    if (s.mode == ScenarioMode::quantized_axial) {
      const double area = 4.0 * kPi * (v / t.omega_x) * (v / t.omega_y);
      per_partner_rate =
          1.0 / (analytic_t_therm_quasi2d(1.0, T0, t.omega_osc, c) * area);
    } else {
      const double vol = 8.0 * std::pow(kPi, 1.5) * (v / t.omega_x) *
                         (v / t.omega_y) * (v / t.omega_osc);
      per_partner_rate = 1.0 / (analytic_t_therm_classical(1.0, T0, c).T_therm * vol);
    }
    const double Np = 1.0 + 1.0 / (s.dsmc.target_tau * per_partner_rate);
    P = static_cast<int>(std::lround(static_cast<double>(s.N) / Np));
    P = std::clamp(P, 1, static_cast<int>(s.N / 2));
  }
  std::vector<long> counts(P, s.N / P);
  for (long i = 0; i < s.N % P; ++i) ++counts[i];
  return counts;
}

double equilibrium_temperature(const ScenarioConfig& s, const Constants& c) {
  const GasMode m = gas_mode(s.mode);
  return temperature_from_energy(
      m, energy_per_atom(m, s.T_init, s.trap.omega_osc, c), s.trap.omega_osc,
      c);
}

ReplicaOutput simulate_replica(const ScenarioConfig& s, std::uint64_t seed,
                               const Constants& c) {
  if (!is_gas(s.mode))
    throw UnsupportedConfiguration("simulate_replica: not a gas scenario");
  validate(s);
  const GasMode mode = gas_mode(s.mode);
  const auto counts = plan_planes(s, c);

  Rng init_rng = make_rng(seed, 0);
  GasState state = sample_thermal_gas(s.trap, mode, counts, s.T_init,
                                      init_rng, c);
  state.rng_seed = splitmix64(seed ^ 0xd1b54a32d192ed03ULL);

  DsmcConfig cfg;
  cfg.selection = s.dsmc.selection;
  cfg.cell_fraction = s.dsmc.cell_fraction;
  cfg.T_cells = equilibrium_temperature(s, c);
  cfg.inelastic_weight = s.dsmc.inelastic_weight;
  cfg.axial_split = s.dsmc.axial_split;
  cfg.quasi2d_rate = s.dsmc.quasi2d_rate;
  DsmcEngine engine(std::move(state), cfg, c);

  const double dt =
      s.dsmc.dt > 0.0 ? s.dsmc.dt : kTwoPi / s.trap.omega_x / 50.0;

  ReplicaOutput out;
  out.seed = seed;
  const auto cols = gas_columns(mode);
  std::vector<std::string> units;
  for (const auto& col : cols) units.push_back(unit_of(col));
  out.series = TimeSeries(cols, units);

  auto record = [&] {
    const auto& st = engine.state();
    const Moments m = moments(st);
    const auto& k = engine.counters();
    auto T = [&](int a) { return c.m_Cs * m.v_rms[a] * m.v_rms[a] / c.k_B; };
    std::vector<double> row;
    if (mode == GasMode::classical3d) {
      row = {m.v_rms[0], m.v_rms[1], m.v_rms[2], m.x_rms[0], m.x_rms[1],
             m.x_rms[2], T(0),       T(1),       T(2),       st.trap.alpha,
             static_cast<double>(k.collisions)};
    } else {
      row = {m.v_rms[0],
             m.v_rms[1],
             m.x_rms[0],
             m.x_rms[1],
             m.mean_axial_n,
             m.ground_fraction,
             T(0),
             T(1),
             temperature_from_mean_n(m.mean_axial_n, st.trap.omega_osc, c),
             st.trap.alpha,
             static_cast<double>(k.collisions),
             static_cast<double>(k.above_threshold),
             static_cast<double>(k.excitations),
             static_cast<double>(k.deexcitations)};
    }
    out.series.append(st.t, row);
  };

  record();
  for (const auto& ph : s.schedule) {
    const double t_start = engine.state().t;
    const double interval =
        ph.sample_interval > 0.0 ? ph.sample_interval : ph.duration / 100.0;
    const long blocks = std::max(1L, std::lround(ph.duration / interval));
    const double block = ph.duration / blocks;
    const long steps = std::max(1L, static_cast<long>(std::ceil(block / dt - 1e-9)));
    const double h = block / steps;
    const TrapConfig trap0 = engine.state().trap;
    const long total = blocks * steps;

    for (long b = 0; b < blocks; ++b) {
      for (long k = 0; k < steps; ++k) {
        if (ph.kind == PhaseKind::rescale_alpha) {
          const double f = static_cast<double>(b * steps + k + 1) / total;
          const double alpha = trap0.alpha + (ph.alpha_new - trap0.alpha) * f;
          const TrapConfig to = rescale_frequencies(trap0, alpha);
          adiabatic_rescale(engine.mutable_state(), to);
          engine.set_trap(to);
        } else if (ph.kind == PhaseKind::cool) {
          apply_cooling(engine.mutable_state(), ph.cooling_rate, h,
                        engine.rng(), c);
        }
        engine.step(h);
      }
      record();
    }
    if (ph.kind == PhaseKind::free_thermalize)
      out.fit_windows.emplace_back(t_start, engine.state().t);
    if (ph.kind == PhaseKind::rescale_alpha)
      out.rescales.emplace_back(engine.state().trap.omega_osc / trap0.omega_osc,
                                engine.state().trap.omega_x / trap0.omega_x);
  }

  const auto& st = engine.state();
  out.counters = engine.counters();
  out.T0 = temperature_from_energy(
      mode, total_energy(st, c) / st.particles.size(), st.trap.omega_osc, c);
  const auto norm = normalization(counts, st.trap, out.T0, c);
  out.n_bar = norm.n_bar;
  out.n_2D = norm.n_2D;
  return out;
}

double PointResult::scalar(const std::string& name) const {
  for (const auto& [k, v] : scalars)
    if (k == name) return v;
  throw InvalidConfig(name, "no such summary value");
}

nlohmann::json RunManifest::to_json() const {
  return {{"config_hash", config_hash}, {"seeds", seeds},
          {"start_walltime", start_walltime}, {"end_walltime", end_walltime},
          {"outputs", outputs}, {"version", version}, {"derived", derived}};
}

namespace {

struct Aggregate {
  TimeSeries mean, err;
};

Aggregate aggregate(const std::vector<const TimeSeries*>& runs) {
  const TimeSeries& first = *runs.front();
  std::vector<std::string> units;
  for (const auto& n : first.names()) units.push_back(first.unit(n));
  Aggregate a{TimeSeries(first.names(), units), TimeSeries(first.names(), units)};
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::vector<double> mean_row, err_row;
    for (const auto& name : first.names()) {
      std::vector<double> x;
      for (const auto* r : runs) {
        if (r->size() != first.size() || r->t()[i] != first.t()[i])
          throw NumericalError("aggregate: replicas disagree on the time grid");
        x.push_back(r->column(name)[i]);
      }
      const auto me = mean_error(x);
      mean_row.push_back(me.mean);
      err_row.push_back(me.sem);
    }
    a.mean.append(first.t()[i], mean_row);
    a.err.append(first.t()[i], err_row);
  }
  return a;
}

std::optional<FitResult> try_fit(const TimeSeries& ts, const std::string& col,
                                 std::pair<double, double> window) {
  std::vector<double> t, y;
  const auto& all_t = ts.t();
  const auto& all_y = ts.column(col);
  for (std::size_t i = 0; i < all_t.size(); ++i)
    if (all_t[i] >= window.first - 1e-12 && all_t[i] <= window.second + 1e-12) {
      t.push_back(all_t[i] - window.first);
      y.push_back(all_y[i]);
    }
  if (t.size() < 8) return std::nullopt;
  try {
    return fit_exponential(t, y);
  } catch (const FitError&) {
    return std::nullopt;
  }
}

double nan() { return std::nan(""); }

CsvTable series_table(const TimeSeries& ts,
                      const std::vector<std::string>& selection,
                      const std::string& suffix = "") {
  CsvTable t;
  t.columns.push_back("t");
  t.units.push_back("s");
  std::vector<const std::vector<double>*> cols;
  for (const auto& name : ts.names()) {
    bool keep = selection.empty();
    for (const auto& s : selection)
      keep = keep || s == name || (s == "p3_*" && name.rfind("p3_", 0) == 0);
    if (!keep) continue;
    t.columns.push_back(name + suffix);
    t.units.push_back(ts.unit(name));
    cols.push_back(&ts.column(name));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> row{ts.t()[i]};
    for (const auto* c : cols) row.push_back((*c)[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void gas_point_summary(const ScenarioConfig& s, PointResult& pr,
                       const Constants& c) {
  const bool classical = s.mode == ScenarioMode::classical3d;
  const auto& reps = pr.replicas;
  std::vector<const TimeSeries*> runs;
  for (const auto& r : reps) runs.push_back(&r.series);
  auto agg = aggregate(runs);
  pr.aggregate = agg.mean;
  pr.aggregate_err = agg.err;

  std::vector<double> T0s, nbars, n2ds;
  double collisions = 0, above = 0, exc = 0, dex = 0;
  for (const auto& r : reps) {
    T0s.push_back(r.T0);
    nbars.push_back(r.n_bar);
    n2ds.push_back(r.n_2D);
    collisions += r.counters.collisions;
    above += r.counters.above_threshold;
    exc += r.counters.excitations;
    dex += r.counters.deexcitations;
  }
  const double T0 = mean_error(T0s).mean;
  const double n_bar = mean_error(nbars).mean;
  const double n_2D = mean_error(n2ds).mean;
  const double v_rms = std::sqrt(c.k_B * T0 / c.m_Cs);
  const auto counts = plan_planes(s, c);
  const std::string col = classical ? "v_z_rms" : "mean_axial_n";

  double tau = nan(), tau_sd = nan(), tau_jk = nan(), resid = nan();
  const auto& windows = reps.front().fit_windows;
  if (!windows.empty()) {
    pr.fit = try_fit(pr.aggregate, col, windows.front());
    if (pr.fit && !pr.fit->degenerate) {
      tau = pr.fit->tau;
      tau_sd = std::sqrt(pr.fit->variance[0]);
      resid = pr.fit->residual_rms;
    }
    if (reps.size() >= 3 && std::isfinite(tau)) {
      std::vector<double> loo;
      for (std::size_t k = 0; k < reps.size(); ++k) {
        std::vector<const TimeSeries*> sub;
        for (std::size_t j = 0; j < reps.size(); ++j)
          if (j != k) sub.push_back(&reps[j].series);
        const auto f = try_fit(aggregate(sub).mean, col, windows.front());
        if (f && !f->degenerate) loo.push_back(f->tau);
      }
      if (loo.size() == reps.size()) {
        const double m = mean_error(loo).mean;
        double ss = 0.0;
        for (double x : loo) ss += (x - m) * (x - m);
        tau_jk = std::sqrt((loo.size() - 1.0) / loo.size() * ss);
      }
    }
  }
  const double tau_err = std::isfinite(tau_jk) ? tau_jk : tau_sd;

  Scalars& sc = pr.scalars;
  sc.emplace_back("sweep_value", pr.sweep_value);
  sc.emplace_back("T0", T0);
  sc.emplace_back("kT_over_hw", c.k_B * T0 / (c.hbar * s.trap.omega_osc));
  sc.emplace_back("planes", static_cast<double>(counts.size()));
  sc.emplace_back("atoms_per_plane",
                  static_cast<double>(s.N) / static_cast<double>(counts.size()));
  sc.emplace_back("n_bar", n_bar);
  sc.emplace_back("n_2D", n_2D);
  sc.emplace_back("v_rms", v_rms);
  sc.emplace_back("tau", tau);
  sc.emplace_back("tau_err", tau_err);
  sc.emplace_back("fit_residual_rms", resid);
  sc.emplace_back("collisions_per_atom",
                  collisions / (static_cast<double>(s.N) * reps.size()));

  if (classical) {
    const auto oracle = analytic_t_therm_classical(n_bar, T0, c);
    const double obs = 1.0 / (n_bar * v_rms * tau);
    sc.emplace_back("observable", obs);
    sc.emplace_back("observable_err", obs * tau_err / tau);
    sc.emplace_back("oracle_observable", oracle.observable);
    sc.emplace_back("oracle_tau", oracle.T_therm);
    sc.emplace_back("observable_ratio", obs / oracle.observable);
    sc.emplace_back("rate_per_n2D", 1.0 / (tau * n_2D));
    double drift = 0.0;
    for (const auto& r : reps) drift = std::max(drift, kinetic_invariant(r.series));
    sc.emplace_back("kinetic_drift_max", drift);
    sc.emplace_back("kinetic_drift_mean", kinetic_invariant(pr.aggregate));
  } else {
    const double w = s.trap.omega_osc;
    const double p = above / std::max(collisions, 1.0);
    sc.emplace_back("rate_per_n2D", 1.0 / (tau * n_2D));
    sc.emplace_back("rate_per_n2D_err", tau_err / (tau * tau * n_2D));
    sc.emplace_back("oracle_quasi2d_tau", analytic_t_therm_quasi2d(n_2D, T0, w, c));
    const double peak_n_2D =
        (*std::max_element(counts.begin(), counts.end()) - 1.0) /
        (4.0 * kPi * (v_rms / s.trap.omega_x) * (v_rms / s.trap.omega_y));
    sc.emplace_back("peak_n_2D", peak_n_2D);
    sc.emplace_back("oracle_quasi2d_tau_peak",
                    analytic_t_therm_quasi2d(peak_n_2D, T0, w, c));
    const auto cl = analytic_t_therm_classical(n_bar, T0, c);
    sc.emplace_back("oracle_classical_rate_per_n2D", 1.0 / (cl.T_therm * n_2D));
    sc.emplace_back("above_threshold_fraction", p);
    sc.emplace_back("above_threshold_fraction_err",
                    std::sqrt(p * (1.0 - p) / std::max(collisions, 1.0)));
    sc.emplace_back("oracle_suppression", suppression_factor(T0, w, c));
    sc.emplace_back("excitations", exc / reps.size());
    sc.emplace_back("deexcitations", dex / reps.size());
    const auto& nz = pr.aggregate.column("mean_axial_n");
    sc.emplace_back("final_mean_axial_n", nz.back());
    sc.emplace_back("oracle_mean_axial_n", thermal_state(T0, w, c).mean_n);
  }
}

void sideband_point(const ScenarioConfig& s, PointResult& pr,
                    std::vector<CsvTable>& extra) {
  const auto& sb = s.sideband;
  const auto& m = sb.model;
  Scalars& sc = pr.scalars;
  sc.emplace_back("sweep_value", pr.sweep_value);

  PopulationVector ss;
  try {
    ss = steady_state(build_rate_matrix(m));
    sc.emplace_back("p31", ss.p3[1]);
    sc.emplace_back("excited_fraction", 1.0 - ss.p3[0] - ss.p2[0]);
    sc.emplace_back("leakage", ss.leakage());
  } catch (const AmbiguousSteadyState&) {
    sc.emplace_back("p31", nan());
    sc.emplace_back("excited_fraction", nan());
    sc.emplace_back("leakage", nan());
  }
  sc.emplace_back("p31_resonant_estimate",
                  resonant_p31_estimate(m.Gamma_prime, m.omega_osc));
  sc.emplace_back("p31_detuned_estimate",
                  detuned_p31_estimate(m.detuning_delta, m.omega_osc));
  sc.emplace_back("cooling_rate", cooling_rate(m));
  sc.emplace_back("lorentzian_reduction",
                  lorentzian_reduction(m.detuning_delta, m.Gamma_prime));

  CsvTable table;
  table.columns = {"Gamma_prime", "detuning_delta", "sigma_minus_fraction",
                   "p31", "excited_fraction", "p31_resonant_estimate",
                   "p31_detuned_estimate", "cooling_rate"};
  table.units = {"rad/s", "rad/s", "1", "1", "1", "1", "1", "1/s"};
  for (const auto& row : sb.table) {
    RateModelConfig r = m;
    r.Gamma_prime = row.Gamma_prime;
    r.detuning_delta = row.detuning_delta;
    r.sigma_minus_fraction = row.sigma_minus_fraction;
    const auto p = steady_state(build_rate_matrix(r));
    table.rows.push_back({r.Gamma_prime, r.detuning_delta,
                          r.sigma_minus_fraction, p.p3[1],
                          1.0 - p.p3[0] - p.p2[0],
                          resonant_p31_estimate(r.Gamma_prime, r.omega_osc),
                          detuned_p31_estimate(r.detuning_delta, r.omega_osc),
                          cooling_rate(r)});
  }
  extra.push_back(std::move(table));

  double total = 0.0, interval = 0.0;
  for (const auto& ph : s.schedule) {
    total += ph.duration;
    if (interval == 0.0 && ph.sample_interval > 0.0) interval = ph.sample_interval;
  }
  if (total <= 0.0) return;
  if (interval == 0.0) interval = total / 100.0;
  const long n = std::max(8L, std::lround(total / interval));
  std::vector<double> t(n + 1);
  for (long i = 0; i <= n; ++i) t[i] = total * i / n;

  const auto p0 = thermal_population(sb.initial_mean_n, m.n_max);
  const auto tr = evolve(build_rate_matrix(m), p0, t);
  std::vector<std::string> names{"mean_n", "kT_over_hw", "ground_fraction"};
  for (int k = 0; k <= m.n_max; ++k) names.push_back("p3_" + std::to_string(k));
  std::vector<double> ens;
  if (sb.spread_sigma > 0.0) {
    names.push_back("ensemble_mean_n");
    ens = ensemble_mean_n(m, p0, t, sb.spread_sigma, sb.spread_points);
  }
  TimeSeries ts(names, std::vector<std::string>(names.size(), "1"));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& p = tr.p[i];
    const double nb = p.mean_n();
    std::vector<double> row{nb, nb > 0.0 ? 1.0 / std::log1p(1.0 / nb) : 0.0,
                            p.ground_fraction()};
    for (int k = 0; k <= m.n_max; ++k) row.push_back(p.p3[k]);
    if (!ens.empty()) row.push_back(ens[i]);
    ts.append(t[i], row);
  }
  pr.aggregate = ts;
  pr.fit = try_fit(ts, "mean_n", {0.0, total});
  const auto mn = tr.mean_n();
  sc.emplace_back("cool_tau_fit", pr.fit ? pr.fit->tau : nan());
  sc.emplace_back("cool_one_over_e", one_over_e_time(t, mn, mn.back()));
  if (!ens.empty())
    sc.emplace_back("ensemble_one_over_e", one_over_e_time(t, ens, ens.back()));
  sc.emplace_back("final_mean_n", mn.back());
}

void analytic_point(const ScenarioConfig& s, PointResult& pr,
                    const Constants& c) {
  const double T = s.T_init[0];
  const double w = s.trap.omega_osc;
  const auto cl = analytic_t_therm_classical(1.0, T, c);
  Scalars& sc = pr.scalars;
  sc.emplace_back("sweep_value", pr.sweep_value);
  sc.emplace_back("T", T);
  sc.emplace_back("kT_over_hw", c.k_B * T / (c.hbar * w));
  sc.emplace_back("observable", cl.observable);
  sc.emplace_back("sigma_at_v_rms", cross_section(cl.v_rms, c));
  sc.emplace_back("suppression", suppression_factor(T, w, c));
  sc.emplace_back("quasi2d_tau_times_n2D", analytic_t_therm_quasi2d(1.0, T, w, c));
  sc.emplace_back("quasi2d_rate_estimate_per_n2D",
                  quasi2d_rate_estimate(1.0, T, w, c));
  sc.emplace_back("delta_Ez", delta_Ez(T, w, c));
}

nlohmann::json rescale_derivation(const ScenarioConfig& s) {
  nlohmann::json out = nlohmann::json::array();
  TrapConfig trap = s.trap;
  for (const auto& ph : s.schedule) {
    if (ph.kind != PhaseKind::rescale_alpha) continue;
    const TrapConfig next = rescale_frequencies(trap, ph.alpha_new);
    out.push_back({{"alpha_from", trap.alpha},
                   {"alpha_to", ph.alpha_new},
                   {"omega_z_ratio", next.omega_osc / trap.omega_osc},
                   {"omega_x_ratio", next.omega_x / trap.omega_x},
                   {"omega_y_ratio", next.omega_y / trap.omega_y}});
    trap = next;
  }
  return out;
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int k = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int i = 1; i < k; ++i) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string padded(std::size_t k) {
  std::string s = std::to_string(k);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

std::string point_dir(std::size_t k) { return "point_" + padded(k); }

std::string replica_file(std::size_t r) {
  return "replica_" + padded(r) + ".csv";
}

}  // namespace

RunResult run(const ScenarioConfig& s, const RunOptions& opt,
              const Constants& c) {
  validate(s);
  RunResult res;
  auto& man = res.manifest;
  man.start_walltime = utc_now();
  man.version = version_string();
  const nlohmann::json doc = to_json(s);
  man.config_hash = config_hash(doc);

  std::vector<ScenarioConfig> points;
  std::vector<double> values;
  if (s.sweep) {
    for (double v : s.sweep->values) {
      points.push_back(sweep_point(s, v));
      values.push_back(v);
    }
  } else {
    points.push_back(s);
    values.push_back(0.0);
  }
  const bool gas = is_gas(s.mode);
  const int replicas = gas ? s.replicas : 1;
  for (int r = 0; r < replicas; ++r) man.seeds.push_back(s.seed + r);

  const std::filesystem::path root =
      std::filesystem::path(opt.out_dir) / s.name;
  auto emit = [&](const std::string& rel, const std::string& content) {
    if (!opt.write_files) return;
    write_text_file((root / rel).string(), content);
  };
  auto meta = [&](std::size_t k) {
    std::vector<std::pair<std::string, std::string>> m{
        {"scenario", s.name},
        {"config_hash", man.config_hash},
        {"mode", to_string(s.mode)},
        {"version", man.version}};
    if (s.sweep) {
      m.emplace_back("sweep_parameter", s.sweep->parameter);
      m.emplace_back("sweep_value", format_double(values[k]));
    }
    if (s.mode == ScenarioMode::classical3d)
      m.emplace_back("v_rms", "per-axis sqrt(k_B T0 / m) at the equilibrium T0");
    return m;
  };

  res.points.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    res.points[k].sweep_value = values[k];
    res.points[k].dir = point_dir(k);
  }

  if (gas) {
    std::vector<std::vector<ReplicaOutput>> outs(
        points.size(), std::vector<ReplicaOutput>(replicas));
    std::mutex file_mutex;
    std::vector<std::vector<std::string>> files(
        points.size(), std::vector<std::string>(replicas));
    parallel_for(points.size() * replicas, opt.workers, [&](std::size_t i) {
      const std::size_t k = i / replicas, r = i % replicas;
      outs[k][r] = simulate_replica(points[k], s.seed + r, c);
      CsvTable t = series_table(outs[k][r].series, s.outputs);
      t.metadata = meta(k);
      t.metadata.emplace_back("seed", std::to_string(s.seed + r));
      t.metadata.emplace_back("replica", std::to_string(r));
      const std::string rel = point_dir(k) + "/" + replica_file(r);
      emit(rel, to_csv(t));
      std::lock_guard<std::mutex> lock(file_mutex);
      files[k][r] = rel;
    });
    for (std::size_t k = 0; k < points.size(); ++k) {
      auto& pr = res.points[k];
      pr.replicas = std::move(outs[k]);
      gas_point_summary(points[k], pr, c);
      for (const auto& f : files[k]) man.outputs.push_back(f);
      CsvTable mean = series_table(pr.aggregate, s.outputs, "_mean");
      const CsvTable err = series_table(pr.aggregate_err, s.outputs, "_err");
      for (std::size_t col = 1; col < err.columns.size(); ++col) {
        mean.columns.push_back(err.columns[col]);
        mean.units.push_back(err.units[col]);
        for (std::size_t row = 0; row < mean.rows.size(); ++row)
          mean.rows[row].push_back(err.rows[row][col]);
      }
      mean.metadata = meta(k);
      mean.metadata.emplace_back("replicas", std::to_string(replicas));
      const std::string rel = point_dir(k) + "/aggregate.csv";
      emit(rel, to_csv(mean));
      man.outputs.push_back(rel);
      if (!opt.keep_replicas)
        for (auto& r : pr.replicas) r.series = TimeSeries();
    }
  } else {
    for (std::size_t k = 0; k < points.size(); ++k) {
      auto& pr = res.points[k];
      if (s.mode == ScenarioMode::sideband_rate_model) {
        std::vector<CsvTable> extra;
        sideband_point(points[k], pr, extra);
        if (pr.aggregate.size() > 0) {
          CsvTable t = series_table(pr.aggregate, s.outputs);
          t.metadata = meta(k);
          const std::string rel = point_dir(k) + "/trajectory.csv";
          emit(rel, to_csv(t));
          man.outputs.push_back(rel);
        }
        for (auto& t : extra) {
          t.metadata = meta(k);
          const std::string rel = point_dir(k) + "/steady_state.csv";
          emit(rel, to_csv(t));
          man.outputs.push_back(rel);
        }
      } else {
        analytic_point(points[k], pr, c);
      }
    }
  }

  CsvTable summary;
  summary.metadata = meta(0);
  if (s.sweep) {
    summary.metadata.pop_back();  // sweep_value differs per row
  }
  for (const auto& [name, v] : res.points.front().scalars)
    summary.columns.push_back(name);
  for (const auto& pr : res.points) {
    std::vector<double> row;
    for (const auto& [name, v] : pr.scalars) row.push_back(v);
    summary.rows.push_back(std::move(row));
  }
  emit("summary.csv", to_csv(summary));
  man.outputs.push_back("summary.csv");

  nlohmann::json derived;
  derived["rescale"] = rescale_derivation(s);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pr : res.points) {
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [name, v] : pr.scalars)
      p[name] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    pts.push_back(p);
  }
  derived["points"] = pts;
  derived["scenario"] = doc;
  man.derived = derived;
  man.end_walltime = utc_now();
  emit("manifest.json", man.to_json().dump(2) + "\n");
  return res;
}

}  // namespace cs2d
