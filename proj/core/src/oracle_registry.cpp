#include "cs2d/oracle_registry.hpp"

#include <cmath>
#include <stdexcept>

#include "cs2d/collision_oracles.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/mean_density.hpp"
#include "cs2d/rabi.hpp"
#include "cs2d/sideband.hpp"
#include "cs2d/thermal.hpp"
#include "cs2d/trap.hpp"

namespace cs2d {

namespace {

using Args = std::map<std::string, double>;

constexpr double kDeg = kTwoPi / 360.0;

TrapConfig trap_from(const Args& a, const Constants& c) {
  TrapConfig t = reference_trap(c);
  if (auto it = a.find("omega_osc"); it != a.end()) t.omega_osc = it->second;
  if (auto it = a.find("alpha"); it != a.end()) t.alpha = it->second;
  if (auto it = a.find("pol_phase"); it != a.end()) t.pol_phase = it->second;
  return t;
}

std::vector<Oracle> build() {
  const TrapConfig pt = reference_trap();
  std::vector<Oracle> v;
  v.push_back({"lamb_dicke", "eta = sqrt(omega_rec/omega_osc) on the D2 line",
               {{"omega_osc", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"eta", lamb_dicke(a.at("omega_osc"), c.lambda_D2, c)}};
               }});
  v.push_back({"ground_state_size", "l0 = sqrt(hbar/2 m omega_osc)",
               {{"omega_osc", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"l0", ground_state_size(a.at("omega_osc"), c)}};
               }});
  v.push_back({"raman_coupling", "YAG-induced Raman coupling V_R and 2V_R/hbar",
               {{"omega_osc", pt.omega_osc, "rad/s"},
                {"alpha", pt.alpha, "rad"},
                {"pol_phase", 0.0, "rad"},
                {"n", 1.0, "1"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const TrapConfig t = trap_from(a, c);
                 const double V = raman_coupling(t, c, static_cast<int>(a.at("n")));
                 return {{"V", V}, {"Omega", 2.0 * V / c.hbar}};
               }});
  v.push_back({"coupling_parity", "odd/even weights of the Raman coupling",
               {{"pol_phase", 0.0, "rad"}},
               [](const Args& a, const Constants&) -> OracleValues {
                 const auto p = coupling_parity(a.at("pol_phase"));
                 return {{"odd_weight", p.odd_weight}, {"even_weight", p.even_weight}};
               }});
  v.push_back({"rescale_frequencies", "trap frequencies after changing alpha",
               {{"alpha", pt.alpha, "rad"}, {"alpha_new", 60.0 * kDeg, "rad"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const TrapConfig t = trap_from(a, c);
                 const TrapConfig n = rescale_frequencies(t, a.at("alpha_new"));
                 return {{"omega_z_ratio", n.omega_osc / t.omega_osc},
                         {"omega_x_ratio", n.omega_x / t.omega_x},
                         {"omega_osc", n.omega_osc},
                         {"omega_x", n.omega_x},
                         {"omega_y", n.omega_y}};
               }});
  v.push_back({"two_step_final_temperature", "beta (wx1/wx2)(wz2/wz1)",
               {{"beta", 0.7, "1"}, {"omega_x_ratio", 0.88, "1"},
                {"omega_z_ratio", 0.67, "1"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 TrapConfig t1 = reference_trap(c), t2 = t1;
                 t2.omega_x *= a.at("omega_x_ratio");
                 t2.omega_osc *= a.at("omega_z_ratio");
                 return {{"T_ratio", two_step_final_temperature(a.at("beta"), t1, t2)}};
               }});
  v.push_back({"loss_rate_scaling", "K(U) from K_ref by the U^(5/6) law",
               {{"U_ref", 1.0, "J"}, {"K_ref", 1.0, "m^3/s"}, {"U_new", 64.0, "J"}},
               [](const Args& a, const Constants&) -> OracleValues {
                 return {{"as_stated", loss_rate_scaling(a.at("U_ref"), a.at("K_ref"),
                                                         a.at("U_new"), LossScaling::as_stated)},
                         {"as_applied", loss_rate_scaling(a.at("U_ref"), a.at("K_ref"),
                                                          a.at("U_new"), LossScaling::as_applied)}};
               }});
  v.push_back({"thermal_state", "Bose ladder occupation at temperature T",
               {{"T", 10e-6, "K"}, {"omega", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const auto s = thermal_state(a.at("T"), a.at("omega"), c);
                 return {{"mean_n", s.mean_n}, {"ground_fraction", s.ground_fraction}};
               }});
  v.push_back({"temperature_from_mean_n", "inverse Bose ladder",
               {{"mean_n", 5.8, "1"}, {"omega", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"T", temperature_from_mean_n(a.at("mean_n"), a.at("omega"), c)}};
               }});
  v.push_back({"temperature_from_ground_fraction", "inverse ground fraction",
               {{"p0", 0.8, "1"}, {"omega", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"T", temperature_from_ground_fraction(a.at("p0"), a.at("omega"), c)}};
               }});
  v.push_back({"cross_section", "s-wave unitarity cross section 8 pi / k^2",
               {{"v_rel", 0.025, "m/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"k", relative_wave_vector(a.at("v_rel"), c)},
                         {"sigma", cross_section(a.at("v_rel"), c)}};
               }});
  v.push_back({"thermal_sigma_g", "<sigma g> over a Maxwell gas at T",
               {{"T", 10e-6, "K"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"quadrature", thermal_sigma_g(a.at("T"), c)},
                         {"closed_form", thermal_sigma_g_closed(a.at("T"), c)}};
               }});
  v.push_back({"analytic_t_therm_classical", "classical 3D thermalization time",
               {{"n_bar", 1e17, "m^-3"}, {"T0", 10e-6, "K"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const auto r = analytic_t_therm_classical(a.at("n_bar"), a.at("T0"), c);
                 return {{"T_therm", r.T_therm}, {"observable", r.observable},
                         {"v_rms", r.v_rms}};
               }});
  v.push_back({"analytic_t_therm_quasi2d", "quasi-2D thermalization time",
               {{"n_2D", 1e12, "m^-2"}, {"T", 3.84e-6, "K"},
                {"omega_osc", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const double T = a.at("T"), w = a.at("omega_osc");
                 return {{"T_therm", analytic_t_therm_quasi2d(a.at("n_2D"), T, w, c)},
                         {"rate_estimate", quasi2d_rate_estimate(a.at("n_2D"), T, w, c)},
                         {"in_domain", quasi2d_in_domain(T, w, c) ? 1.0 : 0.0}};
               }});
  v.push_back({"suppression_factor", "exp(-2 hbar omega / k_B T)",
               {{"T", 3.84e-6, "K"}, {"omega_osc", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"suppression", suppression_factor(a.at("T"), a.at("omega_osc"), c)}};
               }});
  v.push_back({"collision_rate_2d", "hbar n_2D / m", {{"n_2D", 1e12, "m^-2"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"rate", collision_rate_2d(a.at("n_2D"), c)}};
               }});
  v.push_back({"energy_distribution_2d", "2D relative-energy density and tail",
               {{"E", 1e-29, "J"}, {"T", 3.84e-6, "K"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 return {{"density", energy_distribution_2d(a.at("E"), a.at("T"), c)},
                         {"above", above_threshold_fraction(a.at("E"), a.at("T"), c)}};
               }});
  v.push_back({"dEz_dt", "axial energy transfer rate and per-collision transfer",
               {{"n_2D", 1e12, "m^-2"}, {"T", 3.84e-6, "K"},
                {"omega_osc", pt.omega_osc, "rad/s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const double T = a.at("T"), w = a.at("omega_osc");
                 return {{"dEz_dt", dEz_dt(a.at("n_2D"), T, w, c)},
                         {"delta_Ez", delta_Ez(T, w, c)}};
               }});
  v.push_back({"mean_density", "pair-weighted mean density of a thermal cloud",
               {{"N", 5000.0, "1"}, {"T", 10e-6, "K"}, {"sigma_z", 0.0, "m"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const TrapConfig t = reference_trap(c);
                 const auto d = mean_density(CloudShape{a.at("sigma_z"), 0.0, 0.0}, static_cast<long>(a.at("N")),
                                             t, a.at("T"), c);
                 return {{"n_bar", d.n_bar}, {"n_2D_bar", d.n_2D_bar},
                         {"peak_n_2D", d.peak_n_2D},
                         {"fwhm_planes", static_cast<double>(d.fwhm_planes)},
                         {"participation", d.participation}};
               }});
  v.push_back({"sideband_steady_state", "rate-equation steady state",
               {{"Omega_R", kTwoPi * 5e3, "rad/s"}, {"Gamma_prime", kTwoPi * 4.8e3, "rad/s"},
                {"omega_osc", pt.omega_osc, "rad/s"}, {"detuning_delta", 0.0, "rad/s"},
                {"sigma_minus_fraction", 0.0, "1"}, {"n_max", 40.0, "1"}},
               [](const Args& a, const Constants&) -> OracleValues {
                 RateModelConfig m;
                 m.Omega_R = a.at("Omega_R");
                 m.Gamma_prime = a.at("Gamma_prime");
                 m.omega_osc = a.at("omega_osc");
                 m.zeeman_splitting = m.omega_osc;
                 m.detuning_delta = a.at("detuning_delta");
                 m.sigma_minus_fraction = a.at("sigma_minus_fraction");
                 m.n_max = static_cast<int>(a.at("n_max"));
                 const auto p = steady_state(build_rate_matrix(m));
                 return {{"p30", p.p3[0]}, {"p31", p.p3[1]}, {"mean_n", p.mean_n()},
                         {"resonant_estimate", resonant_p31_estimate(m.Gamma_prime, m.omega_osc)},
                         {"detuned_estimate", detuned_p31_estimate(m.detuning_delta, m.omega_osc)},
                         {"cooling_rate", cooling_rate(m)}};
               }});
  v.push_back({"lorentzian_reduction", "1 + 4 Delta^2 / Gamma'^2",
               {{"Delta", kTwoPi * 12e3, "rad/s"}, {"Gamma_prime", kTwoPi * 4.8e3, "rad/s"}},
               [](const Args& a, const Constants&) -> OracleValues {
                 return {{"factor", lorentzian_reduction(a.at("Delta"), a.at("Gamma_prime"))}};
               }});
  v.push_back({"thermal_rabi", "effective Rabi frequency of a thermal ladder",
               {{"Omega_R", kTwoPi * 6e3, "rad/s"}, {"T", 26e-6, "K"},
                {"omega_osc", pt.omega_osc, "rad/s"}, {"window", 40e-6, "s"}},
               [](const Args& a, const Constants& c) -> OracleValues {
                 const double W = a.at("Omega_R"), T = a.at("T"), w = a.at("omega_osc");
                 return {{"fitted_Omega", fit_effective_rabi(W, T, w, a.at("window"), c)},
                         {"dephasing_time", dephasing_time(W, T, w, c)},
                         {"damping_rate", expected_damping_rate(W, T, w, c)}};
               }});
  return v;
}

}  // namespace

const std::vector<Oracle>& oracles() {
  static const std::vector<Oracle> all = build();
  return all;
}

const Oracle& find_oracle(const std::string& name) {
  for (const auto& o : oracles())
    if (o.name == name) return o;
  throw InvalidConfig("oracle", "unknown formula '" + name + "'");
}

std::map<std::string, double> parse_oracle_args(
    const Oracle& o, const std::vector<std::string>& kv) {
  struct Suffix {
    const char* s;
    double f;
  };
  static const Suffix suffixes[] = {{"_kHz", kTwoPi * 1e3}, {"_hz", kTwoPi},
                                    {"_uK", 1e-6},          {"_nm", 1e-9},
                                    {"_deg", kDeg}};
  std::map<std::string, double> out;
  for (const auto& a : o.args) out[a.name] = a.default_value;
  for (std::string item : kv) {
    while (!item.empty() && item.front() == '-') item.erase(0, 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig(item, "expected key=value");
    std::string key = item.substr(0, eq);
    double value;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidConfig(key, "value is not a number");
    }
    for (const auto& s : suffixes) {
      const std::string suf = s.s;
      if (key.size() > suf.size() &&
          key.compare(key.size() - suf.size(), suf.size(), suf) == 0 &&
          !out.count(key)) {
        key.resize(key.size() - suf.size());
        value *= s.f;
        break;
      }
    }
    if (!out.count(key)) throw InvalidConfig(key, "not an argument of " + o.name);
    out[key] = value;
  }
  return out;
}

OracleValues evaluate_oracle(const std::string& name,
                             const std::vector<std::string>& kv,
                             const Constants& c) {
  const Oracle& o = find_oracle(name);
  return o.evaluate(parse_oracle_args(o, kv), c);
}

}  // namespace cs2d
