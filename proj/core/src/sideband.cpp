#include "cs2d/sideband.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/special_functions/erf.hpp>

#include "cs2d/errors.hpp"

namespace cs2d {

std::vector<std::string> validate(const RateModelConfig& cfg) {
  if (!(cfg.omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  if (!(cfg.Gamma_prime > 0.0))
    throw InvalidConfig("Gamma_prime", "must be > 0");
  if (!(cfg.Omega_R >= 0.0)) throw InvalidConfig("Omega_R", "must be >= 0");
  if (!(cfg.sigma_minus_fraction >= 0.0 && cfg.sigma_minus_fraction < 1.0))
    throw InvalidConfig("sigma_minus_fraction", "must lie in [0, 1)");
  if (cfg.n_max < 10) throw InvalidConfig("n_max", "must be >= 10");
  if (!(cfg.eta >= 0.0)) throw InvalidConfig("eta", "must be >= 0");
  if (!std::isfinite(cfg.detuning_delta) ||
      !std::isfinite(cfg.zeeman_splitting))
    throw InvalidConfig("detuning", "must be finite");

  std::vector<std::string> warnings;
  if (!(cfg.Omega_R < cfg.Gamma_prime && cfg.Gamma_prime < cfg.omega_osc))
    warnings.emplace_back(
        "Omega_R < Gamma_prime < omega_osc does not hold; the resolved "
        "sideband rate picture is only approximate");
  return warnings;
}

double PopulationVector::total() const {
  return std::accumulate(p3.begin(), p3.end(), 0.0) +
         std::accumulate(p2.begin(), p2.end(), 0.0);
}

double PopulationVector::mean_n() const {
  double s = 0.0;
  for (int n = 0; n <= n_max; ++n) s += n * (p3[n] + p2[n]);
  return s / total();
}

double PopulationVector::ground_fraction() const {
  return (p3[0] + p2[0]) / total();
}

double PopulationVector::leakage(int levels) const {
  double s = 0.0;
  for (int n = std::max(0, n_max + 1 - levels); n <= n_max; ++n)
    s += p3[n] + p2[n];
  return s;
}

PopulationVector thermal_population(double mean_n, int n_max) {
  if (!(mean_n >= 0.0)) throw InvalidConfig("mean_n", "must be >= 0");
  PopulationVector p(n_max);
  if (mean_n == 0.0) {
    p.p3[0] = 1.0;
    return p;
  }
  const double r = mean_n / (1.0 + mean_n);
  double acc = 0.0;
  for (int n = 0; n < n_max; ++n) {
    p.p3[n] = (1.0 - r) * std::pow(r, n);
    acc += p.p3[n];
  }
  p.p3[n_max] = 1.0 - acc;
  return p;
}

std::vector<double> RateMatrix::flatten(const PopulationVector& p) const {
  if (p.n_max != n_max) throw InvalidConfig("n_max", "population mismatch");
  std::vector<double> x(dim, 0.0);
  for (int n = 0; n <= n_max; ++n) x[n] = p.p3[n];
  if (explicit_repump)
    for (int n = 0; n <= n_max; ++n) x[n_max + 1 + n] = p.p2[n];
  else
    for (int n = 0; n <= n_max; ++n) x[n] += p.p2[n];
  return x;
}

PopulationVector RateMatrix::unflatten(const std::vector<double>& x) const {
  PopulationVector p(n_max);
  for (int n = 0; n <= n_max; ++n) p.p3[n] = x[n];
  if (explicit_repump)
    for (int n = 0; n <= n_max; ++n) p.p2[n] = x[n_max + 1 + n];
  return p;
}

double sideband_rabi(const RateModelConfig& cfg, int n, int k) {
  const int hi = std::max(n, n + k);
  if (n + k < 0) return 0.0;
  switch (std::abs(k)) {
    case 1:
      return cfg.Omega_R * std::sqrt(static_cast<double>(hi));
    case 2:
      return cfg.Omega_R * 0.5 * cfg.eta *
             std::sqrt(static_cast<double>(hi) * (hi - 1));
    default:
      return 0.0;
  }
}

double raman_rate(const RateModelConfig& cfg, int n, int k) {
  if (k == 0 || n + k < 0 || n + k > cfg.n_max) return 0.0;
  const double weight = std::abs(k) == 1 ? cfg.parity.odd_weight
                                         : cfg.parity.even_weight;
  if (weight == 0.0) return 0.0;
  const double W = sideband_rabi(cfg, n, k);
  const double mismatch =
      cfg.zeeman_splitting + k * (cfg.omega_osc + cfg.detuning_delta);
  const double G = cfg.Gamma_prime;
  return weight * W * W * G / (G * G + 4.0 * mismatch * mismatch);
}

RateMatrix build_rate_matrix(const RateModelConfig& cfg) {
  validate(cfg);
  RateMatrix Q;
  Q.n_max = cfg.n_max;
  Q.explicit_repump = cfg.explicit_repump;
  Q.dim = cfg.explicit_repump ? 2 * (cfg.n_max + 1) : cfg.n_max + 1;
  Q.q.assign(static_cast<size_t>(Q.dim) * Q.dim, 0.0);

  auto add = [&](int to, int from, double rate) {
    if (rate == 0.0 || to == from) return;
    Q(to, from) += rate;
    Q(from, from) -= rate;
  };
  const int N = cfg.n_max;
  const int m2 = N + 1;

  for (int n = 0; n <= N; ++n) {
    for (int k : {-2, -1, 1, 2}) {
      const double r = raman_rate(cfg, n, k);
      add(cfg.explicit_repump ? m2 + n + k : n + k, n, r);
    }
    const double s = cfg.sigma_minus_fraction * cfg.Gamma_prime *
                     cfg.eta * cfg.eta;
    if (n + 1 <= N) add(n + 1, n, s);
    if (n >= 1) add(n - 1, n, s);
    if (cfg.explicit_repump) add(n, m2 + n, cfg.Gamma_prime);
  }
  return Q;
}

namespace {

Eigen::MatrixXd as_eigen(const RateMatrix& Q) {
  return Eigen::Map<const Eigen::MatrixXd>(Q.q.data(), Q.dim, Q.dim);
}

}  // namespace

PopulationVector steady_state(const RateMatrix& Q) {
  const Eigen::MatrixXd M = as_eigen(Q);
  for (int j = 0; j < Q.dim; ++j) {
    const double scale = M.col(j).cwiseAbs().sum();
    if (std::abs(M.col(j).sum()) > 1e-12 * std::max(scale, 1.0))
      throw NumericalError("steady_state: generator columns do not sum to 0");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-13);
  if (lu.dimensionOfKernel() != 1)
    throw AmbiguousSteadyState(
        "steady_state: generator has " +
        std::to_string(lu.dimensionOfKernel()) + " stationary distributions");

  Eigen::MatrixXd A = M;
  A.row(Q.dim - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(Q.dim);
  b(Q.dim - 1) = 1.0;
  Eigen::VectorXd x = A.fullPivLu().solve(b);
  for (int i = 0; i < Q.dim; ++i)
    if (x(i) < 0.0) {
      if (x(i) < -1e-12) throw NumericalError("steady_state: negative mass");
      x(i) = 0.0;
    }
  x /= x.sum();
  const double res = (M * x).norm() / std::max(M.norm(), 1e-300);
  if (res > 1e-10)
    throw NumericalError("steady_state: residual " + std::to_string(res));
  return Q.unflatten(std::vector<double>(x.data(), x.data() + Q.dim));
}

double lorentzian_reduction(double Delta, double Gamma_prime) {
  return 1.0 + 4.0 * Delta * Delta / (Gamma_prime * Gamma_prime);
}

double cooling_rate(const RateModelConfig& cfg) {
  if (!(cfg.Gamma_prime > 0.0))
    throw InvalidConfig("Gamma_prime", "must be > 0");
  return cfg.Omega_R * cfg.Omega_R / cfg.Gamma_prime /
         lorentzian_reduction(cfg.detuning_delta, cfg.Gamma_prime);
}

double resonant_p31_estimate(double Gamma_prime, double omega_osc) {
  const double r = Gamma_prime / (4.0 * omega_osc);
  return r * r;
}

double detuned_p31_estimate(double delta, double omega_osc) {
  const double r = delta / (2.0 * omega_osc);
  return r * r;
}

std::vector<double> Trajectory::mean_n() const {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(x.mean_n());
  return out;
}

Trajectory evolve(const RateMatrix& Q, const PopulationVector& p0,
                  const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidConfig("t_grid", "must be non-empty");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw InvalidConfig("t_grid", "must be strictly increasing");

  const Eigen::MatrixXd M = as_eigen(Q);
  const auto x0v = Q.flatten(p0);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0v.data(), Q.dim);

  Trajectory tr;
  tr.t = t_grid;
  tr.p.reserve(t_grid.size());
  if (t_grid.front() != 0.0) x = (M * t_grid.front()).exp() * x;
  tr.p.push_back(Q.unflatten({x.data(), x.data() + Q.dim}));

  std::map<double, Eigen::MatrixXd> cache;
  for (size_t i = 1; i < t_grid.size(); ++i) {
    const double dt = t_grid[i] - t_grid[i - 1];
    auto it = cache.find(dt);
    if (it == cache.end()) it = cache.emplace(dt, (M * dt).exp()).first;
    const double before = x.sum();
    x = it->second * x;
    const double drift = std::abs(x.sum() - before);
    if (drift > 1e-8 || !x.allFinite())
      throw NumericalError("evolve: probability drift " +
                           std::to_string(drift) + " at t = " +
                           std::to_string(t_grid[i]));
    tr.p.push_back(Q.unflatten({x.data(), x.data() + Q.dim}));
  }
  return tr;
}

std::vector<DetuningSample> gaussian_detunings(double sigma, int points) {
  if (points < 1) throw InvalidConfig("points", "must be >= 1");
  if (!(sigma >= 0.0)) throw InvalidConfig("sigma", "must be >= 0");
  std::vector<DetuningSample> out;
  for (int i = 0; i < points; ++i) {
    const double u = (i + 0.5) / points;
    const double z = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    out.push_back({sigma * z, 1.0 / points});
  }
  return out;
}

std::vector<double> ensemble_mean_n(const RateModelConfig& cfg,
                                    const PopulationVector& p0,
                                    const std::vector<double>& t_grid,
                                    double sigma_delta, int points) {
  std::vector<double> acc(t_grid.size(), 0.0);
  for (const auto& s : gaussian_detunings(sigma_delta, points)) {
    RateModelConfig c = cfg;
    c.detuning_delta = s.delta;
    const auto n = evolve(build_rate_matrix(c), p0, t_grid).mean_n();
    for (size_t i = 0; i < n.size(); ++i) acc[i] += s.weight * n[i];
  }
  return acc;
}

double one_over_e_time(const std::vector<double>& t,
                       const std::vector<double>& series, double baseline) {
  if (t.size() != series.size() || t.empty())
    throw InvalidConfig("series", "length mismatch");
  const double target = (series.front() - baseline) / std::exp(1.0);
  for (size_t i = 1; i < t.size(); ++i) {
    const double a = series[i - 1] - baseline;
    const double b = series[i] - baseline;
    if (b <= target) {
      const double f = (a - target) / (a - b);
      return t[i - 1] + f * (t[i] - t[i - 1]);
    }
  }
  return std::nan("");
}

}  // namespace cs2d
