#include "cs2d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "cs2d/errors.hpp"
#include "cs2d/thermal.hpp"

namespace cs2d {

namespace {

struct Linear {
  double A, B, sse;
};

// Best offset A and amplitude B for a fixed tau.
Linear solve_linear(const std::vector<double>& t, const std::vector<double>& y,
                    double tau) {
  const double n = static_cast<double>(t.size());
  double se = 0, see = 0, sy = 0, sey = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-(t[i] - t[0]) / tau);
    se += e, see += e * e, sy += y[i], sey += e * y[i];
  }
  const double det = n * see - se * se;
  Linear r{0, 0, 0};
  if (std::abs(det) < 1e-300) {
    r.A = sy / n;
  } else {
    r.A = (see * sy - se * sey) / det;
    r.B = (n * sey - se * sy) / det;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = y[i] - r.A - r.B * std::exp(-(t[i] - t[0]) / tau);
    r.sse += d * d;
  }
  return r;
}

}  // namespace

FitResult fit_exponential(const std::vector<double>& t,
                          const std::vector<double>& y) {
  if (t.size() != y.size()) throw InvalidConfig("y", "length mismatch");
  if (t.size() < 8) throw InvalidConfig("t", "need at least 8 points");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw InvalidConfig("t", "must be increasing");

  FitResult r;
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max(std::abs(*ymin), std::abs(*ymax));
  if (*ymax - *ymin <= 1e-14 * scale || scale == 0.0) {
    r.offset = y.front();
    r.degenerate = true;
    return r;
  }

  const double span = t.back() - t.front();
  double dt_min = span;
  for (std::size_t i = 1; i < t.size(); ++i)
    dt_min = std::min(dt_min, t[i] - t[i - 1]);
  const double lo = std::log(0.1 * dt_min), hi = std::log(100.0 * span);
  constexpr int grid = 400;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double s = solve_linear(t, y, std::exp(lo + (hi - lo) * k / grid)).sse;
    if (s < best_sse) best_sse = s, best = k;
  }
  const double step = (hi - lo) / grid;
  if (best == grid)
    throw FitError("fit_exponential: no decay within 100x the record length",
                   std::sqrt(best_sse / t.size()));

  double a = lo + step * std::max(best - 1, 0), b = lo + step * (best + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double s) { return solve_linear(t, y, std::exp(s)).sse; };
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && b - a > 1e-10; ++it) {
    if (f1 < f2)
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = f(x1);
    else
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = f(x2);
  }
  const double tau = std::exp(0.5 * (a + b));
  const Linear lin = solve_linear(t, y, tau);

  r.tau = tau;
  r.offset = lin.A;
  // amplitude referred to t = 0, not to the first sample
  r.amplitude = lin.B * std::exp(t.front() / tau);
  r.residual_rms = std::sqrt(lin.sse / t.size());

  const std::size_t n = t.size();
  Eigen::MatrixXd J(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-t[i] / tau);
    J(i, 0) = r.amplitude * t[i] / (tau * tau) * e;
    J(i, 1) = e;
    J(i, 2) = 1.0;
  }
  const double s2 = n > 3 ? lin.sse / (n - 3) : 0.0;
  const Eigen::Matrix3d JtJ = J.transpose() * J;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(JtJ);
  if (lu.isInvertible()) {
    const Eigen::Matrix3d cov = s2 * lu.inverse();
    for (int k = 0; k < 3; ++k) r.variance[k] = cov(k, k);
  } else {
    r.variance.fill(std::numeric_limits<double>::infinity());
  }
  r.degenerate = best == 0 || r.tau <= 2.0 * std::sqrt(r.variance[0]);
  return r;
}

FitResult fit_exponential(const TimeSeries& ts, const std::string& column) {
  return fit_exponential(ts.t(), ts.column(column));
}

double kinetic_invariant(const TimeSeries& ts) {
  const auto& vx = ts.column("v_x_rms");
  const auto& vz = ts.column("v_z_rms");
  if (vx.empty()) return 0.0;
  const double I0 = 2.0 * vx[0] * vx[0] + vz[0] * vz[0];
  if (!(I0 > 0.0)) throw InvalidConfig("v_x_rms", "initial invariant is zero");
  double drift = 0.0;
  for (std::size_t i = 0; i < vx.size(); ++i)
    drift = std::max(drift,
                     std::abs(2.0 * vx[i] * vx[i] + vz[i] * vz[i] - I0) / I0);
  return drift;
}

double phase_space_density(double n_peak, double T, const Constants& c) {
  if (!(n_peak > 0.0)) throw InvalidConfig("n_peak", "must be > 0");
  if (!(T > 0.0)) throw InvalidConfig("T", "must be > 0");
  const double lambda =
      c.hbar * std::sqrt(2.0 * std::numbers::pi / (c.m_Cs * c.k_B * T));
  return n_peak * lambda * lambda * lambda;
}

TemperatureEstimate temperature_estimators(const GasState& state,
                                           const Constants& c) {
  TemperatureEstimate r;
  const std::size_t N = state.particles.size();
  if (N == 0) return r;
  const bool quantized = state.mode == GasMode::quantized_axial;
  for (int a = 0; a < 3; ++a) {
    if (quantized && a == 2) continue;
    double s = 0.0, s2 = 0.0;
    for (const auto& p : state.particles) {
      const double v2 = p.v[a] * p.v[a];
      s += v2;
      s2 += v2 * v2;
    }
    const double mean = s / N;
    const double var = N > 1 ? (s2 - N * mean * mean) / (N - 1) : 0.0;
    r.T[a] = c.m_Cs * mean / c.k_B;
    r.error[a] = c.m_Cs * std::sqrt(std::max(var, 0.0) / N) / c.k_B;
  }
  if (quantized) {
    double s = 0.0, s2 = 0.0;
    for (const auto& p : state.particles) {
      s += p.axial_n;
      s2 += static_cast<double>(p.axial_n) * p.axial_n;
    }
    const double nbar = s / N;
    const double var = N > 1 ? (s2 - N * nbar * nbar) / (N - 1) : 0.0;
    const double w = state.trap.omega_osc;
    r.T[2] = temperature_from_mean_n(nbar, w, c);
    r.axial_from_ladder = true;
    if (nbar > 0.0) {
      // dT/dn from T = hw / (k log(1 + 1/n))
      const double L = std::log1p(1.0 / nbar);
      const double dTdn =
          c.hbar * w / c.k_B / (L * L) / (nbar * (nbar + 1.0));
      r.error[2] = dTdn * std::sqrt(std::max(var, 0.0) / N);
    }
  }
  return r;
}

}  // namespace cs2d
