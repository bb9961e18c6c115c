#include "cs2d/rabi.hpp"

#include <cmath>
#include <complex>

#include "cs2d/errors.hpp"

namespace cs2d {

namespace {

std::vector<double> thermal_weights(double T, double omega,
                                    const Constants& c) {
  if (!(T > 0.0)) return {1.0};
  const double r = std::exp(-c.hbar * omega / (c.k_B * T));
  std::vector<double> w;
  double p = 1.0 - r;
  while (p > 1e-15 || w.size() < 2) {
    w.push_back(p);
    p *= r;
    if (w.size() > 100000) throw NumericalError("thermal_weights: T too high");
  }
  return w;
}

double signal_at(const std::vector<double>& w, double Omega_R, double t) {
  double s = 0.0;
  for (size_t n = 0; n < w.size(); ++n) {
    const double c = std::cos(std::sqrt(static_cast<double>(n)) * Omega_R *
                              t / 2.0);
    s += w[n] * c * c;
  }
  return s;
}

}  // namespace

std::vector<double> thermal_rabi_signal(double Omega_R, double T,
                                        double omega_osc,
                                        const std::vector<double>& t_grid,
                                        const Constants& c) {
  if (!(T >= 0.0)) throw InvalidConfig("T", "must be >= 0");
  if (!(omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  const auto w = thermal_weights(T, omega_osc, c);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(signal_at(w, Omega_R, t));
  return out;
}

double fit_effective_rabi(double Omega_R, double T, double omega_osc,
                          double window, const Constants& c) {
  if (!(window > 0.0)) throw InvalidConfig("window", "must be > 0");
  if (!(Omega_R > 0.0)) throw InvalidConfig("Omega_R", "must be > 0");
  constexpr int samples = 401;
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = window * i / (samples - 1);
  const auto s = thermal_rabi_signal(Omega_R, T, omega_osc, t, c);

  auto cost = [&](double W) {
    double r = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double d = s[i] - 0.5 * (1.0 + std::cos(W * t[i]));
      r += d * d;
    }
    return r;
  };

  // coarse scan, then golden section on the best bracket
  const double lo = 0.05 * Omega_R, hi = 6.0 * Omega_R;
  constexpr int grid = 1200;
  double best = lo, best_cost = cost(lo);
  for (int i = 1; i <= grid; ++i) {
    const double W = lo + (hi - lo) * i / grid;
    const double cw = cost(W);
    if (cw < best_cost) best = W, best_cost = cw;
  }
  const double step = (hi - lo) / grid;
  double a = best - step, b = best + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * best; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - g * (b - a), f1 = cost(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + g * (b - a), f2 = cost(x2);
    }
  }
  return 0.5 * (a + b);
}

double dephasing_time(double Omega_R, double T, double omega_osc,
                      const Constants& c) {
  if (!(Omega_R > 0.0)) throw InvalidConfig("Omega_R", "must be > 0");
  const auto w = thermal_weights(T, omega_osc, c);
  auto coherence = [&](double t) {
    std::complex<double> z = 0.0;
    for (size_t n = 0; n < w.size(); ++n)
      z += w[n] * std::polar(1.0, std::sqrt(static_cast<double>(n)) *
                                      Omega_R * t);
    return std::abs(z);
  };
  const double target = std::exp(-1.0);
  const double dt = 0.01 / Omega_R;
  double t0 = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double t1 = i * dt;
    if (coherence(t1) <= target) {
      double a = t0, b = t1;
      for (int k = 0; k < 60; ++k) {
        const double m = 0.5 * (a + b);
        (coherence(m) > target ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    t0 = t1;
  }
  return std::nan("");
}

double expected_damping_rate(double Omega_R, double T, double omega_osc,
                             const Constants& c) {
  if (!(T > 0.0)) throw InvalidConfig("T", "must be > 0");
  return std::sqrt(c.hbar * omega_osc / (c.k_B * T)) * Omega_R;
}

}  // namespace cs2d
