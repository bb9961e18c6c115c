#include "cs2d/constants.hpp"

#include "cs2d/errors.hpp"

namespace cs2d {

void validate(const Constants& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw InvalidConfig(name, "must be strictly positive");
  };
  positive(c.hbar, "hbar");
  positive(c.k_B, "k_B");
  positive(c.m_Cs, "m_Cs");
  positive(c.lambda_D2, "lambda_D2");
  positive(c.lambda_D1, "lambda_D1");
  positive(c.lambda_YAG, "lambda_YAG");
  positive(c.c_light, "c_light");
}

double recoil_frequency(const Constants& c, double lambda) {
  const double k = kTwoPi / lambda;
  return c.hbar * k * k / (2.0 * c.m_Cs);
}

}  // namespace cs2d
