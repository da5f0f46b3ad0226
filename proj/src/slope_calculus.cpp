#include "slopegrowth/slope_calculus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slopegrowth {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kQuarterPi = std::numbers::pi / 4;
}  // namespace

double SlopeVector::norm() const { return std::hypot(x1, x2); }

double SlopeVector::theta() const {
  if (x1 == 0 && x2 == 0)
    throw std::domain_error("theta undefined for the zero vector");
  return std::atan2(x2, x1);
}

SlopeVector h_vec(double gamma) {
  if (gamma < 0 || gamma > kHalfPi)
    throw input_error("gamma outside [0, pi/2]");
  return {std::cos(gamma), std::sin(gamma)};
}

namespace {

void check_tau_args(double t, double beta, double theta) {
  if (!(beta >= 0 && beta < theta && theta <= kHalfPi))
    throw input_error("tau requires 0 <= beta < theta <= pi/2");
  if (t < 0 || t > 1) throw input_error("tau requires t in [0, 1]");
}

}  // namespace

double tau(double t, double beta, double theta) {
  check_tau_args(t, beta, theta);
  if (t == 0) return beta;
  if (t == 1) return theta;
  const double num = t * std::sin(theta) + (1 - t) * std::sin(beta);
  const double den = t * std::cos(theta) + (1 - t) * std::cos(beta);
  return std::atan2(num, den);
}

double tau_prime(double t, double beta, double theta) {
  check_tau_args(t, beta, theta);
  const double c = t * std::cos(theta) + (1 - t) * std::cos(beta);
  const double s = t * std::sin(theta) + (1 - t) * std::sin(beta);
  const double num = (std::sin(theta) - std::sin(beta)) * c +
                     (std::cos(beta) - std::cos(theta)) * s;
  return num / (c * c + s * s);
}

double mixing_parameter(double theta) {
  if (theta < 0 || theta > kHalfPi)
    throw input_error("theta outside [0, pi/2]");
  return std::sin(theta) / (std::sin(theta) + std::cos(theta));
}

double mixing_identity_residual(double theta) {
  const double t = mixing_parameter(theta);
  const double scale = std::hypot(t, 1 - t);
  const double r1 = (1 - t) - scale * std::cos(theta);
  const double r2 = t - scale * std::sin(theta);
  return std::hypot(r1, r2);
}

double second_coordinate_identity_residual(const SlopeVector& x,
                                           const SlopeVector& y, double t) {
  if (t < 0 || t > 1) throw input_error("t must lie in [0, 1]");
  const SlopeVector z{t * x.x1 + (1 - t) * y.x1, t * x.x2 + (1 - t) * y.x2};
  const double lhs = (z.x1 == 0 && z.x2 == 0)
                         ? 0.0
                         : z.norm() * std::sin(z.theta());
  const double rx = (x.x1 == 0 && x.x2 == 0) ? 0.0 : x.norm() * std::sin(x.theta());
  const double ry = (y.x1 == 0 && y.x2 == 0) ? 0.0 : y.norm() * std::sin(y.theta());
  return lhs - (t * rx + (1 - t) * ry);
}

double example51_formula(int n_rank, double theta) {
  if (n_rank < 3) throw input_error("formula needs rank N >= 3");
  if (theta < kQuarterPi || theta > kHalfPi)
    throw std::domain_error("formula is stated on [pi/4, pi/2] only");
  const double log_big = std::log(2.0 * (n_rank - 2) - 1.0);
  return log_big * std::sin(theta) - (log_big - std::log(3.0)) * std::cos(theta);
}

double example41_tan(std::int64_t n, std::int64_t m) {
  if (n < 0 || m < 0) throw input_error("letter counts must be nonnegative");
  if (n + m == 0) throw std::domain_error("tan slope undefined for the identity");
  return static_cast<double>(n + 2 * m) / static_cast<double>(n + m);
}

}  // namespace slopegrowth
