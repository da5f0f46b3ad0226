#ifndef SLOPEGROWTH_SLOPE_CALCULUS_HPP
#define SLOPEGROWTH_SLOPE_CALCULUS_HPP

#include <cstdint>

#include "slopegrowth/errors.hpp"

namespace slopegrowth {

// A nonnegative direction vector with its polar data.
struct SlopeVector {
  double x1 = 0;
  double x2 = 0;

  double norm() const;
  // arctan(x2/x1); pi/2 on the x2 axis, 0 on the x1 axis.
  double theta() const;
};

// H_gamma = (cos gamma, sin gamma), unit slope vector.
SlopeVector h_vec(double gamma);

// Interpolated angle between beta and theta along the chord of unit vectors:
// tau(0) = beta, tau(1) = theta, strictly increasing on [0, 1].
double tau(double t, double beta, double theta);
// Closed-form derivative of tau; positive on [0, 1].
double tau_prime(double t, double beta, double theta);

// t = sin(theta) / (sin(theta) + cos(theta)); the unique mixing weight with
// t*H_{pi/2} + (1-t)*H_0 = sqrt(t^2 + (1-t)^2) * H_theta.
double mixing_parameter(double theta);
// Norm of the defect in the identity above; zero up to rounding.
double mixing_identity_residual(double theta);

// Residual of the linear-second-coordinate identity
// ||tx+(1-t)y|| sin(theta(tx+(1-t)y)) = t||x||sin(theta(x)) + (1-t)||y||sin(theta(y));
// both sides equal the second coordinate of tx+(1-t)y, so this is 0 up to
// rounding.
double second_coordinate_identity_residual(const SlopeVector& x,
                                           const SlopeVector& y, double t);

// Closed-form rate of the rank-N counterexample family on [pi/4, pi/2]:
// log(2(N-2)-1) sin(theta) - (log(2(N-2)-1) - log 3) cos(theta).
double example51_formula(int n_rank, double theta);

// tan of the slope of an element with n mixed letters and m doubled letters:
// (n + 2m) / (n + m), always in [1, 2].
double example41_tan(std::int64_t n, std::int64_t m);

}  // namespace slopegrowth

#endif
