#pragma once

#include <Eigen/Dense>

namespace htsgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// ||x||^p for p in (1, 2].
double norm_p_power(const Vector& x, double p);

bool all_finite(const Vector& x);

/// x - step * g. Every optimizer and every step-aware oracle goes through this
/// so that an oracle can predict the next iterate bit-for-bit.
Vector gradient_step(const Vector& x, double step, const Vector& g);

}  // namespace htsgd
