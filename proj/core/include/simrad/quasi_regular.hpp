#pragma once

#include "simrad/sinogram.hpp"

namespace simrad {

/**
 * pi_hat(b, R, a) F(n, t) = a^{-1/2} F(R^T n, (t - n . b) / a).
 * On a half-sphere sinogram R^T n is canonicalized and the sign carried into t;
 * on a full-sphere sinogram this is the action pi_hat' without identification.
 */
PlaneSinogram apply_pi_hat_plane(const GroupElement& g, const PlaneSinogram& s);

/// pi_hat(b, R, a) F(n, p) = a^{-1} F(R^T n, P (a^{-1} R^T (p - b))).
LineSinogram apply_pi_hat_line(const GroupElement& g, const LineSinogram& s);

/// Full-sphere action; throws InvalidArgument on a half-sphere sinogram.
PlaneSinogram apply_pi_hat_prime(const GroupElement& g, const PlaneSinogram& s);

} // namespace simrad
