#pragma once

#include <optional>

#include "simrad/grid.hpp"
#include "simrad/sinogram.hpp"

namespace simrad {

enum class DcPolicy { Zero };

/// Raised-cosine taper: 1 below `pass`, cosine roll-off to 0 at `stop` (frequencies in cycles).
struct RaisedCosineWindow {
    double pass;
    double stop;
    double operator()(double freq) const;
};

/**
 * Fourier multiplier gain * |freq|^exponent on the offset variable of a sinogram
 * (|tau| in 1D for planes, |nu| in 2D for lines).
 */
struct MultiplierSpec {
    double exponent = 1.0;
    double gain = 1.0;
    DcPolicy dc_policy = DcPolicy::Zero;
    std::optional<RaisedCosineWindow> window;
    double window_power = 1.0; ///< taper enters as window^window_power

    /// |tau|: unitarizes the plane transform.
    static MultiplierSpec plane_unitarization();
    /// pi^{-1/2} |nu|^{1/2}: unitarizes the X-ray transform.
    static MultiplierSpec line_unitarization();
    static MultiplierSpec unitarization(Geometry geometry);

    /// The operator applied twice.
    MultiplierSpec squared() const;

    void validate() const;
    double symbol(double freq) const;
};

/// Periodic DFT along t of each direction, multiply, inverse. No padding, so compositions are exact.
PlaneSinogram apply_multiplier_plane(const PlaneSinogram& s, const MultiplierSpec& spec);
/// Periodic 2D DFT over (u, v) of each direction, multiply, inverse.
LineSinogram apply_multiplier_line(const LineSinogram& s, const MultiplierSpec& spec);

/**
 * || pi_hat(g) J pi_hat(g)^{-1} s - zeta(g) J s || / || J s || with zeta(g) = a^exponent,
 * which for the unitarizing multipliers is chi(g)^{-1}.
 */
double check_semi_invariance(const MultiplierSpec& spec, const GroupElement& g,
                             const PlaneSinogram& s);
double check_semi_invariance(const MultiplierSpec& spec, const GroupElement& g,
                             const LineSinogram& s);

/**
 * C_psi = (1 / 4 pi) int |F psi(w)|^2 |w|^{-3} dw, the reproducing constant for SIM(3)
 * with rotations of total mass 1. Throws NotAdmissible if |F psi(0)| > 1e-8.
 */
double admissibility_constant(const Volume& psi, int pad = 2);

/// psi / sqrt(C_psi).
Volume normalize_admissible(const Volume& psi, int pad = 2);

} // namespace simrad
