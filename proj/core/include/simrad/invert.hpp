#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "simrad/grid.hpp"
#include "simrad/sinogram.hpp"

namespace simrad {

/**
 * Finite discretization of SIM(3) for the wavelet reconstruction sum.
 *
 * Scales are 2^{k step} for log2_min <= k step <= log2_max; rotations are the 12
 * icosahedral directions (each mapped from e3) with weight 1/12; translations run
 * over every voxel of the reconstruction grid. A node (b, R, a) carries the Haar
 * weight a^{-4} * h^3 * (1/12) * a ln(2^step).
 */
class GroupLattice {
public:
    GroupLattice(double log2_min, double log2_max, double log2_step, double coarse_step);

    /// Scales {0.5, 1, 2, 4}.
    static GroupLattice coarse();
    /// Half the log-step and one coarse step wider on each side.
    GroupLattice refined() const;

    const std::vector<double>& scales() const { return scales_; }
    const std::vector<Mat3>& rotations() const { return rotations_; }
    double rotation_weight() const { return 1.0 / static_cast<double>(rotations_.size()); }
    double log_step() const { return log2_step_; }

    /// Haar weight of a node at scale a for translation cell volume h^3.
    double node_weight(double a, double h) const;
    std::size_t node_count(const GridSpec& grid) const;

private:
    double log2_min_;
    double log2_max_;
    double log2_step_;
    double coarse_step_;
    std::vector<double> scales_;
    std::vector<Mat3> rotations_;
};

/// The 12 unit vertices of the icosahedron.
std::vector<Vec3> icosahedron_vertices();

/// f = R#( J^2 R f ) with J = |tau| and the half-sphere backprojection.
Volume invert_fbp_plane(const PlaneSinogram& s, const GridSpec& grid);
/// f = R#( J^2 X f ) with J^2 = |nu| / pi.
Volume invert_fbp_line(const LineSinogram& s, const GridSpec& grid);

struct DirectFourierResult {
    Volume volume;
    double coverage = 0.0; ///< fraction of in-band Fourier voxels that received data
};

/**
 * Fills F f on the N^3 Fourier grid from the slice theorem and inverts.
 * Planes: each voxel w reads the 1D spectrum along w/|w| at |w| (interpolated across directions).
 * Lines: each direction contributes to voxels within its angular band, tent-weighted and averaged.
 * Throws InsufficientCoverage if more than 1% of in-band voxels receive nothing.
 */
DirectFourierResult invert_direct_fourier(const PlaneSinogram& s, const GridSpec& grid);
DirectFourierResult invert_direct_fourier(const LineSinogram& s, const GridSpec& grid);

struct WaveletResult {
    Volume volume;
    double coefficient_energy = 0.0; ///< sum w(g) chi(g)^2 |<s, pi_hat(g) Psi>|^2
    std::size_t nodes = 0;
    bool lattice_too_coarse = false; ///< energy departs from ||result||^2 by more than 50%
};

/**
 * Riemann sum of f = int chi(g) <s, pi_hat(g) Psi> pi(g) psi dmu(g) over the lattice,
 * with Psi = J^2 R psi. psi must be admissible and normalized; `grid` is both the
 * translation lattice and the output grid.
 */
WaveletResult invert_wavelet(const PlaneSinogram& s, const Volume& psi, const GroupLattice& lattice,
                             const GridSpec& grid);
WaveletResult invert_wavelet(const LineSinogram& s, const Volume& psi, const GroupLattice& lattice,
                             const GridSpec& grid);

/// Flat key=value block; absent fields are skipped.
struct ReconstructionMetrics {
    std::optional<double> error_l2_rel;
    std::optional<double> energy_ratio;
    std::optional<double> coverage;
    double runtime_ms = 0.0;

    std::string to_text() const;
};

} // namespace simrad
