#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simrad/grid.hpp"
#include "simrad/sinogram.hpp"

namespace simrad {

struct ResidualEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false; ///< residual <= tolerance
    std::string context;
};

/// Named residuals; kept sorted by name.
class ResidualReport {
public:
    void add(ResidualEntry entry);
    void add(const std::string& name, double residual, double tolerance, std::string context = {});
    void merge(const ResidualReport& other);

    const std::vector<ResidualEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    bool all_pass() const;

    /// One `CHECK <name> residual=<g> tol=<g> pass=<0|1>` line per entry.
    std::string to_text() const;
    /// {"entries": [...], "all_pass": bool}
    std::string to_json() const;

private:
    std::vector<ResidualEntry> entries_;
};

/// Sampling used by the checks that run forward transforms.
struct Sampling {
    PlaneGeometry plane;
    LineGeometry line;
};

namespace tolerance {
inline constexpr double kFourierSlice = 1e-2;
inline constexpr double kIntertwining = 5e-2;
inline constexpr double kIsometry = 2e-2;
inline constexpr double kFiber = 1e-6;
inline constexpr double kEvenness = 1e-6;
} // namespace tolerance

/// Relative L2 gap between the t- (or (u,v)-) spectrum of the sinogram and the 3D spectrum on slices.
ResidualEntry check_fourier_slice(Geometry geometry, const Volume& v, const Sampling& sampling = {});

/**
 * ||R pi(g) f - chi(g)^{-1} pi_hat(g) R f|| / ||R f|| for each g (R f computed once).
 * With `ablate_chi` the chi factor is dropped (negative control).
 */
std::vector<ResidualEntry> check_intertwining(Geometry geometry, const std::vector<GroupElement>& gs,
                                              const Volume& v, const Sampling& sampling = {},
                                              bool ablate_chi = false);
ResidualEntry check_intertwining(Geometry geometry, const GroupElement& g, const Volume& v,
                                 const Sampling& sampling = {}, bool ablate_chi = false);

/// | ||J R v|| / ||v|| - 1 |; a zero volume is an informational pass.
ResidualEntry check_isometry(Geometry geometry, const Volume& v, const Sampling& sampling = {});

/// Plane integrals at (theta, phi, t) and at the duplicate label (theta + pi, pi - phi, -t).
ResidualEntry check_fiber_constancy(const Volume& v, int random_planes = 16, std::uint64_t seed = 1);

/**
 * For a full-sphere sinogram F: split into even and odd parts under (n, t) -> (-n, -t),
 * apply pi_hat'(g) and report evenness, oddness (sup norm relative to the input part)
 * and the normalized inner product of the two images.
 */
std::vector<ResidualEntry> check_evenness_subspace(const PlaneSinogram& F, const GroupElement& g);

/// The twelve elements of the default intertwining sweep.
std::vector<GroupElement> default_sweep();

/// Off-center two-Gaussian mixture used by default.
Volume default_phantom(int n, double h);

struct VerifyConfig {
    std::vector<Geometry> geometries{Geometry::Plane, Geometry::Line};
    /// Any of: fourier_slice, intertwining, isometry, fiber_constancy, evenness.
    std::vector<std::string> checks{"fourier_slice", "intertwining", "isometry", "fiber_constancy",
                                    "evenness"};
    int n = 64;
    double h = 0.15;
    std::optional<Volume> phantom; ///< default_phantom(n, h) when empty
    Sampling sampling;
    std::vector<GroupElement> sweep = default_sweep();
    bool ablate_chi = false;
    std::uint64_t seed = 1;
};

/// Runs every configured check; per-check errors become failing entries.
ResidualReport run_all(const VerifyConfig& config);

} // namespace simrad
