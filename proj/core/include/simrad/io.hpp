#pragma once

#include <string>
#include <variant>

#include "simrad/grid.hpp"
#include "simrad/sinogram.hpp"

namespace simrad {

// Volume files: an ASCII header line
//   SIMRAD-VOL v1 N=<int> h=<float> origin=<f,f,f> dtype=f64
// space-padded so that its trailing newline is byte 63 (or the last byte of the
// next multiple of 64 if the fields do not fit), then N^3 little-endian f64, x fastest.
//
// Sinogram files: the same scheme with a 128-byte header
//   SIMRAD-SGM v1 kind=plane ntheta=<int> nphi=<int> nt=<int> tmax=<float> dtype=f64
//   SIMRAD-SGM v1 kind=line ntheta=<int> nphi=<int> nuv=<int> uvmax=<float> dtype=f64
// then samples t fastest (plane) or v then u fastest (line).

void write_volume(const std::string& path, const Volume& v);
/// Throws FileNotFound or FormatError.
Volume read_volume(const std::string& path);

using AnySinogram = std::variant<PlaneSinogram, LineSinogram>;

void write_sinogram(const std::string& path, const PlaneSinogram& s);
void write_sinogram(const std::string& path, const LineSinogram& s);
AnySinogram read_sinogram(const std::string& path);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

} // namespace simrad
