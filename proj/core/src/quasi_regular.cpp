#include "simrad/quasi_regular.hpp"

#include <cmath>

#include "simrad/errors.hpp"
#include "simrad/parallel.hpp"

namespace simrad {

PlaneSinogram apply_pi_hat_plane(const GroupElement& g, const PlaneSinogram& s) {
    const auto& geom = s.geometry();
    const auto& dirs = s.directions();
    const Mat3 Rt = g.R().transpose();
    const double amplitude = 1.0 / std::sqrt(g.a());
    PlaneSinogram out(geom);
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        const Vec3& n = dirs.normal(i, j);
        const Vec3 u = Rt * n;
        const double shift = n.dot(g.b());
        const auto stencil = dirs.stencil(u);
        double* row = out.row(i, j);
        for (int k = 0; k < geom.nt; ++k) {
            const double t = (geom.t(k) - shift) / g.a();
            double v = 0.0;
            for (const auto& nb : stencil)
                if (nb.weight != 0.0)
                    v += nb.weight * s.sample_row(nb.i, nb.j, nb.sign * t);
            row[k] = amplitude * v;
        }
    });
    return out;
}

LineSinogram apply_pi_hat_line(const GroupElement& g, const LineSinogram& s) {
    const auto& geom = s.geometry();
    const auto& dirs = s.directions();
    const Mat3 Rt = g.R().transpose();
    const double amplitude = 1.0 / g.a();
    LineSinogram out(geom);
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        const Mat3& R = dirs.rotation(i, j);
        const Vec3 u = Rt * R.col(2);
        const auto stencil = dirs.stencil(u);
        double* plane = out.plane(i, j);
        for (int m = 0; m < geom.nuv; ++m)
            for (int q = 0; q < geom.nuv; ++q) {
                const Vec3 p = geom.u(m) * R.col(0) + geom.u(q) * R.col(1);
                const Vec3 x = Rt * (p - g.b()) / g.a();
                double v = 0.0;
                for (const auto& nb : stencil) {
                    if (nb.weight == 0.0)
                        continue;
                    const Mat3& Rk = dirs.rotation(nb.i, nb.j);
                    v += nb.weight * s.sample_plane(nb.i, nb.j, x.dot(Rk.col(0)), x.dot(Rk.col(1)));
                }
                plane[static_cast<std::size_t>(m) * geom.nuv + q] = amplitude * v;
            }
    });
    return out;
}

PlaneSinogram apply_pi_hat_prime(const GroupElement& g, const PlaneSinogram& s) {
    if (!s.geometry().full_sphere)
        throw InvalidArgument("pi_hat' acts on full-sphere sinograms");
    return apply_pi_hat_plane(g, s);
}

} // namespace simrad
