#include "simrad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "simrad/errors.hpp"
#include "simrad/filter.hpp"
#include "simrad/io.hpp"
#include "simrad/parallel.hpp"
#include "simrad/quasi_regular.hpp"
#include "simrad/xform.hpp"

namespace simrad {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ResidualEntry make_entry(std::string name, double residual, double tol, std::string context = {}) {
    ResidualEntry e;
    e.name = std::move(name);
    e.residual = residual;
    e.tolerance = tol;
    e.pass = residual <= tol;
    e.context = std::move(context);
    return e;
}

std::string describe(const GroupElement& g) {
    const double c = std::clamp(0.5 * (g.R().trace() - 1.0), -1.0, 1.0);
    std::ostringstream os;
    os << "b=(" << format_double(g.b().x()) << "," << format_double(g.b().y()) << ","
       << format_double(g.b().z()) << ") angle_deg=" << format_double(std::acos(c) / kDeg)
       << " a=" << format_double(g.a());
    return os.str();
}

std::string tag(Geometry g) { return g == Geometry::Plane ? "plane" : "line"; }

std::string index_name(std::size_t k) {
    std::string s = std::to_string(k);
    return "g" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Relative residual ||a - b|| / ||ref|| with the sinogram quadrature.
template <class S>
double relative_gap(const S& a, const S& b, double ref) {
    S diff = a;
    for (std::size_t k = 0; k < diff.data().size(); ++k)
        diff.data()[k] -= b.data()[k];
    return ratio_or_zero(norm(diff), ref);
}

template <class S>
S scaled(S s, double f) {
    for (double& x : s.data())
        x *= f;
    return s;
}

std::size_t antipode(const PlaneSinogram& F, std::size_t idx) {
    const auto& g = F.geometry();
    const int nt = g.nt;
    const int k = static_cast<int>(idx % nt);
    const std::size_t d = idx / nt;
    const int i = static_cast<int>(d / g.nphi);
    const int j = static_cast<int>(d % g.nphi);
    return F.index((i + g.ntheta / 2) % g.ntheta, g.nphi - 1 - j, nt - 1 - k);
}

// max |G(xi) - parity * G(-xi)|
double parity_defect(const PlaneSinogram& G, double parity) {
    double worst = 0.0;
    for (std::size_t q = 0; q < G.data().size(); ++q)
        worst = std::max(worst, std::abs(G.data()[q] - parity * G.data()[antipode(G, q)]));
    return worst;
}

double sup(const PlaneSinogram& s) {
    double m = 0.0;
    for (double x : s.data())
        m = std::max(m, std::abs(x));
    return m;
}

// Smooth full-sphere test data with both parities present.
PlaneSinogram synthetic_full_sphere(const PlaneGeometry& base, std::uint64_t seed) {
    PlaneGeometry geom = base;
    geom.full_sphere = true;
    PlaneSinogram F(geom);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    const Vec3 c(U(rng), U(rng), U(rng));
    const Vec3 d(U(rng), U(rng), U(rng));
    const auto& dirs = F.directions();
    for (int i = 0; i < dirs.ntheta(); ++i)
        for (int j = 0; j < dirs.nphi(); ++j) {
            const Vec3& n = dirs.normal(i, j);
            for (int k = 0; k < geom.nt; ++k) {
                const double s = geom.t(k) - c.dot(n);
                F.at(i, j, k) = std::exp(-std::numbers::pi * s * s) * (1.0 + d.dot(n));
            }
        }
    return F;
}

} // namespace

// ResidualReport ------------------------------------------------------------

void ResidualReport::add(ResidualEntry entry) {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), entry,
                               [](const ResidualEntry& a, const ResidualEntry& b) { return a.name < b.name; });
    entries_.insert(it, std::move(entry));
}

void ResidualReport::add(const std::string& name, double residual, double tolerance, std::string context) {
    add(make_entry(name, residual, tolerance, std::move(context)));
}

void ResidualReport::merge(const ResidualReport& other) {
    for (const auto& e : other.entries_)
        add(e);
}

bool ResidualReport::all_pass() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const ResidualEntry& e) { return e.pass; });
}

std::string ResidualReport::to_text() const {
    std::ostringstream os;
    for (const auto& e : entries_) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "CHECK %s residual=%g tol=%g pass=%d", e.name.c_str(), e.residual,
                      e.tolerance, e.pass ? 1 : 0);
        os << buf;
        if (!e.context.empty())
            os << "  # " << e.context;
        os << '\n';
    }
    return os.str();
}

std::string ResidualReport::to_json() const {
    nlohmann::json j;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries_) {
        nlohmann::json item{{"name", e.name}, {"tolerance", e.tolerance}, {"pass", e.pass}, {"context", e.context}};
        if (std::isfinite(e.residual))
            item["residual"] = e.residual;
        else
            item["residual"] = nullptr;
        j["entries"].push_back(std::move(item));
    }
    j["all_pass"] = all_pass();
    return j.dump(2);
}

// Checks --------------------------------------------------------------------

ResidualEntry check_fourier_slice(Geometry geometry, const Volume& v, const Sampling& sampling) {
    const std::string name = "fourier_slice." + tag(geometry);
    if (max_abs(v) == 0.0)
        return make_entry(name, 0.0, tolerance::kFourierSlice, "zero volume");
    const SpectrumSampler spectrum(v);
    const double band = 0.5 / v.h();

    if (geometry == Geometry::Plane) {
        const PlaneSinogram s = radon_plane(v, sampling.plane);
        const auto& dirs = s.directions();
        const auto tau = centered_frequencies(sampling.plane.nt, sampling.plane.dt());
        std::vector<double> num(dirs.count()), den(dirs.count());
        parallel_for(dirs.count(), [&](std::size_t d) {
            const int i = static_cast<int>(d / dirs.nphi());
            const int j = static_cast<int>(d % dirs.nphi());
            const auto got = row_spectrum(s, i, j, 1);
            const auto ref = fourier_slice_plane(spectrum, dirs.theta(i), dirs.phi(j), tau);
            double a = 0.0, b = 0.0;
            for (std::size_t k = 0; k < tau.size(); ++k) {
                if (std::abs(tau[k]) > band)
                    continue;
                a += std::norm(got[k] - ref[k]);
                b += std::norm(ref[k]);
            }
            num[d] = dirs.weight(j) * a;
            den[d] = dirs.weight(j) * b;
        });
        return make_entry(name, std::sqrt(ratio_or_zero(pairwise_sum(num), pairwise_sum(den))),
                          tolerance::kFourierSlice);
    }

    const LineSinogram s = xray(v, sampling.line);
    const auto& dirs = s.directions();
    const auto nu = centered_frequencies(sampling.line.nuv, sampling.line.du());
    std::vector<double> num(dirs.count()), den(dirs.count());
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        const auto got = plane_spectrum(s, i, j, 1);
        const auto ref = fourier_slice_line(spectrum, dirs.theta(i), dirs.phi(j), nu);
        double a = 0.0, b = 0.0;
        for (std::size_t m = 0; m < nu.size(); ++m)
            for (std::size_t q = 0; q < nu.size(); ++q) {
                if (std::hypot(nu[m], nu[q]) > band)
                    continue;
                const std::size_t k = m * nu.size() + q;
                a += std::norm(got[k] - ref[k]);
                b += std::norm(ref[k]);
            }
        num[d] = dirs.weight(j) * a;
        den[d] = dirs.weight(j) * b;
    });
    return make_entry(name, std::sqrt(ratio_or_zero(pairwise_sum(num), pairwise_sum(den))),
                      tolerance::kFourierSlice);
}

std::vector<ResidualEntry> check_intertwining(Geometry geometry, const std::vector<GroupElement>& gs,
                                              const Volume& v, const Sampling& sampling, bool ablate_chi) {
    const CharacterSet chars(geometry);
    const std::string prefix = std::string(ablate_chi ? "intertwining_ablated." : "intertwining.") + tag(geometry);
    std::vector<ResidualEntry> out;

    auto run = [&](const auto& forward, const auto& act) {
        const auto Rf = forward(v);
        const double ref = norm(Rf);
        for (std::size_t k = 0; k < gs.size(); ++k) {
            const GroupElement& g = gs[k];
            bool truncated = false;
            const Volume moved = apply_pi(g, v, Interpolation::CubicBSpline, &truncated);
            const auto lhs = forward(moved);
            const double factor = ablate_chi ? 1.0 : 1.0 / chars.chi(g);
            const auto rhs = scaled(act(g, Rf), factor);
            std::string context = describe(g);
            if (truncated)
                context += " (support left the grid)";
            out.push_back(make_entry(prefix + "." + index_name(k), relative_gap(lhs, rhs, ref),
                                     tolerance::kIntertwining, std::move(context)));
        }
    };

    if (geometry == Geometry::Plane)
        run([&](const Volume& f) { return radon_plane(f, sampling.plane); },
            [](const GroupElement& g, const PlaneSinogram& s) { return apply_pi_hat_plane(g, s); });
    else
        run([&](const Volume& f) { return xray(f, sampling.line); },
            [](const GroupElement& g, const LineSinogram& s) { return apply_pi_hat_line(g, s); });
    return out;
}

ResidualEntry check_intertwining(Geometry geometry, const GroupElement& g, const Volume& v,
                                 const Sampling& sampling, bool ablate_chi) {
    return check_intertwining(geometry, std::vector<GroupElement>{g}, v, sampling, ablate_chi).front();
}

ResidualEntry check_isometry(Geometry geometry, const Volume& v, const Sampling& sampling) {
    const std::string name = "isometry." + tag(geometry);
    const double nv = norm(v);
    if (nv == 0.0)
        return make_entry(name, 0.0, tolerance::kIsometry, "0/0: zero volume, informational pass");
    const MultiplierSpec J = MultiplierSpec::unitarization(geometry);
    double nj = 0.0;
    if (geometry == Geometry::Plane)
        nj = norm(apply_multiplier_plane(radon_plane(v, sampling.plane), J));
    else
        nj = norm(apply_multiplier_line(xray(v, sampling.line), J));
    return make_entry(name, std::abs(nj / nv - 1.0), tolerance::kIsometry,
                      "ratio=" + format_double(nj / nv));
}

ResidualEntry check_fiber_constancy(const Volume& v, int random_planes, std::uint64_t seed) {
    const std::string name = "fiber_constancy.plane";
    if (random_planes < 0)
        throw InvalidArgument("random_planes must be non-negative");
    struct Label {
        double theta, phi, t;
    };
    std::vector<Label> labels{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.5}, {0.0, 0.0, -1.0}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> offset(-2.0, 2.0);
    for (int k = 0; k < random_planes; ++k) {
        const double th = angle(rng);
        const double ph = angle(rng);
        labels.push_back({th, ph, offset(rng)});
    }
    if (max_abs(v) == 0.0)
        return make_entry(name, 0.0, tolerance::kFiber, "zero volume");

    const VolumeSampler f(v, Interpolation::CubicBSpline);
    const double support = support_radius(v);
    std::vector<double> diff(labels.size());
    parallel_for(labels.size(), [&](std::size_t k) {
        const Label& l = labels[k];
        const double direct = plane_integral(f, v.h(), support, l.theta, l.phi, l.t);
        const double dup = plane_integral(f, v.h(), support, l.theta + std::numbers::pi,
                                          std::numbers::pi - l.phi, -l.t);
        diff[k] = std::abs(direct - dup);
    });
    return make_entry(name, *std::max_element(diff.begin(), diff.end()), tolerance::kFiber,
                      std::to_string(labels.size()) + " planes");
}

std::vector<ResidualEntry> check_evenness_subspace(const PlaneSinogram& F, const GroupElement& g) {
    if (!F.geometry().full_sphere)
        throw InvalidArgument("evenness check needs a full-sphere sinogram");
    PlaneSinogram even(F.geometry()), odd(F.geometry());
    for (std::size_t q = 0; q < F.data().size(); ++q) {
        const double a = F.data()[q];
        const double b = F.data()[antipode(F, q)];
        even.data()[q] = 0.5 * (a + b);
        odd.data()[q] = 0.5 * (a - b);
    }
    const PlaneSinogram ge = apply_pi_hat_prime(g, even);
    const PlaneSinogram go = apply_pi_hat_prime(g, odd);
    const std::string context = describe(g);
    const double ne = norm(ge);
    const double no = norm(go);
    return {
        make_entry("evenness.even", ratio_or_zero(parity_defect(ge, 1.0), sup(even)), tolerance::kEvenness, context),
        make_entry("evenness.odd", ratio_or_zero(parity_defect(go, -1.0), sup(odd)), tolerance::kEvenness, context),
        make_entry("evenness.inner", ratio_or_zero(std::abs(inner(ge, go)), ne * no), tolerance::kEvenness,
                   context),
    };
}

std::vector<GroupElement> default_sweep() {
    std::vector<GroupElement> gs;
    for (double a : {0.8, 1.25})
        gs.push_back(GroupElement::dilation(a));
    for (double deg : {15.0, 30.0, 45.0})
        gs.push_back(GroupElement::rotation(rotation_z(deg * kDeg)));
    for (double deg : {15.0, 30.0, 45.0})
        gs.push_back(GroupElement::rotation(rotation_x(deg * kDeg)));
    gs.push_back(GroupElement::translation(Vec3(1.2, 0.0, 0.0)));
    gs.push_back(GroupElement::translation(Vec3(0.0, -0.9, 0.9)));
    gs.push_back(GroupElement::translation(Vec3(0.7, 0.7, 0.7)));
    gs.push_back(GroupElement::translation(Vec3(0.0, 0.0, -1.5)));
    return gs;
}

Volume default_phantom(int n, double h) {
    return gaussian_mixture({{Vec3(0.5, 0.0, 0.0), 0.9, 1.0}, {Vec3(-0.4, 0.3, 0.2), 0.7, 0.6}}, n, h);
}

ResidualReport run_all(const VerifyConfig& config) {
    ResidualReport report;
    if (config.checks.empty())
        return report;
    const Volume phantom = config.phantom ? *config.phantom : default_phantom(config.n, config.h);

    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            report.add(name, std::numeric_limits<double>::infinity(), 0.0, std::string(e.name()) + ": " + e.what());
        }
    };

    for (const auto& check : config.checks) {
        if (check == "fourier_slice" || check == "intertwining" || check == "isometry") {
            for (Geometry geom : config.geometries) {
                const std::string name = check + "." + tag(geom);
                guarded(name, [&] {
                    if (check == "fourier_slice")
                        report.add(check_fourier_slice(geom, phantom, config.sampling));
                    else if (check == "isometry")
                        report.add(check_isometry(geom, phantom, config.sampling));
                    else
                        for (auto& e : check_intertwining(geom, config.sweep, phantom, config.sampling,
                                                          config.ablate_chi))
                            report.add(std::move(e));
                });
            }
        } else if (check == "fiber_constancy") {
            guarded("fiber_constancy.plane", [&] { report.add(check_fiber_constancy(phantom, 16, config.seed)); });
        } else if (check == "evenness") {
            guarded("evenness", [&] {
                const PlaneSinogram F = synthetic_full_sphere(config.sampling.plane, config.seed);
                const GroupElement g(Vec3(0.3, -0.2, 0.4), rotation_axis_angle(Vec3(1.0, 2.0, 3.0), 0.7), 1.25);
                const std::pair<const char*, GroupElement> cases[] = {{".dilation", GroupElement::dilation(1.25)},
                                                                      {".composite", g}};
                for (const auto& [suffix, h] : cases)
                    for (auto e : check_evenness_subspace(F, h)) {
                        e.name += suffix;
                        report.add(std::move(e));
                    }
            });
        } else {
            report.add(check, std::numeric_limits<double>::infinity(), 0.0, "InvalidArgument: unknown check");
        }
    }
    return report;
}

} // namespace simrad
