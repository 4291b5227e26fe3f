// simrad: phantoms, forward transforms, filtering, inversion and property checks from the shell.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "simrad/errors.hpp"
#include "simrad/filter.hpp"
#include "simrad/grid.hpp"
#include "simrad/invert.hpp"
#include "simrad/io.hpp"
#include "simrad/parallel.hpp"
#include "simrad/verify.hpp"
#include "simrad/xform.hpp"

namespace {

using namespace simrad;
using Clock = std::chrono::steady_clock;

struct Options {
    std::string in;
    std::string out;
    std::string ref;
    std::string phantom = "gaussian";
    int n = 64;
    double h = 0.15;
    double scale = 1.0;
    std::vector<double> center{0.0, 0.0, 0.0};
    int ntheta = 32;
    int nphi = 32;
    int nt = 129;
    double tmax = 6.0;
    int nuv = 129;
    double uvmax = 6.0;
    std::string interp = "cubic";
    std::optional<double> exponent;
    std::optional<double> gain;
    bool squared = false;
    std::optional<double> window_pass;
    std::optional<double> window_stop;
    double wavelet_scale = 1.1;
    int refine = 0;
    std::vector<std::string> checks;
    std::string geometry = "both";
    bool ablate_chi = false;
    std::string json;
    unsigned threads = 0;
    std::uint64_t seed = 1;
};

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void metric(const std::string& key, double value) { std::cout << key << '=' << format_double(value) << '\n'; }
void metric(const std::string& key, const std::string& value) { std::cout << key << '=' << value << '\n'; }

Interpolation interpolation(const std::string& s) {
    return s == "trilinear" ? Interpolation::Trilinear : Interpolation::CubicBSpline;
}

PlaneGeometry plane_geometry(const Options& o) {
    PlaneGeometry g;
    g.ntheta = o.ntheta;
    g.nphi = o.nphi;
    g.nt = o.nt;
    g.tmax = o.tmax;
    return g;
}

LineGeometry line_geometry(const Options& o) {
    LineGeometry g;
    g.ntheta = o.ntheta;
    g.nphi = o.nphi;
    g.nuv = o.nuv;
    g.uvmax = o.uvmax;
    return g;
}

void report_reconstruction(const Options& o, const Volume& result, ReconstructionMetrics m) {
    if (!o.ref.empty())
        m.error_l2_rel = relative_l2_error(result, read_volume(o.ref), 0.75);
    write_volume(o.out, result);
    std::cout << m.to_text();
}

int cmd_gen(const Options& o) {
    const auto t0 = Clock::now();
    const Vec3 c(o.center[0], o.center[1], o.center[2]);
    Volume v;
    if (o.phantom == "gaussian")
        v = gaussian_phantom(c, o.scale, o.n, o.h);
    else if (o.phantom == "mixture")
        v = default_phantom(o.n, o.h);
    else
        v = normalize_admissible(log_wavelet(o.scale, o.n, o.h));
    write_volume(o.out, v);
    metric("norm", norm(v));
    metric("runtime_ms", elapsed_ms(t0));
    return 0;
}

int cmd_radon(const Options& o) {
    const Volume v = read_volume(o.in);
    const auto t0 = Clock::now();
    const PlaneSinogram s = radon_plane(v, plane_geometry(o), interpolation(o.interp));
    write_sinogram(o.out, s);
    metric("directions", static_cast<double>(s.directions().count()));
    metric("norm", norm(s));
    metric("runtime_ms", elapsed_ms(t0));
    return 0;
}

int cmd_xray(const Options& o) {
    const Volume v = read_volume(o.in);
    const auto t0 = Clock::now();
    const LineSinogram s = xray(v, line_geometry(o), interpolation(o.interp));
    write_sinogram(o.out, s);
    metric("directions", static_cast<double>(s.directions().count()));
    metric("norm", norm(s));
    metric("runtime_ms", elapsed_ms(t0));
    return 0;
}

MultiplierSpec multiplier(const Options& o, Geometry geometry) {
    MultiplierSpec spec = MultiplierSpec::unitarization(geometry);
    if (o.exponent)
        spec.exponent = *o.exponent;
    if (o.gain)
        spec.gain = *o.gain;
    if (o.window_pass || o.window_stop) {
        if (!o.window_pass || !o.window_stop)
            throw InvalidArgument("--window-pass and --window-stop go together");
        spec.window = RaisedCosineWindow{*o.window_pass, *o.window_stop};
    }
    if (o.squared)
        spec = spec.squared();
    spec.validate();
    return spec;
}

int cmd_filter(const Options& o) {
    const AnySinogram s = read_sinogram(o.in);
    const auto t0 = Clock::now();
    double out_norm = 0.0;
    if (const auto* p = std::get_if<PlaneSinogram>(&s)) {
        const PlaneSinogram f = apply_multiplier_plane(*p, multiplier(o, Geometry::Plane));
        write_sinogram(o.out, f);
        out_norm = norm(f);
    } else {
        const LineSinogram f = apply_multiplier_line(std::get<LineSinogram>(s), multiplier(o, Geometry::Line));
        write_sinogram(o.out, f);
        out_norm = norm(f);
    }
    metric("norm", out_norm);
    metric("runtime_ms", elapsed_ms(t0));
    return 0;
}

int cmd_invert_fbp(const Options& o) {
    const AnySinogram s = read_sinogram(o.in);
    const GridSpec grid = GridSpec::centered(o.n, o.h);
    const auto t0 = Clock::now();
    const Volume f = std::visit(
        [&](const auto& sg) {
            if constexpr (std::is_same_v<std::decay_t<decltype(sg)>, PlaneSinogram>)
                return invert_fbp_plane(sg, grid);
            else
                return invert_fbp_line(sg, grid);
        },
        s);
    ReconstructionMetrics m;
    m.runtime_ms = elapsed_ms(t0);
    report_reconstruction(o, f, m);
    return 0;
}

int cmd_invert_fourier(const Options& o) {
    const AnySinogram s = read_sinogram(o.in);
    const GridSpec grid = GridSpec::centered(o.n, o.h);
    const auto t0 = Clock::now();
    const DirectFourierResult r = std::visit([&](const auto& sg) { return invert_direct_fourier(sg, grid); }, s);
    ReconstructionMetrics m;
    m.coverage = r.coverage;
    m.runtime_ms = elapsed_ms(t0);
    report_reconstruction(o, r.volume, m);
    return 0;
}

int cmd_invert_wavelet(const Options& o) {
    const AnySinogram s = read_sinogram(o.in);
    const GridSpec grid = GridSpec::centered(o.n, o.h);
    GroupLattice lattice = GroupLattice::coarse();
    for (int k = 0; k < o.refine; ++k)
        lattice = lattice.refined();
    const Volume psi = normalize_admissible(log_wavelet(o.wavelet_scale, o.n, o.h));
    const auto t0 = Clock::now();
    const WaveletResult r = std::visit([&](const auto& sg) { return invert_wavelet(sg, psi, lattice, grid); }, s);
    ReconstructionMetrics m;
    // against the reference when one is given, otherwise against the reconstruction
    const double nr = o.ref.empty() ? norm(r.volume) : norm(read_volume(o.ref));
    if (nr > 0.0)
        m.energy_ratio = r.coefficient_energy / (nr * nr);
    m.runtime_ms = elapsed_ms(t0);
    report_reconstruction(o, r.volume, m);
    metric("nodes", static_cast<double>(r.nodes));
    if (r.lattice_too_coarse)
        metric("warning", "LatticeTooCoarse");
    return 0;
}

int cmd_verify(const Options& o) {
    VerifyConfig config;
    config.n = o.n;
    config.h = o.h;
    config.seed = o.seed;
    config.ablate_chi = o.ablate_chi;
    config.sampling.plane = plane_geometry(o);
    config.sampling.line = line_geometry(o);
    if (o.geometry == "plane")
        config.geometries = {Geometry::Plane};
    else if (o.geometry == "line")
        config.geometries = {Geometry::Line};
    if (!o.checks.empty())
        config.checks = o.checks;
    if (!o.in.empty())
        config.phantom = read_volume(o.in);
    const auto t0 = Clock::now();
    const ResidualReport report = run_all(config);
    std::cout << report.to_text();
    if (!o.json.empty()) {
        std::ofstream out(o.json, std::ios::trunc);
        if (!out)
            throw FileNotFound("cannot open for writing: " + o.json);
        out << report.to_json() << '\n';
    }
    metric("all_pass", report.all_pass() ? "1" : "0");
    metric("runtime_ms", elapsed_ms(t0));
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"simrad: similitude-group Radon and X-ray transforms"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.add_option("--threads", o.threads, "Worker thread cap (0 = hardware parallelism)");
    app.add_option("--seed", o.seed, "Seed for randomized checks");
    app.fallthrough();

    auto grid_opts = [&](CLI::App* c) {
        c->add_option("--n", o.n, "Grid points per axis")->check(CLI::PositiveNumber);
        c->add_option("--h", o.h, "Grid spacing")->check(CLI::PositiveNumber);
    };
    auto dir_opts = [&](CLI::App* c) {
        c->add_option("--ntheta", o.ntheta, "Azimuth samples")->check(CLI::PositiveNumber);
        c->add_option("--nphi", o.nphi, "Polar samples")->check(CLI::PositiveNumber);
    };
    auto plane_opts = [&](CLI::App* c) {
        dir_opts(c);
        c->add_option("--nt", o.nt, "Offset samples")->check(CLI::PositiveNumber);
        c->add_option("--tmax", o.tmax, "Offset half-range")->check(CLI::PositiveNumber);
    };
    auto line_opts = [&](CLI::App* c) {
        c->add_option("--nuv", o.nuv, "Offset samples per axis")->check(CLI::PositiveNumber);
        c->add_option("--uvmax", o.uvmax, "Offset half-range")->check(CLI::PositiveNumber);
    };
    auto io_opts = [&](CLI::App* c, bool needs_in) {
        auto* in = c->add_option("--in", o.in, "Input file");
        if (needs_in)
            in->required();
        c->add_option("--out", o.out, "Output file")->required();
    };
    const std::vector<std::string> interp_names{"cubic", "trilinear"};

    auto* gen = app.add_subcommand("gen", "Write a phantom volume");
    gen->add_option("--phantom", o.phantom, "gaussian | mixture | log-wavelet")
        ->check(CLI::IsMember({"gaussian", "mixture", "log-wavelet"}));
    gen->add_option("--scale", o.scale, "Gaussian scale or wavelet s")->check(CLI::PositiveNumber);
    gen->add_option("--center", o.center, "Gaussian center x y z")->expected(3);
    grid_opts(gen);
    io_opts(gen, false);

    auto* radon = app.add_subcommand("radon", "Plane-integral transform of a volume");
    plane_opts(radon);
    radon->add_option("--interp", o.interp, "cubic | trilinear")->check(CLI::IsMember(interp_names));
    io_opts(radon, true);

    auto* xr = app.add_subcommand("xray", "Line-integral transform of a volume");
    dir_opts(xr);
    line_opts(xr);
    xr->add_option("--interp", o.interp, "cubic | trilinear")->check(CLI::IsMember(interp_names));
    io_opts(xr, true);

    auto* filt = app.add_subcommand("filter", "Apply a |freq|^p multiplier to a sinogram");
    filt->add_option("--exponent", o.exponent, "Multiplier exponent (default: unitarization)");
    filt->add_option("--gain", o.gain, "Multiplier gain (default: unitarization)")->check(CLI::PositiveNumber);
    filt->add_flag("--squared", o.squared, "Apply the multiplier twice");
    filt->add_option("--window-pass", o.window_pass, "Taper pass frequency")->check(CLI::PositiveNumber);
    filt->add_option("--window-stop", o.window_stop, "Taper stop frequency")->check(CLI::PositiveNumber);
    io_opts(filt, true);

    std::vector<CLI::App*> inverts;
    for (const char* name : {"invert-fbp", "invert-fourier", "invert-wavelet"}) {
        auto* c = app.add_subcommand(name, std::string("Reconstruct a volume (") + name + ")");
        grid_opts(c);
        io_opts(c, true);
        c->add_option("--ref", o.ref, "Reference volume for error_l2_rel");
        inverts.push_back(c);
    }
    inverts[2]->add_option("--wavelet-scale", o.wavelet_scale, "LoG wavelet s")->check(CLI::PositiveNumber);
    inverts[2]->add_option("--refine", o.refine, "Lattice refinements beyond the coarse lattice")
        ->check(CLI::NonNegativeNumber);

    auto* ver = app.add_subcommand("verify", "Run property checks");
    ver->add_option("--check", o.checks, "fourier_slice | intertwining | isometry | fiber_constancy | evenness")
        ->check(CLI::IsMember({"fourier_slice", "intertwining", "isometry", "fiber_constancy", "evenness"}));
    ver->add_option("--in", o.in, "Phantom volume (default: two-Gaussian mixture)");
    ver->add_option("--geometry", o.geometry, "plane | line | both")
        ->check(CLI::IsMember({"plane", "line", "both"}));
    ver->add_flag("--ablate-chi", o.ablate_chi, "Drop the character factor (negative control)");
    ver->add_option("--json", o.json, "Summary file");
    grid_opts(ver);
    plane_opts(ver);
    line_opts(ver);

    try {
        app.parse(argc, argv);
        if (!o.in.empty() && o.in == o.out)
            throw CLI::ValidationError("--in and --out must differ");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_max_threads(o.threads);
    try {
        if (*gen)
            return cmd_gen(o);
        if (*radon)
            return cmd_radon(o);
        if (*xr)
            return cmd_xray(o);
        if (*filt)
            return cmd_filter(o);
        if (*inverts[0])
            return cmd_invert_fbp(o);
        if (*inverts[1])
            return cmd_invert_fourier(o);
        if (*inverts[2])
            return cmd_invert_wavelet(o);
        return cmd_verify(o);
    } catch (const simrad::Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << '\n';
        return 1;
    }
}
