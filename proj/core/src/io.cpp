#include "simrad/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "simrad/errors.hpp"

namespace simrad {

namespace {

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

std::string padded_header(const std::string& fields, std::size_t block) {
    std::size_t size = block;
    while (size < fields.size() + 1)
        size += 64;
    std::string line = fields;
    line.resize(size - 1, ' ');
    line.push_back('\n');
    return line;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FileNotFound("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFound("cannot open: " + path);
    return in;
}

struct Header {
    std::string magic;
    std::map<std::string, std::string> fields;

    const std::string& get(const std::string& key) const {
        auto it = fields.find(key);
        if (it == fields.end())
            throw FormatError("header is missing '" + key + "'");
        return it->second;
    }
};

Header read_header(std::istream& in, const std::string& magic, std::size_t block) {
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("empty file");
    if ((line.size() + 1) % 64 != 0 || line.size() + 1 < block)
        throw FormatError("header is not padded to the expected size");
    std::istringstream words(line);
    std::string word;
    words >> word;
    if (word != magic)
        throw FormatError("unexpected magic '" + word + "'");
    words >> word;
    if (word != "v1")
        throw FormatError("unsupported version '" + word + "'");
    Header h{magic, {}};
    while (words >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos)
            throw FormatError("malformed header field '" + word + "'");
        h.fields[word.substr(0, eq)] = word.substr(eq + 1);
    }
    if (h.get("dtype") != "f64")
        throw FormatError("only dtype=f64 is supported");
    return h;
}

double parse_double(const std::string& s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError("bad number '" + s + "'");
    return x;
}

int parse_int(const std::string& s) {
    int x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError("bad integer '" + s + "'");
    return x;
}

void write_payload(std::ostream& out, const std::vector<double>& data) {
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out)
        throw FormatError("write failed");
}

void read_payload(std::istream& in, std::vector<double>& data) {
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double)))
        throw FormatError("file is truncated");
    char extra;
    if (in.read(&extra, 1))
        throw FormatError("trailing bytes after payload");
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

void write_volume(const std::string& path, const Volume& v) {
    const Vec3& o = v.grid().origin;
    const std::string fields = "SIMRAD-VOL v1 N=" + std::to_string(v.n()) + " h=" +
                               format_double(v.h()) + " origin=" + format_double(o.x()) + "," +
                               format_double(o.y()) + "," + format_double(o.z()) + " dtype=f64";
    auto out = open_out(path);
    out << padded_header(fields, 64);
    write_payload(out, v.data());
}

Volume read_volume(const std::string& path) {
    auto in = open_in(path);
    const Header h = read_header(in, "SIMRAD-VOL", 64);
    GridSpec grid;
    grid.n = parse_int(h.get("N"));
    grid.h = parse_double(h.get("h"));
    const std::string& origin = h.get("origin");
    const auto c1 = origin.find(',');
    const auto c2 = origin.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw FormatError("origin needs three components");
    grid.origin = Vec3(parse_double(origin.substr(0, c1)), parse_double(origin.substr(c1 + 1, c2 - c1 - 1)),
                       parse_double(origin.substr(c2 + 1)));
    try {
        grid.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    std::vector<double> data(grid.size());
    read_payload(in, data);
    return Volume(grid, std::move(data));
}

void write_sinogram(const std::string& path, const PlaneSinogram& s) {
    const auto& g = s.geometry();
    if (g.full_sphere)
        throw InvalidArgument("full-sphere sinograms have no file format");
    const std::string fields = "SIMRAD-SGM v1 kind=plane ntheta=" + std::to_string(g.ntheta) +
                               " nphi=" + std::to_string(g.nphi) + " nt=" + std::to_string(g.nt) +
                               " tmax=" + format_double(g.tmax) + " dtype=f64";
    auto out = open_out(path);
    out << padded_header(fields, 128);
    write_payload(out, s.data());
}

void write_sinogram(const std::string& path, const LineSinogram& s) {
    const auto& g = s.geometry();
    const std::string fields = "SIMRAD-SGM v1 kind=line ntheta=" + std::to_string(g.ntheta) +
                               " nphi=" + std::to_string(g.nphi) + " nuv=" + std::to_string(g.nuv) +
                               " uvmax=" + format_double(g.uvmax) + " dtype=f64";
    auto out = open_out(path);
    out << padded_header(fields, 128);
    write_payload(out, s.data());
}

AnySinogram read_sinogram(const std::string& path) {
    auto in = open_in(path);
    const Header h = read_header(in, "SIMRAD-SGM", 128);
    const std::string& kind = h.get("kind");
    try {
        if (kind == "plane") {
            PlaneGeometry g;
            g.ntheta = parse_int(h.get("ntheta"));
            g.nphi = parse_int(h.get("nphi"));
            g.nt = parse_int(h.get("nt"));
            g.tmax = parse_double(h.get("tmax"));
            PlaneSinogram s(g);
            read_payload(in, s.data());
            return s;
        }
        if (kind == "line") {
            LineGeometry g;
            g.ntheta = parse_int(h.get("ntheta"));
            g.nphi = parse_int(h.get("nphi"));
            g.nuv = parse_int(h.get("nuv"));
            g.uvmax = parse_double(h.get("uvmax"));
            LineSinogram s(g);
            read_payload(in, s.data());
            return s;
        }
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    throw FormatError("unknown sinogram kind '" + kind + "'");
}

} // namespace simrad
