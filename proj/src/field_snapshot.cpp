#include "rarefan/field_snapshot.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rarefan {

ConservedState conserved_from_primitive(const PrimitiveState& s) {
    validate_state(s);
    ConservedState c;
    c.dim = s.dim;
    c.rho = s.rho;
    c.m = {s.rho * s.v[0], s.dim == 2 ? s.rho * s.v[1] : 0.0};
    return c;
}

PrimitiveState primitive_from_conserved(const ConservedState& c) {
    if (!(c.rho > 0.0) || !std::isfinite(c.rho))
        throw std::domain_error("primitive_from_conserved: rho must be > 0, got " +
                                std::to_string(c.rho));
    PrimitiveState s;
    s.dim = c.dim;
    s.rho = c.rho;
    s.v = {c.m[0] / c.rho, c.dim == 2 ? c.m[1] / c.rho : 0.0};
    return s;
}

FieldSnapshot FieldSnapshot::zeros(const Grid& g, double t) {
    FieldSnapshot snap;
    snap.grid = g;
    snap.time = t;
    snap.rho.assign(g.cell_count(), 0.0);
    snap.m1.assign(g.cell_count(), 0.0);
    if (g.dim == 2) snap.m2.assign(g.cell_count(), 0.0);
    return snap;
}

ConservedState FieldSnapshot::at(std::size_t idx) const {
    ConservedState c;
    c.dim = grid.dim;
    c.rho = rho[idx];
    c.m = {m1[idx], grid.dim == 2 ? m2[idx] : 0.0};
    return c;
}

PrimitiveState FieldSnapshot::primitive_at(std::size_t idx) const {
    return primitive_from_conserved(at(idx));
}

void FieldSnapshot::set(std::size_t idx, const ConservedState& c) {
    rho[idx] = c.rho;
    m1[idx] = c.m[0];
    if (grid.dim == 2) m2[idx] = c.m[1];
}

void FieldSnapshot::set_primitive(std::size_t idx, const PrimitiveState& s) {
    set(idx, conserved_from_primitive(s));
}

void FieldSnapshot::check_finite() const {
    auto scan = [&](const ScalarField& f, const char* name) {
        for (std::size_t k = 0; k < f.size(); ++k)
            if (!std::isfinite(f[k]))
                throw std::runtime_error("non-finite " + std::string(name) + " at t=" +
                                         std::to_string(time) + ", cell " + std::to_string(k));
    };
    scan(rho, "rho");
    scan(m1, "m1");
    if (grid.dim == 2) scan(m2, "m2");
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

void put_field(std::ostream& os, const ScalarField& f) {
    for (double v : f) put_f64(os, v);
}

void get_field(std::istream& is, ScalarField& f, std::size_t n) {
    f.resize(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = get_f64(is);
}

void write_header(std::ostream& os, const FieldSnapshot& snap) {
    os.write("RFAN", 4);
    put_u32(os, 1u);
    put_u32(os, static_cast<std::uint32_t>(snap.grid.dim));
    put_u32(os, static_cast<std::uint32_t>(snap.grid.nx));
    put_u32(os, static_cast<std::uint32_t>(snap.grid.ny));
    put_f64(os, snap.time);
    put_f64(os, snap.grid.dx);
    put_f64(os, snap.grid.dy);
    put_f64(os, snap.grid.x0);
    put_f64(os, snap.grid.y0);
}

FieldSnapshot read_header(std::istream& is, const std::string& path) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RFAN", 4) != 0)
        throw std::runtime_error(path + ": not an RFAN snapshot");
    const std::uint32_t version = get_u32(is);
    if (version != 1u)
        throw std::runtime_error(path + ": unsupported RFAN version " + std::to_string(version));
    FieldSnapshot snap;
    snap.grid.dim = static_cast<int>(get_u32(is));
    snap.grid.nx = static_cast<int>(get_u32(is));
    snap.grid.ny = static_cast<int>(get_u32(is));
    snap.time = get_f64(is);
    snap.grid.dx = get_f64(is);
    snap.grid.dy = get_f64(is);
    snap.grid.x0 = get_f64(is);
    snap.grid.y0 = get_f64(is);
    snap.grid.validate();
    return snap;
}

} // namespace

void write_snapshot(const FieldSnapshot& snap, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(os, snap);
    put_field(os, snap.rho);
    put_field(os, snap.m1);
    if (snap.grid.dim == 2) put_field(os, snap.m2);
    if (!os) throw std::runtime_error("write failed: " + path);
}

FieldSnapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    FieldSnapshot snap = read_header(is, path);
    const std::size_t n = snap.grid.cell_count();
    get_field(is, snap.rho, n);
    get_field(is, snap.m1, n);
    if (snap.grid.dim == 2) get_field(is, snap.m2, n);
    if (!is) throw std::runtime_error("truncated RFAN file: " + path);
    return snap;
}

void write_snapshot_csv(const FieldSnapshot& snap, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("x,y,rho,v1,v2\n", f);
    for (int j = 0; j < snap.grid.ny; ++j) {
        for (int i = 0; i < snap.grid.nx; ++i) {
            const PrimitiveState s = snap.primitive_at(snap.grid.index(i, j));
            std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", snap.grid.xc(i), snap.grid.yc(j),
                         s.rho, s.v[0], snap.grid.dim == 2 ? s.v[1] : 0.0);
        }
    }
    std::fclose(f);
}

void write_field_dump(const FieldSnapshot& ref, const std::vector<std::string>& names,
                      const std::vector<const ScalarField*>& fields, const std::string& path) {
    if (names.size() != fields.size())
        throw std::invalid_argument("write_field_dump: names/fields size mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(os, ref);
    for (const ScalarField* f : fields) {
        if (f->size() != ref.grid.cell_count())
            throw std::invalid_argument("write_field_dump: field size mismatch");
        put_field(os, *f);
    }
    nlohmann::json manifest;
    manifest["channels"] = names;
    manifest["data"] = path;
    std::ofstream ms(path + ".json");
    ms << manifest.dump(2) << "\n";
}

std::vector<ScalarField> read_field_dump(const std::string& path, std::vector<std::string>& names) {
    std::ifstream ms(path + ".json");
    if (!ms) throw std::runtime_error("missing field manifest: " + path + ".json");
    nlohmann::json manifest = nlohmann::json::parse(ms);
    names = manifest.at("channels").get<std::vector<std::string>>();
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    FieldSnapshot hdr = read_header(is, path);
    std::vector<ScalarField> fields(names.size());
    for (auto& f : fields) get_field(is, f, hdr.grid.cell_count());
    if (!is) throw std::runtime_error("truncated field dump: " + path);
    return fields;
}

} // namespace rarefan
