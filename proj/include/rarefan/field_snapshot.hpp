#ifndef RAREFAN_FIELD_SNAPSHOT_HPP
#define RAREFAN_FIELD_SNAPSHOT_HPP

#include "rarefan/gas_model.hpp"
#include "rarefan/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace rarefan {

// Conserved variables at a point: mass density and momentum density.
struct ConservedState {
    double rho = 1.0;
    std::array<double, 2> m{0.0, 0.0};
    int dim = 1;
};

ConservedState conserved_from_primitive(const PrimitiveState& s);
PrimitiveState primitive_from_conserved(const ConservedState& c);

// Cell-centered conserved state on a grid at one time instant.
// Storage is one array per component, row-major.
struct FieldSnapshot {
    Grid grid;
    double time = 0.0;
    ScalarField rho;
    ScalarField m1;
    ScalarField m2; // present only when grid.dim == 2

    static FieldSnapshot zeros(const Grid& g, double t);

    ConservedState at(std::size_t idx) const;
    PrimitiveState primitive_at(std::size_t idx) const;
    void set(std::size_t idx, const ConservedState& c);
    void set_primitive(std::size_t idx, const PrimitiveState& s);

    // Throws std::runtime_error naming time and cell index on NaN/Inf.
    void check_finite() const;
};

// Bit-exact binary dump: magic "RFAN", u32 LE {version=1, dim, nx, ny},
// f64 LE {time, dx, dy, origin_x, origin_y}, then rho, m1[, m2] row-major.
void write_snapshot(const FieldSnapshot& snap, const std::string& path);
FieldSnapshot read_snapshot(const std::string& path);

// CSV mode: header "x,y,rho,v1,v2", one row per cell.
void write_snapshot_csv(const FieldSnapshot& snap, const std::string& path);

// Extra gridded channels sharing the snapshot header, with channel names in
// a sidecar JSON manifest next to the data file.
void write_field_dump(const FieldSnapshot& ref, const std::vector<std::string>& names,
                      const std::vector<const ScalarField*>& fields, const std::string& path);
std::vector<ScalarField> read_field_dump(const std::string& path, std::vector<std::string>& names);

} // namespace rarefan

#endif
