#ifndef RAREFAN_GRID_HPP
#define RAREFAN_GRID_HPP

#include <cstddef>
#include <vector>

namespace rarefan {

// Uniform cell-centered Cartesian grid, dim 1 or 2. In 1D ny = 1 and the
// y metadata is a unit placeholder so cell volumes are dx*dy throughout.
struct Grid {
    int dim = 1;
    int nx = 4;
    int ny = 1;
    double dx = 1.0;
    double dy = 1.0;
    double x0 = 0.0; // left edge of the first cell
    double y0 = 0.0;

    static Grid make_1d(int nx, double x0, double x1);
    static Grid make_2d(int nx, int ny, double x0, double x1, double y0, double y1);

    std::size_t cell_count() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    double xc(int i) const { return x0 + (i + 0.5) * dx; }
    double yc(int j) const { return y0 + (j + 0.5) * dy; }
    double cell_volume() const { return dx * dy; }
    double x_extent() const { return nx * dx; }
    double y_extent() const { return ny * dy; }

    void validate() const;
};

// Scalar field on a grid, row-major (j*nx + i).
using ScalarField = std::vector<double>;

} // namespace rarefan

#endif
