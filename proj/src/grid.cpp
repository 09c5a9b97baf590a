#include "rarefan/grid.hpp"

#include <stdexcept>
#include <string>

namespace rarefan {

Grid Grid::make_1d(int nx, double x0, double x1) {
    Grid g;
    g.dim = 1;
    g.nx = nx;
    g.ny = 1;
    g.x0 = x0;
    g.dx = (x1 - x0) / nx;
    g.y0 = 0.0;
    g.dy = 1.0;
    g.validate();
    return g;
}

Grid Grid::make_2d(int nx, int ny, double x0, double x1, double y0, double y1) {
    Grid g;
    g.dim = 2;
    g.nx = nx;
    g.ny = ny;
    g.x0 = x0;
    g.dx = (x1 - x0) / nx;
    g.y0 = y0;
    g.dy = (y1 - y0) / ny;
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (nx < 4) throw std::invalid_argument("Grid: nx must be >= 4, got " + std::to_string(nx));
    if (dim == 2 && ny < 4)
        throw std::invalid_argument("Grid: ny must be >= 4 in 2D, got " + std::to_string(ny));
    if (dim == 1 && ny != 1) throw std::invalid_argument("Grid: ny must be 1 in 1D");
    if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("Grid: spacing must be > 0");
}

} // namespace rarefan
