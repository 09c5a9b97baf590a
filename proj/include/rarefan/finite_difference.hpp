#ifndef RAREFAN_FINITE_DIFFERENCE_HPP
#define RAREFAN_FINITE_DIFFERENCE_HPP

#include "rarefan/grid.hpp"

namespace rarefan {

// Second-order first derivatives on cell-centered data: centered in the
// interior, one-sided three-point at the boundary cells.
ScalarField ddx(const ScalarField& f, const Grid& g);
ScalarField ddy(const ScalarField& f, const Grid& g);

} // namespace rarefan

#endif
