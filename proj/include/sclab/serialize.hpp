#pragma once

#include <iosfwd>
#include <string>

#include "sclab/lattice.hpp"

namespace sclab {

// Text format. Header line: "d kappa center radius seed" (center as "x,y,..").
// d <= 2: one line per row, top row (largest y) first; cells are digits when
// kappa <= 10, otherwise space separated numbers. d >= 3: one "z: color" line per cell.
// Undefined cells of a partial piece are written as '?'; its seed field is '-'.
// Non-cube pieces are padded with '?' to their enclosing cube.
void write_scenery(std::ostream& os, const Scenery& s);
Scenery read_scenery(std::istream& is);
void write_partial(std::ostream& os, const PartialScenery& p);
PartialScenery read_partial(std::istream& is);

void save_scenery(const std::string& path, const Scenery& s);
Scenery load_scenery(const std::string& path);
void save_partial(const std::string& path, const PartialScenery& p);
PartialScenery load_partial(const std::string& path);

}  // namespace sclab
