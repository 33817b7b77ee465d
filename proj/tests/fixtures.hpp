#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sclab/lattice.hpp"

namespace fixtures {

// 5x5 grid on [0,4]^2, top row first.
inline const std::vector<std::string> kGrid5 = {"19437", "50761", "43912", "61404", "27803"};

// 17x5 grid on [0,16]x[0,4], top row first. Row y=2 holds 43912|17847|61777 from x=1
// and 47617 from x=9.
inline const std::vector<std::string> kGrid17 = {
    "21943741252278069",
    "75076118258674042",
    "74391217847617774",
    "86440435367519991",
    "22780394372194570",
};

// 5x5 toy scenery centered at the origin, top row (y=2) first.
inline const std::vector<std::string> kToy = {"03333", "01111", "60123", "02222", "04444"};

inline sclab::Scenery grid5() { return sclab::scenery_from_rows(kGrid5, 10); }
inline sclab::Scenery grid17() { return sclab::scenery_from_rows(kGrid17, 10); }
inline sclab::Scenery toy() { return sclab::scenery_from_rows(kToy, 10, {-2, -2}); }

// The 17x5 grid embedded in the bottom rows of a cube; coverage windows use the grid box.
inline std::shared_ptr<const sclab::Scenery> grid17_in_cube() {
  sclab::Scenery g = grid17();
  sclab::Box cube = sclab::Box::cube(sclab::Point{8, 8}, 8);
  std::vector<sclab::Color> colors(cube.size(), 0);
  for (std::size_t i = 0; i < cube.size(); ++i) {
    sclab::Point p = cube.point(i);
    colors[i] = g.box().contains(p) ? g.color(p) : static_cast<sclab::Color>((p[0] * 7 + p[1] * 3) % 10);
  }
  return std::make_shared<const sclab::Scenery>(cube, 10, colors);
}

inline sclab::Box grid17_box() { return sclab::Box(sclab::Point{0, 0}, sclab::Point{16, 4}); }

inline sclab::ColorString dna(const std::string& s) {
  sclab::ColorString out;
  for (char c : s) out.push_back(static_cast<sclab::Color>(std::string("ACGT").find(c)));
  return out;
}

inline sclab::ColorString cs(const std::string& digits) { return sclab::to_colors(digits); }

}  // namespace fixtures
