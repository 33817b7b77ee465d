#include "sclab/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sclab/errors.hpp"

namespace sclab {

namespace {

Box enclosing_cube(const Box& b) {
  int side = 0;
  for (int a = 0; a < b.dim(); ++a) side = std::max(side, b.side(a));
  if (side % 2 == 0) ++side;
  return Box(b.lo(), b.lo() + Point(std::vector<int>(static_cast<std::size_t>(b.dim()), side - 1)));
}

// cells: -1 for undefined.
void write_cells(std::ostream& os, const Box& box, int kappa, const std::string& seed,
                 const std::vector<int>& cells) {
  const int d = box.dim();
  os << d << ' ' << kappa << ' ' << to_text(box.center()) << ' ' << box.radius() << ' ' << seed << '\n';
  auto cell = [&](int v) { return v < 0 ? std::string("?") : std::to_string(v); };
  const bool compact = kappa <= 10;
  if (d <= 2) {
    const int h = d == 2 ? box.side(1) : 1;
    for (int r = 0; r < h; ++r) {
      for (int x = 0; x < box.side(0); ++x) {
        Point p = box.lo();
        p[0] += x;
        if (d == 2) p[1] = box.hi()[1] - r;
        if (!compact && x) os << ' ';
        os << cell(cells[box.index(p)]);
      }
      os << '\n';
    }
  } else {
    for (std::size_t i = 0; i < box.size(); ++i) os << to_text(box.point(i)) << ": " << cell(cells[i]) << '\n';
  }
}

struct Parsed {
  Box box;
  int kappa = 0;
  std::string seed;
  std::vector<int> cells;
};

int parse_cell(const std::string& tok, int kappa) {
  if (tok == "?") return -1;
  int v;
  try {
    std::size_t used = 0;
    v = std::stoi(tok, &used);
    if (used != tok.size()) throw ParseError("bad cell");
  } catch (const std::exception&) {
    throw ParseError("bad cell '" + tok + "'");
  }
  if (v < 0 || v >= kappa) throw ParseError("cell color out of range: " + tok);
  return v;
}

Parsed read_cells(std::istream& is) {
  std::string line;
  do {
    if (!std::getline(is, line)) throw ParseError("missing header");
  } while (line.empty() || line[0] == '#');
  std::istringstream hs(line);
  int d, kappa, radius;
  std::string center, seed;
  if (!(hs >> d >> kappa >> center >> radius >> seed)) throw ParseError("bad header: " + line);
  Point c = parse_point(center);
  if (c.dim() != d || d < 1) throw ParseError("center dimension does not match d");
  if (kappa < 1 || kappa > 256) throw ParseError("kappa out of range");
  Parsed out{Box::cube(c, radius), kappa, seed, {}};
  out.cells.assign(out.box.size(), -1);
  std::vector<bool> seen(out.box.size(), false);
  if (d <= 2) {
    const int h = d == 2 ? out.box.side(1) : 1;
    const int w = out.box.side(0);
    for (int r = 0; r < h; ++r) {
      if (!std::getline(is, line)) throw ParseError("missing rows");
      std::vector<std::string> toks;
      if (kappa <= 10) {
        for (char ch : line)
          if (!std::isspace(static_cast<unsigned char>(ch))) toks.emplace_back(1, ch);
      } else {
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
      }
      if (static_cast<int>(toks.size()) != w) throw ParseError("row has wrong width");
      for (int x = 0; x < w; ++x) {
        Point p = out.box.lo();
        p[0] += x;
        if (d == 2) p[1] = out.box.hi()[1] - r;
        out.cells[out.box.index(p)] = parse_cell(toks[static_cast<std::size_t>(x)], kappa);
      }
    }
  } else {
    std::size_t count = 0;
    while (count < out.box.size() && std::getline(is, line)) {
      if (line.empty()) continue;
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'z: color'");
      Point p = parse_point(line.substr(0, colon));
      if (!out.box.contains(p)) throw ParseError("cell outside box");
      std::istringstream vs(line.substr(colon + 1));
      std::string tok;
      vs >> tok;
      auto idx = out.box.index(p);
      if (seen[idx]) throw ParseError("duplicate cell");
      seen[idx] = true;
      out.cells[idx] = parse_cell(tok, kappa);
      ++count;
    }
    if (count != out.box.size()) throw ParseError("missing cells");
  }
  return out;
}

}  // namespace

void write_scenery(std::ostream& os, const Scenery& s) {
  if (!s.box().is_cube() || s.box().side(0) % 2 == 0) throw ShapeMismatch("scenery box must be an odd cube");
  std::vector<int> cells(s.colors().begin(), s.colors().end());
  write_cells(os, s.box(), s.kappa(), std::to_string(s.seed()), cells);
}

Scenery read_scenery(std::istream& is) {
  Parsed p = read_cells(is);
  std::vector<Color> colors;
  colors.reserve(p.cells.size());
  for (int v : p.cells) {
    if (v < 0) throw ParseError("undefined cell in a total scenery");
    colors.push_back(static_cast<Color>(v));
  }
  std::uint64_t seed = 0;
  if (p.seed != "-") {
    try {
      seed = std::stoull(p.seed);
    } catch (const std::exception&) {
      throw ParseError("bad seed");
    }
  }
  return Scenery(p.box, p.kappa, std::move(colors), seed);
}

void write_partial(std::ostream& os, const PartialScenery& p) {
  Box cube = p.box().is_cube() && p.box().side(0) % 2 == 1 ? p.box() : enclosing_cube(p.box());
  std::vector<int> cells(cube.size(), -1);
  for (std::size_t i = 0; i < p.box().size(); ++i) cells[cube.index(p.box().point(i))] = p.raw(i);
  write_cells(os, cube, p.kappa(), "-", cells);
}

PartialScenery read_partial(std::istream& is) {
  Parsed p = read_cells(is);
  PartialScenery out(p.box, p.kappa);
  for (std::size_t i = 0; i < p.cells.size(); ++i) out.set_raw(i, p.cells[i]);
  return out;
}

void save_scenery(const std::string& path, const Scenery& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_scenery(os, s);
}

Scenery load_scenery(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_scenery(is);
}

void save_partial(const std::string& path, const PartialScenery& p) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_partial(os, p);
}

PartialScenery load_partial(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_partial(is);
}

}  // namespace sclab
