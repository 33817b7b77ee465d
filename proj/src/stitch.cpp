#include <algorithm>
#include <cmath>
#include <map>

#include "sclab/errors.hpp"
#include "sclab/reconstruct.hpp"

namespace sclab {

namespace {

PartialScenery centered(const PartialScenery& piece, Isometry& placed) {
  placed = Isometry::identity(piece.dim()).with_translation(-1 * piece.box().center());
  return apply_isometry(placed, piece);
}

Box hull(const Box& a, const Box& b) {
  Point lo = a.lo(), hi = a.hi();
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(lo[i], b.lo()[i]);
    hi[i] = std::max(hi[i], b.hi()[i]);
  }
  return Box(lo, hi);
}

// All sub-boxes of side s inside b, in index order of their low corner.
std::vector<Box> sub_boxes(const Box& b, int s) {
  std::vector<Box> out;
  for (int i = 0; i < b.dim(); ++i)
    if (b.side(i) < s) return out;
  Point span(b.dim());
  for (int i = 0; i < b.dim(); ++i) span[i] = b.side(i) - s;
  Box corners(b.lo(), b.lo() + span);
  Point ext(std::vector<int>(static_cast<std::size_t>(b.dim()), s - 1));
  for (std::size_t i = 0; i < corners.size(); ++i) {
    Point lo = corners.point(i);
    out.emplace_back(lo, lo + ext);
  }
  return out;
}

}  // namespace

StitchResult stitch_levels_detailed(const std::vector<LevelPiece>& pieces) {
  if (pieces.empty()) throw InvalidParameter("no pieces to stitch");
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (!pieces[k].piece.is_total()) throw InvalidParameter("stitched pieces must be total");
    if (k && pieces[k].level <= pieces[k - 1].level) throw InvalidParameter("levels must increase");
    if (pieces[k].piece.dim() != pieces[0].piece.dim()) throw ShapeMismatch("pieces differ in dimension");
  }
  StitchResult res;
  Isometry placed;
  res.assembly = centered(pieces[0].piece, placed);
  res.matched.push_back(false);
  res.placements.push_back(placed);
  const int d = pieces[0].piece.dim();
  const auto lin = Isometry::linear_parts(d);

  for (std::size_t k = 1; k < pieces.size(); ++k) {
    const PartialScenery& piece = pieces[k].piece;
    const int s = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(pieces[k].level)) - 1e-12)));
    Box local = Box(Point(d), Point(std::vector<int>(static_cast<std::size_t>(d), s - 1)));
    // Every (sub-box, linear part) of the piece, keyed by its colors in image-local order.
    struct Hit {
      std::size_t u;
      std::size_t g;
      Point image_lo;
    };
    std::map<std::vector<int>, Hit> patches;
    auto ub = sub_boxes(piece.box(), s);
    for (std::size_t u = 0; u < ub.size(); ++u) {
      for (std::size_t g = 0; g < lin.size(); ++g) {
        Box img = lin[g].apply(ub[u]);
        std::vector<int> key(local.size());
        for (std::size_t i = 0; i < ub[u].size(); ++i) {
          Point z = ub[u].point(i);
          key[local.index(lin[g].apply(z) - img.lo())] = piece.raw(piece.box().index(z));
        }
        patches.try_emplace(std::move(key), Hit{u, g, img.lo()});
      }
    }
    std::optional<Isometry> found;
    for (const Box& v : sub_boxes(res.assembly.box(), s)) {
      std::vector<int> key(local.size());
      bool total = true;
      for (std::size_t i = 0; i < local.size() && total; ++i) {
        int c = res.assembly.raw(res.assembly.box().index(v.lo() + local.point(i)));
        total = c >= 0;
        key[i] = c;
      }
      if (!total) continue;
      auto it = patches.find(key);
      if (it == patches.end()) continue;
      found = lin[it->second.g].with_translation(v.lo() - it->second.image_lo);
      break;
    }
    if (!found) {
      res.assembly = centered(piece, placed);
      res.matched.push_back(false);
      res.placements.push_back(placed);
      continue;
    }
    PartialScenery moved = apply_isometry(*found, piece);
    PartialScenery merged(hull(res.assembly.box(), moved.box()), piece.kappa());
    for (const PartialScenery* src : {&res.assembly, &moved})
      for (std::size_t i = 0; i < src->box().size(); ++i)
        if (src->raw(i) >= 0) merged.set(src->box().point(i), static_cast<Color>(src->raw(i)));
    res.assembly = std::move(merged);
    res.matched.push_back(true);
    res.placements.push_back(*found);
  }
  return res;
}

PartialScenery stitch_levels(const std::vector<LevelPiece>& pieces) { return stitch_levels_detailed(pieces).assembly; }

}  // namespace sclab
