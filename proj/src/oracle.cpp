#include "sclab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sclab/errors.hpp"

namespace sclab {
namespace oracle {

namespace {

// Neighbor table of a window: 2d entries per cell, -1 outside.
struct Grid {
  explicit Grid(const Scenery& s, const Box& w) : box(w), deg(2 * s.dim()) {
    const auto dirs = Direction::all(s.dim());
    color.resize(w.size());
    nbr.assign(w.size() * static_cast<std::size_t>(deg), -1);
    for (std::size_t i = 0; i < w.size(); ++i) {
      Point p = w.point(i);
      color[i] = s.color(p);
      for (int k = 0; k < deg; ++k) {
        Point q = p + dirs[static_cast<std::size_t>(k)].unit(s.dim());
        if (w.contains(q)) nbr[i * static_cast<std::size_t>(deg) + static_cast<std::size_t>(k)] = static_cast<std::int32_t>(w.index(q));
      }
    }
  }
  std::int32_t at(std::size_t c, int k) const { return nbr[c * static_cast<std::size_t>(deg) + static_cast<std::size_t>(k)]; }

  Box box;
  int deg;
  std::vector<Color> color;
  std::vector<std::int32_t> nbr;
};

std::vector<Point> to_points(const Box& b, const std::vector<std::int32_t>& cells) {
  std::vector<Point> out;
  for (auto c : cells) out.push_back(b.point(static_cast<std::size_t>(c)));
  return out;
}

// Union-find rank of the equality constraints between two reads.
int constraint_rank(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::size_t, std::size_t> parent;
  auto find = [&](std::size_t x) {
    parent.try_emplace(x, x);
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int rank = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto ra = find(a[j]), rb = find(b[j]);
    if (ra != rb) {
      parent[ra] = rb;
      ++rank;
    }
  }
  return rank;
}

struct Read {
  Point start;
  Direction dir;
  std::vector<std::size_t> cells;  // scenery-box indices along the read
};

std::vector<Read> all_reads(int dim, const Box& window, const Box& frame, int L) {
  std::vector<Read> out;
  for (Direction dir : Direction::all(dim)) {
    if (window.side(dir.axis) < L) continue;
    for (std::size_t i = 0; i < window.size(); ++i) {
      Anchor a{window.point(i), dir};
      if (!window.contains(a.at(L - 1))) continue;
      Read r{a.start, dir, {}};
      for (int j = 0; j < L; ++j) r.cells.push_back(frame.index(a.at(j)));
      out.push_back(std::move(r));
    }
  }
  return out;
}

// Same read: identical cell sequence. Same segment: identical cell set.
bool same_sequence(const Read& a, const Read& b) { return a.cells == b.cells; }
bool same_segment(const Read& a, const Read& b) {
  return a.cells == b.cells || std::equal(a.cells.begin(), a.cells.end(), b.cells.rbegin());
}

// Reversing both reads of a pair gives the same coincidence; keep one of the two.
bool mirror_representative(const Read& a, const Read& b) {
  std::vector<std::size_t> ra(a.cells.rbegin(), a.cells.rend()), rb(b.cells.rbegin(), b.cells.rend());
  return std::minmax(a.cells, b.cells) <= std::minmax(ra, rb);
}

}  // namespace

Diamond::Diamond(Point x, Point y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.dim() != y_.dim()) throw InvalidAnchor("endpoint dimensions differ");
  int axis = -1, differing = 0;
  for (int i = 0; i < x_.dim(); ++i)
    if (x_[i] != y_[i]) {
      axis = i;
      ++differing;
    }
  if (differing != 1) throw InvalidAnchor("diamond endpoints must differ along exactly one axis");
  const int D = std::abs(y_[axis] - x_[axis]);
  const int sign = y_[axis] > x_[axis] ? 1 : -1;
  Direction u{axis, sign};
  if (D % 2 == 0) {
    c1_ = x_ + (D / 2) * u.unit(x_.dim());
    c2_ = c1_;
    radius_ = D / 2;
  } else {
    c1_ = x_ + ((D - 1) / 2) * u.unit(x_.dim());
    c2_ = c1_ + u.unit(x_.dim());
    radius_ = (D - 1) / 2;
  }
}

bool Diamond::contains(const Point& z) const { return l1_norm(z - c1_) <= radius_ || l1_norm(z - c2_) <= radius_; }

std::vector<Point> Diamond::points() const {
  std::vector<Point> out;
  Box around = Box::cube(c1_, radius_ + 1);
  for (std::size_t i = 0; i < around.size(); ++i) {
    Point z = around.point(i);
    if (contains(z)) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Diamond diamond_of(const Point& x, const Point& y) { return Diamond(x, y); }

void EventReport::add(Violation v) {
  pass = false;
  ++violation_count;
  if (violations.size() < kKept) violations.push_back(std::move(v));
}

EventReport check_diamond_property(const Scenery& s, const Box& word_window, const Box& path_window, int L) {
  if (L < 2) throw InvalidParameter("diamond check needs L >= 2");
  if (!path_window.contains(word_window) || !s.box().contains(path_window))
    throw OutOfBounds("need word_window inside path_window inside the scenery");
  EventReport rep{"B3", true, 0, {}};
  Grid g(s, path_window);
  const std::size_t n = g.box.size();
  std::vector<std::vector<std::int32_t>> by_color(static_cast<std::size_t>(s.kappa()));
  for (std::size_t i = 0; i < n; ++i) by_color[g.color[i]].push_back(static_cast<std::int32_t>(i));

  // Path counts per end cell, split by whether the start lies in the diamond.
  std::vector<std::uint64_t> out_cnt(n, 0), in_cnt(n, 0), out_next(n, 0), in_next(n, 0);
  std::vector<char> inside(n, 0), queued(n, 0);
  std::vector<std::int32_t> front, next;
  std::vector<std::int32_t> path(static_cast<std::size_t>(L));

  for (const Word& w : enumerate_segments(s, word_window, L)) {
    Diamond dia(w.anchor->start, w.anchor->at(L - 1));
    const auto& letters = w.letters;
    std::vector<std::int32_t> dia_cells;
    for (const Point& z : dia.points())
      if (g.box.contains(z)) dia_cells.push_back(static_cast<std::int32_t>(g.box.index(z)));
    for (auto c : dia_cells) inside[static_cast<std::size_t>(c)] = 1;

    front = by_color[letters[0]];
    for (auto c : front) (inside[static_cast<std::size_t>(c)] ? in_cnt : out_cnt)[static_cast<std::size_t>(c)] = 1;
    for (int k = 1; k < L && !front.empty(); ++k) {
      next.clear();
      for (auto c : front) {
        const auto cu = static_cast<std::size_t>(c);
        for (int j = 0; j < g.deg; ++j) {
          auto q = g.at(cu, j);
          if (q < 0 || g.color[static_cast<std::size_t>(q)] != letters[static_cast<std::size_t>(k)]) continue;
          const auto qu = static_cast<std::size_t>(q);
          if (!queued[qu]) {
            queued[qu] = 1;
            next.push_back(q);
          }
          out_next[qu] += out_cnt[cu];
          in_next[qu] += in_cnt[cu];
        }
      }
      for (auto c : front) out_cnt[static_cast<std::size_t>(c)] = in_cnt[static_cast<std::size_t>(c)] = 0;
      for (auto c : next) {
        const auto cu = static_cast<std::size_t>(c);
        out_cnt[cu] = out_next[cu];
        in_cnt[cu] = in_next[cu];
        out_next[cu] = in_next[cu] = 0;
        queued[cu] = 0;
      }
      front.swap(next);
    }
    std::uint64_t bad = 0;
    for (auto c : front) {
      const auto cu = static_cast<std::size_t>(c);
      bad += out_cnt[cu] + (inside[cu] ? 0 : in_cnt[cu]);
      out_cnt[cu] = in_cnt[cu] = 0;
    }

    if (bad > 0) {
      rep.pass = false;
      rep.violation_count += bad;
      // Witness paths for the first few violations.
      auto rec = [&](auto&& self, int k) -> void {
        if (rep.violations.size() >= EventReport::kKept) return;
        if (k == L) {
          if (!inside[static_cast<std::size_t>(path.front())] || !inside[static_cast<std::size_t>(path.back())])
            rep.violations.push_back({"path outside diamond", to_points(g.box, path),
                                      "word " + to_text(letters) + " at " + to_text(w.anchor->start)});
          return;
        }
        auto c = static_cast<std::size_t>(path[static_cast<std::size_t>(k) - 1]);
        for (int j = 0; j < g.deg; ++j) {
          auto q = g.at(c, j);
          if (q < 0 || g.color[static_cast<std::size_t>(q)] != letters[static_cast<std::size_t>(k)]) continue;
          path[static_cast<std::size_t>(k)] = q;
          self(self, k + 1);
        }
      };
      for (auto c : by_color[letters[0]]) {
        if (rep.violations.size() >= EventReport::kKept) break;
        path[0] = c;
        rec(rec, 1);
      }
    }
    for (auto c : dia_cells) inside[static_cast<std::size_t>(c)] = 0;
  }
  return rep;
}

EventReport check_two_path_property(const Scenery& s, const Box& window, int L) {
  if (L < 1) throw InvalidParameter("L must be positive");
  if (!s.box().contains(window)) throw OutOfBounds("window outside scenery");
  EventReport rep{"B4", true, 0, {}};
  Grid g(s, window);
  struct Seen {
    ColorString first;
    std::vector<std::int32_t> path;
    bool distinct = false;
  };
  std::vector<std::int32_t> path(static_cast<std::size_t>(L));
  ColorString str(static_cast<std::size_t>(L));
  for (std::size_t x = 0; x < g.box.size(); ++x) {
    std::map<std::int32_t, Seen> by_end;
    auto rec = [&](auto&& self, int k) -> void {
      auto c = path[static_cast<std::size_t>(k) - 1];
      str[static_cast<std::size_t>(k) - 1] = g.color[static_cast<std::size_t>(c)];
      if (k == L) {
        auto [it, fresh] = by_end.try_emplace(c);
        if (fresh) {
          it->second.first = str;
          it->second.path = path;
        } else if (it->second.first != str) {
          it->second.distinct = true;
        }
        return;
      }
      for (int j = 0; j < g.deg; ++j) {
        auto q = g.at(static_cast<std::size_t>(c), j);
        if (q < 0) continue;
        path[static_cast<std::size_t>(k)] = q;
        self(self, k + 1);
      }
    };
    path[0] = static_cast<std::int32_t>(x);
    rec(rec, 1);
    Point px = g.box.point(x);
    for (const auto& [y, seen] : by_end) {
      if (seen.distinct) continue;
      Point d = g.box.point(static_cast<std::size_t>(y)) - px;
      bool straight = l1_norm(d) == L - 1 && linf_norm(d) == L - 1;
      if (straight) continue;
      rep.add({"single observation between endpoints", to_points(g.box, seen.path), to_text(seen.first)});
    }
  }
  return rep;
}

EventReport check_word_uniqueness(const Scenery& s, const Box& window, int L, bool strict) {
  if (L < 1) throw InvalidParameter("L must be positive");
  if (!s.box().contains(window)) throw OutOfBounds("window outside scenery");
  EventReport rep{strict ? "C1-strict" : "C1", true, 0, {}};
  auto reads = all_reads(s.dim(), window, s.box(), L);
  std::unordered_map<ColorString, std::vector<std::size_t>, ColorStringHash> groups;
  for (std::size_t i = 0; i < reads.size(); ++i) {
    ColorString str;
    for (auto c : reads[i].cells) str.push_back(s.color_at(c));
    groups[str].push_back(i);
  }
  std::vector<std::pair<ColorString, std::vector<std::size_t>>> sorted(groups.begin(), groups.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [str, ids] : sorted) {
    if (ids.size() < 2) continue;
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        const Read& ra = reads[ids[a]];
        const Read& rb = reads[ids[b]];
        if (strict ? same_sequence(ra, rb) : same_segment(ra, rb)) continue;
        if (!mirror_representative(ra, rb)) continue;
        rep.add_lazy([&] {
          return Violation{"repeated word", {ra.start, rb.start},
                           to_text(str) + " along axes " + std::to_string(ra.dir.axis) + "/" +
                               std::to_string(rb.dir.axis)};
        });
      }
  }
  return rep;
}

double word_uniqueness_union_bound(int dim, const Box& window, int L, int kappa, bool strict) {
  auto reads = all_reads(dim, window, window, L);
  double total = 0;
  for (std::size_t a = 0; a < reads.size(); ++a)
    for (std::size_t b = a + 1; b < reads.size(); ++b) {
      if (strict ? same_sequence(reads[a], reads[b]) : same_segment(reads[a], reads[b])) continue;
      if (!mirror_representative(reads[a], reads[b])) continue;
      total += std::pow(static_cast<double>(kappa), -constraint_rank(reads[a].cells, reads[b].cells));
    }
  return total;
}

namespace {

// Colors of a side-s patch after a linear part, in the image's local index order.
std::vector<int> patch_key(const Scenery& s, const Box& sub, const Isometry& g, const Box& local) {
  Box img = g.apply(sub);
  std::vector<int> key(local.size());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    Point z = sub.point(i);
    key[local.index(g.apply(z) - img.lo())] = s.color(z);
  }
  return key;
}

}  // namespace

EventReport check_patch_uniqueness(const Scenery& s, int n) {
  if (n < 1) throw InvalidParameter("n must be positive");
  const int d = s.dim();
  Box big = Box::cube(d, 2 * n + 2);
  if (!s.box().contains(big)) throw OutOfBounds("scenery does not contain K(2n+2)");
  EventReport rep{"G", true, 0, {}};
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12)));
  Box local(Point(d), Point(std::vector<int>(static_cast<std::size_t>(d), side - 1)));
  Point span(std::vector<int>(static_cast<std::size_t>(d), big.side(0) - side));
  Box corners(big.lo(), big.lo() + span);
  const auto lin = Isometry::linear_parts(d);
  std::map<std::vector<int>, Point> seen;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    Point lo = corners.point(i);
    Box sub(lo, lo + local.hi());
    std::vector<int> ident = patch_key(s, sub, lin.front(), local);
    std::vector<int> best = ident;
    bool symmetric = false;
    for (std::size_t k = 1; k < lin.size(); ++k) {
      auto key = patch_key(s, sub, lin[k], local);
      if (key == ident) symmetric = true;
      best = std::min(best, key);
    }
    if (symmetric) rep.add({"(ii) patch has a nontrivial self-isometry", {lo}, ""});
    auto [it, fresh] = seen.try_emplace(best, lo);
    if (!fresh) rep.add({"(i) equivalent patches", {it->second, lo}, ""});
  }
  return rep;
}

std::optional<Placement> verify_reconstruction(const PartialScenery& output, const Scenery& s, int bound) {
  if (!output.box().is_cube() || output.box().side(0) % 2 == 0) throw ShapeMismatch("output must be an odd cube");
  if (!output.is_total()) return std::nullopt;
  const int r = output.box().radius();
  const int d = s.dim();
  Box centers = Box::cube(d, std::max(bound, 0));
  std::vector<Point> xs;
  for (std::size_t i = 0; i < centers.size(); ++i) xs.push_back(centers.point(i));
  std::stable_sort(xs.begin(), xs.end(), [](const Point& a, const Point& b) { return linf_norm(a) < linf_norm(b); });
  for (const Point& x : xs) {
    Box bx = Box::cube(x, r);
    if (!s.box().contains(bx)) continue;
    auto g = find_equivalence(output, PartialScenery::restrict(s, bx));
    if (g) return Placement{x, *g};
  }
  return std::nullopt;
}

bool true_neighbors(const Scenery& s, const Box& window, const ColorString& v, const ColorString& w) {
  if (v.size() != w.size() || v.empty()) return false;
  const int M = static_cast<int>(v.size());
  for (const Word& r : enumerate_words(s, window, M)) {
    if (r.letters != v) continue;
    for (Direction u : Direction::all(s.dim())) {
      if (u.axis == r.anchor->dir.axis) continue;
      Point st = r.anchor->start + u.unit(s.dim());
      Anchor a{st, r.anchor->dir};
      if (!window.contains(st) || !window.contains(a.at(M - 1))) continue;
      if (read_line(s, st, r.anchor->dir, M).letters == w) return true;
    }
  }
  return false;
}

bool tree_consistent(const ObservationTree& t, const Scenery& s, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!t.has_positions()) return fail("no positions");
  const auto& pos = Access::positions(t);
  const auto& nodes = t.nodes();
  if (nodes.empty() || nodes[0].parent != -1 || pos[0] != Point(t.dim())) return fail("bad root");
  std::vector<int> kids(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!s.box().contains(pos[i]) || s.color(pos[i]) != nodes[i].color) return fail("color mismatch at node " + std::to_string(i));
    if (i == 0) continue;
    auto p = static_cast<std::size_t>(nodes[i].parent);
    if (l1_norm(pos[i] - pos[p]) != 1) return fail("non-unit step at node " + std::to_string(i));
    if (nodes[i].generation != nodes[p].generation + 1) return fail("generation gap at node " + std::to_string(i));
    ++kids[p];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (kids[i] > 2) return fail("more than two children");
    if (!t.truncated() && nodes[i].generation < t.horizon() && kids[i] == 0) return fail("childless particle");
  }
  return true;
}

std::optional<Isometry> embeds_in(const PartialScenery& piece, const Scenery& s) {
  if (piece.dim() != s.dim()) throw ShapeMismatch("dimension mismatch");
  std::vector<std::size_t> defined;
  for (std::size_t i = 0; i < piece.box().size(); ++i)
    if (piece.raw(i) >= 0) defined.push_back(i);
  for (const Isometry& lin : Isometry::linear_parts(s.dim())) {
    Box img = lin.apply(piece.box());
    Point lo(s.dim()), hi(s.dim());
    bool fits = true;
    for (int a = 0; a < s.dim(); ++a) {
      lo[a] = s.box().lo()[a] - img.lo()[a];
      hi[a] = s.box().hi()[a] - img.hi()[a];
      fits = fits && lo[a] <= hi[a];
    }
    if (!fits) continue;
    Box shifts(lo, hi);
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      Isometry g = lin.with_translation(shifts.point(k));
      bool ok = true;
      for (std::size_t i : defined) {
        if (s.color(g.apply(piece.box().point(i))) != piece.raw(i)) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
  }
  return std::nullopt;
}

}  // namespace oracle
}  // namespace sclab
