#include "sclab/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sclab/errors.hpp"
#include "sclab/rng.hpp"

namespace sclab {

std::size_t ColorStringHash::operator()(const ColorString& s) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ s.size();
  for (Color c : s) h = (h ^ c) * 0x100000001b3ULL;
  return static_cast<std::size_t>(mix64(h));
}

ColorString to_colors(std::string_view digits) {
  ColorString out;
  out.reserve(digits.size());
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw InvalidParameter("not a digit string: " + std::string(digits));
    out.push_back(static_cast<Color>(ch - '0'));
  }
  return out;
}

std::string to_text(std::span<const Color> s) {
  bool digits = std::all_of(s.begin(), s.end(), [](Color c) { return c < 10; });
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (digits) {
      out.push_back(static_cast<char>('0' + s[i]));
    } else {
      if (i) out.push_back('.');
      out += std::to_string(s[i]);
    }
  }
  return out;
}

ColorString reversed(std::span<const Color> s) { return ColorString(s.rbegin(), s.rend()); }

ColorString canonical(std::span<const Color> s) {
  ColorString f(s.begin(), s.end());
  ColorString r(s.rbegin(), s.rend());
  return std::min(f, r);
}

ColorString substring(std::span<const Color> s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw OutOfBounds("substring past end");
  return ColorString(s.begin() + static_cast<std::ptrdiff_t>(pos),
                     s.begin() + static_cast<std::ptrdiff_t>(pos + len));
}

Point& Point::operator+=(const Point& o) {
  if (o.dim() != dim()) throw ShapeMismatch("point dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  if (o.dim() != dim()) throw ShapeMismatch("point dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Point operator*(int k, Point a) {
  for (auto& x : a.c_) x *= k;
  return a;
}

int l1_norm(const Point& p) {
  int s = 0;
  for (int x : p.coords()) s += std::abs(x);
  return s;
}

int linf_norm(const Point& p) {
  int s = 0;
  for (int x : p.coords()) s = std::max(s, std::abs(x));
  return s;
}

std::string to_text(const Point& p) {
  std::string out;
  for (int i = 0; i < p.dim(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(p[i]);
  }
  return out;
}

Point parse_point(std::string_view text) {
  std::vector<int> c;
  std::string tok;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, tok, ',')) {
    try {
      c.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ParseError("bad point: " + std::string(text));
    }
  }
  if (c.empty()) throw ParseError("empty point");
  return Point(std::move(c));
}

Point Direction::unit(int dim) const {
  Point p(dim);
  p[axis] = sign;
  return p;
}

std::vector<Direction> Direction::all(int dim) {
  std::vector<Direction> out;
  for (int a = 0; a < dim; ++a) {
    out.push_back({a, 1});
    out.push_back({a, -1});
  }
  return out;
}

Box::Box(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.dim() != hi_.dim() || lo_.dim() < 1) throw InvalidParameter("box needs d >= 1");
  stride_.resize(static_cast<std::size_t>(dim()));
  size_ = 1;
  for (int a = 0; a < dim(); ++a) {
    if (hi_[a] < lo_[a]) throw InvalidParameter("box with hi < lo");
    stride_[static_cast<std::size_t>(a)] = size_;
    size_ *= static_cast<std::size_t>(side(a));
  }
}

Box Box::cube(const Point& center, int radius) {
  if (radius < 0) throw InvalidParameter("negative box radius");
  Point lo = center, hi = center;
  for (int a = 0; a < center.dim(); ++a) {
    lo[a] -= radius;
    hi[a] += radius;
  }
  return Box(lo, hi);
}

bool Box::is_cube() const {
  for (int a = 1; a < dim(); ++a)
    if (side(a) != side(0)) return false;
  return true;
}

Point Box::center() const {
  Point c(dim());
  for (int a = 0; a < dim(); ++a) {
    int s = lo_[a] + hi_[a];
    c[a] = s >= 0 ? s / 2 : -((-s + 1) / 2);
  }
  return c;
}

int Box::radius() const { return (side(0) - 1) / 2; }

bool Box::contains(const Point& p) const {
  if (p.dim() != dim()) return false;
  for (int a = 0; a < dim(); ++a)
    if (p[a] < lo_[a] || p[a] > hi_[a]) return false;
  return true;
}

bool Box::contains(const Box& b) const { return contains(b.lo_) && contains(b.hi_); }

std::size_t Box::index(const Point& p) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim(); ++a)
    idx += static_cast<std::size_t>(p[a] - lo_[a]) * stride_[static_cast<std::size_t>(a)];
  return idx;
}

Point Box::point(std::size_t idx) const {
  Point p(dim());
  for (int a = 0; a < dim(); ++a) {
    auto s = static_cast<std::size_t>(side(a));
    p[a] = lo_[a] + static_cast<int>(idx % s);
    idx /= s;
  }
  return p;
}

std::optional<Box> Box::intersect(const Box& b) const {
  Point lo(dim()), hi(dim());
  for (int a = 0; a < dim(); ++a) {
    lo[a] = std::max(lo_[a], b.lo_[a]);
    hi[a] = std::min(hi_[a], b.hi_[a]);
    if (hi[a] < lo[a]) return std::nullopt;
  }
  return Box(lo, hi);
}

std::string to_text(const Box& b) { return "[" + to_text(b.lo()) + "]..[" + to_text(b.hi()) + "]"; }

Scenery::Scenery(Box box, int kappa, std::vector<Color> colors, std::uint64_t seed)
    : box_(std::move(box)), kappa_(kappa), seed_(seed), colors_(std::move(colors)) {
  if (kappa_ < 1 || kappa_ > 256) throw InvalidParameter("kappa must be in [1, 256]");
  if (colors_.size() != box_.size()) throw ShapeMismatch("color count does not match box");
  for (Color c : colors_)
    if (c >= kappa_) throw InvalidParameter("color out of range");
}

Color Scenery::color(const Point& p) const {
  if (!box_.contains(p)) throw OutOfBounds("point " + to_text(p) + " outside scenery");
  return colors_[box_.index(p)];
}

Scenery generate_scenery(const Box& box, int kappa, std::uint64_t seed) {
  if (kappa < 1 || kappa > 256) throw InvalidParameter("kappa must be in [1, 256]");
  Rng rng(derive_seed(seed, Stream::scenery));
  std::vector<Color> colors(box.size());
  for (auto& c : colors) c = static_cast<Color>(rng.below(static_cast<std::uint64_t>(kappa)));
  return Scenery(box, kappa, std::move(colors), seed);
}

Scenery scenery_from_rows(const std::vector<std::string>& rows, int kappa, const Point& lower_left) {
  if (rows.empty()) throw InvalidParameter("no rows");
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  Box box(lower_left, lower_left + Point{w - 1, h - 1});
  std::vector<Color> colors(box.size());
  for (int r = 0; r < h; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != w) throw ShapeMismatch("ragged rows");
    ColorString row = to_colors(rows[static_cast<std::size_t>(r)]);
    for (int x = 0; x < w; ++x)
      colors[box.index(lower_left + Point{x, h - 1 - r})] = row[static_cast<std::size_t>(x)];
  }
  return Scenery(box, kappa, std::move(colors));
}

Point Anchor::at(int j) const { return start + j * dir.unit(start.dim()); }

Word read_line(const Scenery& s, const Point& start, Direction dir, int len) {
  if (len < 1) throw InvalidParameter("read length must be positive");
  if (dir.axis < 0 || dir.axis >= s.dim() || (dir.sign != 1 && dir.sign != -1))
    throw InvalidParameter("bad direction");
  Anchor a{start, dir};
  if (!s.box().contains(start) || !s.box().contains(a.at(len - 1)))
    throw OutOfBounds("read leaves the scenery box");
  Word w;
  w.letters.reserve(static_cast<std::size_t>(len));
  for (int j = 0; j < len; ++j) w.letters.push_back(s.color(a.at(j)));
  w.anchor = a;
  return w;
}

namespace {

std::vector<Word> enumerate(const Scenery& s, const Box& window, int len, bool both) {
  if (len < 1) throw InvalidParameter("read length must be positive");
  if (!s.box().contains(window)) throw OutOfBounds("window outside scenery");
  std::vector<Word> out;
  for (Direction dir : Direction::all(s.dim())) {
    if (!both && dir.sign < 0) continue;
    if (window.side(dir.axis) < len) continue;
    for (std::size_t i = 0; i < window.size(); ++i) {
      Point p = window.point(i);
      Point end = p + (len - 1) * dir.unit(s.dim());
      if (!window.contains(end)) continue;
      out.push_back(read_line(s, p, dir, len));
    }
  }
  return out;
}

}  // namespace

std::vector<Word> enumerate_words(const Scenery& s, const Box& window, int len) {
  return enumerate(s, window, len, true);
}

std::vector<Word> enumerate_segments(const Scenery& s, const Box& window, int len) {
  return enumerate(s, window, len, false);
}

Isometry::Isometry(std::vector<int> perm, std::vector<int> signs, Point translation)
    : perm_(std::move(perm)), signs_(std::move(signs)), t_(std::move(translation)) {
  const auto d = perm_.size();
  if (signs_.size() != d || static_cast<std::size_t>(t_.dim()) != d) throw ShapeMismatch("isometry parts disagree");
  std::vector<int> sorted = perm_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < d; ++i)
    if (sorted[i] != static_cast<int>(i)) throw InvalidParameter("not a permutation");
  for (int s : signs_)
    if (s != 1 && s != -1) throw InvalidParameter("signs must be +-1");
}

Isometry Isometry::identity(int dim) {
  std::vector<int> p(static_cast<std::size_t>(dim));
  std::iota(p.begin(), p.end(), 0);
  return Isometry(p, std::vector<int>(static_cast<std::size_t>(dim), 1), Point(dim));
}

std::vector<Isometry> Isometry::linear_parts(int dim) {
  std::vector<int> p(static_cast<std::size_t>(dim));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Isometry> out;
  do {
    for (int mask = 0; mask < (1 << dim); ++mask) {
      std::vector<int> s(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) s[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
      out.emplace_back(p, s, Point(dim));
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Point Isometry::apply_linear(const Point& z) const {
  Point out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = signs_[static_cast<std::size_t>(i)] * z[perm_[static_cast<std::size_t>(i)]];
  return out;
}

Point Isometry::apply(const Point& z) const { return apply_linear(z) + t_; }

Box Isometry::apply(const Box& b) const {
  Point a = apply(b.lo()), c = apply(b.hi());
  Point lo(dim()), hi(dim());
  for (int i = 0; i < dim(); ++i) {
    lo[i] = std::min(a[i], c[i]);
    hi[i] = std::max(a[i], c[i]);
  }
  return Box(lo, hi);
}

Isometry Isometry::inverse() const {
  const auto d = perm_.size();
  std::vector<int> inv(d), s(d);
  for (std::size_t i = 0; i < d; ++i) inv[static_cast<std::size_t>(perm_[i])] = static_cast<int>(i);
  for (std::size_t j = 0; j < d; ++j) s[j] = signs_[static_cast<std::size_t>(inv[j])];
  Isometry lin(inv, s, Point(dim()));
  return lin.with_translation(-1 * lin.apply_linear(t_));
}

bool Isometry::is_linear_identity() const {
  for (std::size_t i = 0; i < perm_.size(); ++i)
    if (perm_[i] != static_cast<int>(i) || signs_[i] != 1) return false;
  return true;
}

bool Isometry::is_identity() const { return is_linear_identity() && t_ == Point(dim()); }

Isometry compose(const Isometry& a, const Isometry& b) {
  if (a.dim() != b.dim()) throw ShapeMismatch("isometry dimension mismatch");
  const auto d = static_cast<std::size_t>(a.dim());
  std::vector<int> p(d), s(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto ai = static_cast<std::size_t>(a.perm()[i]);
    p[i] = b.perm()[ai];
    s[i] = a.signs()[i] * b.signs()[ai];
  }
  return Isometry(p, s, a.apply(b.translation()));
}

std::string to_text(const Isometry& g) {
  std::string out = "perm=";
  for (std::size_t i = 0; i < g.perm().size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(g.perm()[i]);
  }
  out += " signs=";
  for (std::size_t i = 0; i < g.signs().size(); ++i) {
    if (i) out.push_back(',');
    out += g.signs()[i] > 0 ? "+" : "-";
  }
  return out + " t=" + to_text(g.translation());
}

PartialScenery::PartialScenery(Box box, int kappa) : box_(std::move(box)), kappa_(kappa), cells_(box_.size(), -1) {
  if (kappa_ < 1 || kappa_ > 256) throw InvalidParameter("kappa must be in [1, 256]");
}

PartialScenery PartialScenery::restrict(const Scenery& s, const Box& box) {
  if (!s.box().contains(box)) throw OutOfBounds("restriction box outside scenery");
  PartialScenery p(box, s.kappa());
  for (std::size_t i = 0; i < box.size(); ++i) p.cells_[i] = s.color(box.point(i));
  return p;
}

bool PartialScenery::defined(const Point& p) const { return box_.contains(p) && cells_[box_.index(p)] >= 0; }

std::optional<Color> PartialScenery::color(const Point& p) const {
  if (!defined(p)) return std::nullopt;
  return static_cast<Color>(cells_[box_.index(p)]);
}

void PartialScenery::set(const Point& p, Color c) {
  if (!box_.contains(p)) throw OutOfBounds("point " + to_text(p) + " outside piece");
  if (c >= kappa_) throw InvalidParameter("color out of range");
  cells_[box_.index(p)] = c;
}

bool PartialScenery::is_total() const {
  return std::all_of(cells_.begin(), cells_.end(), [](std::int16_t v) { return v >= 0; });
}

std::size_t PartialScenery::defined_count() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](std::int16_t v) { return v >= 0; }));
}

PartialScenery apply_isometry(const Isometry& g, const PartialScenery& piece) {
  if (g.dim() != piece.dim()) throw ShapeMismatch("isometry dimension mismatch");
  PartialScenery out(g.apply(piece.box()), piece.kappa());
  for (std::size_t i = 0; i < piece.box().size(); ++i) {
    int v = piece.raw(i);
    if (v >= 0) out.set(g.apply(piece.box().point(i)), static_cast<Color>(v));
  }
  return out;
}

std::optional<Isometry> find_equivalence(const PartialScenery& a, const PartialScenery& b) {
  if (a.dim() != b.dim()) throw ShapeMismatch("dimension mismatch");
  std::vector<int> sa, sb;
  for (int i = 0; i < a.dim(); ++i) {
    sa.push_back(a.box().side(i));
    sb.push_back(b.box().side(i));
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw ShapeMismatch("boxes are not congruent");
  for (const Isometry& lin : Isometry::linear_parts(a.dim())) {
    Box img = lin.apply(a.box());
    bool fits = true;
    for (int i = 0; i < a.dim(); ++i) fits = fits && img.side(i) == b.box().side(i);
    if (!fits) continue;
    Isometry g = lin.with_translation(b.box().lo() - img.lo());
    bool ok = true;
    for (std::size_t i = 0; i < a.box().size() && ok; ++i)
      ok = a.raw(i) == b.raw(b.box().index(g.apply(a.box().point(i))));
    if (ok) return g;
  }
  return std::nullopt;
}

}  // namespace sclab
