#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sclab {

using Color = std::uint8_t;
using ColorString = std::vector<Color>;

struct ColorStringHash {
  std::size_t operator()(const ColorString& s) const noexcept;
};

ColorString to_colors(std::string_view digits);
std::string to_text(std::span<const Color> s);
ColorString reversed(std::span<const Color> s);
// Lexicographic minimum of s and its reversal.
ColorString canonical(std::span<const Color> s);
ColorString substring(std::span<const Color> s, std::size_t pos, std::size_t len);

class Point {
 public:
  Point() = default;
  explicit Point(int dim) : c_(static_cast<std::size_t>(dim), 0) {}
  Point(std::initializer_list<int> c) : c_(c) {}
  explicit Point(std::vector<int> c) : c_(std::move(c)) {}

  int dim() const { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& coords() const { return c_; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(int k, Point a);
  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<int> c_;
};

int l1_norm(const Point& p);
int linf_norm(const Point& p);
std::string to_text(const Point& p);
Point parse_point(std::string_view text);

struct Direction {
  int axis = 0;
  int sign = 1;

  Point unit(int dim) const;
  Direction reversed() const { return {axis, -sign}; }
  friend bool operator==(const Direction&, const Direction&) = default;
  // All 2d unit directions: +e1, -e1, +e2, -e2, ...
  static std::vector<Direction> all(int dim);
};

// Axis-aligned box {lo <= z <= hi}. Points are indexed with axis 0 fastest.
class Box {
 public:
  Box() = default;
  Box(Point lo, Point hi);
  static Box cube(const Point& center, int radius);
  static Box cube(int dim, int radius) { return cube(Point(dim), radius); }

  int dim() const { return lo_.dim(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  int side(int axis) const { return hi_[axis] - lo_[axis] + 1; }
  bool is_cube() const;
  // For a cube with odd side.
  Point center() const;
  int radius() const;

  std::size_t size() const { return size_; }
  bool contains(const Point& p) const;
  bool contains(const Box& b) const;
  std::size_t index(const Point& p) const;
  Point point(std::size_t idx) const;
  std::optional<Box> intersect(const Box& b) const;

  friend bool operator==(const Box& a, const Box& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  Point lo_, hi_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

std::string to_text(const Box& b);

class Scenery {
 public:
  Scenery() = default;
  Scenery(Box box, int kappa, std::vector<Color> colors, std::uint64_t seed = 0);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int kappa() const { return kappa_; }
  std::uint64_t seed() const { return seed_; }
  Color color(const Point& p) const;
  Color color_at(std::size_t idx) const { return colors_[idx]; }
  const std::vector<Color>& colors() const { return colors_; }

 private:
  Box box_;
  int kappa_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Color> colors_;
};

Scenery generate_scenery(const Box& box, int kappa, std::uint64_t seed);
// Builds a d=2 scenery from display rows (top row has the largest y).
Scenery scenery_from_rows(const std::vector<std::string>& rows_top_down, int kappa,
                          const Point& lower_left = {0, 0});

struct Anchor {
  Point start;
  Direction dir;
  Point at(int j) const;
};

struct Word {
  ColorString letters;
  std::optional<Anchor> anchor;
  int size() const { return static_cast<int>(letters.size()); }
};

Word read_line(const Scenery& s, const Point& start, Direction dir, int len);
// Every anchored straight read of length len inside window, in both orientations.
std::vector<Word> enumerate_words(const Scenery& s, const Box& window, int len);
// Reads with positive direction only (one per segment).
std::vector<Word> enumerate_segments(const Scenery& s, const Box& window, int len);

// z -> S P z + t with (P z)_i = z[perm[i]] and S = diag(signs).
class Isometry {
 public:
  Isometry() = default;
  Isometry(std::vector<int> perm, std::vector<int> signs, Point translation);
  static Isometry identity(int dim);
  // The 2^d d! maps fixing the origin.
  static std::vector<Isometry> linear_parts(int dim);

  int dim() const { return static_cast<int>(perm_.size()); }
  Point apply(const Point& z) const;
  Point apply_linear(const Point& z) const;
  Isometry inverse() const;
  bool is_identity() const;
  bool is_linear_identity() const;
  Isometry with_translation(Point t) const { return Isometry(perm_, signs_, std::move(t)); }
  Box apply(const Box& b) const;

  const std::vector<int>& perm() const { return perm_; }
  const std::vector<int>& signs() const { return signs_; }
  const Point& translation() const { return t_; }

  friend bool operator==(const Isometry&, const Isometry&) = default;

 private:
  std::vector<int> perm_, signs_;
  Point t_;
};

// a.compose(b) = a after b.
Isometry compose(const Isometry& a, const Isometry& b);
std::string to_text(const Isometry& g);

// Colors on a box, possibly undefined (-1).
class PartialScenery {
 public:
  PartialScenery() = default;
  PartialScenery(Box box, int kappa);
  static PartialScenery restrict(const Scenery& s, const Box& box);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int kappa() const { return kappa_; }
  bool defined(const Point& p) const;
  std::optional<Color> color(const Point& p) const;
  int raw(std::size_t idx) const { return cells_[idx]; }
  void set(const Point& p, Color c);
  void set_raw(std::size_t idx, int v) { cells_[idx] = static_cast<std::int16_t>(v); }
  bool is_total() const;
  std::size_t defined_count() const;

  friend bool operator==(const PartialScenery&, const PartialScenery&) = default;

 private:
  Box box_;
  int kappa_ = 0;
  std::vector<std::int16_t> cells_;
};

PartialScenery apply_isometry(const Isometry& g, const PartialScenery& piece);
// An isometry mapping a onto b, box center to box center, or nullopt.
std::optional<Isometry> find_equivalence(const PartialScenery& a, const PartialScenery& b);

}  // namespace sclab
