#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sclab/brw.hpp"
#include "sclab/lattice.hpp"
#include "sclab/reconstruct.hpp"

namespace sclab {
namespace oracle {

// The only door to hidden BRW positions.
class Access {
 public:
  static const std::vector<Point>& positions(const ObservationTree& t) { return t.positions_; }
};

class Diamond {
 public:
  Diamond(Point x, Point y);
  const Point& x() const { return x_; }
  const Point& y() const { return y_; }
  bool contains(const Point& z) const;
  std::vector<Point> points() const;

 private:
  Point x_, y_;
  Point c1_, c2_;
  int radius_ = 0;
};

Diamond diamond_of(const Point& x, const Point& y);

struct Violation {
  std::string kind;
  std::vector<Point> points;
  std::string note;
};

struct EventReport {
  std::string name;
  bool pass = true;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // first few only

  void add(Violation v);
  // Builds the record only while fewer than kKept are stored.
  template <class Make>
  void add_lazy(Make&& make) {
    if (violations.size() < kKept) {
      add(make());
    } else {
      pass = false;
      ++violation_count;
    }
  }
  static constexpr std::size_t kKept = 16;
};

EventReport check_diamond_property(const Scenery& s, const Box& word_window, const Box& path_window, int L);
EventReport check_two_path_property(const Scenery& s, const Box& window, int L);
// strict: a segment read in its two orientations counts as a repeat unless it is the
// same read (matters only for palindromes).
EventReport check_word_uniqueness(const Scenery& s, const Box& window, int L, bool strict = false);
EventReport check_patch_uniqueness(const Scenery& s, int n);

struct Placement {
  Point x;
  Isometry iso;
};

std::optional<Placement> verify_reconstruction(const PartialScenery& output, const Scenery& s, int displacement_bound);

// Union-bound estimate of P(word uniqueness fails): sum over unordered pairs of distinct
// reads of kappa^-(number of independent equality constraints), reversal pairs included
// when strict.
double word_uniqueness_union_bound(int dim, const Box& window, int L, int kappa, bool strict = false);

// Ground truth: v and w are read on parallel axis lines at distance 1, aligned letter by letter.
bool true_neighbors(const Scenery& s, const Box& window, const ColorString& v, const ColorString& w);

// Every node sits one step from its parent and carries the scenery color there.
bool tree_consistent(const ObservationTree& t, const Scenery& s, std::string* why = nullptr);

// Some isometry maps every defined cell of piece onto an equal cell of s.
std::optional<Isometry> embeds_in(const PartialScenery& piece, const Scenery& s);

}  // namespace oracle
}  // namespace sclab
