#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sclab/lattice.hpp"

namespace sclab {

namespace oracle {
class Access;
}

struct SimLimits {
  std::int64_t max_particles = 1 << 20;
  int horizon = 10;
};

struct TreeNode {
  std::int32_t parent = -1;
  std::int32_t generation = 0;
  Color color = 0;
};

// Colored genealogical tree. Positions are kept for oracles only.
class ObservationTree {
 public:
  int dim() const { return dim_; }
  int kappa() const { return kappa_; }
  double branching() const { return b_; }
  int horizon() const { return horizon_; }
  bool truncated() const { return truncated_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  // Node ids of generation t.
  std::span<const std::int32_t> generation(int t) const;
  std::int64_t population(int t) const { return static_cast<std::int64_t>(generation(t).size()); }
  bool has_positions() const { return !positions_.empty(); }

 private:
  friend class oracle::Access;
  friend ObservationTree simulate_brw(const Scenery&, double, const SimLimits&, std::uint64_t);
  friend ObservationTree read_tree(std::istream&);
  friend void write_tree(std::ostream&, const ObservationTree&, bool);
  friend struct VisitStats visit_statistics(const ObservationTree&, const Box&);
  void index_generations();

  int dim_ = 0;
  int kappa_ = 0;
  double b_ = 0;
  int horizon_ = 0;
  bool truncated_ = false;
  std::vector<TreeNode> nodes_;
  std::vector<Point> positions_;
  std::vector<std::int32_t> by_gen_;
  std::vector<std::size_t> gen_start_;
};

ObservationTree simulate_brw(const Scenery& scenery, double b, const SimLimits& limits, std::uint64_t seed);

double expected_population(double b, int t);

struct VisitStats {
  std::int64_t min_visits = 0;
  double mean_visits = 0;
  std::int64_t unvisited = 0;
  std::vector<std::int64_t> counts;  // indexed by window.index
};

VisitStats visit_statistics(const ObservationTree& tree, const Box& window);

// Header "# d kappa b horizon truncated", then "id parent gen color [pos]".
void write_tree(std::ostream& os, const ObservationTree& tree, bool with_positions);
ObservationTree read_tree(std::istream& is);

}  // namespace sclab
