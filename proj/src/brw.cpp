#include "sclab/brw.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sclab/errors.hpp"
#include "sclab/rng.hpp"

namespace sclab {

std::span<const std::int32_t> ObservationTree::generation(int t) const {
  if (t < 0 || t + 1 >= static_cast<int>(gen_start_.size())) return {};
  auto b = gen_start_[static_cast<std::size_t>(t)], e = gen_start_[static_cast<std::size_t>(t) + 1];
  return std::span<const std::int32_t>(by_gen_.data() + b, e - b);
}

void ObservationTree::index_generations() {
  int maxg = 0;
  for (const auto& n : nodes_) maxg = std::max(maxg, n.generation);
  horizon_ = std::max(horizon_, maxg);
  std::vector<std::size_t> count(static_cast<std::size_t>(horizon_) + 2, 0);
  for (const auto& n : nodes_) ++count[static_cast<std::size_t>(n.generation) + 1];
  gen_start_.assign(count.size(), 0);
  for (std::size_t t = 1; t < count.size(); ++t) gen_start_[t] = gen_start_[t - 1] + count[t];
  by_gen_.assign(nodes_.size(), 0);
  std::vector<std::size_t> fill(gen_start_.begin(), gen_start_.end() - 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    by_gen_[fill[static_cast<std::size_t>(nodes_[i].generation)]++] = static_cast<std::int32_t>(i);
}

ObservationTree simulate_brw(const Scenery& scenery, double b, const SimLimits& limits, std::uint64_t seed) {
  if (!(b >= 0.0 && b <= 1.0)) throw InvalidParameter("branching probability must be in [0, 1]");
  if (limits.max_particles < 1 || limits.horizon < 0) throw InvalidParameter("bad simulation limits");
  const int d = scenery.dim();
  if (!scenery.box().contains(Box::cube(d, limits.horizon)))
    throw OutOfBounds("scenery does not contain K(horizon)");

  ObservationTree tree;
  tree.dim_ = d;
  tree.kappa_ = scenery.kappa();
  tree.b_ = b;
  tree.horizon_ = limits.horizon;
  Rng walk(derive_seed(seed, Stream::walk));
  Rng sub(derive_seed(seed, Stream::subsample));
  const auto dirs = Direction::all(d);

  tree.nodes_.push_back({-1, 0, scenery.color(Point(d))});
  tree.positions_.push_back(Point(d));
  std::vector<std::int32_t> current{0};
  struct Child {
    std::int32_t parent;
    Point pos;
  };
  for (int t = 0; t < limits.horizon; ++t) {
    std::vector<Child> next;
    next.reserve(current.size() * 2);
    for (std::int32_t id : current) {
      int kids = walk.bernoulli(b) ? 2 : 1;
      for (int k = 0; k < kids; ++k) {
        const Direction& dir = dirs[walk.below(dirs.size())];
        next.push_back({id, tree.positions_[static_cast<std::size_t>(id)] + dir.unit(d)});
      }
    }
    if (static_cast<std::int64_t>(next.size()) > limits.max_particles) {
      // Partial Fisher-Yates, then restore birth order.
      std::vector<std::size_t> idx(next.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      const auto keep = static_cast<std::size_t>(limits.max_particles);
      for (std::size_t i = 0; i < keep; ++i) std::swap(idx[i], idx[i + sub.below(idx.size() - i)]);
      idx.resize(keep);
      std::sort(idx.begin(), idx.end());
      std::vector<Child> kept;
      kept.reserve(keep);
      for (auto i : idx) kept.push_back(std::move(next[i]));
      next = std::move(kept);
      tree.truncated_ = true;
    }
    current.clear();
    for (auto& c : next) {
      current.push_back(static_cast<std::int32_t>(tree.nodes_.size()));
      tree.nodes_.push_back({c.parent, t + 1, scenery.color(c.pos)});
      tree.positions_.push_back(std::move(c.pos));
    }
  }
  tree.index_generations();
  return tree;
}

double expected_population(double b, int t) {
  if (!(b >= 0.0 && b <= 1.0) || t < 0) throw InvalidParameter("expected_population needs b in [0,1], t >= 0");
  return std::pow(1.0 + b, t);
}

VisitStats visit_statistics(const ObservationTree& tree, const Box& window) {
  if (!tree.has_positions()) throw InvalidParameter("tree has no positions");
  VisitStats st;
  st.counts.assign(window.size(), 0);
  for (const auto& p : tree.positions_)
    if (window.contains(p)) ++st.counts[window.index(p)];
  st.min_visits = st.counts.empty() ? 0 : *std::min_element(st.counts.begin(), st.counts.end());
  std::int64_t total = 0;
  for (auto c : st.counts) {
    total += c;
    if (c == 0) ++st.unvisited;
  }
  st.mean_visits = st.counts.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(st.counts.size());
  return st;
}

void write_tree(std::ostream& os, const ObservationTree& tree, bool with_positions) {
  if (with_positions && !tree.has_positions()) throw InvalidParameter("tree has no positions to dump");
  os << "# " << tree.dim() << ' ' << tree.kappa() << ' ' << tree.branching() << ' ' << tree.horizon() << ' '
     << (tree.truncated() ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& n = tree.nodes()[i];
    os << i << ' ' << n.parent << ' ' << n.generation << ' ' << static_cast<int>(n.color);
    if (with_positions) os << ' ' << to_text(tree.positions_[i]);
    os << '\n';
  }
}

ObservationTree read_tree(std::istream& is) {
  ObservationTree tree;
  std::string line;
  bool header = false;
  bool any_pos = false, all_pos = true;
  std::vector<Point> pos;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash;
      int trunc = 0;
      if (!(ls >> hash >> tree.dim_ >> tree.kappa_ >> tree.b_ >> tree.horizon_ >> trunc))
        throw ParseError("bad tree header");
      tree.truncated_ = trunc != 0;
      header = true;
      continue;
    }
    long id;
    int parent, gen, color;
    if (!(ls >> id >> parent >> gen >> color)) throw ParseError("bad tree line: " + line);
    if (id != static_cast<long>(tree.nodes_.size())) throw ParseError("node ids must be consecutive");
    if (color < 0 || color > 255) throw ParseError("bad color");
    if (id == 0 ? parent != -1 : (parent < 0 || parent >= id)) throw ParseError("bad parent");
    if (id > 0 && gen != tree.nodes_[static_cast<std::size_t>(parent)].generation + 1)
      throw ParseError("generation must be parent's plus one");
    tree.nodes_.push_back({parent, gen, static_cast<Color>(color)});
    std::string p;
    if (ls >> p) {
      any_pos = true;
      pos.push_back(parse_point(p));
    } else {
      all_pos = false;
    }
  }
  if (!header) throw ParseError("missing tree header");
  if (tree.nodes_.empty()) throw ParseError("empty tree");
  if (any_pos && all_pos) tree.positions_ = std::move(pos);
  tree.index_generations();
  return tree;
}

}  // namespace sclab
