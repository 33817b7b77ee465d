#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "sclab/errors.hpp"
#include "sclab/observations.hpp"

namespace sclab {

namespace {

using Cells = std::vector<std::int32_t>;

void sort_unique(Cells& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
}

// Dense ids for equal-length strings.
class Interner {
 public:
  int id(const ColorString& s) {
    auto [it, fresh] = ids_.try_emplace(s, static_cast<int>(strings_.size()));
    if (fresh) strings_.push_back(s);
    return it->second;
  }
  const ColorString& str(int id) const { return strings_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return strings_.size(); }

 private:
  std::unordered_map<ColorString, int, ColorStringHash> ids_;
  std::vector<ColorString> strings_;
};

constexpr int kNone = -1;
constexpr int kMulti = -2;

int merge_state(int a, int b) {
  if (a == kNone) return b;
  if (b == kNone) return a;
  if (a == kMulti || b == kMulti || a != b) return kMulti;
  return a;
}

}  // namespace

CoverageSource::CoverageSource(std::shared_ptr<const Scenery> scenery, const Box& window, int max_path_len)
    : scenery_(std::move(scenery)), window_(window), max_len_(max_path_len) {
  if (!scenery_) throw InvalidParameter("null scenery");
  if (!scenery_->box().contains(window_)) throw OutOfBounds("coverage window outside scenery");
  if (max_len_ < 1) throw InvalidParameter("max_path_len must be positive");
  const int d = scenery_->dim();
  deg_ = 2 * d;
  const auto dirs = Direction::all(d);
  color_.resize(window_.size());
  nbr_.assign(window_.size() * static_cast<std::size_t>(deg_), -1);
  for (std::size_t i = 0; i < window_.size(); ++i) {
    Point p = window_.point(i);
    color_[i] = scenery_->color(p);
    for (int k = 0; k < deg_; ++k) {
      Point q = p + dirs[static_cast<std::size_t>(k)].unit(d);
      if (window_.contains(q)) nbr_[i * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(k)] =
          static_cast<std::int32_t>(window_.index(q));
    }
  }
  by_color_.resize(static_cast<std::size_t>(scenery_->kappa()));
  for (std::size_t i = 0; i < color_.size(); ++i) by_color_[color_[i]].push_back(static_cast<std::int32_t>(i));
}

std::vector<std::int32_t> CoverageSource::end_cells(std::span<const Color> s) const {
  if (s[0] >= by_color_.size()) return {};
  Cells cur = by_color_[s[0]], next;
  std::vector<char> seen(color_.size(), 0);
  for (std::size_t k = 1; k < s.size() && !cur.empty(); ++k) {
    next.clear();
    for (auto c : cur)
      for (int j = 0; j < deg_; ++j) {
        auto q = nbr_[static_cast<std::size_t>(c) * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(j)];
        if (q < 0 || seen[static_cast<std::size_t>(q)] || color_[static_cast<std::size_t>(q)] != s[k]) continue;
        seen[static_cast<std::size_t>(q)] = 1;
        next.push_back(q);
      }
    for (auto c : next) seen[static_cast<std::size_t>(c)] = 0;
    cur.swap(next);
  }
  return cur;
}

std::vector<char> CoverageSource::end_set(std::span<const Color> s) const {
  std::vector<char> out(color_.size(), 0);
  for (auto c : end_cells(s)) out[static_cast<std::size_t>(c)] = 1;
  return out;
}

std::vector<char> CoverageSource::start_set(std::span<const Color> s) const {
  ColorString r = reversed(s);
  return end_set(r);
}

bool CoverageSource::occurs_before(std::span<const Color> s, int) const {
  if (s.empty()) throw InvalidParameter("empty query string");
  if (static_cast<int>(s.size()) > max_len_ || vacuous(s)) return false;
  return !end_cells(s).empty();
}

StringSet CoverageSource::observed_strings(int len, int) const {
  if (len < 1) throw InvalidParameter("length must be positive");
  StringSet out;
  if (len > max_len_) return out;
  std::map<ColorString, Cells> frontier;
  for (std::size_t i = 0; i < color_.size(); ++i)
    frontier[ColorString(1, color_[i])].push_back(static_cast<std::int32_t>(i));
  std::size_t states = 0;
  for (int k = 1; k < len; ++k) {
    std::map<ColorString, Cells> next;
    for (const auto& [s, cells] : frontier) {
      for (auto c : cells) {
        for (int j = 0; j < deg_; ++j) {
          auto q = nbr_[static_cast<std::size_t>(c) * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(j)];
          if (q < 0) continue;
          ColorString t = s;
          t.push_back(color_[static_cast<std::size_t>(q)]);
          next[std::move(t)].push_back(q);
        }
      }
    }
    for (auto& [s, cells] : next) {
      sort_unique(cells);
      states += cells.size();
    }
    if (states > kMaxStates) throw std::length_error("observed_strings: path state count exceeds limit");
    frontier = std::move(next);
  }
  for (auto& [s, cells] : frontier) out.insert(s);
  return out;
}

StringSet CoverageSource::middle_completions(std::span<const Color> w1, std::span<const Color> w3, int midlen,
                                             int) const {
  if (w1.size() != w3.size() || w1.empty() || midlen < 0) throw InvalidParameter("bad flanks");
  StringSet out;
  if (vacuous(w1) || vacuous(w3)) return out;
  if (static_cast<int>(2 * w1.size()) + midlen > max_len_) return out;
  const std::size_t n = color_.size();
  auto ends = end_set(w1);
  auto starts = start_set(w3);
  // Graph distance to the start set, for pruning.
  std::vector<int> dist(n, -1);
  std::deque<std::int32_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (starts[i]) {
      dist[i] = 0;
      queue.push_back(static_cast<std::int32_t>(i));
    }
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (int j = 0; j < deg_; ++j) {
      auto q = nbr_[static_cast<std::size_t>(c) * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(j)];
      if (q >= 0 && dist[static_cast<std::size_t>(q)] < 0) {
        dist[static_cast<std::size_t>(q)] = dist[static_cast<std::size_t>(c)] + 1;
        queue.push_back(q);
      }
    }
  }
  std::map<ColorString, Cells> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (ends[i]) frontier[ColorString{}].push_back(static_cast<std::int32_t>(i));
  // After k middle letters a cell must still reach the start set in midlen - k + 1 steps.
  for (int k = 1; k <= midlen; ++k) {
    std::map<ColorString, Cells> next;
    for (const auto& [s, cells] : frontier) {
      for (auto c : cells) {
        for (int j = 0; j < deg_; ++j) {
          auto q = nbr_[static_cast<std::size_t>(c) * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(j)];
          if (q < 0) continue;
          int dq = dist[static_cast<std::size_t>(q)];
          if (dq < 0 || dq > midlen - k + 1) continue;
          ColorString t = s;
          t.push_back(color_[static_cast<std::size_t>(q)]);
          next[std::move(t)].push_back(q);
        }
      }
    }
    for (auto& [s, cells] : next) sort_unique(cells);
    frontier = std::move(next);
  }
  for (const auto& [s, cells] : frontier) {
    bool ok = false;
    for (auto c : cells) {
      for (int j = 0; j < deg_ && !ok; ++j) {
        auto q = nbr_[static_cast<std::size_t>(c) * static_cast<std::size_t>(deg_) + static_cast<std::size_t>(j)];
        ok = q >= 0 && starts[static_cast<std::size_t>(q)];
      }
      if (ok) break;
    }
    if (ok) out.insert(s);
  }
  return out;
}

StringSet CoverageSource::unique_flanked_middles(int flank, int midlen, int, int) const {
  if (flank < 1 || midlen < 0) throw InvalidParameter("bad flank/middle lengths");
  StringSet out;
  if (2 * flank + midlen > max_len_) return out;
  const std::size_t n = color_.size();
  const auto deg = static_cast<std::size_t>(deg_);

  // ends[p]: ids of flank strings spelled by paths ending at p.
  Interner flanks;
  std::vector<std::vector<int>> ends(n);
  {
    ColorString buf(static_cast<std::size_t>(flank));
    std::vector<std::int32_t> at(static_cast<std::size_t>(flank));
    auto rec = [&](auto&& self, int k) -> void {
      auto c = static_cast<std::size_t>(at[static_cast<std::size_t>(k)]);
      buf[static_cast<std::size_t>(k)] = color_[c];
      if (k + 1 == flank) {
        ends[c].push_back(flanks.id(buf));
        return;
      }
      for (std::size_t j = 0; j < deg; ++j) {
        auto q = nbr_[c * deg + j];
        if (q < 0) continue;
        at[static_cast<std::size_t>(k) + 1] = q;
        self(self, k + 1);
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      at[0] = static_cast<std::int32_t>(i);
      rec(rec, 0);
    }
    for (auto& e : ends) {
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
    }
  }
  // starts[q]: flank strings spelled by paths starting at q (reversals of ends[q]).
  std::vector<std::vector<int>> starts(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int id : ends[i]) starts[i].push_back(flanks.id(reversed(flanks.str(id))));

  // mids[p]: for each q reached in midlen+1 steps, the state of the interior strings.
  Interner middles;
  std::vector<std::vector<std::pair<std::int32_t, int>>> mids(n);
  {
    ColorString buf(static_cast<std::size_t>(midlen));
    std::unordered_map<std::int32_t, int> acc;
    std::int32_t origin = 0;
    auto rec = [&](auto&& self, std::int32_t c, int k) -> void {
      // k middle letters fixed so far; c is the current cell (origin when k = 0).
      for (std::size_t j = 0; j < deg; ++j) {
        auto q = nbr_[static_cast<std::size_t>(c) * deg + j];
        if (q < 0) continue;
        if (k == midlen) {
          int id = middles.id(buf);
          auto [it, fresh] = acc.try_emplace(q, id);
          if (!fresh) it->second = merge_state(it->second, id);
        } else {
          buf[static_cast<std::size_t>(k)] = color_[static_cast<std::size_t>(q)];
          self(self, q, k + 1);
        }
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (ends[i].empty()) continue;
      acc.clear();
      origin = static_cast<std::int32_t>(i);
      rec(rec, origin, 0);
      mids[i].assign(acc.begin(), acc.end());
      std::sort(mids[i].begin(), mids[i].end());
    }
  }

  // Group end cells by flank string.
  std::vector<std::vector<std::int32_t>> cells_of(flanks.size());
  for (std::size_t i = 0; i < n; ++i)
    for (int id : ends[i]) cells_of[static_cast<std::size_t>(id)].push_back(static_cast<std::int32_t>(i));

  // Dense scratch tables with touched lists; kNone marks untouched slots.
  std::vector<int> per_q(n, kNone), per_w3(flanks.size(), kNone);
  std::vector<std::int32_t> q_used, w3_used;
  std::vector<char> emitted(middles.size(), 0);
  for (std::size_t w1 = 0; w1 < cells_of.size(); ++w1) {
    if (cells_of[w1].empty()) continue;
    for (auto p : cells_of[w1])
      for (const auto& [q, st] : mids[static_cast<std::size_t>(p)]) {
        int& slot = per_q[static_cast<std::size_t>(q)];
        if (slot == kNone) q_used.push_back(q);
        slot = merge_state(slot, st);
      }
    for (auto q : q_used) {
      const int st = per_q[static_cast<std::size_t>(q)];
      for (int w3 : starts[static_cast<std::size_t>(q)]) {
        int& slot = per_w3[static_cast<std::size_t>(w3)];
        if (slot == kNone) w3_used.push_back(w3);
        slot = merge_state(slot, st);
      }
      per_q[static_cast<std::size_t>(q)] = kNone;
    }
    q_used.clear();
    for (auto w3 : w3_used) {
      const int st = per_w3[static_cast<std::size_t>(w3)];
      if (st >= 0 && !emitted[static_cast<std::size_t>(st)]) {
        emitted[static_cast<std::size_t>(st)] = 1;
        out.insert(middles.str(st));
      }
      per_w3[static_cast<std::size_t>(w3)] = kNone;
    }
    w3_used.clear();
  }
  return out;
}

std::vector<Point> CoverageSource::witness_path(std::span<const Color> s) const {
  if (s.empty() || static_cast<int>(s.size()) > max_len_ || vacuous(s)) return {};
  const std::size_t n = color_.size(), deg = static_cast<std::size_t>(deg_);
  std::vector<std::vector<char>> layers;
  std::vector<char> cur(n, 0);
  for (std::size_t i = 0; i < n; ++i) cur[i] = color_[i] == s[0];
  layers.push_back(cur);
  for (std::size_t k = 1; k < s.size(); ++k) {
    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!layers.back()[i]) continue;
      for (std::size_t j = 0; j < deg; ++j) {
        auto q = nbr_[i * deg + j];
        if (q >= 0 && color_[static_cast<std::size_t>(q)] == s[k]) next[static_cast<std::size_t>(q)] = 1;
      }
    }
    layers.push_back(std::move(next));
  }
  auto last = std::find(layers.back().begin(), layers.back().end(), 1);
  if (last == layers.back().end()) return {};
  std::vector<std::int32_t> cells{static_cast<std::int32_t>(last - layers.back().begin())};
  for (std::size_t k = s.size() - 1; k > 0; --k) {
    auto c = static_cast<std::size_t>(cells.back());
    for (std::size_t j = 0; j < deg; ++j) {
      auto q = nbr_[c * deg + j];
      if (q >= 0 && layers[k - 1][static_cast<std::size_t>(q)]) {
        cells.push_back(q);
        break;
      }
    }
  }
  std::vector<Point> path;
  for (auto it = cells.rbegin(); it != cells.rend(); ++it) path.push_back(window_.point(static_cast<std::size_t>(*it)));
  return path;
}

}  // namespace sclab
