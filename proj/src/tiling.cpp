#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>

#include "sclab/errors.hpp"
#include "sclab/reconstruct.hpp"

namespace sclab {

std::string to_text(TilingStatus s) {
  switch (s) {
    case TilingStatus::complete:
      return "complete";
    case TilingStatus::incomplete:
      return "incomplete";
    case TilingStatus::conflict:
      return "conflict";
    case TilingStatus::budget_exhausted:
      return "budget-exhausted";
  }
  return "?";
}

namespace {

struct BudgetExhausted {};

// Lines run along axis 0; a line is identified by its offset in the other axes.
std::vector<Point> line_offsets(int d, int r) {
  std::vector<Point> out;
  if (d == 1) return {Point(1)};
  Box orth = Box::cube(d - 1, r);
  for (std::size_t i = 0; i < orth.size(); ++i) {
    Point q = orth.point(i);
    Point o(d);
    for (int a = 1; a < d; ++a) o[a] = q[a - 1];
    out.push_back(o);
  }
  auto key = [](const Point& o) {
    std::vector<int> k{l1_norm(o)};
    for (int a = 1; a < o.dim(); ++a) {
      k.push_back(std::abs(o[a]));
      k.push_back(o[a] < 0 ? 1 : 0);
    }
    return k;
  };
  std::stable_sort(out.begin(), out.end(), [&](const Point& a, const Point& b) { return key(a) < key(b); });
  return out;
}

bool adjacent(const Point& a, const Point& b) { return l1_norm(a - b) == 1; }

class Tiler {
 public:
  Tiler(const PlacedWord& seed, const WordBag& bag, const ObservationSource& src, const Params& p)
      : seed_(seed), src_(src), p_(p), words_(bag.oriented()) {
    for (std::size_t i = 0; i < words_.size(); ++i) word_id_[words_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < words_.size(); ++i) canon_id_.push_back(canon_index(words_[i]));
    for (std::size_t i = 0; i < words_.size(); ++i) reversed_id_.push_back(word_id_.at(reversed(words_[i])));
    // Canonical orientation first, then canonical order.
    std::vector<int> order(words_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto key = [&](int i) {
      const auto& w = words_[static_cast<std::size_t>(i)];
      auto c = canonical(w);
      bool flipped = w != c;
      return std::make_pair(std::move(c), flipped);
    };
    std::vector<std::pair<ColorString, bool>> keys;
    for (int i : order) keys.push_back(key(i));
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
    rank_.resize(words_.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank_[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
    const int l = p_.neighbor_len;
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (int j = l - 1; j + 2 * l - 1 <= p_.M; ++j)
        by_piece_[{j, substring(words_[i], static_cast<std::size_t>(j), static_cast<std::size_t>(l))}].push_back(
            static_cast<int>(i));
    offsets_ = line_offsets(p_.dim, (p_.M - 1) / 2);
    assigned_.assign(offsets_.size(), -1);
  }

  TilingResult run() {
    TilingResult res;
    const int r = (p_.M - 1) / 2;
    res.lines_needed = static_cast<int>(offsets_.size());
    auto it = word_id_.find(seed_.word);
    if (it == word_id_.end()) throw InvalidParameter("seed word is not in the long-word bag");
    assigned_[0] = it->second;
    used_.insert(canon_id_[static_cast<std::size_t>(it->second)]);
    best_ = assigned_;
    best_depth_ = 1;
    bool done = false;
    try {
      done = search(1);
    } catch (const BudgetExhausted&) {
      res.status = TilingStatus::budget_exhausted;
      res.detail = "tiling step budget exhausted";
    }
    if (done) {
      best_ = assigned_;
      best_depth_ = static_cast<int>(offsets_.size());
      res.status = TilingStatus::complete;
    } else if (res.status != TilingStatus::budget_exhausted) {
      res.status = dead_end_had_candidates_ ? TilingStatus::conflict : TilingStatus::incomplete;
      res.detail = std::string(dead_end_had_candidates_ ? "all candidates rejected" : "no candidate")
                   + " for line at offset " + to_text(offsets_[static_cast<std::size_t>(best_depth_)]);
    }
    res.ambiguous = ambiguous_;
    res.steps = steps_;
    res.piece = PartialScenery(Box::cube(p_.dim, r), src_.kappa());
    res.lines_placed = 0;
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      if (best_[k] < 0) continue;
      ++res.lines_placed;
      const auto& w = words_[static_cast<std::size_t>(best_[k])];
      for (int x = -r; x <= r; ++x) {
        Point z = offsets_[k];
        z[0] = x;
        res.piece.set(z, w[static_cast<std::size_t>(x + r)]);
      }
    }
    return res;
  }

 private:
  int canon_index(const ColorString& w) {
    auto [it, fresh] = canon_of_.try_emplace(canonical(w), static_cast<int>(canon_of_.size()));
    return it->second;
  }

  // Witness flags for (placed u, candidate c): any orientation, and same relative orientation.
  std::pair<bool, bool> relation(int u, int c) {
    auto key = std::make_pair(u, c);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto ws = neighbor_witnesses(words_[static_cast<std::size_t>(u)], words_[static_cast<std::size_t>(c)], src_, p_);
    // Per orientation pair, the offsets that have a witness.
    const int offsets = p_.M - 3 * p_.neighbor_len + 3;
    std::array<std::vector<char>, 4> hit;
    for (auto& h : hit) h.assign(static_cast<std::size_t>(offsets), 0);
    for (const auto& w : ws) hit[static_cast<std::size_t>(2 * w.v_reversed + w.w_reversed)][static_cast<std::size_t>(w.offset)] = 1;
    auto holds = [&](int k) {
      const auto& h = hit[static_cast<std::size_t>(k)];
      if (p_.neighbor_all_offsets) return std::all_of(h.begin(), h.end(), [](char x) { return x != 0; });
      return std::any_of(h.begin(), h.end(), [](char x) { return x != 0; });
    };
    bool aligned = holds(0) || holds(3);
    auto val = std::make_pair(aligned || holds(1) || holds(2), aligned);
    memo_.emplace(key, val);
    return val;
  }

  // Candidates whose middle pieces are observed between v's flanks: at some offset, or at
  // every offset for one orientation pair when all offsets are required.
  const std::vector<int>& raw_candidates(int anchor) {
    auto found = raw_memo_.find(anchor);
    if (found != raw_memo_.end()) return found->second;
    const int l = p_.neighbor_len;
    const auto ul = static_cast<std::size_t>(l);
    std::vector<int> out;
    const auto& v = words_[static_cast<std::size_t>(anchor)];
    for (int vr = 0; vr < 2; ++vr) {
      ColorString vv = vr ? reversed(v) : v;
      std::vector<int> keep;
      for (int a = 0; a + 3 * l - 2 <= p_.M; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        auto mids = src_.middle_completions(substring(vv, ua, ul), substring(vv, ua + 2 * ul - 2, ul), l, p_.T2);
        std::vector<int> here;
        for (const auto& mid : mids) {
          auto it = by_piece_.find({a + l - 1, mid});
          if (it != by_piece_.end()) here.insert(here.end(), it->second.begin(), it->second.end());
        }
        std::sort(here.begin(), here.end());
        here.erase(std::unique(here.begin(), here.end()), here.end());
        if (!p_.neighbor_all_offsets) {
          keep.insert(keep.end(), here.begin(), here.end());
        } else if (a == 0) {
          keep = std::move(here);
        } else {
          std::vector<int> both;
          std::set_intersection(keep.begin(), keep.end(), here.begin(), here.end(), std::back_inserter(both));
          keep = std::move(both);
        }
        if (p_.neighbor_all_offsets && keep.empty()) break;
      }
      for (int id : keep) out.push_back(vr ? reversed_id_[static_cast<std::size_t>(id)] : id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return raw_memo_.emplace(anchor, std::move(out)).first->second;
  }

  bool acceptable(std::size_t k, int c) {
    for (std::size_t j = 0; j < offsets_.size(); ++j) {
      if (assigned_[j] < 0) continue;
      auto [any, aligned] = relation(assigned_[j], c);
      if (adjacent(offsets_[j], offsets_[k]) ? !aligned : any) return false;
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == offsets_.size()) return true;
    if (++steps_ > p_.max_tiling_steps) throw BudgetExhausted{};
    int anchor = -1;
    for (std::size_t j = 0; j < k && anchor < 0; ++j)
      if (adjacent(offsets_[j], offsets_[k])) anchor = assigned_[j];
    static const std::vector<int> none;
    const std::vector<int>& raw = anchor < 0 ? none : raw_candidates(anchor);
    std::vector<int> good;
    for (int c : raw) {
      if (used_.count(canon_id_[static_cast<std::size_t>(c)])) continue;
      if (acceptable(k, c)) good.push_back(c);
    }
    std::sort(good.begin(), good.end(),
              [&](int a, int b) { return rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]; });
    for (std::size_t i = 0; i < good.size(); ++i) {
      int c = good[i];
      int cid = canon_id_[static_cast<std::size_t>(c)];
      // Both orientations of one word sort next to each other.
      bool twin = (i > 0 && canon_id_[static_cast<std::size_t>(good[i - 1])] == cid) ||
                  (i + 1 < good.size() && canon_id_[static_cast<std::size_t>(good[i + 1])] == cid);
      assigned_[k] = c;
      used_.insert(cid);
      if (static_cast<int>(k) + 1 > best_depth_) {
        best_depth_ = static_cast<int>(k) + 1;
        best_ = assigned_;
        dead_end_had_candidates_ = false;
      }
      bool prev_amb = ambiguous_;
      if (twin) ambiguous_ = true;
      if (search(k + 1)) return true;
      ambiguous_ = prev_amb;
      used_.erase(cid);
      assigned_[k] = -1;
    }
    if (static_cast<int>(k) == best_depth_) dead_end_had_candidates_ = dead_end_had_candidates_ || !raw.empty();
    return false;
  }

  const PlacedWord& seed_;
  const ObservationSource& src_;
  const Params& p_;
  std::vector<ColorString> words_;
  std::unordered_map<ColorString, int, ColorStringHash> word_id_;
  std::unordered_map<ColorString, int, ColorStringHash> canon_of_;
  std::vector<int> canon_id_;
  std::vector<int> reversed_id_;
  std::vector<int> rank_;
  std::map<std::pair<int, ColorString>, std::vector<int>> by_piece_;
  std::map<std::pair<int, int>, std::pair<bool, bool>> memo_;
  std::unordered_map<int, std::vector<int>> raw_memo_;
  std::vector<Point> offsets_;
  std::vector<int> assigned_;
  std::vector<int> best_;
  int best_depth_ = 0;
  bool dead_end_had_candidates_ = false;
  bool ambiguous_ = false;
  std::set<int> used_;
  std::int64_t steps_ = 0;
};

}  // namespace

TilingResult phase4_tile(const PlacedWord& seed, const WordBag& long_words, const ObservationSource& src,
                         const Params& p) {
  if (static_cast<int>(seed.word.size()) != p.M) throw InvalidParameter("seed length differs from M");
  if (seed.dir != Direction{0, 1}) throw InvalidParameter("seed must run along +e1");
  return Tiler(seed, long_words, src, p).run();
}

}  // namespace sclab
