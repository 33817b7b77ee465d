#include <map>
#include <utility>

#include "sclab/errors.hpp"
#include "sclab/observations.hpp"

namespace sclab {

TreeSource::TreeSource(std::shared_ptr<const ObservationTree> tree) : tree_(std::move(tree)) {
  if (!tree_) throw InvalidParameter("null tree");
}

const TreeSource::Table& TreeSource::table(int len) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tables_.find(len);
  if (it != tables_.end()) return *it->second;
  auto t = std::make_unique<Table>();
  const auto& nodes = tree_->nodes();
  ColorString key(static_cast<std::size_t>(len));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].generation < len - 1) continue;
    std::int32_t v = static_cast<std::int32_t>(i);
    for (int k = len - 1; k >= 0; --k) {
      key[static_cast<std::size_t>(k)] = nodes[static_cast<std::size_t>(v)].color;
      v = nodes[static_cast<std::size_t>(v)].parent;
    }
    auto [pos, fresh] = t->try_emplace(key, nodes[i].generation);
    if (!fresh) pos->second = std::min(pos->second, nodes[i].generation);
  }
  auto& ref = *t;
  tables_.emplace(len, std::move(t));
  return ref;
}

bool TreeSource::occurs_before(std::span<const Color> s, int T) const {
  if (s.empty()) throw InvalidParameter("empty query string");
  if (vacuous(s)) return false;
  const auto& t = table(static_cast<int>(s.size()));
  auto it = t.find(ColorString(s.begin(), s.end()));
  return it != t.end() && it->second <= T;
}

StringSet TreeSource::observed_strings(int len, int T) const {
  if (len < 1) throw InvalidParameter("length must be positive");
  StringSet out;
  for (const auto& [s, g] : table(len))
    if (g <= T) out.insert(s);
  return out;
}

StringSet TreeSource::middle_completions(std::span<const Color> w1, std::span<const Color> w3, int midlen,
                                         int T) const {
  if (w1.size() != w3.size() || w1.empty() || midlen < 0) throw InvalidParameter("bad flanks");
  StringSet out;
  if (vacuous(w1) || vacuous(w3)) return out;
  const auto f = w1.size(), m = static_cast<std::size_t>(midlen);
  for (const auto& [s, g] : table(static_cast<int>(2 * f + m))) {
    if (g > T) continue;
    if (!std::equal(w1.begin(), w1.end(), s.begin())) continue;
    if (!std::equal(w3.begin(), w3.end(), s.begin() + static_cast<std::ptrdiff_t>(f + m))) continue;
    out.insert(substring(s, f, m));
  }
  return out;
}

StringSet TreeSource::unique_flanked_middles(int flank, int midlen, int T1, int T2) const {
  if (flank < 1 || midlen < 0) throw InvalidParameter("bad flank/middle lengths");
  struct State {
    ColorString mid;
    bool multi = false;
    bool early = false;  // some triple ended by T1
  };
  const auto f = static_cast<std::size_t>(flank), m = static_cast<std::size_t>(midlen);
  std::map<std::pair<ColorString, ColorString>, State> groups;
  for (const auto& [s, g] : table(static_cast<int>(2 * f + m))) {
    if (g > T2) continue;
    auto key = std::make_pair(substring(s, 0, f), substring(s, f + m, f));
    ColorString mid = substring(s, f, m);
    auto [it, fresh] = groups.try_emplace(std::move(key));
    State& st = it->second;
    if (fresh) {
      st.mid = mid;
    } else if (st.mid != mid) {
      st.multi = true;
    }
    if (g <= T1) st.early = true;
  }
  StringSet out;
  for (const auto& [k, st] : groups)
    if (!st.multi && st.early) out.insert(st.mid);
  return out;
}

}  // namespace sclab
