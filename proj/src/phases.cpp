#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_map>

#include "sclab/errors.hpp"
#include "sclab/reconstruct.hpp"

namespace sclab {

namespace {

int clamp_int(double x) { return x >= static_cast<double>(INT_MAX) ? INT_MAX : static_cast<int>(x); }

int log_square_length(int n) {
  double l = std::log(static_cast<double>(std::max(n, 1)));
  return std::max(3, static_cast<int>(std::ceil(l * l - 1e-9)));
}

}  // namespace

int Params::default_neighbor_len(int L, int M) { return std::max(2, std::min(L, (M + 2) / 3)); }

Params Params::for_level(int n, int dim) {
  if (n < 1) throw ConfigError("level n must be >= 1");
  Params p;
  p.dim = dim;
  p.n = n;
  p.M = 4 * n + 1;
  p.L = std::min(log_square_length(n), p.M);
  p.T1 = clamp_int(std::pow(n, 2.0));
  p.T2 = clamp_int(std::pow(n, 4.0));
  p.n_small = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.25) - 1e-12));
  p.M_small = std::min(4 * p.n_small + 1, p.M - 2);
  p.L_small = std::min(log_square_length(p.n_small), p.M_small);
  p.T1_small = clamp_int(std::pow(p.n_small, 2.0));
  p.T2_small = clamp_int(std::pow(p.n_small, 4.0));
  p.neighbor_len = default_neighbor_len(p.L, p.M);
  return p;
}

Params Params::small_level() const {
  Params q = *this;
  q.n = n_small;
  q.L = L_small;
  q.M = M_small;
  q.T1 = T1_small;
  q.T2 = T2_small;
  return q;
}

void Params::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(dim >= 1, "dim must be >= 1");
  need(n >= 1, "n must be >= 1");
  need(L >= 3 && L <= M, "need 3 <= L <= M");
  need(M % 2 == 1, "M must be odd");
  need(T1 >= 0 && T1 <= T2, "need 0 <= T1 <= T2");
  need(n_small >= 1, "n_small must be >= 1");
  need(M_small % 2 == 1 && M_small < M, "M_small must be odd and below M");
  need(L_small >= 3 && L_small <= M_small, "need 3 <= L_small <= M_small");
  need(T1_small >= 0 && T1_small <= T2_small, "need 0 <= T1_small <= T2_small");
  need(neighbor_len >= 2 && neighbor_len <= L, "need 2 <= neighbor_len <= L");
  need(3 * neighbor_len - 2 <= M, "need 3 * neighbor_len - 2 <= M");
  need(max_long_words >= 1 && max_tiling_steps >= 1, "budgets must be positive");
}

void WordBag::insert(std::span<const Color> w) {
  if (length_ == 0) length_ = static_cast<int>(w.size());
  if (static_cast<int>(w.size()) != length_) throw ShapeMismatch("word length differs from bag length");
  canon_.insert(canonical(w));
}

bool WordBag::contains(std::span<const Color> w) const {
  return static_cast<int>(w.size()) == length_ && canon_.count(canonical(w)) > 0;
}

std::vector<ColorString> WordBag::oriented() const {
  std::vector<ColorString> out;
  out.reserve(canon_.size() * 2);
  for (const auto& w : canon_) {
    out.push_back(w);
    ColorString r = reversed(w);
    if (r != w) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

WordBag phase1_short_words(const ObservationSource& src, const Params& p) {
  WordBag bag(p.L);
  for (const auto& w : src.unique_flanked_middles(p.L, p.L, p.T1, p.T2)) bag.insert(w);
  return bag;
}

WordBag phase2_long_words(const WordBag& short_words, const Params& p) {
  WordBag out(p.M);
  if (short_words.empty()) return out;
  const int L = short_words.length();
  if (L < 2 || L > p.M) throw InvalidParameter("short words must have length in [2, M]");
  // Walks over oriented short words; consecutive words overlap on L-1 letters.
  const std::vector<ColorString> words = short_words.oriented();
  const auto nw = words.size();
  const auto ov = static_cast<std::size_t>(L - 1);
  std::unordered_map<ColorString, std::vector<int>, ColorStringHash> by_prefix;
  for (std::size_t i = 0; i < nw; ++i) by_prefix[substring(words[i], 0, ov)].push_back(static_cast<int>(i));
  std::vector<int> rev(nw);
  for (std::size_t i = 0; i < nw; ++i)
    rev[i] = static_cast<int>(std::lower_bound(words.begin(), words.end(), reversed(words[i])) - words.begin());
  std::vector<std::vector<int>> next_of(nw);
  for (std::size_t i = 0; i < nw; ++i) {
    auto it = by_prefix.find(substring(words[i], 1, ov));
    if (it == by_prefix.end()) continue;
    for (int j : it->second)
      if (!p.fold_free || j != rev[i]) next_of[i].push_back(j);
  }
  const int steps = p.M - L;
  // Count walks first, saturating at the budget.
  const auto cap = static_cast<std::uint64_t>(p.max_long_words);
  std::vector<std::uint64_t> ways(nw, 1), next(nw);
  for (int k = 0; k < steps; ++k) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t u = 0; u < nw; ++u)
      for (int v : next_of[u]) next[static_cast<std::size_t>(v)] = std::min(cap + 1, next[static_cast<std::size_t>(v)] + ways[u]);
    std::swap(ways, next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = std::min(cap + 1, total + w);
  if (total > cap)
    throw PhaseFailure("phase2", "long-word assembly exceeds " + std::to_string(cap) + " strings");

  ColorString buf;
  auto rec = [&](auto&& self, int u, int k) -> void {
    if (k == steps) {
      out.insert(buf);
      return;
    }
    for (int v : next_of[static_cast<std::size_t>(u)]) {
      buf.push_back(words[static_cast<std::size_t>(v)].back());
      self(self, v, k + 1);
      buf.pop_back();
    }
  };
  for (std::size_t u = 0; u < nw; ++u) {
    buf = words[u];
    rec(rec, static_cast<int>(u), 0);
  }
  return out;
}

PlacedWord phase3_seed(const WordBag& long_n, const WordBag& long_small, const Params& p) {
  if (long_small.empty()) throw PhaseFailure("phase3", "no small-level long word");
  const ColorString& w0 = *long_small.canonical_words().begin();
  const int m = static_cast<int>(w0.size());
  if (m % 2 == 0 || m > p.M) throw PhaseFailure("phase3", "small-level words must have odd length at most M");
  const auto off = static_cast<std::size_t>((p.M - m) / 2);
  for (const auto& w : long_n.oriented()) {
    if (static_cast<int>(w.size()) != p.M) continue;
    if (std::equal(w0.begin(), w0.end(), w.begin() + static_cast<std::ptrdiff_t>(off))) {
      Point start(p.dim);
      start[0] = -(p.M - 1) / 2;
      return PlacedWord{w, start, Direction{0, 1}};
    }
  }
  throw PhaseFailure("phase3", "no long word contains " + to_text(w0) + " centered");
}

namespace {

bool contains_either(const ColorString& hay, const ColorString& needle) {
  if (std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end()) return true;
  return std::search(hay.begin(), hay.end(), needle.rbegin(), needle.rend()) != hay.end();
}

}  // namespace

std::vector<NeighborWitness> neighbor_witnesses(std::span<const Color> v, std::span<const Color> w,
                                                const ObservationSource& src, const Params& p) {
  std::vector<NeighborWitness> out;
  const int l = p.neighbor_len;
  const int M = static_cast<int>(v.size());
  if (l < 2 || static_cast<int>(w.size()) != M || M < 3 * l - 2) return out;
  if (canonical(v) == canonical(w)) return out;
  const auto ul = static_cast<std::size_t>(l);
  for (int vr = 0; vr < 2; ++vr) {
    ColorString vv = vr ? reversed(v) : ColorString(v.begin(), v.end());
    for (int wr = 0; wr < 2; ++wr) {
      ColorString ww = wr ? reversed(w) : ColorString(w.begin(), w.end());
      for (int a = 0; a + 3 * l - 2 <= M; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        ColorString q = substring(vv, ua, ul);
        ColorString wb = substring(ww, ua + ul - 1, ul);
        ColorString vc = substring(vv, ua + 2 * ul - 2, ul);
        // A w_b read off v's own line is a collinear shift, not a parallel neighbor.
        if (contains_either(vv, wb)) continue;
        ColorString probe = q;
        probe.insert(probe.end(), wb.begin(), wb.end());
        probe.insert(probe.end(), vc.begin(), vc.end());
        if (!src.occurs_before(probe, p.T2)) continue;
        NeighborWitness nw;
        nw.v_a = std::move(q);
        nw.v_b = substring(vv, ua + ul, ul - 2);
        nw.v_c = std::move(vc);
        nw.w_b = std::move(wb);
        nw.offset = a;
        nw.index = a + l - 1 + (l - 1) / 2;
        nw.v_reversed = vr != 0;
        nw.w_reversed = wr != 0;
        out.push_back(std::move(nw));
      }
    }
  }
  return out;
}

std::optional<NeighborWitness> neighbor_test(std::span<const Color> v, std::span<const Color> w,
                                             const ObservationSource& src, const Params& p) {
  auto all = neighbor_witnesses(v, w, src, p);
  if (all.empty()) return std::nullopt;
  return all.front();
}

ReconstructionResult reconstruct_box(const ObservationSource& src_n, const ObservationSource& src_small,
                                     const Params& p) {
  p.validate();
  ReconstructionResult res;
  const int r = (p.M - 1) / 2;
  res.output = PartialScenery(Box::cube(p.dim, r), src_n.kappa());
  auto& dg = res.diag;
  try {
    const Params small = p.small_level();
    res.short_n = phase1_short_words(src_n, p);
    dg.short_n = res.short_n.size();
    res.short_small = phase1_short_words(src_small, small);
    dg.short_small = res.short_small.size();
    if (res.short_n.empty()) throw PhaseFailure("phase1", "no short word selected at level n");
    if (res.short_small.empty()) throw PhaseFailure("phase1", "no short word selected at the small level");
    res.long_n = phase2_long_words(res.short_n, p);
    dg.long_n = res.long_n.size();
    res.long_small = phase2_long_words(res.short_small, small);
    dg.long_small = res.long_small.size();
    if (res.long_n.empty()) throw PhaseFailure("phase2", "no long word assembled at level n");
    PlacedWord seed = phase3_seed(res.long_n, res.long_small, p);
    dg.seed_small_word = to_text(*res.long_small.canonical_words().begin());
    dg.seed_word = to_text(seed.word);
    TilingResult t = phase4_tile(seed, res.long_n, src_n, p);
    res.output = std::move(t.piece);
    dg.tiling_status = to_text(t.status);
    dg.ambiguous = t.ambiguous;
    dg.lines_placed = t.lines_placed;
    dg.lines_needed = t.lines_needed;
    dg.tiling_steps = t.steps;
    if (t.status != TilingStatus::complete) throw PhaseFailure("phase4", t.detail);
    if (p.strict && t.ambiguous) throw PhaseFailure("phase4", "ambiguous orientation in strict mode");
    dg.ok = true;
  } catch (const PhaseFailure& e) {
    dg.ok = false;
    dg.failed_phase = e.phase;
    dg.failure_reason = e.what();
  }
  return res;
}

}  // namespace sclab
