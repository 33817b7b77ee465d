// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "sclab/brw.hpp"
#include "sclab/errors.hpp"
#include "sclab/harness.hpp"
#include "sclab/oracle.hpp"
#include "sclab/reconstruct.hpp"
#include "sclab/rng.hpp"

using namespace sclab;
using fixtures::cs;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

WordBag bag_of(const std::vector<std::string>& digits) {
  WordBag b;
  for (const auto& w : digits) b.insert(cs(w));
  return b;
}

WordBag words_in(const Scenery& s, const Box& w, int L) {
  WordBag b(L);
  for (const auto& x : enumerate_segments(s, w, L)) b.insert(x.letters);
  return b;
}

// ---------------------------------------------------------------- 1
Verdict worked_examples() {
  Verdict v;
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };

  {
    ColorString d = fixtures::dna("TATCAGT");
    WordBag shorts(5);
    for (std::size_t i = 0; i + 5 <= d.size(); ++i) shorts.insert(substring(d, i, 5));
    Params p;
    p.L = 5;
    p.M = 7;
    auto o = phase2_long_words(shorts, p).oriented();
    need(std::set<ColorString>(o.begin(), o.end()) ==
             std::set<ColorString>{fixtures::dna("TATCAGT"), fixtures::dna("TGACTAT")},
         "DNA");
  }
  {
    WordBag shorts = bag_of({"1943", "5076", "4391", "6140", "2780", "9437", "0761", "3912", "1404", "7803",
                             "1546", "9031", "4794", "3610", "7124", "5462", "0317", "7948", "6100", "1243"});
    Params p;
    p.L = 4;
    p.M = 5;
    need(phase2_long_words(shorts, p) == bag_of({"19437", "50761", "43912", "61404", "27803", "15462", "90317",
                                                 "47948", "36100", "71243"}),
         "short bag to long set");
  }
  auto grid = std::make_shared<const Scenery>(fixtures::grid17());
  SourcePtr src = coverage_source(grid, fixtures::grid17_box(), 15);
  {
    auto m = src->middle_completions(cs("43912"), cs("61777"), 5, 0);
    need(m == StringSet{cs("17847")}, "unique middle completion");
    auto junk = src->middle_completions(cs("43912"), cs("47617"), 5, 0);
    need(junk.size() >= 2 && junk.count(cs("11878")), "junk completions");
  }
  {
    Params p;
    p.L = 5;
    p.M = 17;
    p.neighbor_len = 5;
    bool found = false;
    for (const auto& x : neighbor_witnesses(cs("74391217847617774"), cs("75076118258674042"), *src, p))
      found = found || (!x.v_reversed && !x.w_reversed && x.v_a == cs("43912") && x.v_b == cs("178") &&
                        x.v_c == cs("47617") && x.w_b == cs("11825") && x.index == 7);
    need(found, "neighbor witness");
  }
  {
    Scenery toy = fixtures::toy();
    auto s = std::make_shared<const Scenery>(toy);
    SourcePtr tsrc = coverage_source(s, toy.box(), 6);
    Params p;
    p.M = 5;
    p.L = 3;
    p.M_small = 3;
    p.L_small = 3;
    p.neighbor_len = 2;
    WordBag longs = bag_of({"01111", "02222", "03333", "04444", "60123"});
    PlacedWord seed = phase3_seed(longs, bag_of({"012"}), p);
    TilingResult r = phase4_tile(seed, longs, *tsrc, p);
    bool same = r.status == TilingStatus::complete && r.piece.is_total();
    for (std::size_t i = 0; same && i < toy.box().size(); ++i)
      same = *r.piece.color(toy.box().point(i)) == toy.color(toy.box().point(i));
    need(same, "toy tiling");
  }
  v.pass = bad.empty();
  v.detail = bad.empty() ? "6/6 examples reproduced" : "mismatch:";
  for (const auto& b : bad) v.detail += " [" + b + "]";
  return v;
}

// ---------------------------------------------------------------- 2-4
struct SuiteRun {
  int kappa = 0;
  std::vector<TrialReport> trials;
};

SuiteRun run_suite(int kappa, int seeds) {
  SuiteRun r;
  r.kappa = kappa;
  TrialConfig c;
  c.kappa = kappa;
  c.keep_artifacts = true;
  c.check_patch_event = false;
  for (int i = 1; i <= seeds; ++i) r.trials.push_back(run_trial(c, static_cast<std::uint64_t>(i)));
  return r;
}

Verdict conditional_determinism(const std::vector<SuiteRun>& runs) {
  Verdict v;
  for (const auto& run : runs) {
    int ev = 0, ok = 0, any_ok = 0;
    std::string first_bad;
    for (const auto& t : run.trials) {
      any_ok += t.success;
      if (!t.events_pass) continue;
      ++ev;
      if (t.success) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = " first failure seed " + std::to_string(t.seed) + " (" + t.diag.failure_reason + ")";
      }
    }
    v.pass = v.pass && ok == ev;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += "kappa=" + std::to_string(run.kappa) + ": " + std::to_string(ok) + "/" + std::to_string(ev) +
                " event-passing seeds verified (" + std::to_string(any_ok) + "/" +
                std::to_string(run.trials.size()) + " overall)" + first_bad;
    if (ev == 0) v.detail += " [vacuous: no seed passes the events]";
  }
  return v;
}

bool contains_all(const WordBag& big, const WordBag& small) {
  for (const auto& w : small.canonical_words())
    if (!big.contains(w)) return false;
  return true;
}

Verdict sandwich(const std::vector<SuiteRun>& runs) {
  Verdict v;
  int checked = 0, bad = 0;
  for (const auto& run : runs)
    for (const auto& t : run.trials) {
      if (!t.events_pass) continue;
      const Params& p = t.config.params;
      const Scenery& s = *t.scenery;
      const auto& rr = *t.reconstruction;
      const int d = t.config.d;
      struct Level {
        const WordBag& bag;
        int L, radius;
      };
      for (const Level& lv : {Level{rr.short_n, p.L, t.geometry.window_radius},
                              Level{rr.short_small, p.L_small, t.geometry.small_radius}}) {
        ++checked;
        WordBag lower = lv.radius >= lv.L ? words_in(s, Box::cube(d, lv.radius - lv.L), lv.L) : WordBag(lv.L);
        WordBag upper = words_in(s, Box::cube(d, lv.radius), lv.L);
        if (!contains_all(lv.bag, lower) || !contains_all(upper, lv.bag)) ++bad;
      }
    }
  v.pass = bad == 0;
  v.detail = std::to_string(checked) + " bags checked on event-passing seeds, " + std::to_string(bad) +
             " violations (lower window K(R-L), upper window K(R))";
  return v;
}

// Independent enumerator: extend letter by letter, keeping every length-L window in the bag.
WordBag brute_long_words(const WordBag& shorts, int M, int kappa, bool no_u_turn) {
  WordBag out(M);
  const int L = shorts.length();
  if (shorts.empty() || M < L) return out;
  ColorString buf;
  std::function<void()> grow = [&] {
    if (static_cast<int>(buf.size()) == M) {
      out.insert(buf);
      return;
    }
    for (int c = 0; c < kappa; ++c) {
      buf.push_back(static_cast<Color>(c));
      const std::size_t n = buf.size();
      ColorString win(buf.end() - L, buf.end());
      bool ok = shorts.contains(win);
      if (ok && no_u_turn) {
        ColorString prev(buf.end() - L - 1, buf.end() - 1);
        ok = win != reversed(prev);
      }
      if (ok) grow();
      buf.resize(n - 1);
    }
  };
  for (const auto& w : shorts.oriented()) {
    buf = w;
    grow();
  }
  return out;
}

Verdict phase2_equivalence(const std::vector<SuiteRun>& runs) {
  Verdict v;
  int bags = 0, nonempty = 0, bad = 0;
  std::string first;
  for (const auto& run : runs)
    for (const auto& t : run.trials) {
      const auto& rr = *t.reconstruction;
      const Params& p = t.config.params;
      struct Level {
        const WordBag& shorts;
        int M;
      };
      for (const Level& lv : {Level{rr.short_n, p.M}, Level{rr.short_small, p.M_small}}) {
        if (lv.shorts.empty()) continue;
        ++bags;
        Params q = p;
        q.L = lv.shorts.length();
        q.M = lv.M;
        WordBag made = phase2_long_words(lv.shorts, q);
        nonempty += !made.empty();
        bool ok = true;
        for (const auto& w : made.canonical_words())
          for (int i = 0; i + q.L <= q.M; ++i) ok = ok && lv.shorts.contains(substring(w, static_cast<std::size_t>(i), static_cast<std::size_t>(q.L)));
        ok = ok && made == brute_long_words(lv.shorts, q.M, run.kappa, true);
        q.fold_free = false;
        ok = ok && phase2_long_words(lv.shorts, q) == brute_long_words(lv.shorts, q.M, run.kappa, false);
        if (!ok) {
          ++bad;
          if (first.empty()) first = " first mismatch seed " + std::to_string(t.seed);
        }
      }
    }
  v.pass = bad == 0;
  v.detail = std::to_string(bags) + " short bags (" + std::to_string(nonempty) +
             " with long words), default and literal rule vs brute force: " + std::to_string(bad) + " mismatches" + first;
  return v;
}

// ---------------------------------------------------------------- 5
Verdict event_trends() {
  Verdict v;
  const int seeds = 500;
  const Box words = Box::cube(2, 3), paths = Box::cube(2, 6);
  std::vector<double> b3, c1;
  const std::vector<int> kappas{5, 10, 26};
  for (int kappa : kappas) {
    int pb = 0, pc = 0;
    for (int i = 0; i < seeds; ++i) {
      Scenery s = generate_scenery(paths, kappa, 50'000 + static_cast<std::uint64_t>(i));
      pb += oracle::check_diamond_property(s, words, paths, 4).pass;
      pc += oracle::check_word_uniqueness(s, words, 4).pass;
    }
    b3.push_back(static_cast<double>(pb) / seeds);
    c1.push_back(static_cast<double>(pc) / seeds);
  }
  const bool mono = b3[0] <= b3[1] && b3[1] <= b3[2] && c1[0] <= c1[1] && c1[1] <= c1[2];
  const double bound = oracle::word_uniqueness_union_bound(2, words, 4, 26);
  const double fail = 1.0 - c1[2];
  const double sigma = std::sqrt(bound * (1 - bound) / seeds);
  const bool near = std::abs(fail - bound) <= 3 * sigma;
  v.pass = mono && near;
  v.detail = "B3 pass " + fmt(b3[0]) + "/" + fmt(b3[1]) + "/" + fmt(b3[2]) + ", C1 pass " + fmt(c1[0]) + "/" +
             fmt(c1[1]) + "/" + fmt(c1[2]) + " for kappa 5/10/26 over " + std::to_string(seeds) +
             " seeds; C1 failure at 26 = " + fmt(fail) + " vs union bound " + fmt(bound) + " (3 sigma = " +
             fmt(3 * sigma) + ")";
  return v;
}

// ---------------------------------------------------------------- 6
Verdict brw_statistics() {
  Verdict v;
  const int runs = 10'000, T = 10;
  Scenery s = generate_scenery(Box::cube(2, T), 4, 7);
  bool consistent = true, exact = true, all_in = true;
  std::string detail;
  for (double b : {0.0, 0.3, 0.5, 1.0}) {
    double sum = 0, sq = 0;
    const int n = (b == 0.0) ? 1000 : runs;
    for (int i = 0; i < n; ++i) {
      auto t = simulate_brw(s, b, SimLimits{1 << 20, T}, derive_seed(static_cast<std::uint64_t>(i), 17));
      consistent = consistent && oracle::tree_consistent(t, s) && !t.truncated();
      double x = static_cast<double>(t.population(T));
      sum += x;
      sq += x * x;
      if (b == 0.0) exact = exact && x == 1.0;
      if (b == 1.0) exact = exact && x == 1024.0;
    }
    const double mean = sum / n, se = std::sqrt(std::max(0.0, sq / n - mean * mean) / n);
    const double want = expected_population(b, T);
    const bool in = b == 0.0 || b == 1.0 ? mean == want : std::abs(mean - want) <= 3 * se;
    all_in = all_in && in;
    detail += "b=" + fmt(b, 2) + ": " + fmt(mean, 6) + " vs " + fmt(want, 6) +
              (b == 0.0 || b == 1.0 ? " exact" : " (3SE " + fmt(3 * se, 3) + ")") + "; ";
  }
  v.pass = consistent && exact && all_in;
  v.detail = detail + (consistent ? "all trees consistent" : "inconsistent tree found");
  return v;
}

// ---------------------------------------------------------------- 7
PartialScenery union_restriction(const Scenery& s, const Box& a, const Box& b) {
  Point lo = a.lo(), hi = a.hi();
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(lo[i], b.lo()[i]);
    hi[i] = std::max(hi[i], b.hi()[i]);
  }
  PartialScenery u(Box(lo, hi), s.kappa());
  for (const Box* x : {&a, &b})
    for (std::size_t i = 0; i < x->size(); ++i) u.set(x->point(i), s.color(x->point(i)));
  return u;
}

Verdict stitching() {
  Verdict v;
  int ok = 0;
  const int seeds = 20;
  auto lin = Isometry::linear_parts(2);
  for (int k = 0; k < seeds; ++k) {
    Rng rng(derive_seed(static_cast<std::uint64_t>(k), 23));
    Scenery s = generate_scenery(Box::cube(2, 20), 10, 7000 + static_cast<std::uint64_t>(k));
    auto rnd = [&](int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); };
    Box a = Box::cube(Point{rnd(-3, 3), rnd(-3, 3)}, 4);
    Box b = Box::cube(Point{a.center()[0] + rnd(-3, 3), a.center()[1] + rnd(-3, 3)}, 7);
    auto frame = [&](const PartialScenery& p) {
      return apply_isometry(lin[rng.below(lin.size())].with_translation(Point{rnd(-5, 5), rnd(-5, 5)}), p);
    };
    PartialScenery pa = frame(PartialScenery::restrict(s, a));
    PartialScenery pb = frame(PartialScenery::restrict(s, b));
    StitchResult r = stitch_levels_detailed({{4, pa}, {9, pb}});
    bool good = r.matched.size() == 2 && r.matched[1] &&
                find_equivalence(r.assembly, union_restriction(s, a, b)).has_value();

    Scenery other = generate_scenery(Box::cube(2, 20), 10, 9000 + static_cast<std::uint64_t>(k));
    PartialScenery pc = frame(PartialScenery::restrict(other, b));
    StitchResult u = stitch_levels_detailed({{4, pa}, {9, pc}});
    good = good && !u.matched[1] && u.assembly.box() == Box::cube(2, 7) && find_equivalence(u.assembly, pc).has_value();
    ok += good;
  }
  v.pass = ok == seeds;
  v.detail = std::to_string(ok) + "/" + std::to_string(seeds) + " seeds: overlap stitched to the union, unrelated piece recentered";
  return v;
}

// ---------------------------------------------------------------- 8
Verdict equivalence_round_trip() {
  Verdict v;
  Rng rng(derive_seed(88, 1));
  int ok = 0;
  const int cases = 100;
  for (int k = 0; k < cases; ++k) {
    const int d = k % 4 == 3 ? 3 : 2;
    const int kappa = 2 + static_cast<int>(rng.below(9));
    Scenery s = generate_scenery(Box::cube(d, 6), kappa, rng.below(1u << 30));
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -static_cast<int>(rng.below(4));
      hi[i] = static_cast<int>(rng.below(4));
    }
    PartialScenery piece = PartialScenery::restrict(s, Box(lo, hi));
    // Knock out a few cells so partial pieces are covered too.
    for (int h = static_cast<int>(rng.below(3)); h > 0; --h) piece.set_raw(rng.below(piece.box().size()), -1);
    auto lin = Isometry::linear_parts(d);
    Point t(d);
    for (int i = 0; i < d; ++i) t[i] = static_cast<int>(rng.below(21)) - 10;
    Isometry g = lin[rng.below(lin.size())].with_translation(t);
    PartialScenery image = apply_isometry(g, piece);
    auto w = find_equivalence(piece, image);
    ok += w.has_value() && apply_isometry(*w, piece) == image;
  }
  v.pass = ok == cases;
  v.detail = std::to_string(ok) + "/" + std::to_string(cases) + " (piece, isometry) pairs recovered";
  return v;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& f) {
    auto t0 = clock::now();
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(clock::now() - t0).count();
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " (" << fmt(s, 3)
              << " s)" << std::endl;
  };

  report(1, "worked examples", worked_examples);

  // Criteria 2-4 share one suite: the stated kappa=5 run plus a kappa=256 companion.
  std::vector<SuiteRun> runs;
  auto t0 = clock::now();
  runs.push_back(run_suite(5, 50));
  runs.push_back(run_suite(256, 50));
  std::cout << "     suite: 100 trials in " << fmt(std::chrono::duration<double>(clock::now() - t0).count(), 3) << " s"
            << std::endl;
  report(2, "conditional determinism", [&] { return conditional_determinism(runs); });
  report(3, "phase-1 sandwich", [&] { return sandwich(runs); });
  report(4, "phase-2 oracle equivalence", [&] { return phase2_equivalence(runs); });
  report(5, "event trends", event_trends);
  report(6, "branching walk statistics", brw_statistics);
  report(7, "stitching", stitching);
  report(8, "equivalence round trip", equivalence_round_trip);
  return all ? 0 : 1;
}
