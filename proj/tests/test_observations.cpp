#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "sclab/brw.hpp"
#include "sclab/errors.hpp"
#include "sclab/observations.hpp"
#include "sclab/oracle.hpp"

using namespace sclab;
using fixtures::cs;

namespace {

// All strings spelled by nearest-neighbor paths of exactly len points inside window.
StringSet brute_paths(const Scenery& s, const Box& w, int len) {
  StringSet out;
  ColorString buf;
  auto rec = [&](auto&& self, const Point& z) -> void {
    buf.push_back(s.color(z));
    if (static_cast<int>(buf.size()) == len) {
      out.insert(buf);
    } else {
      for (const auto& d : Direction::all(s.dim())) {
        Point q = z + d.unit(s.dim());
        if (w.contains(q)) self(self, q);
      }
    }
    buf.pop_back();
  };
  for (std::size_t i = 0; i < w.size(); ++i) rec(rec, w.point(i));
  return out;
}

// Lineage strings of a tree ending by generation T.
StringSet brute_lineages(const ObservationTree& t, int len, int T) {
  StringSet out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& n = t.nodes()[i];
    if (n.generation > T || n.generation + 1 < len) continue;
    ColorString s;
    auto id = static_cast<std::int32_t>(i);
    for (int k = 0; k < len; ++k) {
      s.push_back(t.nodes()[static_cast<std::size_t>(id)].color);
      id = t.nodes()[static_cast<std::size_t>(id)].parent;
    }
    out.insert(reversed(s));
  }
  return out;
}

StringSet brute_unique_middles(const StringSet& observed_t1, const StringSet& observed_t2, int f, int m) {
  std::map<std::pair<ColorString, ColorString>, std::set<ColorString>> groups;
  for (const auto& s : observed_t2)
    groups[{substring(s, 0, f), substring(s, f + m, f)}].insert(substring(s, f, m));
  StringSet out;
  for (const auto& s : observed_t1) {
    const auto& g = groups[{substring(s, 0, f), substring(s, f + m, f)}];
    if (g.size() == 1) out.insert(*g.begin());
  }
  return out;
}

}  // namespace

TEST_CASE("backend names") {
  CHECK(to_text(Backend::tree) == "brw");
  CHECK(to_text(Backend::coverage) == "coverage");
  CHECK(parse_backend("brw") == Backend::tree);
  CHECK(parse_backend("coverage") == Backend::coverage);
  CHECK_THROWS_AS(parse_backend("nope"), ConfigError);
}

TEST_CASE("coverage source matches brute-force path enumeration") {
  auto s = std::make_shared<const Scenery>(generate_scenery(Box::cube(2, 4), 3, 17));
  Box w = Box::cube(Point{1, 0}, 2);
  auto src = std::make_shared<CoverageSource>(s, w, 6);
  for (int len = 1; len <= 5; ++len) {
    StringSet want = brute_paths(*s, w, len);
    CHECK(src->observed_strings(len, 0) == want);
    for (const auto& x : want) CHECK(src->occurs_before(x, 0));
  }
  CHECK_FALSE(src->occurs_before(ColorString(7, 0), 0));
  CHECK_FALSE(src->occurs_before(ColorString{5}, 0));
  StringSet five = brute_paths(*s, w, 5);
  ColorString probe = *five.begin();
  auto path = src->witness_path(probe);
  REQUIRE(path.size() == 5);
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(w.contains(path[i]));
    CHECK(s->color(path[i]) == probe[i]);
    if (i) CHECK(l1_norm(path[i] - path[i - 1]) == 1);
  }
}

TEST_CASE("coverage middle completions and unique middles match brute force") {
  auto s = std::make_shared<const Scenery>(generate_scenery(Box::cube(2, 3), 3, 5));
  Box w = s->box();
  auto src = coverage_source(s, w, 7);
  StringSet seven = brute_paths(*s, w, 7);
  CHECK(src->unique_flanked_middles(2, 3, 0, 0) == brute_unique_middles(seven, seven, 2, 3));
  StringSet six = brute_paths(*s, w, 6);
  CHECK(src->unique_flanked_middles(2, 2, 0, 0) == brute_unique_middles(six, six, 2, 2));
  int checked = 0;
  for (const auto& x : seven) {
    if (++checked > 40) break;
    ColorString w1 = substring(x, 0, 2), w3 = substring(x, 5, 2);
    StringSet want;
    for (const auto& y : seven)
      if (substring(y, 0, 2) == w1 && substring(y, 5, 2) == w3) want.insert(substring(y, 2, 3));
    CHECK(src->middle_completions(w1, w3, 3, 0) == want);
  }
}

TEST_CASE("tree source answers from lineages with end times") {
  Scenery sc = generate_scenery(Box::cube(2, 9), 3, 8);
  auto tree = std::make_shared<const ObservationTree>(simulate_brw(sc, 0.6, SimLimits{4000, 9}, 2));
  auto src = tree_source(tree);
  CHECK(src->backend() == Backend::tree);
  CHECK(src->kappa() == 3);
  for (int len : {1, 3, 5})
    for (int T : {4, 9}) CHECK(src->observed_strings(len, T) == brute_lineages(*tree, len, T));
  // The root color is the only string seen at time 0.
  CHECK(src->observed_strings(1, 0) == StringSet{ColorString{sc.color(Point{0, 0})}});
  auto t5 = brute_lineages(*tree, 5, 9);
  for (const auto& x : t5) CHECK(src->occurs_before(x, 9));
  // Every lineage string is a path string of the scenery.
  auto cov = coverage_source(std::make_shared<const Scenery>(sc), Box::cube(2, 9), 5);
  for (const auto& x : t5) CHECK(cov->occurs_before(x, 0));
}

TEST_CASE("tree source unique middles and completions match brute force") {
  Scenery sc = generate_scenery(Box::cube(2, 10), 3, 9);
  auto tree = std::make_shared<const ObservationTree>(simulate_brw(sc, 0.5, SimLimits{4000, 10}, 6));
  auto src = tree_source(tree);
  StringSet t1 = brute_lineages(*tree, 6, 7), t2 = brute_lineages(*tree, 6, 10);
  CHECK(src->unique_flanked_middles(2, 2, 7, 10) == brute_unique_middles(t1, t2, 2, 2));
  for (const auto& x : t2) {
    ColorString w1 = substring(x, 0, 2), w3 = substring(x, 4, 2);
    StringSet want;
    for (const auto& y : t2)
      if (substring(y, 0, 2) == w1 && substring(y, 4, 2) == w3) want.insert(substring(y, 2, 2));
    CHECK(src->middle_completions(w1, w3, 2, 10) == want);
  }
}

TEST_CASE("the 17x5 grid path observations") {
  auto s = std::make_shared<const Scenery>(fixtures::grid17());
  auto src = coverage_source(s, fixtures::grid17_box(), 15);
  CHECK(src->occurs_before(cs("439121784761777"), 0));
  CHECK(src->occurs_before(cs("439121187847617"), 0));
  CHECK(src->occurs_before(cs("439121357847617"), 0));
  CHECK(src->vacuous(ColorString{10}));
  CHECK_FALSE(src->vacuous(cs("123")));
}
