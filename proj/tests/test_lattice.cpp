#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "sclab/errors.hpp"
#include "sclab/lattice.hpp"
#include "sclab/rng.hpp"
#include "sclab/serialize.hpp"

using namespace sclab;
using fixtures::cs;

TEST_CASE("rng streams are the standard ones") {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng r(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next();
  CHECK(x == 9981545732273789042ULL);
  // First SplitMix64 output from state 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.below(13) == b.below(13));
  Rng c(3);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("read_line on the 5x5 grid") {
  Scenery s = fixtures::grid5();
  CHECK(to_text(read_line(s, {0, 4}, {0, 1}, 4).letters) == "1943");
  CHECK(to_text(read_line(s, {0, 0}, {0, 1}, 4).letters) == "2780");
  CHECK(to_text(read_line(s, {0, 4}, {1, -1}, 5).letters) == "15462");
  CHECK(to_text(read_line(s, {4, 4}, {0, -1}, 5).letters) == "73491");
  CHECK_THROWS_AS(read_line(s, {2, 4}, {0, 1}, 4), OutOfBounds);
  CHECK_THROWS_AS(read_line(s, {9, 9}, {0, 1}, 1), OutOfBounds);
}

TEST_CASE("enumerate_words gives the size-4 bag and its reverses") {
  Scenery s = fixtures::grid5();
  auto words = enumerate_words(s, s.box(), 4);
  CHECK(words.size() == 40);
  std::set<std::string> got;
  for (const auto& w : words) got.insert(to_text(w.letters));
  std::set<std::string> want;
  for (const char* w : {"1943", "5076", "4391", "6140", "2780", "9437", "0761", "3912", "1404", "7803",
                        "1546", "9031", "4794", "3610", "7124", "5462", "0317", "7948", "6100", "1243"}) {
    want.insert(w);
    want.insert(to_text(reversed(cs(w))));
  }
  CHECK(got == want);
  for (const auto& w : words) CHECK(read_line(s, w.anchor->start, w.anchor->dir, 4).letters == w.letters);
}

TEST_CASE("enumerate_words count formula") {
  for (int d : {1, 2, 3})
    for (int m : {1, 2, 3})
      for (int len : {1, 2, 3}) {
        Box b = Box::cube(d, m);
        Scenery s = generate_scenery(b, 4, 11);
        int side = 2 * m + 1;
        int pow = 1;
        for (int i = 0; i < d - 1; ++i) pow *= side;
        CHECK(enumerate_words(s, b, len).size() == static_cast<std::size_t>(2 * d * pow * (2 * m + 2 - len)));
      }
  Scenery s = generate_scenery(Box::cube(2, 2), 4, 1);
  CHECK(enumerate_words(s, s.box(), 6).empty());
}

TEST_CASE("generate_scenery is deterministic and in range") {
  Box b = Box::cube(2, 6);
  Scenery a = generate_scenery(b, 7, 42), c = generate_scenery(b, 7, 42), d = generate_scenery(b, 7, 43);
  CHECK(a.colors() == c.colors());
  CHECK(a.colors() != d.colors());
  for (Color x : a.colors()) CHECK(x < 7);
  CHECK_THROWS_AS(generate_scenery(b, 0, 1), InvalidParameter);
  CHECK_THROWS_AS(generate_scenery(b, 257, 1), InvalidParameter);
  Scenery k1 = generate_scenery(b, 1, 5);
  for (Color x : k1.colors()) CHECK(x == 0);
}

TEST_CASE("isometry group structure") {
  CHECK(Isometry::linear_parts(1).size() == 2);
  CHECK(Isometry::linear_parts(2).size() == 8);
  CHECK(Isometry::linear_parts(3).size() == 48);
  Rng rng(9);
  auto lin = Isometry::linear_parts(3);
  for (int trial = 0; trial < 50; ++trial) {
    Isometry a = lin[rng.below(lin.size())].with_translation(
        Point{static_cast<int>(rng.below(7)) - 3, static_cast<int>(rng.below(7)) - 3, 1});
    Isometry b = lin[rng.below(lin.size())].with_translation(Point{2, -1, static_cast<int>(rng.below(5))});
    Point z{static_cast<int>(rng.below(9)) - 4, 3, -2};
    CHECK(compose(a, b).apply(z) == a.apply(b.apply(z)));
    CHECK(a.inverse().apply(a.apply(z)) == z);
    CHECK(compose(a, a.inverse()).is_identity());
    CHECK(l1_norm(a.apply(z) - a.apply(Point{0, 0, 0})) == l1_norm(z));
  }
}

TEST_CASE("find_equivalence recovers an applied isometry") {
  Scenery s = generate_scenery(Box::cube(2, 6), 10, 3);
  PartialScenery piece = PartialScenery::restrict(s, Box::cube(Point{1, -1}, 3));
  auto g0 = find_equivalence(piece, piece);
  REQUIRE(g0);
  CHECK(g0->is_identity());
  for (const auto& lin : Isometry::linear_parts(2)) {
    Isometry g = lin.with_translation(Point{4, -7});
    PartialScenery img = apply_isometry(g, piece);
    auto h = find_equivalence(piece, img);
    REQUIRE(h);
    CHECK(apply_isometry(*h, piece) == img);
  }
  PartialScenery other = PartialScenery::restrict(s, Box::cube(Point{0, 0}, 2));
  CHECK_THROWS_AS(find_equivalence(piece, other), ShapeMismatch);
  PartialScenery flipped = piece;
  flipped.set(Point{1, -1}, static_cast<Color>((*piece.color(Point{1, -1}) + 1) % 10));
  // A changed center cell is fixed by every isometry, so no match is possible.
  CHECK_FALSE(find_equivalence(piece, flipped));
}

TEST_CASE("scenery text format round trips") {
  for (int kappa : {2, 10, 26}) {
    for (int d : {1, 2, 3}) {
      Scenery s = generate_scenery(Box::cube(Point(std::vector<int>(static_cast<std::size_t>(d), 1)), 2), kappa, 77);
      std::stringstream ss;
      write_scenery(ss, s);
      Scenery t = read_scenery(ss);
      CHECK(t.box() == s.box());
      CHECK(t.colors() == s.colors());
      CHECK(t.seed() == s.seed());
      CHECK(t.kappa() == kappa);
    }
  }
  Scenery s = generate_scenery(Box::cube(2, 2), 10, 1);
  PartialScenery p = PartialScenery::restrict(s, s.box());
  p.set_raw(3, -1);
  std::stringstream ss;
  write_partial(ss, p);
  CHECK(ss.str().find('?') != std::string::npos);
  CHECK(read_partial(ss) == p);
  std::stringstream bad("2 10 0,0 1 5\n12\n");
  CHECK_THROWS_AS(read_scenery(bad), ParseError);
}

TEST_CASE("rows are written top row first") {
  std::stringstream ss;
  write_scenery(ss, fixtures::grid5());
  CHECK(ss.str() == "2 10 2,2 2 0\n19437\n50761\n43912\n61404\n27803\n");
}
