#include "doctest.h"
#include "presslab/error.hpp"
#include "presslab/words.hpp"
#include "test_helpers.hpp"

using namespace presslab;
using namespace presslab::testing;

TEST_CASE("level_size matches the word-count formula") {
  CHECK(level_size(2, 3) == 7);  // 1 + 2 + 4
  CHECK(level_size(1, 5) == 5);
  CHECK(level_size(3, 1) == 1);  // identity only
  CHECK(level_size(2, 10) == 1023);
}

TEST_CASE("level_size fails loudly on overflow") {
  CHECK_THROWS_AS(level_size(10, 21), OverflowError);
  CHECK_THROWS_AS(level_size(2, 66), OverflowError);
  CHECK(level_size(2, 63) > 0);  // still representable
}

TEST_CASE("word level enumerates empty word first and the right count") {
  WordLevel lvl(2, 3);
  Word w;
  REQUIRE(lvl.next(w));
  CHECK(w.letters.empty());
  std::size_t count = 1;
  while (lvl.next(w)) {
    ++count;
    CHECK(w.letters.size() < 3);
    for (int letter : w.letters) CHECK((letter == 0 || letter == 1));
  }
  CHECK(count == level_size(2, 3));
}

TEST_CASE("orbit tables match direct iteration") {
  System doubling = doubling_map();
  OrbitTable t1 = orbit_images(doubling, Point::torus({0.3}), 1);
  CHECK(t1.images.size() == 1);
  CHECK(t1.images[0].coord(0) == doctest::Approx(0.3));

  OrbitTable t3 = orbit_images(doubling, Point::torus({0.3}), 3);
  REQUIRE(t3.images.size() == 3);
  CHECK(t3.images[0].coord(0) == doctest::Approx(0.3));
  CHECK(t3.images[1].coord(0) == doctest::Approx(0.6));
  CHECK(t3.images[2].coord(0) == doctest::Approx(0.2));

  System two = two_three_map();
  OrbitTable t2 = orbit_images(two, Point::torus({0.1}), 2);
  auto map = t2.as_map();
  REQUIRE(map.size() == 3);
  CHECK(map.at(Word{{}}).coord(0) == doctest::Approx(0.1));
  CHECK(map.at(Word{{0}}).coord(0) == doctest::Approx(0.2));
  CHECK(map.at(Word{{1}}).coord(0) == doctest::Approx(0.3));
}

TEST_CASE("orbit table size equals the level size") {
  System two = two_three_map();
  for (int n = 1; n <= 6; ++n) {
    OrbitTable t = orbit_images(two, Point::torus({0.137}), n);
    CHECK(t.images.size() == level_size(2, n));
  }
  System shift = full_shift(2, 2, 2);
  for (int n = 1; n <= 5; ++n) {
    OrbitTable t = orbit_images(shift, sym({0, 1, 0, 1, 1, 0}), n);
    CHECK(t.images.size() == level_size(2, n));
  }
}

TEST_CASE("prefix consistency: image of w = last letter applied to parent image") {
  System two = two_three_map();
  OrbitTable t = orbit_images(two, Point::torus({0.41}), 5);
  for (std::size_t i = 1; i < t.images.size(); ++i) {
    Point expected = two.apply(t.letter[i], t.images[t.parent[i]]);
    CHECK(Point::identical(expected, t.images[i]));
  }
  // rebuilding each word from scratch agrees with the table
  for (std::size_t i = 0; i < t.images.size(); ++i) {
    Word w = t.word_at(i);
    Point p = Point::torus({0.41});
    for (int letter : w.letters) p = two.apply(letter, p);
    CHECK(Point::identical(p, t.images[i]));
  }
}

TEST_CASE("orbit cap forces streaming for huge levels") {
  System two = two_three_map();
  CHECK_THROWS(orbit_images(two, Point::torus({0.2}), 25, 1000));
  std::size_t visits = 0;
  for_each_orbit_image(two, Point::torus({0.2}), 6,
                       [&](const Point&) { ++visits; });
  CHECK(visits == level_size(2, 6));
}

TEST_CASE("depth underflow propagates through orbits") {
  System shift = full_shift();
  Point tailless = Point::symbolic({1, 0, 1}, {});
  CHECK_THROWS_AS(orbit_images(shift, tailless, 5), DepthUnderflow);
}
