#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "covsieve/box.hpp"
#include "covsieve/configuration.hpp"
#include "covsieve/hyperplane.hpp"

using namespace covsieve;

namespace {

Box table_box() { return Box({2, 4, 6, 10}, {3, 5, 7, 11}); }

Hyperplane random_hyperplane(const Box& box, std::mt19937_64& rng, bool allow_empty = true) {
  std::vector<int> entries(static_cast<std::size_t>(box.dimension()), Hyperplane::kFree);
  for (;;) {
    int fixed = 0;
    for (int i = 0; i < box.dimension(); ++i) {
      if (rng() % 2) {
        entries[static_cast<std::size_t>(i)] =
            static_cast<int>(rng() % static_cast<std::uint64_t>(box.size(i))) + 1;
        ++fixed;
      } else {
        entries[static_cast<std::size_t>(i)] = Hyperplane::kFree;
      }
    }
    if (fixed > 0 || allow_empty) return Hyperplane(entries);
  }
}

std::set<std::uint64_t> point_set(const Hyperplane& h, const Box& box) {
  std::set<std::uint64_t> out;
  const std::uint64_t total = box.point_count();
  for (std::uint64_t id = 0; id < total; ++id) {
    if (h.contains_point(box.decode(id, box.dimension()))) out.insert(id);
  }
  return out;
}

}  // namespace

TEST_CASE("box point count matches enumeration") {
  const Box box({2, 3, 4});
  CHECK(box.point_count() == 24);
  std::set<std::uint64_t> seen;
  for (int a = 1; a <= 2; ++a) {
    for (int b = 1; b <= 3; ++b) {
      for (int c = 1; c <= 4; ++c) seen.insert(box.encode({a, b, c}));
    }
  }
  CHECK(seen.size() == 24);
  CHECK(*seen.rbegin() == 23);
  CHECK(box.decode(box.encode({2, 1, 3}), 3) == Point{2, 1, 3});
  CHECK_THROWS_AS(Box({2, 1}), std::invalid_argument);
}

TEST_CASE("hyperplane parsing matches the table notation") {
  const Box box = table_box();
  const Hyperplane h = parse_hyperplane("2*1*", box);
  CHECK(h.entry(0) == 2);
  CHECK(!h.is_fixed(1));
  CHECK(h.entry(2) == 1);
  CHECK(!h.is_fixed(3));

  const Hyperplane all_free = parse_hyperplane("****", box);
  CHECK(all_free.fixed_mask() == 0);

  const Hyperplane letter = parse_hyperplane("***a", box);
  CHECK(letter.entry(3) == 10);
  CHECK(format_hyperplane(letter) == "***a");

  CHECK_THROWS_AS(parse_hyperplane("***", box), std::invalid_argument);
  CHECK_THROWS_AS(parse_hyperplane("3***", box), std::out_of_range);  // size 2 coordinate

  // a configuration rejects the all-free hyperplane
  Configuration c;
  CHECK_THROWS_AS(c.insert(all_free), std::invalid_argument);
}

TEST_CASE("parse/format round-trip on random hyperplanes") {
  const Box box({2, 4, 6, 10, 36, 61});
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const Hyperplane h = random_hyperplane(box, rng);
    CHECK(parse_hyperplane(format_hyperplane(h), box) == h);
  }
}

TEST_CASE("parallel test compares fixed sets only") {
  const Box box = table_box();
  CHECK(is_parallel(parse_hyperplane("11**", box), parse_hyperplane("12**", box)));
  CHECK(!is_parallel(parse_hyperplane("11**", box), parse_hyperplane("2*1*", box)));
  const Hyperplane a = parse_hyperplane("1*3*", box);
  CHECK(is_parallel(a, a));
}

TEST_CASE("intersection merges or empties") {
  const Box box = table_box();
  auto parse = [&](const char* s) { return parse_hyperplane(s, box); };
  CHECK(format_hyperplane(*intersect(parse("1***"), parse("*2**"))) == "12**");
  CHECK(!intersect(parse("1***"), parse("2***")).has_value());
  CHECK(format_hyperplane(*intersect(parse("11**"), parse("1*3*"))) == "113*");
}

TEST_CASE("intersection agrees with point-set intersection") {
  const Box box({2, 3, 4, 5});  // 120 points
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Hyperplane a = random_hyperplane(box, rng);
    const Hyperplane b = random_hyperplane(box, rng);
    const auto ab = intersect(a, b);
    std::set<std::uint64_t> pa = point_set(a, box);
    std::set<std::uint64_t> pb = point_set(b, box);
    std::set<std::uint64_t> want;
    for (std::uint64_t id : pa) {
      if (pb.count(id)) want.insert(id);
    }
    if (!ab.has_value()) {
      CHECK(want.empty());
    } else {
      CHECK(point_set(*ab, box) == want);
    }
  }
}

TEST_CASE("restriction keeps the requested coordinates") {
  const Box box = table_box();
  const Hyperplane h = parse_hyperplane("1233", box);
  CHECK(format_hyperplane(restrict_to(h, 0b0111)) == "123*");
  CHECK(restrict_to(h, 0b1111) == h);
  CHECK(restrict_to(h, 0).fixed_mask() == 0);
}

TEST_CASE("restriction composition law") {
  const Box box({2, 4, 6, 10, 12});
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const Hyperplane h = random_hyperplane(box, rng);
    const auto x = rng() % 32;
    const auto y = rng() % 32;
    CHECK(restrict_to(restrict_to(h, x), y) == restrict_to(h, x & y));
  }
}

TEST_CASE("containment agrees with point sets") {
  const Box box({2, 3, 4});
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const Hyperplane a = random_hyperplane(box, rng);
    const Hyperplane b = random_hyperplane(box, rng);
    const auto pa = point_set(a, box);
    const auto pb = point_set(b, box);
    const bool want = std::includes(pb.begin(), pb.end(), pa.begin(), pa.end());
    CHECK(is_subset(a, b) == want);
  }
}

TEST_CASE("cover check finds the first witness") {
  const Box box({2, 2});
  Configuration empty;
  const auto r1 = check_covers(empty, box);
  CHECK(!r1.covered);
  CHECK(*r1.witness == Point{1, 1});

  Configuration full;
  full.insert(parse_hyperplane("1*", box));
  full.insert(parse_hyperplane("*1", box));
  full.insert(parse_hyperplane("22", box));
  CHECK(check_covers(full, box).covered);

  CHECK_THROWS_AS(check_covers(empty, Box({100, 100, 100, 100, 100}), 1000), std::length_error);
}

TEST_CASE("configuration file format round-trips") {
  const Box box = table_box();
  const std::string line = "11**, 2*1*, *22*, 121*, 1**1, *3*2, 13*3, **34, 2*31, *232, 1233";
  const Configuration config = parse_configuration(line, box);
  CHECK(config.size() == 11);
  CHECK(format_configuration(config) == line);
  CHECK(config.is_antichain());

  std::istringstream file("# comment\n11**, 2*1*\n\n  # another\n*22*, 121*\n");
  const auto configs = read_configurations(file, box);
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].size() == 2);

  // inserting a parallel hyperplane is rejected
  Configuration c;
  c.insert(parse_hyperplane("11**", box));
  CHECK_THROWS_AS(c.insert(parse_hyperplane("12**", box)), std::invalid_argument);
}
