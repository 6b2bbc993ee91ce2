#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <random>

#include "covsieve/configuration.hpp"
#include "covsieve/measure.hpp"
#include "covsieve/sieve.hpp"

using namespace covsieve;

namespace {

using Rational = boost::multiprecision::cpp_rational;

struct RandomInstance {
  Box box;
  Configuration config;
  std::vector<double> deltas;
};

RandomInstance random_instance(std::mt19937_64& rng, int max_dim = 4, int max_size = 5) {
  const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim - 1));
  std::vector<int> sizes;
  for (int i = 0; i < n; ++i) {
    sizes.push_back(2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_size - 1)));
  }
  Box box(sizes);
  Configuration config;
  // one hyperplane per random nonempty fixed set, skipping duplicates
  const int tries = 1 + static_cast<int>(rng() % 6);
  for (int t = 0; t < tries; ++t) {
    std::vector<int> entries(static_cast<std::size_t>(n), Hyperplane::kFree);
    std::uint64_t mask = 0;
    while (mask == 0) mask = rng() % (std::uint64_t{1} << n);
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        entries[static_cast<std::size_t>(i)] =
            static_cast<int>(rng() % static_cast<std::uint64_t>(box.size(i))) + 1;
      }
    }
    Hyperplane h{entries};
    if (!config.find(h.fixed_mask())) config.insert(h);
  }
  std::vector<double> deltas;
  for (int i = 0; i < n; ++i) {
    deltas.push_back(static_cast<double>(rng() % 513) / 1024.0);  // [0, 1/2]
  }
  return {std::move(box), std::move(config), std::move(deltas)};
}

}  // namespace

TEST_CASE("the worked two-by-two step") {
  const Box box({2, 2});
  Configuration config;
  config.insert(parse_hyperplane("11", box));
  BasicSieve<double> sieve(box, config, {0.5, 0.5}, Measure::uniform(box, 0));
  sieve.step(1);

  // removal fractions at the second level: 1/2 over x = 1, 0 over x = 2
  const auto alpha = sieve.removal_fractions(2);
  REQUIRE(alpha.size() == 2);
  CHECK(alpha[0] == doctest::Approx(0.5));
  CHECK(alpha[1] == doctest::Approx(0.0));

  const double removed = sieve.step(2);
  CHECK(removed == doctest::Approx(0.0));
  const Measure& m = sieve.measure();
  CHECK(m.weight_of(box.encode({1, 1})) == nullptr);  // zeroed atom dropped
  CHECK(*m.weight_of(box.encode({1, 2})) == doctest::Approx(0.5));
  CHECK(*m.weight_of(box.encode({2, 1})) == doctest::Approx(0.25));
  CHECK(*m.weight_of(box.encode({2, 2})) == doctest::Approx(0.25));
  CHECK(sieve.residual_bound() == doctest::Approx(1.0));
}

TEST_CASE("trivial steps") {
  const Box box({3, 3});
  SUBCASE("no hyperplanes leaves the measure unchanged") {
    Configuration config;
    config.insert(parse_hyperplane("33", box));  // exposed at level 2 only
    BasicSieve<double> sieve(box, config, {0.3, 0.3}, Measure::uniform(box, 0));
    const double removed = sieve.step(1);
    CHECK(removed == 0.0);
    CHECK(sieve.measure().normalization_error() < 1e-15);
  }
  SUBCASE("zero delta keeps the extended measure and removes the plain mass") {
    Configuration config;
    config.insert(parse_hyperplane("1*", box));
    BasicSieve<double> sieve(box, config, {0.0, 0.0}, Measure::uniform(box, 0));
    const double removed = sieve.step(1);
    CHECK(removed == doctest::Approx(1.0 / 3));
    // with delta = 0 both update factors are 1
    for (const auto& [idx, w] : sieve.measure().atoms) CHECK(w == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("single hyperplane certifies non-covering and the oracle agrees") {
  const Box box({2, 2});
  Configuration config;
  config.insert(parse_hyperplane("11", box));
  const auto outcome = run_sieve<double>(box, config, {0.5, 0.5}, 0);
  CHECK(outcome.residual_bound == doctest::Approx(1.0));
  CHECK(outcome.certifies_noncover);
  CHECK(!check_covers(config, box).covered);
}

TEST_CASE("covering configuration never certifies non-covering") {
  const Box box({2, 2});
  Configuration config;
  config.insert(parse_hyperplane("1*", box));
  config.insert(parse_hyperplane("*1", box));
  config.insert(parse_hyperplane("22", box));
  CHECK(check_covers(config, box).covered);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const double d1 = static_cast<double>(rng() % 513) / 1024.0;
    const double d2 = static_cast<double>(rng() % 513) / 1024.0;
    const auto outcome = run_sieve<double>(box, config, {d1, d2}, 0);
    CHECK(outcome.residual_bound <= 1e-12);
  }
}

TEST_CASE("empty configuration keeps the whole mass") {
  const Box box({2, 3});
  const auto outcome = run_sieve<double>(box, Configuration{}, {0.25, 0.25}, 0);
  CHECK(outcome.residual_bound == doctest::Approx(1.0));
}

TEST_CASE("mass conservation on random instances") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto inst = random_instance(rng);
    BasicSieve<double> sieve(inst.box, inst.config, inst.deltas, Measure::uniform(inst.box, 0));
    for (int k = 1; k <= inst.box.dimension(); ++k) {
      sieve.step(k);
      CHECK(sieve.measure().normalization_error() < 1e-12);
    }
  }
}

TEST_CASE("measure relations across one step") {
  std::mt19937_64 rng(29);
  int checked = 0;
  while (checked < 500) {
    const auto inst = random_instance(rng);
    const int n = inst.box.dimension();
    BasicSieve<double> sieve(inst.box, inst.config, inst.deltas, Measure::uniform(inst.box, 0));
    for (int k = 1; k <= n; ++k) {
      const Measure before = sieve.measure();
      const auto news = sieve.exposed_at(k);
      sieve.step(k);
      const Measure& after = sieve.measure();
      const double delta = inst.deltas[static_cast<std::size_t>(k - 1)];

      // prior-level measurable sets keep their mass
      std::vector<std::uint64_t> prior;
      for (std::uint64_t id = 0; id < inst.box.prefix_count(k - 1); ++id) {
        if (rng() % 2) prior.push_back(id);
      }
      const double pb = before.mass_points(inst.box, k - 1, prior);
      const double pa = after.mass_points(inst.box, k - 1, prior);
      CHECK(pa == doctest::Approx(pb).epsilon(1e-10));

      // arbitrary sets gain at most the distortion cap
      std::vector<std::uint64_t> arb;
      for (std::uint64_t id = 0; id < inst.box.prefix_count(k); ++id) {
        if (rng() % 3 == 0) arb.push_back(id);
      }
      const double qa = after.mass_points(inst.box, k, arb);
      const double qb = before.mass_points(inst.box, k, arb);
      CHECK(qa <= qb / (1.0 - delta) + 1e-12);

      // subsets of the newly covered part only lose mass
      std::vector<std::uint64_t> covered;
      for (std::uint64_t id = 0; id < inst.box.prefix_count(k); ++id) {
        const Point p = inst.box.decode(id, k);
        for (const Hyperplane& h : news) {
          bool match = true;
          for (int j = 0; j < k; ++j) {
            if (h.is_fixed(j) && h.entry(j) != p[static_cast<std::size_t>(j)]) {
              match = false;
              break;
            }
          }
          if (match) {
            if (rng() % 2) covered.push_back(id);
            break;
          }
        }
      }
      const double ca = after.mass_points(inst.box, k, covered);
      const double cb = before.mass_points(inst.box, k, covered);
      CHECK(ca <= cb + 1e-12);
      ++checked;
    }
  }
}

TEST_CASE("zeroing below the distortion cap") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto inst = random_instance(rng);
    BasicSieve<double> sieve(inst.box, inst.config, inst.deltas, Measure::uniform(inst.box, 0));
    for (int k = 1; k <= inst.box.dimension(); ++k) {
      const Measure before = sieve.measure();
      const auto alpha = sieve.removal_fractions(k);
      const auto news = sieve.exposed_at(k);
      const double delta = inst.deltas[static_cast<std::size_t>(k - 1)];
      sieve.step(k);
      for (std::size_t a = 0; a < before.atoms.size(); ++a) {
        if (!(alpha[a] > 0) || alpha[a] > delta) continue;
        // every covered extension of this point must carry weight zero
        const auto x = before.atoms[a].first;
        const Point p = inst.box.decode(x, k - 1);
        for (const Hyperplane& h : news) {
          bool match = true;
          for (int j = 0; j < k - 1; ++j) {
            if (h.is_fixed(j) && h.entry(j) != p[static_cast<std::size_t>(j)]) {
              match = false;
              break;
            }
          }
          if (!match) continue;
          const auto id =
              x + static_cast<std::uint64_t>(h.entry(k - 1) - 1) * inst.box.prefix_count(k - 1);
          CHECK(sieve.measure().weight_of(id) == nullptr);
        }
      }
    }
  }
}

TEST_CASE("positive residual bound implies an uncovered witness") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 150; ++t) {
    const auto inst = random_instance(rng, 4, 6);
    const auto outcome = run_sieve<double>(inst.box, inst.config, inst.deltas, 0);
    if (outcome.residual_bound > 1e-9) {
      CHECK(!check_covers(inst.config, inst.box).covered);
    }
  }
}

TEST_CASE("exact rational run validates the floating path") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 25; ++t) {
    const auto inst = random_instance(rng, 3, 4);
    std::vector<Rational> rdeltas;
    for (double d : inst.deltas) rdeltas.emplace_back(Rational(d));
    const auto dbl = run_sieve<double>(inst.box, inst.config, inst.deltas, 0);
    const auto exact = run_sieve<Rational>(inst.box, inst.config, rdeltas, 0);
    CHECK(static_cast<double>(exact.residual_bound) ==
          doctest::Approx(dbl.residual_bound).epsilon(1e-10));
    CHECK(exact.final_measure.total() == Rational(1));
  }
}

TEST_CASE("hyperplane mass with fibre extension") {
  const Box box({2, 4, 6});
  const Measure m = Measure::uniform(box, 2);  // level 2 of 3
  CHECK(m.mass(box, parse_hyperplane("***", box)) == doctest::Approx(1.0));
  CHECK(m.mass(box, parse_hyperplane("1**", box)) == doctest::Approx(0.5));
  CHECK(m.mass(box, parse_hyperplane("1*3", box)) == doctest::Approx(0.5 / 6));
  CHECK(m.mass_points(box, 2, std::vector<std::uint64_t>{}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(m.mass_points(box, 4, std::vector<std::uint64_t>{0}), std::out_of_range);
}
