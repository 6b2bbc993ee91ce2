#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "covsieve/moments.hpp"
#include "covsieve/q5.hpp"

using namespace covsieve;
using namespace covsieve::q5;

namespace {

const char* kWorstCase1 = "11**, 2*1*, *22*, 121*, 1**1, *3*2, 13*3, **34, 2*31, *232, 1233";
const char* kWorstCase2 = "11**, 2*1*, *22*, 121*, 1**1, *3*2, 13*3, **34, 2*33, *232, 1233";

std::mt19937_64& rng() {
  static std::mt19937_64 r(79);
  return r;
}

/// Random configuration over a colex prefix of the family, antichain
/// enforced, values otherwise unconstrained (not necessarily canonical).
Q5Config random_config(int slots) {
  for (;;) {
    Q5Config c;
    bool ok = true;
    for (int s = 0; s < slots && ok; ++s) {
      const int fmask = kFamily[static_cast<std::size_t>(s)];
      std::array<std::uint8_t, 4> vals{};
      for (int i = 0; i < 4 && ok; ++i) {
        if (fmask >> i & 1) {
          vals[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
              rng()() % static_cast<std::uint64_t>(kSizes[static_cast<std::size_t>(i)]) + 1);
        }
      }
      c.set(s, vals);
      if (containment_violation(c)) ok = false;
    }
    if (ok) return c;
  }
}

Q5Config permute_values(const Q5Config& config) {
  std::array<std::array<std::uint8_t, 11>, 4> perm{};
  for (int cidx = 0; cidx < 4; ++cidx) {
    std::vector<std::uint8_t> p(static_cast<std::size_t>(kSizes[static_cast<std::size_t>(cidx)]));
    for (std::size_t v = 0; v < p.size(); ++v) p[v] = static_cast<std::uint8_t>(v + 1);
    std::shuffle(p.begin(), p.end(), rng());
    for (std::size_t v = 0; v < p.size(); ++v) {
      perm[static_cast<std::size_t>(cidx)][v + 1] = p[v];
    }
  }
  Q5Config out = config;
  for (int s = 0; s < 11; ++s) {
    if (!config.has(s)) continue;
    for (int cidx = 0; cidx < 4; ++cidx) {
      const auto v = config.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(cidx)];
      if (v != 0) {
        out.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(cidx)] =
            perm[static_cast<std::size_t>(cidx)][v];
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("table strings round-trip through the config type") {
  const Q5Config c = Q5Config::parse(kWorstCase1);
  CHECK(c.specified_count() == 11);
  CHECK(c.to_string() == kWorstCase1);
  CHECK(is_canonical(c));
  CHECK(!containment_violation(c).has_value());
  CHECK(canonical_reduce(c) == c);
}

TEST_CASE("the colex-first hyperplane reduces to all ones") {
  Q5Config c;
  c.set(0, {1, 3, 0, 0});  // first slot fixes coordinates of 3 and 5
  const Q5Config r = canonical_reduce(c);
  CHECK(r.values[0][0] == 1);
  CHECK(r.values[0][1] == 1);
  CHECK(is_canonical(r));
}

TEST_CASE("canonical reduction reaches a fixed point on random configs") {
  for (int t = 0; t < 200; ++t) {
    const Q5Config c = random_config(7);
    const Q5Config r = canonical_reduce(c);
    CHECK(is_canonical(r));
    CHECK(canonical_reduce(r) == r);
  }
}

TEST_CASE("base enumeration count and canonicity") {
  const auto base = enumerate_base();
  CHECK(base.size() == 7637);
  std::set<Q5Config> distinct(base.begin(), base.end());
  CHECK(distinct.size() == base.size());
  for (std::size_t i = 0; i < base.size(); i += 97) {
    CHECK(is_canonical(base[i]));
    CHECK(canonical_reduce(base[i]) == base[i]);
    CHECK(!containment_violation(base[i]).has_value());
  }
}

TEST_CASE("full LP model shape") {
  const Q5Config c = Q5Config::parse(kWorstCase1);
  const Q5LP lp = build_lp(c);
  // one row per hyperplane of every nonempty subset, plus normalization
  CHECK(lp.model.rows.size() == 1154 + 1);
  CHECK(lp.model.num_vars() == lp.r_points.size() + 15);
  CHECK(lp.model.objective_constant == doctest::Approx(0.25));
  // the first subset fixes only the size-2 coordinate: exactly two rows
  // bound its variable, and they are the first two by construction
  const std::size_t nx = lp.r_points.size();
  int rows_on_c2 = 0;
  for (const auto& row : lp.model.rows) {
    if (row.coeffs[nx] != 0.0) ++rows_on_c2;
  }
  CHECK(rows_on_c2 == 2);
  CHECK(lp.model.rows[0].coeffs[nx] == -1.0);
  CHECK(lp.model.rows[1].coeffs[nx] == -1.0);
}

TEST_CASE("worst-case configurations evaluate to the published value") {
  for (const char* line : {kWorstCase1, kWorstCase2}) {
    const Q5Config c = Q5Config::parse(line);
    const ConfigEval eval = evaluate_config(c);
    CHECK(!eval.covered);
    CHECK(eval.lp_value == doctest::Approx(9.018070).epsilon(2e-6));
    CHECK(eval.unspecified_mass == 0.0);
    CHECK(eval.adjusted == doctest::Approx(eval.lp_value));
  }
}

TEST_CASE("row-generation value equals the full-model value") {
  for (int t = 0; t < 12; ++t) {
    const Q5Config c = random_config(7);
    const ConfigEval fast = evaluate_config(c);
    const Q5LP full = build_lp(c);
    const auto slow = lp::solve(full.model);
    REQUIRE(slow.status == lp::Status::optimal);
    CHECK(fast.lp_value == doctest::Approx(slow.objective).epsilon(1e-9));
  }
  // and at full depth on a published row
  const Q5Config c = Q5Config::parse(kWorstCase1);
  const auto slow = lp::solve(build_lp(c).model);
  REQUIRE(slow.status == lp::Status::optimal);
  CHECK(slow.objective == doctest::Approx(9.018070).epsilon(2e-6));
}

TEST_CASE("toy analogue of the measure LP") {
  // two coordinates of size two, no hyperplanes: uniform is optimal
  lp::Model m;
  const int nx = 4;
  m.objective.assign(nx + 3, 0.0);
  m.objective_constant = 0.25;
  m.objective[nx + 0] = 3 - 0.75;   // first coordinate fixed
  m.objective[nx + 1] = 3 - 0.75;   // second coordinate fixed
  m.objective[nx + 2] = 9 - 0.75;   // both fixed
  auto row = [&](std::initializer_list<int> pts, int ci) {
    lp::Constraint r;
    r.coeffs.assign(nx + 3, 0.0);
    for (int p : pts) r.coeffs[static_cast<std::size_t>(p)] = 1.0;
    r.coeffs[static_cast<std::size_t>(nx + ci)] = -1.0;
    r.relation = lp::Relation::le;
    r.rhs = 0.0;
    m.rows.push_back(std::move(r));
  };
  row({0, 1}, 0);  // value 1 of the first coordinate: points (1,1),(1,2)
  row({2, 3}, 0);
  row({0, 2}, 1);
  row({1, 3}, 1);
  row({0}, 2);
  row({1}, 2);
  row({2}, 2);
  row({3}, 2);
  lp::Constraint norm;
  norm.coeffs.assign(nx + 3, 0.0);
  for (int p = 0; p < nx; ++p) norm.coeffs[static_cast<std::size_t>(p)] = 1.0;
  norm.relation = lp::Relation::eq;
  norm.rhs = 1.0;
  m.rows.push_back(std::move(norm));
  const auto s = lp::solve(m);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(4.5625));
}

TEST_CASE("optimal measure reproduces its own bound table") {
  const Q5Config c = Q5Config::parse(kWorstCase1);
  const SolvedConfig solved = solve_config(c);
  REQUIRE(!solved.eval.covered);
  const Box box = q5_box();
  const auto table = max_mass_table(box, solved.measure);
  // recomputed subset maxima match the LP bound variables at the optimum
  for (int fmask = 1; fmask < 16; ++fmask) {
    CHECK(table[static_cast<std::size_t>(fmask)] <=
          solved.eval.c[static_cast<std::size_t>(fmask - 1)] + 1e-8);
  }
  // the weighted sum recomputed from the measure equals the LP objective
  double value = 0.25;
  for (int fmask = 1; fmask < 16; ++fmask) {
    double w = 1.0;
    for (int b = 0; b < std::popcount(static_cast<unsigned>(fmask)); ++b) w *= 3;
    value += (w - 0.75) * table[static_cast<std::size_t>(fmask)];
  }
  CHECK(value == doctest::Approx(solved.eval.lp_value).epsilon(1e-7));
  // the measure is supported on the uncovered set and normalized
  CHECK(solved.measure.normalization_error() < 1e-9);
}

TEST_CASE("LP optimum is invariant under value relabelling") {
  int done = 0;
  for (int t = 0; t < 100; ++t) {
    const Q5Config c = random_config(7);
    const Q5Config p = permute_values(c);
    if (containment_violation(p)) continue;  // permutation preserves antichain, sanity only
    const double v1 = evaluate_config(c).lp_value;
    const double v2 = evaluate_config(p).lp_value;
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("canonical reduction preserves the LP optimum") {
  for (int t = 0; t < 30; ++t) {
    const Q5Config c = random_config(7);
    const Q5Config r = canonical_reduce(c);
    CHECK(evaluate_config(c).lp_value == doctest::Approx(evaluate_config(r).lp_value).epsilon(1e-9));
  }
}

TEST_CASE("specifying another hyperplane never lowers the optimum") {
  for (int t = 0; t < 25; ++t) {
    const Q5Config c = random_config(7);
    const auto expansions = expand_slot(c, kBaseSlots);
    if (expansions.empty()) continue;
    const double base_value = evaluate_config(c).lp_value;
    const auto& pick = expansions[rng()() % expansions.size()];
    CHECK(evaluate_config(pick).lp_value >= base_value - 1e-9);
  }
}

TEST_CASE("renormalization bound dominates direct recomputation") {
  const Box box = q5_box();
  int done = 0;
  while (done < 100) {
    const Q5Config c = random_config(7);
    const SolvedConfig solved = solve_config(c);
    if (solved.eval.covered) continue;
    // pick a concrete choice of the four remaining hyperplanes
    Q5Config full = c;
    bool ok = true;
    for (int s = kBaseSlots; s < 11 && ok; ++s) {
      const auto ex = expand_slot(full, s);
      if (ex.empty()) {
        ok = false;
        break;
      }
      full = ex[rng()() % ex.size()];
    }
    if (!ok) continue;

    // zero the measure on the union of the late hyperplanes and rescale
    const Configuration late_only = [&] {
      Configuration out;
      for (int s = kBaseSlots; s < 11; ++s) {
        std::vector<int> entries(4, Hyperplane::kFree);
        for (int i = 0; i < 4; ++i) {
          entries[static_cast<std::size_t>(i)] =
              full.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        }
        out.insert(Hyperplane(std::move(entries)));
      }
      return out;
    }();
    Measure zeroed = solved.measure;
    double removed = 0.0;
    std::erase_if(zeroed.atoms, [&](const auto& atom) {
      const Point p = box.decode(atom.first, 4);
      for (const Hyperplane& h : late_only.hyperplanes()) {
        if (h.contains_point(p)) {
          removed += atom.second;
          return true;
        }
      }
      return false;
    });
    if (zeroed.atoms.empty()) continue;
    for (auto& [idx, w] : zeroed.atoms) w /= 1.0 - removed;

    const auto table = max_mass_table(box, zeroed);
    double value = 0.25;
    for (int fmask = 1; fmask < 16; ++fmask) {
      double w = 1.0;
      for (int b = 0; b < std::popcount(static_cast<unsigned>(fmask)); ++b) w *= 3;
      value += (w - 0.75) * table[static_cast<std::size_t>(fmask)];
    }
    // measured mass of the union is within the LP bound, and the adjusted
    // value dominates the recomputed one
    CHECK(removed <= solved.eval.unspecified_mass + 1e-8);
    const double bound = (solved.eval.lp_value - removed / 4.0) / (1.0 - removed);
    CHECK(value <= bound + 1e-8);
    CHECK(solved.eval.adjusted >= bound - 1e-8);
    ++done;
  }
}

TEST_CASE("bound-table inequalities of extracted measures") {
  for (int t = 0; t < 10; ++t) {
    const Q5Config c = random_config(7);
    const SolvedConfig solved = solve_config(c);
    if (solved.eval.covered) continue;
    MomentProfile p;
    p.prefix_len = 4;
    p.max_mass = max_mass_table(q5_box(), solved.measure);
    const double c1 = p.mass_poly(4, 1.0);
    const double c3 = p.mass_poly(4, 3.0);
    CHECK(c1 >= 1.0 - 1e-9);
    CHECK(c3 - 1.0 >= 3.0 * (c1 - 1.0) - 1e-9);
  }
}

TEST_CASE("exact certification of a published worst case") {
  const auto cert = exact_certify(Q5Config::parse(kWorstCase1));
  REQUIRE_MESSAGE(cert.valid, cert.failure);
  CHECK(cert.objective_decimal.substr(0, 8) == "9.018070");
}
