#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/configuration.hpp"

namespace covsieve::covers {

struct APEntry {
  std::int64_t residue = 0;
  std::int64_t modulus = 0;
};

/// A finite list of arithmetic progressions residue + modulus * Z.
struct APSystem {
  std::vector<APEntry> entries;
};

struct Translation {
  Configuration config;
  Box box;
};

/// Residue-system view of a progression list over the given odd primes: the
/// progression with modulus p_{i1} ... p_{ik} becomes the hyperplane fixing
/// those coordinates to the residues (with residue 0 encoded as the value p).
/// Moduli must be squarefree products of the listed primes; distinct moduli
/// give pairwise non-parallel hyperplanes.
Translation ap_to_hyperplanes(const APSystem& system, const std::vector<int>& primes);
APSystem hyperplanes_to_ap(const Configuration& config, const std::vector<int>& primes);

struct GreedyStep {
  std::uint64_t fixed_mask = 0;
  Hyperplane chosen;
  std::uint64_t newly_covered = 0;
  std::uint64_t remaining_before = 0;
};

struct GreedyResult {
  Configuration config;
  bool covered = false;
  std::vector<GreedyStep> steps;
  bool hypothesis_holds = false;  // prod (1 + 1/q_k) >= n log n with n >= 3
  double hypothesis_lhs = 0;
  double hypothesis_rhs = 0;
};

/// Greedy cover: fixed sets are visited by increasing cardinality and in
/// colexicographic order within a cardinality; for each set the hyperplane
/// covering the most still-uncovered points is chosen, ties broken by the
/// lexicographically smallest value tuple.  Each chosen hyperplane covers at
/// least remaining / prod(sizes over the fixed set) points.
GreedyResult greedy_cover(const Box& box, std::uint64_t cap = 10'000'000);

struct SharpnessResult {
  std::vector<int> sizes;  // q_1 .. q_n; the first C entries are the floor value 2
  double product_lhs = 0;  // prod over k > C of (1 + 1/q_k)
  double rhs = 0;          // (n - C) log(n - C)
  bool inequality_holds = false;
  bool lemma_applies = false;  // inequality holds and n - C >= 3
  std::optional<GreedyResult> cover;  // on coordinates C+1..n when small enough
};

/// Near-sharpness family: q_k = max(2, floor((1 - 2/log k) k)) for k > C and
/// q_k = 2 for k <= C.  Every hyperplane of the returned cover avoids the
/// first C coordinates.
SharpnessResult sharpness_sequence(int cutoff, int n, std::uint64_t greedy_cap = 10'000'000);

}  // namespace covsieve::covers
