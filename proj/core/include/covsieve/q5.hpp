#pragma once

#include <array>
#include <optional>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/configuration.hpp"
#include "covsieve/lp.hpp"
#include "covsieve/lp_exact.hpp"
#include "covsieve/measure.hpp"

namespace covsieve::q5 {

// The base box for the small primes 3, 5, 7, 11 after the codimension-1
// removal shrinks each coordinate set by one.
inline constexpr int kCoordCount = 4;
inline constexpr std::array<int, 4> kSizes{2, 4, 6, 10};
inline constexpr std::array<int, 4> kPrimes{3, 5, 7, 11};
inline constexpr int kPointCount = 480;

// Fixed-coordinate sets with at least two elements, as bit masks over the
// four coordinates, listed in colexicographic order.  The first seven form
// the base stage; the last four are specified one by one during the staged
// descent.
inline constexpr std::array<std::uint8_t, 11> kFamily{3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15};
inline constexpr int kBaseSlots = 7;

Box q5_box();

/// A choice of one hyperplane per specified family slot.
struct Q5Config {
  // values[slot][coord]: fixed value, 0 on free/unspecified coordinates
  std::array<std::array<std::uint8_t, 4>, 11> values{};
  std::uint16_t present = 0;  // bit s set iff slot s is specified

  bool has(int slot) const { return present >> slot & 1; }
  void set(int slot, const std::array<std::uint8_t, 4>& vals);
  int specified_count() const;

  std::string to_string() const;  // comma-separated positional strings, colex order
  Configuration to_configuration() const;
  static Q5Config from_configuration(const Configuration& config);
  static Q5Config parse(const std::string& line);

  auto operator<=>(const Q5Config&) const = default;
};

/// True when no transposition reduction applies: along every coordinate the
/// fixed values, read over the slots in colexicographic order, never exceed
/// one plus the running maximum.
bool is_canonical(const Q5Config& config);

/// Repeatedly transpose a value with its predecessor whenever the value
/// exceeds every colex-earlier use of that coordinate by at least two, until
/// no pair triggers.  Value-relabelling invariance of the LP makes the result
/// equivalent to the input.
Q5Config canonical_reduce(Q5Config config);

std::optional<std::pair<int, int>> containment_violation(const Q5Config& config);

/// Canonical antichain choices of the seven base-slot hyperplanes, in
/// deterministic depth-first order.
std::vector<Q5Config> enumerate_base();

/// Canonical antichain expansions of `config` by the given unspecified slot.
std::vector<Q5Config> expand_slot(const Q5Config& config, int slot);

/// Number of canonical antichain configurations with all eleven slots
/// specified.  Long-running; shards over the base configurations.
std::uint64_t count_canonical_full(int workers = 0);

/// The measure-construction LP: one atom variable per uncovered point, one
/// bound variable per nonempty coordinate subset, a mass constraint per
/// hyperplane, normalization to a probability measure, and the weighted bound
/// sum as objective (the empty set contributes the constant 1/4).
struct Q5LP {
  lp::Model model;
  std::vector<int> r_points;  // uncovered point ids in variable order
};
Q5LP build_lp(const Q5Config& config);

struct ConfigEval {
  bool covered = false;   // no uncovered points: nothing to optimize
  double lp_value = 0;    // minimized objective, constant included
  std::array<double, 15> c{};  // bound variables at the optimum, index = mask - 1
  double unspecified_mass = 0;  // bound on the mass of the unspecified late slots
  double adjusted = 0;          // (value - p/4) / (1 - p)
  int lp_rounds = 0;
  int lp_iterations = 0;
};

/// Exact evaluation via a row-generation loop around the dense simplex: solve
/// with a working subset of mass constraints, add every violated constraint,
/// repeat until none is violated.  The final value equals the full model's
/// optimum (removing constraints can only lower a minimum, and the final
/// point is feasible for all of them).
ConfigEval evaluate_config(const Q5Config& config);

/// Evaluation plus the optimal measure on the uncovered set.
struct SolvedConfig {
  ConfigEval eval;
  Measure measure;
};
SolvedConfig solve_config(const Q5Config& config);

/// Measure extraction from a full-model solve.
Measure extract_measure(const Q5LP& lp, const lp::Solution& solution);

/// Certificate-grade confirmation: exact-rational re-solve of the final basis
/// of the row-generation LP, plus exact feasibility against the full model.
lp::ExactCertificate exact_certify(const Q5Config& config);

struct StagedOptions {
  double report_threshold = 9.018;
  int workers = 0;
  int max_stage = 4;  // how many of the late slots to descend through
};

struct StagedReport {
  std::uint64_t base_count = 0;
  // failures and expansions alternating:
  // base failures, +slot7 expansions, failures, +slot8 expansions, ...,
  // +slot10 expansions, final failures
  std::vector<std::uint64_t> cascade;
  std::vector<Q5Config> survivors;       // final-stage configurations at or above threshold
  std::vector<double> survivor_values;
  double global_max = 0;  // max certified bound over every accepted configuration
  std::uint64_t covered_count = 0;
  std::uint64_t lp_solves = 0;
};

StagedReport staged_search(const StagedOptions& options = {});

/// Per-configuration CSV row used by the CLI.
struct EvalRow {
  Q5Config config;
  int stage = 0;
  ConfigEval eval;
};

}  // namespace covsieve::q5
