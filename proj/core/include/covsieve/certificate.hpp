#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "covsieve/medium.hpp"
#include "covsieve/q5.hpp"

namespace covsieve {

/// Knobs of the end-to-end verification.  The defaults are the pinned
/// certificate parameters; running with anything else marks the certificate
/// as non-standard.
struct VerifyOptions {
  double report_threshold = 9.018;     // staged-descent acceptance gate
  double certified_bound = 9.018071;   // claimed small-prime bound
  double region_bound = 9.019;         // admissible region for the sweep
  double sweep_bound = 138.874;        // claimed ratio bound over the grid
  double imported_threshold = 138.877; // termination constant, used as given
  std::int64_t grid_denom = 10'000;
  int workers = 0;
  bool run_full_count = false;  // long-running full-depth configuration count

  bool standard() const;
  std::string digest() const;  // deterministic digest of the parameter set
};

struct Certificate {
  std::string tool_version;
  std::string parameters_digest;
  bool parameters_standard = true;

  q5::StagedReport small;
  bool small_pass = false;

  medium::SweepResult sweep;
  bool medium_pass = false;

  medium::TerminationVerdict termination;
  bool chain_pass = false;

  std::optional<std::uint64_t> full_count;

  bool verified = false;
};

/// Runs the staged small-prime search, the medium-prime grid sweep, and the
/// termination-threshold chain; verified iff every stage passes its bound.
Certificate verify_all(const VerifyOptions& options = {});

/// Deterministic structured text form; timings never appear here.
void write_certificate(std::ostream& os, const Certificate& cert, const VerifyOptions& options);

}  // namespace covsieve
