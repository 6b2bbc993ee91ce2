#include "covsieve/certificate.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "covsieve/util.hpp"
#include "covsieve/version.hpp"

namespace covsieve {

namespace {

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

}  // namespace

bool VerifyOptions::standard() const {
  const VerifyOptions defaults;
  return report_threshold == defaults.report_threshold &&
         certified_bound == defaults.certified_bound &&
         region_bound == defaults.region_bound && sweep_bound == defaults.sweep_bound &&
         imported_threshold == defaults.imported_threshold && grid_denom == defaults.grid_denom;
}

std::string VerifyOptions::digest() const {
  std::ostringstream os;
  os.precision(17);
  os << report_threshold << '|' << certified_bound << '|' << region_bound << '|' << sweep_bound
     << '|' << imported_threshold << '|' << grid_denom << '|' << run_full_count;
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

Certificate verify_all(const VerifyOptions& options) {
  Certificate cert;
  cert.tool_version = kVersion;
  cert.parameters_digest = options.digest();
  cert.parameters_standard = options.standard();

  q5::StagedOptions sopt;
  sopt.report_threshold = options.report_threshold;
  sopt.workers = options.workers;
  cert.small = q5::staged_search(sopt);
  cert.small_pass = cert.small.global_max < options.certified_bound;

  medium::SweepOptions mopt;
  mopt.region_bound = options.region_bound;
  mopt.grid_denom = options.grid_denom;
  mopt.workers = options.workers;
  cert.sweep = medium::sweep(mopt);
  cert.medium_pass =
      cert.sweep.all_residual_positive && cert.sweep.max_ratio <= options.sweep_bound;

  cert.termination = medium::termination_criteria(options.sweep_bound, options.imported_threshold);
  cert.chain_pass = cert.termination.certified;

  if (options.run_full_count) {
    cert.full_count = q5::count_canonical_full(options.workers);
  }

  cert.verified = cert.small_pass && cert.medium_pass && cert.chain_pass;
  return cert;
}

void write_certificate(std::ostream& os, const Certificate& cert, const VerifyOptions& options) {
  os << "covsieve certificate format 1\n";
  os << "tool-version: " << cert.tool_version << "\n";
  os << "parameters-digest: " << cert.parameters_digest << "\n";
  os << "parameters-standard: " << (cert.parameters_standard ? "yes" : "no") << "\n";
  os << "\n[small-primes]\n";
  os << "report-threshold: " << fixed9(options.report_threshold) << "\n";
  os << "certified-bound: " << fixed9(options.certified_bound) << "\n";
  os << "base-configurations: " << cert.small.base_count << "\n";
  os << "cascade:";
  for (std::uint64_t c : cert.small.cascade) os << " " << c;
  os << "\n";
  os << "covered-configurations: " << cert.small.covered_count << "\n";
  os << "lp-solves: " << cert.small.lp_solves << "\n";
  os << "global-max: " << fixed9(cert.small.global_max) << "\n";
  os << "survivors: " << cert.small.survivors.size() << "\n";
  for (std::size_t i = 0; i < cert.small.survivors.size(); ++i) {
    os << "survivor-" << i + 1 << ": " << cert.small.survivors[i].to_string() << "\n";
    os << "survivor-" << i + 1 << "-value: " << fixed9(cert.small.survivor_values[i]) << "\n";
  }
  os << "verdict: " << (cert.small_pass ? "pass" : "FAIL") << "\n";

  os << "\n[medium-sweep]\n";
  os << "region-bound: " << fixed9(options.region_bound) << "\n";
  os << "grid-denominator: " << options.grid_denom << "\n";
  os << "grid-points: " << cert.sweep.grid_points << "\n";
  os << "all-residuals-positive: " << (cert.sweep.all_residual_positive ? "yes" : "no") << "\n";
  os << "min-residual: " << fixed9(cert.sweep.min_residual) << "\n";
  os << "max-ratio: " << fixed9(cert.sweep.max_ratio) << "\n";
  os << "max-ratio-index: " << cert.sweep.argmax_index << "\n";
  os << "required-bound: " << fixed9(options.sweep_bound) << "\n";
  os << "verdict: " << (cert.medium_pass ? "pass" : "FAIL") << "\n";

  os << "\n[termination]\n";
  os << "ratio-bound: " << fixed9(options.sweep_bound) << "\n";
  os << "imported-threshold: " << fixed9(options.imported_threshold) << "\n";
  os << "large-index-test-rhs-at-21: " << fixed9(cert.termination.large_index_rhs) << "\n";
  os << "large-index-test-passes-at-21: " << (cert.termination.large_index_ok ? "yes" : "no")
     << "\n";
  os << "verdict: " << (cert.chain_pass ? "pass" : "FAIL") << "\n";

  if (cert.full_count) {
    os << "\n[full-enumeration]\n";
    os << "configurations: " << *cert.full_count << "\n";
  }

  os << "\n[result]\n";
  os << "verdict: " << (cert.verified ? "verified" : "NOT VERIFIED") << "\n";
}

}  // namespace covsieve
