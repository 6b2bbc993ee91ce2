// Command-line front end: batch verification of the covering-system
// certificates plus the constructive and diagnostic tools.
//
// Exit codes: 0 success/verified, 1 certificate failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covsieve/certificate.hpp"
#include "covsieve/covers.hpp"
#include "covsieve/lp_exact.hpp"
#include "covsieve/medium.hpp"
#include "covsieve/moments.hpp"
#include "covsieve/q5.hpp"
#include "covsieve/sieve.hpp"
#include "covsieve/util.hpp"
#include "covsieve/version.hpp"

namespace {

using namespace covsieve;

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

std::string fixed(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct CommandConfig {
  int workers = 0;
  std::uint64_t seed = 0;  // reserved for property-test harnesses; certificates ignore it
};

int cmd_verify_all(const CommandConfig& common, const VerifyOptions& opts,
                   const std::string& out_path, const std::string& sweep_csv) {
  Certificate cert = verify_all(opts);
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    write_certificate(f, cert, opts);
  }
  write_certificate(std::cout, cert, opts);
  if (!sweep_csv.empty()) {
    auto f = open_out(sweep_csv);
    f << "i,u,v,ratio,residual\n";
    for (const auto& row : cert.sweep.ledger) {
      f << row.index << ',' << fixed(row.u, 4) << ',' << fixed(row.v, 6) << ','
        << fixed(row.ratio) << ',' << fixed(row.residual) << '\n';
    }
  }
  (void)common;
  return cert.verified ? 0 : 1;
}

int cmd_enumerate_small(const CommandConfig& common, int stage_depth, double threshold,
                        int shard_index, int shard_count, bool enumerate_only, bool full_count,
                        const std::string& out_path) {
  if (full_count) {
    const std::uint64_t n = q5::count_canonical_full(common.workers);
    std::cout << "full-depth canonical configurations: " << n << "\n";
    return 0;
  }
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  if (enumerate_only) {
    std::vector<q5::Q5Config> base = q5::enumerate_base();
    *os << "configuration\n";
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (shard_count > 1 && static_cast<int>(i % static_cast<std::size_t>(shard_count)) !=
                                 shard_index) {
        continue;
      }
      *os << base[i].to_string() << "\n";
    }
    std::cerr << "base configurations: " << base.size() << "\n";
    return 0;
  }

  // staged search with per-configuration CSV rows
  std::vector<q5::Q5Config> level = q5::enumerate_base();
  if (shard_count > 1) {
    std::vector<q5::Q5Config> mine;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (static_cast<int>(i % static_cast<std::size_t>(shard_count)) == shard_index) {
        mine.push_back(level[i]);
      }
    }
    level = std::move(mine);
  }
  *os << "configuration,stage,lp_value,p_bound,adjusted\n";
  double global_max = 0;
  for (int stage = 0; stage <= stage_depth; ++stage) {
    std::vector<q5::ConfigEval> evals(level.size());
    parallel_for(level.size(), common.workers,
                 [&](std::size_t i) { evals[i] = q5::evaluate_config(level[i]); });
    std::vector<q5::Q5Config> fails;
    for (std::size_t i = 0; i < level.size(); ++i) {
      *os << '"' << level[i].to_string() << "\"," << stage << ',' << fixed(evals[i].lp_value)
          << ',' << fixed(evals[i].unspecified_mass) << ',' << fixed(evals[i].adjusted) << '\n';
      if (!evals[i].covered && !(evals[i].adjusted < threshold)) fails.push_back(level[i]);
      if (!evals[i].covered) global_max = std::max(global_max, evals[i].adjusted);
    }
    std::cerr << "stage " << stage << ": " << level.size() << " configurations, "
              << fails.size() << " above threshold\n";
    if (stage == stage_depth) break;
    std::vector<q5::Q5Config> next;
    for (const auto& f : fails) {
      auto ex = q5::expand_slot(f, q5::kBaseSlots + stage);
      next.insert(next.end(), ex.begin(), ex.end());
    }
    level = std::move(next);
  }
  std::cerr << "max adjusted value: " << fixed(global_max) << "\n";
  return 0;
}

int cmd_check_config(const std::string& path, bool exact, int /*workers*/) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("check-config", "cannot open " + path);
  const Box box = q5::q5_box();
  const auto configs = read_configurations(in, box);
  bool all_ok = true;
  for (const auto& config : configs) {
    const auto q = q5::Q5Config::from_configuration(config);
    const auto eval = q5::evaluate_config(q);
    std::cout << q.to_string() << "\n";
    if (eval.covered) {
      std::cout << "  covers the box; no measure exists\n";
      continue;
    }
    std::cout << "  lp-value: " << fixed(eval.lp_value) << "\n";
    std::cout << "  unspecified-mass-bound: " << fixed(eval.unspecified_mass) << "\n";
    std::cout << "  adjusted-value: " << fixed(eval.adjusted) << "\n";
    if (exact) {
      const auto cert = q5::exact_certify(q);
      if (cert.valid) {
        std::cout << "  exact-value: " << cert.objective << " = " << cert.objective_decimal
                  << "...\n";
      } else {
        std::cout << "  exact-resolve FAILED: " << cert.failure << "\n";
        all_ok = false;
      }
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_sweep_medium(const CommandConfig& common, std::int64_t grid_denom, double region,
                     double tol, int passes, const std::string& out_path) {
  medium::SweepOptions opts;
  opts.grid_denom = grid_denom;
  opts.region_bound = region;
  opts.workers = common.workers;
  opts.optimize.tol = tol;
  opts.optimize.max_passes = passes;
  const auto res = medium::sweep(opts);
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    f << "i,u,v,ratio,residual,deltas\n";
    for (const auto& row : res.ledger) {
      f << row.index << ',' << fixed(row.u, 4) << ',' << fixed(row.v, 6) << ','
        << fixed(row.ratio) << ',' << fixed(row.residual) << ',';
      for (std::size_t k = 0; k < row.deltas.size(); ++k) {
        f << (k ? " " : "") << fixed(row.deltas[k], 6);
      }
      f << '\n';
    }
  }
  std::cout << "grid-points: " << res.grid_points << "\n";
  std::cout << "max-ratio: " << fixed(res.max_ratio) << " at i = " << res.argmax_index << "\n";
  std::cout << "min-residual: " << fixed(res.min_residual) << "\n";
  std::cout << "all-residuals-positive: " << (res.all_residual_positive ? "yes" : "no") << "\n";
  return res.all_residual_positive ? 0 : 1;
}

int cmd_gmm_check(const std::string& formula, const std::string& list_path, double eps,
                  int min_index, int cutoff, int n, bool find_cutoff,
                  const std::string& out_path) {
  std::vector<std::int64_t> sizes;
  if (!list_path.empty()) {
    std::ifstream in(list_path);
    if (!in) throw CLI::ValidationError("gmm-check", "cannot open " + list_path);
    std::int64_t q;
    while (in >> q) sizes.push_back(q);
  } else {
    // formula a*k+b
    double a = 0, b = 0;
    if (std::sscanf(formula.c_str(), "%lf*k+%lf", &a, &b) != 2) {
      throw CLI::ValidationError("gmm-check", "size formula must look like '4*k+4'");
    }
    for (int k = 1; k <= n; ++k) {
      sizes.push_back(static_cast<std::int64_t>(a * k + b));
    }
  }
  if (find_cutoff) {
    const int c = gmm_smallest_cutoff(sizes, eps, min_index);
    if (c < 0) {
      std::cout << "no cutoff certifies the sequence up to n = " << sizes.size() << "\n";
      return 1;
    }
    std::cout << "smallest certifying cutoff: " << c << "\n";
    GmmOptions opt{sizes, eps, min_index, c};
    std::cout << "certificate sum: " << fixed(gmm_check(opt).sum, 12) << "\n";
    return 0;
  }
  GmmOptions opt{sizes, eps, min_index, cutoff};
  const auto res = gmm_check(opt);
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    f << "k,partial_sum\n";
    for (std::size_t i = 0; i < res.partial_sums.size(); ++i) {
      f << cutoff + 1 + static_cast<int>(i) << ',' << fixed(res.partial_sums[i], 12) << '\n';
    }
  }
  std::cout << "sum: " << fixed(res.sum, 12) << "\n";
  std::cout << (res.certified ? "certified: the hyperplane family cannot cover the box\n"
                              : "not certified: sum is not below 1\n");
  return res.certified ? 0 : 1;
}

int cmd_greedy_cover(const std::string& box_csv, const std::string& sharp_csv,
                     std::uint64_t cap) {
  if (!sharp_csv.empty()) {
    const auto cn = parse_int_list(sharp_csv);
    if (cn.size() != 2) {
      throw CLI::ValidationError("greedy-cover", "--sharpness wants C,n");
    }
    const auto res = covers::sharpness_sequence(cn[0], cn[1], cap);
    std::cout << "sizes:";
    for (int q : res.sizes) std::cout << ' ' << q;
    std::cout << "\nproduct-lhs: " << fixed(res.product_lhs, 6) << "\n";
    std::cout << "rhs: " << fixed(res.rhs, 6) << "\n";
    std::cout << "inequality-holds: " << (res.inequality_holds ? "yes" : "no") << "\n";
    if (res.cover) {
      std::cout << "cover-on-tail-coordinates: " << (res.cover->covered ? "covered" : "partial")
                << "\n";
      std::cout << format_configuration(res.cover->config) << "\n";
    } else {
      std::cout << "tail box too large for the greedy cap\n";
    }
    return 0;
  }
  const Box box(parse_int_list(box_csv));
  const auto res = covers::greedy_cover(box, cap);
  std::cout << format_configuration(res.config) << "\n";
  std::cerr << (res.covered ? "covered" : "residual nonempty") << "; hypothesis "
            << (res.hypothesis_holds ? "holds" : "fails") << " (lhs "
            << fixed(res.hypothesis_lhs, 4) << ", rhs " << fixed(res.hypothesis_rhs, 4)
            << ")\n";
  return res.covered ? 0 : 1;
}

int cmd_ap_translate(const std::string& primes_csv, const std::string& in_path, bool to_ap,
                     const std::string& out_path) {
  const auto primes = parse_int_list(primes_csv);
  std::ifstream in(in_path);
  if (!in) throw CLI::ValidationError("ap-translate", "cannot open " + in_path);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  if (to_ap) {
    const Box box(primes);
    for (const auto& config : read_configurations(in, box)) {
      const auto sys = covers::hyperplanes_to_ap(config, primes);
      for (const auto& e : sys.entries) *os << e.residue << ' ' << e.modulus << '\n';
    }
  } else {
    covers::APSystem sys;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::stringstream ss(line);
      covers::APEntry e;
      if (ss >> e.residue >> e.modulus) sys.entries.push_back(e);
    }
    const auto tr = covers::ap_to_hyperplanes(sys, primes);
    *os << format_configuration(tr.config) << '\n';
  }
  return 0;
}

int cmd_sieve_run(const std::string& box_csv, const std::string& config_path,
                  const std::string& deltas_csv, int start_level, const std::string& out_path) {
  const Box box(parse_int_list(box_csv));
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("sieve-run", "cannot open " + config_path);
  const auto configs = read_configurations(in, box);
  if (configs.size() != 1) {
    throw CLI::ValidationError("sieve-run", "expected exactly one configuration line");
  }
  const auto deltas = parse_double_list(deltas_csv);
  if (static_cast<int>(deltas.size()) != box.dimension() - start_level) {
    throw CLI::ValidationError("sieve-run", "need one delta per level above the start");
  }
  const auto outcome = run_sieve<double>(box, configs[0], deltas, start_level);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  *os << "k,removed_mass,residual_bound\n";
  double mu = 1.0;
  for (const auto& [k, removed] : outcome.removed) {
    mu -= removed;
    *os << k << ',' << fixed(removed, 12) << ',' << fixed(mu, 12) << '\n';
  }
  std::cerr << "final residual bound: " << fixed(outcome.residual_bound, 12) << "; "
            << (outcome.certifies_noncover ? "does not cover" : "no certificate") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covering-system sieve verification tools"};
  app.set_version_flag("--version", covsieve::kVersion);
  app.require_subcommand(1);

  CommandConfig common;
  app.add_option("--workers", common.workers,
                 "worker threads (default: COVSIEVE_WORKERS or hardware)");
  app.add_option("--seed", common.seed,
                 "reserved for property-test harnesses; never affects certificates");

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run the full certificate pipeline");
  VerifyOptions vopts;
  std::string cert_out, sweep_csv;
  verify->add_option("--threshold", vopts.report_threshold, "staged-descent gate");
  verify->add_option("--certified-bound", vopts.certified_bound, "small-prime bound to certify");
  verify->add_option("--region", vopts.region_bound, "sweep region bound");
  verify->add_option("--sweep-bound", vopts.sweep_bound, "ratio bound over the grid");
  verify->add_option("--grid-denom", vopts.grid_denom, "sweep grid denominator");
  double grid_step = 0;
  verify->add_option("--grid-step", grid_step, "sweep grid step (alternative to --grid-denom)");
  verify->add_flag("--full-count", vopts.run_full_count, "also run the full-depth count");
  verify->add_option("--out", cert_out, "certificate file");
  verify->add_option("--sweep-csv", sweep_csv, "sweep ledger CSV");

  // enumerate-small
  auto* enumerate = app.add_subcommand("enumerate-small", "small-prime configuration search");
  int stage_depth = 4, shard_index = 0, shard_count = 1;
  double enum_threshold = 9.018;
  bool enumerate_only = false, full_count = false;
  std::string enum_out;
  enumerate->add_option("--stage-depth", stage_depth, "expansion stages to descend (0-4)")
      ->check(CLI::Range(0, 4));
  enumerate->add_option("--threshold", enum_threshold, "report threshold");
  enumerate->add_option("--shard-index", shard_index, "this shard's index");
  enumerate->add_option("--shard-count", shard_count, "number of shards");
  enumerate->add_flag("--enumerate-only", enumerate_only, "emit base configurations, no LPs");
  enumerate->add_flag("--full-count", full_count, "count all full-depth configurations");
  enumerate->add_option("--out", enum_out, "output CSV");

  // check-config
  auto* check = app.add_subcommand("check-config", "evaluate explicit configurations");
  std::string check_path;
  bool check_exact = false;
  check->add_option("file", check_path, "configuration file")->required();
  check->add_flag("--exact", check_exact, "exact rational re-solve of the final basis");

  // sweep-medium
  auto* sweepc = app.add_subcommand("sweep-medium", "medium-prime grid sweep");
  std::int64_t grid_denom = 10'000;
  double region = 9.019, tol = 1e-9;
  int passes = 100;
  std::string sweep_out;
  sweepc->add_option("--grid-denom", grid_denom, "grid denominator (step = 1/denom)");
  sweepc->add_option("--region", region, "region bound");
  sweepc->add_option("--tol", tol, "optimizer tolerance");
  sweepc->add_option("--passes", passes, "optimizer pass limit");
  sweepc->add_option("--out", sweep_out, "ledger CSV");

  // gmm-check
  auto* gmm = app.add_subcommand("gmm-check", "linear-growth non-covering certificate");
  std::string gmm_formula = "4*k+4", gmm_list;
  double gmm_eps = 1.0;
  int gmm_min_index = 1, gmm_cutoff = 0, gmm_n = 10'000;
  bool gmm_find = false;
  std::string gmm_out;
  gmm->add_option("--sizes", gmm_formula, "size formula a*k+b");
  gmm->add_option("--size-list", gmm_list, "file with explicit sizes");
  gmm->add_option("--eps", gmm_eps, "growth margin");
  gmm->add_option("--min-index", gmm_min_index, "index from which the hypothesis holds");
  gmm->add_option("--cutoff", gmm_cutoff, "cutoff C");
  gmm->add_option("-n,--levels", gmm_n, "number of levels");
  gmm->add_flag("--find-cutoff", gmm_find, "report the smallest certifying cutoff");
  gmm->add_option("--out", gmm_out, "partial-sum ledger CSV");

  // greedy-cover
  auto* greedy = app.add_subcommand("greedy-cover", "greedy covering construction");
  std::string greedy_box, greedy_sharp;
  std::uint64_t greedy_cap = 10'000'000;
  greedy->add_option("--box", greedy_box, "box sizes, comma separated");
  greedy->add_option("--sharpness", greedy_sharp, "near-sharpness mode: C,n");
  greedy->add_option("--cap", greedy_cap, "point-count cap");

  // ap-translate
  auto* ap = app.add_subcommand("ap-translate",
                                "translate between progression lists and configurations");
  std::string ap_primes, ap_in, ap_out;
  bool ap_to = false;
  ap->add_option("--primes", ap_primes, "odd primes, comma separated")->required();
  ap->add_option("file", ap_in, "input file")->required();
  ap->add_flag("--to-ap", ap_to, "configuration file to progression list (default: reverse)");
  ap->add_option("--out", ap_out, "output file");

  // sieve-run
  auto* sieve = app.add_subcommand("sieve-run", "run the distortion sieve on a box");
  std::string sv_box, sv_config, sv_deltas, sv_out;
  int sv_start = 0;
  sieve->add_option("--box", sv_box, "box sizes, comma separated")->required();
  sieve->add_option("--config", sv_config, "configuration file (one line)")->required();
  sieve->add_option("--deltas", sv_deltas, "distortion parameters, comma separated")->required();
  sieve->add_option("--start", sv_start, "start level");
  sieve->add_option("--out", sv_out, "ledger CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    vopts.workers = common.workers;
    if (grid_step > 0) vopts.grid_denom = static_cast<std::int64_t>(1.0 / grid_step + 0.5);
    if (verify->parsed()) return cmd_verify_all(common, vopts, cert_out, sweep_csv);
    if (enumerate->parsed()) {
      return cmd_enumerate_small(common, stage_depth, enum_threshold, shard_index, shard_count,
                                 enumerate_only, full_count, enum_out);
    }
    if (check->parsed()) return cmd_check_config(check_path, check_exact, common.workers);
    if (sweepc->parsed()) {
      return cmd_sweep_medium(common, grid_denom, region, tol, passes, sweep_out);
    }
    if (gmm->parsed()) {
      return cmd_gmm_check(gmm_formula, gmm_list, gmm_eps, gmm_min_index, gmm_cutoff, gmm_n,
                           gmm_find, gmm_out);
    }
    if (greedy->parsed()) return cmd_greedy_cover(greedy_box, greedy_sharp, greedy_cap);
    if (ap->parsed()) return cmd_ap_translate(ap_primes, ap_in, ap_to, ap_out);
    if (sieve->parsed()) return cmd_sieve_run(sv_box, sv_config, sv_deltas, sv_start, sv_out);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
