#include "covsieve/q5.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covsieve/util.hpp"

namespace covsieve::q5 {

namespace {

constexpr int kMaskWords = 8;  // 480 bits
using PointMask = std::array<std::uint64_t, kMaskWords>;

void mask_set(PointMask& m, int bit) {
  m[static_cast<std::size_t>(bit >> 6)] |= std::uint64_t{1} << (bit & 63);
}
bool mask_test(const PointMask& m, int bit) {
  return m[static_cast<std::size_t>(bit >> 6)] >> (bit & 63) & 1;
}
void mask_or(PointMask& a, const PointMask& b) {
  for (int w = 0; w < kMaskWords; ++w) a[static_cast<std::size_t>(w)] |= b[static_cast<std::size_t>(w)];
}
int mask_count_and_not(const PointMask& a, const PointMask& no) {
  int n = 0;
  for (int w = 0; w < kMaskWords; ++w) {
    n += std::popcount(a[static_cast<std::size_t>(w)] & ~no[static_cast<std::size_t>(w)]);
  }
  return n;
}

struct HyperplaneInfo {
  std::array<std::uint8_t, 4> values{};  // 0 on free coordinates
  PointMask mask{};
  std::vector<int> points;
};

struct Tables {
  std::array<std::array<std::uint8_t, 4>, kPointCount> point_vals{};
  std::array<std::vector<HyperplaneInfo>, 16> planes{};  // per fixed-set mask
  // capped[c][v]: points whose coordinate c value is <= v (1-based v)
  std::array<std::array<PointMask, 11>, 4> capped{};

  Tables() {
    for (int id = 0; id < kPointCount; ++id) {
      int rem = id;
      for (int c = 0; c < 4; ++c) {
        point_vals[static_cast<std::size_t>(id)][static_cast<std::size_t>(c)] =
            static_cast<std::uint8_t>(rem % kSizes[static_cast<std::size_t>(c)] + 1);
        rem /= kSizes[static_cast<std::size_t>(c)];
      }
    }
    for (int fmask = 1; fmask < 16; ++fmask) {
      std::array<std::uint8_t, 4> vals{};
      std::vector<int> coords;
      for (int c = 0; c < 4; ++c) {
        if (fmask >> c & 1) coords.push_back(c);
      }
      // nested odometer over the fixed coordinates, first coordinate slowest,
      // so hyperplanes come out in lexicographic value order
      std::vector<int> digits(coords.size(), 1);
      for (;;) {
        for (std::size_t i = 0; i < coords.size(); ++i) {
          vals[static_cast<std::size_t>(coords[i])] = static_cast<std::uint8_t>(digits[i]);
        }
        HyperplaneInfo info;
        info.values = vals;
        for (int id = 0; id < kPointCount; ++id) {
          bool in = true;
          for (int c : coords) {
            if (point_vals[static_cast<std::size_t>(id)][static_cast<std::size_t>(c)] !=
                vals[static_cast<std::size_t>(c)]) {
              in = false;
              break;
            }
          }
          if (in) {
            mask_set(info.mask, id);
            info.points.push_back(id);
          }
        }
        planes[static_cast<std::size_t>(fmask)].push_back(std::move(info));
        std::size_t i = coords.size();
        for (; i-- > 0;) {
          if (digits[i] < kSizes[static_cast<std::size_t>(coords[i])]) {
            ++digits[i];
            std::fill(digits.begin() + static_cast<std::ptrdiff_t>(i) + 1, digits.end(), 1);
            break;
          }
          if (i == 0) goto done;
        }
      }
    done:;
    }
    for (int c = 0; c < 4; ++c) {
      for (int v = 1; v <= kSizes[static_cast<std::size_t>(c)]; ++v) {
        PointMask m{};
        for (int id = 0; id < kPointCount; ++id) {
          if (point_vals[static_cast<std::size_t>(id)][static_cast<std::size_t>(c)] <= v) {
            mask_set(m, id);
          }
        }
        capped[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] = m;
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

/// Index of a hyperplane's values within the lexicographic table order.
int plane_index(int fmask, const std::array<std::uint8_t, 4>& vals) {
  int idx = 0;
  for (int c = 0; c < 4; ++c) {
    if (fmask >> c & 1) {
      idx = idx * kSizes[static_cast<std::size_t>(c)] + vals[static_cast<std::size_t>(c)] - 1;
    }
  }
  return idx;
}

const HyperplaneInfo& plane_of(const Q5Config& config, int slot) {
  const int fmask = kFamily[static_cast<std::size_t>(slot)];
  return tables().planes[static_cast<std::size_t>(fmask)][static_cast<std::size_t>(
      plane_index(fmask, config.values[static_cast<std::size_t>(slot)]))];
}

PointMask covered_mask(const Q5Config& config) {
  PointMask covered{};
  for (int s = 0; s < 11; ++s) {
    if (config.has(s)) mask_or(covered, plane_of(config, s).mask);
  }
  return covered;
}

bool plane_contained_in(const std::array<std::uint8_t, 4>& vals, int fmask,
                        const std::array<std::uint8_t, 4>& other_vals, int other_fmask) {
  if ((fmask & other_fmask) != other_fmask || fmask == other_fmask) return false;
  for (int c = 0; c < 4; ++c) {
    if ((other_fmask >> c & 1) &&
        vals[static_cast<std::size_t>(c)] != other_vals[static_cast<std::size_t>(c)]) {
      return false;
    }
  }
  return true;
}

/// Running per-coordinate value maxima over the present slots below `limit`.
std::array<int, 4> growth_maxima(const Q5Config& config, int limit) {
  std::array<int, 4> maxes{};
  for (int s = 0; s < limit; ++s) {
    if (!config.has(s)) continue;
    const int fmask = kFamily[static_cast<std::size_t>(s)];
    for (int c = 0; c < 4; ++c) {
      if (fmask >> c & 1) {
        maxes[static_cast<std::size_t>(c)] = std::max(
            maxes[static_cast<std::size_t>(c)],
            static_cast<int>(config.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)]));
      }
    }
  }
  return maxes;
}

}  // namespace

Box q5_box() {
  return Box({kSizes.begin(), kSizes.end()}, {kPrimes.begin(), kPrimes.end()});
}

void Q5Config::set(int slot, const std::array<std::uint8_t, 4>& vals) {
  const int fmask = kFamily[static_cast<std::size_t>(slot)];
  for (int c = 0; c < 4; ++c) {
    const bool fixed = fmask >> c & 1;
    const int v = vals[static_cast<std::size_t>(c)];
    if (fixed && (v < 1 || v > kSizes[static_cast<std::size_t>(c)])) {
      throw std::out_of_range("Q5Config::set: value out of range");
    }
    if (!fixed && v != 0) {
      throw std::invalid_argument("Q5Config::set: value on a free coordinate");
    }
  }
  values[static_cast<std::size_t>(slot)] = vals;
  present |= static_cast<std::uint16_t>(1u << slot);
}

int Q5Config::specified_count() const { return std::popcount(present); }

std::string Q5Config::to_string() const {
  std::string out;
  for (int s = 0; s < 11; ++s) {
    if (!has(s)) continue;
    if (!out.empty()) out += ", ";
    for (int c = 0; c < 4; ++c) {
      const int v = values[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
      if (v == 0) {
        out.push_back('*');
      } else if (v < 10) {
        out.push_back(static_cast<char>('0' + v));
      } else {
        out.push_back(static_cast<char>('a' + v - 10));
      }
    }
  }
  return out;
}

Configuration Q5Config::to_configuration() const {
  Configuration config;
  for (int s = 0; s < 11; ++s) {
    if (!has(s)) continue;
    std::vector<int> entries(4, Hyperplane::kFree);
    for (int c = 0; c < 4; ++c) {
      entries[static_cast<std::size_t>(c)] =
          values[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
    }
    config.insert(Hyperplane(std::move(entries)));
  }
  return config;
}

Q5Config Q5Config::from_configuration(const Configuration& config) {
  Q5Config out;
  for (const Hyperplane& h : config.hyperplanes()) {
    const auto fmask = static_cast<int>(h.fixed_mask());
    const auto it = std::find(kFamily.begin(), kFamily.end(), fmask);
    if (it == kFamily.end()) {
      throw std::invalid_argument(
          "Q5Config: fixed set outside the codimension >= 2 family of the base box");
    }
    std::array<std::uint8_t, 4> vals{};
    for (int c = 0; c < 4; ++c) {
      const int v = h.entry(c);
      if (v > kSizes[static_cast<std::size_t>(c)]) {
        throw std::out_of_range("Q5Config: value exceeds the base box");
      }
      vals[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(v);
    }
    out.set(static_cast<int>(it - kFamily.begin()), vals);
  }
  return out;
}

Q5Config Q5Config::parse(const std::string& line) {
  return from_configuration(parse_configuration(line, q5_box()));
}

bool is_canonical(const Q5Config& config) {
  std::array<int, 4> maxes{};
  for (int s = 0; s < 11; ++s) {
    if (!config.has(s)) continue;
    const int fmask = kFamily[static_cast<std::size_t>(s)];
    for (int c = 0; c < 4; ++c) {
      if (!(fmask >> c & 1)) continue;
      const int v = config.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
      if (v > maxes[static_cast<std::size_t>(c)] + 1) return false;
      maxes[static_cast<std::size_t>(c)] = std::max(maxes[static_cast<std::size_t>(c)], v);
    }
  }
  return true;
}

Q5Config canonical_reduce(Q5Config config) {
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < 11 && !changed; ++s) {
      if (!config.has(s)) continue;
      const int fmask = kFamily[static_cast<std::size_t>(s)];
      const auto maxes = growth_maxima(config, s);
      for (int c = 0; c < 4 && !changed; ++c) {
        if (!(fmask >> c & 1)) continue;
        const int v = config.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
        if (v < maxes[static_cast<std::size_t>(c)] + 2) continue;
        // transpose v and v-1 along coordinate c in every present hyperplane
        for (int t = 0; t < 11; ++t) {
          if (!config.has(t) || !(kFamily[static_cast<std::size_t>(t)] >> c & 1)) continue;
          auto& tv = config.values[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)];
          if (tv == v) {
            tv = static_cast<std::uint8_t>(v - 1);
          } else if (tv == v - 1) {
            tv = static_cast<std::uint8_t>(v);
          }
        }
        changed = true;
      }
    }
  }
  return config;
}

std::optional<std::pair<int, int>> containment_violation(const Q5Config& config) {
  for (int s = 0; s < 11; ++s) {
    if (!config.has(s)) continue;
    for (int t = 0; t < 11; ++t) {
      if (t == s || !config.has(t)) continue;
      if (plane_contained_in(config.values[static_cast<std::size_t>(s)],
                             kFamily[static_cast<std::size_t>(s)],
                             config.values[static_cast<std::size_t>(t)],
                             kFamily[static_cast<std::size_t>(t)])) {
        return std::make_pair(s, t);
      }
    }
  }
  return std::nullopt;
}

namespace {

/// Candidate value tuples for `slot` under the growth caps and the antichain
/// condition against the present slots, in lexicographic order.
template <class Fn>
void for_each_choice(const Q5Config& config, int slot, const Fn& fn) {
  const int fmask = kFamily[static_cast<std::size_t>(slot)];
  const auto maxes = growth_maxima(config, slot);
  std::vector<int> coords;
  for (int c = 0; c < 4; ++c) {
    if (fmask >> c & 1) coords.push_back(c);
  }
  std::vector<int> caps(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    caps[i] = std::min(kSizes[static_cast<std::size_t>(coords[i])],
                       maxes[static_cast<std::size_t>(coords[i])] + 1);
  }
  std::vector<int> digits(coords.size(), 1);
  for (;;) {
    std::array<std::uint8_t, 4> vals{};
    for (std::size_t i = 0; i < coords.size(); ++i) {
      vals[static_cast<std::size_t>(coords[i])] = static_cast<std::uint8_t>(digits[i]);
    }
    bool ok = true;
    for (int t = 0; t < slot && ok; ++t) {
      if (!config.has(t)) continue;
      if (plane_contained_in(vals, fmask, config.values[static_cast<std::size_t>(t)],
                             kFamily[static_cast<std::size_t>(t)])) {
        ok = false;
      }
    }
    if (ok) fn(vals);
    std::size_t i = coords.size();
    for (; i-- > 0;) {
      if (digits[i] < caps[i]) {
        ++digits[i];
        std::fill(digits.begin() + static_cast<std::ptrdiff_t>(i) + 1, digits.end(), 1);
        break;
      }
      if (i == 0) return;
    }
  }
}

void enumerate_rec(Q5Config& config, int slot, int last_slot, std::vector<Q5Config>& out) {
  if (slot > last_slot) {
    out.push_back(config);
    return;
  }
  for_each_choice(config, slot, [&](const std::array<std::uint8_t, 4>& vals) {
    config.set(slot, vals);
    enumerate_rec(config, slot + 1, last_slot, out);
    config.values[static_cast<std::size_t>(slot)] = {};
    config.present = static_cast<std::uint16_t>(config.present & ~(1u << slot));
  });
}

}  // namespace

std::vector<Q5Config> enumerate_base() {
  std::vector<Q5Config> out;
  Q5Config config;
  enumerate_rec(config, 0, kBaseSlots - 1, out);
  return out;
}

std::vector<Q5Config> expand_slot(const Q5Config& config, int slot) {
  if (config.has(slot)) throw std::invalid_argument("expand_slot: slot already specified");
  std::vector<Q5Config> out;
  for_each_choice(config, slot, [&](const std::array<std::uint8_t, 4>& vals) {
    Q5Config next = config;
    next.set(slot, vals);
    out.push_back(next);
  });
  return out;
}

std::uint64_t count_canonical_full(int workers) {
  const std::vector<Q5Config> base = enumerate_base();
  std::vector<std::uint64_t> counts(base.size(), 0);
  parallel_for(base.size(), workers, [&](std::size_t b) {
    // depth-first over the four remaining slots with the covered-point mask
    // carried down; the last slot is a single uncovered point inside the
    // growth-cap sub-box, so its choices reduce to one popcount
    const auto& t = tables();
    std::uint64_t total = 0;
    Q5Config config = base[b];
    auto rec = [&](auto&& self, int slot, const PointMask& covered) -> void {
      if (slot == 10) {
        const auto maxes = growth_maxima(config, 10);
        int n = 0;
        for (int w = 0; w < kMaskWords; ++w) {
          const std::uint64_t box =
              t.capped[0][static_cast<std::size_t>(std::min(kSizes[0], maxes[0] + 1))]
                      [static_cast<std::size_t>(w)] &
              t.capped[1][static_cast<std::size_t>(std::min(kSizes[1], maxes[1] + 1))]
                      [static_cast<std::size_t>(w)] &
              t.capped[2][static_cast<std::size_t>(std::min(kSizes[2], maxes[2] + 1))]
                      [static_cast<std::size_t>(w)] &
              t.capped[3][static_cast<std::size_t>(std::min(kSizes[3], maxes[3] + 1))]
                      [static_cast<std::size_t>(w)];
          n += std::popcount(box & ~covered[static_cast<std::size_t>(w)]);
        }
        total += static_cast<std::uint64_t>(n);
        return;
      }
      for_each_choice(config, slot, [&](const std::array<std::uint8_t, 4>& vals) {
        config.set(slot, vals);
        PointMask next = covered;
        mask_or(next, plane_of(config, slot).mask);
        self(self, slot + 1, next);
        config.values[static_cast<std::size_t>(slot)] = {};
        config.present = static_cast<std::uint16_t>(config.present & ~(1u << slot));
      });
    };
    rec(rec, 7, covered_mask(config));
    counts[b] = total;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  return total;
}

namespace {

constexpr std::array<double, 16> objective_weights() {
  std::array<double, 16> w{};
  for (int mask = 0; mask < 16; ++mask) {
    double p = 1;
    for (int b = 0; b < std::popcount(static_cast<unsigned>(mask)); ++b) p *= 3;
    w[static_cast<std::size_t>(mask)] = p - 0.75;
  }
  return w;
}
constexpr std::array<double, 16> kWeights = objective_weights();

std::string subset_name(int fmask) {
  std::string s = "c";
  for (int c = 0; c < 4; ++c) {
    if (fmask >> c & 1) s += std::to_string(c + 2);
  }
  return s;
}

}  // namespace

Q5LP build_lp(const Q5Config& config) {
  const auto& t = tables();
  const PointMask covered = covered_mask(config);

  Q5LP out;
  std::array<int, kPointCount> col_of;
  col_of.fill(-1);
  for (int id = 0; id < kPointCount; ++id) {
    if (!mask_test(covered, id)) {
      col_of[static_cast<std::size_t>(id)] = static_cast<int>(out.r_points.size());
      out.r_points.push_back(id);
    }
  }
  const int nx = static_cast<int>(out.r_points.size());
  const int nvars = nx + 15;

  lp::Model& m = out.model;
  m.objective.assign(static_cast<std::size_t>(nvars), 0.0);
  m.objective_constant = 0.25;
  m.names.resize(static_cast<std::size_t>(nvars));
  for (int j = 0; j < nx; ++j) {
    m.names[static_cast<std::size_t>(j)] =
        "x" + std::to_string(out.r_points[static_cast<std::size_t>(j)]);
  }
  for (int fmask = 1; fmask < 16; ++fmask) {
    m.objective[static_cast<std::size_t>(nx + fmask - 1)] =
        kWeights[static_cast<std::size_t>(fmask)];
    m.names[static_cast<std::size_t>(nx + fmask - 1)] = subset_name(fmask);
  }
  for (int fmask = 1; fmask < 16; ++fmask) {
    for (const HyperplaneInfo& h : t.planes[static_cast<std::size_t>(fmask)]) {
      lp::Constraint row;
      row.coeffs.assign(static_cast<std::size_t>(nvars), 0.0);
      for (int id : h.points) {
        const int col = col_of[static_cast<std::size_t>(id)];
        if (col >= 0) row.coeffs[static_cast<std::size_t>(col)] = 1.0;
      }
      row.coeffs[static_cast<std::size_t>(nx + fmask - 1)] = -1.0;
      row.relation = lp::Relation::le;
      row.rhs = 0.0;
      m.rows.push_back(std::move(row));
    }
  }
  lp::Constraint norm;
  norm.coeffs.assign(static_cast<std::size_t>(nvars), 0.0);
  for (int j = 0; j < nx; ++j) norm.coeffs[static_cast<std::size_t>(j)] = 1.0;
  norm.relation = lp::Relation::eq;
  norm.rhs = 1.0;
  m.rows.push_back(std::move(norm));
  return out;
}

namespace {

struct WorkingLP {
  std::vector<int> r_points;
  std::array<int, kPointCount> col_of{};
  int nx = 0;
  std::vector<std::pair<int, int>> rows;  // (fixed-set mask, plane table index)
  lp::Model model;
  lp::Solution solution;
  int rounds = 0;
  int iterations = 0;
};

constexpr double kMassTol = 1e-9;

/// Row-generation solve; throws if the self-checks of any round fail.
WorkingLP row_generation_solve(const Q5Config& config) {
  const auto& t = tables();
  WorkingLP w;
  const PointMask covered = covered_mask(config);
  w.col_of.fill(-1);
  for (int id = 0; id < kPointCount; ++id) {
    if (!mask_test(covered, id)) {
      w.col_of[static_cast<std::size_t>(id)] = static_cast<int>(w.r_points.size());
      w.r_points.push_back(id);
    }
  }
  w.nx = static_cast<int>(w.r_points.size());
  if (w.nx == 0) return w;  // covered; caller handles

  // initial working set: every low-codimension constraint with support, plus
  // the largest-support rows of the deeper families
  for (int fmask = 1; fmask < 16; ++fmask) {
    const auto& planes = t.planes[static_cast<std::size_t>(fmask)];
    if (std::popcount(static_cast<unsigned>(fmask)) <= 2) {
      for (std::size_t p = 0; p < planes.size(); ++p) {
        int count = 0;
        for (int id : planes[p].points) {
          if (w.col_of[static_cast<std::size_t>(id)] >= 0) ++count;
        }
        if (count > 0) w.rows.emplace_back(fmask, static_cast<int>(p));
      }
    } else {
      int best = -1, best_count = 0;
      for (std::size_t p = 0; p < planes.size(); ++p) {
        int count = 0;
        for (int id : planes[p].points) {
          if (w.col_of[static_cast<std::size_t>(id)] >= 0) ++count;
        }
        if (count > best_count) {
          best_count = count;
          best = static_cast<int>(p);
        }
      }
      if (best >= 0) w.rows.emplace_back(fmask, best);
    }
  }

  const int nvars = w.nx + 15;
  std::vector<double> xmass(kPointCount, 0.0);
  for (int round = 1;; ++round) {
    if (round > 64) throw std::runtime_error("q5: row generation failed to converge");
    w.rounds = round;
    lp::Model& m = w.model;
    m = lp::Model{};
    m.objective.assign(static_cast<std::size_t>(nvars), 0.0);
    m.objective_constant = 0.25;
    for (int fmask = 1; fmask < 16; ++fmask) {
      m.objective[static_cast<std::size_t>(w.nx + fmask - 1)] =
          kWeights[static_cast<std::size_t>(fmask)];
    }
    lp::Constraint norm;
    norm.coeffs.assign(static_cast<std::size_t>(nvars), 0.0);
    for (int j = 0; j < w.nx; ++j) norm.coeffs[static_cast<std::size_t>(j)] = 1.0;
    norm.relation = lp::Relation::eq;
    norm.rhs = 1.0;
    m.rows.push_back(std::move(norm));
    for (const auto& [fmask, p] : w.rows) {
      const HyperplaneInfo& h = t.planes[static_cast<std::size_t>(fmask)][static_cast<std::size_t>(p)];
      lp::Constraint row;
      row.coeffs.assign(static_cast<std::size_t>(nvars), 0.0);
      for (int id : h.points) {
        const int col = w.col_of[static_cast<std::size_t>(id)];
        if (col >= 0) row.coeffs[static_cast<std::size_t>(col)] = 1.0;
      }
      row.coeffs[static_cast<std::size_t>(w.nx + fmask - 1)] = -1.0;
      row.relation = lp::Relation::le;
      row.rhs = 0.0;
      m.rows.push_back(std::move(row));
    }

    w.solution = lp::solve(m);
    w.iterations += w.solution.iterations;
    if (w.solution.status != lp::Status::optimal) {
      throw std::runtime_error("q5: measure LP was not solved to optimality");
    }
    if (w.solution.primal_error > 1e-8 || w.solution.duality_gap > 1e-7) {
      throw std::runtime_error("q5: LP self-check failed");
    }

    // exact separation over every constraint of the full model
    std::fill(xmass.begin(), xmass.end(), 0.0);
    for (int j = 0; j < w.nx; ++j) {
      xmass[static_cast<std::size_t>(w.r_points[static_cast<std::size_t>(j)])] =
          w.solution.x[static_cast<std::size_t>(j)];
    }
    std::vector<std::pair<int, int>> violated;
    for (int fmask = 1; fmask < 16; ++fmask) {
      const double ci = w.solution.x[static_cast<std::size_t>(w.nx + fmask - 1)];
      const auto& planes = t.planes[static_cast<std::size_t>(fmask)];
      for (std::size_t p = 0; p < planes.size(); ++p) {
        double mass = 0.0;
        for (int id : planes[p].points) mass += xmass[static_cast<std::size_t>(id)];
        if (mass > ci + kMassTol) violated.emplace_back(fmask, static_cast<int>(p));
      }
    }
    if (violated.empty()) return w;
    w.rows.insert(w.rows.end(), violated.begin(), violated.end());
    std::sort(w.rows.begin(), w.rows.end());
    w.rows.erase(std::unique(w.rows.begin(), w.rows.end()), w.rows.end());
  }
}

ConfigEval eval_from_working(const Q5Config& config, const WorkingLP& w) {
  ConfigEval e;
  if (w.nx == 0) {
    e.covered = true;
    return e;
  }
  e.lp_value = w.solution.objective;
  for (int fmask = 1; fmask < 16; ++fmask) {
    e.c[static_cast<std::size_t>(fmask - 1)] =
        w.solution.x[static_cast<std::size_t>(w.nx + fmask - 1)];
  }
  double p = 0.0;
  for (int s = kBaseSlots; s < 11; ++s) {
    if (!config.has(s)) {
      p += e.c[static_cast<std::size_t>(kFamily[static_cast<std::size_t>(s)] - 1)];
    }
  }
  e.unspecified_mass = p;
  e.adjusted = p <= 0 ? e.lp_value
               : p < 1 ? (e.lp_value - p / 4.0) / (1.0 - p)
                       : std::numeric_limits<double>::infinity();
  e.lp_rounds = w.rounds;
  e.lp_iterations = w.iterations;
  return e;
}

}  // namespace

ConfigEval evaluate_config(const Q5Config& config) {
  const WorkingLP w = row_generation_solve(config);
  return eval_from_working(config, w);
}

SolvedConfig solve_config(const Q5Config& config) {
  const WorkingLP w = row_generation_solve(config);
  SolvedConfig out;
  out.eval = eval_from_working(config, w);
  if (out.eval.covered) return out;
  out.measure.level = 4;
  double total = 0.0;
  for (int j = 0; j < w.nx; ++j) total += w.solution.x[static_cast<std::size_t>(j)];
  for (int j = 0; j < w.nx; ++j) {
    const double v = w.solution.x[static_cast<std::size_t>(j)] / total;
    if (v > 0) {
      out.measure.atoms.emplace_back(
          static_cast<std::uint64_t>(w.r_points[static_cast<std::size_t>(j)]), v);
    }
  }
  return out;
}

Measure extract_measure(const Q5LP& lp, const lp::Solution& solution) {
  if (solution.status != lp::Status::optimal) {
    throw std::invalid_argument("extract_measure: needs an optimal solution");
  }
  Measure m;
  m.level = 4;
  double total = 0.0;
  for (std::size_t j = 0; j < lp.r_points.size(); ++j) total += solution.x[j];
  for (std::size_t j = 0; j < lp.r_points.size(); ++j) {
    const double v = solution.x[j] / total;
    if (v > 0) m.atoms.emplace_back(static_cast<std::uint64_t>(lp.r_points[j]), v);
  }
  return m;
}

lp::ExactCertificate exact_certify(const Q5Config& config) {
  const WorkingLP w = row_generation_solve(config);
  if (w.nx == 0) {
    lp::ExactCertificate c;
    c.failure = "configuration covers the box";
    return c;
  }
  // exact optimality for the working rows plus exact feasibility against the
  // full row set certifies the full model's optimum
  const Q5LP full = build_lp(config);
  return lp::exact_resolve(w.model, w.solution, 12, &full.model.rows);
}

StagedReport staged_search(const StagedOptions& options) {
  StagedReport report;
  std::vector<Q5Config> level = enumerate_base();
  report.base_count = level.size();

  std::atomic<std::uint64_t> lp_solves{0};
  double global_max = 0.0;

  const int stages = std::clamp(options.max_stage, 0, 4);
  for (int stage = 0; stage <= stages; ++stage) {
    std::vector<ConfigEval> evals(level.size());
    parallel_for(level.size(), options.workers, [&](std::size_t i) {
      evals[i] = evaluate_config(level[i]);
      lp_solves.fetch_add(1, std::memory_order_relaxed);
    });
    std::vector<Q5Config> fails;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (evals[i].covered) {
        ++report.covered_count;
        continue;
      }
      if (evals[i].adjusted < options.report_threshold) {
        global_max = std::max(global_max, evals[i].adjusted);
      } else {
        fails.push_back(level[i]);
        if (stage == stages) {
          report.survivors.push_back(level[i]);
          report.survivor_values.push_back(evals[i].adjusted);
          global_max = std::max(global_max, evals[i].adjusted);
        }
      }
    }
    report.cascade.push_back(fails.size());
    if (stage == stages) break;
    std::vector<Q5Config> next;
    for (const Q5Config& f : fails) {
      const auto expanded = expand_slot(f, kBaseSlots + stage);
      next.insert(next.end(), expanded.begin(), expanded.end());
    }
    report.cascade.push_back(next.size());
    level = std::move(next);
  }

  // sort survivors canonically, keeping values aligned
  std::vector<std::size_t> order(report.survivors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.survivors[a] < report.survivors[b];
  });
  std::vector<Q5Config> sorted_survivors;
  std::vector<double> sorted_values;
  for (std::size_t i : order) {
    sorted_survivors.push_back(report.survivors[i]);
    sorted_values.push_back(report.survivor_values[i]);
  }
  report.survivors = std::move(sorted_survivors);
  report.survivor_values = std::move(sorted_values);
  report.global_max = global_max;
  report.lp_solves = lp_solves.load();
  return report;
}

}  // namespace covsieve::q5
