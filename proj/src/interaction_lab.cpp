#include "ep1d/interaction_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "ep1d/detail/parallel.hpp"
#include "ep1d/io.hpp"
#include "ep1d/riemann.hpp"
#include "ep1d/wave_curves.hpp"

namespace ep1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinAmp = 2e-3;  ///< smallest wave amplitude in log-density

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-case generator: case k of stream `stream` draws the same numbers no
/// matter how the cases are sharded across workers.
struct CaseRng {
  std::mt19937_64 eng;
  CaseRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t k)
      : eng(splitmix64(splitmix64(seed + 0x632BE59BD9B4E019ULL * stream) + k)) {
  }
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng);
  }
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
};

double shock_strength(const Wave& w) {
  return w.kind == WaveKind::shock ? w.strength : 0.0;
}

/// Builds a right state lying in the requested region of `left` by composing
/// the two elementary forward waves with amplitudes drawn well away from the
/// region boundaries.  Densities stay inside [rho_min, rho_max].
State make_right_in_region(const GasContext& gas, const State& left,
                           Region target, CaseRng& rng, double rho_min,
                           double rho_max) {
  const double cap = 1.5;  // log-density amplitude cap (~ ratio 4.5)
  auto up = [&](double from) {  // admissible 1-shock / 2-rarefaction span
    return std::min(cap, std::log(rho_max / from) - 1e-3);
  };
  auto down = [&](double from) {  // 1-rarefaction / 2-shock span
    return std::min(cap, std::log(from / rho_min) - 1e-3);
  };
  State mid{}, right{};
  switch (target) {
    case Region::I: {  // 1-shock then 2-shock
      const double x1 = rng.uniform(kMinAmp, std::max(2 * kMinAmp, up(left.rho)));
      mid.rho = left.rho * std::exp(x1);
      mid.u = shock_u(gas, 1, left, mid.rho);
      const double x2 = rng.uniform(kMinAmp, std::max(2 * kMinAmp, down(mid.rho)));
      right.rho = mid.rho * std::exp(-x2);
      right.u = shock_u(gas, 2, mid, right.rho);
      break;
    }
    case Region::II: {  // 1-rarefaction then 2-shock
      const double y = rng.uniform(kMinAmp, std::max(2 * kMinAmp, down(left.rho)));
      mid.rho = left.rho * std::exp(-y);
      mid.u = rarefaction_u(gas, 1, left, mid.rho);
      const double x2 = rng.uniform(kMinAmp, std::max(2 * kMinAmp, down(mid.rho)));
      right.rho = mid.rho * std::exp(-x2);
      right.u = shock_u(gas, 2, mid, right.rho);
      break;
    }
    case Region::III: {  // two rarefactions
      const double y = rng.uniform(kMinAmp, std::max(2 * kMinAmp, down(left.rho)));
      mid.rho = left.rho * std::exp(-y);
      mid.u = rarefaction_u(gas, 1, left, mid.rho);
      const double z = rng.uniform(kMinAmp, std::max(2 * kMinAmp, up(mid.rho)));
      right.rho = mid.rho * std::exp(z);
      right.u = rarefaction_u(gas, 2, mid, right.rho);
      break;
    }
    case Region::IV: {  // 1-shock then 2-rarefaction
      const double x1 = rng.uniform(kMinAmp, std::max(2 * kMinAmp, up(left.rho)));
      mid.rho = left.rho * std::exp(x1);
      mid.u = shock_u(gas, 1, left, mid.rho);
      const double z = rng.uniform(kMinAmp, std::max(2 * kMinAmp, up(mid.rho)));
      right.rho = mid.rho * std::exp(z);
      right.u = rarefaction_u(gas, 2, mid, right.rho);
      break;
    }
  }
  return right;
}

/// Left-state density draw leaving head room for an up-wave (regions I, IV)
/// or a down-wave (II, III) so make_right_in_region never degenerates.
double draw_base_rho(CaseRng& rng, Region target, double rho_min,
                     double rho_max) {
  if (target == Region::I || target == Region::IV)
    return rng.log_uniform(rho_min, rho_max / 1.1);
  return rng.log_uniform(rho_min * 1.1, rho_max);
}

/// Outcome of one sampled case, reduced sequentially afterwards so results do
/// not depend on the worker count.
struct CaseOut {
  bool accepted = false;
  bool failed = false;
  double violation = -kInf;  ///< max (lhs - rhs)/scale over the assertions
  double margin = kInf;      ///< min (rhs - lhs)
  int flag = 0;              ///< check-specific tally bit
  State left{}, right{};
  double dm = 0.0, dp = 0.0;
  std::string what;
};

void write_witness(const LabConfig& lab, CheckResult& res,
                   const std::string& check, std::size_t index,
                   const CaseOut& c) {
  if (lab.witness_dir.empty() || res.witness_files.size() >= lab.max_witnesses)
    return;
  nlohmann::json j;
  j["check"] = check;
  j["gamma"] = lab.gamma;
  j["left"] = {{"rho", c.left.rho}, {"u", c.left.u}};
  j["right"] = {{"rho", c.right.rho}, {"u", c.right.u}};
  j["delta_minus"] = c.dm;
  j["delta_plus"] = c.dp;
  j["detail"] = c.what;
  std::string name = check;
  for (char& ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  const std::string path = lab.witness_dir + "/" + name + "_" +
                           std::to_string(index) + ".json";
  write_atomic(path, j.dump(2) + "\n");
  res.witness_files.push_back(path);
}

void reduce_cases(const LabConfig& lab, const std::vector<CaseOut>& outs,
                  const std::string& bucket, CheckResult& res) {
  for (std::size_t k = 0; k < outs.size(); ++k) {
    const CaseOut& c = outs[k];
    if (!c.accepted) {
      ++res.tally["exhausted"];
      continue;
    }
    ++res.cases;
    ++res.tally[bucket];
    res.worst_violation = std::max(res.worst_violation, c.violation);
    res.min_margin = std::min(res.min_margin, c.margin);
    if (c.failed) {
      ++res.failures;
      ++res.failed[bucket];
      write_witness(lab, res, res.name + ":" + bucket, k, c);
    }
  }
}

}  // namespace

CheckResult check_left_shift(const LabConfig& lab) {
  const GasContext gas = GasContext::make(lab.gamma);
  CheckResult res;
  res.name = "left-shift";
  res.min_margin = kInf;
  res.worst_violation = -kInf;

  std::vector<CaseOut> outs(lab.cases);
  detail::parallel_for(lab.cases, lab.workers, [&](std::size_t k) {
    CaseRng rng(lab.seed, 1, k);
    CaseOut c;
    const State left{draw_base_rho(rng, Region::I, lab.rho_min, lab.rho_max),
                     rng.uniform(-lab.u_span, lab.u_span)};
    const State right = make_right_in_region(gas, left, Region::I, rng,
                                             lab.rho_min, lab.rho_max);
    const double d = rng.log_uniform(1e-4, 2.0 * lab.u_span);
    const State shifted{left.rho, left.u + d};
    c.left = left;
    c.right = right;
    c.dm = d;
    c.accepted = true;
    const WaveFan before = solve(gas, left, right);
    const WaveFan after = solve(gas, shifted, right);
    if (before.region != Region::I || after.region != Region::I) {
      c.failed = true;
      c.what = "expected two-shock pattern before and after the shift";
      return void(outs[k] = c);
    }
    const double b0 = shock_strength(before.wave1);
    const double g0 = shock_strength(before.wave2);
    const double b1 = shock_strength(after.wave1);
    const double g1v = shock_strength(after.wave2);
    const double scale = 1.0 + b0 + g0;
    const double tol = 1e-9 * scale;
    c.violation = std::max(b1 - (b0 + d), g1v - (g0 + d)) / scale;
    c.margin = std::min((b0 + d) - b1, (g0 + d) - g1v);
    if (b1 > b0 + d + tol || g1v > g0 + d + tol) {
      c.failed = true;
      c.what = "strength grew by more than the shift";
    }
    if (b1 > b0 + 1e-12) c.flag = 1;  // strict growth witness
    outs[k] = c;
  });
  reduce_cases(lab, outs, "cases", res);
  for (const CaseOut& c : outs)
    if (c.accepted && c.flag) ++res.tally["strict_growth"];
  return res;
}

CheckResult check_right_shift(const LabConfig& lab) {
  const GasContext gas = GasContext::make(lab.gamma);
  CheckResult res;
  res.name = "right-shift";
  res.min_margin = kInf;
  res.worst_violation = -kInf;

  std::vector<CaseOut> outs(lab.cases);
  detail::parallel_for(lab.cases, lab.workers, [&](std::size_t k) {
    CaseRng rng(lab.seed, 2, k);
    CaseOut c;
    for (int attempt = 0; attempt < 20000 && !c.accepted; ++attempt) {
      const State left{draw_base_rho(rng, Region::I, lab.rho_min, lab.rho_max),
                       rng.uniform(-lab.u_span, lab.u_span)};
      const State right = make_right_in_region(gas, left, Region::I, rng,
                                               lab.rho_min, lab.rho_max);
      const double d = rng.log_uniform(1e-4, 2.0 * lab.u_span);
      const State shifted{right.rho, right.u + d};
      // hypothesis: the shifted pair still solves with two shocks
      if (classify_region(gas, left, shifted) != Region::I) continue;
      c.left = left;
      c.right = right;
      c.dp = d;
      c.accepted = true;
      const WaveFan before = solve(gas, left, right);
      const WaveFan after = solve(gas, left, shifted);
      const double b0 = shock_strength(before.wave1);
      const double g0 = shock_strength(before.wave2);
      const double b1 = shock_strength(after.wave1);
      const double g1v = shock_strength(after.wave2);
      const double scale = 1.0 + b0 + g0;
      const double tol = 1e-9 * scale;
      c.violation = std::max(b1 - (b0 + d), g1v - (g0 + d)) / scale;
      c.margin = std::min((b0 + d) - b1, (g0 + d) - g1v);
      if (b1 > b0 + d + tol || g1v > g0 + d + tol) {
        c.failed = true;
        c.what = "strength grew by more than the shift";
      }
    }
    outs[k] = c;
  });
  reduce_cases(lab, outs, "cases", res);
  return res;
}

namespace {

struct Bucket {
  Region before;
  Region after;
  int sign;  ///< +1: draw dm >= dp, -1: draw dp > dm, 0: either
  const char* name;
};

constexpr Bucket kBuckets[] = {
    {Region::I, Region::I, 0, "I->I"},
    {Region::IV, Region::I, +1, "IV->I"},
    {Region::II, Region::I, +1, "II->I"},
    {Region::III, Region::I, +1, "III->I"},
    {Region::I, Region::II, -1, "I->II"},
    {Region::II, Region::II, 0, "II->II"},
    {Region::III, Region::II, +1, "III->II"},
    {Region::I, Region::IV, -1, "I->IV"},
    {Region::III, Region::IV, +1, "III->IV"},
    {Region::IV, Region::IV, 0, "IV->IV"},
};

struct EmptyClaim {
  Region before;
  Region after;
  int sign;  ///< sign of the shift gap that the paper rules out
  const char* name;
};

constexpr EmptyClaim kEmptyClaims[] = {
    {Region::IV, Region::II, 0, "empty:IV->II"},
    {Region::II, Region::IV, 0, "empty:II->IV"},
    {Region::IV, Region::I, -1, "empty:IV->I:dp>dm"},
    {Region::II, Region::I, -1, "empty:II->I:dp>dm"},
    {Region::III, Region::I, -1, "empty:III->I:dp>dm"},
    {Region::I, Region::II, +1, "empty:I->II:dm>=dp"},
    {Region::III, Region::II, -1, "empty:III->II:dp>dm"},
    {Region::I, Region::IV, +1, "empty:I->IV:dm>=dp"},
    {Region::III, Region::IV, -1, "empty:III->IV:dp>dm"},
};

/// Draws the velocity shifts for a target bucket.  `scale` is the size of the
/// sampled wave pattern; gaps are drawn up to twice that so region changes
/// are reachable.
void draw_shifts(CaseRng& rng, int sign, double scale, double u_span,
                 double& dm, double& dp) {
  const double base = rng.uniform(-u_span / 2, u_span / 2);
  const double span = 2.0 * scale + 0.5;
  if (sign > 0) {
    dp = base;
    dm = base + rng.uniform(0.0, span);
  } else if (sign < 0) {
    dm = base;
    dp = base + rng.uniform(0.0, span);
  } else {
    dm = base;
    dp = base + rng.uniform(-span, span);
  }
}

}  // namespace

CheckResult check_case_table(const LabConfig& lab) {
  const GasContext gas = GasContext::make(lab.gamma);
  CheckResult res;
  res.name = "case-table";
  res.min_margin = kInf;
  res.worst_violation = -kInf;

  std::uint64_t stream = 10;
  for (const Bucket& bucket : kBuckets) {
    std::vector<CaseOut> outs(lab.quota);
    const std::uint64_t bucket_stream = stream++;
    detail::parallel_for(lab.quota, lab.workers, [&](std::size_t k) {
      CaseRng rng(lab.seed, bucket_stream, k);
      CaseOut c;
      for (int attempt = 0; attempt < 100000 && !c.accepted; ++attempt) {
        const State left{
            draw_base_rho(rng, bucket.before, lab.rho_min, lab.rho_max),
            rng.uniform(-lab.u_span, lab.u_span)};
        const State right = make_right_in_region(gas, left, bucket.before, rng,
                                                 lab.rho_min, lab.rho_max);
        const Invariants il = to_invariants(gas, left);
        const Invariants ir = to_invariants(gas, right);
        const double pattern_scale =
            std::abs(il.r - ir.r) + std::abs(il.s - ir.s);
        double dm, dp;
        draw_shifts(rng, bucket.sign, pattern_scale, lab.u_span, dm, dp);
        const State ls{left.rho, left.u + dm};
        const State rs{right.rho, right.u + dp};
        if (!solvable(gas, ls, rs)) continue;
        if (classify_region(gas, ls, rs) != bucket.after) continue;

        c.accepted = true;
        c.left = left;
        c.right = right;
        c.dm = dm;
        c.dp = dp;
        const WaveFan before = solve(gas, left, right);
        const WaveFan after = solve(gas, ls, rs);
        if (before.region != bucket.before) {
          c.failed = true;
          c.what = "constructed case classified off its region";
          break;
        }
        const double sb = shock_strength(before.wave1);
        const double sg = shock_strength(before.wave2);
        const double sb1 = shock_strength(after.wave1);
        const double sg1 = shock_strength(after.wave2);
        const double gap = std::abs(dp - dm);
        const double scale = 1.0 + sb + sg + gap;
        const double tol = 1e-9 * scale;

        double lhs_worst = -kInf, margin = kInf;
        auto leq = [&](double lhs, double rhs) {
          lhs_worst = std::max(lhs_worst, (lhs - rhs) / scale);
          margin = std::min(margin, rhs - lhs);
          if (lhs > rhs + tol) {
            c.failed = true;
            c.what = "case-table inequality violated";
          }
        };
        auto eq = [&](double lhs, double rhs) {
          lhs_worst = std::max(lhs_worst, std::abs(lhs - rhs) / scale);
          margin = std::min(margin, tol - std::abs(lhs - rhs));
          if (std::abs(lhs - rhs) > tol) {
            c.failed = true;
            c.what = "case-table signed equality violated";
          }
        };

        if (bucket.before == Region::I && bucket.after == Region::I) {
          leq(sb1, sb + gap);
          leq(sg1, sg + gap);
        } else if (bucket.before == Region::IV && bucket.after == Region::I) {
          leq(sb1, sb + gap);
          leq(sg1, gap);
        } else if (bucket.before == Region::II && bucket.after == Region::I) {
          leq(sg1, sg + gap);
          leq(sb1, gap);
        } else if (bucket.before == Region::III && bucket.after == Region::I) {
          leq(sb1 + sg1, 2.0 * gap);
        } else if (bucket.before == Region::I && bucket.after == Region::II) {
          leq(sg1, sb + sg + gap);
        } else if (bucket.before == Region::II && bucket.after == Region::II) {
          eq(sg1, sg + (dm - dp));
        } else if (bucket.before == Region::III && bucket.after == Region::II) {
          leq(sg1, gap);
        } else if (bucket.before == Region::I && bucket.after == Region::IV) {
          leq(sb1, sb + sg + gap);
          if (sb1 <= sb + sg - gap + tol) c.flag = 1;  // sharper printed form
        } else if (bucket.before == Region::III && bucket.after == Region::IV) {
          leq(sb1, gap);
        } else {  // IV -> IV
          eq(sb1, sb + (dm - dp));
        }

        // translation stability of the rarefaction quadrant: lifting the
        // right state keeps a two-rarefaction pattern a two-rarefaction
        if (bucket.before == Region::III) {
          const State lifted{right.rho, right.u + rng.uniform(1e-3, 1.0)};
          if (classify_region(gas, left, lifted) != Region::III) {
            c.failed = true;
            c.what = "two-rarefaction pattern lost under right lift";
          }
        }
        c.violation = lhs_worst;
        c.margin = margin;
        break;
      }
      outs[k] = c;
    });
    reduce_cases(lab, outs, bucket.name, res);
    if (std::string(bucket.name) == "I->IV") {
      for (const CaseOut& c : outs)
        if (c.accepted && c.flag) ++res.tally["I->IV:minus_form_holds"];
    }
  }

  // Emptiness sweeps: the ruled-out (before, after, shift-sign) combinations
  // must never be observed.
  for (const EmptyClaim& claim : kEmptyClaims) {
    const std::uint64_t claim_stream = stream++;
    std::vector<std::uint8_t> hit(lab.empty_attempts, 0);
    std::vector<std::uint8_t> checked(lab.empty_attempts, 0);
    std::vector<CaseOut> firsts(lab.empty_attempts);
    detail::parallel_for(lab.empty_attempts, lab.workers, [&](std::size_t k) {
      CaseRng rng(lab.seed, claim_stream, k);
      const State left{
          draw_base_rho(rng, claim.before, lab.rho_min, lab.rho_max),
          rng.uniform(-lab.u_span, lab.u_span)};
      const State right = make_right_in_region(gas, left, claim.before, rng,
                                               lab.rho_min, lab.rho_max);
      const Invariants il = to_invariants(gas, left);
      const Invariants ir = to_invariants(gas, right);
      const double pattern_scale =
          std::abs(il.r - ir.r) + std::abs(il.s - ir.s);
      double dm, dp;
      draw_shifts(rng, claim.sign, pattern_scale, lab.u_span, dm, dp);
      const State ls{left.rho, left.u + dm};
      const State rs{right.rho, right.u + dp};
      if (!solvable(gas, ls, rs)) return;
      checked[k] = 1;
      if (classify_region(gas, ls, rs) == claim.after) {
        hit[k] = 1;
        firsts[k].left = left;
        firsts[k].right = right;
        firsts[k].dm = dm;
        firsts[k].dp = dp;
        firsts[k].what = "ruled-out transition observed";
      }
    });
    std::size_t n_checked = 0;
    for (std::size_t k = 0; k < lab.empty_attempts; ++k) {
      n_checked += checked[k];
      if (hit[k]) {
        ++res.failures;
        ++res.failed[claim.name];
        firsts[k].failed = true;
        write_witness(lab, res, res.name + ":" + claim.name, k, firsts[k]);
      }
    }
    res.tally[claim.name] = n_checked;
  }
  return res;
}

InteractionConstant check_interaction_constant(const LabConfig& lab) {
  const GasContext gas = GasContext::make(lab.gamma);
  InteractionConstant out;
  CheckResult& res = out.monotonicity;
  res.name = "shift-monotonicity";
  res.min_margin = kInf;
  res.worst_violation = -kInf;

  std::vector<CaseOut> outs(lab.cases);
  std::vector<double> ratios(lab.cases, 0.0);
  detail::parallel_for(lab.cases, lab.workers, [&](std::size_t k) {
    CaseRng rng(lab.seed, 3, k);
    CaseOut c;
    double hi = rng.log_uniform(lab.rho_min, lab.rho_max);
    double lo = rng.log_uniform(lab.rho_min, lab.rho_max);
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 1e-9 * hi) hi *= 1.0 + 1e-6;
    const double a = rng.log_uniform(1e-6, 20.0);
    const double gh = g1(gas, a, hi);
    const double gl = g1(gas, a, lo);
    const double diff = gl - gh;  // complement grows as the base density drops
    const double scale = 1.0 + std::abs(gh) + std::abs(gl);
    c.accepted = true;
    c.left = State{hi, 0.0};
    c.right = State{lo, 0.0};
    c.violation = -diff / scale;
    c.margin = diff;
    if (diff < -1e-12 * scale) {
      c.failed = true;
      c.what = "reflected strength not monotone in base density";
    }
    const double s_gap =
        2.0 * gas.sqrt_gamma *
        (std::pow(hi, gas.eps) - std::pow(lo, gas.eps)) / gas.eps;
    ratios[k] = diff / (gas.eps * s_gap * a);
    outs[k] = c;
  });
  reduce_cases(lab, outs, "cases", res);
  for (std::size_t k = 0; k < lab.cases; ++k) {
    if (k < lab.cases / 2) out.C_hat_half = std::max(out.C_hat_half, ratios[k]);
    out.C_hat = std::max(out.C_hat, ratios[k]);
  }
  res.tally["C_hat_milli"] =
      static_cast<std::size_t>(std::llround(out.C_hat * 1000.0));
  if (!(std::isfinite(out.C_hat) &&
        std::abs(out.C_hat - out.C_hat_half) <= 0.2 * out.C_hat)) {
    ++res.failures;
    ++res.failed["stability"];
  }
  return out;
}

double estimate_interaction_constant(const GasContext& gas, double rho_min,
                                     double rho_max) {
  rho_min = std::max(rho_min, 1e-6);
  rho_max = std::max(rho_max, rho_min * (1.0 + 1e-6));
  const int nr = 28;
  const int na = 44;
  const double llo = std::log(rho_min), lhi = std::log(rho_max);
  const double alo = std::log(1e-4), ahi = std::log(24.0);
  double worst = 0.0;
  for (int i = 1; i < nr; ++i) {
    const double hi = std::exp(llo + (lhi - llo) * i / (nr - 1));
    const double pow_hi = std::pow(hi, gas.eps);
    for (int j = 0; j < i; ++j) {
      const double lo = std::exp(llo + (lhi - llo) * j / (nr - 1));
      const double denom_rho =
          2.0 * gas.sqrt_gamma * (pow_hi - std::pow(lo, gas.eps));
      for (int k = 0; k < na; ++k) {
        const double a = std::exp(alo + (ahi - alo) * k / (na - 1));
        const double diff = g1(gas, a, lo) - g1(gas, a, hi);
        worst = std::max(worst, diff / (denom_rho * a));
      }
    }
  }
  return worst;
}

CheckResult check_curve_properties(const LabConfig& lab) {
  const GasContext gas = GasContext::make(lab.gamma);
  CheckResult res;
  res.name = "curve-properties";
  res.min_margin = kInf;
  res.worst_violation = -kInf;

  const int n_rho = 40;
  const int n_x = 50;
  const std::size_t total = static_cast<std::size_t>(2 * n_rho * n_x);
  std::vector<CaseOut> outs(total);
  std::vector<double> naive_gap(total, 0.0);
  detail::parallel_for(total, lab.workers, [&](std::size_t k) {
    const int family = k < total / 2 ? 1 : 2;
    const std::size_t idx = k % (total / 2);
    const int i = static_cast<int>(idx / n_x);
    const int j = static_cast<int>(idx % n_x);
    const double rho0 =
        std::exp(std::log(lab.rho_min) +
                 (std::log(lab.rho_max) - std::log(lab.rho_min)) * i /
                     (n_rho - 1));
    const double x =
        std::exp(std::log(1e-3) + (std::log(3.0) - std::log(1e-3)) * j /
                                      (n_x - 1));
    const double pe = std::pow(rho0, gas.eps);
    const double A = curve_detail::A_of_x(gas, x);
    const double B = curve_detail::B_of_x(gas, x);
    const double decay = std::exp(-gas.eps * x);
    const double a = family == 1 ? pe * A : pe * decay * A;
    const double b_direct = family == 1 ? pe * B : pe * decay * B;

    CaseOut c;
    c.accepted = true;
    c.left = State{rho0, 0.0};
    c.right = State{family == 1 ? rho0 * std::exp(x) : rho0 * std::exp(-x),
                    0.0};
    auto curve = [&](double arg) {
      return family == 1 ? g1(gas, arg, rho0) : g2(gas, arg, rho0);
    };
    const CurveDerivatives d = family == 1
                                   ? g1_with_derivatives(gas, a, rho0)
                                   : g2_with_derivatives(gas, a, rho0);
    double worst = -kInf, margin = kInf;
    auto expect = [&](bool ok, double badness, const char* what) {
      worst = std::max(worst, badness);
      margin = std::min(margin, -badness);
      if (!ok) {
        c.failed = true;
        c.what = what;
      }
    };
    const double vscale = 1.0 + std::abs(b_direct);
    expect(std::abs(d.value - b_direct) <= 1e-10 * vscale,
           (std::abs(d.value - b_direct) - 1e-10 * vscale) / vscale,
           "value disagrees with the parametric form");
    expect(d.d1 >= 0.0 && d.d1 < 1.0, std::max(-d.d1, d.d1 - 1.0),
           "slope out of [0,1)");
    expect(d.d2 >= -1e-12 * (1.0 + std::abs(d.d2)), -d.d2,
           "second derivative negative");

    // Richardson-extrapolated central differences against the closed forms.
    const double h = 1e-3 * (a + 0.1);
    const double f1 = (curve(a + h) - curve(a - h)) / (2.0 * h);
    const double f1b = (curve(a + h / 2) - curve(a - h / 2)) / h;
    const double fd1 = (4.0 * f1b - f1) / 3.0;
    expect(std::abs(fd1 - d.d1) <= 1e-6 * (1.0 + std::abs(d.d1)),
           std::abs(fd1 - d.d1) / (1.0 + std::abs(d.d1)) - 1e-6,
           "first derivative disagrees with finite differences");
    const double f2 =
        (curve(a + h) - 2.0 * curve(a) + curve(a - h)) / (h * h);
    const double f2b = (curve(a + h / 2) - 2.0 * curve(a) + curve(a - h / 2)) /
                       (h * h / 4.0);
    const double fd2 = (4.0 * f2b - f2) / 3.0;
    expect(std::abs(fd2 - d.d2) <= 1e-6 * (1.0 + std::abs(d.d2)),
           std::abs(fd2 - d.d2) / (1.0 + std::abs(d.d2)) - 1e-6,
           "second derivative disagrees with finite differences");

    // Reflection identity: the backward 2-curve complement equals the forward
    // 1-curve complement taken at the downstream density.
    if (family == 2) {
      const double mirrored = g1(gas, a, rho0 * std::exp(-x));
      expect(std::abs(d.value - mirrored) <= 1e-10 * vscale,
             std::abs(d.value - mirrored) / vscale - 1e-10,
             "reflection identity failed");
      const double naive = g1(gas, a, rho0);
      naive_gap[k] = std::abs(d.value - naive) / (std::abs(d.value) + 1e-30);
    }
    c.violation = worst;
    c.margin = margin;
    outs[k] = c;
  });
  reduce_cases(lab, outs, "grid", res);
  double max_gap = 0.0;
  for (double g : naive_gap) max_gap = std::max(max_gap, g);
  res.tally["naive_reflection_gap_ppm"] =
      static_cast<std::size_t>(std::llround(max_gap * 1e6));
  return res;
}

CheckResult check_diamond(const LabConfig& lab, double K_coef) {
  const GasContext gas = GasContext::make(lab.gamma);
  CheckResult res;
  res.name = "diamond";
  res.min_margin = kInf;
  res.worst_violation = -kInf;
  res.tally["K_coef_milli"] =
      static_cast<std::size_t>(std::llround(K_coef * 1000.0));

  // Fan amplitudes sized so the small-functional premise K*F <= 1/4 is
  // reachable by rejection.
  const double w = std::min(0.25, 0.06 / std::max(K_coef, 0.05));

  struct Batch {
    const char* name;
    int kind;  // 0 zero shifts, 1 equal shifts, 2 free shifts
    std::size_t count;
  };
  const Batch batches[] = {
      {"zero_shift", 0, lab.cases / 4},
      {"equal_shift", 1, lab.cases / 4},
      {"random_shift", 2, lab.cases / 2},
  };
  std::uint64_t stream = 40;
  for (const Batch& batch : batches) {
    std::vector<CaseOut> outs(batch.count);
    const std::uint64_t batch_stream = stream++;
    detail::parallel_for(batch.count, lab.workers, [&](std::size_t k) {
      CaseRng rng(lab.seed, batch_stream, k);
      CaseOut c;
      for (int attempt = 0; attempt < 20000 && !c.accepted; ++attempt) {
        const State a{rng.log_uniform(lab.rho_min * 2.0, lab.rho_max / 2.0),
                      rng.uniform(-lab.u_span, lab.u_span)};
        const State b{a.rho * std::exp(rng.uniform(-w, w)),
                      a.u + rng.uniform(-w, w)};
        const State cst{b.rho * std::exp(rng.uniform(-w, w)),
                        b.u + rng.uniform(-w, w)};
        if (!solvable(gas, a, b) || !solvable(gas, b, cst)) continue;
        const WaveFan f1 = solve(gas, a, b);
        const WaveFan f2 = solve(gas, b, cst);
        const double b1 = shock_strength(f1.wave1);
        const double g1v = shock_strength(f1.wave2);
        const double b2 = shock_strength(f2.wave1);
        const double g2v = shock_strength(f2.wave2);
        const double V1 = b1 + g1v + b2 + g2v;
        const double Q1 = b1 * b2 + g1v * g2v + g1v * b2;
        const double F1 = V1 + K_coef * Q1;
        if (K_coef * F1 > 0.25) continue;  // small-functional premise

        double dl = 0.0, dr = 0.0;
        if (batch.kind == 1) {
          dl = dr = rng.uniform(-0.5, 0.5);
        } else if (batch.kind == 2) {
          dl = rng.uniform(-0.3, 0.3);
          dr = rng.uniform(-0.3, 0.3);
        }
        const State ls{a.rho, a.u + dl};
        const State rs{cst.rho, cst.u + dr};
        if (!solvable(gas, ls, rs)) continue;
        const WaveFan out_fan = solve(gas, ls, rs);
        const double F2 = shock_strength(out_fan.wave1) +
                          shock_strength(out_fan.wave2);
        const double bound = F1 + 2.0 * std::abs(dr - dl);
        const double tol = 1e-9 * (1.0 + F1);
        c.accepted = true;
        c.left = ls;
        c.right = rs;
        c.dm = dl;
        c.dp = dr;
        c.violation = (F2 - bound) / (1.0 + F1);
        c.margin = bound - F2;
        if (F2 > bound + tol) {
          c.failed = true;
          c.what = "outgoing functional exceeded the local bound";
        }
        const double slack = (bound - F2) / (1.0 + F1);
        c.flag = slack < 1e-6 ? 0 : slack < 1e-3 ? 1 : slack < 1e-1 ? 2 : 3;
      }
      outs[k] = c;
    });
    reduce_cases(lab, outs, batch.name, res);
    if (batch.kind == 2) {
      for (const CaseOut& c : outs) {
        if (!c.accepted) continue;
        static const char* names[] = {"slack<1e-6", "slack<1e-3", "slack<1e-1",
                                      "slack>=1e-1"};
        ++res.tally[names[c.flag]];
      }
    }
  }
  return res;
}

std::vector<CheckResult> run_all_checks(const LabConfig& lab) {
  std::vector<CheckResult> results;
  results.push_back(check_left_shift(lab));
  results.push_back(check_right_shift(lab));
  results.push_back(check_case_table(lab));
  InteractionConstant ic = check_interaction_constant(lab);
  results.push_back(std::move(ic.monotonicity));
  results.push_back(check_curve_properties(lab));
  const GasContext gas = GasContext::make(lab.gamma);
  const double K_coef =
      4.0 * gas.eps * estimate_interaction_constant(gas, 0.25 * lab.rho_min,
                                                    4.0 * lab.rho_max);
  results.push_back(check_diamond(lab, K_coef));
  return results;
}

}  // namespace ep1d
