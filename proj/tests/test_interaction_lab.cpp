#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "doctest.h"
#include "ep1d/interaction_lab.hpp"

using namespace ep1d;

namespace {

LabConfig small_lab() {
  LabConfig lab;
  lab.gamma = 1.4;
  lab.cases = 1200;
  lab.quota = 150;
  lab.empty_attempts = 15000;
  lab.workers = 4;
  return lab;
}

}  // namespace

TEST_CASE("all interaction batches pass at reduced sample size") {
  const LabConfig lab = small_lab();
  const std::vector<CheckResult> results = run_all_checks(lab);
  REQUIRE(results.size() == 6);
  const char* names[] = {"left-shift",         "right-shift",
                         "case-table",         "shift-monotonicity",
                         "curve-properties",   "diamond"};
  for (std::size_t i = 0; i < 6; ++i) {
    CAPTURE(names[i]);
    CHECK(results[i].name == names[i]);
    CHECK(results[i].pass());
    CHECK(results[i].failures == 0);
    CHECK(results[i].failed.empty());
    CHECK(results[i].cases > 0);
    CHECK(results[i].worst_violation <= 1e-9);
    CHECK(results[i].witness_files.empty());
  }
}

TEST_CASE("left-shift batch is deterministic and independent of workers") {
  LabConfig lab = small_lab();
  lab.cases = 600;
  lab.workers = 1;
  const CheckResult seq = check_left_shift(lab);
  lab.workers = 4;
  const CheckResult par = check_left_shift(lab);
  CHECK(seq.cases == par.cases);
  CHECK(seq.failures == par.failures);
  CHECK(seq.worst_violation == par.worst_violation);
  CHECK(seq.min_margin == par.min_margin);
  CHECK(seq.tally == par.tally);

  CHECK(seq.cases == 600);
  CHECK(seq.tally.at("cases") == 600);
  CHECK(seq.tally.count("exhausted") == 0);
  // The lemma is one-sided: strengths never grow by more than the shift.
  CHECK(seq.worst_violation <= 1e-12);
  CHECK(seq.min_margin >= -1e-12);
}

TEST_CASE("right-shift batch accepts its full quota under the hypothesis") {
  LabConfig lab = small_lab();
  lab.cases = 600;
  const CheckResult res = check_right_shift(lab);
  CHECK(res.pass());
  CHECK(res.cases == 600);
  CHECK(res.tally.count("exhausted") == 0);
  CHECK(res.worst_violation <= 1e-12);
}

TEST_CASE("case-table fills every quota and ruled-out cells stay empty") {
  LabConfig lab = small_lab();
  lab.quota = 120;
  lab.empty_attempts = 8000;
  const CheckResult res = check_case_table(lab);
  CHECK(res.pass());

  const char* buckets[] = {"I->I",  "IV->I",  "II->I",  "III->I", "I->II",
                           "II->II", "III->II", "I->IV", "III->IV", "IV->IV"};
  for (const char* b : buckets) {
    CAPTURE(b);
    REQUIRE(res.tally.count(b) == 1);
    CHECK(res.tally.at(b) == 120);
    CHECK(res.failed.count(b) == 0);
  }
  CHECK(res.cases == 10 * 120);
  CHECK(res.tally.count("exhausted") == 0);

  const char* empties[] = {"empty:IV->II",        "empty:II->IV",
                           "empty:IV->I:dp>dm",   "empty:II->I:dp>dm",
                           "empty:III->I:dp>dm",  "empty:I->II:dm>=dp",
                           "empty:III->II:dp>dm", "empty:I->IV:dm>=dp",
                           "empty:III->IV:dp>dm"};
  for (const char* e : empties) {
    CAPTURE(e);
    REQUIRE(res.tally.count(e) == 1);
    CHECK(res.tally.at(e) > 0);       // plenty of solvable draws examined
    CHECK(res.failed.count(e) == 0);  // none landed in the ruled-out cell
  }
}

TEST_CASE("interaction constant: monotone curves and stable measured C") {
  LabConfig lab = small_lab();
  lab.cases = 2000;
  const InteractionConstant ic = check_interaction_constant(lab);
  CHECK(ic.monotonicity.pass());
  CHECK(ic.monotonicity.cases == 2000);
  CHECK(ic.monotonicity.worst_violation <= 1e-12);
  CHECK(ic.monotonicity.min_margin >= -1e-12);
  CHECK(std::isfinite(ic.C_hat));
  CHECK(ic.C_hat > 0.0);
  CHECK(ic.C_hat_half > 0.0);
  CHECK(ic.C_hat_half <= ic.C_hat);
  CHECK(std::abs(ic.C_hat - ic.C_hat_half) <= 0.2 * ic.C_hat);
  CHECK(ic.monotonicity.tally.at("C_hat_milli") ==
        static_cast<std::size_t>(std::llround(ic.C_hat * 1000.0)));

  // The startup sweep is deterministic and brackets the sampled constant.
  const GasContext gas = GasContext::make(lab.gamma);
  const double est =
      estimate_interaction_constant(gas, lab.rho_min, lab.rho_max);
  CHECK(est == estimate_interaction_constant(gas, lab.rho_min, lab.rho_max));
  CHECK(std::isfinite(est));
  CHECK(est > 0.0);
  CHECK(ic.C_hat <= 2.0 * est + 1.0);
}

TEST_CASE("curve-properties grid passes and exposes the naive-reflection gap") {
  LabConfig lab = small_lab();
  lab.gamma = 1.2;
  const CheckResult res = check_curve_properties(lab);
  CHECK(res.pass());
  CHECK(res.cases == 4000);
  CHECK(res.tally.at("grid") == 4000);
  REQUIRE(res.tally.count("naive_reflection_gap_ppm") == 1);
  // Treating the backward curve as the forward one at the same base density
  // is off by far more than any tolerance in play.
  CHECK(res.tally.at("naive_reflection_gap_ppm") > 1000);
}

TEST_CASE("diamond bound holds with and without sampled shifts") {
  LabConfig lab = small_lab();
  lab.cases = 1200;
  const CheckResult res = check_diamond(lab, 0.8);
  CHECK(res.pass());
  CHECK(res.tally.at("K_coef_milli") == 800);
  REQUIRE(res.tally.count("zero_shift") == 1);
  REQUIRE(res.tally.count("equal_shift") == 1);
  REQUIRE(res.tally.count("random_shift") == 1);
  CHECK(res.tally.at("zero_shift") == 300);
  CHECK(res.tally.at("equal_shift") == 300);
  CHECK(res.tally.at("random_shift") == 600);
  CHECK(res.worst_violation <= 1e-9);

  // The slack histogram partitions the free-shift batch.
  std::size_t hist = 0;
  for (const char* key :
       {"slack<1e-6", "slack<1e-3", "slack<1e-1", "slack>=1e-1"})
    if (res.tally.count(key)) hist += res.tally.at(key);
  CHECK(hist == res.tally.at("random_shift"));
}
