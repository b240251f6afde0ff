#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "switchcount/json_io.hpp"
#include "switchcount/schedule.hpp"
#include "switchcount/sweep.hpp"

using namespace swc;

TEST_CASE("schedule parsing and validation") {
  Schedule c = Schedule::parse("constant:0.5");
  CHECK(c.at(3, 0) == 0.5);
  CHECK(c.at(1000, 5) == 0.5);

  Schedule pw = Schedule::parse("power:1.0,0.5");
  CHECK(pw.at(4, 0) == Catch::Approx(0.5));
  CHECK_THROWS_AS(pw.at(1, 0), std::invalid_argument);  // p=1 is out of range

  Schedule inv = Schedule::parse("inverse:2");
  CHECK(inv.at(8, 0) == Catch::Approx(0.25));
  CHECK_THROWS_AS(inv.at(2, 0), std::invalid_argument);

  Schedule cu = Schedule::parse("custom:0.5,0.3");
  CHECK(cu.at(3, 1) == 0.3);
  CHECK_THROWS_AS(cu.at(5, 2), std::invalid_argument);

  CHECK_THROWS_AS(Schedule::parse("linear:1"), std::invalid_argument);
  CHECK(Schedule::parse("power:1.0,0.5").describe() == "power:1,0.5");
}

TEST_CASE("sweep validates the schedule before any computation") {
  SweepConfig cfg;
  cfg.family = FamilySpec::majority();
  cfg.n_grid = {3, 5};
  cfg.schedule = Schedule::parse("inverse:6");  // p=2 at n=3
  cfg.mc.trials = 10;
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}

TEST_CASE("sweep rows reproduce the single-run operations") {
  SweepConfig cfg;
  cfg.family = FamilySpec::majority();
  cfg.n_grid = {3, 5};
  cfg.schedule = Schedule::parse("constant:0.5");
  cfg.mc.trials = 2000;
  cfg.mc.seed = 7;
  std::vector<SweepRow> rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);

  BiasParam p(0.5);
  BooleanFunction maj3 = BooleanFunction::majority(3);
  CHECK(*rows[0].expected_count == expected_count(maj3, p));
  CHECK(*rows[0].influence_total == influence_profile(maj3, p).total);
  CHECK(*rows[0].second_series == second_moment_series(maj3, p));
  CHECK(*rows[0].second_fourier == second_moment_fourier(maj3, p));
  CHECK(*rows[0].second_increasing == second_moment_increasing(maj3, p));
  CHECK(*rows[0].increasing_upper == increasing_upper_bound(maj3, p));
  CHECK(*rows[0].prob_one == nondegeneracy(maj3, p).value);

  McConfig mc = cfg.mc;
  mc.tail_k_max = 16;
  McMoments m = monte_carlo_moments(cfg.family, 3, p, mc);
  CHECK(rows[0].mc_mean == m.mean);
  CHECK(rows[0].tail[0] == m.tail[1]);  // k grid starts at 1
}

TEST_CASE("sweep CSV has the fixed header and NA gates") {
  SweepConfig cfg;
  cfg.family = FamilySpec::parity();
  cfg.n_grid = {2, 16};  // 16 exceeds the second-moment gate
  cfg.schedule = Schedule::parse("constant:0.5");
  cfg.mc.trials = 500;
  std::vector<SweepRow> rows = run_sweep(cfg);
  std::ostringstream buf;
  write_sweep_csv(rows, cfg, buf);
  std::istringstream in(buf.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "n,p,prob_one,influence_total,influence_sq_sum,expected_count,second_series,"
        "second_fourier,second_increasing,variance,pz_0.25,pz_0.5,pz_0.75,"
        "increasing_upper,criterion_ratio,mc_mean,mc_se,tail_1,tail_2,tail_4,tail_8,tail_16");
  std::string row2, row16;
  std::getline(in, row2);
  std::getline(in, row16);
  CHECK(row2.find("NA") != std::string::npos);   // parity: no increasing columns
  CHECK(row16.find(",NA,") != std::string::npos);  // second moments gated out at n=16
  // n=16 keeps exact first-moment columns but drops second moments
  REQUIRE(rows[1].expected_count.has_value());
  CHECK_FALSE(rows[1].second_series.has_value());
  CHECK_FALSE(rows[1].pz[0].has_value());
}

TEST_CASE("moment report JSON carries every field") {
  MomentReport r = moment_report(BooleanFunction::majority(3), BiasParam(0.5));
  nlohmann::json j = moment_report_json(r);
  CHECK(j["schema"] == 1);
  CHECK(j["expected_count"].get<double>() == r.expected_count);
  CHECK(j["second_moment"]["series"].get<double>() == r.second_series);
  CHECK(j["second_moment"]["fourier"].get<double>() == r.second_fourier);
  CHECK_FALSE(j["second_moment"]["increasing"].is_null());
  CHECK(j["pz_bound"].contains("0.5"));
  CHECK(j["influence"]["per_bit"].size() == 3);
  CHECK(j["influence"]["regular"] == true);
  CHECK(j["residuals"].contains("series_vs_fourier"));
  CHECK(j["residuals"].contains("expected_vs_influence"));

  MomentReport pr = moment_report(BooleanFunction::parity(2), BiasParam(0.5));
  nlohmann::json pj = moment_report_json(pr);
  CHECK(pj["second_moment"]["increasing"].is_null());
  CHECK(pj["increasing_upper"].is_null());
}

TEST_CASE("verify report JSON shape") {
  VerifyConfig cfg;
  cfg.n_max = 4;
  cfg.p_grid = {0.3, 0.5};
  cfg.mc_trials = 4000;
  auto checks = run_verification(cfg);
  nlohmann::json j = verify_report_json(checks, cfg);
  CHECK(j["schema"] == 1);
  CHECK(j["checks"].is_array());
  CHECK(j["checks"].size() == checks.size());
  CHECK(j.contains("all_pass"));
  CHECK(j["increasing_constant"]["resolved"] == 2.0);
  bool found_constant_line = false;
  for (const auto& item : j["checks"]) {
    if (item["name"] == "increasing-second-moment-constant") {
      found_constant_line = true;
      CHECK(item["pass"] == true);
    }
  }
  CHECK(found_constant_line);
}

TEST_CASE("mc moments JSON") {
  McConfig cfg;
  cfg.trials = 100;
  cfg.seed = 3;
  McMoments m = monte_carlo_moments(BooleanFunction::dictator(4), BiasParam(0.5), cfg);
  nlohmann::json j = mc_moments_json(m);
  CHECK(j["trials"] == 100);
  CHECK(j["tail"].size() == 17);
  CHECK(j["tail"][0] == 1.0);
}
