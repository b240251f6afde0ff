#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "switchcount/moments.hpp"
#include "switchcount/simulate.hpp"
#include "switchcount/sweep.hpp"
#include "switchcount/verify.hpp"

namespace swc {

inline nlohmann::json influence_json(const InfluenceProfile& prof, double p) {
  nlohmann::json j;
  j["per_bit"] = prof.per_bit;
  j["total"] = prof.total;
  j["sq_sum"] = prof.sq_sum;
  j["normalized_per_bit"] = prof.normalized(p);
  j["regular"] = is_regular(prof);
  return j;
}

inline nlohmann::json moment_report_json(const MomentReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["function"] = r.function_name;
  j["n"] = r.n;
  j["p"] = r.p;
  j["expected_count"] = r.expected_count;
  j["second_moment"]["series"] = r.second_series;
  j["second_moment"]["fourier"] = r.second_fourier;
  j["second_moment"]["increasing"] =
      r.second_increasing ? nlohmann::json(*r.second_increasing) : nlohmann::json(nullptr);
  j["variance"] = r.variance_f;
  for (const auto& [theta, bound] : r.pz) {
    j["pz_bound"][detail::format_short(theta)] = bound;
  }
  j["increasing_upper"] =
      r.increasing_upper ? nlohmann::json(*r.increasing_upper) : nlohmann::json(nullptr);
  j["criterion_ratio"] =
      r.criterion_ratio ? nlohmann::json(*r.criterion_ratio) : nlohmann::json(nullptr);
  j["influence"] = influence_json(r.influence, r.p);
  j["residuals"]["series_vs_fourier"] = std::abs(r.second_series - r.second_fourier);
  j["residuals"]["series_vs_increasing"] =
      r.second_increasing ? nlohmann::json(std::abs(r.second_series - *r.second_increasing))
                          : nlohmann::json(nullptr);
  j["residuals"]["expected_vs_influence"] =
      std::abs(r.expected_count - r.influence.total);
  return j;
}

inline nlohmann::json mc_moments_json(const McMoments& m) {
  nlohmann::json j;
  j["schema"] = 1;
  j["mean"] = m.mean;
  j["second_moment"] = m.second_moment;
  j["se_mean"] = m.se_mean;
  j["se_second"] = m.se_second;
  j["tail"] = m.tail;
  j["trials"] = m.trials;
  j["seed"] = m.seed;
  return j;
}

inline nlohmann::json verify_report_json(const std::vector<CheckResult>& checks,
                                         const VerifyConfig& cfg) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"]["n_max"] = cfg.n_max;
  j["config"]["p_grid"] = cfg.p_grid;
  j["config"]["seed"] = cfg.seed;
  j["config"]["mc_trials"] = cfg.mc_trials;
  bool all = true;
  nlohmann::json items = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json item;
    item["name"] = c.name;
    item["max_residual"] = c.max_residual;
    item["tolerance"] = c.tolerance;
    item["pass"] = c.pass;
    if (!c.note.empty()) item["note"] = c.note;
    items.push_back(item);
    all = all && c.pass;
  }
  j["checks"] = items;
  j["all_pass"] = all;
  const auto& ic = increasing_constant();
  j["increasing_constant"]["raw"] = ic.raw;
  j["increasing_constant"]["resolved"] = ic.resolved;
  j["increasing_constant"]["pin_residual"] = ic.pin_residual;
  return j;
}

inline nlohmann::json sweep_row_json(const SweepRow& r, const SweepConfig& cfg) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["prob_one"] = opt(r.prob_one);
  j["influence_total"] = opt(r.influence_total);
  j["influence_sq_sum"] = opt(r.influence_sq_sum);
  j["expected_count"] = opt(r.expected_count);
  j["second_series"] = opt(r.second_series);
  j["second_fourier"] = opt(r.second_fourier);
  j["second_increasing"] = opt(r.second_increasing);
  j["variance"] = opt(r.variance);
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    j["pz"][detail::format_short(cfg.thetas[i])] = opt(r.pz[i]);
  }
  j["increasing_upper"] = opt(r.increasing_upper);
  j["criterion_ratio"] = opt(r.criterion_ratio);
  j["mc_mean"] = r.mc_mean;
  j["mc_se"] = r.mc_se;
  for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
    j["tail"][std::to_string(cfg.k_grid[i])] = r.tail[i];
  }
  return j;
}

inline nlohmann::json sweep_json(const std::vector<SweepRow>& rows, const SweepConfig& cfg,
                                 const std::string& family_name) {
  nlohmann::json j;
  j["schema"] = 1;
  j["family"] = family_name;
  j["schedule"] = cfg.schedule.describe();
  j["thetas"] = cfg.thetas;
  j["k_grid"] = cfg.k_grid;
  j["mc_trials"] = cfg.mc.trials;
  j["seed"] = cfg.mc.seed;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(sweep_row_json(r, cfg));
  j["rows"] = arr;
  return j;
}

}  // namespace swc
