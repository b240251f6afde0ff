// Command-line harness: spectra, influence profiles, moment reports,
// Monte Carlo simulation, family sweeps, and the verification suite.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "switchcount/dynamics.hpp"
#include "switchcount/function.hpp"
#include "switchcount/hypercube.hpp"
#include "switchcount/json_io.hpp"
#include "switchcount/moments.hpp"
#include "switchcount/schedule.hpp"
#include "switchcount/simulate.hpp"
#include "switchcount/spectral.hpp"
#include "switchcount/sweep.hpp"
#include "switchcount/verify.hpp"

namespace {

// JSON config files mirroring the flags: top-level keys are global options,
// nested objects address subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        std::string name = opt->get_lnames()[0];
        if (opt->get_type_size() != 0) {
          if (opt->count() == 1) {
            j[name] = opt->results().at(0);
          } else if (opt->count() > 1) {
            j[name] = opt->results();
          } else if (default_also && !opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
          }
        }
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    input >> j;
    return from_json(j, "", {});
  }

 private:
  static std::vector<CLI::ConfigItem> from_json(const nlohmann::json& j, const std::string& name,
                                                const std::vector<std::string>& prefix) {
    std::vector<CLI::ConfigItem> results;
    if (j.is_object()) {
      for (auto item = j.cbegin(); item != j.cend(); ++item) {
        auto copy_prefix = prefix;
        if (!name.empty()) copy_prefix.push_back(name);
        auto sub = from_json(*item, item.key(), copy_prefix);
        results.insert(results.end(), sub.begin(), sub.end());
      }
      return results;
    }
    if (name.empty()) {
      throw CLI::ConversionError("top-level config values must live in an object");
    }
    results.emplace_back();
    CLI::ConfigItem& res = results.back();
    res.name = name;
    res.parents = prefix;
    if (j.is_boolean()) {
      res.inputs = {j.get<bool>() ? "true" : "false"};
    } else if (j.is_string()) {
      res.inputs = {j.get<std::string>()};
    } else if (j.is_number()) {
      std::ostringstream ss;
      ss.precision(16);
      ss << j.get<double>();
      res.inputs = {ss.str()};
    } else if (j.is_array()) {
      for (const auto& el : j) {
        if (el.is_string()) {
          res.inputs.push_back(el.get<std::string>());
        } else {
          std::ostringstream ss;
          ss.precision(16);
          ss << el.get<double>();
          res.inputs.push_back(ss.str());
        }
      }
    } else {
      throw CLI::ConversionError("cannot convert config entry " + name);
    }
    return results;
  }
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  double tol = 1e-12;
  std::string out;
  bool reproducible = false;
};

struct FunctionOptions {
  std::string family;
  int n = 0;
  int tribe_size = 0;
  std::string table_path;
};

void add_function_options(CLI::App* cmd, FunctionOptions& fo, bool require_n = true) {
  auto* fam = cmd->add_option("--family", fo.family,
                              "family: dictator|majority|parity|tribes|and|or");
  auto* n_opt = cmd->add_option("--n", fo.n, "dimension");
  cmd->add_option("--tribe-size", fo.tribe_size, "tribe width (tribes family)");
  auto* tab = cmd->add_option("--table", fo.table_path, "truth table file (n=<int> header)");
  fam->excludes(tab);
  if (require_n) n_opt->needs(fam);
}

swc::FamilySpec parse_family(const FunctionOptions& fo) {
  if (fo.family == "dictator") return swc::FamilySpec::dictator();
  if (fo.family == "majority") return swc::FamilySpec::majority();
  if (fo.family == "parity") return swc::FamilySpec::parity();
  if (fo.family == "tribes") return swc::FamilySpec::tribes(fo.tribe_size);
  if (fo.family == "and") return swc::FamilySpec::all_and();
  if (fo.family == "or") return swc::FamilySpec::any_or();
  throw CLI::ValidationError("--family", "unknown family: " + fo.family);
}

swc::BooleanFunction make_function(const FunctionOptions& fo) {
  if (!fo.table_path.empty()) return swc::BooleanFunction::load_table(fo.table_path);
  if (fo.family.empty()) throw CLI::ValidationError("either --family or --table is required");
  if (fo.n < 1) throw CLI::ValidationError("--n", "dimension required with --family");
  return swc::BooleanFunction::from_family(parse_family(fo), fo.n);
}

void stamp(nlohmann::json& j, const GlobalOptions& g) {
  if (!g.reproducible) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
}

void emit(const std::string& text, const GlobalOptions& g) {
  if (g.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(g.out);
    if (!out) throw std::runtime_error("cannot write " + g.out);
    out << text;
    if (text.empty() || text.back() != '\n') out << "\n";
  }
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<long long> parse_longs(const std::string& csv) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoll(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"switch-count statistics of Boolean functions under biased hypercube dynamics"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file mirroring the flags");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--tol", g.tol, "series truncation tolerance")->capture_default_str();
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_flag("--reproducible", g.reproducible, "suppress the timestamp field");

  // --- spectrum ---
  auto* cmd_spectrum = app.add_subcommand("spectrum", "write the coefficient table as CSV");
  FunctionOptions spec_fn;
  double spec_p = 0.5;
  add_function_options(cmd_spectrum, spec_fn);
  cmd_spectrum->add_option("--p", spec_p, "bias")->required();

  // --- influence ---
  auto* cmd_influence = app.add_subcommand("influence", "per-bit influence profile as JSON");
  FunctionOptions infl_fn;
  double infl_p = 0.5;
  bool infl_estimate = false;
  long long infl_trials = 100000;
  add_function_options(cmd_influence, infl_fn);
  cmd_influence->add_option("--p", infl_p, "bias")->required();
  cmd_influence->add_flag("--estimate", infl_estimate, "Monte Carlo estimate instead of exact");
  cmd_influence->add_option("--trials", infl_trials, "trials for --estimate");

  // --- moments ---
  auto* cmd_moments = app.add_subcommand("moments", "full moment report as JSON");
  FunctionOptions mom_fn;
  double mom_p = 0.5;
  std::string mom_thetas = "0.25,0.5,0.75";
  add_function_options(cmd_moments, mom_fn);
  cmd_moments->add_option("--p", mom_p, "bias")->required();
  cmd_moments->add_option("--thetas", mom_thetas, "comma list for the tail bound")
      ->capture_default_str();

  // --- simulate ---
  auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo switch counting");
  FunctionOptions sim_fn;
  double sim_p = 0.5;
  long long sim_trials = 100000;
  long long sim_n_large = 0;
  int sim_kmax = 16;
  bool sim_per_trial = false;
  add_function_options(cmd_simulate, sim_fn);
  cmd_simulate->add_option("--p", sim_p, "bias")->required();
  cmd_simulate->add_option("--trials", sim_trials, "number of trajectories")
      ->capture_default_str();
  cmd_simulate->add_option("--n-large", sim_n_large,
                           "family dimension past the word gate (families only)");
  cmd_simulate->add_option("--tail-kmax", sim_kmax, "largest k in the tail table")
      ->capture_default_str();
  cmd_simulate->add_flag("--per-trial", sim_per_trial,
                         "emit CSV rows (trial,count,jumps) instead of aggregate JSON");

  // --- sweep ---
  auto* cmd_sweep = app.add_subcommand("sweep", "family sweep over an n grid");
  std::string sweep_family = "majority";
  int sweep_tribe_size = 0;
  std::string sweep_ns = "3,5,7,9,11,13";
  std::string sweep_schedule = "constant:0.5";
  std::string sweep_thetas = "0.25,0.5,0.75";
  std::string sweep_ks = "1,2,4,8,16";
  long long sweep_trials = 100000;
  cmd_sweep->add_option("--family", sweep_family, "family to sweep")->capture_default_str();
  cmd_sweep->add_option("--tribe-size", sweep_tribe_size, "tribe width (tribes family)");
  cmd_sweep->add_option("--n", sweep_ns, "comma list of dimensions")->capture_default_str();
  cmd_sweep->add_option("--schedule", sweep_schedule,
                        "bias schedule: constant:c | power:c,a | inverse:c | custom:p1,p2,...")
      ->capture_default_str();
  cmd_sweep->add_option("--thetas", sweep_thetas, "tail bound grid")->capture_default_str();
  cmd_sweep->add_option("--ks", sweep_ks, "tail table k grid")->capture_default_str();
  cmd_sweep->add_option("--trials", sweep_trials, "Monte Carlo trials per row")
      ->capture_default_str();

  // --- verify ---
  auto* cmd_verify = app.add_subcommand("verify", "run every identity suite");
  int verify_nmax = 10;
  std::string verify_pgrid = "0.1,0.3,0.5,0.7,0.9";
  long long verify_trials = 100000;
  cmd_verify->add_option("--n-max", verify_nmax, "largest exhaustive dimension")
      ->capture_default_str();
  cmd_verify->add_option("--p-grid", verify_pgrid, "bias grid")->capture_default_str();
  cmd_verify->add_option("--mc-trials", verify_trials, "Monte Carlo trials in the checks")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_spectrum) {
      swc::BooleanFunction f = make_function(spec_fn);
      swc::Spectrum s = swc::transform(f, swc::BiasParam(spec_p));
      std::ostringstream buf;
      swc::write_spectrum_csv(s, buf);
      emit(buf.str(), g);
    } else if (*cmd_influence) {
      swc::BooleanFunction f = make_function(infl_fn);
      swc::BiasParam p(infl_p);
      swc::InfluenceProfile prof =
          infl_estimate ? swc::influence_profile_estimate(f, p, infl_trials, g.seed)
                        : swc::influence_profile(f, p);
      nlohmann::json j;
      j["schema"] = 1;
      j["function"] = f.name();
      j["n"] = f.n();
      j["p"] = infl_p;
      j["mode"] = infl_estimate ? "estimate" : "exact";
      j["influence"] = swc::influence_json(prof, infl_p);
      stamp(j, g);
      emit(j.dump(2), g);
    } else if (*cmd_moments) {
      swc::BooleanFunction f = make_function(mom_fn);
      swc::TruncationPolicy policy;
      policy.tol = g.tol;
      swc::MomentReport r =
          swc::moment_report(f, swc::BiasParam(mom_p), policy, parse_doubles(mom_thetas));
      nlohmann::json j = swc::moment_report_json(r);
      stamp(j, g);
      emit(j.dump(2), g);
    } else if (*cmd_simulate) {
      swc::BiasParam p(sim_p);
      swc::McConfig cfg;
      cfg.trials = sim_trials;
      cfg.seed = g.seed;
      cfg.tail_k_max = sim_kmax;
      if (sim_per_trial) {
        std::ostringstream buf;
        buf << "trial,count,jumps\n";
        if (sim_n_large > 0) {
          swc::IncrementalEvaluator ev(parse_family(sim_fn), sim_n_large);
          for (long long t = 0; t < sim_trials; ++t) {
            auto stats = swc::sample_count(ev, p, g.seed, std::uint64_t(t));
            buf << t << "," << stats.count << "," << stats.jumps << "\n";
          }
        } else {
          swc::BooleanFunction f = make_function(sim_fn);
          swc::IncrementalEvaluator ev(f);
          for (long long t = 0; t < sim_trials; ++t) {
            auto stats = swc::sample_count(ev, p, g.seed, std::uint64_t(t));
            buf << t << "," << stats.count << "," << stats.jumps << "\n";
          }
        }
        emit(buf.str(), g);
      } else {
        swc::McMoments m;
        std::string fname;
        if (sim_n_large > 0) {
          m = swc::monte_carlo_moments(parse_family(sim_fn), sim_n_large, p, cfg);
          fname = sim_fn.family + "_" + std::to_string(sim_n_large);
        } else {
          swc::BooleanFunction f = make_function(sim_fn);
          m = swc::monte_carlo_moments(f, p, cfg);
          fname = f.name();
        }
        nlohmann::json j = swc::mc_moments_json(m);
        j["function"] = fname;
        j["p"] = sim_p;
        stamp(j, g);
        emit(j.dump(2), g);
      }
    } else if (*cmd_sweep) {
      swc::SweepConfig cfg;
      FunctionOptions fo;
      fo.family = sweep_family;
      fo.tribe_size = sweep_tribe_size;
      cfg.family = parse_family(fo);
      cfg.n_grid = parse_longs(sweep_ns);
      cfg.schedule = swc::Schedule::parse(sweep_schedule);
      cfg.thetas = parse_doubles(sweep_thetas);
      auto ks = parse_longs(sweep_ks);
      cfg.k_grid.assign(ks.begin(), ks.end());
      cfg.mc.trials = sweep_trials;
      cfg.mc.seed = g.seed;
      cfg.policy.tol = g.tol;
      std::vector<swc::SweepRow> rows = swc::run_sweep(cfg);

      nlohmann::json j = swc::sweep_json(rows, cfg, sweep_family);
      stamp(j, g);
      if (g.out.empty()) {
        std::ostringstream buf;
        swc::write_sweep_csv(rows, cfg, buf);
        std::cout << buf.str() << j.dump(2) << "\n";
      } else {
        std::ofstream csv(g.out + ".csv");
        if (!csv) throw std::runtime_error("cannot write " + g.out + ".csv");
        swc::write_sweep_csv(rows, cfg, csv);
        std::ofstream js(g.out + ".json");
        if (!js) throw std::runtime_error("cannot write " + g.out + ".json");
        js << j.dump(2) << "\n";
      }
    } else if (*cmd_verify) {
      swc::VerifyConfig cfg;
      cfg.n_max = verify_nmax;
      cfg.p_grid = parse_doubles(verify_pgrid);
      cfg.seed = g.seed;
      cfg.mc_trials = verify_trials;
      std::vector<swc::CheckResult> checks = swc::run_verification(cfg);
      bool all = true;
      for (const auto& c : checks) {
        std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  residual "
                  << c.max_residual << " (tol " << c.tolerance << ")"
                  << (c.note.empty() ? "" : "  " + c.note) << "\n";
        all = all && c.pass;
      }
      nlohmann::json j = swc::verify_report_json(checks, cfg);
      stamp(j, g);
      emit(j.dump(2), g);
      if (!all) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
