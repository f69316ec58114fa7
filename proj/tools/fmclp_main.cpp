#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fmclp/experiments.hpp"
#include "fmclp/instance_io.hpp"
#include "fmclp/model_ir.hpp"

using nlohmann::ordered_json;

namespace {

std::string num_str(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_error(bool as_json, const std::string& msg, int code) {
  if (as_json) {
    ordered_json j;
    j["error"] = msg;
    j["exit"] = code;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "error: " << msg << "\n";
  }
}

struct SpecFlags {
  std::string family = "W";
  std::string alpha = "0";
  int k = 0;
  std::string beta_mix = "1/2";
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--family", f.family, "OWA family: W, C, K, D, G, H");
  cmd->add_option("--alpha", f.alpha, "fairness exponent, exact rational (e.g. 0, 1/2, 1, 2)");
  cmd->add_option("--k", f.k, "K family rank count (0 = default ceil(p/2))");
  cmd->add_option("--beta-mix", f.beta_mix, "D family mixing ratio in [0,1]");
}

fmclp::FairnessSpec make_spec(const SpecFlags& f, int p, bool warn_c) {
  fmclp::FairnessSpec spec;
  fmclp::OwaFamily fam = fmclp::parse_family(f.family);
  spec.weights = fmclp::owa_family(fam, p, f.k, fmclp::parse_rational(f.beta_mix));
  spec.alpha = fmclp::parse_rational(f.alpha);
  if (warn_c && fam == fmclp::OwaFamily::C && !(spec.alpha == fmclp::Rational(0)))
    std::cerr << "warning: alpha does not change the family C optimum; solving as given\n";
  return spec;
}

struct LoadFlags {
  std::string path;
  int first_n = 0;
  bool normalize = false;
};

void add_load_flags(CLI::App* cmd, LoadFlags& f) {
  cmd->add_option("--instance", f.path, "instance CSV path")->required();
  cmd->add_option("--first-n", f.first_n, "keep only the first n demand rows");
  cmd->add_flag("--normalize", f.normalize, "min-max rescale coordinates to the unit square");
}

fmclp::Instance load_from(const LoadFlags& f) {
  fmclp::LoadOptions opts;
  opts.max_points = f.first_n;
  opts.normalize = f.normalize;
  return fmclp::load_instance(f.path, opts);
}

ordered_json site_json(const fmclp::Point& s) {
  ordered_json a = ordered_json::array();
  for (std::size_t c = 0; c < s.dim(); ++c) a.push_back(s[c]);
  return a;
}

ordered_json solution_json(const fmclp::CoverageSolution& sol, const fmclp::Instance& inst) {
  ordered_json j;
  j["status"] = fmclp::status_name(sol.status);
  if (sol.objective.is_neg_inf()) j["objective"] = "-inf";
  else j["objective"] = sol.objective.value();
  j["gap"] = sol.gap;
  j["W"] = sol.W;
  ordered_json sites = ordered_json::array();
  for (const auto& s : sol.sites) sites.push_back(site_json(s));
  j["sites"] = sites;
  if (!sol.chosen.empty()) j["chosen"] = sol.chosen;
  j["assignment"] = sol.assignment;
  const double covered = std::accumulate(sol.W.begin(), sol.W.end(), 0.0);
  const double total = inst.total_weight();
  j["coverage_pct"] = total > 0 ? 100.0 * covered / total : 0.0;
  j["nodes"] = sol.nodes;
  j["seconds"] = sol.seconds;
  j["instance_hash"] = sol.instance_hash;
  if (!sol.witness.empty()) j["witness"] = sol.witness;
  if (!sol.separation_log.empty()) {
    ordered_json evs = ordered_json::array();
    for (const auto& ev : sol.separation_log) {
      ordered_json e;
      e["round"] = ev.round;
      e["slot"] = ev.slot;
      e["members"] = ev.members;
      evs.push_back(e);
    }
    j["separation_events"] = evs;
  }
  return j;
}

void print_solution_text(const fmclp::CoverageSolution& sol, const fmclp::Instance& inst) {
  std::cout << "status " << fmclp::status_name(sol.status) << "\n";
  std::cout << "objective "
            << (sol.objective.is_neg_inf() ? std::string("-inf") : num_str(sol.objective.value()))
            << "\n";
  std::cout << "gap " << num_str(sol.gap) << "\n";
  std::cout << "W";
  for (double w : sol.W) std::cout << " " << num_str(w);
  std::cout << "\n";
  std::cout << "sites";
  for (const auto& s : sol.sites) {
    std::cout << " (";
    for (std::size_t c = 0; c < s.dim(); ++c) std::cout << (c ? "," : "") << num_str(s[c]);
    std::cout << ")";
  }
  std::cout << "\n";
  if (!sol.chosen.empty()) {
    std::cout << "chosen";
    for (int j : sol.chosen) std::cout << " " << j;
    std::cout << "\n";
  }
  const double covered = std::accumulate(sol.W.begin(), sol.W.end(), 0.0);
  const double total = inst.total_weight();
  std::cout << "coverage_pct " << num_str(total > 0 ? 100.0 * covered / total : 0.0) << "\n";
  std::cout << "nodes " << sol.nodes << "\n";
  std::cout << "seconds " << num_str(sol.seconds) << "\n";
  if (!sol.witness.empty()) std::cout << "note " << sol.witness << "\n";
  if (!sol.separation_log.empty())
    std::cout << "separation_events " << sol.separation_log.size() << "\n";
}

ordered_json baselines_json(const fmclp::Baselines& b) {
  ordered_json j;
  j["sum_baseline"] = b.sum_baseline;
  j["min_baseline"] = b.min_baseline;
  j["instance_hash"] = b.instance_hash;
  j["p"] = b.p;
  j["R"] = b.R;
  return j;
}

fmclp::Baselines baselines_from_json(const std::string& text) {
  auto j = ordered_json::parse(text);
  fmclp::Baselines b;
  b.sum_baseline = j.at("sum_baseline").get<double>();
  b.min_baseline = j.at("min_baseline").get<double>();
  b.instance_hash = j.at("instance_hash").get<std::string>();
  b.p = j.at("p").get<int>();
  b.R = j.at("R").get<double>();
  return b;
}

ordered_json report_json(const fmclp::MetricsReport& rep) {
  ordered_json j;
  auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  j["status"] = fmclp::status_name(rep.status);
  j["coverage_pct"] = rep.coverage_pct;
  j["W"] = rep.W;
  j["pof"] = opt(rep.pof);
  j["poe"] = opt(rep.poe);
  j["gini"] = opt(rep.gini);
  j["baselines"] = baselines_json(rep.baselines);
  return j;
}

fmclp::CoverageSolution dispatch_solve(const fmclp::Instance& inst, const fmclp::FairnessSpec& spec,
                                       int p, double R, const std::string& space,
                                       std::string mode, const fmclp::SolveOptions& so) {
  fmclp::SolveSpace sp = fmclp::parse_space(space);
  if (mode.empty()) mode = sp == fmclp::SolveSpace::Discrete ? "bb" : "fds";
  if (sp == fmclp::SolveSpace::Discrete) {
    if (mode == "bb") return fmclp::solve_discrete(inst, spec, p, R, so);
    if (mode == "brute") return fmclp::brute_force(inst, spec, p, R, sp, so);
    throw std::invalid_argument("mode '" + mode + "' is not available for --space disc");
  }
  if (mode == "fds") return fmclp::solve_continuous_fds(inst, spec, p, R, so);
  if (mode == "rowgen") return fmclp::solve_row_generation(inst, spec, p, R, so);
  if (mode == "brute") return fmclp::brute_force(inst, spec, p, R, sp, so);
  throw std::invalid_argument("mode '" + mode + "' is not available for --space cont");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(alpha,lambda)-fair maximal covering location toolkit"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "JSON stdout and machine-readable stderr errors");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance CSV");
  int gen_n = 0, gen_d = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of demand points")->required();
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  LoadFlags solve_load;
  SpecFlags solve_spec;
  int solve_p = 0;
  double solve_R = 0;
  std::string solve_space = "disc", solve_mode;
  double solve_tl = 7200;
  long long solve_cap = 10'000'000;
  add_load_flags(solve, solve_load);
  add_spec_flags(solve, solve_spec);
  solve->add_option("--p", solve_p, "number of facilities")->required();
  solve->add_option("--R", solve_R, "coverage radius")->required();
  solve->add_option("--space", solve_space, "disc or cont");
  solve->add_option("--mode", solve_mode, "bb | fds | rowgen | brute (default bb/fds)");
  solve->add_option("--time-limit", solve_tl, "seconds");
  solve->add_option("--brute-cap", solve_cap, "state cap for --mode brute");

  // export-model
  auto* exp = app.add_subcommand("export-model", "build a model and write it out");
  LoadFlags exp_load;
  SpecFlags exp_spec;
  int exp_p = 0, exp_bp = 32;
  double exp_R = 0;
  std::string exp_space = "disc", exp_format, exp_out;
  bool exp_cut = false;
  add_load_flags(exp, exp_load);
  add_spec_flags(exp, exp_spec);
  exp->add_option("--p", exp_p, "number of facilities")->required();
  exp->add_option("--R", exp_R, "coverage radius")->required();
  exp->add_option("--space", exp_space, "disc or cont");
  exp->add_flag("--cut-master", exp_cut, "assignment master with cluster cuts (cont only)");
  exp->add_option("--pwl-breakpoints", exp_bp, "tangent count for the alpha = 1 objective");
  exp->add_option("--format", exp_format, "json or lp")->required();
  exp->add_option("--out", exp_out, "output path (default: stdout)");

  // metrics
  auto* met = app.add_subcommand("metrics", "solve and report PoF / PoE / Gini");
  LoadFlags met_load;
  SpecFlags met_spec;
  int met_p = 0;
  double met_R = 0;
  std::string met_space = "disc", met_mode, met_against, met_emit;
  double met_tl = 7200;
  add_load_flags(met, met_load);
  add_spec_flags(met, met_spec);
  met->add_option("--p", met_p, "number of facilities")->required();
  met->add_option("--R", met_R, "coverage radius")->required();
  met->add_option("--space", met_space, "disc or cont");
  met->add_option("--mode", met_mode, "bb | fds | rowgen | brute");
  met->add_option("--time-limit", met_tl, "seconds");
  met->add_option("--against", met_against, "read baselines from this JSON file");
  met->add_option("--emit-baselines", met_emit, "write baselines JSON here and stop");

  // grid
  auto* grid = app.add_subcommand("grid", "run an experiment grid from a config file");
  std::string grid_config;
  grid->add_option("--config", grid_config, "key=value config file")->required();

  // summarize
  auto* summ = app.add_subcommand("summarize", "bucket gaps and average metrics from results");
  std::string summ_in, summ_prefix = "summary";
  bool summ_stdout = false;
  summ->add_option("--in", summ_in, "result CSV from the grid runner")->required();
  summ->add_option("--out-prefix", summ_prefix, "writes <prefix>_gaps.csv, <prefix>_fairness.csv");
  summ->add_flag("--stdout", summ_stdout, "print both tables instead of writing files");

  for (CLI::App* sub : {gen, solve, exp, met, grid, summ})
    sub->add_flag("--json", json_out, "JSON stdout and machine-readable stderr errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto guarded = [&](const std::function<void()>& body) -> int {
    try {
      body();
      return 0;
    } catch (const std::invalid_argument& e) {
      emit_error(json_out, e.what(), 2);
      return 2;
    } catch (const std::exception& e) {
      emit_error(json_out, e.what(), 3);
      return 3;
    }
  };

  if (gen->parsed()) {
    return guarded([&] {
      fmclp::Instance inst = fmclp::gen_instance(gen_n, gen_d, gen_seed);
      if (gen_out.empty()) std::cout << fmclp::instance_to_csv(inst);
      else {
        fmclp::save_instance(inst, gen_out);
        std::cout << "wrote " << inst.size() << " points to " << gen_out << "\n";
      }
    });
  }

  if (solve->parsed()) {
    return guarded([&] {
      fmclp::Instance inst = load_from(solve_load);
      fmclp::FairnessSpec spec = make_spec(solve_spec, solve_p, true);
      fmclp::SolveOptions so;
      so.time_limit = solve_tl;
      so.brute_cap = solve_cap;
      auto sol = dispatch_solve(inst, spec, solve_p, solve_R, solve_space, solve_mode, so);
      if (json_out) std::cout << solution_json(sol, inst).dump(2) << "\n";
      else print_solution_text(sol, inst);
    });
  }

  if (exp->parsed()) {
    return guarded([&] {
      if (exp_format != "json" && exp_format != "lp")
        throw std::invalid_argument("--format must be json or lp");
      fmclp::Instance inst = load_from(exp_load);
      fmclp::FairnessSpec spec = make_spec(exp_spec, exp_p, false);
      fmclp::SolveSpace sp = fmclp::parse_space(exp_space);
      fmclp::model::ModelIR m;
      if (sp == fmclp::SolveSpace::Discrete) {
        if (exp_cut) throw std::invalid_argument("--cut-master requires --space cont");
        m = fmclp::model::build_discrete(inst, spec, exp_p, exp_R, exp_bp);
      } else if (exp_cut) {
        auto warm = fmclp::incompatible_sets(inst, exp_R, 3, false);
        m = fmclp::model::build_continuous_cut_model(inst, spec, exp_p, exp_R, warm, exp_bp);
      } else {
        m = fmclp::model::build_continuous(inst, spec, exp_p, exp_R, exp_bp);
      }
      std::string text;
      if (exp_format == "json") {
        text = fmclp::model::export_json(m);
      } else {
        if (!m.conecons.empty())
          throw std::invalid_argument(
              "the lp format cannot express cone constraints (present for this alpha); "
              "use --format json");
        text = fmclp::model::export_lp(m);
      }
      if (exp_out.empty()) std::cout << text;
      else {
        write_file(exp_out, text);
        std::cout << "wrote model to " << exp_out << "\n";
      }
    });
  }

  if (met->parsed()) {
    return guarded([&] {
      fmclp::Instance inst = load_from(met_load);
      fmclp::SolveSpace sp = fmclp::parse_space(met_space);
      fmclp::SolveOptions so;
      so.time_limit = met_tl;
      if (!met_emit.empty()) {
        fmclp::Baselines b = fmclp::compute_baselines(inst, met_p, met_R, sp, so);
        write_file(met_emit, baselines_json(b).dump(2) + "\n");
        std::cout << "wrote baselines to " << met_emit << "\n";
        return;
      }
      fmclp::Baselines b = met_against.empty()
                               ? fmclp::compute_baselines(inst, met_p, met_R, sp, so)
                               : baselines_from_json(read_file(met_against));
      fmclp::FairnessSpec spec = make_spec(met_spec, met_p, true);
      auto sol = dispatch_solve(inst, spec, met_p, met_R, met_space, met_mode, so);
      fmclp::MetricsReport rep = fmclp::report(sol, inst, b);
      if (json_out) {
        std::cout << report_json(rep).dump(2) << "\n";
      } else {
        auto opt = [](const std::optional<double>& v) {
          return v ? num_str(*v) : std::string("null");
        };
        std::cout << "status " << fmclp::status_name(rep.status) << "\n";
        std::cout << "coverage_pct " << num_str(rep.coverage_pct) << "\n";
        std::cout << "pof " << opt(rep.pof) << "\n";
        std::cout << "poe " << opt(rep.poe) << "\n";
        std::cout << "gini " << opt(rep.gini) << "\n";
        std::cout << "sum_baseline " << num_str(rep.baselines.sum_baseline) << "\n";
        std::cout << "min_baseline " << num_str(rep.baselines.min_baseline) << "\n";
      }
    });
  }

  if (grid->parsed()) {
    return guarded([&] {
      fmclp::GridConfig cfg = fmclp::parse_grid_config(read_file(grid_config), grid_config);
      fmclp::Instance master;
      if (cfg.gen_n > 0) {
        master = fmclp::gen_instance(cfg.gen_n, cfg.gen_d, cfg.gen_seed);
      } else if (!cfg.instance_path.empty()) {
        fmclp::LoadOptions lo;
        lo.normalize = cfg.normalize;
        master = fmclp::load_instance(cfg.instance_path, lo);
      } else {
        throw std::invalid_argument("config needs either instance= or gen_n=");
      }
      auto rows = fmclp::run_grid(cfg.grid, master, cfg.out);
      std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
    });
  }

  if (summ->parsed()) {
    return guarded([&] {
      auto rows = fmclp::read_result_csv(summ_in);
      fmclp::Summary s = fmclp::summarize(rows);
      if (summ_stdout) {
        std::cout << s.gap_csv << "\n" << s.fairness_csv;
      } else {
        write_file(summ_prefix + "_gaps.csv", s.gap_csv);
        write_file(summ_prefix + "_fairness.csv", s.fairness_csv);
        std::cout << "wrote " << summ_prefix << "_gaps.csv and " << summ_prefix
                  << "_fairness.csv\n";
      }
    });
  }

  return 2;  // unreachable with require_subcommand(1)
}
