// stlnav command line: specification checking, planning with optional repair,
// trajectory evaluation, and reward scoring.
//
// Exit codes: 0 ok, 2 specification error, 3 infeasible, 4 unrepairable,
// 5 resource limit.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "stlnav/errors.hpp"
#include "stlnav/numfmt.hpp"
#include "stlnav/repair/repair.hpp"
#include "stlnav/stl/lexer.hpp"
#include "stlnav/rewards/rewards.hpp"

using nlohmann::json;
using namespace stlnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUnrepairable = 4;
constexpr int kExitResourceLimit = 5;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw stlnav::Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '\n') {
      if (!out.empty()) break;
      continue;
    }
    out += c;
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw stlnav::Error("cannot write '" + tmp + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const stl::Trajectory& tr, int dims) {
  std::ostringstream os;
  os << "k,px,py,pz,vx,vy,vz,ux,uy,uz\n";
  auto axis = [&](const Eigen::VectorXd& v, int base, int i) {
    return i < dims ? format_double(v[base + i]) : "0";
  };
  for (size_t k = 0; k < tr.states.size(); ++k) {
    os << k;
    for (int i = 0; i < 3; ++i) os << "," << axis(tr.states[k], 0, i);
    for (int i = 0; i < 3; ++i) os << "," << axis(tr.states[k], dims, i);
    for (int i = 0; i < 3; ++i) {
      if (k < tr.controls.size())
        os << "," << axis(tr.controls[k], 0, i);
      else
        os << ",0";
    }
    os << "\n";
  }
  return os.str();
}

stl::Trajectory trajectory_from_csv(const std::string& text, int dims, double dt) {
  stl::Trajectory tr;
  tr.dt = dt;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw stlnav::LengthMismatch("empty trajectory file");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != 10) throw stlnav::LengthMismatch("expected 10 columns per row");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw stlnav::LengthMismatch("trajectory needs at least two states");
  for (size_t k = 0; k < rows.size(); ++k) {
    if (static_cast<size_t>(rows[k][0]) != k) throw stlnav::LengthMismatch("non-contiguous step index");
    Eigen::VectorXd x(2 * dims);
    for (int i = 0; i < dims; ++i) x[i] = rows[k][1 + i];
    for (int i = 0; i < dims; ++i) x[dims + i] = rows[k][4 + i];
    tr.states.push_back(std::move(x));
    if (k + 1 < rows.size()) {
      Eigen::VectorXd u(dims);
      for (int i = 0; i < dims; ++i) u[i] = rows[k][7 + i];
      tr.controls.push_back(std::move(u));
    }
  }
  return tr;
}

struct PlanFlags {
  std::string repair_mode = "off";  // off | rule | remote:URL
  bool advisor_fallback = false;
  double lambda_p = 1.0, lambda_t = 1.0, lambda_u = 1e-3, gamma_max = 10.0;
  double time_limit = std::numeric_limits<double>::infinity();
  std::string out_path = "trajectory.csv";
  std::string report_path = "plan_report.json";
};

json robustness_breakdown(const stl::Formula& f, const stl::Trajectory& tr,
                          const stl::RegionMap& regions) {
  json conjuncts = json::array();
  auto entry = [&](const stl::Formula& g) {
    json e;
    e["formula"] = stl::print_canonical(g);
    e["satisfied"] = stl::eval_boolean(g, tr, 0, regions);
    e["robustness"] = stl::eval_robustness(g, tr, 0, regions);
    return e;
  };
  if (f->kind == stl::NodeKind::And) {
    for (const auto& k : f->kids) conjuncts.push_back(entry(k));
  } else {
    conjuncts.push_back(entry(f));
  }
  return conjuncts;
}

int cmd_check(const std::string& spec_path, const std::string& scenario_path) {
  world::Scenario sc;
  try {
    sc = world::load_scenario(scenario_path);
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
  try {
    stl::Formula f = stl::parse_stl(first_line(slurp(spec_path)), sc.region_table());
    std::cout << stl::print_canonical(f) << "\n";
    return kExitOk;
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
}

int plan_one(const world::Scenario& sc, const std::string& spec_text, const PlanFlags& flags) {
  stl::Formula parsed;
  try {
    parsed = stl::parse_stl(spec_text, sc.region_table());
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
  stl::Formula f = stl::to_nnf(parsed);

  repair::RepairParams params;
  params.enc.lambda_p = flags.lambda_p;
  params.enc.lambda_t = flags.lambda_t;
  params.enc.lambda_u = flags.lambda_u;
  params.enc.gamma_max = flags.gamma_max;
  params.solver.time_limit_s = flags.time_limit;

  json report;
  report["scenario_dims"] = sc.dims();
  report["original"] = stl::print_canonical(f);

  auto finish = [&](int code) {
    report["exit_code"] = code;
    atomic_write(flags.report_path, report.dump(2) + "\n");
    return code;
  };

  auto record_solve = [&](const solver::SolveResult& res) {
    report["status"] = solver::status_name(res.status);
    report["node_count"] = res.node_count;
    report["wall_time_s"] = res.wall_time_s;
    if (res.status == solver::SolveStatus::Optimal) report["objective"] = res.objective;
  };

  auto emit_trajectory = [&](const stl::Trajectory& tr, const stl::Formula& final_f) {
    const auto regions = sc.region_map();
    report["formula"] = stl::print_canonical(final_f);
    report["satisfied"] = stl::eval_boolean(final_f, tr, 0, regions);
    report["robustness"] = stl::eval_robustness(final_f, tr, 0, regions);
    report["conjuncts"] = robustness_breakdown(final_f, tr, regions);
    atomic_write(flags.out_path, trajectory_csv(tr, sc.dims()));
  };

  try {
    if (flags.repair_mode == "off") {
      encode::EncodedProblem enc = encode::encode(f, sc, params.enc);
      solver::SolveResult res = solver::solve_milp(enc.problem, params.solver);
      record_solve(res);
      if (res.status == solver::SolveStatus::Optimal) {
        stl::Trajectory tr = encode::decode_trajectory(enc, res.x);
        report["gamma"] = res.x[enc.gamma_var];
        emit_trajectory(tr, f);
        return finish(kExitOk);
      }
      if (res.status == solver::SolveStatus::Infeasible) return finish(kExitInfeasible);
      return finish(kExitResourceLimit);
    }

    repair::Advisor advisor;
    if (flags.repair_mode == "rule") {
      advisor = repair::make_rule_advisor();
    } else if (flags.repair_mode.rfind("remote:", 0) == 0) {
      repair::RemoteAdvisorConfig cfg;
      cfg.endpoint = flags.repair_mode.substr(7);
      cfg.fallback_to_rule = flags.advisor_fallback;
      if (const char* t = std::getenv("STLNAV_ADVISOR_TIMEOUT_S")) cfg.timeout_s = std::atof(t);
      advisor = repair::make_remote_advisor(cfg, sc.nl_instruction, stl::print_canonical(f));
    } else {
      std::cerr << "error: unknown --repair mode '" << flags.repair_mode << "'\n";
      return kExitSpecError;
    }

    repair::RepairOutcome outcome = repair::repair_loop(sc, f, advisor, params);
    record_solve(outcome.last_solve);
    report["repair"] = json::parse(outcome.report.to_json());
    if (outcome.status == solver::SolveStatus::Optimal) {
      emit_trajectory(outcome.trajectory, outcome.final_formula);
      return finish(kExitOk);
    }
    return finish(kExitResourceLimit);
  } catch (const stlnav::UnrepairableConflict& e) {
    report["status"] = "Unrepairable";
    report["reason"] = e.what();
    return finish(kExitUnrepairable);
  } catch (const stlnav::MaxItersExceeded& e) {
    report["status"] = "Infeasible";
    report["reason"] = e.what();
    return finish(kExitInfeasible);
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    report["status"] = "Error";
    report["reason"] = e.what();
    return finish(kExitResourceLimit);
  }
}

int cmd_plan(const std::vector<std::string>& scenario_paths, const std::string& spec_path,
             const PlanFlags& flags, int jobs) {
  std::string spec_text;
  try {
    spec_text = first_line(slurp(spec_path));
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }

  auto run_one = [&](const std::string& path, const PlanFlags& fl) {
    world::Scenario sc;
    try {
      sc = world::load_scenario(path);
    } catch (const stlnav::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitSpecError;
    }
    return plan_one(sc, spec_text, fl);
  };

  if (scenario_paths.size() == 1) return run_one(scenario_paths[0], flags);

  // Batch mode: suffix outputs per scenario, run up to `jobs` in parallel.
  std::vector<std::future<int>> futs;
  std::vector<int> codes;
  size_t next = 0;
  while (next < scenario_paths.size() || !futs.empty()) {
    while (next < scenario_paths.size() && static_cast<int>(futs.size()) < std::max(1, jobs)) {
      PlanFlags fl = flags;
      fl.out_path = flags.out_path + "." + std::to_string(next);
      fl.report_path = flags.report_path + "." + std::to_string(next);
      futs.push_back(std::async(std::launch::async, run_one, scenario_paths[next], fl));
      ++next;
    }
    codes.push_back(futs.back().get());
    futs.pop_back();
  }
  int worst = 0;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

int cmd_eval(const std::string& traj_path, const std::string& spec_path,
             const std::string& scenario_path, const std::string& report_path) {
  try {
    world::Scenario sc = world::load_scenario(scenario_path);
    stl::Formula f = stl::to_nnf(stl::parse_stl(first_line(slurp(spec_path)), sc.region_table()));
    stl::Trajectory tr = trajectory_from_csv(slurp(traj_path), sc.dims(), sc.dt);
    const auto regions = sc.region_map();
    json j;
    j["satisfied"] = stl::eval_boolean(f, tr, 0, regions);
    j["robustness"] = stl::eval_robustness(f, tr, 0, regions);
    j["conjuncts"] = robustness_breakdown(f, tr, regions);
    std::string text = j.dump(2) + "\n";
    if (report_path.empty())
      std::cout << text;
    else
      atomic_write(report_path, text);
    return kExitOk;
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
}

int cmd_score(const std::string& corpus_path, const std::string& scenario_path,
              const std::string& config_path, const std::string& report_path) {
  try {
    rewards::RewardConfig cfg;
    if (!config_path.empty()) {
      json cj = json::parse(slurp(config_path));
      auto get = [&](const char* k, double& v) {
        if (cj.contains(k)) v = cj[k].get<double>();
      };
      get("k1", cfg.k1);
      get("k2", cfg.k2);
      get("k3", cfg.k3);
      get("k4", cfg.k4);
      get("k5", cfg.k5);
      get("k6", cfg.k6);
      if (cj.contains("l_max")) cfg.l_max = cj["l_max"].get<int>();
      if (cj.contains("bleu_n")) cfg.bleu_n = cj["bleu_n"].get<int>();
      if (cj.contains("vocab"))
        for (const auto& v : cj["vocab"]) cfg.vocab.insert(v.get<std::string>());
    }

    std::vector<std::pair<std::string, std::string>> pairs;
    {
      std::istringstream is(slurp(corpus_path));
      std::string line;
      size_t ln = 0;
      while (std::getline(is, line)) {
        ++ln;
        if (line.empty()) continue;
        json j;
        try {
          j = json::parse(line);
        } catch (const json::exception& e) {
          throw InvalidReference("line " + std::to_string(ln) + ": " + e.what());
        }
        pairs.emplace_back(j.at("hyp").get<std::string>(), j.at("ref").get<std::string>());
      }
    }

    stl::RegionTable table;
    table.dims = 3;
    if (!scenario_path.empty()) {
      world::Scenario sc = world::load_scenario(scenario_path);
      table = sc.region_table();
      for (const auto& n : table.names) cfg.vocab.insert(n);
    } else if (cfg.vocab.empty()) {
      // Without a scenario the vocabulary is the identifiers of the references.
      for (const auto& [hyp, ref] : pairs)
        for (const auto& t : stl::lex_loose(ref))
          if (t.type == stl::TokType::Ident && t.text != "true") cfg.vocab.insert(t.text);
    }
    table.names = cfg.vocab;

    json lines = json::array();
    for (const auto& [hyp, ref] : pairs) {
      json l;
      l["format"] = rewards::reward_cot_format(hyp, cfg);
      l["length"] = rewards::reward_cot_length(hyp, cfg);
      l["syntax"] = rewards::reward_stl_syntax(hyp, cfg);
      l["bleu"] = rewards::reward_bleu(hyp, ref, cfg);
      l["total"] = rewards::total_reward(hyp, ref, cfg);
      lines.push_back(std::move(l));
    }
    json j;
    j["lines"] = std::move(lines);
    j["accuracy"] = rewards::corpus_accuracy(pairs, table);
    std::string text = j.dump(2) + "\n";
    if (report_path.empty())
      std::cout << text;
    else
      atomic_write(report_path, text);
    return kExitOk;
  } catch (const stlnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL-constrained UAV trajectory planning with specification repair"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_paths;
  std::string spec_path, traj_path, corpus_path, config_path, report_path;
  PlanFlags flags;
  int jobs = 1;

  auto* check = app.add_subcommand("check", "Parse a spec against a scenario");
  check->add_option("--spec", spec_path)->required();
  check->add_option("--scenario", scenario_paths)->required();

  auto* plan = app.add_subcommand("plan", "Plan a trajectory");
  plan->add_option("--scenario", scenario_paths)->required();
  plan->add_option("--spec", spec_path)->required();
  plan->add_option("--repair", flags.repair_mode, "off|rule|remote:URL");
  plan->add_flag("--advisor-fallback", flags.advisor_fallback);
  plan->add_option("--lambda-p", flags.lambda_p);
  plan->add_option("--lambda-t", flags.lambda_t);
  plan->add_option("--lambda-u", flags.lambda_u);
  plan->add_option("--gamma-max", flags.gamma_max);
  plan->add_option("--time-limit", flags.time_limit);
  plan->add_option("--out", flags.out_path);
  plan->add_option("--report", flags.report_path);
  plan->add_option("--jobs", jobs);

  auto* eval = app.add_subcommand("eval", "Evaluate a trajectory against a spec");
  eval->add_option("--traj", traj_path)->required();
  eval->add_option("--spec", spec_path)->required();
  eval->add_option("--scenario", scenario_paths)->required();
  eval->add_option("--report", report_path);

  auto* score = app.add_subcommand("score", "Score an NL-to-STL corpus");
  score->add_option("--corpus", corpus_path)->required();
  score->add_option("--scenario", scenario_paths);
  score->add_option("--reward-config", config_path);
  score->add_option("--report", report_path);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(spec_path, scenario_paths.at(0));
  if (plan->parsed()) return cmd_plan(scenario_paths, spec_path, flags, jobs);
  if (eval->parsed()) return cmd_eval(traj_path, spec_path, scenario_paths.at(0), report_path);
  if (score->parsed())
    return cmd_score(corpus_path, scenario_paths.empty() ? "" : scenario_paths.at(0), config_path,
                     report_path);
  return kExitOk;
}
