#include "traitpref/traitpref.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace traitpref;

namespace {

enum ExitCode : int
{
  exit_ok = 0,
  exit_usage = 2,
  exit_infeasible = 3,
  exit_dataset = 4,
};

void require_file(const fs::path& p, const std::string& what)
{
  if (!fs::exists(p))
    throw InvalidArgument(what + " '" + p.string() + "' does not exist");
}

struct ParamFlags
{
  double alpha = 2.0;
  double beta = 0.5;
  double tau = 2.0;
  double c = 0.5;

  void add(CLI::App* app)
  {
    app->add_option("--alpha", alpha, "Weight function frequency")->capture_default_str();
    app->add_option("--beta", beta, "Weight function phase")->capture_default_str();
    app->add_option("--tau", tau, "Diversity scale (> 0)")->capture_default_str();
    app->add_option("--c", c, "Weight function offset")->capture_default_str();
  }

  [[nodiscard]] WeightFunctionParams get() const { return WeightFunctionParams::make(alpha, beta, tau, c); }
};

json params_json(const WeightFunctionParams& p)
{
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"tau", p.tau}, {"c", p.c}};
}

SimulationScenario scenario_arg(const std::string& arg)
{
  for (const char* name : paper_preset_names)
    if (arg == name)
      return paper_scenario(arg);
  require_file(arg, "scenario file");
  return io::load_scenario(arg);
}

std::vector<int> int_list(const std::string& s)
{
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    double v = 0.0;
    if (!io::parse_double(item, v) || v != static_cast<int>(v))
      throw InvalidArgument("'" + s + "' is not a comma-separated integer list");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

PreferenceWeights load_weights(const fs::path& p)
{
  require_file(p, "weights file");
  if (p.extension() == ".json")
  {
    const json j = json::parse(io::read_text(p));
    return PreferenceWeights(io::matrix_from_json<double>(j.contains("weights") ? j.at("weights") : j));
  }
  return PreferenceWeights(io::read_matrix_csv(p).values);
}

std::string mode_name(const std::string& baseline)
{
  if (baseline == "none")
    return "inferred";
  if (baseline == "no-div")
    return "no-diversity";
  return "no-preference";
}

InferenceResult infer_with(const DemonstrationSet& demos, const std::string& baseline, const WeightFunctionParams& p)
{
  if (baseline == "none")
    return infer_weights(demos, p);
  if (baseline == "no-div")
    return baseline_no_inherent_diversity(demos, p);
  return {baseline_no_preference(demos), {}};
}

void print_ranking(const PreferenceWeights& w, const std::vector<std::string>& names)
{
  for (std::size_t m = 0; m < w.task_count(); ++m)
  {
    std::vector<std::size_t> order(w.trait_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w(m, a) > w(m, b); });
    std::cout << "task " << m << ":";
    for (auto u : order)
      std::cout << "  " << (names.empty() ? "trait" + std::to_string(u) : names[u]) << "="
                << io::format_double(std::round(w(m, u) * 1e4) / 1e4);
    std::cout << "\n";
  }
}

// ============================================================================
int cmd_simulate(const std::string& scenario, const fs::path& out, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> demos_n)
{
  RunManifest manifest;
  manifest.command = "simulate";
  auto sc = scenario_arg(scenario);
  if (seed)
    sc.seed = *seed;
  if (demos_n)
    sc.demo_count = *demos_n;
  sc.validate();

  const auto study = run_expert_study(sc);
  io::save_demonstrations(study.demos, out, {{"scenario", sc.name}, {"seed", sc.seed}});
  io::write_text(out / "y_star.csv", io::matrix_to_csv(study.y_star.values()));
  io::write_text(out / "scenario.json", io::scenario_to_json(sc).dump(2) + "\n");

  manifest.config = io::scenario_to_json(sc);
  manifest.seed = sc.seed;
  manifest.outputs = {(out / io::demo_manifest_name).string(), (out / "y_star.csv").string(),
                      (out / "scenario.json").string()};
  manifest.write(out / "run_manifest.json");
  std::cout << "wrote " << study.demos.size() << " demonstrations to " << out.string() << "\n";
  return exit_ok;
}

int cmd_infer(const fs::path& demos_dir, const fs::path& out, const std::string& baseline,
              const WeightFunctionParams& params, const std::string& csv_out)
{
  RunManifest manifest;
  manifest.command = "infer";
  require_file(demos_dir, "demonstration directory");
  const auto demos = io::load_demonstrations(demos_dir);
  const auto res = infer_with(demos, baseline, params);

  const auto& names = demos[0].traits.trait_names();
  io::write_text(out, io::inference_to_json(res.weights, res.stats, params, mode_name(baseline), names).dump(2) + "\n");
  manifest.outputs.push_back(out.string());
  if (!csv_out.empty())
  {
    io::write_text(csv_out, io::matrix_to_csv(res.weights.values(), names));
    manifest.outputs.push_back(csv_out);
  }
  manifest.config = {{"demos", demos_dir.string()}, {"baseline", baseline}, {"params", params_json(params)}};
  manifest.write(fs::path(out.string() + ".manifest.json"));
  print_ranking(res.weights, names);
  return exit_ok;
}

int cmd_allocate(const fs::path& target_csv, const fs::path& traits_csv, const std::string& weights,
                 const std::string& agents, const std::string& cardinality, const std::string& mode,
                 std::uint64_t seed, std::size_t top_k, const fs::path& out)
{
  RunManifest manifest;
  manifest.command = "allocate";
  require_file(target_csv, "target file");
  require_file(traits_csv, "traits file");
  TraitRequirementMatrix target(io::read_matrix_csv(target_csv).values);
  const auto q_csv = io::read_matrix_csv(traits_csv);
  SpeciesTraitMatrix q(q_csv.values, q_csv.header);
  PreferenceWeights w = weights.empty()
      ? PreferenceWeights(Matrix<double>(target.task_count(), target.trait_count(), 1.0))
      : load_weights(weights);

  TeamComposition supply = [&] {
    if (fs::exists(agents))
      return TeamComposition(io::read_int_vector_csv(agents));
    auto list = int_list(agents);
    if (list.size() == 1)
      list.assign(q.species_count(), list.front());
    return TeamComposition(list);
  }();
  std::optional<std::vector<int>> card;
  if (fs::exists(cardinality))
    card = io::read_int_vector_csv(cardinality);
  else if (!cardinality.empty())
    card = int_list(cardinality);

  std::vector<std::size_t> kept;
  if (top_k > 0)
  {
    if (w.task_count() != target.task_count() || w.trait_count() != target.trait_count())
      throw DimensionError("weights are " + w.values().shape() + " but the target is " + target.values().shape());
    auto sel = top_k_traits(w, top_k);
    kept = sel.traits;
    target = TraitRequirementMatrix(select_columns(target.values(), std::span<const std::size_t>(kept)));
    q = SpeciesTraitMatrix(select_columns(q.values(), std::span<const std::size_t>(kept)));
    w = std::move(sel.weights);
  }

  const AllocationConstraints constraints(supply, card, parse_solve_mode(mode), seed);
  const auto res = allocate(target, q, w, constraints);

  json result = io::allocation_to_json(res);
  if (top_k > 0)
    result["traits_used"] = kept;
  io::write_text(out, result.dump(2) + "\n");
  manifest.config = {{"target", target_csv.string()}, {"traits", traits_csv.string()}, {"weights", weights},
                     {"supply", supply.agents()}, {"mode", mode}, {"top_k", top_k}};
  if (card)
    manifest.config["cardinality"] = *card;
  manifest.seed = seed;
  manifest.outputs = {out.string()};
  manifest.write(fs::path(out.string() + ".manifest.json"));
  std::cout << io::matrix_to_csv(res.assignment.counts()) << "objective " << io::format_double(res.objective)
            << (res.optimal ? " (optimal)" : "") << "\n";
  return exit_ok;
}

int cmd_evaluate(const fs::path& demos_dir, const std::string& scenario, std::vector<std::string> schemes,
                 const std::vector<std::string>& weight_files, std::size_t trials, std::uint64_t seed,
                 bool sweep, const WeightFunctionParams& params, const fs::path& out)
{
  RunManifest manifest;
  manifest.command = "evaluate";
  require_file(demos_dir, "demonstration directory");
  const auto sc = scenario_arg(scenario);
  const auto demos = io::load_demonstrations(demos_dir);
  const auto target = estimate_target(demos);

  if (schemes.empty() && weight_files.empty())
    schemes = {"no-pref", "no-div", "inferred"};
  std::vector<WeightScheme> list;
  for (const auto& s : schemes)
  {
    if (s == "no-pref")
      list.push_back({"no-preference", baseline_no_preference(demos)});
    else if (s == "no-div")
      list.push_back({"no-diversity", baseline_no_inherent_diversity(demos, params).weights});
    else if (s == "inferred")
      list.push_back({"inferred", infer_weights(demos, params).weights});
    else
      throw InvalidArgument("unknown scheme '" + s + "' (expected no-pref, no-div or inferred)");
  }
  for (const auto& f : weight_files)
    list.push_back({fs::path(f).stem().string(), load_weights(f)});

  const auto rep = compare_allocations(sc, target, list, sc.w_star, trials, seed);

  std::ostringstream errors;
  errors << "scheme,task,trial,error\n";
  for (std::size_t k = 0; k < list.size(); ++k)
    for (std::size_t m = 0; m < rep.tasks.size(); ++m)
      for (std::size_t t = 0; t < trials; ++t)
        errors << io::quote_csv(list[k].name) << "," << m << "," << t << ","
               << io::format_double(rep.errors[k][m][t]) << "\n";

  std::ostringstream table;
  table << "task,scheme,median_error\n";
  std::ostringstream tests;
  tests << "task,test,first,second,statistic,p_value,exact\n";
  json report{{"schemes", rep.schemes}, {"trials", trials}, {"tasks", json::array()}};
  for (std::size_t m = 0; m < rep.tasks.size(); ++m)
  {
    const auto& t = rep.tasks[m];
    json jt{{"task", m}, {"medians", json::object()}, {"pairs", json::array()}};
    for (std::size_t k = 0; k < list.size(); ++k)
    {
      table << m << "," << io::quote_csv(list[k].name) << "," << io::format_double(t.medians[k]) << "\n";
      jt["medians"][list[k].name] = t.medians[k];
    }
    if (t.kruskal)
    {
      tests << m << ",kruskal-wallis,,," << io::format_double(t.kruskal->statistic) << ","
            << io::format_double(t.kruskal->p_value) << ",0\n";
      jt["kruskal_wallis"] = {{"statistic", t.kruskal->statistic}, {"p_value", t.kruskal->p_value}};
    }
    for (const auto& p : t.pairs)
    {
      tests << m << ",mann-whitney-u," << io::quote_csv(list[p.first].name) << ","
            << io::quote_csv(list[p.second].name) << "," << io::format_double(p.result.statistic) << ","
            << io::format_double(p.result.p_value) << "," << (p.result.exact ? 1 : 0) << "\n";
      jt["pairs"].push_back({{"first", list[p.first].name},
                             {"second", list[p.second].name},
                             {"method", stats::to_string(p.result.method)},
                             {"statistic", p.result.statistic},
                             {"p_value", p.result.p_value}});
    }
    report["tasks"].push_back(std::move(jt));
  }

  io::write_text(out / "errors.csv", errors.str());
  io::write_text(out / "medians.csv", table.str());
  io::write_text(out / "tests.csv", tests.str());
  manifest.outputs = {(out / "errors.csv").string(), (out / "medians.csv").string(),
                      (out / "tests.csv").string(), (out / "report.json").string()};

  if (sweep)
  {
    std::vector<std::size_t> counts;
    for (auto n : default_sweep_counts())
      if (n <= demos.size())
        counts.push_back(n);
    if (counts.empty())
      throw InvalidArgument("--sweep needs at least 100 demonstrations, the set has " + std::to_string(demos.size()));
    const auto rows = demo_count_sweep(demos, sc.w_star, counts, params);
    std::ostringstream csv;
    csv << "demo_count,ordering_accuracy,blocks\n";
    report["sweep"] = json::array();
    for (const auto& r : rows)
    {
      csv << r.demo_count << "," << io::format_double(r.accuracy) << "," << r.blocks << "\n";
      report["sweep"].push_back({{"demo_count", r.demo_count}, {"ordering_accuracy", r.accuracy}});
    }
    io::write_text(out / "sweep.csv", csv.str());
    manifest.outputs.push_back((out / "sweep.csv").string());
  }
  io::write_text(out / "report.json", report.dump(2) + "\n");

  manifest.config = {{"demos", demos_dir.string()}, {"scenario", io::scenario_to_json(sc)}, {"schemes", schemes},
                     {"weights", weight_files}, {"trials", trials}, {"sweep", sweep},
                     {"params", params_json(params)}};
  manifest.seed = seed;
  manifest.write(out / "run_manifest.json");
  std::cout << table.str() << tests.str();
  return exit_ok;
}

int cmd_fifa(const fs::path& csv, const std::string& config_path, const std::string& k_list, std::size_t teams,
             std::uint64_t seed, const WeightFunctionParams& params, const fs::path& out)
{
  RunManifest manifest;
  manifest.command = "fifa";
  require_file(csv, "players file");
  const auto cfg = config_path.empty() ? fifa::FifaConfig::defaults() : fifa::load_config(config_path);
  const auto ing = fifa::ingest(csv, cfg);
  for (const auto& w : ing.warnings)
    std::cerr << "warning: " << w << "\n";
  std::cerr << "read " << ing.rows_read << " rows, kept " << ing.players.size() << "\n";
  for (const auto& [reason, n] : ing.dropped)
    std::cerr << "  dropped " << n << ": " << reason << "\n";
  if (ing.players.empty())
    throw DatasetError("no players left after filtering '" + csv.string() + "'");

  std::vector<std::size_t> ks;
  for (int k : int_list(k_list))
  {
    if (k <= 0)
      throw InvalidArgument("k values must be positive");
    ks.push_back(static_cast<std::size_t>(k));
  }
  const auto st = run_fifa_study(ing.players, ks, teams, seed, params);
  for (const auto& w : st.squads.warnings)
    std::cerr << "note: " << w << "\n";

  std::ostringstream agg;
  agg << "k,median_score,median_time_ms,normalized_score,normalized_time,baseline_relative_score,"
         "baseline_relative_time\n";
  for (const auto& r : st.rows)
    agg << r.k << "," << io::format_double(r.median_score) << "," << io::format_double(r.median_time_ms) << ","
        << io::format_double(r.normalized_score) << "," << io::format_double(r.normalized_time) << ","
        << io::format_double(r.baseline_relative_score) << "," << io::format_double(r.baseline_relative_time)
        << "\n";

  auto report_json = [&](const fifa::TeamReport& r) {
    json pred = json::array(), actual = json::array();
    for (auto p : r.predicted)
      pred.push_back(fifa::to_string(p));
    for (auto p : r.actual)
      actual.push_back(fifa::to_string(p));
    return json{{"score", r.score}, {"matched", r.matched}, {"traits_used", r.traits_used},
                {"wall_time_ms", to_ms(r.wall_time)}, {"objective", r.objective},
                {"predicted", pred}, {"actual", actual}};
  };
  json team_reports = json::array();
  for (std::size_t t = 0; t < st.teams.size(); ++t)
  {
    json players = json::array();
    for (auto i : st.teams[t])
      players.push_back(ing.players[i].player_id);
    json by_k = json::object();
    for (std::size_t i = 0; i < ks.size(); ++i)
      by_k[std::to_string(ks[i])] = report_json(st.reports[i][t]);
    team_reports.push_back({{"team", t}, {"players", players}, {"uniform", report_json(st.baseline[t])},
                            {"inferred", by_k}});
  }

  io::write_text(out / "aggregate.csv", agg.str());
  io::write_text(out / "teams.json", team_reports.dump(2) + "\n");
  io::write_text(out / "weights.json",
                 io::inference_to_json(st.inference.weights, st.inference.stats, params, "inferred",
                                       cfg.trait_columns)
                         .dump(2)
                     + "\n");
  manifest.config = {{"csv", csv.string()}, {"fifa_config", fifa::config_to_json(cfg)}, {"k", ks},
                     {"teams", teams}, {"params", params_json(params)}};
  manifest.seed = seed;
  manifest.outputs = {(out / "aggregate.csv").string(), (out / "teams.json").string(),
                      (out / "weights.json").string()};
  manifest.write(out / "run_manifest.json");
  std::cout << "uniform baseline: median score " << io::format_double(st.baseline_median_score)
            << ", median time " << io::format_double(st.baseline_median_time_ms) << " ms\n"
            << agg.str();
  return exit_ok;
}

int cmd_heatmap(std::size_t steps, const WeightFunctionParams& params, const fs::path& out)
{
  std::ostringstream csv;
  csv << "cv_obs,cv_div,weight\n";
  for (const auto& cell : weight_heatmap(steps, params))
    csv << io::format_double(cell.cv_obs) << "," << io::format_double(cell.cv_div) << ","
        << io::format_double(cell.weight) << "\n";
  if (out.empty())
  {
    std::cout << csv.str();
    return exit_ok;
  }
  RunManifest manifest;
  manifest.command = "heatmap";
  io::write_text(out, csv.str());
  manifest.config = {{"steps", steps}, {"params", params_json(params)}};
  manifest.outputs = {out.string()};
  manifest.write(fs::path(out.string() + ".manifest.json"));
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Infer trait preferences from demonstrations and allocate heterogeneous teams."};
  app.set_version_flag("--version", std::string("traitpref ") + traitpref::version);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate expert demonstrations for a scenario");
  std::string sim_scenario;
  std::string sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> sim_demos;
  sim->add_option("--scenario", sim_scenario, "Preset (paper-w1..paper-w4) or scenario JSON file")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Override the scenario seed");
  sim->add_option("--demos", sim_demos, "Override the number of demonstrations");

  // infer
  auto* inf = app.add_subcommand("infer", "Infer preference weights from a demonstration set");
  std::string inf_demos, inf_out, inf_csv, inf_baseline = "none";
  ParamFlags inf_params;
  inf->add_option("--demos", inf_demos, "Demonstration directory")->required();
  inf->add_option("--out", inf_out, "Output JSON file")->required();
  inf->add_option("--csv", inf_csv, "Also write the weights as CSV");
  inf->add_option("--baseline", inf_baseline, "none, no-div or no-pref")
      ->check(CLI::IsMember({"none", "no-div", "no-pref"}))
      ->capture_default_str();
  inf_params.add(inf);

  // allocate
  auto* alo = app.add_subcommand("allocate", "Allocate a team to tasks");
  std::string alo_target, alo_traits, alo_weights, alo_agents, alo_card, alo_mode = "auto", alo_out;
  std::uint64_t alo_seed = 1;
  std::size_t alo_top_k = 0;
  alo->add_option("--target", alo_target, "Target requirement CSV (tasks x traits)")->required();
  alo->add_option("--traits", alo_traits, "Species trait CSV (species x traits)")->required();
  alo->add_option("--weights", alo_weights, "Weights CSV or inference JSON (default: all ones)");
  alo->add_option("--supply", alo_agents, "Agents per species: CSV file, list, or one count for all")->required();
  alo->add_option("--cardinality", alo_card, "Exact agents per task: CSV file or list");
  alo->add_option("--mode", alo_mode, "exact, local or auto")
      ->check(CLI::IsMember({"exact", "local", "auto"}))
      ->capture_default_str();
  alo->add_option("--seed", alo_seed, "Local search seed")->capture_default_str();
  alo->add_option("--top-k", alo_top_k, "Use only the k highest-weighted traits (0: all)");
  alo->add_option("--out", alo_out, "Output JSON file")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Compare weight schemes on fresh teams");
  std::string ev_demos, ev_scenario, ev_out;
  std::vector<std::string> ev_schemes, ev_weights;
  std::size_t ev_trials = 500;
  std::uint64_t ev_seed = 1;
  bool ev_sweep = false;
  ParamFlags ev_params;
  ev->add_option("--demos", ev_demos, "Demonstration directory")->required();
  ev->add_option("--scenario", ev_scenario, "Scenario the demonstrations came from")->required();
  ev->add_option("--scheme", ev_schemes, "no-pref, no-div or inferred (repeatable; default all three)");
  ev->add_option("--weights", ev_weights, "Extra weight scheme from a CSV or inference JSON (repeatable)");
  ev->add_option("--trials", ev_trials, "Fresh teams to allocate")->capture_default_str();
  ev->add_option("--seed", ev_seed, "Seed for the fresh teams")->capture_default_str();
  ev->add_flag("--sweep", ev_sweep, "Also run the demonstration-count sweep");
  ev->add_option("--out", ev_out, "Output directory")->required();
  ev_params.add(ev);

  // fifa
  auto* ff = app.add_subcommand("fifa", "Position allocation on a FIFA players CSV");
  std::string ff_csv, ff_config, ff_k = "1,2,4,6,8,10,12,16,20,24,28,32,37", ff_out, ff_dump;
  std::size_t ff_teams = 30;
  std::uint64_t ff_seed = 7;
  ParamFlags ff_params;
  ff->add_option("--csv", ff_csv, "Players CSV");
  ff->add_option("--config", ff_config, "FIFA config JSON (trait columns, band, position map)");
  ff->add_option("--k", ff_k, "Trait counts to evaluate, comma separated")->capture_default_str();
  ff->add_option("--teams", ff_teams, "Random teams to allocate")->capture_default_str();
  ff->add_option("--seed", ff_seed, "Seed for squads and teams")->capture_default_str();
  ff->add_option("--out", ff_out, "Output directory");
  ff->add_option("--dump-config", ff_dump, "Write the default config JSON and exit");
  ff_params.add(ff);

  // heatmap
  auto* hm = app.add_subcommand("heatmap", "Tabulate the weight function over (cv_obs, cv_div)");
  std::size_t hm_steps = 21;
  std::string hm_out;
  ParamFlags hm_params;
  hm->add_option("--steps", hm_steps, "Grid points per axis")->capture_default_str();
  hm->add_option("--out", hm_out, "Output CSV (default: stdout)");
  hm_params.add(hm);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try
  {
    if (sim->parsed())
      return cmd_simulate(sim_scenario, sim_out, sim_seed, sim_demos);
    if (inf->parsed())
      return cmd_infer(inf_demos, inf_out, inf_baseline, inf_params.get(), inf_csv);
    if (alo->parsed())
      return cmd_allocate(alo_target, alo_traits, alo_weights, alo_agents, alo_card, alo_mode, alo_seed, alo_top_k, alo_out);
    if (ev->parsed())
      return cmd_evaluate(ev_demos, ev_scenario, ev_schemes, ev_weights, ev_trials, ev_seed, ev_sweep,
                          ev_params.get(), ev_out);
    if (ff->parsed())
    {
      if (!ff_dump.empty())
      {
        io::write_text(ff_dump, fifa::config_to_json(fifa::FifaConfig::defaults()).dump(2) + "\n");
        return exit_ok;
      }
      if (ff_csv.empty() || ff_out.empty())
        throw InvalidArgument("fifa needs --csv and --out");
      return cmd_fifa(ff_csv, ff_config, ff_k, ff_teams, ff_seed, ff_params.get(), ff_out);
    }
    if (hm->parsed())
      return cmd_heatmap(hm_steps, hm_params.get(), hm_out);
  }
  catch (const InfeasibleError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_infeasible;
  }
  catch (const DatasetError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_dataset;
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  catch (const nlohmann::json::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  catch (const std::filesystem::filesystem_error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_dataset;
  }
  return exit_usage;
}
