#pragma once

#include "traitpref/core.hpp"
#include "traitpref/inference.hpp"
#include "traitpref/io.hpp"
#include "traitpref/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace traitpref::fifa {

using nlohmann::json;

// ============================================================================
/// Game positions as allocation tasks, in task-row order.
enum class Position : std::size_t
{
  goalkeeper = 0,
  forward = 1,
  defense = 2,
  midfield = 3,
};

inline constexpr std::size_t position_count = 4;
inline constexpr std::array<int, position_count> position_cardinality{1, 2, 4, 4};
inline constexpr std::size_t team_size = 11;

[[nodiscard]] inline const char* to_string(Position p) noexcept
{
  switch (p)
  {
    case Position::goalkeeper: return "goalkeeper";
    case Position::forward: return "forward";
    case Position::defense: return "defense";
    case Position::midfield: return "midfield";
  }
  return "?";
}

[[nodiscard]] inline Position parse_position(const std::string& s)
{
  for (std::size_t i = 0; i < position_count; ++i)
    if (s == to_string(static_cast<Position>(i)))
      return static_cast<Position>(i);
  throw InvalidArgument("unknown position task '" + s + "'");
}

[[nodiscard]] inline std::vector<int> team_cardinality()
{
  return {position_cardinality.begin(), position_cardinality.end()};
}

// ============================================================================
/// Column names and filters for the players CSV.
struct FifaConfig
{
  std::vector<std::string> trait_columns;
  std::string id_column = "sofifa_id";
  std::string overall_column = "overall";
  std::string position_column = "player_positions";
  std::string team_position_column = "team_position";
  std::string club_column = "club";
  int overall_min = 60;
  int overall_max = 70;
  std::vector<std::string> inactive_team_positions{"SUB", "RES"};
  std::map<std::string, Position> position_map;

  static FifaConfig defaults()
  {
    FifaConfig cfg;
    cfg.trait_columns = {
        "height_cm", "weight_kg", "skill_moves",
        "attacking_crossing", "attacking_finishing", "attacking_heading_accuracy",
        "attacking_short_passing", "attacking_volleys",
        "skill_dribbling", "skill_curve", "skill_fk_accuracy", "skill_long_passing",
        "skill_ball_control",
        "movement_acceleration", "movement_sprint_speed", "movement_agility",
        "movement_reactions", "movement_balance",
        "power_shot_power", "power_jumping", "power_stamina", "power_strength",
        "power_long_shots",
        "mentality_aggression", "mentality_interceptions", "mentality_positioning",
        "mentality_vision", "mentality_penalties", "mentality_composure",
        "defending_marking", "defending_standing_tackle", "defending_sliding_tackle",
        "goalkeeping_diving", "goalkeeping_handling", "goalkeeping_kicking",
        "goalkeeping_positioning", "goalkeeping_reflexes"};
    for (const char* l : {"GK"})
      cfg.position_map[l] = Position::goalkeeper;
    for (const char* l : {"ST", "CF", "LW", "RW", "LF", "RF"})
      cfg.position_map[l] = Position::forward;
    for (const char* l : {"CB", "LB", "RB", "LWB", "RWB"})
      cfg.position_map[l] = Position::defense;
    for (const char* l : {"CM", "CDM", "CAM", "LM", "RM"})
      cfg.position_map[l] = Position::midfield;
    return cfg;
  }
};

[[nodiscard]] inline json config_to_json(const FifaConfig& cfg)
{
  json map = json::object();
  for (const auto& [label, pos] : cfg.position_map)
    map[label] = to_string(pos);
  return {
      {"trait_columns", cfg.trait_columns},
      {"id_column", cfg.id_column},
      {"overall_column", cfg.overall_column},
      {"position_column", cfg.position_column},
      {"team_position_column", cfg.team_position_column},
      {"club_column", cfg.club_column},
      {"overall_min", cfg.overall_min},
      {"overall_max", cfg.overall_max},
      {"inactive_team_positions", cfg.inactive_team_positions},
      {"position_map", std::move(map)},
  };
}

[[nodiscard]] inline FifaConfig config_from_json(const json& j)
{
  FifaConfig cfg = FifaConfig::defaults();
  try
  {
    if (j.contains("trait_columns"))
      cfg.trait_columns = j.at("trait_columns").get<std::vector<std::string>>();
    cfg.id_column = j.value("id_column", cfg.id_column);
    cfg.overall_column = j.value("overall_column", cfg.overall_column);
    cfg.position_column = j.value("position_column", cfg.position_column);
    cfg.team_position_column = j.value("team_position_column", cfg.team_position_column);
    cfg.club_column = j.value("club_column", cfg.club_column);
    cfg.overall_min = j.value("overall_min", cfg.overall_min);
    cfg.overall_max = j.value("overall_max", cfg.overall_max);
    if (j.contains("inactive_team_positions"))
      cfg.inactive_team_positions = j.at("inactive_team_positions").get<std::vector<std::string>>();
    if (j.contains("position_map"))
    {
      cfg.position_map.clear();
      for (auto it = j.at("position_map").begin(); it != j.at("position_map").end(); ++it)
        cfg.position_map[it.key()] = parse_position(it.value().get<std::string>());
    }
  }
  catch (const json::exception& e)
  {
    throw InvalidArgument(std::string("invalid FIFA config: ") + e.what());
  }
  if (cfg.trait_columns.empty())
    throw InvalidArgument("FIFA config lists no trait columns");
  return cfg;
}

[[nodiscard]] inline FifaConfig load_config(const std::filesystem::path& path)
{
  try
  {
    return config_from_json(json::parse(io::read_text(path)));
  }
  catch (const json::parse_error& e)
  {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

// ============================================================================
struct PlayerRecord
{
  std::string player_id;
  int overall = 0;
  std::string position_label;
  Position position = Position::midfield;
  std::vector<double> traits;
  std::string club;
};

/// First listed position decides the task; unknown labels yield nullopt.
[[nodiscard]] inline std::optional<Position> map_position(
    const std::string& position_label, const FifaConfig& cfg = FifaConfig::defaults())
{
  const auto comma = position_label.find(',');
  const std::string first = io::trim(position_label.substr(0, comma));
  if (first.empty())
    return std::nullopt;
  const auto it = cfg.position_map.find(first);
  if (it == cfg.position_map.end())
    return std::nullopt;
  return it->second;
}

struct IngestResult
{
  std::vector<PlayerRecord> players;
  std::size_t rows_read = 0;
  std::map<std::string, std::size_t> dropped; // reason -> count
  std::vector<std::string> warnings;
};

inline constexpr const char* drop_missing_capability = "missing capability";
inline constexpr const char* drop_inactive = "inactive or substitute";
inline constexpr const char* drop_overall = "overall outside band";
inline constexpr const char* drop_position = "unknown position";

/// Load and filter the players CSV.
[[nodiscard]] inline IngestResult ingest(
    const std::filesystem::path& csv_path, const FifaConfig& cfg = FifaConfig::defaults())
{
  IngestResult out;
  const auto rows = io::parse_csv(io::read_text(csv_path));
  if (rows.empty())
  {
    out.warnings.push_back("'" + csv_path.string() + "' is empty; no players loaded");
    return out;
  }

  const auto& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i)
    col[io::trim(header[i])] = i;

  std::vector<std::string> missing;
  auto need = [&](const std::string& name) {
    if (!col.contains(name))
      missing.push_back(name);
  };
  need(cfg.id_column);
  need(cfg.overall_column);
  need(cfg.position_column);
  need(cfg.team_position_column);
  need(cfg.club_column);
  for (const auto& t : cfg.trait_columns)
    need(t);
  if (!missing.empty())
  {
    std::string msg = csv_path.string() + ": missing required columns:";
    for (const auto& m : missing)
      msg += " " + m;
    throw DatasetError(msg);
  }

  auto cell = [](const std::vector<std::string>& row, std::size_t i) -> std::string {
    return i < row.size() ? io::trim(row[i]) : std::string{};
  };

  for (std::size_t r = 1; r < rows.size(); ++r)
  {
    const auto& row = rows[r];
    ++out.rows_read;

    PlayerRecord p;
    p.player_id = cell(row, col[cfg.id_column]);
    p.club = cell(row, col[cfg.club_column]);
    p.position_label = cell(row, col[cfg.position_column]);

    bool complete = true;
    p.traits.reserve(cfg.trait_columns.size());
    for (const auto& t : cfg.trait_columns)
    {
      double v = 0.0;
      if (!io::parse_double(cell(row, col[t]), v) || v < 0.0)
      {
        complete = false;
        break;
      }
      p.traits.push_back(v);
    }
    if (!complete)
    {
      ++out.dropped[drop_missing_capability];
      continue;
    }

    const std::string team_pos = cell(row, col[cfg.team_position_column]);
    if (team_pos.empty()
        || std::find(cfg.inactive_team_positions.begin(), cfg.inactive_team_positions.end(), team_pos)
               != cfg.inactive_team_positions.end())
    {
      ++out.dropped[drop_inactive];
      continue;
    }

    double overall = 0.0;
    if (!io::parse_double(cell(row, col[cfg.overall_column]), overall)
        || overall < cfg.overall_min || overall > cfg.overall_max)
    {
      ++out.dropped[drop_overall];
      continue;
    }
    p.overall = static_cast<int>(overall);

    const auto pos = map_position(p.position_label, cfg);
    if (!pos)
    {
      ++out.dropped[drop_position];
      out.warnings.push_back("player " + p.player_id + ": unknown position '" + p.position_label + "'");
      continue;
    }
    p.position = *pos;
    out.players.push_back(std::move(p));
  }
  return out;
}

// ============================================================================
/// Players grouped by position task, each group in input order.
[[nodiscard]] inline std::array<std::vector<std::size_t>, position_count> by_position(
    const std::vector<PlayerRecord>& players)
{
  std::array<std::vector<std::size_t>, position_count> groups;
  for (std::size_t i = 0; i < players.size(); ++i)
    groups[static_cast<std::size_t>(players[i].position)].push_back(i);
  return groups;
}

/// A team: player indices in species (column) order.
using Team = std::vector<std::size_t>;

[[nodiscard]] inline SpeciesTraitMatrix team_traits(
    const std::vector<PlayerRecord>& players, const Team& team)
{
  Matrix<double> q(team.size(), players.at(team.front()).traits.size());
  for (std::size_t s = 0; s < team.size(); ++s)
  {
    const auto& t = players.at(team[s]).traits;
    std::copy(t.begin(), t.end(), q.row(s).begin());
  }
  return SpeciesTraitMatrix(std::move(q));
}

/// Dataset assignment of a team: task row = true position.
[[nodiscard]] inline AssignmentMatrix team_assignment(
    const std::vector<PlayerRecord>& players, const Team& team)
{
  Matrix<int> x(position_count, team.size(), 0);
  for (std::size_t s = 0; s < team.size(); ++s)
    x(static_cast<std::size_t>(players.at(team[s]).position), s) = 1;
  return AssignmentMatrix(std::move(x));
}

/// Per-position mean trait vector over the pool, scaled by the number of
/// players the position takes.
[[nodiscard]] inline TraitRequirementMatrix position_target(const std::vector<PlayerRecord>& players)
{
  if (players.empty())
    throw InvalidArgument("position target: no players");
  const std::size_t traits = players.front().traits.size();
  const auto groups = by_position(players);
  Matrix<double> y(position_count, traits, 0.0);
  for (std::size_t m = 0; m < position_count; ++m)
  {
    if (groups[m].empty())
      throw InvalidArgument(std::string("position target: no ") + to_string(static_cast<Position>(m)) + " players");
    for (std::size_t i : groups[m])
      for (std::size_t u = 0; u < traits; ++u)
        y(m, u) += players[i].traits[u];
    for (std::size_t u = 0; u < traits; ++u)
      y(m, u) = y(m, u) / static_cast<double>(groups[m].size()) * position_cardinality[m];
  }
  return TraitRequirementMatrix(std::move(y));
}

struct SquadDemonstrations
{
  DemonstrationSet demos;
  std::vector<Team> squads;
  TraitRequirementMatrix target;
  std::vector<std::string> warnings;
};

/// Partition the pool into disjoint, seeded random squads with the required
/// position counts; each squad is one demonstration.
[[nodiscard]] inline SquadDemonstrations build_demonstrations(
    const std::vector<PlayerRecord>& players,
    std::uint64_t seed,
    std::size_t max_squads = 0)
{
  auto groups = by_position(players);
  std::mt19937_64 rng(seed);
  for (auto& g : groups)
    std::shuffle(g.begin(), g.end(), rng);

  std::size_t possible = std::numeric_limits<std::size_t>::max();
  for (std::size_t m = 0; m < position_count; ++m)
    possible = std::min(possible, groups[m].size() / static_cast<std::size_t>(position_cardinality[m]));

  SquadDemonstrations out;
  for (std::size_t m = 0; m < position_count; ++m)
    if (groups[m].size() / static_cast<std::size_t>(position_cardinality[m]) == possible)
      out.warnings.push_back(
          std::string("squad count limited by ") + to_string(static_cast<Position>(m)) + " players ("
          + std::to_string(groups[m].size()) + ")");
  if (max_squads > 0)
    possible = std::min(possible, max_squads);
  if (possible < 2)
    throw InvalidArgument(
        "need at least two complete squads, the pool supports " + std::to_string(possible));

  std::vector<Demonstration> records;
  std::array<std::size_t, position_count> cursor{};
  for (std::size_t k = 0; k < possible; ++k)
  {
    Team squad;
    for (std::size_t m = 0; m < position_count; ++m)
      for (int c = 0; c < position_cardinality[m]; ++c)
        squad.push_back(groups[m][cursor[m]++]);
    std::shuffle(squad.begin(), squad.end(), rng);
    records.push_back({team_assignment(players, squad), team_traits(players, squad)});
    out.squads.push_back(std::move(squad));
  }
  out.demos = DemonstrationSet(std::move(records));
  out.target = position_target(players);
  return out;
}

/// Random 11-player team with the required position counts, players in
/// shuffled column order.
[[nodiscard]] inline Team sample_team(
    const std::vector<PlayerRecord>& players, std::uint64_t seed, std::uint64_t index)
{
  const auto groups = by_position(players);
  for (std::size_t m = 0; m < position_count; ++m)
    if (groups[m].size() < static_cast<std::size_t>(position_cardinality[m]))
      throw InvalidArgument(
          std::string("not enough ") + to_string(static_cast<Position>(m)) + " players for a team");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + index);
  Team team;
  for (std::size_t m = 0; m < position_count; ++m)
  {
    std::vector<std::size_t> picked;
    std::sample(groups[m].begin(), groups[m].end(), std::back_inserter(picked),
                position_cardinality[m], rng);
    team.insert(team.end(), picked.begin(), picked.end());
  }
  std::shuffle(team.begin(), team.end(), rng);
  return team;
}

// ============================================================================
struct TeamReport
{
  double score = 0.0; // matched positions / team size
  std::size_t matched = 0;
  std::size_t traits_used = 0;
  std::chrono::nanoseconds wall_time{0};
  double objective = 0.0;
  std::vector<Position> predicted;
  std::vector<Position> actual;
};

/// Fraction of players whose predicted position matches the dataset.
[[nodiscard]] inline double allocation_score(
    const std::vector<Position>& predicted, const std::vector<Position>& actual)
{
  if (predicted.size() != actual.size() || predicted.empty())
    throw InvalidArgument("allocation score: position lists differ in length or are empty");
  std::size_t matched = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    matched += predicted[i] == actual[i] ? 1 : 0;
  return static_cast<double>(matched) / static_cast<double>(predicted.size());
}

/// Allocate a team to positions using the k highest-weighted traits and score
/// the result against the dataset positions.
[[nodiscard]] inline TeamReport evaluate_team(
    const std::vector<PlayerRecord>& players,
    const Team& team,
    const TraitRequirementMatrix& target,
    const PreferenceWeights& w,
    std::size_t k,
    SolveMode mode = SolveMode::automatic,
    std::uint64_t seed = 0)
{
  if (team.size() != team_size)
    throw InvalidArgument("a team has exactly 11 players, got " + std::to_string(team.size()));

  const auto q = team_traits(players, team);
  const auto sel = top_k_traits(w, k);
  const TraitRequirementMatrix reduced_target(
      select_columns(target.values(), std::span<const std::size_t>(sel.traits)));
  const SpeciesTraitMatrix reduced_q(
      select_columns(q.values(), std::span<const std::size_t>(sel.traits)));

  const AllocationConstraints constraints(
      TeamComposition(std::vector<int>(team.size(), 1)), team_cardinality(), mode, seed);
  const auto res = allocate(reduced_target, reduced_q, sel.weights, constraints);

  TeamReport rep;
  rep.traits_used = sel.traits.size();
  rep.wall_time = res.wall_time;
  rep.objective = res.objective;
  for (std::size_t s = 0; s < team.size(); ++s)
  {
    std::size_t task = position_count;
    for (std::size_t m = 0; m < position_count; ++m)
      if (res.assignment(m, s) == 1)
        task = m;
    const Position predicted = static_cast<Position>(task);
    const Position actual = players[team[s]].position;
    rep.predicted.push_back(predicted);
    rep.actual.push_back(actual);
    rep.matched += predicted == actual ? 1 : 0;
  }
  rep.score = allocation_score(rep.predicted, rep.actual);
  return rep;
}

} // namespace traitpref::fifa
