#!/usr/bin/env python3
"""Write a synthetic players CSV with the FIFA-20 players_20.csv column layout.

Players are drawn from position-dependent skill profiles, so position
allocation on this file behaves like it does on the real data.
"""
import argparse
import csv
import sys

import numpy as np

COLUMNS = (
    "sofifa_id,player_url,short_name,long_name,age,dob,height_cm,weight_kg,nationality,club,"
    "overall,potential,value_eur,wage_eur,player_positions,preferred_foot,international_reputation,"
    "weak_foot,skill_moves,work_rate,body_type,real_face,release_clause_eur,player_tags,team_position,"
    "team_jersey_number,loaned_from,joined,contract_valid_until,nation_position,nation_jersey_number,"
    "pace,shooting,passing,dribbling,defending,physic,gk_diving,gk_handling,gk_kicking,gk_reflexes,"
    "gk_speed,gk_positioning,player_traits,attacking_crossing,attacking_finishing,"
    "attacking_heading_accuracy,attacking_short_passing,attacking_volleys,skill_dribbling,skill_curve,"
    "skill_fk_accuracy,skill_long_passing,skill_ball_control,movement_acceleration,"
    "movement_sprint_speed,movement_agility,movement_reactions,movement_balance,power_shot_power,"
    "power_jumping,power_stamina,power_strength,power_long_shots,mentality_aggression,"
    "mentality_interceptions,mentality_positioning,mentality_vision,mentality_penalties,"
    "mentality_composure,defending_marking,defending_standing_tackle,defending_sliding_tackle,"
    "goalkeeping_diving,goalkeeping_handling,goalkeeping_kicking,goalkeeping_positioning,"
    "goalkeeping_reflexes,ls,st,rs,lw,lf,cf,rf,rw,lam,cam,ram,lm,lcm,cm,rcm,rm,lwb,ldm,cdm,rdm,rwb,"
    "lb,lcb,cb,rcb,rb"
).split(",")

GROUPS = ("GK", "FWD", "DEF", "MID")

# mean rating per group: GK, FWD, DEF, MID
SKILLS = {
    "attacking_crossing": (14, 58, 55, 62),
    "attacking_finishing": (10, 68, 32, 52),
    "attacking_heading_accuracy": (14, 60, 62, 48),
    "attacking_short_passing": (30, 60, 60, 68),
    "attacking_volleys": (10, 60, 30, 50),
    "skill_dribbling": (12, 68, 52, 66),
    "skill_curve": (14, 58, 40, 60),
    "skill_fk_accuracy": (13, 50, 35, 55),
    "skill_long_passing": (28, 48, 56, 64),
    "skill_ball_control": (22, 66, 58, 68),
    "movement_acceleration": (42, 74, 64, 68),
    "movement_sprint_speed": (42, 74, 65, 67),
    "movement_agility": (45, 72, 60, 70),
    "movement_reactions": (60, 63, 61, 62),
    "movement_balance": (45, 68, 62, 70),
    "power_shot_power": (22, 68, 52, 64),
    "power_jumping": (62, 66, 70, 64),
    "power_stamina": (32, 66, 70, 72),
    "power_strength": (62, 66, 72, 62),
    "power_long_shots": (12, 60, 34, 60),
    "mentality_aggression": (28, 48, 70, 60),
    "mentality_interceptions": (18, 26, 64, 55),
    "mentality_positioning": (12, 68, 36, 58),
    "mentality_vision": (40, 58, 46, 62),
    "mentality_penalties": (18, 60, 40, 52),
    "mentality_composure": (42, 62, 58, 62),
    "defending_marking": (14, 28, 64, 52),
    "defending_standing_tackle": (13, 26, 66, 56),
    "defending_sliding_tackle": (12, 24, 65, 52),
    "goalkeeping_diving": (65, 10, 10, 10),
    "goalkeeping_handling": (63, 10, 10, 10),
    "goalkeeping_kicking": (62, 10, 10, 10),
    "goalkeeping_positioning": (63, 10, 10, 10),
    "goalkeeping_reflexes": (66, 10, 10, 10),
}
HEIGHT = ((189, 4), (181, 6), (184, 5), (177, 6))
WEIGHT = ((83, 5), (76, 6), (78, 5), (72, 5))
SKILL_MOVES = (1, 3, 2, 3)

LABELS = {
    "GK": (["GK"], [1.0]),
    "FWD": (["ST", "LW", "RW", "CF", "LF", "RF"], [0.5, 0.2, 0.2, 0.06, 0.02, 0.02]),
    "DEF": (["CB", "LB", "RB", "LWB", "RWB"], [0.5, 0.2, 0.2, 0.05, 0.05]),
    "MID": (["CM", "CDM", "CAM", "LM", "RM"], [0.3, 0.2, 0.2, 0.15, 0.15]),
}
SLOTS = {
    "GK": ["GK"],
    "FWD": ["ST", "LS", "RS", "LW", "RW"],
    "DEF": ["LCB", "RCB", "LB", "RB"],
    "MID": ["LCM", "RCM", "CDM", "CAM", "LM", "RM"],
}
CLUBS = ["Northfield", "Harbour City", "Redmoor", "Ashdale", "Kingsport", "Westbrook",
         "Stonebridge", "Larkhill", "Eastmere", "Fairhaven"]


def clip(v, lo=1, hi=99):
    return int(min(hi, max(lo, round(v))))


def make_rows(n, rng):
    rows = []
    group_p = [0.12, 0.20, 0.34, 0.34]
    for i in range(n):
        g = rng.choice(4, p=group_p)
        name = GROUPS[g]
        overall = clip(rng.normal(65, 3.2), 52, 78)
        lift = 0.7 * (overall - 65)
        r = {c: "" for c in COLUMNS}
        r["sofifa_id"] = str(900000 + i)
        r["player_url"] = f"https://sofifa.example/player/{900000 + i}"
        r["short_name"] = f"P. Player{i}"
        r["long_name"] = f"Synthetic Player {i}"
        r["age"] = str(int(rng.integers(18, 35)))
        r["dob"] = f"{1985 + int(rng.integers(0, 16))}-0{1 + int(rng.integers(0, 9))}-1{int(rng.integers(0, 9))}"
        r["height_cm"] = str(clip(rng.normal(*HEIGHT[g]), 160, 205))
        r["weight_kg"] = str(clip(rng.normal(*WEIGHT[g]), 55, 100))
        r["nationality"] = "Synthland"
        r["club"] = CLUBS[int(rng.integers(0, len(CLUBS)))]
        r["overall"] = str(overall)
        r["potential"] = str(overall + int(rng.integers(0, 8)))
        r["value_eur"] = str(int(50000 * 1.15 ** (overall - 50)))
        r["wage_eur"] = str(int(1000 * 1.1 ** (overall - 50)))
        labels, lp = LABELS[name]
        first = rng.choice(labels, p=lp)
        extra = [l for l in labels if l != first]
        positions = [first] + ([extra[int(rng.integers(0, len(extra)))]] if extra and rng.random() < 0.4 else [])
        r["player_positions"] = ", ".join(positions)
        r["preferred_foot"] = "Right" if rng.random() < 0.75 else "Left"
        r["international_reputation"] = "1"
        r["weak_foot"] = str(int(rng.integers(2, 5)))
        r["skill_moves"] = str(max(1, min(5, SKILL_MOVES[g] + (int(rng.integers(-1, 2)) if g else 0))))
        r["work_rate"] = "Medium/Medium"
        r["body_type"] = "Normal"
        r["real_face"] = "No"
        r["release_clause_eur"] = str(int(90000 * 1.15 ** (overall - 50)))
        r["team_position"] = SLOTS[name][int(rng.integers(0, len(SLOTS[name])))]
        r["team_jersey_number"] = str(int(rng.integers(1, 40)))
        r["joined"] = "2018-07-01"
        r["contract_valid_until"] = str(2020 + int(rng.integers(0, 5)))
        skills = {k: clip(rng.normal(v[g] + (lift if v[g] > 20 else 0), 6 if v[g] > 20 else 3)) for k, v in SKILLS.items()}
        for k, v in skills.items():
            r[k] = str(v)
        if name == "GK":
            for k, s in (("gk_diving", "goalkeeping_diving"), ("gk_handling", "goalkeeping_handling"),
                         ("gk_kicking", "goalkeeping_kicking"), ("gk_reflexes", "goalkeeping_reflexes"),
                         ("gk_positioning", "goalkeeping_positioning")):
                r[k] = str(skills[s])
            r["gk_speed"] = str(clip(rng.normal(45, 8)))
        else:
            r["pace"] = str((skills["movement_acceleration"] + skills["movement_sprint_speed"]) // 2)
            r["shooting"] = str((skills["attacking_finishing"] + skills["power_shot_power"] + skills["power_long_shots"]) // 3)
            r["passing"] = str((skills["attacking_short_passing"] + skills["skill_long_passing"] + skills["attacking_crossing"]) // 3)
            r["dribbling"] = str((skills["skill_dribbling"] + skills["skill_ball_control"] + skills["movement_agility"]) // 3)
            r["defending"] = str((skills["defending_marking"] + skills["defending_standing_tackle"] + skills["mentality_interceptions"]) // 3)
            r["physic"] = str((skills["power_strength"] + skills["power_stamina"] + skills["mentality_aggression"]) // 3)
            for slot in COLUMNS[COLUMNS.index("ls"):]:
                r[slot] = f"{overall - int(rng.integers(0, 6))}+{int(rng.integers(0, 3))}"
        rows.append(r)

    # inactive, reserve and incomplete rows, as found in the real file
    order = rng.permutation(n)
    for j in order[:25]:
        rows[j]["team_position"] = "SUB"
    for j in order[25:37]:
        rows[j]["team_position"] = "RES"
    for j in order[37:42]:
        rows[j]["team_position"] = ""
    for j in order[42:46]:
        rows[j][list(SKILLS)[int(rng.integers(0, len(SKILLS)))]] = ""
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    rows = make_rows(args.rows, rng)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
