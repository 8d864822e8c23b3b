#!/usr/bin/env python3
"""Regenerates data/calibration, the synthetic provincial reference dataset.

The dataset is constructed so that every quantity the engine derives from
it is exact in double precision:

* Each province pins its intensity composite to exactly 1.0
  (electrification 0.5 with an electricity factor of 2.0, no coal or gas),
  so emissions equal energy year by year.
* Provincial emissions follow w * g(t), where w is an integer weight and
  g(t) = (4096 - (t - peak_year)^2) / 4096. All intermediate products stay
  dyadic and far below 2^53, so the per-year series, the national sums,
  and both national peaks are exact doubles.
* The business-as-usual run peaks at 2028 with a national value of exactly
  890; the decarbonization run peaks at 2023 with exactly 850.

Run from the repository root:  python3 tools/gen_calibration.py
"""

import json
import os

HORIZON = range(2000, 2061)
BAU_PEAK_YEAR = 2028
DEC_PEAK_YEAR = 2023
DENOM = 4096  # wide enough that g(t) > 0 across the whole horizon

# province -> (region, bau_weight, decarbonization_gap)
# Weights sum to 890; gaps sum to 40, so the decarbonization national
# peak is exactly 850. Gaps are halves to keep every value dyadic.
PROVINCES = {
    "Beijing": ("North China", 36, 0.5),
    "Tianjin": ("North China", 21, 0.5),
    "Hebei": ("North China", 61, 1.5),
    "Shanxi": ("North China", 25, 1.0),
    "Inner Mongolia": ("North China", 17, 0.5),
    "Liaoning": ("Northeast China", 33, 1.0),
    "Jilin": ("Northeast China", 14, 0.5),
    "Heilongjiang": ("Northeast China", 19, 0.5),
    "Shanghai": ("East China", 34, 1.0),
    "Jiangsu": ("East China", 60, 2.0),
    "Zhejiang": ("East China", 50, 2.0),
    "Anhui": ("East China", 30, 1.5),
    "Fujian": ("East China", 27, 1.0),
    "Jiangxi": ("East China", 16, 0.5),
    "Shandong": ("East China", 69, 5.0),
    "Henan": ("Central China", 48, 4.5),
    "Hubei": ("Central China", 31, 1.5),
    "Hunan": ("Central China", 29, 1.5),
    "Guangdong": ("South China", 62, 1.5),
    "Guangxi": ("South China", 21, 0.5),
    "Hainan": ("South China", 9, 0.5),
    "Chongqing": ("Southwest China", 24, 0.5),
    "Sichuan": ("Southwest China", 42, 1.5),
    "Guizhou": ("Southwest China", 15, 0.5),
    "Yunnan": ("Southwest China", 19, 0.5),
    "Shaanxi": ("Northwest China", 27, 1.0),
    "Gansu": ("Northwest China", 13, 0.5),
    "Qinghai": ("Northwest China", 7, 0.5),
    "Ningxia": ("Northwest China", 6, 0.5),
    "Xinjiang": ("Northwest China", 25, 5.5),
}

# Constant per-province parameters: composite intensity is exactly
# 0.5 * 2.0 = 1.0, floor area 5 m2/person, intensity 40 kgce/m2, so
# population w * g(t) * 5e6 makes emissions equal w * g(t) in MtCO2.
CONSTANT_PARAMS = [
    ("floor_area_per_capita", "5"),
    ("energy_intensity", "40"),
    ("electrification_rate", "0.5"),
    ("coal_share", "0"),
    ("gas_share", "0"),
    ("self_generation_share", "0"),
    ("k_electricity", "2"),
    ("k_coal", "2.66"),
    ("k_gas", "2.09"),
]


def shape(year, peak_year):
    d = year - peak_year
    numerator = DENOM - d * d
    assert numerator > 0, f"horizon leaves the support of g at {year}"
    return numerator


def population(weight, year, peak_year):
    # weight * g(t) * 5e6, computed as an exact dyadic rational.
    numerator = weight * shape(year, peak_year) * 5_000_000
    value = numerator / DENOM
    assert value == numerator / DENOM  # exact float division by 2^12
    return value


def format_number(value):
    if value == int(value):
        return str(int(value))
    return repr(value)


def write_anchors(path, peak_year, use_gap):
    lines = ["province,parameter,year,value"]
    for province in sorted(PROVINCES):
        _, weight, gap = PROVINCES[province]
        w = weight - gap if use_gap else weight
        for year in HORIZON:
            lines.append(
                f"{province},population,{year},{format_number(population(w, year, peak_year))}"
            )
        for name, value in CONSTANT_PARAMS:
            lines.append(f"{province},{name},2000,{value}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def main():
    out_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           "data", "calibration")
    os.makedirs(out_dir, exist_ok=True)

    total = sum(w for _, w, _ in PROVINCES.values())
    gap_total = sum(g for _, _, g in PROVINCES.values())
    assert total == 890, total
    assert gap_total == 40.0, gap_total

    bundle = {
        "schema_version": 1,
        "name": "calibration",
        "notes": ("Synthetic provincial reference dataset with exactly known "
                  "peaks: national 890 in 2028 (bau), 850 in 2023 (dec)."),
        "created": "2026-08-01",
        "region_map": {p: PROVINCES[p][0] for p in sorted(PROVINCES)},
        "uncertainty": {
            "mode": "aggregate",
            "sigma_c": 0.05,
            "sigma_population": 0.0,
            "sigma_floor_area": 0.0,
            "sigma_energy_intensity": 0.0,
            "sigma_carbon_intensity": 0.0,
            "draws": 100000,
            "seed": 20280101,
            "ramp_base_year": 2020,
            "ramp_end_year": 2060,
        },
        "scenarios": [
            {
                "name": "bau",
                "kind": "bau",
                "first_year": 2000,
                "last_year": 2060,
                "interpolation": "linear",
                "bipg_scope": "coal_only",
                "anchors_file": "bau_anchors.csv",
            },
            {
                "name": "dec",
                "kind": "decarbonization",
                "first_year": 2000,
                "last_year": 2060,
                "interpolation": "linear",
                "bipg_scope": "coal_only",
                "anchors_file": "dec_anchors.csv",
            },
        ],
    }

    with open(os.path.join(out_dir, "bundle.json"), "w", newline="\n") as fh:
        json.dump(bundle, fh, indent=2)
        fh.write("\n")

    write_anchors(os.path.join(out_dir, "bau_anchors.csv"), BAU_PEAK_YEAR, use_gap=False)
    write_anchors(os.path.join(out_dir, "dec_anchors.csv"), DEC_PEAK_YEAR, use_gap=True)
    print(f"wrote {out_dir}")


if __name__ == "__main__":
    main()
