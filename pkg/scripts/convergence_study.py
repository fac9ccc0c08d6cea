"""Quadrature refinement study.

Doubles the polar grid and reports, per level, the value of ``h_1`` for
omega0 at a fixed point, the obstruction ``I(omega0)`` and the changes between
successive levels.  The reference for ``I(omega0)`` is ``-2 log(1/lam)``.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from reeb_dbar import CutoffFamily, PolarQuadSpec, builtin_form, h_partial, obstruction


@dataclass(frozen=True)
class StudyConfig:
    n_min: int = 16
    levels: int = 6
    z: complex = 0.4 + 0.3j
    t: float = 0.7
    j: int = 1


def run(cfg: StudyConfig) -> list[dict]:
    family = CutoffFamily()
    omega0 = builtin_form("omega0")
    exact = -2 * np.log(1 / family.lam)
    rows, prev = [], None
    for level in range(cfg.levels):
        n = cfg.n_min * 2 ** level
        spec = PolarQuadSpec(n, n, 4.0)
        h = complex(h_partial(omega0, cfg.j, cfg.z, cfg.t, family, spec))
        I = complex(obstruction(omega0, family, spec))
        rows.append({"n": n, "h": h, "dh": abs(h - prev) if prev is not None else np.nan,
                     "I": I.real, "I_err": abs(I - exact)})
        prev = h
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=StudyConfig.levels)
    args = ap.parse_args()
    rows = run(StudyConfig(levels=args.levels))
    print(f"{'n':>6} {'Re h_1':>20} {'|change|':>10} {'ratio':>8} {'I(omega0)':>18} {'|I err|':>10}")
    for i, r in enumerate(rows):
        ratio = rows[i - 1]["dh"] / r["dh"] if i >= 2 and r["dh"] > 0 else np.nan
        print(f"{r['n']:>6} {r['h'].real:>20.15f} {r['dh']:>10.2e} {ratio:>8.1f} "
              f"{r['I']:>18.15f} {r['I_err']:>10.2e}")


if __name__ == "__main__":
    main()
