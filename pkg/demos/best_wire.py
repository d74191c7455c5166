"""Solve the best one-delta wire and print its response and three-level diagnostics."""

import argparse

from dressedgraphs import analyze
from dressedgraphs.graph import make_spec
from dressedgraphs.moments import sum_rule_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, default=-3.73)
    ap.add_argument("--omega", type=float, default=-0.456)
    ap.add_argument("--states", type=int, default=25)
    args = ap.parse_args()

    rep = analyze(make_spec("Wire1Delta", dict(g=args.g, omega=args.omega)), args.states)
    t = rep.tla
    print(f"bound states   {rep.n_bound}")
    print(f"beta_xxx       {rep.beta.xxx:+.4f}   (3 states {t.beta3:+.4f}, 4 states {t.beta4:+.4f})")
    print(f"gamma_xxxx     {rep.gamma.xxxx:+.4f}   (3 states {t.gamma3:+.4f}, 4 states {t.gamma4:+.4f})")
    print(f"X, E, f*G      {t.X:.4f}, {t.E:.4f}, {t.fG:.4f}")
    print(f"beta ranking   {t.beta_ranking[:5]}")
    curve = sum_rule_curve(rep.table)
    print("sum-rule residual by M:", ", ".join(f"{m}:{curve[m - 1]:.1e}" for m in (2, 3, 5, 10, args.states)))


if __name__ == "__main__":
    main()
