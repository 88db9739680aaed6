"""Blow up a fixed point of the toric Fano 3-fold and check the epsilon-condition equivalence.

Uses the dHYM charge with L = -K on the tangent bundle, computes the exact
eta bound, and evaluates a 3x3x3 epsilon grid inside the eta box.
Usage: python3 scripts/fano_blowup.py [--steps 3]
"""
import argparse

from toricpos.blowup import blowup_fixed_point, epsilon_conditions, epsilon_grid, eta_bound, verify_epsilon_equivalence
from toricpos.charges import build_dhym_charge, charge_to_polynomial
from toricpos.sheaves import Tangent
from toricpos.varieties import p1xp1_projbundle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=3)
    args = ap.parse_args()
    fan = p1xp1_projbundle().fan
    spec = Tangent()
    P = charge_to_polynomial(build_dhym_charge(fan, [1] * 6), spec)
    model = blowup_fixed_point(fan, fan.max_cones[0])
    eta = eta_bound(model, P, spec)
    conds = epsilon_conditions(model, spec, P.delta)
    print(f"blown-up cone {model.cone}, new ray {model.fan.rays[model.exceptional]}")
    print(f"eta = {eta.eta}; conditions: {conds.describe()}")
    rep = verify_epsilon_equivalence(model, P, spec, eps_grid=epsilon_grid(eta.eta, conds, args.steps))
    print(f"{len(rep.checked)} points checked, {len(rep.disagreements)} disagreements")


if __name__ == "__main__":
    main()
