"""Command line front end.

Commands: pressure, entropy, gibbs, avoid-sweep, dimension, moran-verify.
Exit codes: 0 success, 1 verification failure, 2 input error.  Sweeps accept
--jobs; outputs are deterministic and byte-identical for any job count.
"""

from __future__ import annotations

import argparse
import json
import sys

from .sft import parse_word
from .potentials import Potential
from .pressure import pressure, pressure_by_words, gibbs_markov_measure, \
    entropy_and_integral, variational_defect
from .avoidance import avoidance_pressure_sweep
from .dimension import dimension_sweep
from .moran import run_verification
from .config import load_system, load_moran_params

INPUT_ERROR = 2
VERIFY_FAIL = 1


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_pressure(args) -> int:
    spec = load_system(args.spec)
    phi = Potential.zero(spec.sft) if args.zero_potential else spec.phi
    res = pressure(spec.sft, phi)
    print(f"pressure value={_fmt(res.value)} method={res.method} "
          f"error_bound={_fmt(res.error_bound)} iterations={res.iterations}")
    if args.oracle is not None:
        oracle = pressure_by_words(spec.sft, phi, args.oracle)
        print(f"oracle   value={_fmt(oracle.value)} method={oracle.method} "
              f"n={args.oracle} words={oracle.iterations}")
    return 0


def cmd_gibbs(args) -> int:
    spec = load_system(args.spec)
    mu = gibbs_markov_measure(spec.sft, spec.phi)
    h, integral = entropy_and_integral(mu, spec.sft, spec.phi)
    defect = variational_defect(spec.sft, spec.phi)
    print(f"states {len(mu.stationary)}")
    for u, row in enumerate(mu.stochastic):
        print("P[%d] %s" % (u, " ".join(_fmt(x) for x in row)))
    print("pi    " + " ".join(_fmt(x) for x in mu.stationary))
    print(f"entropy={_fmt(h)} integral={_fmt(integral)} "
          f"pressure_defect={_fmt(defect)}")
    return 0


def _write(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_avoid_sweep(args) -> int:
    spec = load_system(args.spec)
    z0 = spec.point(args.z0)
    sweep = avoidance_pressure_sweep(spec.sft, spec.phi, z0, args.nmax,
                                     jobs=args.jobs)
    _write(sweep.to_csv(), args.out)
    return 0


def cmd_dimension(args) -> int:
    spec = load_system(args.spec)
    z0 = spec.point(args.z0)
    sweep = dimension_sweep(spec.sft, spec.phi, z0, args.nmax, jobs=args.jobs)
    _write(sweep.to_csv(), args.out)
    return 0


def cmd_moran_verify(args) -> int:
    spec = load_system(args.spec)
    params = load_moran_params(args.params, spec)
    inject = [parse_word(w) for w in args.inject or []]
    verification = run_verification(spec.sft, spec.phi, params,
                                    inject_words=inject, jobs=args.jobs)
    _write(verification.render(), args.out)
    return 0 if verification.ok else VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftpress",
        description="pressure, non-dense orbit sets and dimension on "
                    "subshifts of finite type")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", help="topological pressure of a system")
    p.add_argument("spec")
    p.add_argument("--oracle", type=int, default=None,
                   help="also print the word-sum pressure at this n")
    p.set_defaults(func=cmd_pressure, zero_potential=False)

    p = sub.add_parser("entropy", help="topological entropy (zero potential)")
    p.add_argument("spec")
    p.add_argument("--oracle", type=int, default=None)
    p.set_defaults(func=cmd_pressure, zero_potential=True)

    p = sub.add_parser("gibbs", help="equilibrium Markov measure and entropy")
    p.add_argument("spec")
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("avoid-sweep",
                       help="pressure of the avoidance levels of a point")
    p.add_argument("spec")
    p.add_argument("--z0", required=True, help="named point from the config")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_avoid_sweep)

    p = sub.add_parser("dimension",
                       help="Bowen roots of the avoidance levels")
    p.add_argument("spec")
    p.add_argument("--z0", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("moran-verify",
                       help="run the fractal-construction verification suite")
    p.add_argument("spec")
    p.add_argument("--params", required=True,
                   help="JSON file with the construction constants")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--inject", action="append", default=None,
                   help="adversarial word added to the checks (repeatable)")
    p.set_defaults(func=cmd_moran_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as err:
        print(f"input error: {args.spec}: line {err.lineno} column {err.colno}: "
              f"{err.msg}", file=sys.stderr)
        return INPUT_ERROR
    except (OSError, ValueError, KeyError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
