"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 BN report inconsistent, 3 input error,
4 budget or size cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from . import bncheck
from .cellsheaf import constant_sheaf, load_sheaf, sheaf_cohomology_all
from .covers import build_cover
from .errors import InfiniteOrUnknownGroup, InputError, SizeCapExceeded
from .exactalg import RingSpec
from .fundgroup import Finite, abelianization, group_order, presentation, todd_coxeter
from .groupcoh import DEFAULT_SIZE_CAP
from .localsys import load_rep, rep_to_sheaf, trivial_representation
from .report import render_report
from .simplicial import homology, load_complex

log = logging.getLogger("sheafbn")

FIXTURES = ("circle", "s2", "rp2", "torus", "wedge", "cylinder", "cone", "point")

EXIT_OK, EXIT_USAGE, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("sheafbn") / "fixtures" / f"{name}.json"))


def _complex(arg: str):
    path = Path(arg)
    if not path.exists() and arg in FIXTURES:
        path = fixture_path(arg)
    return load_complex(path)


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name}={raw!r} is not an integer")


def _budget(args) -> int:
    return args.budget if args.budget is not None else _env_int("SHEAFBN_BUDGET", bncheck.DEFAULT_BUDGET)


def _size_cap(args) -> int:
    return args.size_cap if args.size_cap is not None else _env_int("SHEAFBN_SIZE_CAP", DEFAULT_SIZE_CAP)


def _sheaf(args, X, ring):
    if getattr(args, "sheaf", None):
        return load_sheaf(X, args.sheaf)
    return constant_sheaf(X, ring, args.rank)


def _reps(args, X, ring):
    P, _ = presentation(X)
    paths = getattr(args, "rep", None) or []
    if not paths:
        return [("trivial", trivial_representation(P, ring))]
    return [(Path(p).stem, load_rep(P, p)) for p in paths]


# ---------------------------------------------------------------------------
# verbs

def cmd_homology(args):
    X = _complex(args.complex)
    ring = RingSpec.parse(args.ring)
    degs = [args.degree] if args.degree is not None else range(X.dimension + 1)
    return {"homology": {str(n): homology(X, n, ring) for n in degs}}


def cmd_pi1(args):
    X = _complex(args.complex)
    P, L = presentation(X, args.basepoint)
    res = group_order(P, _budget(args))
    out = {"presentation": P.to_json(), "basepoint": L.basepoint,
           "generator_edges": [list(e) for e in L.generators],
           "abelianization": abelianization(P)}
    out["order"] = res.order if isinstance(res, Finite) else None
    out["status"] = "finite" if isinstance(res, Finite) else "unknown"
    return out


def cmd_cover(args):
    X = _complex(args.complex)
    P, L = presentation(X)
    subgroup = [tuple(int(x) for x in w.split(",")) for w in args.subgroup or []]
    T = todd_coxeter(P, subgroup, _budget(args))
    if not T.complete:
        raise InfiniteOrUnknownGroup(f"coset enumeration exceeded {_budget(args)} cosets")
    return build_cover(X, L, T)


def cmd_sheaf_cohomology(args):
    X = _complex(args.complex)
    F = _sheaf(args, X, RingSpec.parse(args.ring))
    top = X.dimension if args.max_degree is None else args.max_degree
    return {"cohomology": {str(n): m for n, m in enumerate(sheaf_cohomology_all(F, top))}}


def cmd_rep_cohomology(args):
    X = _complex(args.complex)
    _, L = presentation(X)
    top = X.dimension if args.max_degree is None else args.max_degree
    out = {}
    for rid, rho in _reps(args, X, RingSpec.parse(args.ring)):
        F = rep_to_sheaf(X, L, rho)
        out[rid] = {str(n): m for n, m in enumerate(sheaf_cohomology_all(F, top))}
    return {"cohomology": out}


def cmd_group_cohomology(args):
    X = _complex(args.complex)
    P, _ = presentation(X)
    out = {}
    for rid, rho in _reps(args, X, RingSpec.parse(args.ring)):
        rows = {}
        for n in range(args.max_degree + 1):
            grp, flag, how = bncheck._group_side(P, rho, n, _budget(args), _size_cap(args))
            rows[str(n)] = {"module": grp, "flag": flag, "resolution": how,
                            "status": "ok" if grp is not None else "not-computable"}
        out[rid] = rows
    return {"group_cohomology": out}


def cmd_qc(args):
    X = _complex(args.complex)
    F = _sheaf(args, X, RingSpec.parse(args.ring))
    out = {}
    for i in range(args.max_degree + 1):
        g = bncheck.derived_quasicoherator(X, F, i, _budget(args))
        entry = {"module": g.module}
        if g.action is not None:
            R = F.ring
            entry["action"] = [[[R.to_json_entry(x) for x in row] for row in m.rows]
                               for m in g.action]
        out[str(i)] = entry
    return {"derived_quasicoherator": out}


def cmd_aspherical(args):
    return bncheck.asphericity_check(_complex(args.complex), RingSpec.parse(args.ring), _budget(args))


def cmd_bn_check(args):
    X = _complex(args.complex)
    ring = RingSpec.parse(args.ring)
    sheaves = [(Path(p).stem, load_sheaf(X, p)) for p in args.sheaf or []]
    report = bncheck.bn_verdict(X, ring, _reps(args, X, ring), sheaves, args.max_degree,
                                _budget(args), _size_cap(args))
    if args.figure:
        from .plotting import plot_bn_report
        plot_bn_report(report, args.figure)
    return report


def cmd_e2_page(args):
    X = _complex(args.complex)
    F = _sheaf(args, X, RingSpec.parse(args.ring))
    page = bncheck.e2_page(X, F, args.pmax, args.qmax, _budget(args), _size_cap(args))
    if args.figure:
        from .plotting import plot_e2_page
        plot_e2_page(page, args.figure)
    return page


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sheafbn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_text, ring=True, budget=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--complex", required=True,
                       help=f"complex JSON file or fixture name ({', '.join(FIXTURES)})")
        if ring:
            p.add_argument("--ring", default="Z", help="Z, Q or Z/p (default Z)")
        if budget:
            p.add_argument("--budget", type=int, default=None,
                           help="coset budget (env SHEAFBN_BUDGET, default 10000)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.set_defaults(func=func)
        return p

    p = verb("homology", cmd_homology, "simplicial homology", budget=False)
    p.add_argument("--degree", type=int)
    p = verb("pi1", cmd_pi1, "edge-path presentation and group order", ring=False)
    p.add_argument("--basepoint", type=int, default=0)
    p = verb("cover", cmd_cover, "covering complex of a coset table", ring=False)
    p.add_argument("--subgroup", action="append",
                   help="subgroup generator as comma-separated signed letters")
    p = verb("sheaf-cohomology", cmd_sheaf_cohomology, "cohomology of a cellular sheaf", budget=False)
    p.add_argument("--sheaf")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--max-degree", type=int)
    p = verb("rep-cohomology", cmd_rep_cohomology, "cohomology of local systems", budget=False)
    p.add_argument("--rep", action="append")
    p.add_argument("--max-degree", type=int)
    p = verb("group-cohomology", cmd_group_cohomology, "H^n(pi_1, E) by bar or Fox")
    p.add_argument("--rep", action="append")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--size-cap", type=int)
    p = verb("qc", cmd_qc, "derived quasicoherator R^i Qc")
    p.add_argument("--sheaf")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--max-degree", type=int, default=2)
    verb("aspherical", cmd_aspherical, "asphericity verdict")
    p = verb("bn-check", cmd_bn_check, "Boekstedt-Neeman conditions (2), (3), (4)")
    p.add_argument("--rep", action="append")
    p.add_argument("--sheaf", action="append")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--size-cap", type=int)
    p.add_argument("--figure", help="write an agreement grid (PNG/PDF/SVG)")
    p = verb("e2-page", cmd_e2_page, "E2 page over a field")
    p.add_argument("--sheaf")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--pmax", type=int, default=4)
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--size-cap", type=int)
    p.add_argument("--figure", help="write the page as a figure (PNG/PDF/SVG)")
    return parser


def parse_and_dispatch(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.info("running %s", args.verb)
    try:
        result = args.func(args)
    except (InfiniteOrUnknownGroup, SizeCapExceeded) as exc:
        print(f"sheafbn: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, OSError) as exc:
        print(f"sheafbn: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stdout.write(render_report(result, args.format) + "\n")
    if isinstance(result, bncheck.BNReport) and not result.consistent:
        print("sheafbn: BN report is inconsistent", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def main():
    sys.exit(parse_and_dispatch())
