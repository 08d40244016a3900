"""Command line front end.  Every subcommand prints one JSON report.

Exit codes: 0 when all checks pass, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import deligne, fixtures, loopgroup, subdivision, vanest
from .chains import homology, normalized_complex, simplicial_abelian_homotopy, simplicial_chain_complex
from .forms import RationalForm
from .simpset import FinSimplicialSet, OrderedComplex, SimplicialError, ordered_to_sset


class InputError(Exception):
    """Raised for unreadable or malformed inputs (exit code 2)."""


@dataclass
class RunReport:
    command: list
    checks: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    error: str | None = None

    def check(self, name: str, ok: bool, witness=None, residual=None, **extra):
        rec = {"name": name, "status": "pass" if ok else "fail", "witness": witness, "residual": residual}
        rec.update(extra)
        self.checks.append(rec)

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 0 if all(c["status"] == "pass" for c in self.checks) else 1

    def to_json(self) -> dict:
        out = {"command": self.command, "checks": self.checks, "result": self.result, "exit_code": self.exit_code}
        if self.error is not None:
            out["error"] = self.error
        return out


def _load(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _require(value, flag: str):
    if value is None:
        raise InputError(f"missing required option {flag}")
    return value


def _load_sset(path: str, top: int) -> tuple[FinSimplicialSet, OrderedComplex | None]:
    data = _load(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "cells" in data:
        return FinSimplicialSet.from_json(data), None
    K = OrderedComplex.from_json(data)
    return ordered_to_sset(K, max(top, K.dim)), K


# ---------------------------------------------------------------------------
# subcommands


def cmd_homology(args, rep: RunReport):
    D = _require(args.max_dim, "--max-dim")
    K, ordered = _load_sset(_require(args.input, "--input"), D + 1)
    C = normalized_complex(K, D + 1)
    rep.check("d^2 = 0", C.check_d_squared())
    groups = [homology(C, n) for n in range(D + 1)]
    rep.result["homology"] = [dict(degree=n, **g.to_json()) for n, g in enumerate(groups)]
    rep.result["betti"] = [g.betti for g in groups]
    if ordered is not None:
        direct = simplicial_chain_complex(ordered, D + 1)
        same = all(homology(direct, n) == groups[n] for n in range(D + 1))
        rep.check("simplicial chains agree with normalized chains", same)


def cmd_subdivide(args, rep: RunReport):
    if args.selftest:
        t0 = time.perf_counter()
        tally = subdivision.selftest(seed=args.seed)
        rep.result["seconds"] = round(time.perf_counter() - t0, 3)
        rep.result["corpus_depth"] = {str(k): v for k, v in subdivision.CORPUS_DEPTH.items()}
        for name, counts in tally.items():
            rep.check(name, counts["fail"] == 0, residual=counts["fail"], **counts)
        return
    data = _load(_require(args.input, "--input or --selftest"))
    try:
        c = subdivision.LinearChain(int(data["degree"]), {})
        for pos, term in enumerate(data["simplices"]):
            c = c + subdivision.LinearChain.simplex(term["points"], int(term.get("coeff", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed chain JSON: {exc!r}") from exc
    r = args.refine or 1
    S, Dr = subdivision.iterate(c, r)
    lhs = subdivision.boundary(Dr) + subdivision.iterate(subdivision.boundary(c), r)[1] if c.degree > 0 else None
    if lhs is not None:
        rep.check(f"dD{r} + D{r}d = id - S^{r}", lhs == c - S)

    def dump(ch):
        return [{"points": [[str(x) for x in p] for p in s], "coeff": k} for s, k in ch.simplices().items()]

    rep.result["subdivided"] = dump(S)
    rep.result["terms"] = len(S)


def cmd_loopgroup(args, rep: RunReport):
    depth = args.depth if args.depth is not None else 1
    K, _ = _load_sset(_require(args.input, "--input"), depth + 1)
    x0 = args.basepoint or K.vertices()[0]
    P = loopgroup.loop_group(K, x0, depth=depth)
    rep.check("simplicial identities", not P.check_identities(), witness=P.check_identities()[:5] or None)
    rep.result["generator_counts"] = P.generator_counts()
    rep.result["pi0"] = loopgroup.pi0_of_group(P).to_json()
    if args.check_kan:
        C = normalized_complex(K, min(K.max_degree, depth + 1))
        rows = []
        for i in range(depth):
            if i + 2 > C.top:
                break
            pi = simplicial_abelian_homotopy(P, i)
            H = homology(C, i + 1)
            rows.append({"i": i, "pi_i(A)": pi.to_json(), "H_i+1(K)": H.to_json()})
            rep.check(f"pi_{i}(A) = H_{i + 1}(K)", pi == H, witness={"pi": str(pi), "H": str(H)})
        rep.result["kan"] = rows


def cmd_wbar(args, rep: RunReport):
    try:
        G = loopgroup.parse_group(_require(args.group, "--group"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    depth = args.depth if args.depth is not None else 3
    for rec in loopgroup.check_principal_fibration(G, depth):
        rep.check(rec["name"], rec["status"] == "pass", witness=rec.get("witness"))
    bad = loopgroup.sset_check_group_identities(G, depth)
    rep.check("W and W-bar simplicial identities", not bad, witness=bad[:5] or None)
    B = loopgroup.wbar(G, depth)
    rep.result["nondegenerate_counts"] = [len(lv) for lv in B.nondeg]
    if args.homology:
        C = normalized_complex(B, depth)
        W = normalized_complex(loopgroup.w_total(G, depth), depth)
        rep.result["homology_wbar"] = [str(homology(C, n)) for n in range(depth)]
        rep.result["homology_w"] = [str(homology(W, n)) for n in range(depth)]


def cmd_integrate(args, rep: RunReport):
    w = RationalForm.from_json(_load(_require(args.form, "--form")))
    T = vanest.Triangulation.from_json(_load(_require(args.triangulation, "--triangulation")))
    problems = T.orientation_report()
    rep.check("triangulation oriented", not problems, witness=problems[:5] or None)
    if problems:
        return
    r = args.refine or 0
    Tr = vanest.refine(T, r)
    value = vanest.riemann_sum(w, Tr, args.cochain, check=False)
    rep.result.update({"value": str(value), "float": float(value), "refine": r, "cochain": args.cochain, "simplices": len(Tr.tops)})


def _cochain(args):
    return deligne.cochain_from_json(_load(_require(args.input, "--input")))


def cmd_deligne(args, rep: RunReport):
    action = args.action
    cover, c = _cochain(args)
    problems = cover.check_consistency()
    rep.check("cover inclusions compose", not problems, witness=problems[:5] or None)
    if action == "verify":
        if args.degree is not None and args.degree != c.degree:
            raise InputError(f"--degree {args.degree} but the input has degree {c.degree}")
        recs = deligne.verify_cocycle(cover, c, samples=args.samples or 200, tol=args.tol or 1e-9, seed=args.seed)
        for r in recs:
            rep.checks.append(r)
    elif action == "chern":
        loop = _load(args.loop) if args.loop else fixtures.equator_loop()
        try:
            circ = loop["circle"]
            gamma = deligne.circle_loop([float(Fraction(str(x))) for x in circ["center"]], float(Fraction(str(circ["radius"]))))
            res = deligne.chern_number(cover, c, gamma, loop.get("overlap"), int(args.samples or loop.get("samples", 256)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed loop JSON: {exc!r}") from exc
        rep.check("chern number near an integer", not res["flag"], residual=res["deviation"])
        rep.result.update(res)
    elif action == "holonomy":
        data = _load(args.path) if args.path else deligne.equator_path().to_json()
        try:
            path = deligne.ChartPath.from_json(data)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed path JSON: {exc!r}") from exc
        h = deligne.holonomy(cover, c, path)
        rep.result.update({"re": h.real, "im": h.imag, "abs": abs(h)})
        rep.check("holonomy has unit modulus", abs(abs(h) - 1) < 1e-9, residual=abs(abs(h) - 1))


def cmd_fixtures(args, rep: RunReport):
    names = fixtures.NAMES if args.name == "all" else [args.name]
    out = Path(args.out or ".")
    written = []
    for n in names:
        try:
            written.append(str(fixtures.write_fixture(n, out)))
        except KeyError as exc:
            raise InputError(exc.args[0]) from exc
        except AssertionError as exc:
            rep.check(f"fixture {n}", False, witness=str(exc))
            continue
        rep.check(f"fixture {n}", True)
    rep.result["written"] = written


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simplicial-holonomy", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--input")
        return sp

    h = common(sub.add_parser("homology", help="integral homology of a complex or simplicial set"))
    h.add_argument("--max-dim", type=int, default=2)

    s = common(sub.add_parser("subdivide", help="barycentric subdivision and its identities"))
    s.add_argument("--selftest", action="store_true")
    s.add_argument("--refine", type=int)

    lg = common(sub.add_parser("loopgroup", help="Kan loop group of a reduced simplicial set"))
    lg.add_argument("--basepoint")
    lg.add_argument("--depth", type=int)
    lg.add_argument("--check-kan", action="store_true")

    wb = common(sub.add_parser("wbar", help="W and W-bar of a finite constant group"))
    wb.add_argument("--group")
    wb.add_argument("--depth", type=int)
    wb.add_argument("--homology", action="store_true")

    it = common(sub.add_parser("integrate", help="Riemann sums of a form over a triangulation"))
    it.add_argument("--form")
    it.add_argument("--triangulation")
    it.add_argument("--cochain", choices=["taylor", "exact"], default="taylor")
    it.add_argument("--refine", type=int)

    dl = sub.add_parser("deligne", help="Cech-Deligne cocycles: verify, chern, holonomy")
    dl.add_argument("action", choices=["verify", "chern", "holonomy"])
    common(dl)
    dl.add_argument("--degree", type=int, choices=[1, 2])
    dl.add_argument("--samples", type=int)
    dl.add_argument("--tol", type=float)
    dl.add_argument("--loop")
    dl.add_argument("--path")

    fx = sub.add_parser("fixtures", help="write a built-in fixture as JSON")
    fx.add_argument("name", help="fixture name or 'all': " + ", ".join(fixtures.NAMES))
    fx.add_argument("--out")
    fx.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {
    "homology": cmd_homology,
    "subdivide": cmd_subdivide,
    "loopgroup": cmd_loopgroup,
    "wbar": cmd_wbar,
    "integrate": cmd_integrate,
    "deligne": cmd_deligne,
    "fixtures": cmd_fixtures,
}

_INPUT_ERRORS = (InputError, SimplicialError, deligne.CoverError, vanest.VanEstError, KeyError, ValueError)


def run(argv: list[str]) -> RunReport:
    args = build_parser().parse_args(argv)
    rep = RunReport(list(argv))
    try:
        COMMANDS[args.command](args, rep)
    except _INPUT_ERRORS as exc:
        rep.error = exc.args[0] if len(exc.args) == 1 and isinstance(exc.args[0], str) else repr(exc)
    return rep


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        rep = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    json.dump(rep.to_json(), sys.stdout, indent=1, sort_keys=True, default=str)
    sys.stdout.write("\n")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
