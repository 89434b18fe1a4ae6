"""Command-line front end.

Exit status: 0 on success, 2 when a result is inconclusive (uncertified),
1 on input errors. Errors go to standard error.

Seeds are written left to right starting at heap -max(S): the first symbol
of ``--seed`` is position -max(S), the last is position -1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import asdict
from importlib import resources

from . import __version__
from .core import (
    Ruleset,
    RulesetError,
    Seed,
    austin_adjoin_check,
    bipartite_check,
    certify_periodicity,
    default_horizon,
    expansion_set,
    fnv1a64,
    grundy,
    grundy_certificate,
    misere_outcomes,
    misere_seed_divergence,
    outcome_certificate,
    outcomes,
)
from .fes import (
    CONJECTURES,
    FesRuleset,
    conjecture_harness,
    detect_arithmetic_periodicity,
    fes_closed_form,
    fes_grundy,
)
from .search import (
    FAMILIES,
    FamilySpec,
    classify_three_move,
    family_eval,
    record_holders,
    zhang_scan,
)
from .twod import Ruleset2D, line_periodicity, outcomes2d, render_pgm


class ParseError(RulesetError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_INT = re.compile(r"\s*(-?\d+)\s*")
_PAIR = re.compile(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*")


def _parse_ints(text: str, offset: int) -> list[int]:
    values, seen, pos = [], set(), 0
    while True:
        m = _INT.match(text, pos)
        if not m:
            raise ParseError(f"malformed token {text[pos:pos + 8]!r}", offset + pos)
        v = int(m.group(1))
        if v <= 0:
            raise ParseError(f"moves must be positive, got {v}", offset + m.start(1))
        if v in seen:
            raise ParseError(f"duplicate move {v}", offset + m.start(1))
        seen.add(v)
        values.append(v)
        pos = m.end()
        if pos == len(text):
            return values
        if text[pos] != ",":
            raise ParseError(f"expected ',' but found {text[pos]!r}", offset + pos)
        pos += 1


def parse_ruleset(text: str) -> Ruleset | Ruleset2D | FesRuleset:
    """``"2,5,7"`` -> Ruleset, ``"(2,6),(3,3)"`` -> Ruleset2D, ``"!2,4"`` -> FesRuleset."""
    if not text or not text.strip():
        raise ParseError("empty ruleset", 0)
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if stripped.startswith("!"):
        return FesRuleset(tuple(sorted(_parse_ints(stripped[1:], lead + 1))))
    if stripped.startswith("("):
        pairs, seen, pos = [], set(), 0
        while True:
            m = _PAIR.match(stripped, pos)
            if not m:
                raise ParseError(f"malformed 2-d move {stripped[pos:pos + 10]!r}", lead + pos)
            a, b = int(m.group(1)), int(m.group(2))
            if a < 0 or b < 0 or (a, b) == (0, 0):
                raise ParseError(f"invalid 2-d move ({a},{b})", lead + m.start())
            if (a, b) in seen:
                raise ParseError(f"duplicate move ({a},{b})", lead + m.start())
            seen.add((a, b))
            pairs.append((a, b))
            pos = m.end()
            if pos == len(stripped):
                return Ruleset2D(tuple(pairs))
            if stripped[pos] != ",":
                raise ParseError(f"expected ',' but found {stripped[pos]!r}", lead + pos)
            pos += 1
    return Ruleset(tuple(sorted(_parse_ints(stripped, lead))))


def format_ruleset(S) -> str:
    if isinstance(S, FesRuleset):
        return "!" + ",".join(map(str, S.excluded))
    if isinstance(S, Ruleset2D):
        return ",".join(f"({a},{b})" for a, b in S.moves)
    return ",".join(map(str, S.moves))


def _one_d(text: str) -> Ruleset:
    S = parse_ruleset(text)
    if not isinstance(S, Ruleset):
        raise RulesetError(f"expected a 1-d ruleset like 2,5,7, got {text!r}")
    return S


def _two_d(text: str) -> Ruleset2D:
    S = parse_ruleset(text)
    if not isinstance(S, Ruleset2D):
        raise RulesetError(f"expected a 2-d ruleset like (2,6),(3,3), got {text!r}")
    return S


def _fes(text: str) -> FesRuleset:
    S = parse_ruleset(text)
    if not isinstance(S, FesRuleset):
        raise RulesetError(f"expected an excluded set like !2,4, got {text!r}")
    return S


def parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text or "")
    if not m:
        raise RulesetError(f"range must look like A..B, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise RulesetError(f"empty range {text!r}")
    return range(a, b + 1)


def _hex(d: int) -> str:
    return f"{d:016x}"


class Result:
    """What a subcommand produced, before formatting."""

    def __init__(self, fields: dict, text: str, certified: bool | None = True,
                 table: tuple[list[str], list[list]] | None = None,
                 image: bytes | None = None):
        self.fields, self.text, self.certified = fields, text, certified
        self.table, self.image = table, image


def _cert_text(c) -> str:
    flag = "certified" if c.certified else "NOT certified"
    return f"preperiod {c.preperiod}, period {c.period} ({flag}, horizon {c.horizon})"


# --- subcommands -----------------------------------------------------------------

def cmd_outcomes(args) -> Result:
    S = _one_d(args.ruleset)
    seq = outcomes(S, args.seed, args.horizon or 64)
    return Result({"symbols": seq.symbols, "digest": _hex(seq.digest()), "horizon": seq.horizon},
                  seq.symbols, None, (["x", "outcome"], [[i, c] for i, c in enumerate(seq.symbols)]))


def cmd_grundy(args) -> Result:
    S = _one_d(args.ruleset)
    seq = grundy(S, args.horizon or 64)
    vals = seq.values().tolist()
    return Result({"values": vals, "digest": _hex(seq.digest()), "horizon": seq.horizon},
                  " ".join(map(str, vals)), None, (["x", "nim_value"], list(map(list, enumerate(vals)))))


def _period_result(cert, seq) -> Result:
    fields = asdict(cert)
    fields["digest"] = _hex(seq.digest())
    return Result(fields, _cert_text(cert), cert.certified,
                  (["preperiod", "period", "certified", "horizon"],
                   [[cert.preperiod, cert.period, cert.certified, cert.horizon]]))


def cmd_period(args) -> Result:
    S = _one_d(args.ruleset)
    if args.nim:
        cert = grundy_certificate(S, args.horizon)
        return _period_result(cert, grundy(S, cert.horizon))
    cert = outcome_certificate(S, args.seed, args.horizon)
    return _period_result(cert, outcomes(S, args.seed, cert.horizon))


def cmd_seed_period(args) -> Result:
    if not args.seed:
        raise RulesetError("seed-period needs --seed")
    return cmd_period(args)


def cmd_misere(args) -> Result:
    S = _one_d(args.ruleset)
    h = args.horizon or 64
    seq = misere_outcomes(S, h)
    # certify on a longer run than the one displayed
    cert = certify_periodicity(misere_outcomes(S, max(h, default_horizon(S))))
    div = misere_seed_divergence(S, h)
    text = (f"{seq.symbols}\n{_cert_text(cert)}\n"
            f"first divergence from the N^min P^(max-min) seed: {div}")
    return Result({"symbols": seq.symbols, "certificate": asdict(cert),
                   "seed_divergence": div, "digest": _hex(seq.digest())},
                  text, cert.certified)


def cmd_expand(args) -> Result:
    S = _one_d(args.ruleset)
    horizon = args.horizon or max(1024, 8 * (args.bound + S.max_s))
    rep = expansion_set(S, args.bound, horizon)
    return Result({"adjoinable": rep.adjoinable, "unproven": rep.unproven, "horizon": horizon},
                  f"adjoinable: {rep.adjoinable}" + (f"\nunproven: {rep.unproven}" if rep.unproven else ""),
                  rep.certified, (["move"], [[c] for c in rep.adjoinable]))


def cmd_adjoin_check(args) -> Result:
    S = _one_d(args.ruleset)
    moves = austin_adjoin_check(S, args.horizon)
    return Result({"verified": moves}, f"verified adjoinable p-s moves: {moves}", True,
                  (["move"], [[c] for c in moves]))


def cmd_bipartite(args) -> Result:
    S = _one_d(args.ruleset)
    rep = bipartite_check(S, args.horizon)
    fields = {"applicable": rep.applicable, "bipartite": rep.bipartite,
              "ultimately_bipartite": rep.ultimately_bipartite, "onset": rep.onset,
              "certificate": asdict(rep.certificate)}
    text = (f"bipartite: {rep.bipartite if rep.applicable else 'n/a (gcd > 1)'}\n"
            f"ultimately bipartite: {rep.ultimately_bipartite} (onset {rep.onset})")
    return Result(fields, text, rep.ultimately_bipartite is not None)


def cmd_fes(args) -> Result:
    S = _fes(args.ruleset)
    h = args.horizon or 5000
    g = fes_grundy(S, h)
    det = detect_arithmetic_periodicity(g, min_window=min(1000, max(1, h // 4)))
    fields = {"detected": det.to_dict() if det else None,
              "digest": _hex(fnv1a64(g.astype("<u8").tobytes())), "horizon": h}
    text = ("no arithmetic periodicity found" if det is None else
            f"preperiod {det.preperiod}, period {det.period}, saltus {det.saltus} "
            f"(empirical over {det.window} terms)")
    if det:
        fields.update(preperiod=det.preperiod, period=det.period, saltus=det.saltus)
    if len(S.excluded) <= 2:
        cf = fes_closed_form(S, min(h, 5000))
        fields["closed_form"] = {"block": list(cf.block), "repetitions": cf.repetitions,
                                 "saltus": cf.saltus, "matches": cf.matches}
        text += f"\nclosed form ({''.join(map(str, cf.block))})^{cf.repetitions} + {cf.saltus}: " \
                f"{'matches' if cf.matches else 'MISMATCH'}"
    return Result(fields, text, det is not None,
                  (["preperiod", "period", "saltus"],
                   [[det.preperiod, det.period, det.saltus]] if det else []))


def cmd_fes_conjecture(args) -> Result:
    v = conjecture_harness(args.name, {"a": args.a, "b": args.b}, args.horizon or 50_000)
    text = f"{v.name} {v.parameters} S={list(v.excluded)} case={v.case}: {v.status}"
    if v.witness is not None:
        text += f" (witness n={v.witness})"
    return Result({"verdict": v.to_dict()}, text, v.status != "inconclusive")


def cmd_family(args) -> Result:
    if args.name in FAMILIES:
        f = FAMILIES[args.name]
    elif args.moves:
        f = FamilySpec.parse(args.name, args.moves, outcome_period=args.predict_period,
                             nim_period=args.predict_nim_period,
                             outcome_preperiod=args.predict_preperiod)
    else:
        raise RulesetError(f"unknown family {args.name!r}; known: {sorted(FAMILIES)} "
                           "(or give --moves)")
    ns = parse_range(args.range) if args.range else range(1, 4)
    rows = family_eval(f, ns, args.horizon)
    out, lines, table = [], [], []
    for r in rows:
        d = {"n": r.n, "ruleset": list(r.ruleset) if r.ruleset else None,
             "outcome": asdict(r.outcome) if r.outcome else None,
             "nim": asdict(r.nim) if r.nim else None,
             "predicted": r.predicted, "checks": r.checks}
        out.append(d)
        oc = f"({r.outcome.preperiod},{r.outcome.period})" if r.outcome else "-"
        nc = f"({r.nim.preperiod},{r.nim.period})" if r.nim else "-"
        lines.append(f"n={r.n} S={d['ruleset']} outcome={oc} nim={nc} "
                     f"predicted={r.predicted} checks={r.checks}")
        table.append([r.n, " ".join(map(str, r.ruleset or ())), oc, nc,
                      json.dumps(r.predicted), json.dumps(r.checks)])
    certified = all(r.outcome is None or r.outcome.certified for r in rows)
    return Result({"family": f.name, "rows": out}, "\n".join(lines), certified,
                  (["n", "ruleset", "outcome", "nim", "predicted", "checks"], table))


def cmd_records(args) -> Result:
    rng = parse_range(args.range) if args.range else range(args.k, 8)
    t = record_holders(rng, args.k, args.filter, args.horizon, args.threads)
    lines = [f"max_s={r.max_s} S={list(r.ruleset)} outcome=({r.outcome_preperiod},{r.outcome_period}) "
             f"nim=({r.nim_preperiod},{r.nim_period})" for r in t.rows]
    skipped = {m: c for m, c in t.uncertified.items() if c}
    if skipped:
        lines.append(f"uncertified (excluded): {skipped}")
    return Result(t.to_dict(), "\n".join(lines), not skipped,
                  (list(t.CSV_COLUMNS), t.csv_rows()))


def cmd_classify3(args) -> Result:
    s3 = args.s3
    s1 = parse_range(args.s1) if args.s1 else range(1, s3)
    s2 = parse_range(args.s2) if args.s2 else range(1, s3)
    cg = classify_three_move(s3, s1, s2, args.horizon, args.threads)
    counts = cg.counts()
    text = "\n".join(f"{k}: {v}" for k, v in counts.items() if v)
    rows = [[a, b, cg.labels[i][j], cg.periods[i][j]]
            for i, b in enumerate(cg.s2_values) for j, a in enumerate(cg.s1_values)]
    image = render_pgm(cg) if args.format == "pgm" else None
    return Result({"s3": s3, "counts": counts, "cells": rows}, text,
                  counts["unknown"] == 0, (["s1", "s2", "label", "period"], rows), image)


def cmd_zhang(args) -> Result:
    S = _one_d(args.ruleset)
    cs = parse_range(args.range) if args.range else range(1, 50)
    z = zhang_scan(S, args.residue, args.modulus, cs, args.horizon)

    def fitd(f):
        return {k: (asdict(v) if v else None) for k, v in f.items()}

    fields = {"base_period": z.base_period, "threshold": z.threshold,
              "rows": [list(r) for r in z.rows], "excluded": z.excluded,
              "fit_all": fitd(z.fit_all), "fit_large": fitd(z.fit_large)}
    text = "\n".join(f"c={c} preperiod={l} period={p}" for c, l, p in z.rows)
    fa = z.fit_all["period"]
    if fa:
        text += f"\nperiod ~ {fa.slope:.4g} c + {fa.intercept:.4g} (max deviation {fa.max_deviation:.3g})"
    return Result(fields, text, not z.excluded, (["c", "preperiod", "period"], [list(r) for r in z.rows]))


def cmd_grid2d(args) -> Result:
    S = _two_d(args.ruleset)
    g = outcomes2d(S, args.width, args.height, args.threads)
    fields = {"width": g.width, "height": g.height, "digest": _hex(g.digest()),
              "p_positions": int(g.bits.sum())}
    text = f"{g.width}x{g.height} grid, {fields['p_positions']} P-positions, digest {fields['digest']}"
    for key, kw in (("row", args.row), ("column", args.column)):
        if kw is None:
            continue
        lp = line_periodicity(g, **{key: kw})
        fields[key] = {"index": kw, "fit": asdict(lp) if lp else None}
        text += f"\n{key} {kw}: " + (f"preperiod {lp.preperiod}, period {lp.period} (empirical)"
                                     if lp else "not found")
    image = render_pgm(g) if args.format == "pgm" else None
    return Result(fields, text, None, None, image)


def cmd_render(args) -> Result:
    if not args.out:
        raise RulesetError("render needs --out PATH")
    args.format = "pgm"
    return cmd_grid2d(args)


COMMANDS = {
    "outcomes": cmd_outcomes, "grundy": cmd_grundy, "period": cmd_period,
    "misere": cmd_misere, "seed-period": cmd_seed_period, "expand": cmd_expand,
    "adjoin-check": cmd_adjoin_check, "bipartite": cmd_bipartite, "fes": cmd_fes,
    "fes-conjecture": cmd_fes_conjecture, "family": cmd_family, "records": cmd_records,
    "classify3": cmd_classify3, "zhang": cmd_zhang, "grid2d": cmd_grid2d, "render": cmd_render,
}
IMAGE_COMMANDS = {"classify3", "grid2d", "render"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, help="horizon, or certification cap for period searches")
    common.add_argument("--threads", type=int, default=1, help="worker count (search commands)")
    common.add_argument("--format", choices=["text", "json", "csv", "pgm"], default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="finsub", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"finsub {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, ruleset=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if ruleset:
            sp.add_argument("ruleset")
        return sp

    for name, h in (("outcomes", "outcome sequence"), ("period", "certified (preperiod, period)"),
                    ("seed-period", "certified period under a terminal seed")):
        sp = add(name, h)
        sp.add_argument("--seed", help="P/N string, first symbol = heap -max(S)")
        if name == "period":
            sp.add_argument("--nim", action="store_true", help="certify nim-values instead of outcomes")
    sub.choices["seed-period"].set_defaults(nim=False)
    add("grundy", "nim-value sequence")
    add("misere", "misere outcomes, compared with the misere seed")
    sp = add("expand", "moves adjoinable without changing the nim-sequence")
    sp.add_argument("--bound", type=int, default=30)
    add("adjoin-check", "verify Austin's p-s adjoinable moves")
    add("bipartite", "bipartite / ultimately bipartite check")
    add("fes", "all-but nim: arithmetic periodicity")
    sp = add("fes-conjecture", "all-but nim conjecture harness", ruleset=False)
    sp.add_argument("name", choices=sorted(CONJECTURES))
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp = add("family", "evaluate a parameterized family", ruleset=False)
    sp.add_argument("name")
    sp.add_argument("--range", help="n range A..B")
    sp.add_argument("--moves", help="affine moves, e.g. 5n-2,5n+3,10n+2")
    sp.add_argument("--predict-period")
    sp.add_argument("--predict-nim-period")
    sp.add_argument("--predict-preperiod")
    sp = add("records", "record holders by max move", ruleset=False)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--range", help="max_s range A..B")
    sp.add_argument("--filter", choices=["all", "max-symmetric"], default="all")
    sp = add("classify3", "3-move period classification grid", ruleset=False)
    sp.add_argument("--s3", type=int, required=True)
    sp.add_argument("--s1", help="range A..B")
    sp.add_argument("--s2", help="range A..B")
    sp = add("zhang", "adjoin one move c and fit (preperiod, period) in c")
    sp.add_argument("--residue", type=int, required=True)
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--range", help="c range A..B")
    for name in ("grid2d", "render"):
        sp = add(name, "2-d outcome grid" if name == "grid2d" else "2-d grid as a P5 image")
        sp.add_argument("--width", type=int, default=256)
        sp.add_argument("--height", type=int, default=256)
        sp.add_argument("--row", type=int)
        sp.add_argument("--column", type=int)
    return p


def _emit(result: Result, args, record: dict) -> None:
    fmt = args.format
    if fmt == "pgm":
        if result.image is None:
            raise RulesetError(f"{args.command} has no image output")
        if not args.out:
            raise RulesetError("--format pgm needs --out PATH")
        with open(args.out, "wb") as fh:
            fh.write(result.image)
        sys.stdout.write(result.text + f"\nwrote {args.out}\n")
        return
    if fmt == "json":
        payload = json.dumps(record, indent=2, sort_keys=False) + "\n"
    elif fmt == "csv":
        if result.table is None:
            raise RulesetError(f"{args.command} has no CSV output")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.table[0])
        w.writerows(result.table[1])
        payload = buf.getvalue()
    else:
        payload = result.text + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _echo(args) -> dict:
    skip = {"func", "command", "format", "out"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    if args.format == "pgm" and args.command not in IMAGE_COMMANDS:
        print(f"error: --format pgm is only for {sorted(IMAGE_COMMANDS)}", file=sys.stderr)
        return 1
    start = time.perf_counter()
    try:
        if getattr(args, "seed", None):
            args.seed = Seed(args.seed).symbols
        result = COMMANDS[args.command](args)
        record = {"command": args.command, "input": _echo(args), "version": __version__,
                  "wall_time_s": round(time.perf_counter() - start, 6),
                  "certified": result.certified}
        record.update(result.fields)
        _emit(result, args, record)
    except (RulesetError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 2 if result.certified is False else 0


def main_exit() -> None:
    sys.exit(main())


def load_schema() -> dict:
    return json.loads(resources.files("finsub").joinpath("schemas/result.schema.json").read_text())


if __name__ == "__main__":
    sys.exit(main())
