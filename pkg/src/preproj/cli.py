"""Command-line front end.

Subcommands: classify a quiver, print the Hilbert series of its doubled
presentation or the matrix closed form 1/(1 - Ct + D t^2), verify the two
agree, and run the Koszulity and integer-torsion reports.

Exit codes: 0 success or claim verified, 1 claim fails or is undetermined
(a witness or the blocking cap is printed), 2 malformed input.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .algebra import AlgebraError, GradedEngine, preprojective_presentation
from .field import FieldError, FieldSpec
from .koszul import koszulity_verdict
from .quiver import (
    DYNKIN,
    EXTENDED,
    QuiverError,
    adjacency_double,
    classify,
    find_extended_dynkin_subquiver,
    parse_quiver,
    relation_count_matrix,
)
from .series import EQUAL, closed_form, termwise_compare, to_json_obj, to_tsv
from .torsion import TorsionError, torsion_check

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str
    field: FieldSpec
    degree: int
    i_max: int
    d_max: int
    fmt: str
    seed: int | None


def _field_token(field: FieldSpec) -> str:
    """The --field notation, so reports can be fed back into flags."""
    return "q" if field.p is None else "f%d" % field.p


def _load(cfg: RunConfig):
    text = Path(cfg.path).read_text(encoding="utf-8")
    return parse_quiver(text)


def _emit(cfg: RunConfig, obj: dict, tsv_lines: list) -> None:
    if cfg.fmt == "json":
        if cfg.seed is not None:
            obj["seed"] = cfg.seed
        print(json.dumps(obj, sort_keys=True))
    else:
        if cfg.seed is not None:
            tsv_lines = ["seed\t%d" % cfg.seed] + tsv_lines
        sys.stdout.write("\n".join(tsv_lines) + "\n")


def cmd_classify(cfg: RunConfig) -> int:
    q = _load(cfg)
    cls = classify(q)
    obj = {"command": "classify", "connected": cls.connected,
           "verdict": cls.verdict, "label": cls.label}
    if not cls.connected:
        _emit(cfg, obj, ["disconnected"])
        return 0
    if cls.verdict == DYNKIN:
        line = "connected, Dynkin (%s)" % cls.label
    elif cls.verdict == EXTENDED:
        line = "connected, extended Dynkin (%s)" % cls.label
    else:
        sub = find_extended_dynkin_subquiver(q)
        obj["contains"] = classify(sub).label
        line = "connected, other (contains %s)" % obj["contains"]
    _emit(cfg, obj, [line])
    return 0


def _series_report(cfg: RunConfig, q, command: str, series) -> None:
    obj = {"command": command, "field": _field_token(cfg.field),
           "truncation": series.truncation,
           "vertices": list(q.vertices), "series": to_json_obj(series)}
    _emit(cfg, obj, [to_tsv(series).rstrip("\n")])


def cmd_hilbert(cfg: RunConfig) -> int:
    q = _load(cfg)
    pres = preprojective_presentation(q, cfg.field)
    h = GradedEngine(pres).series(cfg.degree)
    _series_report(cfg, q, "hilbert", h)
    return 0


def cmd_closed_form(cfg: RunConfig) -> int:
    q = _load(cfg)
    s = closed_form(adjacency_double(q), relation_count_matrix(q), cfg.degree)
    _series_report(cfg, q, "closed-form", s)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    q = _load(cfg)
    pres = preprojective_presentation(q, cfg.field)
    h = GradedEngine(pres).series(cfg.degree)
    s = closed_form(adjacency_double(q), relation_count_matrix(q), cfg.degree)
    cmp = termwise_compare(h, s)
    obj = {"command": "verify", "field": _field_token(cfg.field),
           "truncation": cfg.degree, "equal": cmp.relation == EQUAL,
           "witness": None}
    if cmp.relation == EQUAL:
        _emit(cfg, obj, [
            "verified: series equals the closed form through degree %d"
            % cfg.degree])
        return 0
    d, i, j = cmp.witness
    obj["witness"] = {"degree": d, "row": q.vertices[i], "col": q.vertices[j],
                      "computed": h[d][i][j], "closed_form": s[d][i][j]}
    _emit(cfg, obj, [
        "mismatch at degree %d entry (%s, %s): computed %d, closed form %d"
        % (d, q.vertices[i], q.vertices[j], h[d][i][j], s[d][i][j])])
    return 1


def cmd_koszul(cfg: RunConfig) -> int:
    q = _load(cfg)
    pres = preprojective_presentation(q, cfg.field)
    v = koszulity_verdict(pres, N=cfg.degree, i_max=cfg.i_max,
                          d_max=cfg.d_max)
    names = q.vertices
    wit_objs = []
    lines = []
    for w in v.witnesses:
        if w[0] == "series":
            d, r, c = w[1]
            wit_objs.append({"kind": "series", "degree": d,
                             "row": names[r], "col": names[c]})
            lines.append(
                "series differs from the closed form at degree %d entry"
                " (%s, %s)" % (d, names[r], names[c]))
        else:
            _, i, d, r, c = w
            wit_objs.append({"kind": "tor", "i": i, "degree": d,
                             "row": names[r], "col": names[c]})
            lines.append(
                "Tor_%d has a class in degree %d, block (%s, %s)"
                % (i, d, names[r], names[c]))
    obj = {"command": "koszul", "field": _field_token(cfg.field),
           "koszul": v.koszul, "complete": v.complete,
           "koszul_up_to": list(v.koszul_up_to),
           "series_degree": v.series_degree, "witnesses": wit_objs,
           "tor": [{"i": i, "degree": d, "matrix": [list(r) for r in M]}
                   for (i, d), M in sorted(v.tor.entries.items())]}
    if v.koszul:
        _emit(cfg, obj, ["Koszul up to (%d, %d)" % v.koszul_up_to,
                         "series equals the closed form through degree %d"
                         % v.series_degree])
        return 0
    if not lines:
        lines.append("undetermined: Tor cells skipped by the column cap: %s"
                     % ", ".join("(%d, %d)" % c for c in v.tor.partial))
    _emit(cfg, obj, ["not Koszul up to (%d, %d)" % v.koszul_up_to] + lines)
    return 1


def cmd_torsion(cfg: RunConfig) -> int:
    q = _load(cfg)
    rep = torsion_check(q, cfg.degree)
    names = q.vertices
    entries = []
    lines = ["degree\trow\tcol\tdivisors"]
    for e in rep.entries:
        entry = {"degree": e.degree, "row": names[e.row], "col": names[e.col],
                 "partial": e.partial,
                 "divisors": None if e.divisors is None else list(e.divisors)}
        if e.partial:
            entry["rank_q"] = e.rank_q
            entry["ranks_p"] = [list(pr) for pr in e.ranks_p]
            cell = "partial rank_q=%d %s" % (e.rank_q, " ".join(
                "rank_f%d=%d" % pr for pr in e.ranks_p))
        else:
            cell = " ".join(str(dv) for dv in e.divisors)
        entries.append(entry)
        lines.append("%d\t%s\t%s\t%s"
                     % (e.degree, names[e.row], names[e.col], cell))
    obj = {"command": "torsion", "truncation": rep.truncation,
           "torsion_found": rep.torsion_found,
           "witnesses": [[d, names[i], names[j], dv]
                         for d, i, j, dv in rep.witnesses],
           "primes": list(rep.primes), "entries": entries}
    if rep.torsion_found:
        for d, i, j, dv in rep.witnesses:
            lines.append("divisor %d at degree %d block (%s, %s)"
                         % (dv, d, names[i], names[j]))
        lines.append("torsion found")
    else:
        lines.append("no torsion")
    _emit(cfg, obj, lines)
    return 0 if not rep.torsion_found else 1


_COMMANDS = {
    "classify": cmd_classify,
    "hilbert": cmd_hilbert,
    "closed-form": cmd_closed_form,
    "verify": cmd_verify,
    "koszul": cmd_koszul,
    "torsion": cmd_torsion,
}


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="quiver description file")
    common.add_argument("--field", default="q", metavar="q|f<p>",
                        help="coefficient field (default q)")
    common.add_argument("--degree", type=_nonneg, default=10, metavar="N",
                        help="series truncation degree (default 10)")
    common.add_argument("--imax", type=_nonneg, default=3, metavar="I",
                        help="largest homological degree (default 3)")
    common.add_argument("--dmax", type=_nonneg, default=8, metavar="D",
                        help="largest internal degree for Tor (default 8)")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv",
                        help="output format (default tsv)")
    common.add_argument("--seed", type=int, default=None, metavar="S",
                        help="seed echoed into the report for reproducibility")
    p = argparse.ArgumentParser(
        prog="preproj",
        description="Preprojective algebras of quivers: Hilbert series, "
                    "closed forms, Koszulity, and integer torsion.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "classify": "connectivity and Dynkin / extended Dynkin / other",
        "hilbert": "Hilbert series of the doubled presentation to degree N",
        "closed-form": "the series 1/(1 - Ct + D_J t^2) to degree N",
        "verify": "compare the computed series with the closed form",
        "koszul": "series equality plus Tor concentration",
        "torsion": "Smith normal forms of the integer relation matrices",
    }
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.file, FieldSpec.parse(args.field),
                        args.degree, args.imax, args.dmax, args.format,
                        args.seed)
        return _COMMANDS[cfg.command](cfg)
    except (QuiverError, AlgebraError, FieldError, TorsionError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except UnicodeDecodeError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
