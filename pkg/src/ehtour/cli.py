"""Command line entry point: ``ehtour <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import PartialDigraph, SearchBudgetExceeded, SizeLimitExceeded, Tournament, transitive_order
from .harness import ConfigError, load_config, run_experiment
from .keys import (
    KeyConstructionError,
    build_key,
    build_key_GK6,
    verify_key,
    verify_key_GK6,
)
from .recognize import grammar_names, recognize_decomposition
from .smooth import SmoothStructure, find_well_contained, verify_smooth


class CliError(Exception):
    pass


def _read_tournament(path: str) -> Tournament:
    try:
        return Tournament.from_text(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _parse_perm(text: str | None, n: int):
    if text is None:
        return None
    try:
        perm = [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise CliError("an ordering is a list of vertex indices") from exc
    if sorted(perm) != list(range(n)):
        raise CliError(f"ordering must be a permutation of 0..{n - 1}")
    return perm


def _recognize(t: Tournament, grammar: str, order, max_n: int | None):
    try:
        return recognize_decomposition(t, grammar, order, max_n=max_n)
    except (SizeLimitExceeded, SearchBudgetExceeded) as exc:
        raise CliError(str(exc)) from exc


def cmd_recognize(args) -> int:
    t = _read_tournament(args.file)
    w = _recognize(t, args.grammar, _parse_perm(args.ordering, t.n), args.max_n)
    print(json.dumps(None if w is None else w.to_dict(), sort_keys=True))
    return 0


def cmd_build_key(args) -> int:
    first = _read_tournament(args.n_file)
    if args.flavor == "nebula-galaxy":
        if args.g_file is None:
            raise CliError("the nebula-galaxy flavor needs both N and G files")
        g = _read_tournament(args.g_file)
        n_w = _recognize(first, "regular-super-nebula", _parse_perm(args.n_ordering, first.n), args.max_n)
        g_w = _recognize(g, "regular-delta-galaxy", _parse_perm(args.g_ordering, g.n), args.max_n)
        if n_w is None:
            raise CliError("N is not a regular super nebula")
        if g_w is None:
            raise CliError("G is not a regular delta-galaxy")
        key = build_key(first, n_w, g, g_w)
        report = verify_key(key, first, n_w, g, g_w)
    else:
        if args.g_file is not None:
            raise CliError("the gk6 flavor takes a single H file")
        h_w = _recognize(first, "regular-central-triangular-galaxy",
                         _parse_perm(args.n_ordering, first.n), args.max_n)
        if h_w is None:
            raise CliError("H is not a regular central triangular galaxy")
        key = build_key_GK6(first, h_w)
        report = verify_key_GK6(key, first, h_w)
    by_pos, labels = key.relabeled()
    side = key.sidecar()
    side["labels_by_position"] = labels
    side["mutant"] = key.mutant().relabel(key.ordering).to_text()
    side["report"] = report.to_dict()
    if args.output:
        Path(args.output).write_text(by_pos.to_text())
        Path(args.output + ".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(by_pos.to_text())
        print(json.dumps(side, sort_keys=True))
    return 0 if report.ok else 1


def _parse_bits(text: str) -> tuple[int, ...]:
    s = text.replace(",", "").replace(" ", "")
    if not s or set(s) - {"0", "1"}:
        raise CliError("--w must be a string of 0s and 1s")
    return tuple(int(ch) for ch in s)


def _read_partition(path: str) -> list[list[int]]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    try:
        return [[int(x) for x in line.split()] for line in lines if line.strip()]
    except ValueError as exc:
        raise CliError(f"{path}: sets are whitespace-separated vertex indices") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"not a rational number: {text}") from exc


def cmd_verify_smooth(args) -> int:
    t = _read_tournament(args.tournament)
    sets = _read_partition(args.partition)
    chi = SmoothStructure(t, sets, _parse_bits(args.w), _fraction(args.c), _fraction(args.lam))
    rep = verify_smooth(chi)
    print(json.dumps({"ok": rep.ok, "tr": rep.tr, "tr_note": rep.tr_note,
                      "violations": rep.violations}, sort_keys=True))
    return 0 if rep.ok else 1


def _load_structure(path: str) -> tuple[SmoothStructure, dict[int, int]]:
    """Read a JSON structure file.

    Keys: ``tournament`` (a file path relative to the structure file, or the
    text format inline), ``sets``, ``w``, ``c``, ``lambda`` and ``delta`` (run
    lengths keyed by 0-based index of the 1-entries of ``w``).
    """
    p = Path(path)
    try:
        d = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read structure {path}: {exc}") from exc
    src = d.get("tournament")
    if not isinstance(src, str):
        raise CliError("structure needs a 'tournament' entry")
    t = Tournament.from_text(src) if "\n" in src else _read_tournament(str(p.parent / src))
    w = tuple(int(x) for x in d["w"])
    sets = [[int(v) for v in s] for s in d["sets"]]
    delta = {int(k): int(v) for k, v in d.get("delta", {}).items()}
    if not delta:
        delta = {i: 1 for i, x in enumerate(w) if x == 1}
    chi = SmoothStructure(t, [transitive_order(t, s) if wi else s for s, wi in zip(sets, w)], w,
                          _fraction(str(d.get("c", "0"))), _fraction(str(d.get("lambda", "1"))))
    return chi, delta


def cmd_embed(args) -> int:
    chi, delta = _load_structure(args.structure)
    try:
        source = PartialDigraph.from_text(Path(args.mutant).read_text())
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read mutant {args.mutant}: {exc}") from exc
    rep = verify_smooth(chi)
    if not rep.ok:
        print(json.dumps({"embedding": None, "error": "structure is not smooth",
                          "violations": rep.violations}, sort_keys=True))
        return 1
    try:
        f = find_well_contained(chi, source, delta)
    except (SearchBudgetExceeded, ValueError) as exc:
        raise CliError(str(exc)) from exc
    out = None if f is None else {str(k): v for k, v in sorted(f.items())}
    print(json.dumps({"embedding": out}, sort_keys=True))
    return 0 if f is not None else 1


def cmd_experiment(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    summary = run_experiment(cfg)
    if cfg.output:
        print(json.dumps({"summary": summary}, sort_keys=True), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ehtour", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="decompose a tournament per a grammar")
    p.add_argument("--grammar", required=True, help="one of: " + ", ".join(grammar_names()))
    p.add_argument("--ordering", help="fixed ordering, vertex indices separated by commas or spaces")
    p.add_argument("--max-n", type=int, default=10, help="largest n for the search over orderings")
    p.add_argument("file")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("build-key", help="build a key tournament")
    p.add_argument("--flavor", choices=("nebula-galaxy", "gk6"), required=True)
    p.add_argument("--n-ordering", help="ordering for N (or H)")
    p.add_argument("--g-ordering", help="ordering for G")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("-o", "--output", help="key file; the sidecar goes to OUTPUT.json")
    p.add_argument("n_file")
    p.add_argument("g_file", nargs="?")
    p.set_defaults(func=cmd_build_key)

    p = sub.add_parser("verify-smooth", help="check a smooth (c, lambda, w)-structure")
    p.add_argument("--c", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--w", required=True, help="pattern bits, e.g. 010")
    p.add_argument("tournament")
    p.add_argument("partition", help="one set per line, in w order")
    p.set_defaults(func=cmd_verify_smooth)

    p = sub.add_parser("embed", help="find a well-contained copy of a mutant")
    p.add_argument("structure", help="JSON structure file")
    p.add_argument("mutant", help="partial digraph text file, vertex j at position j")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("experiment", help="run a seeded experiment")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, KeyConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
