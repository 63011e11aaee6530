"""Command-line interface: ``amm <subcommand> [--g6 STR | --file PATH] ...``.

Exit status is 0 on success, 1 when a property check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator

import numpy as np

from . import analysis, census, spectral
from .commutant import average_mixing_exact, average_states, commutant_basis
from .graphs import Graph, Graph6Error, adjacency_matrix, parse_graph6, read_graph6_file, write_graph6
from .rational import RationalMatrix, format_rational

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _graphs(args) -> Iterator[Graph]:
    if args.g6 is not None:
        try:
            yield parse_graph6(args.g6)
        except (Graph6Error, UnicodeEncodeError) as exc:
            raise InputError(f"bad graph6 {args.g6!r}: {exc}") from None
    elif args.file is not None:
        try:
            for _, g in read_graph6_file(args.file):
                yield g
        except OSError as exc:
            raise InputError(str(exc)) from None
        except Graph6Error as exc:
            raise InputError(str(exc)) from None
    else:
        raise InputError("one of --g6 or --file is required")


def _label(g: Graph) -> str:
    return write_graph6(g).decode()


def _rational_rows(M: RationalMatrix, fmt: str) -> str:
    sep = "," if fmt == "csv" else " "
    return "".join(sep.join(r) + "\n" for r in M.to_strings())


def _float_rows(M: np.ndarray, fmt: str) -> str:
    sep = "," if fmt == "csv" else " "
    return "".join(sep.join(f"{x:.12g}" for x in r) + "\n" for r in M)


def _emit(out: list, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(out if len(out) != 1 else out[0], indent=2))


def cmd_matrix(args) -> int:
    payload = []
    for g in _graphs(args):
        amm = average_mixing_exact(commutant_basis(adjacency_matrix(g)))
        if args.format == "json":
            payload.append({"graph6": _label(g), **amm.to_json()})
        else:
            sys.stdout.write(_rational_rows(amm.matrix, args.format))
    _emit(payload, args.format)
    return EXIT_OK


def cmd_rank(args) -> int:
    payload = []
    for g in _graphs(args):
        n, rank, simple = census.census_graph(g)
        if args.format == "json":
            payload.append({"graph6": _label(g), "n": n, "rank": rank, "simple_spectrum": simple})
        elif args.format == "csv":
            print(f"{_label(g)},{n},{rank},{int(simple)}")
        else:
            print(rank)
    _emit(payload, args.format)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    payload = []
    for g in _graphs(args):
        A = adjacency_matrix(g)
        sd = spectral.decompose(A.to_numpy())
        amm = average_mixing_exact(commutant_basis(A))
        trace, amm_spec = analysis.amm_summary(amm)
        rec = {
            "graph6": _label(g),
            "adjacency_eigenvalues": [float(t) for t in sd.thetas],
            "multiplicities": list(sd.mults),
            "amm_trace": format_rational(trace),
            "amm_spectrum": amm_spec,
        }
        if args.format == "json":
            payload.append(rec)
        else:
            evs = " ".join(f"{t:.10g}^{m}" for t, m in zip(sd.thetas, sd.mults))
            print(f"A: {evs}")
            print(f"amm trace: {rec['amm_trace']}")
            print("amm spectrum: " + " ".join(f"{x:.10g}" for x in amm_spec))
    _emit(payload, args.format)
    return EXIT_OK


def cmd_states(args) -> int:
    payload = []
    for g in _graphs(args):
        states = average_states(commutant_basis(adjacency_matrix(g)))
        if args.format == "json":
            payload.append({"graph6": _label(g), "states": {str(s.vertex): s.matrix.to_strings() for s in states}})
        else:
            for s in states:
                print(f"vertex {s.vertex}:")
                sys.stdout.write(_rational_rows(s.matrix, args.format))
    _emit(payload, args.format)
    return EXIT_OK


def cmd_check(args) -> int:
    failed = False
    payload = []
    for g in _graphs(args):
        results = analysis.check_graph(g)
        failed |= not all(r.passed for r in results)
        if args.format == "json":
            payload.append({"graph6": _label(g), "checks": [r.__dict__ for r in results]})
        else:
            for r in results:
                status = "PASS" if r.passed else "FAIL"
                detail = f": {r.detail}" if (r.detail and not r.passed) else ""
                print(f"{status} {_label(g)} {r.name}{detail}")
    _emit(payload, args.format)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_walk(args) -> int:
    if args.t is None:
        raise InputError("walk needs --t")
    payload = []
    for g in _graphs(args):
        snap = spectral.mixing_snapshot(spectral.decompose(g.to_numpy()), args.t)
        if args.format == "json":
            payload.append({"graph6": _label(g), "t": args.t, "matrix": snap.matrix.tolist()})
        else:
            sys.stdout.write(_float_rows(snap.matrix, args.format))
    _emit(payload, args.format)
    return EXIT_OK


def cmd_avg(args) -> int:
    if args.T is None:
        raise InputError("avg needs --T")
    if args.T <= 0:
        raise InputError("--T must be positive")
    payload = []
    for g in _graphs(args):
        A = adjacency_matrix(g)
        sd = spectral.decompose(A.to_numpy())
        mbar = spectral.time_averaged_mixing(sd, args.T)
        exact = average_mixing_exact(commutant_basis(A)).matrix.to_numpy()
        dist = float(np.abs(mbar - exact).max())
        bound = spectral.convergence_constant(sd) / args.T
        if args.format == "json":
            payload.append({"graph6": _label(g), "T": args.T, "matrix": mbar.tolist(), "distance": dist, "bound": bound})
        else:
            sys.stdout.write(_float_rows(mbar, args.format))
            print(f"max |Mbar(T) - Mhat| = {dist:.6g}  (bound C/T = {bound:.6g})")
    _emit(payload, args.format)
    return EXIT_OK


def cmd_census(args) -> int:
    if (args.n is None) == (args.file is None):
        raise InputError("census needs exactly one of --n or --file")
    if args.n is not None:
        source = args.n
    else:
        source = args.file
    try:
        records = census.run_census(source, args.filter, jobs=args.jobs)
    except (ValueError, OSError) as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(census.emit_table(records, args.format))
    return EXIT_OK


COMMANDS = {
    "matrix": (cmd_matrix, "print the exact average mixing matrix"),
    "rank": (cmd_rank, "print the exact rank of the average mixing matrix"),
    "spectrum": (cmd_spectrum, "eigenvalues of A, and trace and spectrum of the average mixing matrix"),
    "states": (cmd_states, "print the average states"),
    "check": (cmd_check, "run every lemma property on the graph(s)"),
    "walk": (cmd_walk, "mixing matrix M(t) at time --t"),
    "avg": (cmd_avg, "time-averaged mixing matrix over [0, --T] and its distance to the limit"),
    "census": (cmd_census, "rank census of a corpus"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--g6", help="a single graph in graph6 format")
    src.add_argument("--file", help="file of graph6 records, one per line")
    common.add_argument("--format", choices=("csv", "json", "text"), default="text")
    common.add_argument("--t", type=float, help="time for `walk`")
    common.add_argument("--T", type=float, help="horizon for `avg`")
    common.add_argument("--n", type=int, help="order for the built-in enumerator (census)")
    common.add_argument("--filter", choices=[f.value for f in census.CensusFilter], default="all")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="amm", description="Average mixing matrices of continuous quantum walks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command][0](args)
    except InputError as exc:
        print(f"amm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
