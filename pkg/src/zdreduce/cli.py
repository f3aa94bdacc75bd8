"""Command-line front end.

Input documents look like::

    # optional comments
    label example
    mod 6
    2 2
    1 1
    0 3

The ``label`` line is optional. Entries are reduced into ``[0, d)`` on load.
Exit codes: 0 success, 1 domain error, 2 parse error, 3 failed self-check.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InternalCheckError, ZdError
from .fringe import d_omega, fringe_report, gram
from .lagrangian import classify, lagrangian_canonical
from .linalg import Submodule, ZdMatrix, inverse, is_invertible
from .reduce import characteristic_sequence, d0
from .symplectic import SymplecticSpace, check_shape, is_symplectic_matrix, symplectic_reduce
from .zmod import Modulus

__all__ = ["MatrixDocument", "ParseError", "parse", "format_document", "run", "main", "COMMANDS"]

COMMANDS = ("reduce", "charseq", "symp-reduce", "classify", "lagrangian", "fringe", "nearly-symplectic")

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class MatrixDocument:
    modulus: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    label: Optional[str] = None

    def matrix(self) -> ZdMatrix:
        return ZdMatrix(self.entries, self.modulus, self.rows, self.cols)


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("+-").isdigit())
        raise ParseError(f"not an integer: {bad!r}", lineno) from None


def parse(text: str) -> MatrixDocument:
    lines = [(n, raw.split()) for n, raw in enumerate(text.splitlines(), 1)]
    lines = [(n, toks) for n, toks in lines if toks and not toks[0].startswith("#")]
    label = None
    if lines and lines[0][1][0] == "label":
        label = " ".join(lines[0][1][1:]) or None
        lines = lines[1:]
    if not lines or lines[0][1][0] != "mod" or len(lines[0][1]) != 2:
        raise ParseError("expected a header line 'mod <d>'", lines[0][0] if lines else None)
    n, toks = lines[0]
    (d,) = _ints(toks[1:], n)
    if d < 2:
        raise ParseError(f"modulus must satisfy d >= 2, got d < 2 ({d})", n)
    if len(lines) < 2 or len(lines[1][1]) != 2:
        raise ParseError("expected a shape line '<rows> <cols>'", lines[1][0] if len(lines) > 1 else n)
    n, toks = lines[1]
    rows, cols = _ints(toks, n)
    if rows < 0 or cols < 0:
        raise ParseError("negative shape", n)
    body = lines[2:]
    if cols == 0:
        # rows of a k x 0 matrix are blank lines, which carry no tokens
        if body:
            raise ParseError("a matrix without columns has no entry rows", body[0][0])
        return MatrixDocument(d, rows, 0, ((),) * rows, label)
    if len(body) != rows:
        where = body[rows][0] if len(body) > rows else (body[-1][0] if body else n)
        raise ParseError(f"expected {rows} rows of entries, found {len(body)}", where)
    entries = []
    for m, toks in body:
        values = _ints(toks, m)
        if len(values) != cols:
            raise ParseError(f"expected {cols} entries, found {len(values)}", m)
        entries.append(tuple(v % d for v in values))
    return MatrixDocument(d, rows, cols, tuple(entries), label)


def format_document(doc: MatrixDocument) -> str:
    out = []
    if doc.label:
        out.append(f"label {doc.label}")
    out.append(f"mod {doc.modulus}")
    out.append(f"{doc.rows} {doc.cols}")
    out += [" ".join(str(x) for x in row) for row in doc.entries]
    return "\n".join(out) + "\n"


def _fmt(M: ZdMatrix) -> str:
    if not M.rows or not M.cols:
        return f"  ({M.rows}x{M.cols} empty)"
    return "\n".join("  " + line for line in str(M).splitlines())


def _symplectic_input(doc: MatrixDocument, factor: Optional[int], need_prime_power: bool):
    if doc.rows % 2:
        raise ZdError(f"symplectic commands need an even number of rows, got {doc.rows}")
    mod = Modulus(doc.modulus)
    B = doc.matrix()
    if factor is not None:
        q = mod.factor(factor).d
        B = B.reduce_mod(q)
    elif need_prime_power and not mod.is_prime_power:
        raise ZdError(f"d = {mod.d} is composite; select a Chinese factor with --factor p")
    return B, SymplecticSpace(doc.rows // 2, B.mod)


def run(command: str, doc: MatrixDocument, factor: Optional[int] = None, seed: Optional[int] = None,
        require_lagrangian: bool = False) -> tuple[dict, list[str], int]:
    """Execute one command; return the structured result, text lines and exit code."""
    if command not in COMMANDS:
        raise ZdError(f"unknown command {command!r}")
    B = doc.matrix()
    result = {
        "command": command,
        "modulus": doc.modulus,
        "input": [list(r) for r in doc.entries],
        "certificate": None,
        "flags": {},
        "rents": [],
        "signature": [],
    }
    lines: list[str] = []
    code = EXIT_OK

    if command in ("reduce", "charseq"):
        cert = d0(B)
        if not cert.verify() or not is_invertible(cert.L) or not is_invertible(cert.R):
            raise InternalCheckError("internal check failed: L B R != D")
        if command == "reduce":
            result["certificate"] = {"L": cert.L.tolist(), "R": cert.R.tolist(), "D": cert.D.tolist()}
            result["flags"] = {"verified": True, "divisibility_chain": cert.has_divisibility_chain()}
            lines += ["L =", _fmt(cert.L), "R =", _fmt(cert.R), "D =", _fmt(cert.D), "check L*B*R == D: ok"]
        else:
            seq = list(characteristic_sequence(Submodule(B)))
            result["flags"] = {"rank": len(seq)}
            result["sequence"] = seq
            lines.append("characteristic sequence: " + (" ".join(map(str, seq)) or "(empty)"))

    elif command == "symp-reduce":
        B, space = _symplectic_input(doc, factor, True)
        result["modulus"] = B.d
        cert = symplectic_reduce(B, space)
        if not cert.verify() or not is_symplectic_matrix(cert.L, space) or not check_shape(cert):
            raise InternalCheckError("internal check failed: symplectic certificate does not verify")
        result["certificate"] = {"L": cert.L.tolist(), "R": cert.R.tolist(), "D": cert.D.tolist()}
        result["rents"] = [{"row": r.row, "col": r.col, "pivot_below": r.pivot_below} for r in cert.rents]
        result["flags"] = {"verified": True, "symplectic": True, "shape_ok": True}
        lines += ["S =", _fmt(cert.L), "R =", _fmt(cert.R), "S*B*R =", _fmt(cert.D)]
        lines.append("check S^T J S == J and S*B*R: ok")
        if cert.rents:
            lines += [f"rent at row {r.row}, column {r.col} (pivot below {r.pivot_below})" for r in cert.rents]
        else:
            lines.append("no rents")

    elif command == "classify":
        B, space = _symplectic_input(doc, factor, False)
        result["modulus"] = B.d
        c = classify(Submodule(B), space)
        result["flags"] = dict(c.__dict__)
        lines += [f"{k}: {'yes' if v else 'no'}" for k, v in c.__dict__.items()]

    elif command == "lagrangian":
        B, space = _symplectic_input(doc, factor, False)
        result["modulus"] = B.d
        form = lagrangian_canonical(Submodule(B), space)
        result["flags"] = {"lagrangian": form is not None}
        if form is None:
            lines.append("not Lagrangian")
            if require_lagrangian:
                code = EXIT_DOMAIN
        else:
            result["signature"] = list(form.signature)
            result["certificate"] = {"L": form.S.tolist(), "R": None, "D": form.diagonal().tolist()}
            lines += ["signature: " + " ".join(map(str, form.signature)), "S =", _fmt(form.S)]

    elif command == "fringe":
        B, space = _symplectic_input(doc, factor, True)
        result["modulus"] = B.d
        S = Submodule(B)
        cert = d0(B)
        g = gram(inverse(cert.L), space)
        report = fringe_report(g, S)
        result["certificate"] = {"L": cert.L.tolist(), "R": cert.R.tolist(), "D": cert.D.tolist()}
        result["flags"] = {"good": report.good, "nice": report.nice}
        result["report"] = report.as_dict()
        result["discriminant"] = g.discriminant
        lines += ["Gram matrix of the columns of L^-1 =", _fmt(g.G), f"discriminant: {g.discriminant}"]
        lines += _report_lines(report)

    elif command == "nearly-symplectic":
        B, space = _symplectic_input(doc, factor, False)
        result["modulus"] = B.d
        S = Submodule(B)
        res = d_omega(S, space)
        if seed is not None:
            rng = random.Random(seed)
            again = d_omega(S, space, choose=rng.choice)
            if again.success != res.success:
                raise InternalCheckError("internal check failed: the verdict depends on the pivot choice")
        result["flags"] = {"nearly_symplectic": res.success}
        if res.success:
            if not is_symplectic_matrix(res.basis, space):
                raise InternalCheckError("internal check failed: witness basis is not symplectic")
            result["certificate"] = {"L": res.basis.tolist(), "R": res.permutation.tolist(), "D": res.D.tolist()}
            lines += ["YES", "symplectic basis =", _fmt(res.basis), "permutation =", _fmt(res.permutation)]
            lines += ["D =", _fmt(res.D)]
        else:
            result["report"] = res.report.as_dict()
            lines.append(f"NO (fringe not nice in the factor of p = {res.failed_prime})")
            lines += _report_lines(res.report)
    return result, lines, code


def _report_lines(report) -> list[str]:
    K = " ".join("{" + ",".join(map(str, k)) + "}" for k in report.K)
    fr = "undefined" if report.scalar_fringe is None else str(report.scalar_fringe)
    return [
        f"K: {K}",
        "kappa: " + " ".join(map(str, report.kappa)),
        f"scalar fringe: {fr}",
        f"good: {'yes' if report.good else 'no'}",
        f"nice: {'yes' if report.nice else 'no'}",
        f"pivot: {report.pivot if report.pivot else 'none'}",
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zdreduce", description="Exact matrix reductions over Z/dZ.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", default="-", help="matrix document, '-' for stdin")
    parser.add_argument("--json", action="store_true", help="emit a JSON object instead of text")
    parser.add_argument("--factor", type=int, metavar="P", help="work in the Chinese factor of the prime P")
    parser.add_argument("--seed", type=int, help="seed for randomized self-tests")
    parser.add_argument("--require-lagrangian", action="store_true", help="exit 1 when the module is not Lagrangian")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        doc = parse(text)
    except (OSError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result, lines, code = run(args.command, doc, args.factor, args.seed, args.require_lagrangian)
    except InternalCheckError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ZdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.json:
        print(json.dumps(result, sort_keys=True))
    else:
        header = f"{args.command} over Z_{result['modulus']}" + (f" [{doc.label}]" if doc.label else "")
        print("\n".join([header] + lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
