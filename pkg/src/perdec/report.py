"""Rendering helpers for reports: delay notation, block grids, exact JSON.

Text output prints ring elements in negative powers of z (the delay
operator), matching the usual display convention for sampled systems.
Machine output keeps every number exact: integers stay integers, other
rationals become "p/q" strings, and rational functions become coefficient
arrays in ascending powers of z.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .poly import Poly
from .ratfun import RatFun
from .ratmat import RatMat


def frac_str(x: Fraction) -> str:
    return str(x)


def zinv_str(x: RatFun) -> str:
    """Delay-operator display, e.g. "1 - 4z^-2"; plain fraction otherwise."""
    if not x:
        return "0"
    den = x.den
    if den.low_power() != den.deg:
        # poles away from the origin stay in num/den form
        return x.to_str("z")
    c = den.lead
    k = den.deg
    parts = []
    for i in range(x.num.deg, -1, -1):
        a = x.num.c[i]
        if not a:
            continue
        e = i - k
        a = a / c
        if e == 0:
            body = frac_str(abs(a))
        else:
            base = "z" if e == 1 else f"z^{e}"
            mag = abs(a)
            if mag == 1:
                body = base
            elif mag.denominator == 1:
                body = frac_str(mag) + base
            else:
                body = f"({frac_str(mag)}){base}"
        if not parts:
            parts.append(body if a > 0 else "-" + body)
        else:
            parts.append(("+ " if a > 0 else "- ") + body)
    return " ".join(parts)


def _grid(cells: list[list[str]], row_block: int = 0, col_block: int = 0) -> list[str]:
    if not cells or not cells[0]:
        return ["[]"]
    ncol = len(cells[0])
    widths = [max(len(row[c]) for row in cells) for c in range(ncol)]
    body = []
    for row in cells:
        pieces = []
        for c, cell in enumerate(row):
            if col_block and c and c % col_block == 0:
                pieces.append("|")
            pieces.append(cell.rjust(widths[c]))
        body.append("[ " + "  ".join(pieces) + " ]")
    if row_block and row_block < len(body):
        rule = "-" * len(body[0])
        out = []
        for r, line in enumerate(body):
            if r and r % row_block == 0:
                out.append(rule)
            out.append(line)
        return out
    return body


def ratmat_lines(mat: RatMat, row_block: int = 0, col_block: int = 0) -> list[str]:
    cells = [[zinv_str(mat[r, c]) for c in range(mat.cols)] for r in range(mat.rows)]
    return _grid(cells, row_block, col_block)


def frac_lines(mat: Sequence[Sequence[Fraction]]) -> list[str]:
    cells = [[frac_str(x) for x in row] for row in mat]
    return _grid(cells)


def poly_rows_str(rows: Sequence[Sequence[Poly]]) -> str:
    blocks = ["[" + ", ".join(x.to_str() for x in blk) + "]" for blk in rows]
    return " ".join(blocks)


def int_rows_str(rows: Sequence[Sequence[int]]) -> str:
    return " ".join("[" + ", ".join(str(v) for v in blk) + "]" for blk in rows)


# ---------------------------------------------------------------- machine


JsonNum = Union[int, str]


def machine_frac(x: Fraction) -> JsonNum:
    if x.denominator == 1:
        return int(x)
    return str(x)


def machine_poly(p: Poly) -> list[JsonNum]:
    return [machine_frac(c) for c in p.c]


def machine_ratfun(x: RatFun) -> dict:
    return {"num": machine_poly(x.num), "den": machine_poly(x.den)}


def machine_ratmat(mat: RatMat) -> list:
    return [
        [machine_ratfun(mat[r, c]) for c in range(mat.cols)] for r in range(mat.rows)
    ]


def machine_frac_mat(mat: Sequence[Sequence[Fraction]]) -> list:
    return [[machine_frac(x) for x in row] for row in mat]


def machine_poly_rows(rows: Sequence[Sequence[Poly]]) -> list:
    return [[machine_poly(x) for x in blk] for blk in rows]


def machine_int_rows(rows: Sequence[Sequence[int]]) -> list:
    return [list(blk) for blk in rows]
