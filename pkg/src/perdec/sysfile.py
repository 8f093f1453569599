"""JSON serialization of periodic systems and gain schedules.

Matrix entries are integers or fraction strings like "-4/3"; matrices are
nested lists, one matrix per phase.  A system document may also carry a
stabilizing feedback schedule and solver options.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import ParseError, ShapeError
from .periodic import FeedbackLaw, PeriodicSystem


def _parse_entry(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise ParseError(f"{where}: matrix entries must be numbers, not booleans")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"{where}: {e}") from None
    if isinstance(v, float):
        raise ParseError(f"{where}: refusing float {v!r}: use an exact string like \"1/3\"")
    raise ParseError(f"{where}: bad matrix entry {v!r}")


def _parse_mats(obj, key: str) -> list[list[list[Fraction]]]:
    if key not in obj:
        raise ParseError(f"missing key {key!r}")
    mats = obj[key]
    if not isinstance(mats, list):
        raise ParseError(f"{key}: expected a list of matrices")
    out = []
    for t, mat in enumerate(mats):
        if not isinstance(mat, list) or any(not isinstance(r, list) for r in mat):
            raise ParseError(f"{key}[{t}]: expected a nested list")
        out.append(
            [
                [_parse_entry(v, f"{key}[{t}][{r}][{c}]") for c, v in enumerate(row)]
                for r, row in enumerate(mat)
            ]
        )
    return out


def _dump_entry(x: Fraction) -> Union[int, str]:
    return int(x) if x.denominator == 1 else str(x)


def _dump_mats(mats) -> list:
    return [[[_dump_entry(v) for v in row] for row in mat] for mat in mats]


def system_from_dict(obj: dict) -> PeriodicSystem:
    mats = [_parse_mats(obj, k) for k in "ABCD"]
    try:
        sys = PeriodicSystem(*mats)
    except ShapeError:
        raise
    except ValueError as e:
        raise ShapeError(str(e)) from None
    for key, actual in (("period", sys.T), ("inputs", sys.m), ("outputs", sys.p)):
        if key in obj and obj[key] != actual:
            raise ShapeError(f"{key} declared {obj[key]} but matrices give {actual}")
    if "dims" in obj and list(obj["dims"]) != sys.dims:
        raise ShapeError(f"dims declared {obj['dims']} but matrices give {sys.dims}")
    return sys


def system_to_dict(sys: PeriodicSystem) -> dict:
    return {
        "period": sys.T,
        "dims": list(sys.dims),
        "inputs": sys.m,
        "outputs": sys.p,
        "A": _dump_mats(sys.A),
        "B": _dump_mats(sys.B),
        "C": _dump_mats(sys.C),
        "D": _dump_mats(sys.D),
    }


class SystemDocument:
    """A parsed system file: the system plus optional extras."""

    __slots__ = ("system", "stabilizing", "options")

    def __init__(
        self,
        system: PeriodicSystem,
        stabilizing: Optional[FeedbackLaw] = None,
        options: Optional[dict] = None,
    ):
        self.system = system
        self.stabilizing = stabilizing
        self.options = dict(options or {})


def document_from_dict(obj: dict) -> SystemDocument:
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    sys = system_from_dict(obj)
    law = None
    if "stabilizing_feedback" in obj:
        sf = obj["stabilizing_feedback"]
        if not isinstance(sf, dict):
            raise ParseError("stabilizing_feedback: expected an object with F and G")
        F = _parse_mats(sf, "F")
        G = _parse_mats(sf, "G")
        if len(F) != sys.T or len(G) != sys.T:
            raise ShapeError("stabilizing_feedback must cover one full period")
        law = FeedbackLaw(F, G)
    options = {}
    if "options" in obj:
        opts = obj["options"]
        if not isinstance(opts, dict):
            raise ParseError("options: expected an object")
        for key in ("horizon", "step10_bound"):
            if key in opts:
                if not isinstance(opts[key], int) or isinstance(opts[key], bool):
                    raise ParseError(f"options.{key}: expected an integer")
                options[key] = opts[key]
    return SystemDocument(sys, law, options)


def document_to_dict(doc: SystemDocument) -> dict:
    out = system_to_dict(doc.system)
    if doc.stabilizing is not None:
        out["stabilizing_feedback"] = {
            "F": _dump_mats(doc.stabilizing.F),
            "G": _dump_mats(doc.stabilizing.G),
        }
    if doc.options:
        out["options"] = dict(doc.options)
    return out


def _load_json(path: Union[str, Path]):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def load_system(path: Union[str, Path]) -> PeriodicSystem:
    return system_from_dict(_load_json(path))


def load_document(path: Union[str, Path]) -> SystemDocument:
    return document_from_dict(_load_json(path))


def save_system(sys: PeriodicSystem, path: Union[str, Path]):
    Path(path).write_text(json.dumps(system_to_dict(sys), indent=2) + "\n")


def save_document(doc: SystemDocument, path: Union[str, Path]):
    Path(path).write_text(json.dumps(document_to_dict(doc), indent=2) + "\n")


def gains_from_dict(obj: dict) -> tuple[list, list]:
    F = _parse_mats(obj, "F")
    G = _parse_mats(obj, "G")
    if len(F) != len(G):
        raise ShapeError("F and G must cover the same period")
    return F, G


def gains_to_dict(F: Sequence, G: Sequence) -> dict:
    return {"period": len(F), "F": _dump_mats(F), "G": _dump_mats(G)}


def load_gains(path: Union[str, Path]) -> tuple[list, list]:
    return gains_from_dict(_load_json(path))


def save_gains(F: Sequence, G: Sequence, path: Union[str, Path]):
    Path(path).write_text(json.dumps(gains_to_dict(F, G), indent=2) + "\n")
