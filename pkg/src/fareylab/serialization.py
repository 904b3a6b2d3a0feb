"""File formats: schedule.json, family JSON, lengths.csv, manifests.

Rationals are written as ``"num/den"`` strings; coefficients as JSON integers.
JSON is emitted with a fixed key order and a trailing newline so equal inputs
give byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .curve_algebra import ArcClass
from .intervals import format_rational, parse_rational
from .pairing import TestCurve
from .schedule import ConfigError, Eta, GrowthSchedule, ModelFunction

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

LENGTH_COLUMNS = ("k", "s", "delta_id", "length", "x", "y")


class FormatError(ValueError):
    """A malformed input file."""


def dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


# -- schedule ---------------------------------------------------------------

def schedule_to_json(s: GrowthSchedule) -> dict:
    return {
        "D": format_rational(s.D),
        "kmax": s.kmax,
        "floors": list(s.floors),
        "eta": s.eta.to_json(),
        "f1": s.f1.to_json(),
        "f2": s.f2.to_json(),
        "alpha_bound": format_rational(s.alpha_bound),
        "sides": {"even": list(s.coeffs[0::2]), "odd": list(s.coeffs[1::2])},
        "times": [format_rational(t) for t in s.times],
        "midtimes": [format_rational(t) for t in s.midtimes],
    }


def schedule_from_json(data: dict) -> GrowthSchedule:
    try:
        even, odd = data["sides"]["even"], data["sides"]["odd"]
        if not all(isinstance(e, int) for e in list(even) + list(odd)):
            raise FormatError("coefficients must be JSON integers")
        coeffs = [None] * (len(even) + len(odd))
        coeffs[0::2], coeffs[1::2] = even, odd
        sched = GrowthSchedule(
            D=parse_rational(data["D"]),
            kmax=int(data["kmax"]),
            coeffs=tuple(coeffs),
            floors=tuple(int(f) for f in data.get("floors", [])),
            f1=ModelFunction.from_json("f1", data["f1"]),
            f2=ModelFunction.from_json("f2", data["f2"]),
            eta=Eta.from_json(data.get("eta", {})),
            alpha_bound=parse_rational(data.get("alpha_bound", "1")),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"schedule is missing or mistypes a field: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, (FormatError, ConfigError)):
            raise
        raise FormatError(f"schedule has an invalid field: {exc}") from exc
    for name, stored, expected in (("times", data.get("times"), sched.times),
                                   ("midtimes", data.get("midtimes"), sched.midtimes)):
        if stored is not None and [parse_rational(t) for t in stored] != expected:
            raise FormatError(f"schedule field {name!r} disagrees with D")
    return sched


def save_schedule(s: GrowthSchedule, path) -> None:
    write_text(path, dumps(schedule_to_json(s)))


def load_schedule(path) -> GrowthSchedule:
    return schedule_from_json(read_json(path))


# -- families ---------------------------------------------------------------

def family_to_json(family: Sequence[TestCurve]) -> dict:
    return {"curves": [{"id": d.id,
                        "arcs0": [[a.a, a.b] for a in d.arcs0],
                        "arcs1": [[a.a, a.b] for a in d.arcs1]} for d in family]}


def family_from_json(data: dict) -> list[TestCurve]:
    curves = []
    try:
        for j, entry in enumerate(data["curves"]):
            cid = str(entry.get("id", f"delta{j}"))
            arcs = [tuple(ArcClass(int(a), int(b)) for a, b in entry.get(key, []))
                    for key in ("arcs0", "arcs1")]
            if not arcs[0] or not arcs[1]:
                raise FormatError(f"curve {cid} does not cross alpha (i(delta, alpha) = 0)")
            curves.append(TestCurve(arcs[0], arcs[1], cid))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed family: {exc}") from exc
    ids = [d.id for d in curves]
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate curve ids in family")
    if not curves:
        raise FormatError("empty family")
    return curves


def load_family(path) -> list[TestCurve]:
    return family_from_json(read_json(path))


# -- lengths.csv ------------------------------------------------------------

@dataclass(frozen=True)
class LengthRow:
    k: int
    s: Fraction
    delta_id: str
    length: Fraction
    x: Fraction
    y: Fraction


def lengths_to_csv(rows: Iterable[LengthRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LENGTH_COLUMNS)
    for r in rows:
        writer.writerow([r.k, format_rational(r.s), r.delta_id, format_rational(r.length),
                         format_rational(r.x), format_rational(r.y)])
    return buf.getvalue()


def lengths_from_csv(text: str) -> list[LengthRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != LENGTH_COLUMNS:
        raise FormatError(f"line 1: expected header {','.join(LENGTH_COLUMNS)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(LENGTH_COLUMNS):
            raise FormatError(f"line {lineno}: expected {len(LENGTH_COLUMNS)} fields, got {len(rec)}")
        try:
            row = LengthRow(int(rec[0]), parse_rational(rec[1]), rec[2],
                            parse_rational(rec[3]), parse_rational(rec[4]), parse_rational(rec[5]))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if row.length <= 0 or row.x <= 0 or row.y <= 0:
            raise FormatError(f"line {lineno}: lengths and x, y must be positive")
        rows.append(row)
    if not rows:
        raise FormatError("no data rows")
    return rows


def load_lengths(path) -> list[LengthRow]:
    return lengths_from_csv(Path(path).read_text(encoding="utf-8"))


# -- manifests --------------------------------------------------------------

def sha256_of(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_path, subcommand: str, config: dict, outputs: Sequence) -> Path:
    """``<out>.manifest.json`` echoing the resolved configuration and output hashes."""
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "outputs": {Path(p).name: sha256_of(p) for p in outputs},
    }
    path = Path(str(out_path) + ".manifest.json")
    write_text(path, dumps(manifest))
    return path
