"""Newform descriptions, eigenvalue tables and their text/JSON formats."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable

from .arith import is_fundamental_discriminant, is_prime, prime_factors, squarefree_part
from .literal import LiteralError, parse_element, parse_ideal
from .quadfield import (
    QFElem,
    QFIdeal,
    QuadField,
    Splitting,
    sign_of,
    splitting_type,
)

TAGS = ("split:A", "split:B", "inert", "ramified")
CHARACTERS = ("trivial",)


class DataSyntaxError(ValueError):
    def __init__(self, line: int, column: int, expected: str, message: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        text = f"line {line}, column {column}: expected {expected}"
        if message:
            text += f" ({message})"
        super().__init__(text)


class DataSemanticError(ValueError):
    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("; ".join(f.message for f in self.findings if f.severity == "error"))


class UnsupportedShape(ValueError):
    pass


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" or "warning"
    code: str
    message: str


@dataclass(frozen=True)
class NewformSpec:
    base_disc: int
    weight: tuple[int, ...]
    level: QFIdeal
    coeff_disc: int
    character: str = "trivial"
    level_generator: QFElem | None = None
    name: str | None = field(default=None, compare=False)

    @property
    def F(self) -> QuadField:
        return self.level.field

    @property
    def E(self) -> QuadField:
        return QuadField.from_disc(self.coeff_disc)

    @property
    def k0(self) -> int:
        return max(self.weight)


@dataclass(frozen=True)
class EigenRecord:
    p: int
    tag: str
    value: QFElem | None = None
    norm: int | None = None
    factors: tuple[int, ...] | None = None

    def __post_init__(self):
        given = sum(v is not None for v in (self.value, self.norm, self.factors))
        if given != 1:
            raise ValueError("exactly one payload is required")
        if self.factors is not None:
            object.__setattr__(self, "factors", tuple(sorted(set(self.factors))))

    @property
    def label(self) -> tuple[int, str]:
        return self.p, self.tag

    @property
    def short_label(self) -> str:
        suffix = {"split:A": "A", "split:B": "B", "inert": "", "ramified": "R"}[self.tag]
        return f"{self.p}{suffix}"

    @property
    def payload_kind(self) -> str:
        if self.value is not None:
            return "value"
        return "norm" if self.norm is not None else "norm_factors"

    def is_zero(self) -> bool:
        if self.value is not None:
            return self.value.is_zero()
        if self.norm is not None:
            return self.norm == 0
        return False

    def factor_set(self) -> frozenset[int] | None:
        """Rational primes dividing Nm_{E/Q}(c); None when c = 0."""
        if self.factors is not None:
            return frozenset(self.factors)
        n = self.value.norm() if self.value is not None else self.norm
        if n == 0:
            return None
        return frozenset(prime_factors(abs(int(n))))

    def sort_key(self):
        return self.p, TAGS.index(self.tag)


@dataclass(frozen=True)
class Dataset:
    spec: NewformSpec
    records: tuple[EigenRecord, ...] = ()
    # None: no [extensions] block; a tuple (possibly empty) pins the list
    extensions: tuple[QFElem, ...] | None = None

    def exact_records(self) -> list[EigenRecord]:
        return [r for r in self.sorted_records() if r.value is not None]

    def sorted_records(self) -> list[EigenRecord]:
        return sorted(self.records, key=EigenRecord.sort_key)

    def with_records(self, extra: Iterable[EigenRecord]) -> Dataset:
        return Dataset(self.spec, tuple(self.records) + tuple(extra), self.extensions)


# -- validation ---------------------------------------------------------------


def prime_norm(p: int, tag: str) -> int:
    return p * p if tag == "inert" else p


def within_deligne_bound(c: QFElem, nm: int, k0: int) -> bool:
    """|sigma(c)| <= 2*nm^((k0-1)/2) at both real embeddings, decided exactly."""
    # |x +- y*sqrt(m)| <= T with T^2 = 16*nm^(k0-1)
    t2 = 16 * nm ** (k0 - 1)
    x, y, m = c.x, c.y, c.field.m
    for sy in (y, -y):
        # (x + sy*sqrt m)^2 <= T^2  <=>  T^2 - x^2 - m*y^2 - 2*x*sy*sqrt(m) >= 0
        if sign_of(t2 - x * x - m * y * y, -2 * x * sy, m) < 0:
            return False
    return True


def validate_spec(spec: NewformSpec) -> list[Finding]:
    out = []
    if len(spec.weight) != 2:
        out.append(Finding("error", "weight-length", f"weight {spec.weight} must have two entries"))
    if any(k < 2 for k in spec.weight):
        out.append(Finding("error", "weight-range", f"weights {spec.weight} must be >= 2"))
    if len({k % 2 for k in spec.weight}) > 1:
        out.append(Finding("error", "weight-parity", f"weights {spec.weight} differ in parity"))
    for name, d in (("base_disc", spec.base_disc), ("coeff_disc", spec.coeff_disc)):
        if d <= 1 or not is_fundamental_discriminant(d):
            out.append(Finding("error", "discriminant", f"{name} = {d} is not a real fundamental discriminant"))
    if spec.character not in CHARACTERS:
        out.append(Finding("error", "character", f"unsupported character {spec.character!r}"))
    return out


def validate(ds: Dataset) -> list[Finding]:
    spec = ds.spec
    out = validate_spec(spec)
    if any(f.severity == "error" for f in out):
        return out
    F, k0 = spec.F, spec.k0
    level_norm = spec.level.norm
    seen = set()
    for r in ds.sorted_records():
        lab = r.short_label
        if r.label in seen:
            out.append(Finding("error", "duplicate", f"duplicate record for {lab}"))
            continue
        seen.add(r.label)
        if r.tag not in TAGS:
            out.append(Finding("error", "tag", f"unknown tag {r.tag!r} at {r.p}"))
            continue
        if not is_prime(r.p):
            out.append(Finding("error", "not-prime", f"{r.p} is not prime"))
            continue
        if level_norm % r.p == 0:
            out.append(Finding("error", "level-prime", f"{r.p} divides the level norm {level_norm}"))
        st = splitting_type(r.p, F)
        if r.tag.split(":")[0] != st.value:
            out.append(Finding("error", "tag-splitting", f"{r.p} is {st.value} in {F}, not {r.tag}"))
        if r.value is not None:
            if r.value.field != spec.E:
                out.append(Finding("error", "value-field", f"value at {lab} is not in the coefficient field"))
            elif not r.value.is_integral():
                out.append(Finding("error", "value-integral", f"value {r.value} at {lab} is not integral"))
            elif not within_deligne_bound(r.value, prime_norm(r.p, r.tag), k0):
                out.append(Finding("warning", "deligne", f"value {r.value} at {lab} exceeds the Ramanujan bound"))
        if r.factors is not None and not all(is_prime(q) for q in r.factors):
            out.append(Finding("error", "factor-set", f"factor set at {lab} contains a non-prime"))
    for b in ds.extensions or ():
        if b.field != F or not b.is_integral() or b.is_zero():
            out.append(Finding("error", "extension", f"extension generator {b} is not a nonzero integer of F"))
    return out


# -- text format --------------------------------------------------------------

_SECTION = re.compile(r"^\[(\w+)\]$")
_KEYVAL = re.compile(r"^(\w+)\s*=\s*(.*)$")
_RECORD = re.compile(r"^(\d+)(\s+)(\S+)(\s+)(\w+)\s*=\s*(.*)$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).rstrip()


def _int_list(text: str, line: int, col: int) -> tuple[int, ...]:
    parts = [t.strip() for t in text.replace("−", "-").split(",")]
    out = []
    offset = 0
    for t in parts:
        if not re.fullmatch(r"-?\d+", t):
            raise DataSyntaxError(line, col + offset, "comma-separated integers")
        out.append(int(t))
        offset += len(t) + 1
    return tuple(out)


def parse_newform_file(text: str, check: bool = True) -> Dataset:
    section = None
    form: dict[str, tuple[str, int, int]] = {}
    raw_records = []
    raw_exts = []
    has_ext_block = False
    for lineno, full in enumerate(text.splitlines(), start=1):
        line = _strip_comment(full)
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        col0 = indent + 1
        mt = _SECTION.match(stripped)
        if mt:
            section = mt.group(1)
            if section not in ("form", "eigenvalues", "extensions"):
                raise DataSyntaxError(lineno, col0 + 1, "form, eigenvalues or extensions")
            if section == "extensions":
                has_ext_block = True
            continue
        if section is None:
            raise DataSyntaxError(lineno, col0, "[form] section header")
        if section == "eigenvalues":
            mt = _RECORD.match(stripped)
            if not mt:
                raise DataSyntaxError(lineno, col0, "record '<p> <tag> <payload>=<value>'")
            raw_records.append((lineno, col0, mt))
            continue
        mt = _KEYVAL.match(stripped)
        if not mt:
            raise DataSyntaxError(lineno, col0, "key = value")
        key, val = mt.group(1), mt.group(2).strip()
        vcol = col0 + mt.start(2)
        if section == "form":
            if key in form:
                raise DataSyntaxError(lineno, col0, "a key not already set", f"duplicate key {key}")
            form[key] = (val, lineno, vcol)
        else:
            if key != "beta":
                raise DataSyntaxError(lineno, col0, "beta = <element of F>")
            raw_exts.append((val, lineno, vcol))

    required = ("base_disc", "weight", "level", "coeff_disc")
    for key in required:
        if key not in form:
            raise DataSyntaxError(len(text.splitlines()) + 1, 1, f"'{key}' in [form]")
    unknown = set(form) - set(required) - {"character", "name"}
    if unknown:
        key = sorted(unknown)[0]
        raise DataSyntaxError(form[key][1], 1, "a known [form] key", f"unknown key {key}")

    def int_field(key):
        val, ln, col = form[key]
        vals = _int_list(val, ln, col)
        if len(vals) != 1:
            raise DataSyntaxError(ln, col, "a single integer")
        return vals[0]

    base_disc = int_field("base_disc")
    coeff_disc = int_field("coeff_disc")
    weight = _int_list(*form["weight"])
    for key, d in (("base_disc", base_disc), ("coeff_disc", coeff_disc)):
        if d <= 1 or not is_fundamental_discriminant(d):
            _, ln, col = form[key]
            raise DataSyntaxError(ln, col, "a real fundamental discriminant")
    F = QuadField.from_disc(base_disc)
    E = QuadField.from_disc(coeff_disc)
    val, ln, col = form["level"]
    try:
        level, gen = parse_ideal(val, F)
    except LiteralError as exc:
        raise DataSyntaxError(ln, col + exc.column, exc.expected or "level", str(exc)) from exc
    character = form.get("character", ("trivial",))[0]
    name = form["name"][0] if "name" in form else None
    spec = NewformSpec(base_disc, weight, level, coeff_disc, character, gen, name)

    records = []
    for ln, col0, mt in raw_records:
        p, tag, kind, payload = int(mt.group(1)), mt.group(3), mt.group(5), mt.group(6).strip()
        tag_col = col0 + mt.start(3)
        pay_col = col0 + mt.start(6)
        if tag not in TAGS:
            raise DataSyntaxError(ln, tag_col, "split:A, split:B, inert or ramified")
        if kind == "value":
            try:
                value = parse_element(payload, E)
            except LiteralError as exc:
                raise DataSyntaxError(ln, pay_col + exc.column, exc.expected or "element", str(exc)) from exc
            records.append(EigenRecord(p, tag, value=value))
        elif kind == "norm":
            records.append(EigenRecord(p, tag, norm=_int_list(payload, ln, pay_col)[0]))
        elif kind == "norm_factors":
            records.append(EigenRecord(p, tag, factors=_int_list(payload, ln, pay_col)))
        else:
            raise DataSyntaxError(ln, col0 + mt.start(5), "value=, norm= or norm_factors=")

    exts = None
    if has_ext_block:
        exts = []
        for val, ln, col in raw_exts:
            try:
                exts.append(parse_element(val, F))
            except LiteralError as exc:
                raise DataSyntaxError(ln, col + exc.column, exc.expected or "element", str(exc)) from exc
        exts = tuple(exts)

    ds = Dataset(spec, tuple(records), exts)
    if check:
        errors = [f for f in validate(ds) if f.severity == "error"]
        if errors:
            raise DataSemanticError(errors)
    return ds


def format_level(spec: NewformSpec) -> str:
    if spec.level_generator is not None:
        return str(spec.level_generator)
    return str(spec.level)


def print_newform_file(ds: Dataset) -> str:
    spec = ds.spec
    lines = ["[form]"]
    if spec.name:
        lines.append(f"name = {spec.name}")
    lines += [
        f"base_disc = {spec.base_disc}",
        "weight = " + ",".join(str(k) for k in spec.weight),
        f"level = {format_level(spec)}",
        f"character = {spec.character}",
        f"coeff_disc = {spec.coeff_disc}",
        "[eigenvalues]",
    ]
    for r in ds.sorted_records():
        if r.value is not None:
            payload = f"value={r.value}"
        elif r.norm is not None:
            payload = f"norm={r.norm}"
        else:
            payload = "norm_factors=" + ",".join(str(q) for q in r.factors)
        lines.append(f"{r.p} {r.tag} {payload}")
    if ds.extensions is not None:
        lines.append("[extensions]")
        lines += [f"beta = {b}" for b in ds.extensions]
    return "\n".join(lines) + "\n"


# -- LMFDB-style JSON ---------------------------------------------------------


def _field_from_label(label: str) -> int:
    mt = re.fullmatch(r"2\.2\.(\d+)\.1", str(label))
    if not mt:
        raise UnsupportedShape(f"field label {label!r} is not a real quadratic field")
    return int(mt.group(1))


def _hecke_field(poly) -> tuple[QuadField, int, int]:
    """Coefficient field of a monic integer quadratic [c0, c1, 1]; returns (E, x, y) with root e = (x+y*s)/2."""
    if not isinstance(poly, list) or not all(isinstance(c, int) for c in poly):
        raise DataSyntaxError(0, 0, "hecke_polynomial as a list of integers")
    while len(poly) > 1 and poly[-1] == 0:
        poly = poly[:-1]
    if len(poly) != 3:
        raise UnsupportedShape(f"Hecke field of degree {len(poly) - 1} is not quadratic")
    c0, c1, c2 = poly
    if c2 != 1:
        raise UnsupportedShape("Hecke polynomial must be monic")
    disc = c1 * c1 - 4 * c0
    if disc <= 0:
        raise UnsupportedShape("Hecke field must be real quadratic")

    m, f = squarefree_part(disc)
    if m == 1:
        raise UnsupportedShape("Hecke polynomial is reducible")
    return QuadField(m), -c1, f


def import_lmfdb_json(text: str) -> Dataset:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataSyntaxError(exc.lineno, exc.colno, "valid JSON", exc.msg) from exc
    if not isinstance(obj, dict):
        raise DataSyntaxError(1, 1, "a JSON object")
    try:
        base_disc = _field_from_label(obj["field_label"])
        weight = tuple(int(k) for k in obj["weight"])
        E, ex, ey = _hecke_field(obj["hecke_polynomial"])
        gen_uv = obj["level_gen"]
        level_norm = int(obj["level_norm"])
        primes = obj.get("primes", [])
        values = obj.get("hecke_eigenvalues", [])
    except KeyError as exc:
        raise DataSyntaxError(1, 1, f"key {exc.args[0]!r}") from exc
    F = QuadField.from_disc(base_disc)
    g = F.from_coords(int(gen_uv[0]), int(gen_uv[1]))
    level = QFIdeal.principal(g)
    if level.norm != level_norm:
        raise DataSyntaxError(1, 1, "level_norm matching the level generator", f"{level.norm} != {level_norm}")
    if len(primes) != len(values):
        raise DataSyntaxError(1, 1, "as many hecke_eigenvalues as primes")
    e = QFElem(E, ex, ey)
    records = []
    for (p, tag), val in zip(primes, values):
        if isinstance(val, list) and len(val) == 2:
            a, b = (int(t) for t in val)
            records.append(EigenRecord(int(p), tag, value=E.from_int(a) + e * b))
        elif isinstance(val, list):
            raise UnsupportedShape(f"eigenvalue at {p} has {len(val)} coordinates")
        elif isinstance(val, dict) and "norm" in val:
            records.append(EigenRecord(int(p), tag, norm=int(val["norm"])))
        elif isinstance(val, dict) and "norm_factors" in val:
            records.append(EigenRecord(int(p), tag, factors=tuple(int(q) for q in val["norm_factors"])))
        else:
            raise DataSyntaxError(1, 1, "eigenvalue as [a, b] or a norm object")
    exts = obj.get("extensions")
    if exts is not None:
        try:
            exts = tuple(parse_element(b, F) for b in exts)
        except LiteralError as exc:
            raise DataSyntaxError(1, 1, "element literal in extensions", str(exc)) from exc
    spec = NewformSpec(base_disc, weight, level, E.disc, obj.get("character", "trivial"), g, obj.get("label"))
    ds = Dataset(spec, tuple(records), exts)
    errors = [f for f in validate(ds) if f.severity == "error"]
    if errors:
        raise DataSemanticError(errors)
    return ds


def load(path) -> Dataset:
    """Read a newform file or an LMFDB-style JSON file, chosen by suffix."""
    from pathlib import Path

    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".json":
        return import_lmfdb_json(text)
    return parse_newform_file(text)
