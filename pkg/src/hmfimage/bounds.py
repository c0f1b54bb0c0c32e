"""Exceptional-prime bounds: elimination procedures, certificates and reports.

Every step returns a :class:`CandidateSet`.  The pipeline combines them, tries
to certify each remaining prime, and assembles an :class:`ImageReport` whose
certificates can be replayed from their embedded data alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factorint, is_prime, kronecker_symbol, prime_factors, primes_below
from .heckedata import Dataset, EigenRecord, NewformSpec, prime_norm
from .literal import parse_element, parse_ideal
from .quadfield import (
    QFElem,
    QFIdeal,
    QuadField,
    class_numbers,
    element_ideal_gcd_norm,
    factor_ideal,
    fundamental_unit,
    is_principal,
    mod4_square_solvable,
    prime_labels,
    ray_class_order,
    residue_reduce,
    unit_order_mod,
)
from .residue import (
    charpoly_irreducible,
    field_for,
    is_square,
    primes_of_e_above,
    projective_frobenius_order,
    reduce_at,
    signed_classes,
    split_congruence_classes,
)


class NoQualifyingPrime(LookupError):
    pass


class NoExactRecords(LookupError):
    pass


class UnsupportedClassObstruction(ValueError):
    pass


class UnsupportedCharacter(ValueError):
    pass


class BadPrime(ValueError):
    pass


STRUCTURAL = "structural"
CANDIDATE = "candidate"
ELIMINATED = "eliminated"
UNRESOLVED = "unresolved"


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """One replayable elimination step.  ``data`` holds only JSON values."""

    kind: str
    prime: int | None
    data: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "prime": self.prime, **self.data}

    @classmethod
    def from_json(cls, obj: dict) -> Certificate:
        data = {k: v for k, v in obj.items() if k not in ("kind", "prime")}
        return cls(obj["kind"], obj["prime"], data)

    def replay(self) -> bool:
        return _REPLAY[self.kind](self.prime, self.data)


def _elem(text: str, disc: int) -> QFElem:
    return parse_element(text, QuadField.from_disc(disc))


def _replay_irreducible(ell, d):
    c = _elem(d["c"], d["coeff_disc"])
    if d["p"] == ell:
        return False
    F = field_for(ell, d["coeff_disc"])
    cr = F.zero() + reduce_at(c, ell, d["lambda"])
    return charpoly_irreducible(cr, F(d["det"] % ell))


def _replay_rayclass(ell, d):
    F = QuadField.from_disc(d["base_disc"])
    M, _ = parse_ideal(d["modulus"], F)
    k0 = d["k0"]
    elems = []
    for w in d["witnesses"]:
        alpha = parse_element(w["generator"], F)
        P, _ = parse_ideal(w["ideal"], F)
        if QFIdeal.principal(alpha) != P or not alpha.is_totally_positive():
            return False
        if not M.contains(alpha - 1):
            return False
        c = _elem(w["c"], d["coeff_disc"])
        dd = c - 1 - P.norm ** (k0 - 1)
        if str(dd) != w["d"] or w["p"] == ell:
            return False
        elems.append(dd)
    if len(elems) == 1:
        n = abs(int(elems[0].norm()))
    else:
        n = element_ideal_gcd_norm(elems[0], elems[1])
    return n == d["divisor"] and n != 0 and n % ell != 0


def _replay_dihedral(ell, d):
    F = QuadField.from_disc(d["base_disc"])
    beta = parse_element(d["beta"], F)
    sets = []
    for w in d["records"]:
        P = prime_labels(w["p"], F)[w["tag"]]
        if not inert_in_extension(P, beta):
            return False
        sets.append(set(w["factors"]) | {w["p"]})
    inter = set.intersection(*sets) if sets else None
    return inter is not None and sorted(inter) == d["intersection"]


def _replay_exotic_weight(ell, d):
    # every l >= threshold satisfies 2(l-1) > 5*sum(k_i-1), and the threshold is least
    s = sum(k - 1 for k in d["weight"])
    t = d["threshold"]
    return 2 * (t - 1) > 5 * s >= 2 * (t - 2)


def _replay_exotic_order(ell, d):
    c = _elem(d["c"], d["coeff_disc"])
    if d["p"] == ell:
        return False
    F = field_for(ell, d["coeff_disc"])
    order = projective_frobenius_order(F.zero() + reduce_at(c, ell, d["lambda"]), F(d["det"] % ell))
    return (not order.ambiguous) and order.value == d["order"] and order.value > 5


def _replay_inner(ell, d):
    c = _elem(d["c"], d["coeff_disc"])
    v = inner_twist_coordinate(c)
    return v != 0 and str(v) == d["v"]


_REPLAY = {
    "IrreducibleAt": _replay_irreducible,
    "RayClassContradiction": _replay_rayclass,
    "DihedralFactorBound": _replay_dihedral,
    "ExoticWeightBound": _replay_exotic_weight,
    "ExoticOrderAt": _replay_exotic_order,
    "InnerTwistCoordinate": _replay_inner,
}


# -- candidate sets -----------------------------------------------------------


@dataclass
class Status:
    state: str
    reason: str = ""
    certificates: list[Certificate] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"state": self.state}
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class CandidateSet:
    step: str
    entries: dict[int, Status] = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    # a condition on infinitely many primes that the data could not settle
    open_family: str | None = None

    def primes(self, *states: str) -> set[int]:
        states = states or (STRUCTURAL, CANDIDATE, UNRESOLVED)
        return {ell for ell, st in self.entries.items() if st.state in states}

    def nonstructural(self) -> set[int]:
        return self.primes(CANDIDATE, UNRESOLVED)

    def set(self, ell: int, state: str, reason: str = "", certs=()):
        self.entries[ell] = Status(state, reason, list(certs))

    def to_json(self) -> dict:
        out = {
            "primes": {str(ell): self.entries[ell].to_json() for ell in sorted(self.entries)},
            "info": self.info,
            "notes": list(self.notes),
        }
        if self.open_family:
            out["open_family"] = self.open_family
        return out


def structural_primes(spec: NewformSpec) -> set[int]:
    """Primes the propositions exclude by hypothesis: 2, 3, ramified, level, <= k0."""
    out = {2, 3}
    out |= set(prime_factors(spec.base_disc * spec.level.norm))
    out |= {q for q in range(2, spec.k0 + 1) if is_prime(q)}
    return out


def _with_structural(step: str, spec: NewformSpec, found) -> CandidateSet:
    cs = CandidateSet(step)
    struct = structural_primes(spec)
    for ell in sorted(set(found) | struct):
        cs.set(ell, STRUCTURAL if ell in struct else CANDIDATE)
    return cs


def _factor_json(n: int) -> dict:
    return {str(p): e for p, e in factorint(abs(n)).items()}


def conductor_bound(level: QFIdeal) -> QFIdeal:
    """Largest m with m^2 dividing the level."""
    F = level.field
    m = QFIdeal.unit(F)
    for P, _p, e in factor_ideal(level):
        for _ in range(e // 2):
            m = m * P
    return m


def _ideal_primes(I: QFIdeal) -> list[QFIdeal]:
    return [P for P, _p, _e in factor_ideal(I)]


# -- reducibility -------------------------------------------------------------


def reducible_candidates_unit_method(ds: Dataset, modulus: QFIdeal | None = None) -> CandidateSet:
    spec = ds.spec
    F = spec.F
    M = spec.level if modulus is None else modulus
    eps = fundamental_unit(F)
    e = unit_order_mod(eps, M)
    n = abs(int((eps ** (2 * e) - 1).norm()))
    cs = _with_structural("reducible-unit", spec, prime_factors(n))
    cs.info = {"modulus": str(M), "unit": str(eps), "e": e, "norm": n, "factorization": _factor_json(n)}
    return cs


def lambda_labels(ell: int, coeff_disc: int) -> list[str]:
    return primes_of_e_above(ell, coeff_disc)


def _usable_exact(ds: Dataset, ell: int) -> list[EigenRecord]:
    return [r for r in ds.exact_records() if r.p != ell]


def certify_irreducible_charpoly(lam: tuple[int, str], ds: Dataset) -> Certificate | None:
    ell, which = lam
    spec = ds.spec
    if ell == 2 or spec.level.norm % ell == 0:
        return None
    F = field_for(ell, spec.coeff_disc)
    for r in _usable_exact(ds, ell):
        det = prime_norm(r.p, r.tag) ** (spec.k0 - 1)
        c = F.zero() + reduce_at(r.value, ell, which)
        if charpoly_irreducible(c, F(det % ell)):
            return Certificate(
                "IrreducibleAt",
                ell,
                {
                    "pi": r.short_label,
                    "p": r.p,
                    "lambda": which,
                    "c": str(r.value),
                    "det": det,
                    "coeff_disc": spec.coeff_disc,
                },
            )
    return None


def ray_trivial_generator(P: QFIdeal, M: QFIdeal) -> QFElem | None:
    """A totally positive generator of P congruent to 1 mod M, if one exists."""
    g = is_principal(P)
    if g is None:
        return None
    F = P.field
    eps = fundamental_unit(F)
    period = 2 * unit_order_mod(eps, M)
    u = F.one()
    for _k in range(period):
        for cand in (u * g, -(u * g)):
            if cand.is_totally_positive() and M.contains(cand - 1):
                return cand
        u = u * eps
    return None


def reducible_candidates_rayclass_method(ds: Dataset, m: QFIdeal | None = None) -> CandidateSet:
    """Primes that could divide c - 1 - Nm(pi)^(k0-1) at every ray-trivial pi."""
    spec = ds.spec
    F = spec.F
    M = conductor_bound(spec.level) if m is None else m
    groups: dict[int, list[dict]] = {}
    for r in ds.exact_records():
        P = prime_labels(r.p, F)[r.tag]
        alpha = ray_trivial_generator(P, M)
        if alpha is None:
            continue
        d = r.value - 1 - P.norm ** (spec.k0 - 1)
        groups.setdefault(r.p, []).append(
            {"pi": r.short_label, "p": r.p, "ideal": str(P), "generator": str(alpha), "c": str(r.value), "d": d}
        )
    if not groups:
        raise NoQualifyingPrime(f"no exact record at a prime that is trivial in the narrow ray class group mod {M}")
    per_p = {}
    survivors = None
    for p in sorted(groups):
        ws = groups[p]
        if len(ws) >= 2:
            divisor = element_ideal_gcd_norm(ws[0]["d"], ws[1]["d"])
            ws = ws[:2]
        else:
            divisor = abs(int(ws[0]["d"].norm()))
        naive = sorted(set().union(*(prime_factors(abs(int(w["d"].norm()))) for w in ws if not w["d"].is_zero())))
        per_p[p] = {"witnesses": ws, "divisor": divisor, "naive_factors": naive}
        if divisor == 0:
            continue
        allowed = set(prime_factors(divisor)) | {p}
        survivors = allowed if survivors is None else survivors & allowed
    if survivors is None:
        raise NoQualifyingPrime("every qualifying prime has c = 1 + Nm(pi)^(k0-1)")
    cs = _with_structural("reducible-rayclass", spec, survivors)
    cs.info = {
        "modulus": str(M),
        "groups": {
            str(p): {
                "primes": [w["pi"] for w in g["witnesses"]],
                "divisor": g["divisor"],
                "factors": sorted(prime_factors(g["divisor"])) if g["divisor"] else [],
                "naive_factors": g["naive_factors"],
            }
            for p, g in per_p.items()
        },
    }
    cs._witnesses = per_p  # used to build certificates
    cs._modulus = M
    return cs


def rayclass_certificate(ds: Dataset, cs: CandidateSet, ell: int) -> Certificate | None:
    per_p = getattr(cs, "_witnesses", {})
    for p in sorted(per_p):
        g = per_p[p]
        if p == ell or g["divisor"] == 0 or g["divisor"] % ell == 0:
            continue
        return Certificate(
            "RayClassContradiction",
            ell,
            {
                "base_disc": ds.spec.base_disc,
                "coeff_disc": ds.spec.coeff_disc,
                "k0": ds.spec.k0,
                "modulus": str(cs._modulus),
                "witnesses": [
                    {k: (str(v) if k == "d" else v) for k, v in w.items()} for w in g["witnesses"]
                ],
                "divisor": g["divisor"],
            },
        )
    return None


def quadratic_character_candidates(ds: Dataset, m: QFIdeal | None = None) -> CandidateSet | None:
    """Refinement when the narrow ray class group mod m has order 2: c^2 = (1+Nm^(k0-1))^2."""
    spec = ds.spec
    M = conductor_bound(spec.level) if m is None else m
    if ray_class_order(spec.F, M, narrow=True) != 2:
        return None
    survivors = None
    used = []
    for r in ds.exact_records():
        if spec.level.norm % r.p == 0:
            continue
        t = 1 + prime_norm(r.p, r.tag) ** (spec.k0 - 1)
        n = abs(int((r.value * r.value - t * t).norm()))
        if n == 0:
            continue
        used.append({"pi": r.short_label, "norm": n})
        allowed = set(prime_factors(n)) | {r.p}
        survivors = allowed if survivors is None else survivors & allowed
    if survivors is None:
        return None
    cs = _with_structural("reducible-quadratic-character", spec, survivors)
    cs.info = {"modulus": str(M), "records": used}
    return cs


# -- dihedral -----------------------------------------------------------------


@dataclass(frozen=True)
class Extension:
    beta: QFElem
    ramified_at_2: bool

    def to_json(self) -> dict:
        return {"beta": str(self.beta), "ramified_at_2": self.ramified_at_2}


def enumerate_quadratic_extensions(F: QuadField, S, strict: bool = False) -> list[Extension]:
    """Square classes generated by -1, eps and generators of the primes in S."""
    S = list(S)
    h, _ = class_numbers(F)
    if h % 2 == 0:
        raise UnsupportedClassObstruction(f"class number {h} of {F} is even")
    gens = [-F.one(), fundamental_unit(F)]
    for P in S:
        g = is_principal(P)
        if g is None:
            raise UnsupportedClassObstruction(f"{P} is not principal")
        gens.append(g)
    two_in_S = any(P.norm % 2 == 0 for P in S)
    out = []
    for mask in range(1, 1 << len(gens)):
        beta = F.one()
        for i, g in enumerate(gens):
            if mask >> i & 1:
                beta = beta * g
        odd = beta.norm() % 2 != 0
        flagged = odd and not two_in_S and not mod4_square_solvable(beta, F)
        if not odd and not two_in_S:
            flagged = True
        if strict and flagged:
            continue
        out.append(Extension(beta, flagged))
    return out


def inert_in_extension(P: QFIdeal, beta: QFElem) -> bool:
    if P.contains(2) or P.contains(beta):
        raise BadPrime(f"{P} divides 2*beta")
    return not is_square(residue_reduce(beta, P))


def dihedral_candidates(ds: Dataset, exts) -> CandidateSet:
    spec = ds.spec
    F = spec.F
    exts = [e if isinstance(e, Extension) else Extension(e, False) for e in exts]
    extra = {2 * k - 1 for k in spec.weight if is_prime(2 * k - 1)}
    per_beta = {}
    union: set[int] = set()
    unresolved_betas = []
    for ext in exts:
        beta = ext.beta
        used = []
        inter = None
        for r in ds.sorted_records():
            if r.is_zero():
                continue
            P = prime_labels(r.p, F)[r.tag]
            try:
                if not inert_in_extension(P, beta):
                    continue
            except BadPrime:
                continue
            fs = r.factor_set()
            used.append({"p": r.p, "tag": r.tag, "pi": r.short_label, "factors": sorted(fs)})
            allowed = set(fs) | {r.p}
            inter = allowed if inter is None else inter & allowed
        per_beta[str(beta)] = {
            "ramified_at_2": ext.ramified_at_2,
            "records": used,
            "intersection": sorted(inter) if inter is not None else None,
        }
        if inter is None:
            unresolved_betas.append(str(beta))
        else:
            union |= inter
    struct = structural_primes(spec)
    cs = CandidateSet("dihedral")
    for ell in sorted(union | struct | extra):
        if ell in struct:
            cs.set(ell, STRUCTURAL)
        elif ell in extra and ell not in union:
            cs.set(ell, UNRESOLVED, f"ell = 2k-1 = {ell} is outside the hypotheses of the dihedral criterion")
        else:
            cs.set(ell, CANDIDATE)
    cs.info = {"extensions": per_beta, "union": sorted(union)}
    if not exts:
        cs.notes.append("no dihedral obstruction possible")
    if unresolved_betas:
        cs.open_family = "no usable inert record for beta in " + ", ".join(unresolved_betas)
    cs.union = union
    cs._per_beta = per_beta
    return cs


def dihedral_certificates(ds: Dataset, cs: CandidateSet) -> list[Certificate]:
    out = []
    for beta, info in sorted(cs._per_beta.items()):
        if info["intersection"] is None:
            continue
        out.append(
            Certificate(
                "DihedralFactorBound",
                None,
                {
                    "base_disc": ds.spec.base_disc,
                    "beta": beta,
                    "records": [{"p": w["p"], "tag": w["tag"], "factors": w["factors"]} for w in info["records"]],
                    "intersection": info["intersection"],
                },
            )
        )
    return out


def extensions_for(ds: Dataset, policy: str = "auto") -> list[Extension]:
    """Extension list under a policy: pinned, strict, conservative or auto."""
    F = ds.spec.F
    if policy == "auto":
        policy = "pinned" if ds.extensions is not None else "conservative"
    if policy == "pinned":
        if ds.extensions is None:
            raise ValueError("pinned extension policy needs an [extensions] block")
        return [Extension(b, False) for b in ds.extensions]
    S = _ideal_primes(conductor_bound(ds.spec.level))
    return enumerate_quadratic_extensions(F, S, strict=(policy == "strict"))


# -- exotic images -------------------------------------------------------------


def exotic_threshold(weight) -> int:
    """Least integer t with 2(t-1) > 5*sum(k_i - 1)."""
    s = sum(k - 1 for k in weight)
    return (5 * s) // 2 + 2


def exotic_candidates(spec: NewformSpec) -> CandidateSet:
    t = exotic_threshold(spec.weight)
    found = primes_below(t)
    cs = _with_structural("exotic", spec, found)
    cs.info = {"threshold": t, "inequality": "2(l-1) <= 5*sum(k_i-1)", "below_threshold": list(found)}
    return cs


def exotic_weight_certificate(spec: NewformSpec) -> Certificate:
    return Certificate("ExoticWeightBound", None, {"weight": list(spec.weight), "threshold": exotic_threshold(spec.weight)})


def certify_not_exotic(lam, ds: Dataset) -> Certificate | None:
    ell, which = lam
    spec = ds.spec
    if ell == 2:
        return None
    F = field_for(ell, spec.coeff_disc)
    for r in _usable_exact(ds, ell):
        det = prime_norm(r.p, r.tag) ** (spec.k0 - 1)
        if det % ell == 0:
            continue
        order = projective_frobenius_order(F.zero() + reduce_at(r.value, ell, which), F(det % ell))
        if order.ambiguous or order.value <= 5:
            continue
        return Certificate(
            "ExoticOrderAt",
            ell,
            {
                "pi": r.short_label,
                "p": r.p,
                "lambda": which,
                "c": str(r.value),
                "det": det,
                "order": order.value,
                "coeff_disc": spec.coeff_disc,
            },
        )
    return None


# -- inner twists -------------------------------------------------------------


def inner_twist_coordinate(c: QFElem) -> Fraction:
    """sqrt(m)-coordinate of c^2 for c = (x + y sqrt m)/2, i.e. xy/2."""
    return Fraction(c.x * c.y, 2)


def inner_twist_candidates(ds: Dataset) -> CandidateSet:
    spec = ds.spec
    exact = ds.exact_records()
    if not exact:
        raise NoExactRecords("inner twist test needs exact eigenvalues")
    survivors = None
    witnesses = []
    for r in exact:
        v = inner_twist_coordinate(r.value)
        if v == 0:
            continue
        allowed = set(prime_factors(abs(v.numerator))) | {r.p}
        witnesses.append({"pi": r.short_label, "p": r.p, "c": str(r.value), "v": str(v)})
        survivors = allowed if survivors is None else survivors & allowed
    cs = CandidateSet("inner-twist")
    struct = structural_primes(spec)
    if survivors is None:
        for ell in sorted(struct):
            cs.set(ell, STRUCTURAL)
        cs.open_family = "every exact record has c^2 rational; primes inert in E are not settled"
        cs.info = {"witnesses": []}
        cs._witnesses = []
        return cs
    inert = {ell for ell in survivors if kronecker_symbol(spec.coeff_disc, ell) == -1}
    for ell in sorted(inert | struct):
        cs.set(ell, STRUCTURAL if ell in struct else CANDIDATE)
    cs.info = {"witnesses": witnesses, "survivors": sorted(survivors)}
    cs._witnesses = witnesses
    return cs


def inner_twist_certificate(ds: Dataset, cs: CandidateSet) -> Certificate | None:
    ws = getattr(cs, "_witnesses", [])
    if not ws:
        return None
    w = min(ws, key=lambda w: (len(prime_factors(abs(Fraction(w["v"]).numerator))), w["p"]))
    return Certificate("InnerTwistCoordinate", None, {"pi": w["pi"], "c": w["c"], "v": w["v"], "coeff_disc": ds.spec.coeff_disc})


# -- image descriptor ---------------------------------------------------------


@dataclass(frozen=True)
class ImageDescriptor:
    det_exponent: int
    modulus: int
    split_classes: tuple[int, ...]

    @property
    def split_shape(self) -> str:
        if self.det_exponent == 1:
            return "GL₂(F_ℓ)"
        return f"{{γ ∈ GL₂(F_ℓ) : det γ ∈ (F_ℓ^×)^{self.det_exponent}}}"

    @property
    def inert_shape(self) -> str:
        target = "F_ℓ^×" if self.det_exponent == 1 else f"(F_ℓ^×)^{self.det_exponent}"
        return f"{{γ ∈ GL₂(F_ℓ²) : det γ ∈ {target}}}"

    def degree(self, ell: int) -> int:
        return 1 if ell % self.modulus in self.split_classes else 2

    def to_json(self) -> dict:
        return {
            "det_exponent": self.det_exponent,
            "modulus": self.modulus,
            "split_classes": list(self.split_classes),
            "split_classes_signed": signed_classes(list(self.split_classes), self.modulus),
            "split_shape": self.split_shape,
            "inert_shape": self.inert_shape,
        }


def image_descriptor(spec: NewformSpec) -> ImageDescriptor:
    if spec.character != "trivial":
        raise UnsupportedCharacter(spec.character)
    return ImageDescriptor(spec.k0 - 1, abs(spec.coeff_disc), tuple(split_congruence_classes(spec.coeff_disc)))


# -- pipeline -----------------------------------------------------------------


@dataclass
class RunOptions:
    extensions: str = "auto"
    unit_modulus: QFIdeal | None = None
    quadratic_character: bool = False
    format: str = "text"


@dataclass
class ImageReport:
    form: dict
    structural: list[int]
    candidates: dict[str, dict]
    certificates: list[Certificate]
    unresolved: list[dict]
    exceptional_bound: list[int]
    image: dict
    options: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "unresolved" if self.unresolved else "complete"

    @property
    def bound_finite(self) -> bool:
        # an unsettled dihedral family leaves infinitely many primes open
        return not any(u["prime"] is None and u["step"] != "inner-twist" for u in self.unresolved)

    @property
    def exit_code(self) -> int:
        return 2 if self.unresolved else 0

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "structural": self.structural,
            "candidates": self.candidates,
            "certificates": [c.to_json() for c in self.certificates],
            "unresolved": self.unresolved,
            "exceptional_bound": self.exceptional_bound,
            "exceptional_bound_finite": self.bound_finite,
            "image": self.image,
            "options": self.options,
            "status": self.status,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> ImageReport:
        return cls(
            obj["form"],
            obj["structural"],
            obj["candidates"],
            [Certificate.from_json(c) for c in obj["certificates"]],
            obj["unresolved"],
            obj["exceptional_bound"],
            obj["image"],
            obj.get("options", {}),
        )


def _form_json(spec: NewformSpec) -> dict:
    level = str(spec.level_generator) if spec.level_generator is not None else str(spec.level)
    return {
        "name": spec.name or "",
        "base_disc": spec.base_disc,
        "weight": list(spec.weight),
        "level": level,
        "level_norm": spec.level.norm,
        "coeff_disc": spec.coeff_disc,
        "character": spec.character,
    }


def _certify_all_lambdas(ell: int, ds: Dataset, certify) -> tuple[list[Certificate], list[str]]:
    certs, missing = [], []
    for which in lambda_labels(ell, ds.spec.coeff_disc):
        c = certify((ell, which), ds)
        if c is None:
            missing.append(which)
        else:
            certs.append(c)
    return certs, missing


def run_pipeline(ds: Dataset, options: RunOptions | None = None) -> ImageReport:
    opts = options or RunOptions()
    spec = ds.spec
    struct = structural_primes(spec)
    certificates: list[Certificate] = []
    unresolved: list[dict] = []
    steps: dict[str, CandidateSet] = {}

    # reducibility: unit method, sharpened by the ray class method
    unit = reducible_candidates_unit_method(ds, opts.unit_modulus)
    steps["reducible-unit"] = unit
    red = set(unit.nonstructural())
    ray = None
    try:
        ray = reducible_candidates_rayclass_method(ds)
        steps["reducible-rayclass"] = ray
    except NoQualifyingPrime as exc:
        unit.notes.append(f"ray class method unavailable: {exc}")
    if opts.quadratic_character:
        qc = quadratic_character_candidates(ds)
        if qc is not None:
            steps["reducible-quadratic-character"] = qc
            red &= qc.nonstructural() | struct
    for ell in sorted(red):
        if ray is not None and ell not in ray.primes():
            cert = rayclass_certificate(ds, ray, ell)
            if cert is not None:
                unit.set(ell, ELIMINATED, "ray class congruence fails", [cert])
                certificates.append(cert)
                continue
        certs, missing = _certify_all_lambdas(ell, ds, certify_irreducible_charpoly)
        if not missing:
            unit.set(ell, ELIMINATED, "irreducible characteristic polynomial", certs)
            certificates += certs
        else:
            reason = "no irreducible characteristic polynomial at lambda " + ",".join(missing)
            unit.set(ell, UNRESOLVED, reason)
            certificates += certs
            unresolved.append({"prime": ell, "step": "reducible", "reason": reason})

    # dihedral
    exts = extensions_for(ds, opts.extensions)
    dih = dihedral_candidates(ds, exts)
    steps["dihedral"] = dih
    certificates += dihedral_certificates(ds, dih)
    for ell in sorted(dih.nonstructural()):
        st = dih.entries[ell]
        if st.state == CANDIDATE:
            st.state, st.reason = UNRESOLVED, "divides every usable inert trace norm"
        unresolved.append({"prime": ell, "step": "dihedral", "reason": st.reason})
    if dih.open_family:
        unresolved.append({"prime": None, "step": "dihedral", "reason": dih.open_family})

    # A4, S4, A5
    exo = exotic_candidates(spec)
    steps["exotic"] = exo
    certificates.append(exotic_weight_certificate(spec))
    for ell in sorted(exo.nonstructural()):
        certs, missing = _certify_all_lambdas(ell, ds, certify_not_exotic)
        certificates += certs
        if not missing:
            exo.set(ell, ELIMINATED, "Frobenius of projective order > 5", certs)
        else:
            reason = "no Frobenius of projective order > 5 at lambda " + ",".join(missing)
            exo.set(ell, UNRESOLVED, reason)
            unresolved.append({"prime": ell, "step": "exotic", "reason": reason})

    # inner twists refine the image on inert classes only
    desc = image_descriptor(spec)
    image = desc.to_json()
    try:
        inner = inner_twist_candidates(ds)
    except NoExactRecords as exc:
        inner = CandidateSet("inner-twist", open_family=str(exc))
        for ell in sorted(struct):
            inner.set(ell, STRUCTURAL)
    steps["inner-twist"] = inner
    cert = inner_twist_certificate(ds, inner)
    if cert is not None:
        certificates.append(cert)
    for ell in sorted(inner.nonstructural()):
        inner.set(ell, UNRESOLVED, "c^2 may lie in F_ell at every exact record")
        unresolved.append({"prime": ell, "step": "inner-twist", "reason": inner.entries[ell].reason})
    if inner.open_family:
        unresolved.append({"prime": None, "step": "inner-twist", "reason": inner.open_family})
        image["inert_status"] = "open"
    else:
        image["inert_status"] = "certified"

    bound = set(struct)
    for u in unresolved:
        if u["prime"] is not None and u["step"] != "inner-twist":
            bound.add(u["prime"])
    unresolved.sort(key=lambda u: (u["prime"] is None, u["prime"] or 0, u["step"], u["reason"]))
    certificates.sort(key=lambda c: (c.prime is None, c.prime or 0, c.kind, json.dumps(c.data, sort_keys=True)))
    return ImageReport(
        form=_form_json(spec),
        structural=sorted(struct),
        candidates={name: cs.to_json() for name, cs in steps.items()},
        certificates=certificates,
        unresolved=unresolved,
        exceptional_bound=sorted(bound),
        image=image,
        options={"extensions": opts.extensions, "quadratic_character": opts.quadratic_character},
    )


# -- text rendering -----------------------------------------------------------

HEADER = "hmfimage report"


def _field_name(disc: int) -> str:
    return f"Q(√{QuadField.from_disc(disc).m})"


def report_view(obj: dict) -> list[tuple[str, str]]:
    """Flat (key, value) lines for the text rendering."""
    if not obj:
        return []
    form = obj["form"]
    bound = obj["exceptional_bound"]
    rows = [
        ("form", f"name={form['name'] or '-'} F={_field_name(form['base_disc'])} k={tuple(form['weight'])} "
                 f"N={form['level']} Nm(N)={form['level_norm']} E={_field_name(form['coeff_disc'])}"),
        ("row", "exceptional λ divide " + "·".join(str(p) for p in bound)),
        ("status", obj["status"]),
        ("structural", " ".join(str(p) for p in obj["structural"])),
    ]
    img = obj["image"]
    rows.append(("image", f"split ℓ ≡ {', '.join('±' + str(r) for r in img['split_classes_signed'])} (mod {img['modulus']}): "
                          f"{img['split_shape']}; otherwise {img['inert_shape']} [{img.get('inert_status', '-')}]"))
    for step in sorted(obj["candidates"]):
        entries = obj["candidates"][step]["primes"]
        for ell in sorted(entries, key=int):
            st = entries[ell]
            if st["state"] == STRUCTURAL:
                continue
            rows.append((f"{step} {ell}", st["state"] + (f" ({st['reason']})" if st.get("reason") else "")))
        if obj["candidates"][step].get("open_family"):
            rows.append((f"{step} open", obj["candidates"][step]["open_family"]))
    for c in obj["certificates"]:
        detail = " ".join(f"{k}={c[k]}" for k in sorted(c) if k not in ("kind", "prime") and not isinstance(c[k], (list, dict)))
        rows.append(("certificate", f"{c['kind']} ℓ={c['prime'] if c['prime'] is not None else '*'} {detail}".rstrip()))
    for u in obj["unresolved"]:
        rows.append(("UNRESOLVED", f"ℓ={u['prime'] if u['prime'] is not None else '*'} step={u['step']}: {u['reason']}"))
    return rows


def render_view(rows) -> str:
    return "\n".join([HEADER] + [f"{k}: {v}" for k, v in rows]) + "\n"


def render_report(obj: dict) -> str:
    return render_view(report_view(obj))


def parse_rendered(text: str) -> list[tuple[str, str]]:
    lines = text.splitlines()
    if not lines or lines[0] != HEADER:
        raise SyntaxError("not a rendered report")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        key, sep, val = line.partition(": ")
        if not sep:
            raise SyntaxError(f"line {i}: expected 'key: value'")
        rows.append((key, val))
    return rows
