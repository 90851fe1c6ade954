"""DQL codec: parse, validate and canonically serialise the compact
pipe-delimited community-intelligence string.

Grammar:

    DQL          := DIM ('|' DIM)* '.'
    DIM          := TAG ':' ENTRY (',' ENTRY)*
    ENTRY        := KEY '=' VALUE | DISEASE_CONT
    DISEASE_CONT := LETTER '(' KEY '=' NUM (',' KEY '=' NUM)* ')'

Whitespace and line breaks are ignored.  Numeric values are kept as
``Decimal`` so serialisation round-trips exactly.  Categorical codes
(risk=SM, mat=BC, ...) are stored verbatim; their numeric meaning lives in
the planning-config code registry, not here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from decimal import Decimal, InvalidOperation
from typing import Optional


class DqlError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(message if pos < 0 else f"{message} (at offset {pos})")
        self.pos = pos


class UnterminatedString(DqlError):
    pass


class MalformedDimension(DqlError):
    pass


class MalformedEntry(DqlError):
    pass


class InvalidRecord(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    severity: str  # "hard" | "soft"
    path: str
    message: str


@dataclass(frozen=True)
class DiseaseEntry:
    code: str
    incidence: Decimal  # cases per 1,000 population per year
    resource_factor: Decimal  # fraction of cases needing inpatient resources


@dataclass(frozen=True)
class CompositionToken:
    """Letter-coded composition such as ``M0.8C0.2``.

    When the run of letter-prefixed fractions cannot be tokenised
    unambiguously, ``parts`` is empty, ``ambiguous`` is set and the raw text
    is preserved for round-tripping.
    """

    raw: str
    parts: tuple = ()
    ambiguous: bool = False

    @staticmethod
    def parse(raw: str) -> "CompositionToken":
        parts = []
        i = 0
        ok = True
        while i < len(raw):
            ch = raw[i]
            if not ch.isalpha():
                ok = False
                break
            m = re.match(r"\d+(?:\.\d+)?", raw[i + 1 :])
            if not m:
                ok = False
                break
            parts.append((ch, Decimal(m.group(0))))
            i += 1 + m.end()
        if not ok or not parts:
            return CompositionToken(raw=raw, parts=(), ambiguous=True)
        return CompositionToken(raw=raw, parts=tuple(parts), ambiguous=False)


@dataclass
class Population:
    pop: Optional[Decimal] = None
    age0_14: Optional[Decimal] = None
    age15_64: Optional[Decimal] = None
    age65_up: Optional[Decimal] = None
    growth_rate: Optional[Decimal] = None
    gender: Optional[Decimal] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Health:
    diseases: tuple = ()
    risk: Optional[str] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Culture:
    rel: Optional[CompositionToken] = None
    sexsep: Optional[str] = None
    trad: Optional[Decimal] = None
    hol: Optional[str] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Maternal:
    fert: Optional[Decimal] = None
    mar: Optional[Decimal] = None
    health: Optional[Decimal] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Existing:
    total_beds: Optional[Decimal] = None
    quality_factor: Optional[Decimal] = None
    or_rooms: Optional[Decimal] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Infrastructure:
    fac: Optional[Decimal] = None
    water: Optional[Decimal] = None
    infra: Optional[Decimal] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Social:
    conflict: Optional[str] = None
    ref: Optional[Decimal] = None
    vio: Optional[Decimal] = None
    trust: Optional[Decimal] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Economy:
    gdp: Optional[Decimal] = None
    pov: Optional[Decimal] = None
    emp: Optional[CompositionToken] = None
    budget: Optional[Decimal] = None  # millions USD
    extras: dict = field(default_factory=dict)


@dataclass
class GeoClimate:
    temp: Optional[Decimal] = None
    rain: Optional[Decimal] = None
    disrisk: Optional[str] = None
    mat: Optional[str] = None
    construct_pref: Optional[str] = None
    extras: dict = field(default_factory=dict)


@dataclass
class Site:
    size: Optional[Decimal] = None
    access: Optional[str] = None
    utilities: Optional[str] = None
    topography: Optional[str] = None
    extras: dict = field(default_factory=dict)


@dataclass
class DqlRecord:
    population: Population = field(default_factory=Population)
    health: Health = field(default_factory=Health)
    culture: Culture = field(default_factory=Culture)
    maternal: Maternal = field(default_factory=Maternal)
    existing: Existing = field(default_factory=Existing)
    infrastructure: Infrastructure = field(default_factory=Infrastructure)
    social: Social = field(default_factory=Social)
    economy: Economy = field(default_factory=Economy)
    geoclimate: GeoClimate = field(default_factory=GeoClimate)
    site: Site = field(default_factory=Site)


# tag -> (record attribute, ordered key -> kind). Kinds: num, frac, code,
# comp, dis.  Order follows the framework table and drives serialisation.
_SCHEMA = {
    "P": ("population", [("pop", "num"), ("age0_14", "frac"), ("age15_64", "frac"),
                         ("age65_up", "frac"), ("growth_rate", "num"), ("gender", "num")]),
    "H": ("health", [("dis", "dis"), ("risk", "code")]),
    "C": ("culture", [("rel", "comp"), ("sexsep", "code"), ("trad", "frac"), ("hol", "code")]),
    "M": ("maternal", [("fert", "num"), ("mar", "num"), ("health", "num")]),
    "E": ("existing", [("total_beds", "num"), ("quality_factor", "frac"), ("or_rooms", "num")]),
    "I": ("infrastructure", [("fac", "frac"), ("water", "frac"), ("infra", "frac")]),
    "S": ("social", [("conflict", "code"), ("ref", "frac"), ("vio", "frac"), ("trust", "frac")]),
    "X": ("economy", [("gdp", "num"), ("pov", "frac"), ("emp", "comp"), ("budget", "num")]),
    "G": ("geoclimate", [("temp", "num"), ("rain", "num"), ("disrisk", "code"),
                         ("mat", "code"), ("construct_pref", "code")]),
    "SITE": ("site", [("size", "num"), ("access", "code"), ("utilities", "code"),
                      ("topography", "code")]),
}

_TAG_ORDER = ["P", "H", "C", "M", "E", "I", "S", "X", "G", "SITE"]

_DISEASE_RE = re.compile(r"^([A-Z])\((.*)\)$")


def _split_top_level(text: str, sep: str):
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_disease(token: str, pos: int) -> DiseaseEntry:
    m = _DISEASE_RE.match(token)
    if not m:
        raise MalformedEntry(f"bad disease token {token!r}", pos)
    code, body = m.group(1), m.group(2)
    inc = None
    res = Decimal(0)
    for pair in body.split(","):
        if "=" not in pair:
            raise MalformedEntry(f"bad disease field {pair!r} in {token!r}", pos)
        k, v = pair.split("=", 1)
        try:
            dv = Decimal(v)
        except InvalidOperation:
            raise MalformedEntry(f"non-numeric disease value {v!r} in {token!r}", pos)
        if k == "inc":
            inc = dv
        elif k == "res":
            res = dv
        else:
            raise MalformedEntry(f"unknown disease field {k!r} in {token!r}", pos)
    if inc is None:
        raise MalformedEntry(f"disease token {token!r} missing inc", pos)
    return DiseaseEntry(code=code, incidence=inc, resource_factor=res)


def parse_dql(text: str) -> DqlRecord:
    """Parse a DQL string.  Pure, deterministic, total over the grammar."""
    compact = re.sub(r"\s+", "", text)
    if not compact.endswith("."):
        raise UnterminatedString("missing terminating '.'", len(text))
    compact = compact[:-1]
    if not compact:
        raise MalformedDimension("empty DQL string", 0)
    record = DqlRecord()
    seen = set()
    for dim_text in _split_top_level(compact, "|"):
        if ":" not in dim_text:
            raise MalformedDimension(f"dimension without ':' in {dim_text!r}")
        tag, body = dim_text.split(":", 1)
        if tag not in _SCHEMA:
            raise MalformedDimension(f"unknown dimension tag {tag!r}")
        if tag in seen:
            raise MalformedDimension(f"duplicate dimension tag {tag!r}")
        seen.add(tag)
        attr, keyspec = _SCHEMA[tag]
        kinds = dict(keyspec)
        section = getattr(record, attr)
        diseases = None
        for entry in _split_top_level(body, ","):
            if not entry:
                raise MalformedEntry(f"empty entry in dimension {tag}")
            eq = entry.find("=")
            paren = entry.find("(")
            if eq < 0 or (0 <= paren < eq):
                # only valid as a disease continuation right after dis=
                if diseases is None:
                    raise MalformedEntry(f"entry {entry!r} is neither key=value nor a disease continuation")
                diseases.append(_parse_disease(entry, -1))
                continue
            key, value = entry.split("=", 1)
            kind = kinds.get(key)
            if kind == "dis":
                diseases = [_parse_disease(value, -1)]
                continue
            if diseases is not None:
                record.health.diseases = tuple(diseases)
                diseases = None
            if kind is None:
                section.extras[key] = value
                continue
            if kind == "comp":
                setattr(section, key, CompositionToken.parse(value))
            elif kind == "code":
                setattr(section, key, value)
            else:  # num / frac
                try:
                    setattr(section, key, Decimal(value))
                except InvalidOperation:
                    raise MalformedEntry(f"non-numeric value {value!r} for {tag}.{key}")
        if diseases is not None:
            record.health.diseases = tuple(diseases)
    return record


def _fmt(value) -> str:
    if isinstance(value, Decimal):
        text = format(value.normalize(), "f")
        return text
    return str(value)


def serialize_dql(record: DqlRecord) -> str:
    """Canonical serialisation: fixed dimension and key order, '.'-terminated.

    Raises InvalidRecord when hard violations are present.
    """
    hard = [v for v in validate(record) if v.severity == "hard"]
    if hard:
        raise InvalidRecord("; ".join(f"{v.path}: {v.message}" for v in hard))
    dims = []
    for tag in _TAG_ORDER:
        attr, keyspec = _SCHEMA[tag]
        section = getattr(record, attr)
        entries = []
        for key, kind in keyspec:
            if kind == "dis":
                if record.health.diseases and tag == "H":
                    toks = [
                        f"{d.code}(inc={_fmt(d.incidence)},res={_fmt(d.resource_factor)})"
                        for d in record.health.diseases
                    ]
                    entries.append("dis=" + ",".join(toks))
                continue
            value = getattr(section, key)
            if value is None:
                continue
            if isinstance(value, CompositionToken):
                entries.append(f"{key}={value.raw}")
            else:
                entries.append(f"{key}={_fmt(value)}")
        for key in sorted(section.extras):
            entries.append(f"{key}={section.extras[key]}")
        if entries:
            dims.append(f"{tag}:" + ",".join(entries))
    return "|".join(dims) + "."


def _check_frac(out, path, value):
    if value is not None and not (0 <= value <= 1):
        out.append(Violation("hard", path, f"fraction {value} outside [0, 1]"))


def validate(record: DqlRecord) -> list:
    """Range and consistency checks.  Violations are data, never exceptions."""
    out = []
    p = record.population
    if p.pop is None:
        out.append(Violation("hard", "population.pop", "required dimension P missing pop"))
    elif p.pop <= 0:
        out.append(Violation("hard", "population.pop", "population must be positive"))
    if p.growth_rate is not None and not (-10 <= p.growth_rate <= 15):
        out.append(Violation("hard", "population.growth_rate", "growth rate outside [-10, 15] %/yr"))
    if p.growth_rate is None:
        out.append(Violation("soft", "population.growth_rate", "growth rate defaulted from profile"))
    ages = [p.age0_14, p.age15_64, p.age65_up]
    for name, v in zip(("age0_14", "age15_64", "age65_up"), ages):
        _check_frac(out, f"population.{name}", v)
    if all(a is not None for a in ages):
        total = sum(ages)
        if not (Decimal("0.98") <= total <= Decimal("1.02")):
            out.append(Violation("hard", "population.age*", f"age fractions sum {total} outside [0.98, 1.02]"))

    for i, d in enumerate(record.health.diseases):
        if d.incidence < 0:
            out.append(Violation("hard", f"health.diseases[{i}].incidence", "incidence must be >= 0"))
        if not (0 <= d.resource_factor <= 1):
            out.append(Violation("hard", f"health.diseases[{i}].resource_factor", "resource factor outside [0, 1]"))

    _check_frac(out, "culture.trad", record.culture.trad)
    for path, token in (("culture.rel", record.culture.rel), ("economy.emp", record.economy.emp)):
        if token is None:
            continue
        if token.ambiguous:
            out.append(Violation("soft", path, f"composition token {token.raw!r} is ambiguous"))
            continue
        letters = [c for c, _ in token.parts]
        if len(set(letters)) != len(letters):
            out.append(Violation("hard", path, "duplicate letter in composition token"))
        if any(f < 0 for _, f in token.parts):
            out.append(Violation("hard", path, "negative fraction in composition token"))
        total = sum(f for _, f in token.parts)
        if not (Decimal("0.95") <= total <= Decimal("1.05")):
            out.append(Violation("hard", path, f"composition fractions sum {total} outside [0.95, 1.05]"))

    e = record.existing
    if e.total_beds is None and e.quality_factor is None and e.or_rooms is None:
        out.append(Violation("soft", "existing", "existing resources defaulted to zero"))
    if e.quality_factor is not None and not (0 <= e.quality_factor <= 1):
        out.append(Violation("hard", "existing.quality_factor", "quality factor outside [0, 1]"))
    if e.total_beds is not None and e.total_beds < 0:
        out.append(Violation("hard", "existing.total_beds", "bed count must be >= 0"))
    if e.or_rooms is not None and e.or_rooms < 0:
        out.append(Violation("hard", "existing.or_rooms", "OR count must be >= 0"))

    inf = record.infrastructure
    for name in ("fac", "water", "infra"):
        _check_frac(out, f"infrastructure.{name}", getattr(inf, name))
    s = record.social
    for name in ("ref", "vio", "trust"):
        _check_frac(out, f"social.{name}", getattr(s, name))

    x = record.economy
    if x.budget is None:
        out.append(Violation("hard", "economy.budget", "required dimension X missing budget"))
    elif x.budget < 0:
        out.append(Violation("hard", "economy.budget", "budget must be >= 0"))
    _check_frac(out, "economy.pov", x.pov)
    if x.gdp is not None and x.gdp < 0:
        out.append(Violation("hard", "economy.gdp", "GDP per capita must be >= 0"))

    m = record.maternal
    if m.health is not None and not (0 <= m.health <= 100):
        out.append(Violation("hard", "maternal.health", "maternal health index outside [0, 100]"))
    if m.fert is not None and m.fert < 0:
        out.append(Violation("hard", "maternal.fert", "fertility must be >= 0"))

    if record.site.size is not None and record.site.size <= 0:
        out.append(Violation("hard", "site.size", "site size must be positive"))
    return out
