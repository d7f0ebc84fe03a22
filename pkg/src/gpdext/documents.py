"""Reading and writing the on-disk document formats.

Groupoid documents name units and arrows and list the partial composition
table; omitted compose entries mean non-composable.  Cocycle documents attach
angles to composable arrow-id pairs, exact angles as "p/q" strings and
numeric ones as floats in [0, 1); omitted pairs default to angle 0.  A spec
document bundles a groupoid, an optional cocycle and optional run parameters.

Serialization is canonical: keys sorted, entries sorted, two-space indent,
one trailing newline, so serialize(parse(x)) is a stable canonical form and
reports can be compared byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cocycle import OneCochain, TwoCocycle
from .exact import CircleScalar
from .groupoid import FiniteGroupoid


class DocumentError(ValueError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load(text_or_obj):
    if isinstance(text_or_obj, (dict, list)):
        return text_or_obj
    try:
        return json.loads(text_or_obj)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


# ---------------------------------------------------------------------------
# groupoid documents

def parse_groupoid(doc) -> FiniteGroupoid:
    doc = _load(doc)
    for key in ("units", "arrows", "compose", "inverse"):
        if key not in doc:
            raise DocumentError(f"groupoid document missing field {key!r}")
    unit_names = [str(u) for u in doc["units"]]
    if len(set(unit_names)) != len(unit_names):
        raise DocumentError("duplicate unit names")
    uindex = {u: i for i, u in enumerate(unit_names)}

    arrow_names = []
    rng, src = [], []
    for entry in doc["arrows"]:
        try:
            name, r, s = str(entry["id"]), str(entry["range"]), str(entry["source"])
        except (KeyError, TypeError):
            raise DocumentError(f"arrow entry {entry!r} needs id/range/source") from None
        if r not in uindex or s not in uindex:
            raise DocumentError(f"arrow {name!r} references unknown unit")
        arrow_names.append(name)
        rng.append(uindex[r])
        src.append(uindex[s])
    if len(set(arrow_names)) != len(arrow_names):
        raise DocumentError("duplicate arrow ids")
    aindex = {a: i for i, a in enumerate(arrow_names)}

    compose = {}
    for triple in doc["compose"]:
        if len(triple) != 3:
            raise DocumentError(f"compose entry {triple!r} must be [a, b, c]")
        a, b, c = (str(x) for x in triple)
        for x in (a, b, c):
            if x not in aindex:
                raise DocumentError(f"compose entry references unknown arrow {x!r}")
        compose[(aindex[a], aindex[b])] = aindex[c]

    inverse = [None] * len(arrow_names)
    for pair in doc["inverse"]:
        if len(pair) != 2:
            raise DocumentError(f"inverse entry {pair!r} must be [a, b]")
        a, b = (str(x) for x in pair)
        if a not in aindex or b not in aindex:
            raise DocumentError(f"inverse entry references unknown arrow")
        inverse[aindex[a]] = aindex[b]
    if any(v is None for v in inverse):
        missing = arrow_names[inverse.index(None)]
        raise DocumentError(f"arrow {missing!r} has no inverse entry")

    # unit arrows are recovered as the arrows the compose table treats as
    # two-sided identities over their unit
    unit_to_arrow = [None] * len(unit_names)
    for a in range(len(arrow_names)):
        if rng[a] == src[a] and compose.get((a, a)) == a:
            u = rng[a]
            if all(
                compose.get((a, b)) == b
                for b in range(len(arrow_names))
                if rng[b] == u
            ) and all(
                compose.get((b, a)) == b
                for b in range(len(arrow_names))
                if src[b] == u
            ):
                if unit_to_arrow[u] is None:
                    unit_to_arrow[u] = a
    if any(v is None for v in unit_to_arrow):
        u = unit_names[unit_to_arrow.index(None)]
        raise DocumentError(f"no identity arrow found over unit {u!r}")

    return FiniteGroupoid(
        len(unit_names), rng, src, compose, inverse, unit_to_arrow,
        unit_labels=unit_names, arrow_labels=arrow_names, name=str(doc.get("name", "groupoid")),
    )


def groupoid_to_doc(g: FiniteGroupoid) -> dict:
    return {
        "name": g.name,
        "units": list(g.unit_labels),
        "arrows": [
            {"id": g.arrow_labels[a], "range": g.unit_labels[g.r(a)], "source": g.unit_labels[g.s(a)]}
            for a in g.arrows()
        ],
        "compose": sorted(
            [g.arrow_labels[a], g.arrow_labels[b], g.arrow_labels[c]]
            for (a, b), c in g.compose_table.items()
        ),
        "inverse": sorted([g.arrow_labels[a], g.arrow_labels[g.inv(a)]] for a in g.arrows()),
    }


def serialize_groupoid(g: FiniteGroupoid) -> str:
    return canonical_json(groupoid_to_doc(g))


# ---------------------------------------------------------------------------
# cocycle documents

def _angle_to_doc(v: CircleScalar):
    if v.is_exact:
        return f"{v.angle.numerator}/{v.angle.denominator}"
    import cmath, math

    return (cmath.phase(v.to_complex()) / (2 * math.pi)) % 1.0


def _angle_from_doc(x) -> CircleScalar:
    if isinstance(x, str):
        try:
            return CircleScalar(angle=Fraction(x))
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"bad exact angle {x!r}") from None
    if isinstance(x, (int, float)):
        if not 0 <= x < 1:
            raise DocumentError(f"float angle {x!r} outside [0, 1)")
        import cmath, math

        return CircleScalar(z=cmath.exp(2j * math.pi * x))
    raise DocumentError(f"bad angle value {x!r}")


def parse_cocycle(doc, g: FiniteGroupoid) -> TwoCocycle:
    doc = _load(doc)
    entries = doc.get("entries")
    if entries is None:
        raise DocumentError("cocycle document missing field 'entries'")
    aindex = {name: i for i, name in enumerate(g.arrow_labels)}
    vals = {}
    for entry in entries:
        if len(entry) != 2 or len(entry[0]) != 2:
            raise DocumentError(f"cocycle entry {entry!r} must be [[a, b], angle]")
        (a, b), angle = entry
        a, b = str(a), str(b)
        if a not in aindex or b not in aindex:
            raise DocumentError(f"cocycle entry references unknown arrow in {entry!r}")
        pair = (aindex[a], aindex[b])
        if pair not in g.compose_table:
            raise DocumentError(f"cocycle entry on non-composable pair ({a!r}, {b!r})")
        vals[pair] = _angle_from_doc(angle)
    return TwoCocycle(g, vals)


def cocycle_to_doc(w: TwoCocycle) -> dict:
    g = w.base
    entries = []
    for (a, b), v in w.values.items():
        entries.append([[g.arrow_labels[a], g.arrow_labels[b]], _angle_to_doc(v)])
    entries.sort(key=lambda e: (e[0][0], e[0][1]))
    return {"entries": entries}


def serialize_cocycle(w: TwoCocycle) -> str:
    return canonical_json(cocycle_to_doc(w))


def cochain_to_doc(b: OneCochain) -> dict:
    g = b.base
    entries = [[g.arrow_labels[a], _angle_to_doc(v)] for a, v in b.values.items()]
    entries.sort(key=lambda e: e[0])
    return {"entries": entries}


# ---------------------------------------------------------------------------
# bundles

@dataclass
class SpecDocument:
    groupoid: FiniteGroupoid
    cocycle: TwoCocycle | None = None
    params: dict = field(default_factory=dict)

    def cocycle_or_trivial(self) -> TwoCocycle:
        return self.cocycle if self.cocycle is not None else TwoCocycle.trivial(self.groupoid)


def parse_spec(doc) -> SpecDocument:
    doc = _load(doc)
    if "groupoid" not in doc:
        raise DocumentError("spec document missing field 'groupoid'")
    g = parse_groupoid(doc["groupoid"])
    w = parse_cocycle(doc["cocycle"], g) if "cocycle" in doc else None
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise DocumentError("field 'params' must be an object")
    return SpecDocument(groupoid=g, cocycle=w, params=params)


def spec_to_doc(spec: SpecDocument) -> dict:
    out = {"groupoid": groupoid_to_doc(spec.groupoid)}
    if spec.cocycle is not None:
        out["cocycle"] = cocycle_to_doc(spec.cocycle)
    if spec.params:
        out["params"] = spec.params
    return out


# ---------------------------------------------------------------------------
# algebra elements and reports

def element_to_doc(f) -> dict:
    """Sparse {arrow_id: [re, im]} map plus the algebra tag."""
    from .exact import scalar_to_complex

    alg = f.algebra
    return {
        "tag": {
            "groupoid": alg.groupoid.name,
            "power": alg.power,
        },
        "coeff": {
            alg.groupoid.arrow_labels[a]: [scalar_to_complex(c).real, scalar_to_complex(c).imag]
            for a, c in sorted(f.coeff.items())
        },
    }


def parse_element(doc, algebra):
    doc = _load(doc)
    coeff = doc.get("coeff")
    if coeff is None:
        raise DocumentError("element document missing field 'coeff'")
    aindex = {name: i for i, name in enumerate(algebra.groupoid.arrow_labels)}
    out = {}
    for name, pair in coeff.items():
        if name not in aindex:
            raise DocumentError(f"element references unknown arrow {name!r}")
        if len(pair) != 2:
            raise DocumentError(f"coefficient of {name!r} must be [re, im]")
        out[aindex[name]] = complex(float(pair[0]), float(pair[1]))
    return algebra.element(out)


def laurent_to_doc(F) -> dict:
    """Sparse {mode: {arrow_id: [re, im]}} rendering of a graded element."""
    from .exact import scalar_to_complex

    g = F.algebra.groupoid
    return {
        "modes": {
            str(n): {
                g.arrow_labels[a]: [scalar_to_complex(c).real, scalar_to_complex(c).imag]
                for a, c in sorted(comp.coeff.items())
            }
            for n, comp in sorted(F.modes.items())
        }
    }


def parse_laurent(doc, ext_algebra):
    doc = _load(doc)
    modes = doc.get("modes")
    if modes is None:
        raise DocumentError("laurent document missing field 'modes'")
    aindex = {name: i for i, name in enumerate(ext_algebra.groupoid.arrow_labels)}
    out = {}
    for mode, coeff in modes.items():
        try:
            n = int(mode)
        except ValueError:
            raise DocumentError(f"bad mode index {mode!r}") from None
        comp = {}
        for name, pair in coeff.items():
            if name not in aindex:
                raise DocumentError(f"laurent document references unknown arrow {name!r}")
            comp[aindex[name]] = complex(float(pair[0]), float(pair[1]))
        out[n] = comp
    return ext_algebra.element(out)


def decomposition_report_to_doc(report, oracle_agreement=None) -> dict:
    """Per-mode dimension, norm and center dimension, with the extension norm
    and an optional oracle-agreement flag."""
    doc = {
        "modes": {
            str(n): {
                "dimension": report.mode_dimensions.get(n),
                "norm": fmt_float(report.mode_norms[n]),
                "center_dimension": report.center_dimensions.get(n),
                "faithful": report.faithful_modes.get(n),
            }
            for n in sorted(report.mode_norms)
        },
        "extension_norm": fmt_float(report.extension_norm),
    }
    if oracle_agreement is not None:
        doc["oracle_agreement"] = bool(oracle_agreement)
    return doc


def norm_report_to_doc(rep, g: FiniteGroupoid) -> dict:
    return {
        "reduced_norm": fmt_float(rep.reduced_norm),
        "attained_at": None if rep.attained_at is None else g.unit_labels[rep.attained_at],
        "faithful": rep.faithful,
    }


def fmt_float(x: float) -> str:
    """Fixed-precision decimal rendering used everywhere a report carries a
    numeric value, so reports are byte-stable."""
    return f"{float(x):.10e}"
