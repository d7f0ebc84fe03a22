"""The graded (Laurent-mode) model of the circle-extension algebra.

A LaurentElement is a finitely-supported family of twisted-algebra elements,
mode n carrying an element of C(G, w^n); it stands for the function
sum_n s^{-n} (x) f_n on the product of the circle with G.  Integrals over the
circle are never discretized: Fourier orthogonality makes them exact mode
bookkeeping, so the graded product of homogeneous elements vanishes across
modes and is the w^n-twisted convolution within a mode.

The certification entry points compare this model against two other code
paths: the left-regular matrices of the twisted algebras (intertwining and
reduced-norm agreement) and the independent finite cyclic oracle
(structure constants and norms of mu_k x_w G).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cyclic_oracle as oracle
from .algebra import AlgebraElement, AlgebraError, TwistedAlgebra
from .cocycle import TwoCocycle
from .cyclic_oracle import CyclicExtension
from .exact import scalar_to_complex, scalars_equal
from .groupoid import FiniteGroupoid


class WindowError(ValueError):
    """A mode window fails to cover the modes it must."""

    def __init__(self, missing):
        self.missing = tuple(sorted(missing))
        super().__init__(f"mode window too small; truncated modes {self.missing}")


class ExtensionAlgebra:
    """Tag object for the graded model over one (groupoid, cocycle) pair;
    caches the twisted algebra of each cocycle power."""

    def __init__(self, groupoid: FiniteGroupoid, cocycle: TwoCocycle):
        cocycle.require_checked("extension algebra")
        if not cocycle.normalized:
            raise AlgebraError("extension algebra needs a normalized cocycle")
        self.groupoid = groupoid
        self.cocycle = cocycle
        self._twisted: dict[int, TwistedAlgebra] = {}

    def twisted(self, n: int) -> TwistedAlgebra:
        alg = self._twisted.get(n)
        if alg is None:
            alg = TwistedAlgebra(self.groupoid, self.cocycle, n)
            self._twisted[n] = alg
        return alg

    def element(self, modes: dict) -> "LaurentElement":
        out = {}
        for n, f in modes.items():
            if isinstance(f, dict):
                f = self.twisted(n).element(f)
            elif f.algebra is not self.twisted(n):
                if not self.twisted(n).same_tag(f.algebra):
                    raise AlgebraError(f"mode {n} component carries the wrong tag")
            if not f.is_zero:
                out[n] = f
        return LaurentElement(self, out)

    def delta(self, n: int, arrow: int, coeff=1) -> "LaurentElement":
        return self.element({n: {arrow: coeff}})

    def zero(self) -> "LaurentElement":
        return LaurentElement(self, {})

    def identity(self) -> "LaurentElement":
        return self.element({0: self.twisted(0).identity()})

    def __repr__(self):
        return f"ExtensionAlgebra({self.groupoid.name})"


class LaurentElement:
    """Finitely many modes, each an element of the matching twisted algebra."""

    __slots__ = ("algebra", "modes")

    def __init__(self, algebra: ExtensionAlgebra, modes: dict[int, AlgebraElement]):
        self.algebra = algebra
        self.modes = {n: f for n, f in modes.items() if not f.is_zero}

    def mode(self, n: int) -> AlgebraElement:
        f = self.modes.get(n)
        return f if f is not None else self.algebra.twisted(n).zero()

    @property
    def is_zero(self) -> bool:
        return not self.modes

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.modes))

    def _require_same(self, other: "LaurentElement"):
        if other.algebra is not self.algebra and (
            other.algebra.groupoid is not self.algebra.groupoid
            or other.algebra.cocycle is not self.algebra.cocycle
        ):
            raise AlgebraError("mixing extension tags")

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        self._require_same(other)
        out = dict(self.modes)
        for n, f in other.modes.items():
            out[n] = out[n] + f if n in out else f
        return LaurentElement(self.algebra, out)

    def __sub__(self, other: "LaurentElement") -> "LaurentElement":
        return self + other.scaled(-1)

    def scaled(self, c) -> "LaurentElement":
        return LaurentElement(self.algebra, {n: f.scaled(c) for n, f in self.modes.items()})

    def __mul__(self, other):
        if not isinstance(other, LaurentElement):
            return self.scaled(other)
        self._require_same(other)
        # cross-mode products vanish by circle-average orthogonality
        out = {}
        for n in set(self.modes) & set(other.modes):
            p = self.modes[n] * other.modes[n]
            if not p.is_zero:
                out[n] = p
        return LaurentElement(self.algebra, out)

    __rmul__ = scaled

    def star(self) -> "LaurentElement":
        return LaurentElement(self.algebra, {n: f.star() for n, f in self.modes.items()})

    def equals(self, other: "LaurentElement", tol: float = 0.0) -> bool:
        self._require_same(other)
        for n in set(self.modes) | set(other.modes):
            if not self.mode(n).equals(other.mode(n), tol):
                return False
        return True

    def isclose(self, other: "LaurentElement", tol: float = 1e-12) -> bool:
        return self.equals(other, tol=tol)

    def __repr__(self):
        if not self.modes:
            return "0"
        return " + ".join(f"s^{-n}(x)[{f!r}]" for n, f in sorted(self.modes.items()))


# ---------------------------------------------------------------------------
# mode calculus

def laurent_product(F: LaurentElement, G: LaurentElement) -> LaurentElement:
    return F * G


def mode_projection(F: LaurentElement, n: int) -> LaurentElement:
    """Circle-average against the n-th character: keeps mode n, kills the
    rest; a *-homomorphism of the graded model onto its n-th summand."""
    f = F.modes.get(n)
    return LaurentElement(F.algebra, {n: f} if f is not None else {})


def mode_component(F: LaurentElement, n: int) -> AlgebraElement:
    """The mode-n component as an element of C(G, w^n)."""
    return F.mode(n)


def embed_mode(alg: ExtensionAlgebra, n: int, f: AlgebraElement) -> LaurentElement:
    """One-sided inverse of mode_component: f back into mode n."""
    return alg.element({n: f})


@dataclass
class DecompositionReport:
    mode_norms: dict[int, float]
    extension_norm: float
    attained_mode: int | None
    faithful_modes: dict[int, bool]
    mode_dimensions: dict[int, int] = field(default_factory=dict)
    center_dimensions: dict[int, int] = field(default_factory=dict)


def decompose(F: LaurentElement, with_centers: bool = False):
    """Split into mode components and compute the extension norm as the
    largest per-mode reduced norm; returns (components, report)."""
    comps = dict(F.modes)
    norms = {}
    faithful = {}
    centers = {}
    best = 0.0
    attained = None
    for n, f in sorted(comps.items()):
        rep = F.algebra.twisted(n).reduced_norm(f)
        norms[n] = rep.reduced_norm
        faithful[n] = rep.faithful
        if with_centers:
            centers[n] = F.algebra.twisted(n).center_dimension()
        if attained is None or rep.reduced_norm > best:
            best, attained = rep.reduced_norm, n
    report = DecompositionReport(
        mode_norms=norms,
        extension_norm=best if comps else 0.0,
        attained_mode=attained,
        faithful_modes=faithful,
        mode_dimensions={n: F.algebra.groupoid.n_arrows for n in comps},
        center_dimensions=centers,
    )
    return comps, report


# ---------------------------------------------------------------------------
# regular representation of the graded model and the intertwining check

@dataclass
class ModeUnitary:
    """Basis correspondence between functions on the source fiber over one
    unit and the mode-n block of the extension fiber space; blocks for
    different modes are mutually orthogonal by circle orthogonality."""

    unit: int
    mode: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def embedding_matrix(self, window_modes: tuple[int, ...]) -> np.ndarray:
        """The isometry from the fiber block into the windowed direct sum,
        column j landing on basis slot (mode, basis[j])."""
        d = self.dim
        total = d * len(window_modes)
        pos = window_modes.index(self.mode)
        V = np.zeros((total, d))
        V[pos * d : (pos + 1) * d, :] = np.eye(d)
        return V


def extension_fiber_inner(x: dict, y: dict) -> complex:
    """Inner product of extension fiber vectors indexed by (mode, arrow);
    the circle integral contributes the mode-matching delta."""
    acc = 0j
    for k, c in x.items():
        if k in y:
            acc += scalar_to_complex(c) * scalar_to_complex(y[k]).conjugate()
    return acc


@dataclass
class IntertwineResidual:
    unit: int
    window: tuple[int, int]
    residual: float
    dimension: int


def extension_regular_matrix(
    F: LaurentElement, u: int, window: tuple[int, int]
) -> tuple[np.ndarray, tuple[int, ...], tuple[int, ...]]:
    """Matrix of graded convolution by F on the windowed fiber space over u,
    computed through the Laurent product acting on basis vectors."""
    lo, hi = window
    missing = [n for n in F.modes if not lo <= n <= hi]
    if missing:
        raise WindowError(missing)
    modes = tuple(range(lo, hi + 1))
    fiber = F.algebra.groupoid.source_fiber(u)
    d = len(fiber)
    pos = {(n, a): i * d + j for i, n in enumerate(modes) for j, a in enumerate(fiber)}
    M = np.zeros((d * len(modes), d * len(modes)), dtype=complex)
    for i, m in enumerate(modes):
        for j, a in enumerate(fiber):
            image = F * F.algebra.delta(m, a)
            for n, comp in image.modes.items():
                for c_arrow, c_val in comp.coeff.items():
                    M[pos[(n, c_arrow)], i * d + j] = scalar_to_complex(c_val)
    return M, modes, fiber


def intertwine_check(F: LaurentElement, u: int, window: tuple[int, int]) -> IntertwineResidual:
    """Compare graded convolution on the extension fiber against the direct
    sum of twisted-algebra regular representations, conjugated through the
    mode isometries; the two sides are computed by unrelated code paths."""
    R, modes, fiber = extension_regular_matrix(F, u, window)
    d = len(fiber)
    total = d * len(modes)
    L = np.zeros((total, total), dtype=complex)
    for n in modes:
        V = ModeUnitary(u, n, fiber).embedding_matrix(modes)
        block = F.algebra.twisted(n).regular_rep(mode_component(F, n), u).matrix
        L += V @ block @ V.T
    residual = float(np.abs(R - L).max()) if total else 0.0
    return IntertwineResidual(unit=u, window=window, residual=residual, dimension=total)


@dataclass
class ReducedDecompositionCertificate:
    samples: int
    max_norm_deviation: float
    max_unit_deviation: float

    @property
    def ok(self) -> bool:
        return self.max_norm_deviation <= 1e-9 and self.max_unit_deviation <= 1e-9


def check_reduced_decomposition(elements: list[LaurentElement]) -> ReducedDecompositionCertificate:
    """For each sample, verify at every unit that the norm of graded
    convolution equals the largest per-mode regular-representation norm, and
    that the extension norm from decompose agrees with the fiberwise one."""
    max_dev = 0.0
    max_unit_dev = 0.0
    for F in elements:
        if F.is_zero:
            continue
        window = (min(F.modes), max(F.modes))
        _, report = decompose(F)
        overall = 0.0
        for u in F.algebra.groupoid.units():
            R, modes, fiber = extension_regular_matrix(F, u, window)
            nR = float(np.linalg.norm(R, 2)) if R.size else 0.0
            nL = 0.0
            for n in modes:
                m = F.algebra.twisted(n).regular_rep(mode_component(F, n), u).matrix
                if m.size:
                    nL = max(nL, float(np.linalg.norm(m, 2)))
            max_unit_dev = max(max_unit_dev, abs(nR - nL))
            overall = max(overall, nR)
        max_dev = max(max_dev, abs(overall - report.extension_norm))
    return ReducedDecompositionCertificate(
        samples=len(elements),
        max_norm_deviation=max_dev,
        max_unit_deviation=max_unit_dev,
    )


# ---------------------------------------------------------------------------
# the finite cyclic oracle comparison

def cyclic_extension(g: FiniteGroupoid, w: TwoCocycle, k: int) -> CyclicExtension:
    return CyclicExtension(g, w, k)


@dataclass
class ModeSummand:
    mode: int
    dimension: int
    center_dimension: int


@dataclass
class CyclicDecomposition:
    """Certificate that the extension algebra of mu_k x_w G is the direct sum
    of the twisted algebras C(G, w^n), n = 0..k-1, matched basis-by-basis."""

    k: int
    summands: list[ModeSummand]
    products_checked: int
    stars_checked: int
    projections_checked: int
    exact: bool
    max_residual: float
    ok: bool


def cyclic_decompose(ext: CyclicExtension, skip_centers: bool = False) -> CyclicDecomposition:
    """Certify the mode decomposition of the cyclic extension algebra.

    For every pair of modes and every pair of base arrows, the product of the
    embedded basis elements is computed with the oracle convolution (written
    against the extension's composition table) and compared against the
    twisted structure constants: zero across modes, w^n(a,b) delta_{ab}
    within a mode.  Involutions and the Fourier projections are checked the
    same way.  With exact inputs every comparison is exact.
    """
    base = ext.base
    k = ext.k
    exact = ext.cocycle.is_exact
    one: object = Fraction(1) if exact else 1.0
    tol = 0.0 if exact else 1e-10
    alg = ExtensionAlgebra(base, ext.cocycle)

    q = {
        (n, a): oracle.embed_mode(ext, n, {a: one})
        for n in range(k)
        for a in base.arrows()
    }

    products = 0
    max_residual = 0.0
    ok = True
    for (m, a), qa in q.items():
        for (n, b), qb in q.items():
            prod = oracle.conv(ext, qa, qb)
            if m != n:
                expected: dict = {}
            else:
                sc = alg.twisted(n).structure_constant(a, b)
                if sc is None:
                    expected = {}
                else:
                    c_arrow, tw = sc
                    expected = oracle.embed_mode(ext, n, {c_arrow: tw.times(one)})
            products += 1
            for key in set(prod) | set(expected):
                lhs, rhs = prod.get(key, 0), expected.get(key, 0)
                if exact:
                    if not scalars_equal(lhs, rhs):
                        ok = False
                else:
                    dev = abs(scalar_to_complex(lhs) - scalar_to_complex(rhs))
                    max_residual = max(max_residual, dev)
                    if dev > tol:
                        ok = False

    stars = 0
    for (n, a), qa in q.items():
        st = oracle.star(ext, qa)
        fa = alg.twisted(n).delta(a, one).star()
        expected = oracle.embed_mode(ext, n, dict(fa.coeff))
        stars += 1
        for key in set(st) | set(expected):
            lhs, rhs = st.get(key, 0), expected.get(key, 0)
            if exact:
                if not scalars_equal(lhs, rhs):
                    ok = False
            else:
                dev = abs(scalar_to_complex(lhs) - scalar_to_complex(rhs))
                max_residual = max(max_residual, dev)
                if dev > tol:
                    ok = False

    projections = 0
    for (n, a), qa in q.items():
        for mm in range(k):
            proj = oracle.mode_projection(ext, qa, mm)
            expected = qa if mm == n else {}
            projections += 1
            for key in set(proj) | set(expected):
                lhs, rhs = proj.get(key, 0), expected.get(key, 0)
                if exact:
                    if not scalars_equal(lhs, rhs):
                        ok = False
                else:
                    dev = abs(scalar_to_complex(lhs) - scalar_to_complex(rhs))
                    max_residual = max(max_residual, dev)
                    if dev > tol:
                        ok = False
    # Fourier projections resolve every delta of the extension
    for x in range(ext.dimension):
        total: dict = {}
        for n in range(k):
            for key, v in oracle.mode_projection(ext, {x: one}, n).items():
                total[key] = v if key not in total else total[key] + v
        projections += 1
        for key in set(total) | {x}:
            lhs = total.get(key, 0)
            rhs = one if key == x else 0
            if exact:
                if not scalars_equal(lhs, rhs):
                    ok = False
            elif abs(scalar_to_complex(lhs) - scalar_to_complex(rhs)) > tol:
                ok = False

    summands = [
        ModeSummand(
            mode=n,
            dimension=base.n_arrows,
            center_dimension=-1 if skip_centers else alg.twisted(n).center_dimension(),
        )
        for n in range(k)
    ]
    return CyclicDecomposition(
        k=k,
        summands=summands,
        products_checked=products,
        stars_checked=stars,
        projections_checked=projections,
        exact=exact,
        max_residual=max_residual,
        ok=ok,
    )


def oracle_norm_deviation(F: LaurentElement, ext: CyclicExtension) -> float:
    """Distance between the max-of-modes extension norm of F and the reduced
    norm of its image in the finite cyclic oracle.

    F must be supported on modes 0..k-1: the finite extension cannot separate
    modes that differ by k."""
    k = ext.k
    if any(not 0 <= n < k for n in F.modes):
        raise WindowError([n for n in F.modes if not 0 <= n < k])
    img: dict = {}
    for n, comp in F.modes.items():
        for key, v in oracle.embed_mode(ext, n, dict(comp.coeff)).items():
            img[key] = v if key not in img else img[key] + v
    _, report = decompose(F)
    return abs(report.extension_norm - oracle.reduced_norm(ext, img))
