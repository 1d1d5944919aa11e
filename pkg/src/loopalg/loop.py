"""Graded positive loop algebras over a central element h, and their quotients.

A :class:`LoopSpec` describes an infinite-dimensional algebra intensionally:
finitely many *basic generators* X_i with nonnegative integer grades g_i, a
central grading element h of grade s, and base brackets

    {X_i, X_j} = sum_k  c * h**p * X_k        (grade law: g_i + g_j = g_k + s*p).

The algebra is spanned by the towers {h**n X_i : n >= 0}; all structural
checks are level-uniform, so a finite truncation window (default 8 levels,
override with the LOOPALG_MAX_LEVEL environment variable) only bounds test
enumeration, never correctness.

A :class:`TowerSelection` keeps, for each tower, only the levels >= m_i; the
selected set is a subalgebra iff m_i + m_j + p >= m_k on every base term.
Factoring the selected algebra by the ideal generated by (h - eps) collapses
each tower to its minimal-level representative and produces a finite
:class:`~loopalg.liealg.LieAlgebra` whose constants carry the powers
eps**(m_i + m_j + p - m_k); those exponents are all nonnegative exactly when
the selection was closed, which is why closure and contractibility impose
the same conditions on the m_i.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .liealg import LieAlgebra
from .scalars import PuiseuxScalar, as_fraction

DEFAULT_MAX_LEVEL = 8
_BUNDLED = ("h2", "l1", "l2")


class SpecFormatError(ValueError):
    """Malformed loop-spec description (file or dict)."""


class NotClosed(ValueError):
    """A tower selection is not closed under the base brackets."""

    def __init__(self, i, j, k, needed, got):
        self.triple = (i, j, k)
        super().__init__(
            f"selection not closed on ({i},{j})->{k}: need level >= {needed}, bracket lands at {got}"
        )


class GradeMismatch(ValueError):
    """A generator map does not preserve grades."""


class BracketMismatch(ValueError):
    """A generator map does not carry base brackets to host brackets."""


def max_window() -> int:
    """Truncation window for enumerative checks (env LOOPALG_MAX_LEVEL overrides)."""
    value = os.environ.get("LOOPALG_MAX_LEVEL")
    if value is None:
        return DEFAULT_MAX_LEVEL
    try:
        window = int(value)
    except ValueError as exc:
        raise SpecFormatError(f"LOOPALG_MAX_LEVEL must be an integer, got {value!r}") from exc
    if window < 0:
        raise SpecFormatError("LOOPALG_MAX_LEVEL must be nonnegative")
    return window


@dataclass(frozen=True)
class LoopElement:
    """Homogeneous element sum c * h**n X_i, stored as (i, n, c) terms."""

    terms: tuple[tuple[int, int, Fraction], ...]

    def is_zero(self) -> bool:
        return not self.terms

    @staticmethod
    def _normalize(pairs) -> "LoopElement":
        acc: dict[tuple[int, int], Fraction] = {}
        for i, n, c in pairs:
            key = (int(i), int(n))
            if key[1] < 0:
                raise ValueError("negative levels are not part of the positive loop algebra")
            v = acc.get(key, Fraction(0)) + as_fraction(c)
            if v:
                acc[key] = v
            elif key in acc:
                del acc[key]
        return LoopElement(tuple((i, n, acc[(i, n)]) for i, n in sorted(acc)))


class TowerSelection(tuple):
    """Minimal retained level per tower; plain tuple of nonnegative ints."""

    def __new__(cls, levels: Sequence[int]):
        levels = tuple(int(m) for m in levels)
        if any(m < 0 for m in levels):
            raise SpecFormatError("selection levels must be nonnegative")
        return super().__new__(cls, levels)


class LoopSpec:
    """Basic generators, grades, and base brackets of a positive loop algebra."""

    def __init__(self, s, generators, brackets, selection=None, check=True):
        self._s = int(s)
        if self._s < 1:
            raise SpecFormatError("grade of h must be a positive integer")
        names, grades = [], []
        for name, grade in generators:
            grade = int(grade)
            if grade < 0:
                raise SpecFormatError(f"generator {name} has negative grade")
            names.append(str(name))
            grades.append(grade)
        if len(set(names)) != len(names):
            raise SpecFormatError("generator names must be distinct")
        self._names = tuple(names)
        self._grades = tuple(grades)
        n = len(names)
        table: dict[tuple[int, int], tuple[tuple[int, Fraction, int], ...]] = {}
        for (i, j), terms in brackets.items():
            if not (0 <= i < j < n):
                raise SpecFormatError(f"bracket key ({i},{j}) must satisfy 0 <= i < j < n")
            seen = set()
            cooked = []
            for k, coeff, hpow in terms:
                k, hpow = int(k), int(hpow)
                coeff = as_fraction(coeff)
                if not 0 <= k < n:
                    raise SpecFormatError(f"bracket target {k} out of range")
                if hpow < 0:
                    raise SpecFormatError("h-powers must be nonnegative")
                if k in seen:
                    raise SpecFormatError(f"duplicate target {k} in bracket ({i},{j})")
                seen.add(k)
                if coeff == 0:
                    continue
                if self._grades[i] + self._grades[j] != self._grades[k] + self._s * hpow:
                    raise SpecFormatError(
                        f"grade law violated on ({i},{j})->{k}: "
                        f"{self._grades[i]}+{self._grades[j]} != {self._grades[k]}+{self._s}*{hpow}"
                    )
                cooked.append((k, coeff, hpow))
            if cooked:
                table[(i, j)] = tuple(cooked)
        self._brackets = table
        self._selection = None if selection is None else TowerSelection(selection)
        if self._selection is not None and len(self._selection) != n:
            raise SpecFormatError("selection length does not match generator count")
        if check:
            self._check_jacobi()

    @property
    def s(self) -> int:
        return self._s

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def grades(self) -> tuple[int, ...]:
        return self._grades

    @property
    def n_generators(self) -> int:
        return len(self._names)

    @property
    def selection(self):
        return self._selection

    def base_brackets(self):
        return {ij: tuple(terms) for ij, terms in self._brackets.items()}

    def grade_of(self, i: int, level: int) -> int:
        return self._grades[i] + self._s * level

    # -- elements ----------------------------------------------------------

    def element(self, pairs) -> LoopElement:
        """Build a homogeneous element from (generator, level, coeff) terms."""
        elem = LoopElement._normalize(pairs)
        self.element_grade(elem)
        return elem

    def basis_element(self, i: int, level: int = 0) -> LoopElement:
        return self.element([(i, level, 1)])

    def element_grade(self, elem: LoopElement):
        """Common grade of a homogeneous element (None for the zero element)."""
        grades = {self.grade_of(i, n) for i, n, _ in elem.terms}
        if len(grades) > 1:
            raise ValueError(f"element is not homogeneous; grades {sorted(grades)}")
        return grades.pop() if grades else None

    def _bracket_raw(self, a, b):
        """Bracket of sparse {(i, level): coeff} maps; levels just add."""
        out: dict[tuple[int, int], Fraction] = {}
        for (i, ni), ci in a.items():
            for (j, nj), cj in b.items():
                if i == j:
                    continue
                (p, q), sign = ((i, j), 1) if i < j else ((j, i), -1)
                for k, coeff, hp in self._brackets.get((p, q), ()):
                    key = (k, ni + nj + hp)
                    v = out.get(key, Fraction(0)) + sign * ci * cj * coeff
                    if v:
                        out[key] = v
                    elif key in out:
                        del out[key]
        return out

    def _check_jacobi(self):
        # levels factor out of _bracket_raw (they only shift the output
        # level), so level-0 triples certify the whole loop algebra
        n = self.n_generators
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    xi, xj, xk = ({(g, 0): Fraction(1)} for g in (i, j, k))
                    res: dict[tuple[int, int], Fraction] = {}
                    for x, rest in ((xi, self._bracket_raw(xj, xk)),
                                    (xj, self._bracket_raw(xk, xi)),
                                    (xk, self._bracket_raw(xi, xj))):
                        for key, v in self._bracket_raw(x, rest).items():
                            w = res.get(key, Fraction(0)) + v
                            if w:
                                res[key] = w
                            elif key in res:
                                del res[key]
                    if res:
                        raise SpecFormatError(
                            f"Jacobi identity fails on basic triple ({i},{j},{k}): {res}"
                        )

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "s": self._s,
            "generators": [
                {"name": n, "grade": g} for n, g in zip(self._names, self._grades)
            ],
            "brackets": [
                {
                    "i": i,
                    "j": j,
                    "terms": [
                        {"k": k, "c": str(c), "hpow": p} for k, c, p in self._brackets[(i, j)]
                    ],
                }
                for (i, j) in sorted(self._brackets)
            ],
        }
        if self._selection is not None:
            out["selection"] = list(self._selection)
        return out

    @classmethod
    def from_json(cls, data: dict, check=True) -> "LoopSpec":
        try:
            s = data["s"]
            generators = [(g["name"], g["grade"]) for g in data["generators"]]
            table = {}
            for entry in data.get("brackets", []):
                i, j = int(entry["i"]), int(entry["j"])
                if i >= j:
                    raise SpecFormatError(f"bracket entry requires i < j, got ({i},{j})")
                table.setdefault((i, j), []).extend(
                    (int(t["k"]), Fraction(t["c"]), int(t.get("hpow", 0)))
                    for t in entry["terms"]
                )
            selection = data.get("selection")
        except SpecFormatError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecFormatError(f"malformed loop spec: {exc}") from exc
        return cls(s, generators, table, selection=selection, check=check)

    @classmethod
    def load(cls, path, check=True) -> "LoopSpec":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_json(data, check=check)

    def __repr__(self):
        gens = ", ".join(f"{n}:{g}" for n, g in zip(self._names, self._grades))
        return f"LoopSpec(s={self._s}, generators=[{gens}])"


def bundled_spec(name: str) -> LoopSpec:
    """One of the specs shipped with the package: "h2", "l1" or "l2"."""
    if name not in _BUNDLED:
        raise SpecFormatError(f"unknown bundled spec {name!r}; choose from {_BUNDLED}")
    text = resources.files("loopalg").joinpath("specs", f"{name}.json").read_text("utf-8")
    return LoopSpec.from_json(json.loads(text))


def loop_bracket(spec: LoopSpec, x: LoopElement, y: LoopElement) -> LoopElement:
    """Bilinear bracket of homogeneous elements; levels add with the h-powers."""
    spec.element_grade(x)
    spec.element_grade(y)
    raw = spec._bracket_raw(
        {(i, n): c for i, n, c in x.terms}, {(j, n): c for j, n, c in y.terms}
    )
    return spec.element([(i, n, c) for (i, n), c in raw.items()])


def check_selection(spec: LoopSpec, selection) -> None:
    """Raise NotClosed unless m_i + m_j + hpow >= m_k on every base term."""
    m = TowerSelection(selection)
    if len(m) != spec.n_generators:
        raise SpecFormatError("selection length does not match generator count")
    for (i, j), terms in spec.base_brackets().items():
        for k, _, hpow in terms:
            if m[i] + m[j] + hpow < m[k]:
                raise NotClosed(i, j, k, m[k], m[i] + m[j] + hpow)


def selection_ok(spec: LoopSpec, selection) -> bool:
    try:
        check_selection(spec, selection)
    except NotClosed:
        return False
    return True


def _class_name(name: str, level: int) -> str:
    if level == 0:
        return name
    if level == 1:
        return f"h*{name}"
    return f"h^{level}*{name}"


def factor_algebra(spec: LoopSpec, selection=None) -> LieAlgebra:
    """Quotient of the selected subalgebra by the ideal generated by (h - eps).

    Each tower collapses to the class of its minimal-level representative
    h**m_i X_i, and the bracket constants become coeff * eps**(m_i+m_j+p-m_k);
    the closure precondition makes every exponent nonnegative.
    """
    if selection is None:
        selection = spec.selection or [0] * spec.n_generators
    m = TowerSelection(selection)
    check_selection(spec, m)
    table = {}
    for (i, j), terms in spec.base_brackets().items():
        row = {}
        for k, coeff, hpow in terms:
            row[k] = PuiseuxScalar.monomial(coeff, m[i] + m[j] + hpow - m[k])
        table[(i, j)] = row
    names = [_class_name(n, lvl) for n, lvl in zip(spec.names, m)]
    return LieAlgebra(spec.n_generators, table, names=names)


def evaluate_at(alg: LieAlgebra, eps) -> LieAlgebra:
    """Substitute an exact rational value of eps into a factor algebra."""
    return alg.evaluate_at(eps)


@dataclass(frozen=True)
class EmbeddingReport:
    """Result of a verified embedding; missing = host tower slots not covered."""

    window: int
    missing: tuple[tuple[str, int], ...]

    @property
    def codimension(self) -> int:
        return len(self.missing)


def embedding_check(sub: LoopSpec, host: LoopSpec, gen_map, window=None) -> EmbeddingReport:
    """Verify a grade-preserving map of sub towers into host towers.

    gen_map lists, per sub generator, a (host index, level offset) pair:
    h**n X_i maps to h**(n + offset_i) Y_(host index).  Grades must be
    preserved and every sub base bracket must map termwise onto the host
    bracket of the images, enumerated for all levels up to the window.
    """
    if window is None:
        window = max_window()
    if sub.s != host.s:
        raise GradeMismatch(f"h grades differ: {sub.s} != {host.s}")
    gen_map = [(int(t), int(o)) for t, o in gen_map]
    if len(gen_map) != sub.n_generators:
        raise GradeMismatch("generator map must cover every sub generator")
    for i, (tgt, off) in enumerate(gen_map):
        if not 0 <= tgt < host.n_generators:
            raise GradeMismatch(f"host index {tgt} out of range")
        if off < 0:
            raise GradeMismatch("level offsets must be nonnegative")
        if sub.grades[i] != host.grades[tgt] + host.s * off:
            raise GradeMismatch(
                f"grade of {sub.names[i]} is {sub.grades[i]}, image has grade "
                f"{host.grades[tgt]} + {host.s}*{off}"
            )

    def image(terms):
        acc: dict[tuple[int, int], Fraction] = {}
        for i, n, c in terms:
            key = (gen_map[i][0], n + gen_map[i][1])
            acc[key] = acc.get(key, Fraction(0)) + c
        return tuple((g, lvl, c) for (g, lvl), c in sorted(acc.items()) if c)

    for i in range(sub.n_generators):
        for j in range(i + 1, sub.n_generators):
            for n1 in range(window + 1):
                for n2 in range(window + 1):
                    lhs = loop_bracket(
                        host,
                        host.basis_element(gen_map[i][0], n1 + gen_map[i][1]),
                        host.basis_element(gen_map[j][0], n2 + gen_map[j][1]),
                    )
                    rhs = loop_bracket(
                        sub, sub.basis_element(i, n1), sub.basis_element(j, n2)
                    )
                    if lhs.terms != image(rhs.terms):
                        raise BracketMismatch(
                            f"bracket of ({sub.names[i]},{sub.names[j]}) at levels "
                            f"({n1},{n2}) does not map onto the host bracket"
                        )

    covered: dict[int, set[int]] = {g: set() for g in range(host.n_generators)}
    for tgt, off in gen_map:
        covered[tgt].update(range(off, window + 1))
    missing = tuple(
        (host.names[g], lvl)
        for g in range(host.n_generators)
        for lvl in range(window + 1)
        if lvl not in covered[g]
    )
    return EmbeddingReport(window=window, missing=missing)
