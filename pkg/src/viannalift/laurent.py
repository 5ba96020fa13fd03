"""Sparse Laurent polynomials with integer coefficients.

A polynomial is a map from exponent vectors (tuples of ints, all of length
``dim``) to nonzero Python ints. Values are treated as immutable.

Mutation convention: for a grading vector ``w`` and a primitive direction ``u``
with ``w . u == 0``, the piece of ``f`` in degree ``i = w . exponent`` is
multiplied by ``(1 + x^u)^(sign * i)``. With ``sign = -1`` positive pieces are
divided, which for ``w = e2, u = e1`` is the substitution ``y -> y / (1 + x)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from . import intlinalg as ila

Exponent = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class NotMutable(ArithmeticError):
    """A graded piece is not divisible by the required power of the factor."""

    def __init__(self, degree: int, remainder: "LaurentPoly", detail: str = ""):
        self.degree = degree
        self.remainder = remainder
        super().__init__(
            f"piece in degree {degree} is not divisible by the mutation factor"
            + (f" ({detail})" if detail else "")
        )


@dataclass(frozen=True)
class UnimodularMap:
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, matrix: Sequence[Sequence[int]]):
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        if any(len(row) != len(m) for row in m):
            raise NotUnimodular("matrix must be square")
        if ila.det(m) not in (1, -1):
            raise NotUnimodular(f"determinant of {m} is not +-1")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        return cls(ila.identity(n))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, v: Sequence[int]) -> Exponent:
        return ila.matvec(self.matrix, v)

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return UnimodularMap(ila.matmul(self.matrix, other.matrix))

    def inverse(self) -> "UnimodularMap":
        return UnimodularMap(ila.unimodular_inverse(self.matrix))

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.matrix]


@dataclass(frozen=True)
class MutationDatum:
    """Grading ``w``, factor exponent ``u`` and direction ``sign`` (+1 or -1)."""

    w: Exponent
    u: Exponent
    sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        object.__setattr__(self, "u", tuple(self.u))
        if len(self.w) != len(self.u):
            raise DimensionMismatch("w and u must have the same length")
        if not ila.is_primitive(self.w) or not ila.is_primitive(self.u):
            raise ValueError(f"w={self.w} and u={self.u} must be primitive")
        if ila.dot(self.w, self.u) != 0:
            raise ValueError(f"w={self.w} is not orthogonal to u={self.u}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.w)

    def inverse(self) -> "MutationDatum":
        return MutationDatum(self.w, self.u, -self.sign)

    @classmethod
    def standard(cls, n: int, sign: int = -1) -> "MutationDatum":
        """``y -> y / (1 + x)`` (sign -1) or ``y -> y (1 + x)`` (sign +1)."""
        e = lambda i: tuple(int(j == i) for j in range(n))  # noqa: E731
        return cls(e(1), e(0), sign)

    def to_json(self) -> dict:
        return {"w": list(self.w), "u": list(self.u), "sign": self.sign}

    @classmethod
    def from_json(cls, data: Mapping) -> "MutationDatum":
        return cls(tuple(data["w"]), tuple(data["u"]), int(data["sign"]))


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    dim: int
    terms: Mapping[Exponent, int] = field(default_factory=dict)

    def __init__(self, dim: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponent, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != dim:
                raise DimensionMismatch(f"exponent {e} has length != {dim}")
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, dim: int, terms: dict[Exponent, int]) -> "LaurentPoly":
        # Caller guarantees clean terms.
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def monomial(cls, e: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def constant(cls, dim: int, c: int) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    # -- basic protocol --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, e: Sequence[int]) -> int:
        return self.terms.get(tuple(e), 0)

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def items(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self.dim}, {str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = variable_names(self.dim)
        parts = []
        for e, c in self.items():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" if k > 0 else f"{n}^({k})"
                for n, k in zip(names, e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- ring operations -------------------------------------------------

    def _check_dim(self, other: "LaurentPoly") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(self.dim, other)
        self._check_dim(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly._raw(self.dim, {})
            return LaurentPoly._raw(self.dim, {e: c * other for e, c in self.terms.items()})
        self._check_dim(other)
        out: dict[Exponent, int] = defaultdict(int)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly._raw(self.dim, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.constant(self.dim, 1)
        for _ in range(k):
            out = out * self
        return out


def variable_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def mul_monomial(f: LaurentPoly, e: Sequence[int], c: int = 1) -> LaurentPoly:
    """``f * c * x^e``."""
    if len(e) != f.dim:
        raise DimensionMismatch(f"exponent {tuple(e)} has length != {f.dim}")
    if c == 0:
        return LaurentPoly(f.dim)
    return LaurentPoly._raw(
        f.dim, {tuple(a + b for a, b in zip(k, e)): v * c for k, v in f.terms.items()}
    )


def apply_unimodular(f: LaurentPoly, m: UnimodularMap | Sequence[Sequence[int]]) -> LaurentPoly:
    """Change of variables acting on exponents: x^v -> x^(M v)."""
    if not isinstance(m, UnimodularMap):
        m = UnimodularMap(m)
    if m.dim != f.dim:
        raise DimensionMismatch(f"map of size {m.dim} applied to dim {f.dim}")
    rows = m.matrix
    return LaurentPoly._raw(
        f.dim,
        {tuple(sum(r * x for r, x in zip(row, e)) for row in rows): c for e, c in f.terms.items()},
    )


def grade(f: LaurentPoly, w: Sequence[int]) -> dict[int, LaurentPoly]:
    """Split ``f`` into pieces of constant ``w``-degree.

    Pieces keep their full exponents, so they sum back to ``f``.
    """
    if len(w) != f.dim:
        raise DimensionMismatch("grading vector has the wrong length")
    if not any(w):
        raise ValueError("grading vector must be nonzero")
    pieces: dict[int, dict[Exponent, int]] = defaultdict(dict)
    for e, c in f.terms.items():
        pieces[ila.dot(w, e)][e] = c
    return {i: LaurentPoly._raw(f.dim, p) for i, p in sorted(pieces.items())}


@lru_cache(maxsize=4096)
def binomial_row(k: int) -> tuple[int, ...]:
    return tuple(comb(k, j) for j in range(k + 1))


def _times_binomial(coeffs: dict[int, int], k: int) -> dict[int, int]:
    """Multiply a univariate Laurent polynomial {t: c} by (1 + X)^k, k >= 0."""
    if k == 0:
        return coeffs
    row = binomial_row(k)
    out: dict[int, int] = defaultdict(int)
    for t, c in coeffs.items():
        for j, b in enumerate(row):
            out[t + j] += c * b
    return {t: c for t, c in out.items() if c}


def _divide_binomial(coeffs: dict[int, int], k: int) -> tuple[dict[int, int], dict[int, int]]:
    """Divide {t: c} by (1 + X)^k exactly.

    Returns (quotient, remainder); the remainder is empty iff the division is
    exact. The remainder is the leftover after the first failing step.
    """
    lo = min(coeffs)
    dense = [0] * (max(coeffs) - lo + 1)
    for t, c in coeffs.items():
        dense[t - lo] = c
    for _ in range(k):
        if len(dense) < 2:
            return {}, {lo + j: c for j, c in enumerate(dense) if c}
        q = [0] * (len(dense) - 1)
        prev = 0
        for j in range(len(q)):
            prev = dense[j] - prev
            q[j] = prev
        rem = dense[-1] - prev
        if rem:
            return {}, {lo + len(q): rem}
        dense = q
    return {lo + j: c for j, c in enumerate(dense) if c}, {}


def scale_lines(f: LaurentPoly, w: Sequence[int], u: Sequence[int], sign: int) -> LaurentPoly:
    """Multiply each ``w``-degree-``i`` piece of ``f`` by ``(1 + x^u)^(sign*i)``."""
    if len(w) != f.dim or len(u) != f.dim:
        raise DimensionMismatch("mutation datum has the wrong length")
    lam = ila.bezout(u)
    if ila.dot(lam, u) != 1:
        raise ValueError(f"u={tuple(u)} is not primitive")
    # Each line {r + t*u} is keyed by its base point r with lam . r == 0.
    lines: dict[tuple[int, Exponent], dict[int, int]] = defaultdict(dict)
    for e, c in f.terms.items():
        t = ila.dot(lam, e)
        r = tuple(a - t * b for a, b in zip(e, u))
        lines[(ila.dot(w, e), r)][t] = c
    out: dict[Exponent, int] = defaultdict(int)
    for (i, r), coeffs in lines.items():
        k = sign * i
        if k >= 0:
            new = _times_binomial(coeffs, k)
        else:
            new, rem = _divide_binomial(coeffs, -k)
            if rem:
                remainder = LaurentPoly(
                    f.dim, {tuple(a + t * b for a, b in zip(r, u)): c for t, c in rem.items()}
                )
                raise NotMutable(i, remainder, f"line through {r}")
        for t, c in new.items():
            out[tuple(a + t * b for a, b in zip(r, u))] += c
    return LaurentPoly._raw(f.dim, {e: c for e, c in out.items() if c})


def mutate(f: LaurentPoly, d: MutationDatum) -> LaurentPoly:
    """Algebraic mutation ``sum_i (1 + x^u)^(sign * i) f_i`` with integrality check."""
    if d.dim != f.dim:
        raise DimensionMismatch(f"datum of dim {d.dim} applied to dim {f.dim}")
    return scale_lines(f, d.w, d.u, d.sign)


def is_mutable(f: LaurentPoly, d: MutationDatum) -> bool:
    try:
        mutate(f, d)
    except NotMutable:
        return False
    return True


def specialize_units(f: LaurentPoly, variables: Iterable[int]) -> LaurentPoly:
    """Set the listed variables (0-based indices) to 1, dropping them."""
    drop = set(variables)
    if any(not 0 <= v < f.dim for v in drop):
        raise ValueError(f"variable index out of range for dim {f.dim}")
    keep = [i for i in range(f.dim) if i not in drop]
    out: dict[Exponent, int] = defaultdict(int)
    for e, c in f.terms.items():
        out[tuple(e[i] for i in keep)] += c
    return LaurentPoly._raw(len(keep), {e: c for e, c in out.items() if c})


def coefficients_along_segment(f: LaurentPoly, p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Coefficients of ``f`` at the lattice points of [p, q], from p to q."""
    p, q = tuple(p), tuple(q)
    if len(p) != f.dim or len(q) != f.dim:
        raise DimensionMismatch("segment endpoints have the wrong length")
    diff = [b - a for a, b in zip(p, q)]
    g = ila.vgcd(diff)
    if g == 0:
        return [f[p]]
    step = [d // g for d in diff]
    return [f[tuple(a + j * s for a, s in zip(p, step))] for j in range(g + 1)]


def substitute_standard(f: LaurentPoly, k: int = 0) -> LaurentPoly:
    """``(1 + x1)^k * f(x1, x2 * (1 + x1), ...)`` computed without division.

    ``k`` must be at least minus the lowest ``x2``-degree of ``f``; clearing the
    denominators this way turns the substitution into a polynomial identity.
    """
    if f.dim < 2:
        raise DimensionMismatch("substitution needs at least two variables")
    out: dict[Exponent, int] = defaultdict(int)
    for e, c in f.terms.items():
        power = e[1] + k
        if power < 0:
            raise ValueError(f"k={k} too small to clear (1+x1)^{e[1]}")
        for j, b in enumerate(binomial_row(power)):
            out[(e[0] + j,) + e[1:]] += c * b
    return LaurentPoly._raw(f.dim, {e: c for e, c in out.items() if c})


def to_json(f: LaurentPoly) -> dict:
    return {
        "dim": f.dim,
        "terms": [{"exp": list(e), "coef": str(c)} for e, c in f.items()],
    }


def from_json(data: Mapping) -> LaurentPoly:
    dim = int(data["dim"])
    terms = {}
    for t in data["terms"]:
        e = tuple(int(x) for x in t["exp"])
        if e in terms:
            raise ValueError(f"duplicate exponent {e}")
        coef = int(t["coef"])
        if coef == 0:
            raise ValueError("stored zero coefficient")
        terms[e] = coef
    return LaurentPoly(dim, terms)


def parse(text: str, dim: int) -> LaurentPoly:
    """Parse a polynomial written with variables x1..xn (tests and CLI helper).

    Accepts sums of terms like ``3*x1^2*x2^(-1)``; no parentheses beyond
    negative exponents.
    """
    names = variable_names(dim)
    index = {n: i for i, n in enumerate(names)}
    text = text.replace(" ", "").replace("-", "+-").replace("^+-", "^-").replace("(+-", "(-")
    out: dict[Exponent, int] = defaultdict(int)
    for term in filter(None, text.split("+")):
        coef = 1
        if term.startswith("-"):
            coef, term = -1, term[1:]
        e = [0] * dim
        for factor in term.split("*"):
            if factor.lstrip("-").isdigit():
                coef *= int(factor)
                continue
            name, _, power = factor.partition("^")
            e[index[name]] += int(power.strip("()")) if power else 1
        out[tuple(e)] += coef
    return LaurentPoly(dim, out)
