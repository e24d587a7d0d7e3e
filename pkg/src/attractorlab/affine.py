"""The affine group Aff(R^q) at 64-bit float precision.

An element <A, a> acts by x -> A x + a, composes by
<A, a> o <B, b> = <A B, A b + a>, and must have an invertible linear
part to qualify as a group element.  Everything here is an immutable
value; operations are pure.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (BadIndex, ConvergenceFailure, DimensionMismatch,
                     NearSingular, NoFixedPoint, NonUnique)
from .words import Word

IDENTITY_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AffineMap:
    """An invertible affine map <A, a> of R^q."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        A = _freeze(self.linear)
        a = _freeze(self.translation)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"linear part must be square, got shape {A.shape}")
        if a.shape != (A.shape[0],):
            raise DimensionMismatch(
                f"translation shape {a.shape} does not match linear part "
                f"{A.shape}")
        if not (np.isfinite(A).all() and np.isfinite(a).all()):
            raise ValueError("entries must be finite")
        # slogdet instead of a conditioning bound: long products of
        # contractions/expansions are legitimately ill-conditioned group
        # elements, only exact rank deficiency disqualifies
        sign, _ = np.linalg.slogdet(A)
        if sign == 0.0:
            raise NearSingular("linear part is singular; not a group element")
        object.__setattr__(self, "linear", A)
        object.__setattr__(self, "translation", a)

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim), np.zeros(dim))

    def __call__(self, x):
        return apply(self, x)

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return (np.abs(self.linear - np.eye(self.dim)).max() <= tol
                and np.abs(self.translation).max() <= tol)

    def __repr__(self) -> str:
        return (f"AffineMap(linear={self.linear.tolist()}, "
                f"translation={self.translation.tolist()})")


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """f o g = <A B, A b + a>."""
    if f.dim != g.dim:
        raise DimensionMismatch(f"dims {f.dim} and {g.dim} differ")
    return AffineMap(f.linear @ g.linear,
                     f.linear @ g.translation + f.translation)


def inverse(f: AffineMap) -> AffineMap:
    """Group inverse <A^-1, -A^-1 a>."""
    eye = np.eye(f.dim)
    try:
        B = np.linalg.solve(f.linear, eye)
    except np.linalg.LinAlgError as exc:
        raise NearSingular(str(exc)) from exc
    return AffineMap(B, -B @ f.translation)


def apply(f: AffineMap, x) -> np.ndarray:
    """Evaluate f at a point (shape (q,)) or a batch of points (n, q)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != f.dim:
        raise DimensionMismatch(
            f"point dim {x.shape[-1]} does not match map dim {f.dim}")
    return x @ f.linear.T + f.translation


def power(f: AffineMap, n: int) -> AffineMap:
    """f^n by binary exponentiation; negative n goes through the inverse."""
    if n < 0:
        return power(inverse(f), -n)
    result = AffineMap.identity(f.dim)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:    # skip the trailing unused squaring
            base = compose(base, base)
    return result


def commutator_h_n(f: AffineMap, g: AffineMap, n: int) -> AffineMap:
    """f^n o g^n o f^-n o g^-n."""
    if f.dim != g.dim:
        raise DimensionMismatch(f"dims {f.dim} and {g.dim} differ")
    if n < 1:
        raise ValueError("n must be >= 1")
    fn, gn = power(f, n), power(g, n)
    return compose(compose(fn, gn), compose(inverse(fn), inverse(gn)))


def fixed_point(f: AffineMap) -> np.ndarray:
    """The unique solution of (I - A) x = a.

    Raises NonUnique when 1 is an eigenvalue and the system is consistent
    (e.g. the identity), NoFixedPoint when it is inconsistent (e.g. a pure
    translation).
    """
    M = np.eye(f.dim) - f.linear
    a = f.translation
    sv = np.linalg.svd(M, compute_uv=False)
    scale = max(sv[0], 1.0)
    if sv[-1] > 1e-9 * scale:
        return np.linalg.solve(M, a)
    x, residual, _rank, _sv = np.linalg.lstsq(M, a, rcond=None)
    if np.abs(M @ x - a).max() <= 1e-9 * max(1.0, float(np.abs(a).max())):
        raise NonUnique("1 is an eigenvalue of the linear part and the "
                        "fixed-point system has a solution space")
    raise NoFixedPoint("1 is an eigenvalue of the linear part and the "
                       "fixed-point system is inconsistent")


def linearize_at_fixed_point(f: AffineMap) -> tuple[np.ndarray, np.ndarray]:
    """(v, L) with f(v + X) = v + L X identically.

    For an affine map the normal chart at the fixed point is the translation
    chart, so L is exactly the linear part.
    """
    v = fixed_point(f)
    return v, f.linear.copy()


def operator_norm(L: np.ndarray) -> float:
    """Largest singular value."""
    L = np.asarray(L, dtype=np.float64)
    try:
        return float(np.linalg.svd(L, compute_uv=False)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def spectral_radius(L: np.ndarray) -> float:
    """Largest eigenvalue modulus; always <= operator_norm(L)."""
    L = np.asarray(L, dtype=np.float64)
    try:
        return float(np.abs(np.linalg.eigvals(L)).max())
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """An ordered, named, finite set of affine generators of common dim."""

    names: tuple[str, ...]
    maps: tuple[AffineMap, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        maps = tuple(self.maps)
        if len(names) != len(maps):
            raise ValueError("names and maps must have equal length")
        if not maps:
            raise ValueError("generator set must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise DimensionMismatch(f"generators have mixed dims {sorted(dims)}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "maps", maps)

    @property
    def rank(self) -> int:
        return len(self.maps)

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    @cached_property
    def inverses(self) -> tuple[AffineMap, ...]:
        return tuple(inverse(m) for m in self.maps)

    def map_for(self, index: int, sign: int) -> AffineMap:
        if not 0 <= index < self.rank:
            raise BadIndex(f"generator index {index} out of range "
                           f"0..{self.rank - 1}")
        return self.maps[index] if sign == 1 else self.inverses[index]

    @cached_property
    def letter_maps(self) -> tuple[AffineMap, ...]:
        """Maps for letters in canonical order: g0, g0^-1, g1, g1^-1, ..."""
        out = []
        for i in range(self.rank):
            out.append(self.maps[i])
            out.append(self.inverses[i])
        return tuple(out)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for name, m in zip(self.names, self.maps):
            h.update(name.encode())
            h.update(b"\0")
            h.update(np.ascontiguousarray(m.linear).tobytes())
            h.update(np.ascontiguousarray(m.translation).tobytes())
        return h.hexdigest()


def evaluate_word(word: Word | Sequence, gens: GeneratorSet) -> AffineMap:
    """Left-to-right composition of the letters' maps/inverses.

    The empty word yields the identity; raw letter sequences are freely
    reduced first.
    """
    if not isinstance(word, Word):
        word = Word.reduced(word)
    result = AffineMap.identity(gens.dim)
    for idx, sign in word:
        result = compose(result, gens.map_for(idx, sign))
    return result


def word_linear_part(word: Word | Sequence, gens: GeneratorSet) -> np.ndarray:
    """Product of the letters' linear parts (the differential of the word)."""
    if not isinstance(word, Word):
        word = Word.reduced(word)
    L = np.eye(gens.dim)
    for idx, sign in word:
        L = L @ gens.map_for(idx, sign).linear
    return L
