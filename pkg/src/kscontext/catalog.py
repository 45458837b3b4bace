"""Built-in Kochen-Specker vector sets and the vector-set file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from .exact import I, ONE, SQRT2, ZERO, ExactScalar, as_vector

__all__ = [
    "VectorSet",
    "VectorSetError",
    "BUILTIN_NAMES",
    "load_builtin",
    "generate_stabilizer_rays",
    "generate_e8_rays",
    "e8_roots",
    "stabilizer_rays_closed_form",
    "parse_vector_set",
    "serialize_vector_set",
    "canonical_ray",
    "projectively_equal",
]

Ray = tuple[ExactScalar, ...]


class VectorSetError(ValueError):
    """Raised when vector-set data violates the format or the ray invariants."""


def canonical_ray(ray: Ray) -> Ray:
    """Scale ``ray`` so its first nonzero coordinate is exactly 1."""
    for x in ray:
        if not x.is_zero():
            if x == ONE:
                return tuple(ray)
            inv = x.inverse()
            return tuple(y * inv for y in ray)
    raise VectorSetError("zero ray has no projective class")


def projectively_equal(u: Ray, v: Ray) -> bool:
    if len(u) != len(v):
        return False
    return canonical_ray(u) == canonical_ray(v)


@dataclass(frozen=True)
class VectorSet:
    name: str
    dimension: int
    rays: tuple[Ray, ...]
    _keys: tuple[Ray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise VectorSetError(f"dimension must be a positive integer, got {self.dimension!r}")
        rays = tuple(as_vector(r) for r in self.rays)
        keys = []
        seen: dict[Ray, int] = {}
        for idx, ray in enumerate(rays):
            if len(ray) != self.dimension:
                raise VectorSetError(
                    f"dimension mismatch: ray {idx} has length {len(ray)}, expected {self.dimension}"
                )
            if all(x.is_zero() for x in ray):
                raise VectorSetError(f"ray {idx} is the zero vector")
            key = canonical_ray(ray)
            if key in seen:
                raise VectorSetError(f"ray {idx} is a projective duplicate of ray {seen[key]}")
            seen[key] = idx
            keys.append(key)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "_keys", tuple(keys))

    def __len__(self) -> int:
        return len(self.rays)

    @property
    def canonical_rays(self) -> tuple[Ray, ...]:
        return self._keys

    def same_rays(self, other: "VectorSet") -> bool:
        """Order-insensitive projective comparison."""
        return self.dimension == other.dimension and set(self._keys) == set(other._keys)

    def complex_rays(self):
        """Rays as a ``(n, d)`` complex numpy array, each row normalised."""
        import numpy as np

        arr = np.array([[complex(x) for x in ray] for ray in self.rays], dtype=complex)
        return arr / np.linalg.norm(arr, axis=1, keepdims=True)


# ---------------------------------------------------------------- file format


def serialize_vector_set(vs: VectorSet) -> str:
    payload = {
        "name": vs.name,
        "dimension": vs.dimension,
        "rays": [[x.to_ints() for x in ray] for ray in vs.rays],
    }
    return json.dumps(payload)


def parse_vector_set(text: str) -> VectorSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise VectorSetError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise VectorSetError("top-level value must be an object")
    for key in ("name", "dimension", "rays"):
        if key not in data:
            raise VectorSetError(f"missing field {key!r}")
    name, dim, raw_rays = data["name"], data["dimension"], data["rays"]
    if not isinstance(name, str):
        raise VectorSetError("name must be a string")
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise VectorSetError("dimension must be an integer")
    if not isinstance(raw_rays, list):
        raise VectorSetError("rays must be an array")
    rays = []
    for idx, raw in enumerate(raw_rays):
        if not isinstance(raw, list):
            raise VectorSetError(f"ray {idx} must be an array of coordinates")
        coords = []
        for coord in raw:
            if not isinstance(coord, list):
                raise VectorSetError(f"ray {idx}: coordinate must be an array of 8 integers")
            try:
                coords.append(ExactScalar.from_ints(coord))
            except ValueError as exc:
                raise VectorSetError(f"ray {idx}: {exc}") from exc
        rays.append(tuple(coords))
    return VectorSet(name, dim, tuple(rays))


# ------------------------------------------------------------- static data

_S = SQRT2


def _peres33() -> list[Ray]:
    """Peres's 33 rays in R^3: permutations of (0,0,1), (0,1,+-1), (0,1,+-√2), (1,+-1,+-√2)."""
    base = [
        (0, 0, 1),
        (0, 1, 1),
        (0, 1, -1),
        (0, 1, _S),
        (0, 1, -_S),
        (1, 1, _S),
        (1, 1, -_S),
        (1, -1, _S),
        (1, -1, -_S),
    ]
    rays: list[Ray] = []
    seen: set[Ray] = set()
    for vec in base:
        for perm in permutations(vec):
            ray = as_vector(perm)
            key = canonical_ray(ray)
            if key not in seen:
                seen.add(key)
                rays.append(ray)
    return rays


# Cabello, Estebaranz, Garcia-Alcaine (1996): nine tetrads over eighteen rays.
_CABELLO18 = [
    (0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0),
    (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0), (1, -1, 1, -1),
    (1, -1, -1, 1), (0, 0, 1, 1), (1, 1, 1, 1), (0, 1, 0, -1),
    (1, 0, 0, 1), (1, 0, 0, -1), (0, 1, -1, 0), (1, 1, -1, 1),
    (1, 1, 1, -1), (-1, 1, 1, 1),
]


def _peres24() -> list[Ray]:
    """Peres's 24 rays in R^4: basis vectors, (1,+-1,0,0) placements and (1,+-1,+-1,+-1)."""
    rays: list[Ray] = []
    for k in range(4):
        rays.append(as_vector(1 if j == k else 0 for j in range(4)))
    for i, j in combinations(range(4), 2):
        for s in (1, -1):
            v = [0, 0, 0, 0]
            v[i], v[j] = 1, s
            rays.append(as_vector(v))
    for signs in product((1, -1), repeat=3):
        rays.append(as_vector((1, *signs)))
    return rays


# ----------------------------------------------------------- stabilizer states

_PAULI = {
    "I": ((ONE, ZERO), (ZERO, ONE)),
    "X": ((ZERO, ONE), (ONE, ZERO)),
    "Y": ((ZERO, -I), (I, ZERO)),
    "Z": ((ONE, ZERO), (ZERO, -ONE)),
}


def _kron(a, b):
    n, m = len(a), len(b)
    return tuple(
        tuple(a[i // m][j // m] * b[i % m][j % m] for j in range(n * m)) for i in range(n * m)
    )


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)) for i in range(n)
    )


def _two_qubit_paulis() -> dict[str, tuple]:
    return {p + q: _kron(_PAULI[p], _PAULI[q]) for p in "IXYZ" for q in "IXYZ"}


def _commute(p: str, q: str) -> bool:
    anti = sum(1 for a, b in zip(p, q) if a != "I" and b != "I" and a != b)
    return anti % 2 == 0


def generate_stabilizer_rays() -> VectorSet:
    """All pure two-qubit stabilizer states, as joint eigenvectors of stabilizer groups.

    Each maximal commuting subgroup ``{II, P, Q, PQ}`` of the Pauli group (15 of them)
    has four joint eigenspaces labelled by the signs of P and Q. The eigenvector is
    read off a nonzero column of the projector ``(1 + sP P)(1 + sQ Q) / 4``.
    """
    paulis = _two_qubit_paulis()
    names = [k for k in paulis if k != "II"]
    groups: set[frozenset[str]] = set()
    for p, q in combinations(names, 2):
        if not _commute(p, q):
            continue
        prod = _matmul(paulis[p], paulis[q])
        r = next(
            k for k in names if k not in (p, q) and any(
                all(prod[i][j] == c * paulis[k][i][j] for i in range(4) for j in range(4))
                for c in (ONE, -ONE, I, -I)
            )
        )
        groups.add(frozenset((p, q, r)))
    ident = paulis["II"]
    rays: list[Ray] = []
    seen: set[Ray] = set()
    for group in sorted(groups, key=sorted):
        p, q = sorted(group)[:2]
        for sp, sq in product((ONE, -ONE), repeat=2):
            a = tuple(tuple(ident[i][j] + sp * paulis[p][i][j] for j in range(4)) for i in range(4))
            b = tuple(tuple(ident[i][j] + sq * paulis[q][i][j] for j in range(4)) for i in range(4))
            proj = _matmul(a, b)
            col = next(
                tuple(proj[i][j] for i in range(4))
                for j in range(4)
                if any(not proj[i][j].is_zero() for i in range(4))
            )
            ray = canonical_ray(col)
            if ray not in seen:
                seen.add(ray)
                rays.append(ray)
    if len(groups) != 15 or len(rays) != 60:
        raise RuntimeError(f"stabilizer enumeration produced {len(groups)} groups, {len(rays)} rays")
    return VectorSet("stabilizer2q", 4, tuple(rays))


def stabilizer_rays_closed_form() -> VectorSet:
    """The same 60 states listed by support: amplitudes are powers of i on an affine subspace.

    Support 1: 4 basis states. Support 2: each pair of basis states with relative
    phase i^k (24). Full support: ``(1, i^a, i^b, (-1)^k i^(a+b))`` (32).
    """
    powers = (ONE, I, -ONE, -I)
    rays: list[Ray] = []
    for k in range(4):
        rays.append(tuple(ONE if j == k else ZERO for j in range(4)))
    for i, j in combinations(range(4), 2):
        for ph in powers:
            v = [ZERO] * 4
            v[i], v[j] = ONE, ph
            rays.append(tuple(v))
    for a, b, k in product(range(4), range(4), range(2)):
        rays.append((ONE, powers[a], powers[b], powers[(a + b + 2 * k) % 4]))
    return VectorSet("stabilizer2q", 4, tuple(rays))


# ------------------------------------------------------------------------ E8


def e8_roots() -> list[tuple[Fraction, ...]]:
    """The 240 roots of E8 with squared norm 2."""
    roots: list[tuple[Fraction, ...]] = []
    for i, j in combinations(range(8), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * 8
            v[i], v[j] = Fraction(si), Fraction(sj)
            roots.append(tuple(v))
    half = Fraction(1, 2)
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(s * half for s in signs))
    return roots


def generate_e8_rays() -> VectorSet:
    """One representative per antipodal pair of E8 roots: 120 rays in R^8."""
    roots = e8_roots()
    if len(roots) != 240:
        raise RuntimeError(f"expected 240 roots, got {len(roots)}")
    rays: list[Ray] = []
    seen: set[tuple[Fraction, ...]] = set()
    for root in roots:
        neg = tuple(-x for x in root)
        if neg in seen:
            continue
        seen.add(root)
        rays.append(as_vector(root))
    return VectorSet("e8", 8, tuple(rays))


# -------------------------------------------------------------------- lookup

BUILTIN_NAMES = ("peres33", "cabello18", "peres_mermin24", "stabilizer2q", "e8")

_DESCRIPTIONS = {
    "peres33": "Peres's 33-ray proof (d=3)",
    "cabello18": "Cabello's 18-ray proof (d=4)",
    "peres_mermin24": "Peres's 24 rays / Peres-Mermin magic square (d=4)",
    "stabilizer2q": "two-qubit stabiliser states (d=4)",
    "e8": "E8 root system, antipodes identified (d=8)",
}

_CACHE: dict[str, VectorSet] = {}


def describe(name: str) -> str:
    return _DESCRIPTIONS[name]


def load_builtin(name: str) -> VectorSet:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown vector set {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if name not in _CACHE:
        if name == "peres33":
            vs = VectorSet(name, 3, tuple(_peres33()))
        elif name == "cabello18":
            vs = VectorSet(name, 4, tuple(as_vector(r) for r in _CABELLO18))
        elif name == "peres_mermin24":
            vs = VectorSet(name, 4, tuple(_peres24()))
        elif name == "stabilizer2q":
            vs = generate_stabilizer_rays()
        else:
            vs = generate_e8_rays()
        _CACHE[name] = vs
    return _CACHE[name]
