"""Pauli-string operators on a chain of spin-1/2 sites.

Sites are numbered 1..N.  Computational basis states are indexed by the
integer whose bit (i-1) -- least significant bit first -- holds the value
of site i.  All textual I/O prints site 1 leftmost, so the string "110"
means sites 1 and 2 are up and corresponds to basis index 3.

A Hamiltonian is a weighted sum of Pauli strings with real coefficients,
kept in a canonical form (duplicate strings merged, zero weights dropped).
It can be realized as a dense matrix for small chains or applied
matrix-free to a state vector for larger ones; the two code paths are
independent and cross-checked in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "DENSE_CAP",
    "PAULI_MATRICES",
    "SpinChainError",
    "SizeError",
    "DimensionMismatchError",
    "PauliTerm",
    "HamiltonianSpec",
    "StateVector",
    "BitConfig",
    "realize_dense",
    "apply_spec",
    "expectation",
]

#: Largest chain for which dense 2^N x 2^N matrices are built (32 MB at N=12).
DENSE_CAP = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

_LETTERS = frozenset("XYZ")


class SpinChainError(Exception):
    """Base class for errors raised by this package."""


class SizeError(SpinChainError):
    """Chain too large (or too small) for the requested operation."""


class DimensionMismatchError(SpinChainError):
    """Operands defined on different numbers of sites."""


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string: coefficient * prod_i P_i.

    ``letters`` maps 1-based site indices to "X", "Y" or "Z"; absent sites
    act as identity.  An empty map is the scalar identity term.
    """

    coefficient: float
    letters: tuple = ()

    def __post_init__(self):
        coeff = float(self.coefficient)
        if not np.isfinite(coeff) or coeff == 0.0:
            raise ValueError(f"coefficient must be finite and nonzero, got {coeff!r}")
        if isinstance(self.letters, Mapping):
            items = self.letters.items()
        else:
            items = self.letters
        norm = tuple(sorted((int(s), str(p)) for s, p in items))
        for site, pauli in norm:
            if site < 1:
                raise ValueError(f"site index must be >= 1, got {site}")
            if pauli not in _LETTERS:
                raise ValueError(f"unknown Pauli letter {pauli!r} at site {site}")
        if len({s for s, _ in norm}) != len(norm):
            raise ValueError("duplicate site in Pauli string")
        object.__setattr__(self, "coefficient", coeff)
        object.__setattr__(self, "letters", norm)

    @property
    def letter_map(self) -> dict:
        return dict(self.letters)

    def max_site(self) -> int:
        return max((s for s, _ in self.letters), default=1)

    def masks(self) -> tuple:
        """(x_mask, y_mask, z_mask) bit masks; site i sits at bit i-1."""
        x = y = z = 0
        for site, pauli in self.letters:
            bit = 1 << (site - 1)
            if pauli == "X":
                x |= bit
            elif pauli == "Y":
                y |= bit
            else:
                z |= bit
        return x, y, z


@dataclass(frozen=True)
class HamiltonianSpec:
    """Canonical real-weighted Pauli-string sum on ``n_sites`` sites.

    Construction merges terms with identical strings and drops exact zero
    coefficients, so canonicalization is idempotent by design.
    """

    n_sites: int
    terms: tuple = ()

    def __post_init__(self):
        n = int(self.n_sites)
        if n < 1:
            raise SizeError(f"n_sites must be >= 1, got {n}")
        merged: dict = {}
        for term in self.terms:
            if not isinstance(term, PauliTerm):
                term = PauliTerm(*term)
            if term.max_site() > n:
                raise ValueError(
                    f"term {term.letters} exceeds chain of {n} sites"
                )
            merged[term.letters] = merged.get(term.letters, 0.0) + term.coefficient
        canon = tuple(
            PauliTerm(c, ls) for ls, c in sorted(merged.items()) if c != 0.0
        )
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "terms", canon)

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def term_map(self) -> dict:
        return {t.letters: t.coefficient for t in self.terms}

    def __add__(self, other: "HamiltonianSpec") -> "HamiltonianSpec":
        if other.n_sites != self.n_sites:
            raise DimensionMismatchError(
                f"cannot add specs on {self.n_sites} and {other.n_sites} sites"
            )
        return HamiltonianSpec(self.n_sites, self.terms + other.terms)

    def scaled(self, factor: float) -> "HamiltonianSpec":
        return HamiltonianSpec(
            self.n_sites,
            tuple(PauliTerm(factor * t.coefficient, t.letters) for t in self.terms),
        )

    # JSON schema: {"n_sites": N, "terms": [{"coeff": c, "letters": {"1": "X"}}]}
    def to_json(self) -> str:
        doc = {
            "n_sites": self.n_sites,
            "terms": [
                {"coeff": t.coefficient, "letters": {str(s): p for s, p in t.letters}}
                for t in self.terms
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "HamiltonianSpec":
        doc = json.loads(text)
        terms = [
            PauliTerm(t["coeff"], {int(s): p for s, p in t["letters"].items()})
            for t in doc["terms"]
        ]
        return cls(doc["n_sites"], tuple(terms))


@dataclass(frozen=True)
class BitConfig:
    """Classical configuration of the chain: one bit per site, site 1 first."""

    n_sites: int
    bits: tuple = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.n_sites:
            raise ValueError(
                f"expected {self.n_sites} bits, got {len(bits)}"
            )
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "BitConfig":
        return cls(len(text), tuple(int(c) for c in text))

    @classmethod
    def from_index(cls, n_sites: int, index: int) -> "BitConfig":
        return cls(n_sites, tuple((index >> i) & 1 for i in range(n_sites)))

    @classmethod
    def zeros(cls, n_sites: int) -> "BitConfig":
        return cls(n_sites, (0,) * n_sites)

    @classmethod
    def single(cls, n_sites: int, site: int) -> "BitConfig":
        """Configuration with a lone 1 at ``site``."""
        bits = [0] * n_sites
        bits[site - 1] = 1
        return cls(n_sites, tuple(bits))

    @property
    def index(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def reversed_sites(self) -> "BitConfig":
        return BitConfig(self.n_sites, self.bits[::-1])

    def __xor__(self, other: "BitConfig") -> "BitConfig":
        if other.n_sites != self.n_sites:
            raise DimensionMismatchError("XOR of configs of different lengths")
        return BitConfig(self.n_sites, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass
class StateVector:
    """Complex amplitudes over the 2^N computational basis.

    Not automatically normalized: operator application returns raw
    (unnormalized) results.  Evolution code checks norms explicitly.
    """

    n_sites: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_sites,):
            raise DimensionMismatchError(
                f"expected {1 << self.n_sites} amplitudes, got shape {amps.shape}"
            )
        self.amplitudes = amps

    @classmethod
    def basis_state(cls, config: BitConfig) -> "StateVector":
        amps = np.zeros(1 << config.n_sites, dtype=complex)
        amps[config.index] = 1.0
        return cls(config.n_sites, amps)

    @classmethod
    def superposition(cls, parts: Iterable) -> "StateVector":
        """Weighted sum of basis configs: iterable of (amplitude, BitConfig)."""
        parts = list(parts)
        n = parts[0][1].n_sites
        amps = np.zeros(1 << n, dtype=complex)
        for a, cfg in parts:
            if cfg.n_sites != n:
                raise DimensionMismatchError("mixed chain lengths in superposition")
            amps[cfg.index] += a
        return cls(n, amps)

    @classmethod
    def random(cls, n_sites: int, rng: np.random.Generator) -> "StateVector":
        amps = rng.normal(size=1 << n_sites) + 1j * rng.normal(size=1 << n_sites)
        amps /= np.linalg.norm(amps)
        return cls(n_sites, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.n_sites, self.amplitudes / self.norm)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        if other.n_sites != self.n_sites:
            raise DimensionMismatchError("overlap of states on different chains")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, config: BitConfig) -> complex:
        return complex(self.amplitudes[config.index])

    def site_up_probability(self, site: int) -> float:
        """Probability that the given site is measured in state 1."""
        idx = np.arange(self.amplitudes.size)
        mask = (idx >> (site - 1)) & 1
        return float(np.sum(np.abs(self.amplitudes[mask == 1]) ** 2))


def realize_dense(spec: HamiltonianSpec, cap: int = DENSE_CAP) -> np.ndarray:
    """Build the 2^N x 2^N matrix of ``spec`` by explicit Kronecker products.

    Raises SizeError above ``cap``; use :func:`apply_spec` matrix-free there.
    """
    n = spec.n_sites
    if n > cap:
        raise SizeError(
            f"dense realization refused at N={n} > cap {cap}; "
            "use the matrix-free action instead"
        )
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for term in spec.terms:
        letters = term.letter_map
        # site 1 occupies the least significant index block
        mat = np.array([[term.coefficient]], dtype=complex)
        for site in range(n, 0, -1):
            mat = np.kron(mat, PAULI_MATRICES[letters.get(site, "I")])
        out += mat
    return out


def _parity(values: np.ndarray) -> np.ndarray:
    """(-1)**popcount for an array of nonnegative ints."""
    return np.where(np.bitwise_count(values) & 1, -1.0, 1.0)


def apply_spec(spec: HamiltonianSpec, psi: StateVector) -> StateVector:
    """Matrix-free H|psi>; result is generally unnormalized.

    Each term acts by a bit-mask permutation (X, Y flips) and a sign /
    phase pattern (Z, Y), so cost is O(terms * 2^N) with no matrix built.
    """
    if spec.n_sites != psi.n_sites:
        raise DimensionMismatchError(
            f"operator on {spec.n_sites} sites applied to state on {psi.n_sites}"
        )
    dim = psi.amplitudes.size
    idx = np.arange(dim)
    out = np.zeros(dim, dtype=complex)
    for term in spec.terms:
        x_mask, y_mask, z_mask = term.masks()
        flip = x_mask | y_mask
        n_y = int(y_mask).bit_count()
        phase = term.coefficient * (1j ** n_y)
        signs = _parity(idx & (z_mask | y_mask))
        out[idx ^ flip] += phase * signs * psi.amplitudes
    return StateVector(psi.n_sites, out)


def expectation(spec: HamiltonianSpec, psi: StateVector, imag_tol: float = 1e-10) -> float:
    """<psi|H|psi> as a real number; trips an assertion if it is not."""
    value = psi.overlap(apply_spec(spec, psi))
    if abs(value.imag) >= imag_tol:
        raise SpinChainError(
            f"expectation value has imaginary part {value.imag:.3e}"
        )
    return value.real
