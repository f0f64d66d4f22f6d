"""Core CSP model: Boolean predicates, exact local distributions, factor graphs.

Internal convention is the ±1 alphabet with +1 standing for Boolean 1.  A string
x in {±1}^k is encoded as the index sum((x_j == +1) << j), i.e. little-endian in
the coordinates.  All probabilities are exact Fractions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def index_of(bits: Sequence[int]) -> int:
    """Encode a ±1 string as an integer index."""
    idx = 0
    for j, b in enumerate(bits):
        if b == 1:
            idx |= 1 << j
        elif b != -1:
            raise ValueError(f"entries must be +/-1, got {b}")
    return idx


def bits_of(idx: int, k: int) -> tuple[int, ...]:
    """Decode an index back into a ±1 string of length k."""
    return tuple(1 if (idx >> j) & 1 else -1 for j in range(k))


def _negation_mask(negation: Sequence[int]) -> int:
    # flipping coordinate j permutes indices by XOR with bit j
    return sum(1 << j for j, z in enumerate(negation) if z == -1)


@dataclass(frozen=True)
class Predicate:
    """A k-ary predicate with values in [0,1] (generalized) or {0,1} (Boolean).

    `values[i]` is the predicate value on the string encoded by index i.
    """

    k: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not (1 <= self.k <= 16):
            raise ValueError(f"arity {self.k} out of range")
        if len(self.values) != 1 << self.k:
            raise ValueError("truth table length must be 2^k")
        for v in self.values:
            if not (0 <= v <= 1):
                raise ValueError("predicate values must lie in [0,1]")

    @classmethod
    def from_table(cls, k: int, values: Iterable) -> "Predicate":
        return cls(k, tuple(Fraction(v) for v in values))

    @classmethod
    def and_p(cls, k: int) -> "Predicate":
        vals = [ZERO] * (1 << k)
        vals[(1 << k) - 1] = ONE
        return cls(k, tuple(vals))

    @classmethod
    def or_p(cls, k: int) -> "Predicate":
        vals = [ONE] * (1 << k)
        vals[0] = ZERO
        return cls(k, tuple(vals))

    @classmethod
    def xor_p(cls, k: int, sign: int = 1) -> "Predicate":
        """Parity predicate: satisfied iff the product of the bits equals sign."""
        vals = []
        for i in range(1 << k):
            prod = 1 if bin(i).count("1") % 2 == (k % 2) else -1
            # product of bits = (-1)^(# of -1 entries) = (-1)^(k - popcount)
            vals.append(ONE if prod == sign else ZERO)
        return cls(k, tuple(vals))

    @classmethod
    def cut_gadget(cls) -> "Predicate":
        """The 4-ary generalized predicate valued 1/2, 3/4, 1 at |sum| = 0, 2, 4."""
        vals = []
        for i in range(16):
            s = abs(2 * bin(i).count("1") - 4)
            vals.append({0: Fraction(1, 2), 2: Fraction(3, 4), 4: ONE}[s])
        return cls(4, tuple(vals))

    @property
    def is_boolean(self) -> bool:
        return all(v in (ZERO, ONE) for v in self.values)

    def value(self, bits: Sequence[int]) -> Fraction:
        return self.values[index_of(bits)]

    def satisfies(self, bits: Sequence[int]) -> bool:
        return self.values[index_of(bits)] == ONE

    def mean(self) -> Fraction:
        """Expectation over the uniform distribution on {±1}^k."""
        return sum(self.values, ZERO) / (1 << self.k)

    def reorient(self, negation: Sequence[int]) -> "Predicate":
        """The predicate x -> P(negation ⊙ x)."""
        mask = _negation_mask(negation)
        return Predicate(self.k, tuple(self.values[i ^ mask] for i in range(1 << self.k)))

    def fourier(self) -> dict[tuple[int, ...], Fraction]:
        """Exact Fourier coefficients indexed by sorted coordinate subsets."""
        coeffs: dict[tuple[int, ...], Fraction] = {}
        n = 1 << self.k
        for T in itertools.chain.from_iterable(
            itertools.combinations(range(self.k), sz) for sz in range(self.k + 1)
        ):
            acc = ZERO
            for i in range(n):
                chi = 1
                for j in T:
                    if not (i >> j) & 1:
                        chi = -chi
                acc += self.values[i] * chi
            c = acc / n
            if c != 0:
                coeffs[T] = c
        return coeffs


def multilinear_extension(P: Predicate, mu: Sequence) -> Fraction:
    """Evaluate P's multilinear extension at means mu in [-1,1]^k.

    Equals E[P(x)] when the bits are independent ±1 with E[x_j] = mu_j.
    """
    if len(mu) != P.k:
        raise ValueError("mean vector length must equal the arity")
    mu = [Fraction(m) for m in mu]
    for m in mu:
        if not (-1 <= m <= 1):
            raise ValueError("means must lie in [-1, 1]")
    total = ZERO
    for T, c in P.fourier().items():
        term = c
        for j in T:
            term *= mu[j]
        total += term
    return total


@dataclass(frozen=True)
class LocalDistribution:
    """Finite distribution on {±1}^k with exact rational weights.

    `support` is a multiset of string indices realizing the weights exactly;
    `uniformity` is the declared t-1 level, verified at construction.
    """

    k: int
    weights: tuple[Fraction, ...]
    uniformity: int
    support: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != 1 << self.k:
            raise ValueError("weight vector length must be 2^k")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if sum(self.weights, ZERO) != 1:
            raise ValueError("weights must sum to exactly 1")
        counts = [0] * (1 << self.k)
        for idx in self.support:
            counts[idx] += 1
        m = len(self.support)
        if m == 0 or any(Fraction(c, m) != w for c, w in zip(counts, self.weights)):
            raise ValueError("support multiset does not realize the weights")
        if not (0 <= self.uniformity <= self.k):
            raise ValueError("uniformity level out of range")
        if not check_kwise_uniform(self, self.uniformity):
            raise ValueError(f"declared {self.uniformity}-wise uniformity fails")

    @classmethod
    def from_multiset(cls, k: int, strings: Iterable, uniformity: Optional[int] = None) -> "LocalDistribution":
        """Build the uniform distribution over a multiset of ±1 strings (or indices)."""
        idxs = []
        for s in strings:
            idxs.append(s if isinstance(s, int) else index_of(s))
        idxs.sort()
        m = len(idxs)
        counts = [0] * (1 << k)
        for i in idxs:
            counts[i] += 1
        weights = tuple(Fraction(c, m) for c in counts)
        if uniformity is None:
            probe = cls(k, weights, 0, tuple(idxs))
            uniformity = 0
            while uniformity < k and check_kwise_uniform(probe, uniformity + 1):
                uniformity += 1
        return cls(k, weights, uniformity, tuple(idxs))

    @classmethod
    def uniform(cls, k: int) -> "LocalDistribution":
        return cls.from_multiset(k, range(1 << k), uniformity=k)

    @classmethod
    def point_mass(cls, bits: Sequence[int]) -> "LocalDistribution":
        return cls.from_multiset(len(bits), [index_of(bits)], uniformity=0)

    @classmethod
    def parity_support(cls, k: int, sign: int = 1) -> "LocalDistribution":
        """Uniform over strings whose coordinate product equals sign; (k-1)-wise uniform."""
        pred = Predicate.xor_p(k, sign)
        idxs = [i for i in range(1 << k) if pred.values[i] == ONE]
        return cls.from_multiset(k, idxs, uniformity=k - 1)

    @classmethod
    def ne_pair(cls) -> "LocalDistribution":
        """Uniform on {(+1,-1), (-1,+1)}: the 1-wise uniform ≠ distribution."""
        return cls.from_multiset(2, [index_of((1, -1)), index_of((-1, 1))], uniformity=1)

    def moment(self, T: Sequence[int]) -> Fraction:
        """E[prod_{j in T} x_j] exactly."""
        acc = ZERO
        for i, w in enumerate(self.weights):
            if w == 0:
                continue
            chi = 1
            for j in T:
                if not (i >> j) & 1:
                    chi = -chi
            acc += w * chi
        return acc

    def prob(self, bits: Sequence[int]) -> Fraction:
        return self.weights[index_of(bits)]

    def reorient(self, negation: Sequence[int]) -> "LocalDistribution":
        """The distribution of negation ⊙ x for x ~ self."""
        mask = _negation_mask(negation)
        w = [ZERO] * (1 << self.k)
        for i, wi in enumerate(self.weights):
            w[i ^ mask] = wi
        supp = tuple(sorted(i ^ mask for i in self.support))
        return LocalDistribution(self.k, tuple(w), self.uniformity, supp)

    def support_set(self) -> frozenset[int]:
        return frozenset(self.support)


def check_kwise_uniform(nu: LocalDistribution, t: int) -> bool:
    """True iff every moment E[x^T] vanishes exactly for all nonempty |T| <= t."""
    if not (0 <= t <= nu.k):
        raise ValueError("t out of range")
    for size in range(1, t + 1):
        for T in itertools.combinations(range(nu.k), size):
            if nu.moment(T) != 0:
                return False
    return True


def expectation_under(P: Predicate, nu: LocalDistribution) -> Fraction:
    """Exact E_nu[P]."""
    if P.k != nu.k:
        raise ValueError("arity mismatch between predicate and distribution")
    return sum((w * v for w, v in zip(nu.weights, P.values)), ZERO)


def mix_distributions(S: Sequence[int], P: Predicate, L: int, R: int) -> tuple[list[int], Fraction]:
    """Mixture multiset T: 2^k(L-1)R copies of S plus |S|R copies of the full cube.

    Returns (T, eps') where the satisfaction rate of T under P is beta - eps'
    with eps' = (beta - E_uniform[P]) / L exactly.
    """
    if L < 1 or R < 1:
        raise ValueError("L and R must be >= 1")
    k = P.k
    S = [s if isinstance(s, int) else index_of(s) for s in S]
    beta = sum((P.values[i] for i in S), ZERO) / len(S)
    eta = P.mean()
    if beta <= eta:
        raise ValueError("mixture construction requires beta > E_uniform[P]")
    cube = list(range(1 << k))
    T = S * ((1 << k) * (L - 1) * R) + cube * (len(S) * R)
    eps_prime = (beta - eta) / L
    assert len(T) == (1 << k) * L * R * len(S)
    return T, eps_prime


@dataclass(frozen=True)
class Constraint:
    """One constraint: ordered scope, local distribution, uniformity level t,
    negation pattern, and (optionally) the predicate it came from."""

    scope: tuple[int, ...]
    dist: LocalDistribution
    t: int
    negation: tuple[int, ...]
    predicate: Optional[Predicate] = None
    tag: str = "csp"

    def __post_init__(self):
        k = self.dist.k
        if len(self.scope) != k or len(self.negation) != k:
            raise ValueError("scope/negation length must equal the arity")
        if len(set(self.scope)) != k:
            raise ValueError("scope entries must be distinct")
        if not (1 <= self.t <= k + 1):
            raise ValueError("need 1 <= t <= k+1")
        if self.predicate is not None and self.predicate.k != k:
            raise ValueError("arity mismatch between scope and predicate")

    @property
    def k(self) -> int:
        return self.dist.k

    def oriented_dist(self) -> LocalDistribution:
        """The local distribution with the negation pattern folded in."""
        return self.dist.reorient(self.negation)

    def oriented_predicate(self) -> Predicate:
        if self.predicate is None:
            raise ValueError("constraint carries no predicate")
        return self.predicate.reorient(self.negation)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        if self.predicate is None:
            raise ValueError("constraint carries no predicate")
        local = tuple(x[i] * z for i, z in zip(self.scope, self.negation))
        return self.predicate.satisfies(local)


@dataclass(frozen=True)
class FactorGraph:
    """Bipartite variable/constraint structure with per-constraint distributions."""

    n: int
    constraints: tuple[Constraint, ...]
    groups: Optional[tuple[int, ...]] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for c in self.constraints:
            for v in c.scope:
                if not (0 <= v < self.n):
                    raise ValueError(f"scope variable {v} out of range")
        if self.groups is not None and len(self.groups) != len(self.constraints):
            raise ValueError("group annotation length mismatch")

    @property
    def m(self) -> int:
        return len(self.constraints)

    def max_arity(self) -> int:
        return max((c.k for c in self.constraints), default=0)


def objective_value(G: FactorGraph, x: Sequence[int]) -> Fraction:
    """Fraction of satisfied constraints under the assignment x."""
    if len(x) != G.n:
        raise ValueError(f"assignment length {len(x)} != n = {G.n}")
    if G.m == 0:
        raise ValueError("objective undefined for an empty instance")
    sat = sum(1 for c in G.constraints if c.satisfied_by(x))
    return Fraction(sat, G.m)
