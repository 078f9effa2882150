"""Entropy and KL divergence over explicit finite distributions, in nats.

All logarithms are natural. Arithmetic is double precision with two
package-wide tolerances: ``IDENTITY_TOL`` (1e-10) for identities that are
exact in real arithmetic and ``NONNEG_TOL`` (1e-12) for quantities that
are non-negative in real arithmetic.

Conventions:

* ``0 * ln(0)`` and ``0 * ln(0/0)`` are 0.
* A KL divergence whose first argument puts mass outside the support of
  the second is ``INFINITE`` (``float('inf')``), a distinguished value
  rather than an exception; it compares larger than any finite real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

IDENTITY_TOL = 1e-10
NONNEG_TOL = 1e-12
MASS_TOL = 1e-12

INFINITE = math.inf


def _as_mass_array(mass: Sequence[float], what: str) -> np.ndarray:
    arr = np.asarray(mass, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{what}: mass must be one-dimensional")
    if arr.size == 0:
        raise ValidationError(f"{what}: empty support")
    if np.any(arr < 0):
        raise ValidationError(f"{what}: negative mass")
    total = float(arr.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ValidationError(f"{what}: masses sum to {total!r}, not 1")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """Probability mass over an ordered, enumerated finite support."""

    support: tuple
    mass: np.ndarray

    def __post_init__(self):
        support = tuple(self.support)
        if len(set(support)) != len(support):
            raise ValidationError("FiniteDistribution: support labels must be distinct")
        arr = _as_mass_array(self.mass, "FiniteDistribution")
        if arr.size != len(support):
            raise ValidationError("FiniteDistribution: support/mass length mismatch")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", arr)

    def __len__(self) -> int:
        return len(self.support)

    def prob(self, label) -> float:
        return float(self.mass[self.support.index(label)])

    @classmethod
    def uniform(cls, support: Iterable) -> "FiniteDistribution":
        support = tuple(support)
        n = len(support)
        return cls(support, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, support: Iterable, label) -> "FiniteDistribution":
        support = tuple(support)
        mass = np.zeros(len(support))
        mass[support.index(label)] = 1.0
        return cls(support, mass)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint probability mass over named axes with per-axis supports.

    The table is stored as an ndarray whose shape matches the per-axis
    support sizes, so projection onto any axis subset is a sum over the
    remaining axes.
    """

    axes: tuple
    supports: tuple
    table: np.ndarray

    def __post_init__(self):
        axes = tuple(self.axes)
        supports = tuple(tuple(s) for s in self.supports)
        if len(axes) != len(supports) or not axes:
            raise ValidationError("JointDistribution: need one support per axis")
        if len(set(axes)) != len(axes):
            raise ValidationError("JointDistribution: axis names must be distinct")
        for ax, sup in zip(axes, supports):
            if len(set(sup)) != len(sup) or not sup:
                raise ValidationError(f"JointDistribution: axis {ax!r} support invalid")
        table = np.asarray(self.table, dtype=float)
        if table.shape != tuple(len(s) for s in supports):
            raise ValidationError("JointDistribution: table shape mismatch")
        if np.any(table < 0):
            raise ValidationError("JointDistribution: negative mass")
        total = float(table.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise ValidationError(f"JointDistribution: masses sum to {total!r}, not 1")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "table", table)

    def axis_positions(self, names: Iterable) -> tuple:
        names = tuple(names)
        unknown = [n for n in names if n not in self.axes]
        if unknown:
            raise ValidationError(f"unknown axes {unknown!r}")
        if len(set(names)) != len(names):
            raise ValidationError("repeated axis names")
        return tuple(self.axes.index(n) for n in names)

    def marginal_table(self, names: Iterable) -> np.ndarray:
        """Project onto ``names``, axes ordered as in this joint."""
        keep = sorted(self.axis_positions(names))
        drop = tuple(i for i in range(len(self.axes)) if i not in keep)
        return self.table.sum(axis=drop) if drop else self.table

    def marginal(self, names: Iterable) -> "JointDistribution":
        keep = sorted(self.axis_positions(names))
        return JointDistribution(
            tuple(self.axes[i] for i in keep),
            tuple(self.supports[i] for i in keep),
            self.marginal_table(tuple(self.axes[i] for i in keep)),
        )

    def to_distribution(self) -> FiniteDistribution:
        """Flatten to a FiniteDistribution over outcome tuples."""
        import itertools

        labels = tuple(itertools.product(*self.supports))
        return FiniteDistribution(labels, self.table.reshape(-1))


def _entropy_of_masses(mass: np.ndarray) -> float:
    pos = mass[mass > 0]
    return float(-(pos * np.log(pos)).sum()) + 0.0 if pos.size else 0.0


def _kl_of_masses(p: np.ndarray, q: np.ndarray) -> float:
    sel = p > 0
    if np.any(q[sel] == 0):
        return INFINITE
    pp, qq = p[sel], q[sel]
    return float((pp * np.log(pp / qq)).sum())


def entropy(p: FiniteDistribution) -> float:
    """Shannon entropy sum p(x) ln(1/p(x)), in [0, ln |support|]."""
    if not isinstance(p, FiniteDistribution):
        raise ValidationError("entropy expects a FiniteDistribution")
    return _entropy_of_masses(p.mass)


def joint_entropy(joint: JointDistribution, names: Iterable) -> float:
    return _entropy_of_masses(joint.marginal_table(names).reshape(-1))


def conditional_entropy(joint: JointDistribution, target: Iterable, given: Iterable = ()) -> float:
    """H(target | given) = E_{P(given)}[H(target | given=z)].

    Also equals H(target, given) - H(given); the two evaluations are
    cross-checked internally to IDENTITY_TOL.
    """
    target = tuple(target)
    given = tuple(given)
    if not target:
        raise ValidationError("conditional_entropy: empty target")
    if set(target) & set(given):
        raise ValidationError("conditional_entropy: target and given overlap")
    joint.axis_positions(target + given)

    if not given:
        return joint_entropy(joint, target)

    block = _target_given_matrix(joint, target, given)
    weights = block.sum(axis=0)
    direct = 0.0
    for z in range(block.shape[1]):
        pz = weights[z]
        if pz > 0:
            direct += pz * _entropy_of_masses(block[:, z] / pz)

    chain = joint_entropy(joint, target + given) - joint_entropy(joint, given)
    if abs(direct - chain) > IDENTITY_TOL:
        raise ValidationError(
            f"conditional_entropy: chain-rule cross-check failed ({direct} vs {chain})"
        )
    return direct


def _target_given_matrix(joint: JointDistribution, target: tuple, given: tuple) -> np.ndarray:
    """Marginal over target+given reshaped to (|target cells|, |given cells|)."""
    sub = joint.marginal(target + given)
    tpos = sub.axis_positions(target)
    gpos = sub.axis_positions(given)
    moved = np.moveaxis(sub.table, tpos + gpos, range(len(tpos) + len(gpos)))
    tsize = int(np.prod([len(sub.supports[i]) for i in tpos]))
    return moved.reshape(tsize, -1)


def kl_divergence(p: FiniteDistribution, q: FiniteDistribution) -> float:
    """KL(p || q) over an aligned support; INFINITE on support violation."""
    if p.support != q.support:
        raise ValidationError("kl_divergence: mismatched support orderings")
    return _kl_of_masses(p.mass, q.mass)


def conditional_kl(
    p_joint: JointDistribution,
    q_joint: JointDistribution,
    target: Iterable,
    given: Iterable,
) -> float:
    """E over P(given) of KL(P_{target|z} || Q_{target|z}).

    Conditioning values with P(given=z) = 0 are skipped; a z with
    positive P-weight but zero Q-weight is a support violation and the
    result is INFINITE.
    """
    target = tuple(target)
    given = tuple(given)
    if not target:
        raise ValidationError("conditional_kl: empty target")
    if set(target) & set(given):
        raise ValidationError("conditional_kl: target and given overlap")
    if p_joint.axes != q_joint.axes or p_joint.supports != q_joint.supports:
        raise ValidationError("conditional_kl: joints must share axes and supports")

    if not given:
        p_m = p_joint.marginal_table(target).reshape(-1)
        q_m = q_joint.marginal_table(target).reshape(-1)
        return _kl_of_masses(p_m, q_m)

    p_block = _target_given_matrix(p_joint, target, given)
    q_block = _target_given_matrix(q_joint, target, given)
    p_w = p_block.sum(axis=0)
    q_w = q_block.sum(axis=0)
    total = 0.0
    for z in range(p_block.shape[1]):
        pz = p_w[z]
        if pz == 0:
            continue
        if q_w[z] == 0:
            return INFINITE
        term = _kl_of_masses(p_block[:, z] / pz, q_block[:, z] / q_w[z])
        if term == INFINITE:
            return INFINITE
        total += pz * term
    return total


def kl_bernoulli(p: float, q: float) -> float:
    """KL between Bernoulli(p) and Bernoulli(q); INFINITE when q in {0,1}, p != q."""
    if not (0.0 <= p <= 1.0) or not (0.0 <= q <= 1.0):
        raise ValidationError("kl_bernoulli: arguments must lie in [0, 1]")
    total = 0.0
    if p > 0:
        if q == 0:
            return INFINITE
        total += p * math.log(p / q)
    if p < 1:
        if q == 1:
            return INFINITE
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return total


def mutual_information(joint: JointDistribution, a: Iterable, b: Iterable) -> float:
    """I(a; b) = KL(P_{a,b} || P_a x P_b)."""
    a = tuple(a)
    b = tuple(b)
    if set(a) & set(b):
        raise ValidationError("mutual_information: axis sets overlap")
    if not a or not b:
        raise ValidationError("mutual_information: empty axis set")
    block = _target_given_matrix(joint, a, b)  # rows: a-cells, cols: b-cells
    p_a = block.sum(axis=1)
    p_b = block.sum(axis=0)
    product = np.outer(p_a, p_b)
    return _kl_of_masses(block.reshape(-1), product.reshape(-1))
