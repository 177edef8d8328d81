"""Sign characteristic and the canonical block list of the pair (A, H).

Block types:

1. a real eigenvalue with H_j = +1 or -1;
2. a non-real pair x +- iy with H_j = [[0, 1], [1, 0]];
3. a 2x2 Jordan block at a real eigenvalue with H_j = +-[[0, 1], [1, 0]];
4. a 3x3 Jordan block at a real eigenvalue with the 3x3 sip matrix.

For a simple eigenvalue the sign is sign(g' - 1). For a 2x2 block it is
sign(g''): along the vanishing eigenvalue curve nu(lambda) of lambda H - HA,
nu'' = g'' / (1 + g') at a double root, so the block sign is +1 exactly when
the graph of g lies locally above the line h. The same sign comes out of the
Jordan chain, <H x_1, x_0> with (A - lambda) x_1 = x_0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from . import _tol
from .errors import AmbiguousSign, CanonicalViolation
from .secular import EigenStructure, SecularFunction

_INERTIA = {2: (1, 1), 3: (1, 1), 4: (2, 1)}


@dataclass(frozen=True)
class SignedBlock:
    """One block of the canonical form.

    ``eigenvalue`` is real for types 1, 3, 4 and the upper half-plane member
    of the pair for type 2. ``epsilon`` is None for type 2. Type 4 carries
    +1, but its H block has no free sign (see :attr:`sign_is_free`).
    """

    block_type: int
    eigenvalue: complex
    size: int
    epsilon: Optional[int]
    detached: bool = False

    @property
    def sign_is_free(self):
        return self.block_type in (1, 3)

    @property
    def inertia(self) -> Tuple[int, int]:
        if self.block_type == 1:
            return (1, 0) if self.epsilon > 0 else (0, 1)
        return _INERTIA[self.block_type]

    def matrices(self):
        """The pair (A_j, H_j) as dense arrays."""
        lam = self.eigenvalue
        if self.block_type == 1:
            return np.array([[lam.real]], dtype=complex), np.array([[float(self.epsilon)]])
        if self.block_type == 2:
            return np.diag([lam, lam.conjugate()]), np.array([[0.0, 1.0], [1.0, 0.0]])
        sip = np.fliplr(np.eye(self.size))
        jordan = lam.real * np.eye(self.size, dtype=complex) + np.eye(self.size, k=1)
        if self.block_type == 3:
            return jordan, self.epsilon * sip
        return jordan, sip


@dataclass(frozen=True)
class CanonicalForm:
    blocks: Tuple[SignedBlock, ...]
    case_label: str

    @property
    def n(self):
        return sum(b.size for b in self.blocks)

    def signature(self) -> Tuple[int, int]:
        pos = sum(b.inertia[0] for b in self.blocks)
        neg = sum(b.inertia[1] for b in self.blocks)
        return pos, neg

    def matrices(self):
        """Block diagonal (A_1 + ... + A_k, H_1 + ... + H_k)."""
        if not self.blocks:
            return np.zeros((0, 0), dtype=complex), np.zeros((0, 0))
        As, Hs = zip(*(b.matrices() for b in self.blocks))
        return block_diag(*As), block_diag(*Hs)

    def signs(self):
        """Signs of the type-1 blocks, ordered by decreasing eigenvalue."""
        ones = sorted((b for b in self.blocks if b.block_type == 1),
                      key=lambda b: -b.eigenvalue.real)
        return [b.epsilon for b in ones]


def _sign(x):
    return 1 if x > 0 else -1


def assign_signs(e: EigenStructure, s: SecularFunction) -> List[SignedBlock]:
    """Canonical blocks with signs for a solved spectrum.

    Raises
    ------
    AmbiguousSign
        |g'(lambda) - 1| <= 1e-9 at a simple eigenvalue, or g''(lambda) is
        within 1e-9 (relative to g'/distance to the nearest pole) of zero at a
        double one. Either means the multiplicity upstream is unreliable.
    """
    threshold = _tol.scaled(_tol.SIGN)
    blocks = []
    pair_done = False
    for r in e.records:
        if not r.is_real:
            if not pair_done:
                z = r.value if r.value.imag > 0 else r.value.conjugate()
                blocks.append(SignedBlock(2, complex(z), 2, None))
                pair_done = True
            continue
        lam = r.value.real
        mult = r.algebraic_multiplicity
        if s.m == 0:
            # g is identically zero: g' - 1 = -1
            blocks.append(SignedBlock(1, complex(lam), 1, -1))
            continue
        dg, d2g = s._dg(lam), s._d2g(lam)
        if mult == 1:
            if abs(dg - 1.0) <= threshold:
                raise AmbiguousSign(f"g'({lam!r}) - 1 = {dg - 1.0:.3e} at a simple eigenvalue")
            blocks.append(SignedBlock(1, complex(lam), 1, _sign(dg - 1.0)))
        elif mult == 2:
            scale = max(1.0, dg / float(np.min(np.abs(lam - s.poles))))
            if abs(d2g) <= threshold * scale:
                raise AmbiguousSign(f"g''({lam!r}) = {d2g:.3e} at a double eigenvalue")
            blocks.append(SignedBlock(3, complex(lam), 2, _sign(d2g)))
        elif mult == 3:
            blocks.append(SignedBlock(4, complex(lam), 3, 1))
        else:
            raise AmbiguousSign(f"multiplicity {mult} at {lam!r} has no canonical block")
    return blocks


def assemble_canonical_form(blocks: Sequence[SignedBlock], detached=(), case_label="",
                            n: Optional[int] = None) -> CanonicalForm:
    """Append +1 blocks for the detached eigenvalues and validate the result.

    Raises
    ------
    CanonicalViolation
        More than one block of type 2, 3 or 4; more than one negative type-1
        sign; or an H signature other than (n - 1, 1).
    """
    all_blocks = list(blocks) + [SignedBlock(1, complex(float(x)), 1, 1, detached=True)
                                 for x in detached]
    cf = CanonicalForm(tuple(all_blocks), case_label)
    special = [b for b in all_blocks if b.block_type in (2, 3, 4)]
    if len(special) > 1:
        raise CanonicalViolation(
            f"only one block of type 2, 3 or 4 may occur, found {len(special)}")
    negatives = [b for b in all_blocks if b.block_type == 1 and b.epsilon < 0]
    if len(negatives) > 1:
        raise CanonicalViolation(
            f"only one real eigenvalue may carry a negative sign, found {len(negatives)}")
    total = cf.n if n is None else n
    if cf.n != total:
        raise CanonicalViolation(f"blocks cover {cf.n} dimensions, expected {total}")
    if cf.signature() != (total - 1, 1):
        raise CanonicalViolation(
            f"signature {cf.signature()} differs from ({total - 1}, 1)")
    return cf


def sign_census_violations(e: EigenStructure, blocks: Sequence[SignedBlock]) -> List[str]:
    """Check the per-case placement of the negative sign.

    1a: on the smallest eigenvalue; 3a: on the largest; 4a: on the middle
    root of the three-root interval. For the 2x2 blocks 1b and 4c carry +1
    while 3b and 4b carry -1. Returns human-readable problems (empty when
    consistent).
    """
    problems = []
    label = e.case_label
    ones = sorted((b for b in blocks if b.block_type == 1 and not b.detached),
                  key=lambda b: b.eigenvalue.real)
    negative = [b for b in ones if b.epsilon < 0]
    if label in ("1a", "3a", "4a"):
        if len(negative) != 1:
            return [f"case {label}: expected exactly one negative sign, found {len(negative)}"]
        neg = negative[0].eigenvalue.real
        if label == "1a" and neg != ones[0].eigenvalue.real:
            problems.append("case 1a: the negative sign is not on the smallest eigenvalue")
        if label == "3a" and neg != ones[-1].eigenvalue.real:
            problems.append("case 3a: the negative sign is not on the largest eigenvalue")
        if label == "4a":
            host = e.report.hosting_interval if e.report else None
            trio = sorted(r.value.real for r in e.records
                          if r.is_real and r.interval_index == host)
            if len(trio) != 3 or neg != trio[1]:
                problems.append("case 4a: the negative sign is not on the middle root")
    elif negative:
        problems.append(f"case {label}: type-1 blocks carry {len(negative)} negative signs")
    expected = {"1b": 1, "3b": -1, "4b": -1, "4c": 1}
    if label in expected:
        twos = [b for b in blocks if b.block_type == 3]
        if len(twos) != 1 or twos[0].epsilon != expected[label]:
            problems.append(f"case {label}: 2x2 block sign should be {expected[label]:+d}")
    return problems
