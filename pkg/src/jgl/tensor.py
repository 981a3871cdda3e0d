"""Sparse structure-constant tensors for bilinear and trilinear maps.

A :class:`MultilinearMap` stores the coefficients of a multilinear map
between based free modules as a sorted sparse list.  Sortedness makes tensor
equality a plain tuple comparison, which the verification layers rely on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import ShapeError
from .ring import Ring


@dataclass(frozen=True)
class MultilinearMap:
    ring: Ring
    arity: int
    slot_dims: tuple
    target_dim: int
    coeffs: tuple  # sorted tuple of (index_tuple, target_index, scalar)

    def __post_init__(self) -> None:
        if self.arity not in (2, 3):
            raise ShapeError("arity must be 2 or 3")
        if len(self.slot_dims) != self.arity:
            raise ShapeError("slot_dims length != arity")
        seen = set()
        for idx, tgt, c in self.coeffs:
            if len(idx) != self.arity:
                raise ShapeError("coefficient index arity mismatch")
            if any(not 0 <= i < d for i, d in zip(idx, self.slot_dims)):
                raise ShapeError(f"slot index out of range in {idx}")
            if not 0 <= tgt < self.target_dim:
                raise ShapeError(f"target index {tgt} out of range")
            if (idx, tgt) in seen:
                raise ShapeError(f"duplicate coefficient key {(idx, tgt)}")
            seen.add((idx, tgt))

    @staticmethod
    def build(ring: Ring, arity: int, slot_dims, target_dim: int, coeffs) -> "MultilinearMap":
        """Normalize, drop zeros, sort; the only constructor callers need."""
        acc: dict = {}
        for idx, tgt, c in coeffs:
            key = (tuple(int(i) for i in idx), int(tgt))
            val = ring.add(acc.get(key, ring.zero), ring.of(c))
            acc[key] = val
        items = tuple(
            (idx, tgt, c) for (idx, tgt), c in sorted(acc.items()) if c != 0
        )
        return MultilinearMap(ring, arity, tuple(int(d) for d in slot_dims), int(target_dim), items)

    @staticmethod
    def zero_map(ring: Ring, slot_dims, target_dim: int) -> "MultilinearMap":
        return MultilinearMap.build(ring, len(slot_dims), slot_dims, target_dim, [])

    @cached_property
    def _index(self) -> dict:
        """Basis-tuple lookup: index tuple -> tuple of (target, coeff)."""
        out: dict = {}
        for idx, tgt, c in self.coeffs:
            out.setdefault(idx, []).append((tgt, c))
        return {k: tuple(v) for k, v in out.items()}

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, *args) -> tuple:
        """Apply to dense coordinate tuples; returns a dense tuple."""
        if len(args) != self.arity:
            raise ShapeError("argument count != arity")
        for a, d in zip(args, self.slot_dims):
            if len(a) != d:
                raise ShapeError("argument dimension mismatch")
        r = self.ring
        out = [r.zero] * self.target_dim
        for idx, tgt, c in self.coeffs:
            term = c
            for slot, i in enumerate(idx):
                x = args[slot][i]
                if x == 0:
                    term = r.zero
                    break
                term = r.mul(term, x)
            if term != 0:
                out[tgt] = r.add(out[tgt], term)
        return tuple(out)

    def evaluate_sparse(self, *args) -> dict:
        """Apply to sparse {index: scalar} vectors; returns a sparse dict."""
        r = self.ring
        out: dict = {}
        index = self._index
        for combo in itertools.product(*(a.items() for a in args)):
            idx = tuple(i for i, _ in combo)
            hits = index.get(idx)
            if not hits:
                continue
            scale = r.one
            for _, x in combo:
                scale = r.mul(scale, x)
            if scale == 0:
                continue
            for tgt, c in hits:
                v = r.add(out.get(tgt, r.zero), r.mul(scale, c))
                if v == 0:
                    out.pop(tgt, None)
                else:
                    out[tgt] = v
        return out

    def basis_image(self, idx: tuple) -> tuple:
        """Value on a tuple of basis vectors, as ((target, coeff), ...)."""
        return self._index.get(tuple(idx), ())

    # -- derived tensors -------------------------------------------------------

    def scale(self, c) -> "MultilinearMap":
        r = self.ring
        c = r.of(c)
        return MultilinearMap.build(
            r, self.arity, self.slot_dims, self.target_dim,
            [(idx, tgt, r.mul(c, v)) for idx, tgt, v in self.coeffs],
        )

    def add(self, other: "MultilinearMap") -> "MultilinearMap":
        if (self.slot_dims, self.target_dim, self.ring) != (
            other.slot_dims, other.target_dim, other.ring
        ):
            raise ShapeError("tensor shape mismatch")
        return MultilinearMap.build(
            self.ring, self.arity, self.slot_dims, self.target_dim,
            list(self.coeffs) + list(other.coeffs),
        )

    def swap_slots(self, i: int, j: int) -> "MultilinearMap":
        dims = list(self.slot_dims)
        dims[i], dims[j] = dims[j], dims[i]
        out = []
        for idx, tgt, c in self.coeffs:
            jdx = list(idx)
            jdx[i], jdx[j] = jdx[j], jdx[i]
            out.append((tuple(jdx), tgt, c))
        return MultilinearMap.build(self.ring, self.arity, dims, self.target_dim, out)

    def contract_slot(self, slot: int, vec) -> "MultilinearMap":
        """Plug a fixed vector into one slot, lowering the arity by one."""
        if self.arity != 3:
            raise ShapeError("contract_slot expects a trilinear map")
        if len(vec) != self.slot_dims[slot]:
            raise ShapeError("vector dimension mismatch")
        r = self.ring
        dims = tuple(d for s, d in enumerate(self.slot_dims) if s != slot)
        out = []
        for idx, tgt, c in self.coeffs:
            x = vec[idx[slot]]
            if x == 0:
                continue
            jdx = tuple(i for s, i in enumerate(idx) if s != slot)
            out.append((jdx, tgt, r.mul(c, x)))
        return MultilinearMap.build(r, 2, dims, self.target_dim, out)

    # -- integer form for the dense identity checker ---------------------------

    def dense_int(self):
        """(numpy int64 array with axes slots+target, denominator scale).

        Over F_p the entries are canonical residues and scale is 1; over Q the
        entries are numerators after clearing the common denominator ``scale``.
        """
        import numpy as np

        shape = self.slot_dims + (self.target_dim,)
        arr = np.zeros(shape, dtype=np.int64)
        if self.ring.is_finite:
            for idx, tgt, c in self.coeffs:
                arr[idx + (tgt,)] = int(c)
            return arr, 1
        denom = 1
        for _, _, c in self.coeffs:
            f = Fraction(c)
            denom = denom * f.denominator // _gcd(denom, f.denominator)
        for idx, tgt, c in self.coeffs:
            f = Fraction(c) * denom
            arr[idx + (tgt,)] = int(f)
        return arr, denom

    def to_json_coeffs(self) -> list:
        return [
            list(idx) + [tgt, self.ring.fmt(c)] for idx, tgt, c in self.coeffs
        ]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def tensor_from_closed_form(ring: Ring, slot_dims, target_dim: int, evaluator) -> MultilinearMap:
    """Tabulate ``evaluator`` on all basis tuples into a sparse tensor.

    ``evaluator`` receives one basis index per slot and must return the dense
    value tuple; by multilinearity the resulting tensor agrees with it
    everywhere.
    """
    coeffs = []
    for idx in itertools.product(*(range(d) for d in slot_dims)):
        val = evaluator(*idx)
        for tgt, c in enumerate(val):
            if c != 0:
                coeffs.append((idx, tgt, c))
    return MultilinearMap.build(ring, len(slot_dims), slot_dims, target_dim, coeffs)
