"""Polynomial identity checking over structure-constant tensors.

An identity is a finite sum of signed terms, each term a nested application
of tensors to named variables, asserted to vanish identically.  Three
complete strategies are provided:

* ``basis``   -- for identities multilinear in every variable, check all
  basis tuples.  Identities that are merely homogeneous (a variable repeats)
  are first fully polarized: each repeated variable is replaced by a sum of
  fresh copies and the multilinear component is extracted by inclusion /
  exclusion.  This is a complete decision procedure whenever the factorials
  of the degrees are invertible.
* ``exhaustive`` -- enumerate every vector assignment over a prime field.
* ``sampled`` -- seeded random spot checks (never reported as a proof).

Basis checks switch to an exact integer numpy evaluation when the tuple
count is large; witnesses are lexicographically minimal under either path.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import EnumerationBound, MethodError
from .ring import Ring
from .tensor import MultilinearMap

DEFAULT_MAX_ENUM = 10_000_000
DENSE_THRESHOLD = 40_000


def max_enum_cap() -> int:
    """Enumeration cap, overridable through JGL_MAX_ENUM."""
    try:
        return int(os.environ.get("JGL_MAX_ENUM", DEFAULT_MAX_ENUM))
    except ValueError:
        return DEFAULT_MAX_ENUM


# -- expression trees ---------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    tensor: MultilinearMap
    args: tuple

    def __post_init__(self):
        if len(self.args) != self.tensor.arity:
            raise MethodError("application arity mismatch")


def _occurrences(expr, acc: dict) -> None:
    if isinstance(expr, Var):
        acc[expr.name] = acc.get(expr.name, 0) + 1
    else:
        for a in expr.args:
            _occurrences(a, acc)


def _expr_dim(expr, var_dims: dict) -> int:
    if isinstance(expr, Var):
        return var_dims[expr.name]
    return expr.tensor.target_dim


@dataclass(frozen=True)
class Identity:
    """Sum of ``coeff * term`` asserted to be identically zero."""

    name: str
    variables: tuple  # ((name, dim), ...) in canonical order
    terms: tuple  # ((coeff, expr), ...)

    @property
    def var_dims(self) -> dict:
        return dict(self.variables)

    def degrees(self) -> dict:
        """Occurrence count per variable; must agree across terms."""
        degs: Optional[dict] = None
        for _, expr in self.terms:
            acc = {name: 0 for name, _ in self.variables}
            _occurrences(expr, acc)
            if degs is None:
                degs = acc
            elif degs != acc:
                raise MethodError(
                    f"identity {self.name!r} is not multihomogeneous"
                )
        return degs or {}

    def residual_dense(self, ring: Ring, assignment: dict) -> tuple:
        """Dense evaluation of the full signed sum."""
        out = None
        for coeff, expr in self.terms:
            val = _eval_dense(ring, expr, assignment)
            c = ring.of(coeff)
            if out is None:
                out = [ring.mul(c, v) for v in val]
            else:
                for i, v in enumerate(val):
                    out[i] = ring.add(out[i], ring.mul(c, v))
        return tuple(out or ())


def _eval_dense(ring: Ring, expr, assignment: dict) -> tuple:
    if isinstance(expr, Var):
        return assignment[expr.name]
    args = [_eval_dense(ring, a, assignment) for a in expr.args]
    return expr.tensor.evaluate(*args)


def _eval_sparse(ring: Ring, expr, assignment: dict) -> dict:
    if isinstance(expr, Var):
        return assignment[expr.name]
    args = [_eval_sparse(ring, a, assignment) for a in expr.args]
    return expr.tensor.evaluate_sparse(*args)


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # "pass" | "fail"
    method: str
    checked: int
    witness: Optional[dict] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status, "method": self.method, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


def _witness_from_assignment(ring: Ring, names_vectors) -> dict:
    return {name: [ring.fmt(x) for x in vec] for name, vec in names_vectors}


# -- the engine ---------------------------------------------------------------


def check_identity(
    identity: Identity,
    ring: Ring,
    method: str = "basis",
    seed: Optional[int] = None,
    samples: int = 200,
    prefer: str = "auto",
    max_enum: Optional[int] = None,
) -> Verdict:
    cap = max_enum_cap() if max_enum is None else max_enum
    degs = identity.degrees()
    if method == "basis":
        if all(d <= 1 for d in degs.values()):
            return _check_basis(identity, ring, prefer, cap)
        return _check_polarized(identity, ring, degs, cap)
    if method == "exhaustive":
        if not ring.is_finite:
            raise MethodError("exhaustive checking needs a prime field")
        return _check_exhaustive(identity, ring, cap)
    if method == "sampled":
        if seed is None:
            raise MethodError("sampled checking requires an explicit seed")
        return _check_sampled(identity, ring, seed, samples)
    raise MethodError(f"unknown method {method!r}")


def _basis_sparse_assignment(identity, idx_tuple):
    return {
        name: {i: 1} for (name, _), i in zip(identity.variables, idx_tuple)
    }


def _check_basis(identity: Identity, ring: Ring, prefer: str, cap: int) -> Verdict:
    dims = [d for _, d in identity.variables]
    total = math.prod(dims) if dims else 1
    if total > cap:
        raise EnumerationBound(f"basis enumeration of {total} tuples exceeds cap {cap}")
    if prefer == "dense" or (prefer == "auto" and total >= DENSE_THRESHOLD):
        verdict = _check_basis_dense(identity, ring, total)
        if verdict is not None:
            return verdict
    one = ring.one
    for idx in itertools.product(*(range(d) for d in dims)):
        out: dict = {}
        assignment = {
            name: {i: one} for (name, _), i in zip(identity.variables, idx)
        }
        for coeff, expr in identity.terms:
            val = _eval_sparse(ring, expr, assignment)
            c = ring.of(coeff)
            for tgt, v in val.items():
                acc = ring.add(out.get(tgt, ring.zero), ring.mul(c, v))
                if acc == 0:
                    out.pop(tgt, None)
                else:
                    out[tgt] = acc
        if out:
            tgt = min(out)
            witness = {
                "basis_tuple": list(idx),
                "target": tgt,
                "residual": ring.fmt(out[tgt]),
            }
            return Verdict("fail", "basis", checked=total, witness=witness)
    return Verdict("pass", "basis", checked=total)


def _check_basis_dense(identity: Identity, ring: Ring, total: int):
    """Exact integer evaluation of a fully multilinear identity via einsum.

    Returns None when the identity cannot be expressed with integer tensors
    (never happens for prime fields; over Q denominators are cleared).
    """
    try:
        import numpy as np
    except ImportError:  # pragma: no cover
        return None

    var_order = [name for name, _ in identity.variables]
    letters = "abcdefghijklmnopqrstuvwxyz"
    if len(var_order) + 8 > len(letters):
        return None
    var_letter = {name: letters[i] for i, name in enumerate(var_order)}

    p = ring.p if ring.is_finite else None
    term_arrays = []
    term_scales = []  # per-term denominator products over Q
    for coeff, expr in identity.terms:
        operands, subs, scale = [], [], 1
        fresh = iter(letters[len(var_order):])

        def build(e):
            nonlocal scale
            if isinstance(e, Var):
                return var_letter[e.name]
            child_letters = [build(a) for a in e.args]
            arr, s = e.tensor.dense_int()
            scale *= s
            out_l = next(fresh)
            operands.append(arr)
            subs.append("".join(child_letters) + out_l)
            return out_l

        out_letter = build(expr)
        spec = ",".join(subs) + "->" + "".join(var_letter[n] for n in var_order) + out_letter
        arr = np.einsum(spec, *operands, optimize=True)
        if p is not None:
            arr %= p
        elif abs(arr).max(initial=0) > 2**55:
            return None  # exact int64 headroom exhausted; use sparse path
        term_arrays.append(arr)
        term_scales.append(scale)

    if p is not None:
        acc = np.zeros_like(term_arrays[0])
        for arr, (coeff, _), scale in zip(term_arrays, identity.terms, term_scales):
            f = Fraction(coeff)
            c = (f.numerator * pow(f.denominator, p - 2, p)) % p
            if scale != 1:
                c = (c * pow(scale % p, p - 2, p)) % p
            acc = (acc + c * arr) % p
        residual = acc
    else:
        multipliers = [Fraction(c) / s for (c, _), s in zip(identity.terms, term_scales)]
        denom = 1
        for m in multipliers:
            denom = denom * m.denominator // math.gcd(denom, m.denominator)
        acc = np.zeros(term_arrays[0].shape, dtype=np.int64)
        for arr, m in zip(term_arrays, multipliers):
            acc = acc + int(m * denom) * arr
        residual = acc

    nz = np.argwhere(residual != 0)
    if len(nz) == 0:
        return Verdict("pass", "basis", checked=total)
    first = tuple(int(i) for i in nz[0])
    witness = {
        "basis_tuple": list(first[:-1]),
        "target": first[-1],
        "residual": str(residual[first]) if p is None else str(int(residual[first]) % p),
    }
    return Verdict("fail", "basis", checked=total, witness=witness)


def _check_polarized(identity: Identity, ring: Ring, degs: dict, cap: int) -> Verdict:
    """Full polarization by inclusion/exclusion over copies of repeated vars."""
    for name, d in degs.items():
        if d > 1:
            fact = math.factorial(d)
            if ring.is_finite and fact % ring.p == 0:
                raise MethodError(
                    f"polarization of degree {d} needs {d}! invertible in {ring.token()}"
                )
    var_dims = identity.var_dims
    copies = []  # (var name, copy index) in canonical order
    for name, _ in identity.variables:
        for c in range(max(degs.get(name, 1), 1)):
            copies.append((name, c))
    dims = [var_dims[name] for name, _ in copies]
    total_tuples = math.prod(dims) if dims else 1
    subset_count = math.prod(2 ** max(degs.get(name, 1), 1) for name, _ in identity.variables)
    if total_tuples * subset_count > cap:
        raise EnumerationBound(
            f"polarized enumeration of {total_tuples * subset_count} evaluations exceeds cap {cap}"
        )

    names = [name for name, _ in identity.variables]
    per_var_copy_counts = [max(degs.get(n, 1), 1) for n in names]
    # empty subsets contribute f(..,0,..) = 0 (positive degree), so skip them
    subset_space = [
        [m for m in itertools.product((0, 1), repeat=k) if any(m)]
        for k in per_var_copy_counts
    ]

    for idx in itertools.product(*(range(d) for d in dims)):
        # basis index per (var, copy)
        by_var: dict = {}
        for (name, c), i in zip(copies, idx):
            by_var.setdefault(name, []).append(i)
        out: dict = {}
        for subsets in itertools.product(*subset_space):
            sign = 1
            assignment = {}
            for name, k, mask in zip(names, per_var_copy_counts, subsets):
                chosen = [by_var[name][j] for j in range(k) if mask[j]]
                sign *= (-1) ** (k - len(chosen))
                vec: dict = {}
                for i in chosen:
                    vec[i] = ring.add(vec.get(i, ring.zero), ring.one)
                assignment[name] = {i: v for i, v in vec.items() if v != 0}
            for coeff, expr in identity.terms:
                val = _eval_sparse(ring, expr, assignment)
                c = ring.of(Fraction(coeff) * sign)
                for tgt, v in val.items():
                    acc = ring.add(out.get(tgt, ring.zero), ring.mul(c, v))
                    if acc == 0:
                        out.pop(tgt, None)
                    else:
                        out[tgt] = acc
        if out:
            tgt = min(out)
            witness = {
                "basis_tuple": list(idx),
                "copies": [f"{name}.{c}" for name, c in copies],
                "target": tgt,
                "residual": ring.fmt(out[tgt]),
            }
            return Verdict("fail", "polarized-basis", checked=total_tuples, witness=witness)
    return Verdict("pass", "polarized-basis", checked=total_tuples)


def _check_exhaustive(identity: Identity, ring: Ring, cap: int) -> Verdict:
    dims = [d for _, d in identity.variables]
    total = math.prod(ring.p ** d for d in dims) if dims else 1
    if total > cap:
        raise EnumerationBound(f"exhaustive enumeration of {total} tuples exceeds cap {cap}")
    spaces = [list(itertools.product(range(ring.p), repeat=d)) for d in dims]
    names = [name for name, _ in identity.variables]
    for vecs in itertools.product(*spaces):
        assignment = dict(zip(names, vecs))
        res = identity.residual_dense(ring, assignment)
        if any(v != 0 for v in res):
            witness = _witness_from_assignment(ring, zip(names, vecs))
            return Verdict("fail", "exhaustive", checked=total, witness=witness)
    return Verdict("pass", "exhaustive", checked=total)


def _random_vector(ring: Ring, rng: random.Random, dim: int) -> tuple:
    if ring.is_finite:
        return tuple(rng.randrange(ring.p) for _ in range(dim))
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(dim))


def _check_sampled(identity: Identity, ring: Ring, seed: int, samples: int) -> Verdict:
    rng = random.Random(seed)
    names = [name for name, _ in identity.variables]
    dims = [d for _, d in identity.variables]
    for _ in range(samples):
        vecs = [_random_vector(ring, rng, d) for d in dims]
        assignment = dict(zip(names, vecs))
        res = identity.residual_dense(ring, assignment)
        if any(v != 0 for v in res):
            witness = _witness_from_assignment(ring, zip(names, vecs))
            return Verdict("fail", "sampled", checked=samples, witness=witness)
    return Verdict("pass", "sampled", checked=samples, note="sampled evidence only")
