"""Jordan pairs, triple systems, algebras, Lie triple systems and the
functors between them (polarization, the Jordan-Lie functor, homotopes,
quadratic operators, invertibility and the unital round trip)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import JglError, MethodError, RingError, ShapeError
from .identities import App, Identity, Var, Verdict, check_identity, max_enum_cap
from .matrix import Matrix
from .report import Check, Report
from .ring import Ring
from .tensor import MultilinearMap, tensor_from_closed_form


@dataclass(frozen=True)
class JordanPair:
    """(V+, V-) with trilinear maps T+ : V+ x V- x V+ -> V+ and T- dually."""

    ring: Ring
    nplus: int
    nminus: int
    tplus: MultilinearMap
    tminus: MultilinearMap

    def __post_init__(self):
        if self.tplus.slot_dims != (self.nplus, self.nminus, self.nplus):
            raise ShapeError("tplus slot dims inconsistent")
        if self.tminus.slot_dims != (self.nminus, self.nplus, self.nminus):
            raise ShapeError("tminus slot dims inconsistent")
        if self.tplus.target_dim != self.nplus or self.tminus.target_dim != self.nminus:
            raise ShapeError("target dims inconsistent")

    def t(self, sign: str) -> MultilinearMap:
        return self.tplus if sign == "+" else self.tminus

    def dim(self, sign: str) -> int:
        return self.nplus if sign == "+" else self.nminus

    @property
    def total_dim(self) -> int:
        return self.nplus + self.nminus


@dataclass(frozen=True)
class JordanTripleSystem:
    ring: Ring
    dim: int
    t: MultilinearMap

    def __post_init__(self):
        if self.t.slot_dims != (self.dim,) * 3 or self.t.target_dim != self.dim:
            raise ShapeError("JTS tensor dims inconsistent")


@dataclass(frozen=True)
class JordanAlgebra:
    ring: Ring
    dim: int
    product: MultilinearMap
    unit: Optional[tuple] = None

    def __post_init__(self):
        if self.product.slot_dims != (self.dim,) * 2 or self.product.target_dim != self.dim:
            raise ShapeError("product tensor dims inconsistent")

    def mul(self, x, y) -> tuple:
        return self.product.evaluate(x, y)


@dataclass(frozen=True)
class LieTripleSystem:
    ring: Ring
    dim: int
    r: MultilinearMap

    def __post_init__(self):
        if self.r.slot_dims != (self.dim,) * 3 or self.r.target_dim != self.dim:
            raise ShapeError("LTS tensor dims inconsistent")


# -- axiom identities ----------------------------------------------------------


def _pair_axioms(p: JordanPair, sign: str) -> list:
    """LJP1 and LJP2 for one sign as engine identities."""
    s, o = (p.tplus, p.tminus) if sign == "+" else (p.tminus, p.tplus)
    ns, no = (p.nplus, p.nminus) if sign == "+" else (p.nminus, p.nplus)
    x, y, z = Var("x"), Var("y"), Var("z")
    u, v = Var("u"), Var("v")
    ljp1 = Identity(
        f"LJP1{sign}",
        (("x", ns), ("y", no), ("z", ns)),
        ((1, App(s, (x, y, z))), (-1, App(s, (z, y, x)))),
    )
    ljp2 = Identity(
        f"LJP2{sign}",
        (("u", ns), ("v", no), ("x", ns), ("y", no), ("z", ns)),
        (
            (1, App(s, (u, v, App(s, (x, y, z))))),
            (-1, App(s, (App(s, (u, v, x)), y, z))),
            (1, App(s, (x, App(o, (v, u, y)), z))),
            (-1, App(s, (x, y, App(s, (u, v, z))))),
        ),
    )
    return [ljp1, ljp2]


def _jts_axioms(j: JordanTripleSystem) -> list:
    t = j.t
    n = j.dim
    x, y, z, u, v = Var("x"), Var("y"), Var("z"), Var("u"), Var("v")
    jp1 = Identity(
        "JP1",
        (("x", n), ("y", n), ("z", n)),
        ((1, App(t, (x, y, z))), (-1, App(t, (z, y, x)))),
    )
    jp2 = Identity(
        "JP2",
        (("u", n), ("v", n), ("x", n), ("y", n), ("z", n)),
        (
            (1, App(t, (u, v, App(t, (x, y, z))))),
            (-1, App(t, (App(t, (u, v, x)), y, z))),
            (1, App(t, (x, App(t, (v, u, y)), z))),
            (-1, App(t, (x, y, App(t, (u, v, z))))),
        ),
    )
    return [jp1, jp2]


def _lts_axioms(q: LieTripleSystem) -> list:
    r = q.r
    n = q.dim
    x, y, z, u, v, w = Var("x"), Var("y"), Var("z"), Var("u"), Var("v"), Var("w")
    lt1 = Identity("LT1", (("x", n), ("z", n)), ((1, App(r, (x, x, z))),))
    lt2 = Identity(
        "LT2",
        (("x", n), ("y", n), ("z", n)),
        (
            (1, App(r, (x, y, z))),
            (1, App(r, (y, z, x))),
            (1, App(r, (z, x, y))),
        ),
    )
    lt3 = Identity(
        "LT3",
        (("u", n), ("v", n), ("x", n), ("y", n), ("z", n)),
        (
            (1, App(r, (u, v, App(r, (x, y, z))))),
            (-1, App(r, (App(r, (u, v, x)), y, z))),
            (-1, App(r, (x, App(r, (u, v, y)), z))),
            (-1, App(r, (x, y, App(r, (u, v, z))))),
        ),
    )
    return [lt1, lt2, lt3]


def _algebra_axioms(a: JordanAlgebra) -> list:
    m = a.product
    n = a.dim
    x, y = Var("x"), Var("y")
    comm = Identity(
        "commutative", (("x", n), ("y", n)), ((1, App(m, (x, y))), (-1, App(m, (y, x))))
    )
    xx = App(m, (x, x))
    j2 = Identity(
        "J2",
        (("x", n), ("y", n)),
        (
            (1, App(m, (x, App(m, (xx, y))))),
            (-1, App(m, (xx, App(m, (x, y))))),
        ),
    )
    return [comm, j2]


def verify(structure, method: str = "basis", seed: Optional[int] = None) -> Report:
    """Run every defining axiom of the structure; failures carry witnesses."""
    report = Report(ring=structure.ring.token())
    if isinstance(structure, JordanPair):
        idents = _pair_axioms(structure, "+") + _pair_axioms(structure, "-")
    elif isinstance(structure, JordanTripleSystem):
        idents = _jts_axioms(structure)
    elif isinstance(structure, LieTripleSystem):
        idents = _lts_axioms(structure)
    elif isinstance(structure, JordanAlgebra):
        idents = _algebra_axioms(structure)
    else:
        raise JglError(f"cannot verify {type(structure).__name__}")
    for ident in idents:
        verdict = check_identity(ident, structure.ring, method=method, seed=seed)
        report.add_verdict(ident.name, verdict)
        report.count("tuples", verdict.checked)
    if isinstance(structure, JordanAlgebra) and structure.unit is not None:
        bad = None
        for i in range(structure.dim):
            e = tuple(
                structure.ring.one if k == i else structure.ring.zero
                for k in range(structure.dim)
            )
            if structure.mul(structure.unit, e) != e or structure.mul(e, structure.unit) != e:
                bad = i
                break
        if bad is None:
            report.add_pass("unit")
        else:
            report.add_fail("unit", witness={"basis_index": bad})
    return report


# -- functors ------------------------------------------------------------------


def polarized_jts(p: JordanPair) -> JordanTripleSystem:
    """JTS on V+ (+) V- acting blockwise: ((x,x'),(y,y'),(z,z')) maps to
    (T+(x,y',z), T-(x',y,z'))."""
    n = p.nplus + p.nminus
    coeffs = []
    for idx, tgt, c in p.tplus.coeffs:
        coeffs.append(((idx[0], p.nplus + idx[1], idx[2]), tgt, c))
    for idx, tgt, c in p.tminus.coeffs:
        coeffs.append(
            ((p.nplus + idx[0], idx[1], p.nplus + idx[2]), p.nplus + tgt, c)
        )
    t = MultilinearMap.build(p.ring, 3, (n, n, n), n, coeffs)
    return JordanTripleSystem(p.ring, n, t)


def jts_to_lts(j: JordanTripleSystem) -> LieTripleSystem:
    """The Jordan-Lie functor: antisymmetrize the first two slots."""
    coeffs = list(j.t.coeffs)
    for idx, tgt, c in j.t.coeffs:
        coeffs.append(((idx[1], idx[0], idx[2]), tgt, j.ring.neg(c)))
    r = MultilinearMap.build(j.ring, 3, j.t.slot_dims, j.dim, coeffs)
    return LieTripleSystem(j.ring, j.dim, r)


@dataclass(frozen=True)
class PairInvolution:
    """The swap (x, x') -> (x', x) seen as an isomorphism (V+,V-) -> (V-,V+)."""

    plus_to_minus: Matrix
    minus_to_plus: Matrix

    def is_involutive(self) -> bool:
        comp = self.minus_to_plus.mul(self.plus_to_minus)
        return comp == Matrix.identity(comp.ring, comp.rows)


def pair_from_jts(j: JordanTripleSystem):
    """Underlying pair (V, V) with both tensors T, plus the swap involution."""
    pair = JordanPair(j.ring, j.dim, j.dim, j.t, j.t)
    ident = Matrix.identity(j.ring, j.dim)
    return pair, PairInvolution(ident, ident)


# -- quadratic operators -------------------------------------------------------


def q_operator(p: JordanPair, sign: str, a: tuple) -> Matrix:
    """Matrix of y -> (1/2) T^sign(a, y, a) from V^{-sign} to V^{sign}."""
    t = p.t(sign)
    ns, no = p.dim(sign), p.dim("-" if sign == "+" else "+")
    if len(a) != ns:
        raise ShapeError("a must lie in the sign-side module")
    r = p.ring
    half = r.inv(r.of(2))
    cols = []
    for j in range(no):
        e = tuple(r.one if k == j else r.zero for k in range(no))
        cols.append(tuple(r.mul(half, v) for v in t.evaluate(a, e, a)))
    return Matrix.from_rows(r, list(zip(*cols)) if cols else [[]] * ns)


def _fundamental_identity(p: JordanPair) -> Identity:
    # Q-(Q-(x)y) z = Q-(x) Q+(y) Q-(x) z, common factor 1/8 cleared.
    tm, tp = p.tminus, p.tplus
    x, y, z = Var("x"), Var("y"), Var("z")
    inner = App(tm, (x, y, x))
    lhs = App(tm, (inner, z, inner))
    rhs = App(tm, (x, App(tp, (y, App(tm, (x, z, x)), y)), x))
    return Identity(
        "FundamentalFormula",
        (("x", p.nminus), ("y", p.nplus), ("z", p.nplus)),
        ((1, lhs), (-1, rhs)),
    )


def check_fundamental(
    p: JordanPair,
    method: str = "auto",
    seed: Optional[int] = None,
) -> Verdict:
    """Fundamental Formula Q-(Q-(x)y) = Q-(x) Q+(y) Q-(x).

    ``exhaustive`` ranges over all (x, y) over a prime field and compares the
    two operators as matrices; ``polarized-basis`` delegates to the identity
    engine; ``auto`` picks exhaustive for small finite pairs.
    """
    if method == "auto":
        if p.ring.is_finite and p.ring.p ** p.total_dim <= 100_000:
            method = "exhaustive"
        else:
            method = "polarized-basis"
    if method == "polarized-basis":
        return check_identity(_fundamental_identity(p), p.ring, method="basis")
    if method == "sampled":
        return check_identity(
            _fundamental_identity(p), p.ring, method="sampled", seed=seed
        )
    if method != "exhaustive":
        raise MethodError(f"unknown method {method!r}")
    if not p.ring.is_finite:
        raise MethodError("exhaustive Fundamental Formula needs a prime field")
    ring = p.ring
    total = ring.p ** p.total_dim
    if total > max_enum_cap():
        raise MethodError("exhaustive Fundamental Formula enumeration exceeds cap")
    checked = 0
    for xv in itertools.product(range(ring.p), repeat=p.nminus):
        qx = q_operator(p, "-", xv)
        for yv in itertools.product(range(ring.p), repeat=p.nplus):
            checked += 1
            w = qx.apply(yv)
            lhs = q_operator(p, "-", w)
            qy = q_operator(p, "+", yv)
            rhs = qx.mul(qy).mul(qx)
            if lhs != rhs:
                witness = {
                    "x": [ring.fmt(v) for v in xv],
                    "y": [ring.fmt(v) for v in yv],
                }
                return Verdict("fail", "exhaustive", checked, witness)
    return Verdict("pass", "exhaustive", checked)


def homotopy_algebra(p: JordanPair, a: tuple) -> JordanAlgebra:
    """V+ with x *_a y = (1/2) T+(x, a, y); unital iff a is invertible."""
    if len(a) != p.nminus:
        raise ShapeError("a must lie in V-")
    r = p.ring
    half = r.inv(r.of(2))
    prod = p.tplus.contract_slot(1, tuple(r.of(v) for v in a)).scale(half)
    inv = invertibility(p, a)
    return JordanAlgebra(r, p.nplus, prod, unit=inv["sharp"])


def invertibility(p: JordanPair, a: tuple) -> dict:
    """Whether Q-(a) : V+ -> V- is invertible; if so, a# = Q-(a)^{-1} a."""
    a = tuple(p.ring.of(v) for v in a)
    q = q_operator(p, "-", a)
    if q.rows != q.cols or not q.is_invertible():
        return {"invertible": False, "sharp": None}
    sol = q.solve(Matrix.column(p.ring, a))
    sharp = tuple(row[0] for row in sol.entries)
    return {"invertible": True, "sharp": sharp}


def jts_from_unital(alg: JordanAlgebra, convention: str = "doubled") -> JordanTripleSystem:
    """T(x,y,z) = (x*y)*z - y*(x*z) + x*(y*z), optionally doubled.

    The doubled convention makes (1/2) T(x,y,x) agree with the classical
    quadratic operator 2 x*(x*y) - x^2*y and makes the unital round trip an
    exact structure-constant match.
    """
    if alg.unit is None:
        raise JglError("jts_from_unital needs a unital algebra")
    if convention not in ("doubled", "verbatim"):
        raise ValueError(f"unknown convention {convention!r}")
    r = alg.ring
    m = alg.product

    def ev(i, j, k):
        e = lambda idx: tuple(r.one if t == idx else r.zero for t in range(alg.dim))
        x, y, z = e(i), e(j), e(k)
        out = m.evaluate(m.evaluate(x, y), z)
        out = tuple(r.sub(o, v) for o, v in zip(out, m.evaluate(y, m.evaluate(x, z))))
        out = tuple(r.add(o, v) for o, v in zip(out, m.evaluate(x, m.evaluate(y, z))))
        if convention == "doubled":
            out = tuple(r.mul(r.of(2), v) for v in out)
        return out

    t = tensor_from_closed_form(r, (alg.dim,) * 3, alg.dim, ev)
    return JordanTripleSystem(r, alg.dim, t)


def doubled_q_law(alg: JordanAlgebra, jts: JordanTripleSystem) -> Verdict:
    """(1/2) T(x,y,x) = 2 x*(x*y) - x^2*y, the quadratic-operator match."""
    m, t = alg.product, jts.t
    x, y = Var("x"), Var("y")
    ident = Identity(
        "doubled-q-law",
        (("x", alg.dim), ("y", alg.dim)),
        (
            (Fraction(1, 2), App(t, (x, y, x))),
            (-2, App(m, (x, App(m, (x, y))))),
            (1, App(m, (App(m, (x, x)), y))),
        ),
    )
    return check_identity(ident, alg.ring, method="basis")


def roundtrip_pair(p: JordanPair, a: tuple, convention: str = "doubled") -> Report:
    """Recover a pair from the a-homotope and compare structure constants.

    Reports an exact match, or a scalar proportionality together with the
    diagonal scaling isomorphism realizing it, or a plain mismatch.
    """
    report = Report(ring=p.ring.token())
    inv = invertibility(p, a)
    if not inv["invertible"]:
        raise RingError("roundtrip_pair requires an invertible a")
    report.add_pass("invertible", sharp=[p.ring.fmt(v) for v in inv["sharp"]])
    alg = homotopy_algebra(p, a)
    jts = jts_from_unital(alg, convention)
    newpair, _ = pair_from_jts(jts)
    if p.nplus != p.nminus:
        report.add_fail("comparable", note="pair is not symmetric in dimensions")
        return report
    exact = newpair.tplus == p.tplus and newpair.tminus == p.tminus
    if exact:
        report.add_pass("tensor-match", convention=convention)
        return report
    factor = _proportionality(p.ring, newpair.tplus, p.tplus)
    factor_m = _proportionality(p.ring, newpair.tminus, p.tminus)
    if factor is not None and factor == factor_m:
        inv_f = p.ring.inv(factor)
        report.add(
            Check(
                "tensor-match",
                "fail",
                witness={"proportionality": p.ring.fmt(factor)},
                details={
                    "isomorphic_via_scaling": True,
                    "scaling": ["1", p.ring.fmt(inv_f)],
                    "relation": "c*d equals inverse of the proportionality factor",
                    "convention": convention,
                },
            )
        )
    else:
        report.add_fail("tensor-match", witness={"proportionality": None})
    return report


def _proportionality(ring: Ring, t1: MultilinearMap, t2: MultilinearMap):
    """Scalar m with t1 = m * t2, or None."""
    if t1.slot_dims != t2.slot_dims or t1.target_dim != t2.target_dim:
        return None
    keys1 = {(idx, tgt): c for idx, tgt, c in t1.coeffs}
    keys2 = {(idx, tgt): c for idx, tgt, c in t2.coeffs}
    if set(keys1) != set(keys2):
        return None
    if not keys1:
        return ring.one
    m = None
    for key, c1 in keys1.items():
        ratio = ring.div(c1, keys2[key])
        if m is None:
            m = ratio
        elif m != ratio:
            return None
    return m


# -- batched homotope verification over prime fields ---------------------------


def meyberg_exhaustive(p: JordanPair) -> dict:
    """Commutativity and J2 for every homotope x *_a y over F_p, all a in V-.

    Exact integer arithmetic mod p via numpy; returns counts and the first
    (lexicographic) witness on failure.
    """
    import numpy as np

    if not p.ring.is_finite:
        raise MethodError("meyberg_exhaustive needs a prime field")
    q = p.ring.p
    t_arr, _ = p.tplus.dense_int()  # (n+, n-, n+, n+)
    inv2 = pow(2, q - 2, q)
    navec = p.nminus
    nx = p.nplus
    A = np.array(list(itertools.product(range(q), repeat=navec)), dtype=np.int64)
    X = np.array(list(itertools.product(range(q), repeat=nx)), dtype=np.int64)
    # products for all a at once: C[a,i,j,t] = inv2 * sum_m A[a,m] T[i,m,j,t]
    C = np.einsum("am,imjt->aijt", A, t_arr) % q
    C = (C * inv2) % q
    sym_bad = np.argwhere((C - C.transpose(0, 2, 1, 3)) % q != 0)
    result = {"a_count": len(A), "pairs_per_a": len(X) ** 2, "status": "pass"}
    if len(sym_bad):
        a0 = int(sym_bad[0][0])
        result.update(
            status="fail",
            check="commutative",
            witness={"a": [str(v) for v in A[a0]]},
        )
        return result
    chunk = max(1, 2_000_000 // (len(X) * len(X) * nx))
    for start in range(0, len(A), chunk):
        Cc = C[start : start + chunk]
        S = np.einsum("xi,yj,aijt->axyt", X, X, Cc) % q  # x *_a y for all pairs
        sq = S[:, np.arange(len(X)), np.arange(len(X)), :]  # x^2
        U = np.einsum("axk,yj,akjt->axyt", sq, X, Cc) % q  # x^2 * y
        V1 = np.einsum("xi,axyj,aijt->axyt", X, U, Cc) % q  # x * (x^2 * y)
        V2 = np.einsum("axk,axyj,akjt->axyt", sq, S, Cc) % q  # x^2 * (x * y)
        bad = np.argwhere((V1 - V2) % q != 0)
        if len(bad):
            a_i, x_i, y_i = (int(v) for v in bad[0][:3])
            result.update(
                status="fail",
                check="J2",
                witness={
                    "a": [str(v) for v in A[start + a_i]],
                    "x": [str(v) for v in X[x_i]],
                    "y": [str(v) for v in X[y_i]],
                },
            )
            return result
    return result
