"""Truncated Zhu algebras A_n(V), the level filtration and gr A(V), the C_2
algebra R(V) and the comparison map R(V) -> gr A(V).

Everything is computed inside V_{<=N}.  Only spanning elements whose full
weight support fits under the cutoff enter O_n(V)^{(N)}, so quotient
dimensions can only over-count; a filtration degree is quoted once its
dimension agrees across successive cutoffs (``stabilized_through``).

Columns of the sparse row reduction are ordered by *decreasing* weight, so
the pivot of every reduced row is its highest-weight term.  Consequently
``#pivots of weight <= k`` is ``dim(O^{(N)} cap V_{<=k})`` and the non-pivot
columns of weight exactly ``k`` form a basis of ``gr_k``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from .fields import Field
from .linalg import SparseEchelon
from .linalg import Matrix
from .modes import VOA, GradedVector, Space, TruncationError, VOAConfig, _axpy

__all__ = [
    "ZhuBuilder",
    "ZhuAlgebra",
    "zhu_algebra",
    "circ",
    "star",
    "C2Algebra",
    "c2_algebra",
    "phi_check",
    "commutator_congruence_check",
    "build_O",
    "containment_check",
    "generation_check",
    "omega_central_check",
    "zero_mode_matrices",
    "o_kills_O_check",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = (6, 8, 10, 12)
_STRIDE = 10**9


def circ(voa: VOA, u: GradedVector, v: GradedVector, n: int, s: int, t: int,
         N: int | None = None) -> GradedVector:
    """u o^s_{n,t} v = Res_z Y(u,z) v (1+z)^{wt u+n+s} / z^{2n+2+t}.

    With a cutoff ``N`` the element is rejected (TruncationError) unless its
    top weight wt u + wt v + 2n + 1 + t fits."""
    if not 0 <= s <= t:
        raise ValueError("need 0 <= s <= t")
    if N is not None and not u.is_zero() and not v.is_zero():
        top = max(u.weights()) + max(v.weights()) + 2 * n + 1 + t
        if top > N:
            raise TruncationError(f"circ element reaches weight {top} > cutoff {N}")
    F = voa.field
    out: dict = {}
    for su, comp in u.components().items():
        top = su + n + s
        for i in range(top + 1):
            _axpy(F, out, F.from_int(math.comb(top, i)), voa.mode_raw(v.space, comp.terms, i - 2 * n - 2 - t, v.terms))
    return GradedVector(v.space, out)


def star_raw(voa: VOA, uterms: dict, vterms: dict, n: int) -> dict:
    F = voa.field
    out: dict = {}
    by_weight: dict[int, dict] = {}
    for key, c in uterms.items():
        by_weight.setdefault(Space.weight(key), {})[key] = c
    for su, comp in by_weight.items():
        top = su + n
        for m in range(n + 1):
            sign_c = (-1) ** m * math.comb(m + n, n)
            for i in range(top + 1):
                coeff = F.from_int(sign_c * math.comb(top, i))
                _axpy(F, out, coeff, voa.mode_raw(voa.vacuum, comp, i - n - m - 1, vterms))
    return out


def star(voa: VOA, u: GradedVector, v: GradedVector, n: int = 0, N: int | None = None) -> GradedVector:
    """Representative of [u] *_n [v]:
    sum_{m=0}^{n} (-1)^m C(m+n, n) Res_z Y(u,z) v (1+z)^{wt u+n} / z^{n+m+1}."""
    if N is not None and not u.is_zero() and not v.is_zero():
        top = max(u.weights()) + max(v.weights()) + 2 * n
        if top > N:
            raise TruncationError(f"star product reaches weight {top} > cutoff {N}")
    return GradedVector(voa.vacuum, star_raw(voa, u.terms, v.terms, n))


class ZhuBuilder:
    """Incrementally grown O_n(V)^{(N)} inside V_{<=N}."""

    def __init__(self, voa: VOA, n: int = 0):
        self.voa = voa
        self.n = n
        self.field: Field = voa.field
        self.ech = SparseEchelon(voa.field)
        self.N = -1
        self.spanning_count = 0
        self.history: dict[int, list[int]] = {}
        self._col: dict = {}
        self._key: dict = {}

    # --- columns ---------------------------------------------------------
    def _register(self, w: int):
        for idx, key in enumerate(self.voa.vacuum.basis(w, strict=False)):
            c = -w * _STRIDE + idx
            self._col[key] = c
            self._key[c] = key

    def to_cols(self, terms: dict) -> dict:
        col = self._col
        return {col[k]: v for k, v in terms.items()}

    def to_keys(self, cols: dict) -> dict:
        key = self._key
        return {key[c]: v for c, v in cols.items()}

    @staticmethod
    def col_weight(c: int) -> int:
        return -(c // _STRIDE)

    # --- growth ------------------------------------------------------------
    def extend_to(self, N: int) -> None:
        voa, n = self.voa, self.n
        F = self.field
        sp = voa.vacuum
        for w in range(self.N + 1, N + 1):
            self._register(w)
        for T in range(self.N + 1, N + 1):
            # (L(-1) + L(0)) u for wt u = T - 1
            if T >= 1:
                for key in sp.basis(T - 1, strict=False):
                    vec = voa.mode_raw(sp, voa.omega.terms, 0, {key: F.one()})
                    _axpy(F, vec, F.from_int(T - 1), {key: F.one()})
                    self._add(vec)
            # u o^s_{n,t} v with wt u + wt v + 2n + 1 + t = T
            budget = T - 2 * n - 1
            for su in range(1, budget + 1):
                ubasis = sp.basis(su, strict=False)
                for sv in range(0, budget - su + 1):
                    t = budget - su - sv
                    vbasis = sp.basis(sv, strict=False)
                    jlo = -2 * n - 2 - t
                    jhi = su - n - 2  # index used at i = su + n + t
                    binoms = [[math.comb(su + n + s, i) for i in range(su + n + s + 1)] for s in range(t + 1)]
                    for ukey in ubasis:
                        uw = ukey[0]
                        for vkey in vbasis:
                            modes = {j: voa._mode(sp, uw, j, vkey) for j in range(jlo, jhi + 1)}
                            for s in range(t + 1):
                                vec: dict = {}
                                for i, b in enumerate(binoms[s]):
                                    m = modes[i + jlo]
                                    if m:
                                        _axpy(F, vec, F.from_int(b), m)
                                self._add(vec)
        self.N = max(self.N, N)
        self.history[self.N] = self.filtration_dims()

    def _add(self, vec: dict) -> None:
        self.spanning_count += 1
        if vec:
            self.ech.add(self.to_cols(vec))

    # --- queries ----------------------------------------------------------
    def filtration_dims(self) -> list[int]:
        """dim of the image of V_{<=k} in V_{<=N}/O^{(N)}, k = 0..N."""
        vd = self.voa.vacuum.dims(self.N)
        piv_by_w = [0] * (self.N + 1)
        for c in self.ech.pivots:
            piv_by_w[self.col_weight(c)] += 1
        out, acc_v, acc_p = [], 0, 0
        for k in range(self.N + 1):
            acc_v += vd[k]
            acc_p += piv_by_w[k]
            out.append(acc_v - acc_p)
        return out

    def normal_form(self, terms: dict) -> dict:
        """Reduced representative of terms + O^{(N)} (keys of non-pivot basis states)."""
        return self.to_keys(self.ech.reduce(self.to_cols(terms)))

    def member(self, terms: dict) -> bool:
        return not self.ech.reduce(self.to_cols(terms))

    def rows(self) -> list[GradedVector]:
        """Canonical (fully reduced) basis of O_n(V)^{(N)}, highest pivot weight last."""
        sp = self.voa.vacuum
        rr = self.ech.rref_rows()
        return [GradedVector(sp, self.to_keys(rr[p])) for p in sorted(rr, reverse=True)]

    def quotient_basis(self, upto: int) -> list[tuple]:
        piv = self.ech.rows
        out = []
        for w in range(upto + 1):
            for idx, key in enumerate(self.voa.vacuum.basis(w, strict=False)):
                if -w * _STRIDE + idx not in piv:
                    out.append(key)
        return out


def stabilized_degree(history: dict[int, list[int]], agreements: int = 1) -> int:
    """Largest K such that filtration dims for k <= K agree over the last
    ``agreements`` cutoff increments (-1 if none)."""
    cutoffs = sorted(history)
    if len(cutoffs) < agreements + 1:
        return -1
    window = cutoffs[-(agreements + 1):]
    K = -1
    for k in range(window[0] + 1):
        vals = {history[N][k] for N in window}
        if len(vals) != 1:
            break
        K = k
    return K


@dataclass
class ZhuAlgebra:
    """Stabilized data of a truncated A_n(V)."""

    voa: VOA
    n: int
    builder: ZhuBuilder
    cutoffs: list[int]
    stabilized_through: int
    requested_degree: int
    basis: list[tuple] = dc_field(default_factory=list)  # quotient basis keys, weight <= K
    degrees: list[int] = dc_field(default_factory=list)
    table: dict = dc_field(default_factory=dict)  # (i, j) -> {k: raw}
    checks: dict = dc_field(default_factory=dict)

    @property
    def stabilized(self) -> bool:
        return self.stabilized_through >= self.requested_degree

    @property
    def field(self) -> Field:
        return self.voa.field

    @property
    def filtration_dims(self) -> list[int]:
        return self.builder.history[self.builder.N][: self.stabilized_through + 1]

    @property
    def gr_dims(self) -> list[int]:
        f = self.filtration_dims
        return [f[k] - (f[k - 1] if k else 0) for k in range(len(f))]

    def coords(self, terms: dict) -> dict[int, object]:
        """Coordinates of the class of ``terms`` on :attr:`basis`."""
        nf = self.builder.normal_form(terms)
        index = self._index
        out = {}
        for key, c in nf.items():
            if key not in index:
                raise ValueError("class lies outside the stabilized range")
            out[index[key]] = c
        return out

    @property
    def _index(self):
        if not hasattr(self, "_idx_cache"):
            self._idx_cache = {k: i for i, k in enumerate(self.basis)}
        return self._idx_cache

    def mul(self, x: dict, y: dict) -> dict:
        """Product of coordinate vectors via the structure constants."""
        F = self.field
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.table.get((i, j))
                if prod is None:
                    raise ValueError("product leaves the stabilized range")
                _axpy(F, out, F.mul(a, b), prod)
        return out

    def class_of(self, terms: dict) -> dict:
        return self.coords(terms)

    def gr_class(self, terms: dict, degree: int) -> dict:
        """Component of the class in gr_degree (coordinates of weight-``degree`` basis)."""
        c = self.coords(terms)
        return {i: v for i, v in c.items() if self.degrees[i] == degree}

    def one_index(self) -> int:
        return self._index[((), 0)]

    def is_commutative(self) -> bool:
        return all(self.table[(i, j)] == self.table[(j, i)] for (i, j) in self.table if (j, i) in self.table)

    def structure_constants_report(self) -> list:
        F = self.field
        out = []
        for (i, j), prod in sorted(self.table.items()):
            out.append({
                "i": i,
                "j": j,
                "product": {str(k): F.fmt(v) for k, v in sorted(prod.items())},
            })
        return out

    def basis_report(self) -> list:
        sp = self.voa.vacuum
        return [{"index": i, "state": sp.key_str(k), "degree": d} for i, (k, d) in enumerate(zip(self.basis, self.degrees))]

    def report(self) -> dict:
        b = self.builder
        return {
            "config": self.voa.config.describe(),
            "zhu_level": self.n,
            "cutoffs": self.cutoffs,
            "filtration_dims_by_cutoff": {str(N): b.history[N] for N in sorted(b.history)},
            "stabilized_through": self.stabilized_through,
            "requested_degree": self.requested_degree,
            "stabilized": self.stabilized,
            "filtration_dims": self.filtration_dims,
            "gr_dims": self.gr_dims,
            "basis": self.basis_report(),
            "structure_constants": self.structure_constants_report(),
            "checks": self.checks,
            "spanning_elements": b.spanning_count,
            "O_rank": len(b.ech),
        }


def zhu_algebra(config_or_voa, n: int = 0, max_degree: int = 4, budget=DEFAULT_BUDGET,
                agreements: int = 1, builder: ZhuBuilder | None = None, tables: bool = True) -> ZhuAlgebra:
    """Grow the cutoff along ``budget`` until filtration degrees up to
    ``max_degree`` agree across ``agreements`` successive increments, then
    compute *_n structure constants on the stabilized quotient basis and
    verify associativity, the identity and (reported) commutativity."""
    voa = config_or_voa if isinstance(config_or_voa, VOA) else VOA(
        config_or_voa.with_truncation(max(max(budget), config_or_voa.truncation)))
    b = builder or ZhuBuilder(voa, n)
    used = []
    K = -1
    for N in budget:
        if N <= b.N:
            used.append(N)
            continue
        b.extend_to(N)
        used.append(N)
        K = stabilized_degree({M: b.history[M] for M in used if M in b.history}, agreements)
        if K >= max_degree:
            break
    K = min(K, max_degree) if K >= 0 else K
    Z = ZhuAlgebra(voa, n, b, used, K, max_degree)
    if K >= 0:
        Z.basis = b.quotient_basis(K)
        Z.degrees = [Space.weight(k) for k in Z.basis]
        if tables:
            _fill_table(Z)
            Z.checks = verify_algebra(Z)
    return Z


def _fill_table(Z: ZhuAlgebra) -> None:
    voa, n = Z.voa, Z.n
    F = Z.field
    one = F.one()
    for (i, a), (j, bkey) in itertools.product(enumerate(Z.basis), repeat=2):
        if Z.degrees[i] + Z.degrees[j] + 2 * n > Z.stabilized_through:
            continue
        prod = star_raw(voa, {a: one}, {bkey: one}, n)
        Z.table[(i, j)] = Z.coords(prod)


def verify_algebra(Z: ZhuAlgebra) -> dict:
    """Associativity on stabilized basis triples, two-sided identity, commutativity."""
    F = Z.field
    K = Z.stabilized_through
    n2 = 2 * Z.n
    one_idx = Z.one_index()
    e = {one_idx: F.one()}
    d = Z.degrees
    idx = range(len(Z.basis))
    assoc_checked = assoc_fail = 0
    first = None
    for i in idx:
        for j in idx:
            if d[i] + d[j] + n2 > K:
                continue
            for k in idx:
                if d[i] + d[j] + d[k] + 2 * n2 > K:
                    continue
                lhs = Z.mul(Z.table[(i, j)], {k: F.one()})
                rhs = Z.mul({i: F.one()}, Z.table[(j, k)])
                assoc_checked += 1
                if lhs != rhs:
                    assoc_fail += 1
                    first = first or f"({i},{j},{k})"
    ident_idx = [i for i in idx if d[i] + n2 <= K]
    ident_fail = sum(1 for i in ident_idx if Z.mul(e, {i: F.one()}) != {i: F.one()} or Z.mul({i: F.one()}, e) != {i: F.one()})
    comm_pairs = [(i, j) for (i, j) in Z.table if i < j]
    comm_fail = [(i, j) for (i, j) in comm_pairs if Z.table[(i, j)] != Z.table[(j, i)]]
    filt_fail = 0
    for (i, j), prod in Z.table.items():
        if any(d[k] > d[i] + d[j] + n2 for k in prod):
            filt_fail += 1
    out = {
        "associativity": {"checked": assoc_checked, "failures": assoc_fail, "pass": assoc_fail == 0},
        "identity": {"checked": len(ident_idx), "failures": ident_fail, "pass": ident_fail == 0},
        "filtration": {"checked": len(Z.table), "failures": filt_fail, "pass": filt_fail == 0, "degree_shift": n2},
        "commutative": {"checked": len(comm_pairs), "noncommuting_pairs": len(comm_fail), "value": not comm_fail},
    }
    if first:
        out["associativity"]["counterexample"] = first
    if comm_fail:
        i, j = comm_fail[0]
        sp = Z.voa.vacuum
        out["commutative"]["example"] = f"[{sp.key_str(Z.basis[i])}] * [{sp.key_str(Z.basis[j])}]"
    return out


def commutator_congruence_check(Z: ZhuAlgebra, shift: int = -1) -> dict:
    """u*v - v*u - sum_i C(wt u + shift, i) u_i v lies in O(V) for basis pairs
    of total weight within the stabilized range (level 0 only).

    ``shift=-1`` is Res_z Y(u,z) v (1+z)^{wt u - 1}, which holds in every
    A(V).  ``shift=0`` is kept to exhibit that the unshifted binomial fails
    (Heisenberg: h*h - h*h = 0 while h_0 h + h_1 h = 1)."""
    voa = Z.voa
    F = Z.field
    one = F.one()
    K = Z.stabilized_through
    sp = voa.vacuum
    checked = fails = 0
    example = None
    for su in range(K + 1):
        for sv in range(K + 1 - su):
            for ukey in sp.basis(su, strict=False):
                for vkey in sp.basis(sv, strict=False):
                    u, v = {ukey: one}, {vkey: one}
                    vec = star_raw(voa, u, v, 0)
                    _axpy(F, vec, F.neg(one), star_raw(voa, v, u, 0))
                    top = su + shift
                    for i in range(max(top, -1) + 1):
                        _axpy(F, vec, F.neg(F.from_int(math.comb(top, i))), voa.mode_raw(sp, u, i, v))
                    checked += 1
                    if not Z.builder.member(vec):
                        fails += 1
                        example = example or f"({sp.key_str(ukey)}, {sp.key_str(vkey)})"
    out = {"checked": checked, "failures": fails, "pass": fails == 0, "binomial_top": f"wt u{shift:+d}" if shift else "wt u"}
    if example:
        out["counterexample"] = example
    return out


def build_O(voa: VOA, n: int, N: int) -> ZhuBuilder:
    """O_n(V)^{(N)}: span of every admissible circ element and (L(-1)+L(0))u inside V_{<=N}."""
    b = ZhuBuilder(voa, n)
    b.extend_to(N)
    return b


def containment_check(high: ZhuBuilder, low: ZhuBuilder) -> dict:
    """O_n^{(N)} subset O_s^{(N)} (s < n): the surjection A_n(V) -> A_s(V)
    is the identity on representatives."""
    if high.N != low.N:
        raise ValueError("containment is compared at equal cutoffs")
    fails = 0
    for row in high.ech.rows.values():
        fails += not low.member(high.to_keys(row))
    return {"levels": [high.n, low.n], "cutoff": high.N, "checked": len(high.ech), "failures": fails, "pass": fails == 0}


def generation_check(Z: ZhuAlgebra, generators: list[dict]) -> dict:
    """Do monomials in the given classes span A_n(V) up to the stabilized degree?"""
    F = Z.field
    one = F.one()
    K = Z.stabilized_through
    voa = Z.voa
    span = SparseEchelon(F)
    vac = {((), 0): one}
    frontier = [vac]
    span.add(Z.coords(vac))
    gdeg = [max(Space.weight(k) for k in g) for g in generators]
    level = 0
    words = 1
    while frontier:
        level += 1
        new = []
        for rep in frontier:
            rdeg = max(Space.weight(k) for k in rep)
            for g, dg in zip(generators, gdeg):
                if rdeg + dg + 2 * Z.n > K:
                    continue
                prod = star_raw(voa, rep, g, Z.n)
                words += 1
                if span.add(Z.coords(prod)):
                    new.append(prod)
        frontier = new
    return {"generators": len(generators), "words": words, "span_dim": len(span),
            "quotient_dim": len(Z.basis), "pass": len(span) == len(Z.basis)}


def omega_central_check(Z: ZhuAlgebra) -> dict:
    """Empirical: does [omega] commute with every stabilized basis class?"""
    F = Z.field
    one = F.one()
    w = Z.voa.omega.terms
    K = Z.stabilized_through
    checked = fails = 0
    for key, d in zip(Z.basis, Z.degrees):
        if d + 2 + 2 * Z.n > K:
            continue
        checked += 1
        u = {key: one}
        fails += Z.coords(star_raw(Z.voa, w, u, Z.n)) != Z.coords(star_raw(Z.voa, u, w, Z.n))
    return {"checked": checked, "failures": fails, "value": fails == 0}


def zero_mode_matrices(Z: ZhuAlgebra, space: Space, t: int = 0) -> list[Matrix]:
    """o(u) on M(t) for every stabilized quotient basis state u (the A(V)
    action on the top level when t = 0)."""
    voa = Z.voa
    one = Z.field.one()
    return [voa.o(GradedVector(voa.vacuum, {key: one}), t, space) for key in Z.basis]


def o_kills_O_check(Z: ZhuAlgebra, space: Space) -> dict:
    """Every O(V)^{(N)} row acts as zero on M(0) through o(.)."""
    voa = Z.voa
    fails = 0
    rows = Z.builder.rows()
    for row in rows:
        acc = None
        for w, comp in row.components().items():
            m = voa.o(comp, 0, space)
            acc = m if acc is None else acc + m
        fails += acc is not None and not acc.is_zero()
    return {"checked": len(rows), "failures": fails, "pass": fails == 0}


# --- C_2 algebra -------------------------------------------------------------


@dataclass
class C2Algebra:
    """R(V) = V / C_2(V), truncated at weight N (graded, hence exact per weight)."""

    voa: VOA
    N: int
    echelons: dict  # weight -> SparseEchelon on index columns
    basis: dict  # weight -> list of keys (non-pivot)
    product: dict = dc_field(default_factory=dict)  # (key_a, key_b) -> {key: raw}
    bracket: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)

    @property
    def dims(self) -> list[int]:
        return [len(self.basis[w]) for w in range(self.N + 1)]

    def normal_form(self, terms: dict) -> dict:
        """Reduce a (possibly inhomogeneous) vector modulo C_2(V), weightwise."""
        sp = self.voa.vacuum
        by_w: dict[int, dict] = {}
        for key, c in terms.items():
            by_w.setdefault(Space.weight(key), {})[key] = c
        out = {}
        for w, comp in by_w.items():
            index = {k: i for i, k in enumerate(sp.basis(w, strict=False))}
            keys = sp.basis(w, strict=False)
            red = self.echelons[w].reduce({index[k]: c for k, c in comp.items()})
            out.update({keys[i]: c for i, c in red.items()})
        return out

    def member(self, terms: dict) -> bool:
        return not self.normal_form(terms)

    def report(self) -> dict:
        F = self.voa.field
        sp = self.voa.vacuum
        fmt = lambda d: {sp.key_str(k): F.fmt(v) for k, v in sorted(d.items())}
        return {
            "config": self.voa.config.describe(),
            "truncation": self.N,
            "graded_dims": self.dims,
            "basis": {str(w): [sp.key_str(k) for k in self.basis[w]] for w in range(self.N + 1)},
            "product": [{"a": sp.key_str(a), "b": sp.key_str(b), "value": fmt(v)} for (a, b), v in sorted(self.product.items())],
            "bracket": [{"a": sp.key_str(a), "b": sp.key_str(b), "value": fmt(v)} for (a, b), v in sorted(self.bracket.items())],
            "checks": self.checks,
        }


def c2_algebra(config_or_voa, N: int | None = None, tables: bool = True) -> C2Algebra:
    voa = config_or_voa if isinstance(config_or_voa, VOA) else VOA(config_or_voa)
    N = voa.config.truncation if N is None else N
    F = voa.field
    sp = voa.vacuum
    one = F.one()
    echelons: dict = {}
    basis: dict = {}
    for w in range(N + 1):
        ech = SparseEchelon(F)
        keys = sp.basis(w, strict=False)
        index = {k: i for i, k in enumerate(keys)}
        # u_{-m-2} v with m >= 0 and wt u + wt v + m + 1 = w, wt u >= 1
        for su in range(1, w):
            for sv in range(0, w - su):
                m = w - su - sv - 1
                for ukey in sp.basis(su, strict=False):
                    for vkey in sp.basis(sv, strict=False):
                        vec = voa._mode(sp, ukey[0], -m - 2, vkey)
                        if vec:
                            ech.add({index[k]: c for k, c in vec.items()})
        echelons[w] = ech
        basis[w] = [k for i, k in enumerate(keys) if i not in ech.rows]
    R = C2Algebra(voa, N, echelons, basis)
    if tables:
        for p in range(N + 1):
            for q in range(N + 1 - p):
                for a in basis[p]:
                    for bkey in basis[q]:
                        R.product[(a, bkey)] = R.normal_form(voa._mode(sp, a[0], -1, bkey))
                        R.bracket[(a, bkey)] = R.normal_form(voa._mode(sp, a[0], 0, bkey))
        R.checks = verify_poisson(R)
    return R


def verify_poisson(R: C2Algebra) -> dict:
    """Commutativity and associativity of the product, antisymmetry of the
    bracket, Leibniz rule and Jacobi identity, on truncated basis triples."""
    F = R.voa.field
    N = R.N
    elems = [(w, k) for w in range(N + 1) for k in R.basis[w]]

    def lin(table, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                _axpy(F, out, F.mul(ca, cb), table[(a, b)])
        return out

    one = F.one()
    res = {name: [0, 0] for name in ("commutative", "associative", "antisymmetric", "leibniz", "jacobi", "bracket_degree")}
    for (p, a), (q, b) in itertools.product(elems, repeat=2):
        if p + q > N:
            continue
        res["commutative"][0] += 1
        res["commutative"][1] += R.product[(a, b)] != R.product[(b, a)]
        res["antisymmetric"][0] += 1
        neg = {k: F.neg(v) for k, v in R.bracket[(b, a)].items()}
        res["antisymmetric"][1] += R.bracket[(a, b)] != neg
        res["bracket_degree"][0] += 1
        res["bracket_degree"][1] += any(Space.weight(k) != p + q - 1 for k in R.bracket[(a, b)])
    for (p, a), (q, b), (r, c) in itertools.product(elems, repeat=3):
        if p + q + r > N:
            continue
        A, B, C = {a: one}, {b: one}, {c: one}
        res["associative"][0] += 1
        res["associative"][1] += lin(R.product, lin(R.product, A, B), C) != lin(R.product, A, lin(R.product, B, C))
        # {a, bc} = {a,b}c + b{a,c}
        lhs = lin(R.bracket, A, lin(R.product, B, C))
        rhs = lin(R.product, lin(R.bracket, A, B), C)
        _axpy(F, rhs, one, lin(R.product, B, lin(R.bracket, A, C)))
        res["leibniz"][0] += 1
        res["leibniz"][1] += lhs != rhs
        # {a,{b,c}} = {{a,b},c} + {b,{a,c}}
        lhs = lin(R.bracket, A, lin(R.bracket, B, C))
        rhs = lin(R.bracket, lin(R.bracket, A, B), C)
        _axpy(F, rhs, one, lin(R.bracket, B, lin(R.bracket, A, C)))
        res["jacobi"][0] += 1
        res["jacobi"][1] += lhs != rhs
    return {k: {"checked": v[0], "failures": int(v[1]), "pass": v[1] == 0} for k, v in res.items()}


def phi_check(Z: ZhuAlgebra, R: C2Algebra) -> dict:
    """The map R(V)_w -> gr_w A(V), u + C_2 -> u + A(V)_{w-1}: well-defined
    (C_2 spanning rows go to 0), degreewise surjective, multiplicative."""
    F = Z.field
    one = F.one()
    K = min(Z.stabilized_through, R.N)
    sp = Z.voa.vacuum
    degrees = Z.degrees

    def phi(w: int, terms: dict) -> dict:
        return Z.gr_class(terms, w)

    out = {"degrees": K, "well_defined": [0, 0], "surjective": [0, 0], "multiplicative": [0, 0]}
    for w in range(K + 1):
        # well-defined: C_2 ∩ V_w maps to zero in gr_w
        keys = sp.basis(w, strict=False)
        for piv, row in R.echelons[w].rows.items():
            vec = {keys[i]: c for i, c in row.items()}
            out["well_defined"][0] += 1
            out["well_defined"][1] += bool(phi(w, vec))
        # surjective: images of R_w span gr_w
        gr_idx = [i for i, d in enumerate(degrees) if d == w]
        images = SparseEchelon(F)
        for key in R.basis[w]:
            images.add(phi(w, {key: one}))
        out["surjective"][0] += 1
        out["surjective"][1] += len(images) != len(gr_idx)
    for p in range(K + 1):
        for q in range(K + 1 - p):
            for a in R.basis[p]:
                for b in R.basis[q]:
                    lhs = phi(p + q, R.product[(a, b)]) if R.product else phi(p + q, R.normal_form(Z.voa._mode(sp, a[0], -1, b)))
                    # gr product of phi(a), phi(b): class of a * b in degree p + q
                    rhs = Z.gr_class(star_raw(Z.voa, {a: one}, {b: one}, Z.n), p + q)
                    out["multiplicative"][0] += 1
                    out["multiplicative"][1] += lhs != rhs
    result = {k: {"checked": v[0], "failures": int(v[1]), "pass": v[1] == 0} for k, v in out.items() if k != "degrees"}
    result["degrees_checked"] = K
    result["pass"] = all(v["pass"] for k, v in result.items() if isinstance(v, dict))
    return result
