"""Mode actions for the Heisenberg, Virasoro and affine sl_2 vertex operator
algebras and a few of their modules, over any exact field.

States are PBW words applied to a top vector.  A word is a tuple of
``(k, g)`` pairs, ``k < 0`` the *natural* mode index of generator ``g``
(``h_k``, ``L_k``, ``e_k`` ...), sorted ascending: most negative mode first,
ties broken by generator id.  A basis key is ``(word, j)`` where ``j``
indexes a basis vector of the top space (always 0 for the vacuum module).

Generator modes act by straightening with the family commutation relations.
Modes of composite states come from the iterate formula

    (a_p b)_k = sum_{i>=0} (-1)^i C(p, i) (a_{p-i} b_{k+i} - (-1)^p b_{p+k-i} a_i)

applied to ``u = a_p b`` where ``a`` is the leading generator of the word.
Both layers are memoised per space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fields import Field, FieldError, Scalar
from .linalg import Matrix

__all__ = [
    "VOAConfig",
    "ModuleConfig",
    "VOA",
    "Space",
    "GradedVector",
    "TruncationError",
    "check_axioms",
    "partition_dims",
]


class TruncationError(ValueError):
    """A request above the weight cutoff."""


FAMILIES = ("heisenberg", "virasoro", "affine_sl2")


@dataclass(frozen=True)
class VOAConfig:
    family: str
    field: Field
    truncation: int = 8
    rank: int = 1
    c: Scalar | None = None
    level: Scalar | None = None

    def __post_init__(self):
        F = self.field
        if self.family not in FAMILIES:
            raise FieldError(f"unknown family {self.family!r}")
        if F.char == 2:
            raise FieldError("characteristic 2 is excluded")
        if self.family == "heisenberg" and self.rank < 1:
            raise FieldError("Heisenberg rank must be >= 1")
        if self.family == "virasoro":
            if F.char == 3:
                raise FieldError("Virasoro needs 1/12: characteristic 3 is excluded")
            if self.c is None:
                raise FieldError("Virasoro needs a central charge c")
        if self.family == "affine_sl2":
            if self.level is None:
                raise FieldError("affine sl2 needs a level k")
            if F.is_zero(F.add(F.coerce(self.level), F.from_int(2))):
                raise FieldError("affine sl2 needs k + 2 invertible (critical level excluded)")
        if self.truncation < 0:
            raise FieldError("truncation must be >= 0")

    def with_field(self, K: Field, truncation: int | None = None) -> "VOAConfig":
        c = K(self.c) if self.c is not None else None
        lv = K(self.level) if self.level is not None else None
        return VOAConfig(self.family, K, self.truncation if truncation is None else truncation, self.rank, c, lv)

    def with_truncation(self, N: int) -> "VOAConfig":
        return VOAConfig(self.family, self.field, N, self.rank, self.c, self.level)

    def describe(self) -> dict:
        out = {"family": self.family, "field": str(self.field), "truncation": self.truncation}
        if self.family == "heisenberg":
            out["rank"] = self.rank
        if self.c is not None:
            out["c"] = str(self.c)
        if self.level is not None:
            out["k"] = str(self.level)
        return out


@dataclass(frozen=True)
class ModuleConfig:
    """Which module: ``vacuum``; ``fock`` (h_0 acts on a top space by
    commuting matrices, or by scalars lambda); ``verma`` (L_0 = h on the top
    vector); ``weyl`` (top space the d-dimensional sl_2 module)."""

    kind: str
    params: tuple = ()
    truncation: int | None = None

    def describe(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "fock":
            out["h0"] = [m.to_strings() if isinstance(m, Matrix) else str(m) for m in self.params]
        elif self.kind == "verma":
            out["h"] = str(self.params[0])
        elif self.kind == "weyl":
            out["top_dim"] = self.params[0]
        return out


def _binom_signed(p: int, i: int) -> int:
    """(-1)^i * C(p, i) for any integer p."""
    if p >= 0:
        return (-1) ** i * math.comb(p, i)
    return math.comb(i - p - 1, i)


class Space:
    """The vacuum module or a module over it: PBW words on a top space."""

    def __init__(self, voa: "VOA", name: str, top_dim: int, zero_modes: dict, create_max: int,
                 truncation: int, config: ModuleConfig | None = None):
        self.voa = voa
        self.name = name
        self.top_dim = top_dim
        self.zero_modes = zero_modes  # g -> Matrix on the top space, or absent (kills)
        self.create_max = create_max
        self.truncation = truncation
        self.config = config
        self._apply_memo: dict = {}
        self._mode_memo: dict = {}
        self._words_memo: dict = {}
        self._zero_cols = {}
        F = voa.field
        for g, M in zero_modes.items():
            self._zero_cols[g] = [
                {((), i): M.rows[i][j] for i in range(top_dim) if not F.is_zero(M.rows[i][j])}
                for j in range(top_dim)
            ]

    @property
    def is_vacuum(self) -> bool:
        return self.name == "vacuum"

    # --- basis ---------------------------------------------------------
    def words(self, w: int) -> list[tuple]:
        return list(self._words(w, None))

    def _words(self, w, lo):
        key = (w, lo)
        hit = self._words_memo.get(key)
        if hit is not None:
            return hit
        if w == 0:
            out = [()]
        else:
            out = []
            gens = range(len(self.voa.generators))
            for k in range(-w, self.create_max + 1):
                for g in gens:
                    el = (k, g)
                    if lo is not None and el < lo:
                        continue
                    for rest in self._words(w + k, el):
                        out.append((el,) + rest)
        self._words_memo[key] = out
        return out

    def basis(self, w: int, strict: bool = True) -> list[tuple]:
        if w < 0:
            return []
        if strict and w > self.truncation:
            raise TruncationError(f"weight {w} exceeds truncation {self.truncation}")
        return [(word, j) for word in self.words(w) for j in range(self.top_dim)]

    def dims(self, upto: int | None = None) -> list[int]:
        upto = self.truncation if upto is None else upto
        return [len(self.basis(w, strict=False)) for w in range(upto + 1)]

    @staticmethod
    def weight(key) -> int:
        return -sum(k for k, _ in key[0])

    def top_action(self, g, k, j):
        if k == 0:
            cols = self._zero_cols.get(g)
            if cols is not None:
                return cols[j]
        return {}

    def key_str(self, key) -> str:
        names = self.voa.generators
        word, j = key
        s = "".join(f"{names[g]}({k})" for k, g in word)
        top = "1" if self.is_vacuum else f"v{j}"
        return s + top

    def __repr__(self):
        return f"<Space {self.name} of {self.voa}>"


class GradedVector:
    """Finite linear combination of basis keys of one space."""

    __slots__ = ("space", "terms", "truncated")

    def __init__(self, space: Space, terms: dict | None = None, truncated: bool = False):
        F = space.voa.field
        self.space = space
        self.terms = {k: v for k, v in (terms or {}).items() if not F.is_zero(v)}
        self.truncated = truncated

    @property
    def field(self) -> Field:
        return self.space.voa.field

    def weights(self) -> set[int]:
        return {Space.weight(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise FieldError("weight of a non-homogeneous or zero vector")
        return next(iter(ws))

    def components(self) -> dict[int, "GradedVector"]:
        out: dict[int, dict] = {}
        for k, v in self.terms.items():
            out.setdefault(Space.weight(k), {})[k] = v
        return {w: GradedVector(self.space, t) for w, t in sorted(out.items())}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GradedVector") -> "GradedVector":
        self._check(other)
        r = dict(self.terms)
        _axpy(self.field, r, self.field.one(), other.terms)
        return GradedVector(self.space, r, self.truncated or other.truncated)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        self._check(other)
        r = dict(self.terms)
        _axpy(self.field, r, self.field.neg(self.field.one()), other.terms)
        return GradedVector(self.space, r, self.truncated or other.truncated)

    def scale(self, c) -> "GradedVector":
        F = self.field
        if isinstance(c, (Scalar, int, str, Fraction)):
            c = F.coerce(c)
        return GradedVector(self.space, {k: F.mul(c, v) for k, v in self.terms.items()}, self.truncated)

    def coeff(self, key):
        return self.terms.get(key, self.field.zero())

    def _check(self, other):
        if other.space is not self.space:
            raise FieldError("vectors live in different spaces")

    def __eq__(self, other):
        return isinstance(other, GradedVector) and other.space is self.space and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for k in sorted(self.terms, key=lambda k: (Space.weight(k), k)):
            parts.append(f"({F.fmt(self.terms[k])})*{self.space.key_str(k)}")
        return " + ".join(parts)

    __repr__ = __str__


def _axpy(F: Field, target: dict, c, src: dict) -> None:
    """target += c * src, dropping zeros."""
    if F.is_zero(c):
        return
    for k, v in src.items():
        old = target.get(k)
        new = F.mul(c, v) if old is None else F.add(old, F.mul(c, v))
        if F.is_zero(new):
            target.pop(k, None)
        else:
            target[k] = new


class _Family:
    """Commutation relations of one family in natural mode indices."""

    generators: list[str]
    gen_weights: list[int]
    vacuum_create_max = -1

    def bracket(self, g, m, h, n):
        """[g_m, h_n] as (list of (gen, mode, raw coeff), central raw coeff)."""
        raise NotImplementedError


class _Heisenberg(_Family):
    def __init__(self, F, rank):
        self.F = F
        self.rank = rank
        self.generators = ["h"] if rank == 1 else [f"h{a + 1}" for a in range(rank)]
        self.gen_weights = [1] * rank

    def bracket(self, g, m, h, n):
        if g == h and m + n == 0 and m != 0:
            return (), self.F.from_int(m)
        return (), None


class _Virasoro(_Family):
    vacuum_create_max = -2

    def __init__(self, F, c):
        self.F = F
        self.c = c
        self.generators = ["L"]
        self.gen_weights = [2]
        self._twelfth = F.inv(F.from_int(12))

    def bracket(self, g, m, h, n):
        F = self.F
        terms = ((0, m + n, F.from_int(m - n)),) if m != n else ()
        central = None
        if m + n == 0 and m * m * m - m != 0:
            central = F.mul(F.mul(F.from_int(m * m * m - m), self._twelfth), self.c)
        return terms, central


class _AffineSl2(_Family):
    # generator ids: e=0, h=1, f=2
    LIE = {
        (0, 1): ((0, -2),),
        (1, 0): ((0, 2),),
        (1, 2): ((2, -2),),
        (2, 1): ((2, 2),),
        (0, 2): ((1, 1),),
        (2, 0): ((1, -1),),
    }
    FORM = {(0, 2): 1, (2, 0): 1, (1, 1): 2}

    def __init__(self, F, k):
        self.F = F
        self.k = k
        self.generators = ["e", "h", "f"]
        self.gen_weights = [1, 1, 1]
        self._lie = {key: tuple((z, F.from_int(c)) for z, c in val) for key, val in self.LIE.items()}

    def bracket(self, g, m, h, n):
        F = self.F
        terms = tuple((z, m + n, c) for z, c in self._lie.get((g, h), ()))
        central = None
        form = self.FORM.get((g, h))
        if form and m + n == 0 and m != 0:
            central = F.mul(F.from_int(m * form), self.k)
        return terms, central


class VOA:
    """A truncated vertex operator algebra of one of the three families."""

    def __init__(self, config: VOAConfig):
        self.config = config
        F = self.field = config.field
        if config.family == "heisenberg":
            self.family = _Heisenberg(F, config.rank)
        elif config.family == "virasoro":
            self.family = _Virasoro(F, F.coerce(config.c))
        else:
            self.family = _AffineSl2(F, F.coerce(config.level))
        self.generators = self.family.generators
        self.gen_weights = self.family.gen_weights
        self.vacuum = Space(self, "vacuum", 1, {}, self.family.vacuum_create_max, config.truncation)
        self._modules: dict = {}
        self.omega = self._build_omega()

    def __repr__(self):
        d = self.config.describe()
        return f"VOA({', '.join(f'{k}={v}' for k, v in d.items())})"

    @property
    def central_charge(self):
        F = self.field
        cfg = self.config
        if cfg.family == "heisenberg":
            return F.from_int(cfg.rank)
        if cfg.family == "virasoro":
            return F.coerce(cfg.c)
        k = F.coerce(cfg.level)
        return F.div(F.mul(F.from_int(3), k), F.add(k, F.from_int(2)))

    # --- vectors -------------------------------------------------------
    def vector(self, terms: dict, space: Space | None = None) -> GradedVector:
        return GradedVector(space or self.vacuum, terms)

    def vac(self, space: Space | None = None) -> GradedVector:
        space = space or self.vacuum
        return GradedVector(space, {((), 0): self.field.one()})

    def basis_vector(self, key, space: Space | None = None) -> GradedVector:
        return GradedVector(space or self.vacuum, {key: self.field.one()})

    def gen_index(self, g) -> int:
        if isinstance(g, int):
            if not 0 <= g < len(self.generators):
                raise FieldError(f"unknown generator {g!r}")
            return g
        try:
            return self.generators.index(g)
        except ValueError:
            raise FieldError(f"unknown generator {g!r}") from None

    def generator_vector(self, g) -> GradedVector:
        """The generating field's state: h_{-1}1, L_{-2}1 or x_{-1}1."""
        g = self.gen_index(g)
        k = -self.gen_weights[g]
        return self.basis_vector((((k, g),), 0))

    def _build_omega(self) -> GradedVector:
        F = self.field
        fam = self.config.family
        vac = ((), 0)
        if fam == "virasoro":
            return self.basis_vector((((-2, 0),), 0))
        half = F.inv(F.from_int(2))
        acc: dict = {}
        sp = self.vacuum
        if fam == "heisenberg":
            for a in range(self.config.rank):
                for key, c in self._apply(sp, a, -1, vac).items():
                    _axpy(F, acc, F.mul(half, c), self._apply(sp, a, -1, key))
            return GradedVector(sp, acc)
        e, h, f = 0, 1, 2
        for x, y, coeff in ((e, f, F.one()), (f, e, F.one()), (h, h, half)):
            for key, c in self._apply(sp, y, -1, vac).items():
                _axpy(F, acc, F.mul(coeff, c), self._apply(sp, x, -1, key))
        k = F.coerce(self.config.level)
        scale = F.inv(F.mul(F.from_int(2), F.add(k, F.from_int(2))))
        return GradedVector(sp, {key: F.mul(scale, c) for key, c in acc.items()})

    # --- modules -------------------------------------------------------
    def module(self, mc: ModuleConfig) -> Space:
        key = (mc.kind, mc.params, mc.truncation)
        hit = self._modules.get(key)
        if hit is not None:
            return hit
        F = self.field
        N = self.config.truncation if mc.truncation is None else mc.truncation
        fam = self.config.family
        if mc.kind == "vacuum":
            sp = self.vacuum
        elif mc.kind == "fock":
            if fam != "heisenberg":
                raise FieldError("fock modules belong to the Heisenberg family")
            mats = []
            for p in mc.params:
                mats.append(p if isinstance(p, Matrix) else Matrix(F, [[F.coerce(p)]]))
            if len(mats) != self.config.rank:
                raise FieldError(f"fock module needs {self.config.rank} h_0 eigen-data, got {len(mats)}")
            d = mats[0].nrows
            for M in mats:
                if M.shape != (d, d) or M.field != F:
                    raise FieldError("fock top matrices must be square, equal size, over the VOA field")
            for A in mats:
                for B in mats:
                    if A @ B != B @ A:
                        raise FieldError("fock top matrices must commute")
            sp = Space(self, f"fock", d, dict(enumerate(mats)), -1, N, mc)
        elif mc.kind == "verma":
            if fam != "virasoro":
                raise FieldError("verma modules belong to the Virasoro family")
            h = F.coerce(mc.params[0])
            sp = Space(self, "verma", 1, {0: Matrix(F, [[h]])}, -1, N, mc)
        elif mc.kind == "weyl":
            if fam != "affine_sl2":
                raise FieldError("weyl modules belong to the affine sl2 family")
            d = int(mc.params[0])
            if d < 1:
                raise FieldError("top dimension must be >= 1")
            sp = Space(self, "weyl", d, dict(enumerate(sl2_irrep(F, d))), -1, N, mc)
        else:
            raise FieldError(f"unknown module kind {mc.kind!r}")
        self._modules[key] = sp
        return sp

    # --- straightening ---------------------------------------------------
    def _apply(self, space: Space, g: int, k: int, key) -> dict:
        memo = space._apply_memo
        mk = (g, k, key)
        hit = memo.get(mk)
        if hit is not None:
            return hit
        word, j = key
        F = self.field
        if k <= space.create_max and (not word or (k, g) <= word[0]):
            res = {(((k, g),) + word, j): F.one()}
        elif not word:
            res = space.top_action(g, k, j)
        elif k > 0 and k > -sum(x for x, _ in word):
            res = {}
        else:
            k1, g1 = word[0]
            rest = (word[1:], j)
            res = {}
            for key2, c in self._apply(space, g, k, rest).items():
                _axpy(F, res, c, self._apply(space, g1, k1, key2))
            terms, central = self.family.bracket(g, k, g1, k1)
            for g2, k2, c in terms:
                _axpy(F, res, c, self._apply(space, g2, k2, rest))
            if central is not None:
                _axpy(F, res, central, {rest: F.one()})
        memo[mk] = res
        return res

    def _mode(self, space: Space, uword: tuple, k: int, key) -> dict:
        """Raw u_k w for u = uword*1 (vacuum word) and basis key w of ``space``."""
        F = self.field
        if not uword:
            return {key: F.one()} if k == -1 else {}
        memo = space._mode_memo
        mk = (uword, k, key)
        hit = memo.get(mk)
        if hit is not None:
            return hit
        kn, g = uword[0]
        rest = uword[1:]
        wa = self.gen_weights[g]
        p = kn + wa - 1  # VOA mode index of the leading generator mode
        if not rest and p == -1:
            res = self._apply(space, g, k - wa + 1, key)
            memo[mk] = res
            return res
        wb = -sum(x for x, _ in rest)
        wv = Space.weight(key)
        res: dict = {}
        if wa + wb + wv - p - k - 2 >= 0:
            sign_p = -1 if p % 2 else 1
            imax = max(wb + wv - k - 1, wa + wv - 1)
            for i in range(imax + 1):
                c = F.from_int(_binom_signed(p, i))
                if F.is_zero(c):
                    continue
                if wb + wv - k - i - 1 >= 0:
                    for key2, x in self._mode(space, rest, k + i, key).items():
                        _axpy(F, res, F.mul(c, x), self._apply(space, g, p - i - wa + 1, key2))
                if wa + wv - i - 1 >= 0:
                    cc = F.neg(c) if sign_p == 1 else c
                    for key2, x in self._apply(space, g, i - wa + 1, key).items():
                        _axpy(F, res, F.mul(cc, x), self._mode(space, rest, p + k - i, key2))
        memo[mk] = res
        return res

    # --- public mode API -------------------------------------------------
    def generator_mode(self, g, k: int, v: GradedVector) -> GradedVector:
        """Natural-index generator mode: h_k, L_k, e_k / h_k / f_k."""
        g = self.gen_index(g)
        sp = v.space
        F = self.field
        out: dict = {}
        for key, c in v.terms.items():
            _axpy(F, out, c, self._apply(sp, g, k, key))
        return self._truncate(sp, out, v.truncated)

    def mode(self, u: GradedVector, k: int, v: GradedVector) -> GradedVector:
        """VOA mode u_k v (coefficient of z^{-k-1} in Y(u, z) v)."""
        if u.space is not self.vacuum:
            raise FieldError("mode(): u must be a state of the vertex operator algebra")
        sp = v.space
        F = self.field
        out: dict = {}
        for ukey, a in u.terms.items():
            for vkey, b in v.terms.items():
                _axpy(F, out, F.mul(a, b), self._mode(sp, ukey[0], k, vkey))
        return self._truncate(sp, out, u.truncated or v.truncated)

    def mode_raw(self, space: Space, uterms: dict, k: int, vterms: dict) -> dict:
        """Dict-level u_k v without truncation bookkeeping (internal hot path)."""
        F = self.field
        out: dict = {}
        for ukey, a in uterms.items():
            for vkey, b in vterms.items():
                _axpy(F, out, F.mul(a, b), self._mode(space, ukey[0], k, vkey))
        return out

    def _truncate(self, sp: Space, terms: dict, flagged: bool) -> GradedVector:
        N = sp.truncation
        kept = {key: c for key, c in terms.items() if Space.weight(key) <= N}
        return GradedVector(sp, kept, flagged or len(kept) != len(terms))

    def L(self, n: int, v: GradedVector) -> GradedVector:
        """Virasoro operator L(n) = omega_{n+1}."""
        return self.mode(self.omega, n + 1, v)

    def o(self, u: GradedVector, t: int, space: Space | None = None) -> Matrix:
        """Matrix of the zero mode u_{wt u - 1} on the grade-t piece of ``space``."""
        space = space or self.vacuum
        if u.is_zero():
            n = len(space.basis(t))
            return Matrix.zeros(self.field, n)
        if not u.is_homogeneous():
            raise FieldError("o(u) needs a homogeneous u")
        s = u.weight
        return self.operator(u, s - 1, t, space)

    def operator(self, u: GradedVector, k: int, t: int, space: Space | None = None) -> Matrix:
        """Matrix of u_k from M(t) to M(wt u + t - k - 1) (u homogeneous)."""
        space = space or self.vacuum
        F = self.field
        src = space.basis(t)
        tgt_w = (u.weight if not u.is_zero() else 0) + t - k - 1
        tgt = space.basis(tgt_w) if tgt_w >= 0 else []
        index = {key: i for i, key in enumerate(tgt)}
        cols = []
        for key in src:
            res = self.mode_raw(space, u.terms, k, {key: F.one()})
            col = [F.zero()] * len(tgt)
            for rk, c in res.items():
                col[index[rk]] = c
            cols.append(col)
        rows = [list(r) for r in zip(*cols)] if cols and tgt else [[F.zero()] * len(src) for _ in tgt]
        return Matrix(F, rows, len(src))

    def basis(self, w: int, space: Space | None = None) -> list[tuple]:
        return (space or self.vacuum).basis(w)

    def dims(self, upto: int | None = None, space: Space | None = None) -> list[int]:
        return (space or self.vacuum).dims(upto)


def sl2_irrep(F: Field, d: int) -> list[Matrix]:
    """Matrices of e, h, f on the d-dimensional sl_2 module with basis
    v_0..v_{d-1}: f v_i = v_{i+1}, h v_i = (d-1-2i) v_i, e v_i = i(d-i) v_{i-1}."""
    z = F.zero()
    E = [[z] * d for _ in range(d)]
    H = [[z] * d for _ in range(d)]
    Fm = [[z] * d for _ in range(d)]
    for i in range(d):
        H[i][i] = F.from_int(d - 1 - 2 * i)
        if i + 1 < d:
            Fm[i + 1][i] = F.one()
        if i >= 1:
            E[i - 1][i] = F.from_int(i * (d - i))
    return [Matrix(F, E), Matrix(F, H), Matrix(F, Fm)]


def partition_dims(family: str, upto: int, rank: int = 1) -> list[int]:
    """Graded dimensions predicted by partition counting: colours = number of
    generators, smallest part 2 for the Virasoro vacuum, 1 otherwise."""
    colours = {"heisenberg": rank, "virasoro": 1, "affine_sl2": 3}[family]
    smallest = 2 if family == "virasoro" else 1
    series = [1] + [0] * upto
    for part in range(smallest, upto + 1):
        for _ in range(colours):
            for w in range(part, upto + 1):
                series[w] += series[w - part]
    return series


# --- axiom checks ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: str | None = None

    def record(self, ok: bool, detail=None):
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None and detail is not None:
                self.counterexample = detail() if callable(detail) else str(detail)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        out = {"name": self.name, "checked": self.checked, "failures": self.failures, "pass": self.passed}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def check_axioms(voa: VOA, depth: int | None = None, spaces: Sequence[Space] = ()) -> dict:
    """Exhaustively verify the component axioms on basis states of weight <= depth.

    Checks: vacuum (1_n v = delta_{n,-1} v), creation (u_{-1}1 = u,
    u_n 1 = 0 for n >= 0), grading (u_n v in V_{s+t-n-1}), L(0) eigenvalues,
    the L(-1)-derivative property (L(-1)u)_n = -n u_{n-1}, Virasoro relations
    of L(m) = omega_{m+1}, and generator commutators.  ``spaces`` adds
    modules on which grading, L(0)-grading differences and the derivative
    property are checked too.
    """
    depth = voa.config.truncation if depth is None else depth
    F = voa.field
    sp = voa.vacuum
    one = F.one()
    vac = voa.vac()
    res = {name: CheckResult(name) for name in
           ("vacuum", "creation", "grading", "L0", "derivative", "virasoro", "commutator")}
    vbasis = [(w, key) for w in range(depth + 1) for key in sp.basis(w, strict=False)]
    ket = lambda key, space=sp: {key: one}

    for w, key in vbasis:
        v = ket(key)
        # vacuum axiom
        for n in range(-depth - 1, 2):
            got = voa.mode_raw(sp, {((), 0): one}, n, v)
            want = v if n == -1 else {}
            res["vacuum"].record(got == want, lambda: f"1_{n} {sp.key_str(key)}")
        # creation
        got = voa.mode_raw(sp, v, -1, {((), 0): one})
        res["creation"].record(got == v, lambda: f"u_(-1)1 != u for {sp.key_str(key)}")
        for n in range(0, w + 2):
            got = voa.mode_raw(sp, v, n, {((), 0): one})
            res["creation"].record(not got, lambda: f"u_{n}1 != 0 for {sp.key_str(key)}")
        # L(0)
        got = voa.mode_raw(sp, voa.omega.terms, 1, v)
        want = {key: F.from_int(w)} if not F.is_zero(F.from_int(w)) else {}
        res["L0"].record(got == want, lambda: f"L(0) {sp.key_str(key)}")

    # grading and derivative on pairs; L(-1)u computed once per u
    Lm1 = {key: voa.mode_raw(sp, voa.omega.terms, 0, ket(key)) for _, key in vbasis}
    targets = [sp] + list(spaces)
    for target in targets:
        tbasis = [(w, key) for w in range(depth + 1) for key in target.basis(w, strict=False)]
        for s, ukey in vbasis:
            for t, vkey in tbasis:
                if s + t > depth:
                    continue
                lo = s + t - 1 - depth
                for n in range(lo, s + t + 1):
                    got = voa.mode_raw(target, ket(ukey), n, {vkey: one})
                    expect_w = s + t - n - 1
                    ok = all(Space.weight(k) == expect_w for k in got) and (expect_w >= 0 or not got)
                    res["grading"].record(ok, lambda: f"{sp.key_str(ukey)}_({n}) {target.key_str(vkey)}")
                    lhs = voa.mode_raw(target, Lm1[ukey], n, {vkey: one})
                    rhs_raw = voa.mode_raw(target, ket(ukey), n - 1, {vkey: one})
                    rhs = {k: F.mul(F.from_int(-n), c) for k, c in rhs_raw.items() if not F.is_zero(F.mul(F.from_int(-n), c))}
                    res["derivative"].record(lhs == rhs, lambda: f"(L(-1){sp.key_str(ukey)})_({n}) on {target.key_str(vkey)}")

    # Virasoro relations of L(m) on V and modules, |m|,|n| <= 3
    c = voa.central_charge
    twelfth = F.inv(F.from_int(12))
    om = voa.omega.terms
    for target in targets:
        for t in range(0, max(depth - 3, 0) + 1):
            for key in target.basis(t, strict=False):
                v = {key: one}
                for m in range(-2, 3):
                    for n in range(-2, 3):
                        if t - m - n > depth or t - m > depth or t - n > depth:
                            continue
                        ab = _apply_op(voa, target, om, m + 1, _apply_op(voa, target, om, n + 1, v))
                        ba = _apply_op(voa, target, om, n + 1, _apply_op(voa, target, om, m + 1, v))
                        lhs = dict(ab)
                        _axpy(F, lhs, F.neg(one), ba)
                        rhs = {}
                        _axpy(F, rhs, F.from_int(m - n), _apply_op(voa, target, om, m + n + 1, v))
                        if m + n == 0:
                            _axpy(F, rhs, F.mul(F.mul(F.from_int(m ** 3 - m), twelfth), c), v)
                        res["virasoro"].record(lhs == rhs, lambda: f"[L({m}),L({n})] on {target.key_str(key)}")

    # generator commutators via the straightening routine vs the bracket table
    ng = len(voa.generators)
    for target in targets:
        for t in range(0, depth + 1):
            for key in target.basis(t, strict=False):
                for g in range(ng):
                    for h in range(ng):
                        for m in range(-2, 3):
                            for n in range(-2, 3):
                                if t - m - n > depth or t - m > depth or t - n > depth:
                                    continue
                                # [g_m, h_n] v = g_m h_n v - h_n g_m v
                                lhs = _gen_op(voa, target, g, m, _gen_op(voa, target, h, n, {key: one}))
                                _axpy(F, lhs, F.neg(one), _gen_op(voa, target, h, n, _gen_op(voa, target, g, m, {key: one})))
                                terms, central = voa.family.bracket(g, m, h, n)
                                rhs: dict = {}
                                for g2, k2, cc in terms:
                                    _axpy(F, rhs, cc, voa._apply(target, g2, k2, key))
                                if central is not None:
                                    _axpy(F, rhs, central, {key: one})
                                res["commutator"].record(lhs == rhs, lambda: f"[{voa.generators[g]}_{m},{voa.generators[h]}_{n}] on {target.key_str(key)}")

    checks = [r.as_dict() for r in res.values()]
    return {
        "config": voa.config.describe(),
        "depth": depth,
        "spaces": [s.name for s in targets],
        "checks": checks,
        "pass": all(r.passed for r in res.values()),
    }


def _apply_op(voa: VOA, space: Space, uterms: dict, k: int, vec: dict) -> dict:
    F = voa.field
    out: dict = {}
    for key, c in vec.items():
        _axpy(F, out, c, voa.mode_raw(space, uterms, k, {key: F.one()}))
    return out


def _gen_op(voa: VOA, space: Space, g: int, k: int, vec: dict) -> dict:
    F = voa.field
    out: dict = {}
    for key, c in vec.items():
        _axpy(F, out, c, voa._apply(space, g, k, key))
    return out
