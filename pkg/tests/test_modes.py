import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zhukit.fields import QQ, FieldError, PrimeField, parse_field
from zhukit.linalg import Matrix
from zhukit.modes import (
    VOA,
    GradedVector,
    ModuleConfig,
    TruncationError,
    VOAConfig,
    check_axioms,
    partition_dims,
)

from .oracles import partitions

F5, F7 = PrimeField(5), PrimeField(7)


def heis(F=QQ, N=8, rank=1):
    return VOA(VOAConfig("heisenberg", F, N, rank=rank))


def vir(F=QQ, N=8, c=Fraction(1, 2)):
    return VOA(VOAConfig("virasoro", F, N, c=F(c)))


def aff(F=QQ, N=8, k=1):
    return VOA(VOAConfig("affine_sl2", F, N, level=F(k)))


# --- bases and dimensions ---------------------------------------------------


def test_virasoro_basis_examples():
    V = vir()
    assert V.basis(0) == [((), 0)]
    assert V.basis(1) == []
    assert V.basis(2) == [(((-2, 0),), 0)]
    assert len(V.basis(4)) == 2


def test_heisenberg_weight_three():
    V = heis()
    strs = sorted(V.vacuum.key_str(k) for k in V.basis(3))
    assert len(strs) == 3
    assert strs == sorted(["h(-3)1", "h(-2)h(-1)1", "h(-1)h(-1)h(-1)1"])


@pytest.mark.parametrize("V", [heis(), vir(), aff()], ids=["heis", "vir", "aff"])
def test_weight_zero_is_vacuum(V):
    assert V.basis(0) == [((), 0)]


@pytest.mark.parametrize(
    "family,rank,colours,smallest",
    [("heisenberg", 1, 1, 1), ("heisenberg", 2, 2, 1), ("heisenberg", 3, 3, 1), ("virasoro", 1, 1, 2), ("affine_sl2", 1, 3, 1)],
)
def test_dims_match_partition_oracle(family, rank, colours, smallest):
    N = 7
    kw = {"rank": rank} if family == "heisenberg" else {"c": F7(3)} if family == "virasoro" else {"level": F7(1)}
    V = VOA(VOAConfig(family, F7, N, **kw))
    want = [partitions(w, smallest, colours) for w in range(N + 1)]
    assert V.dims(N) == want
    assert partition_dims(family, N, rank) == want


def test_module_dims():
    V = heis(F7, 6, rank=2)
    sp = V.module(ModuleConfig("fock", (F7(1), F7(2)), 6))
    assert sp.dims(6) == [partitions(w, 1, 2) for w in range(7)]
    W = vir(F7, 6)
    sp = W.module(ModuleConfig("verma", (F7(3),), 6))
    assert sp.dims(6) == [partitions(w, 1, 1) for w in range(7)]
    A = aff(QQ, 4)
    sp = A.module(ModuleConfig("weyl", (2,), 4))
    assert sp.dims(4) == [2 * partitions(w, 1, 3) for w in range(5)]


def test_basis_above_truncation():
    V = heis(N=4)
    with pytest.raises(TruncationError):
        V.basis(5)


# --- generator modes ----------------------------------------------------------


def test_heisenberg_h1_hm1():
    V = heis()
    assert V.generator_mode(0, 1, V.generator_vector(0)) == V.vac()


@pytest.mark.parametrize("F", [QQ, F5, F7])
def test_virasoro_l2_lm2(F):
    V = vir(F, c=3)
    half_c = F.div(F.from_int(3), F.from_int(2))
    assert V.generator_mode(0, 2, V.omega) == V.vac().scale(half_c)
    # omega_3 omega = (c/2) 1 through the VOA mode map
    assert V.mode(V.omega, 3, V.omega) == V.vac().scale(half_c)


def test_vacuum_modes_are_identity_or_zero():
    V = aff(F7, 5)
    vac = V.vac()
    for w in range(4):
        for key in V.basis(w):
            v = V.basis_vector(key)
            for n in range(-4, 3):
                got = V.mode(vac, n, v)
                assert got == (v if n == -1 else GradedVector(V.vacuum, {}))


def test_annihilation_on_vacuum_and_tops():
    V = heis(QQ, 6)
    for k in range(0, 3):
        assert V.generator_mode(0, k, V.vac()).is_zero()
    sp = V.module(ModuleConfig("fock", (QQ(3),), 4))
    top = V.vac(sp)
    assert V.generator_mode(0, 0, top) == top.scale(QQ.from_int(3))
    W = vir(QQ, 6, c=2)
    for k in (-1, 0, 1):
        got = W.generator_mode(0, k, W.vac())
        assert got.is_zero()
    spv = W.module(ModuleConfig("verma", (QQ(Fraction(5, 7)),), 4))
    assert W.generator_mode(0, 0, W.vac(spv)) == W.vac(spv).scale(QQ(Fraction(5, 7)).value)


def test_unknown_generator():
    V = heis()
    with pytest.raises(FieldError):
        V.generator_mode(3, 0, V.vac())
    with pytest.raises(FieldError):
        V.generator_mode("x", 0, V.vac())


def test_truncated_results_are_flagged():
    V = heis(N=2)
    v = V.generator_mode(0, -1, V.generator_mode(0, -1, V.vac()))
    assert not v.truncated
    w = V.generator_mode(0, -3, v)
    assert w.truncated and w.is_zero()


# --- configuration guards -----------------------------------------------------


def test_virasoro_char3_rejected():
    with pytest.raises(FieldError):
        VOAConfig("virasoro", PrimeField(3), 6, c=PrimeField(3)(1))


def test_critical_level_rejected():
    with pytest.raises(FieldError):
        VOAConfig("affine_sl2", QQ, 6, level=QQ(-2))
    with pytest.raises(FieldError):
        VOAConfig("affine_sl2", F5, 6, level=F5(3))


def test_module_family_mismatch():
    with pytest.raises(FieldError):
        heis().module(ModuleConfig("verma", (QQ(1),)))
    with pytest.raises(FieldError):
        vir().module(ModuleConfig("weyl", (2,)))


# --- zero modes -----------------------------------------------------------------


def test_o_of_vacuum_is_identity():
    V = aff(QQ, 4)
    sp = V.module(ModuleConfig("weyl", (2,), 3))
    for t in range(3):
        n = len(sp.basis(t))
        assert V.o(V.vac(), t, sp) == Matrix.identity(QQ, n)


def test_o_omega_on_verma_top():
    V = vir(QQ, 6, c=Fraction(1, 2))
    h = QQ(Fraction(1, 16))
    sp = V.module(ModuleConfig("verma", (h,), 4))
    assert V.o(V.omega, 0, sp) == Matrix(QQ, [[h.value]])
    for t in range(4):
        n = len(sp.basis(t))
        assert V.o(V.omega, t, sp) == Matrix.identity(QQ, n).scale(QQ.add(h.value, QQ.from_int(t)))


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(3, 2), Fraction(-2)])
def test_o_omega_on_fock_top(lam):
    V = heis(QQ, 6)
    sp = V.module(ModuleConfig("fock", (QQ(lam),), 4))
    assert V.o(V.omega, 0, sp) == Matrix(QQ, [[QQ.coerce(lam * lam / 2)]])


def test_o_rejects_inhomogeneous():
    V = heis()
    with pytest.raises(FieldError):
        V.o(V.vac() + V.generator_vector(0), 0)


# --- axiom suites -------------------------------------------------------------


def test_axioms_heisenberg_rank1_q_depth4():
    rep = check_axioms(heis(QQ, 6), 4)
    assert rep["pass"], rep


def test_axioms_virasoro_f5_depth6():
    rep = check_axioms(vir(F5, 8, c=2), 6)
    assert rep["pass"], rep


def test_axioms_with_modules():
    V = heis(F7, 6, rank=2)
    fock = V.module(ModuleConfig("fock", (F7(1), F7(3)), 4))
    assert check_axioms(V, 4, [fock])["pass"]
    A = aff(QQ, 6)
    weyl = A.module(ModuleConfig("weyl", (2,), 3))
    assert check_axioms(A, 3, [weyl])["pass"]
    W = vir(QQ, 6)
    verma = W.module(ModuleConfig("verma", (QQ(Fraction(1, 16)),), 4))
    assert check_axioms(W, 4, [verma])["pass"]


# --- iterate identity against independent formulas --------------------------


def normal_ordered(V, a, b, k, w):
    """(a_{-1} b)_k w = sum_{j<0} a_j b_{k-1-j} w + sum_{j>=0} b_{k-1-j} a_j w,
    evaluated with VOA modes of the generator states a and b only."""
    wt_w = w.weight
    out = GradedVector(w.space, {})
    for j in range(k - 1 - wt_w - b.weight, 0):
        out = out + V.mode(a, j, V.mode(b, k - 1 - j, w))
    for j in range(0, wt_w + a.weight):
        out = out + V.mode(b, k - 1 - j, V.mode(a, j, w))
    return out


def _states(V, space, upto):
    return [V.basis_vector(key, space) for w in range(upto + 1) for key in space.basis(w)]


@pytest.mark.parametrize(
    "V",
    [heis(F7, 12, rank=2), aff(QQ, 12), aff(F5, 12, k=1), vir(QQ, 12, c=Fraction(1, 2))],
    ids=["heis2-F7", "aff-Q", "aff-F5", "vir-Q"],
)
def test_iterate_identity_matches_normal_ordered_product(V):
    gens = [V.generator_vector(g) for g in range(len(V.generators))]
    for a in gens:
        for b in gens:
            u = V.mode(a, -1, b)
            assert u.weight <= 4
            for w in _states(V, V.vacuum, 3):
                for k in range(-2, u.weight + w.weight):
                    assert V.mode(u, k, w) == normal_ordered(V, a, b, k, w)


def test_iterate_identity_on_module():
    V = heis(QQ, 12, rank=1)
    sp = V.module(ModuleConfig("fock", (QQ(Fraction(2, 3)),), 6))
    a = V.generator_vector(0)
    u = V.mode(a, -1, a)
    for w in _states(V, sp, 3):
        for k in range(-1, 4):
            assert V.mode(u, k, w) == normal_ordered(V, a, a, k, w)


def _borcherds_commutator(V, u, v, m, n, w):
    lhs = V.mode(u, m, V.mode(v, n, w)) - V.mode(v, n, V.mode(u, m, w))
    rhs = GradedVector(w.space, {})
    for i in range(0, u.weight + v.weight + 2):
        c = math.comb(m, i) if m >= 0 else (-1) ** i * math.comb(i - m - 1, i)
        term = V.mode(V.mode(u, i, v), m + n - i, w)
        rhs = rhs + term.scale(V.field.from_int(c))
    return lhs, rhs


def _skew(V, u, v, k):
    """u_k v = sum_j (-1)^{k+j+1} L(-1)^j / j! v_{k+j} u."""
    F = V.field
    out = GradedVector(V.vacuum, {})
    for j in range(0, u.weight + v.weight + 2):
        x = V.mode(v, k + j, u)
        for _ in range(j):
            x = V.L(-1, x)
        c = F.div(F.from_int((-1) ** (k + j + 1)), F.from_int(math.factorial(j)))
        out = out + x.scale(c)
    return out


FAMILIES = {
    "heis2": lambda: heis(F7, 14, rank=2),
    "vir": lambda: vir(QQ, 14, c=Fraction(7, 10)),
    "aff": lambda: aff(F7, 12, k=3),
}
# the skew formula divides by j!, so it runs in characteristic 0
SKEW_FAMILIES = {
    "heis2-Q": lambda: heis(QQ, 14, rank=2),
    "vir-Q": lambda: vir(QQ, 14, c=Fraction(7, 10)),
    "aff-Q": lambda: aff(QQ, 12, k=Fraction(1, 3)),
}
_cache: dict = {}


def family(name):
    if name not in _cache:
        _cache[name] = {**FAMILIES, **SKEW_FAMILIES}[name]()
    return _cache[name]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.integers(0, 2**32 - 1))
def test_borcherds_commutator_on_composites(name, seed):
    V = family(name)
    rng = random.Random(seed)
    pool = [s for s in _states(V, V.vacuum, 4) if s.weight >= 1]
    u, v = rng.choice(pool), rng.choice(pool)
    w = rng.choice(_states(V, V.vacuum, 3))
    m, n = rng.randint(-1, 3), rng.randint(-1, 3)
    if u.weight + v.weight + w.weight - m - n - 2 > V.config.truncation - 2:
        return
    lhs, rhs = _borcherds_commutator(V, u, v, m, n, w)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(SKEW_FAMILIES)), st.integers(0, 2**32 - 1))
def test_skew_symmetry(name, seed):
    V = family(name)
    rng = random.Random(seed)
    pool = [s for s in _states(V, V.vacuum, 4) if s.weight >= 1]
    u, v = rng.choice(pool), rng.choice(pool)
    k = rng.randint(-2, u.weight + v.weight - 1)
    if u.weight + v.weight - k - 1 > V.config.truncation - 2:
        return
    assert V.mode(u, k, v) == _skew(V, u, v, k)


def test_grading_exhaustive_small():
    for V in (heis(F5, 8, rank=2), vir(F7, 8), aff(F7, 8)):
        states = _states(V, V.vacuum, 3)
        for u in states:
            for v in states:
                for k in range(-3, u.weight + v.weight):
                    r = V.mode(u, k, v)
                    if not r.is_zero():
                        assert r.weights() == {u.weight + v.weight - k - 1}


def test_extension_field_engine():
    K = parse_field("F5[t]/(t^2-2)")
    V = VOA(VOAConfig("virasoro", K, 6, c=K("t")))
    got = V.mode(V.omega, 3, V.omega)
    assert got == V.vac().scale(K.mul(K.gen(), K.inv(K.from_int(2))))
