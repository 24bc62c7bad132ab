"""Scalar extension - (x)_F K for algebras, modules and vertex operator
algebra configurations, and the comparison between simplicity of the top
level over the Zhu algebra and irreducibility of the whole (truncated)
module after extension."""
from __future__ import annotations

from fractions import Fraction

from .assoc import (
    DEFAULT_SEED,
    MatrixModule,
    SCAlgebra,
    UnsupportedError,
    block_count,
    division_exact_finite,
    division_probe,
    endomorphisms,
    is_simple_module,
)
from .fields import (
    Extension,
    Field,
    FieldError,
    Scalar,
    embed_raw,
    parse_poly,
    poly_deriv,
    poly_gcd,
    poly_trim,
)
from .linalg import Matrix, SparseEchelon, nullspace, rref
from .modes import VOA, ModuleConfig, Space, VOAConfig, _axpy
from .zhu import DEFAULT_BUDGET, zero_mode_matrices, zhu_algebra

__all__ = [
    "make_extension",
    "is_separable",
    "extend_algebra",
    "extend_module",
    "extend_matrix",
    "extend_voa",
    "extend_module_config",
    "voa_extension_check",
    "zhu_extension_check",
    "module_proxy",
    "lemma36_check",
]


def is_separable(F: Field, coeffs) -> bool:
    """gcd(m, m') = 1."""
    m = poly_trim(F, coeffs)
    return len(poly_gcd(F, m, poly_deriv(F, m))) == 1


def make_extension(base: Field, poly_text: str, var: str = "t") -> Extension:
    """F[var]/(m) from text such as ``"t^2-2"``.  Inseparable m raises
    UnsupportedError; reducible m raises FieldError."""
    terms = parse_poly(poly_text, var)
    if not terms:
        raise FieldError("empty minimal polynomial")
    deg = max(terms)
    coeffs = []
    for k in range(deg + 1):
        c = terms.get(k, Fraction(0))
        coeffs.append(base.from_fraction(c.numerator, c.denominator))
    if base.is_zero(coeffs[-1]):
        raise FieldError(f"leading coefficient of {poly_text} vanishes in {base}")
    if deg < 1:
        raise FieldError("minimal polynomial must have degree >= 1")
    if not is_separable(base, coeffs):
        raise UnsupportedError(f"{poly_text} is inseparable over {base}")
    return Extension(base, coeffs, var)


def _embedder(src: Field, K: Field):
    if src == K:
        return lambda a: a
    if src not in K.tower():
        raise FieldError(f"{K} is not an extension of {src}")
    return lambda a: embed_raw(a, src, K)


def extend_matrix(M: Matrix, K: Field) -> Matrix:
    return M.map(_embedder(M.field, K), K)


def extend_algebra(A: SCAlgebra, K: Field) -> SCAlgebra:
    e = _embedder(A.field, K)
    table = [[[e(c) for c in A.table[i][j]] for j in range(A.dim)] for i in range(A.dim)]
    B = SCAlgebra(K, table, [e(c) for c in A.one], check=False, names=A.names)
    if A.matrices is not None:
        B.matrices = [extend_matrix(m, K) for m in A.matrices]
    return B


def extend_module(M: MatrixModule, K: Field) -> MatrixModule:
    alg = extend_algebra(M.algebra, K) if M.algebra is not None else None
    return MatrixModule(K, [extend_matrix(m, K) for m in M.matrices], alg, M.label)


def _extend_param(value, src: Field, K: Field):
    if value is None:
        return None
    raw = value.value if isinstance(value, Scalar) else src.coerce(value)
    return Scalar(K, _embedder(src, K)(raw))


def extend_voa(config: VOAConfig, K: Field) -> VOAConfig:
    """The same family over K with embedded parameters."""
    F = config.field
    _embedder(F, K)  # validates the extension
    return VOAConfig(
        family=config.family,
        field=K,
        truncation=config.truncation,
        rank=config.rank,
        c=_extend_param(config.c, F, K),
        level=_extend_param(config.level, F, K),
    )


def extend_module_config(mc: ModuleConfig, src: Field, K: Field) -> ModuleConfig:
    params = []
    for p in mc.params:
        if isinstance(p, Matrix):
            params.append(extend_matrix(p, K))
        elif mc.kind == "weyl":
            params.append(p)
        else:
            params.append(_extend_param(p, src, K))
    return ModuleConfig(mc.kind, tuple(params), mc.truncation)


def voa_extension_check(config: VOAConfig, K: Field, depth: int = 4) -> dict:
    """dim V_w unchanged and generator-mode structure constants of V^K equal
    the embedded ones of V, on every basis state of weight <= depth."""
    V = VOA(config.with_truncation(max(depth, 1)))
    W = VOA(extend_voa(config, K).with_truncation(max(depth, 1)))
    e = _embedder(config.field, K)
    dims_equal = V.dims(depth) == W.dims(depth)
    checked = fails = 0
    for w in range(depth + 1):
        for key in V.vacuum.basis(w):
            for g in range(len(V.gen_weights)):
                for k in range(-2, w + 2):
                    a = V._apply(V.vacuum, g, k, key)
                    b = W._apply(W.vacuum, g, k, key)
                    checked += 1
                    fails += {kk: e(c) for kk, c in a.items()} != b
    return {"dims_equal": dims_equal, "checked": checked, "failures": fails,
            "pass": dims_equal and fails == 0}


def zhu_extension_check(config: VOAConfig, K: Field, n: int = 0, degree: int = 4,
                        budget=DEFAULT_BUDGET) -> dict:
    """Structure constants of A_n(V^K) equal the embedded ones of A_n(V)."""
    Z = zhu_algebra(config, n, degree, budget=budget)
    ZK = zhu_algebra(extend_voa(config, K), n, degree, budget=budget)
    e = _embedder(config.field, K)
    same_basis = Z.basis == ZK.basis
    embedded = {ij: {k: e(c) for k, c in prod.items()} for ij, prod in Z.table.items()}
    equal = same_basis and embedded == ZK.table
    return {
        "n": n,
        "stabilized_through": [Z.stabilized_through, ZK.stabilized_through],
        "basis_equal": same_basis,
        "entries": len(Z.table),
        "constants_equal": equal,
        "pass": equal and Z.stabilized_through == ZK.stabilized_through,
    }


# --- the truncated module proxy ------------------------------------------------


def module_proxy(voa: VOA, sp: Space, seed: int = DEFAULT_SEED) -> dict:
    """Irreducibility evidence for M_{<=T}:

    * ``generated``: M(0) spins out all of M_{<=T} under generator modes;
    * ``singular_free``: no nonzero vector of M(t), 1 <= t <= T, is killed by
      every lowering mode (such a vector would start a proper submodule);
    * ``commutant``: grade-preserving maps commuting with every generator
      mode inside M_{<=T}.  Generation forces X = id (x) X_0 on PBW words,
      so it is solved for X_0 only; ``division`` tells whether it is a
      division algebra.
    """
    F = voa.field
    T = sp.truncation
    ngen = len(voa.gen_weights)
    d = sp.top_dim
    # generation
    ech = SparseEchelon(F)
    index: dict = {}
    for t in range(T + 1):
        for key in sp.basis(t):
            index[key] = len(index)
    frontier = []
    for key in sp.basis(0):
        ech.add({index[key]: F.one()})
        frontier.append({key: F.one()})
    while frontier:
        new = []
        for vec in frontier:
            wt = max(Space.weight(k) for k in vec)
            lo = min(Space.weight(k) for k in vec)
            for g in range(ngen):
                for k in range(-(T - lo), wt + 1):
                    out: dict = {}
                    for key, c in vec.items():
                        _axpy(F, out, c, voa._apply(sp, g, k, key))
                    out = {kk: c for kk, c in out.items() if Space.weight(kk) <= T}
                    if out and ech.add({index[kk]: c for kk, c in out.items()}):
                        new.append(out)
        frontier = new
    generated = len(ech) == len(index)
    # singular vectors
    singular = {}
    for t in range(1, T + 1):
        src = sp.basis(t)
        pos = {key: i for i, key in enumerate(src)}
        rows = []
        for g in range(ngen):
            for k in range(1, t + 1):
                tgt = {key: i for i, key in enumerate(sp.basis(t - k))}
                block = [[F.zero()] * len(src) for _ in tgt]
                for key in src:
                    for kk, c in voa._apply(sp, g, k, key).items():
                        block[tgt[kk]][pos[key]] = F.add(block[tgt[kk]][pos[key]], c)
                rows.extend(block)
        ns = nullspace(Matrix(F, rows, len(src))) if rows else [[F.one()]] * len(src)
        singular[t] = len(ns)
    singular_free = all(v == 0 for v in singular.values())
    # commutant: X (word, j) = sum_a x[a][j] (word, a); unknown x[a][j] at a*d + j
    eqs: dict = {}
    for t in range(T + 1):
        for key in sp.basis(t):
            word, j = key
            for g in range(ngen):
                for k in range(-(T - t), t + 1):
                    # g_k X (key) - X g_k (key), coefficient-wise
                    row_by_out: dict = {}
                    for a in range(d):
                        for kk, c in voa._apply(sp, g, k, (word, a)).items():
                            if Space.weight(kk) > T:
                                continue
                            r = row_by_out.setdefault(kk, {})
                            u = a * d + j
                            r[u] = F.add(r.get(u, F.zero()), c)
                    for kk, c in voa._apply(sp, g, k, key).items():
                        if Space.weight(kk) > T:
                            continue
                        w2, i = kk
                        for a in range(d):
                            r = row_by_out.setdefault((w2, a), {})
                            u = a * d + i
                            r[u] = F.sub(r.get(u, F.zero()), c)
                    for r in row_by_out.values():
                        vec = tuple(r.get(u, F.zero()) for u in range(d * d))
                        if any(not F.is_zero(x) for x in vec):
                            eqs[vec] = None
    sols = nullspace(Matrix(F, [list(v) for v in eqs], d * d)) if eqs else [
        [F.one() if u == s else F.zero() for u in range(d * d)] for s in range(d * d)]
    if sols:
        sols = rref(Matrix(F, sols, d * d))[0].rows
    comm = [Matrix.unflatten(F, v, d) for v in sols]
    endo_div = None
    if comm:
        exact = division_exact_finite(comm) if F.order is not None else None
        endo_div = exact if exact is not None else division_probe(comm, seed)[0]
    irreducible = generated and singular_free and bool(endo_div)
    return {
        "label": "truncated proxy",
        "truncation": T,
        "graded_dims": sp.dims(T),
        "generated_from_top": generated,
        "singular_vectors_by_grade": {str(t): n for t, n in singular.items()},
        "singular_free": singular_free,
        "commutant_dim": len(comm),
        "commutant_division": bool(endo_div),
        "irreducible": irreducible,
    }


def lemma36_check(config: VOAConfig, module: ModuleConfig, K: Field, max_degree: int | None = None,
                  seed: int = DEFAULT_SEED) -> dict:
    """Both sides of 'M^K irreducible iff M(0)^K simple':

    (a) simplicity of M(0)^K over the extended truncated Zhu algebra (the
        o(u)-action of the stabilized quotient basis, scalars embedded);
    (b) the truncated proxy for M^K over V^K.
    """
    voa = VOA(config)
    sp = voa.module(module)
    deg = max_degree if max_degree is not None else (4 if config.family != "affine_sl2" else 2)
    Z = zhu_algebra(voa, 0, deg, tables=False)
    if Z.stabilized_through < 0:
        raise UnsupportedError("Zhu algebra did not stabilize in budget")
    mats = zero_mode_matrices(Z, sp, 0)
    M0 = MatrixModule(voa.field, mats, label="M(0)")
    M0K = extend_module(M0, K)
    a_base = is_simple_module(None, M0)
    a_ext = is_simple_module(None, M0K)
    B = M0K.image_algebra()
    blocks = block_count(B, seed) if a_ext.get("radical_dim", 1) == 0 else None
    VK = VOA(extend_voa(config, K).with_truncation(config.truncation))
    spK = VK.module(extend_module_config(module, config.field, K))
    b = module_proxy(VK, spK, seed)
    endoK = endomorphisms(None, M0K, seed)
    return {
        "config": config.describe(),
        "module": module.describe(),
        "extension": str(K),
        "zhu_degree": Z.stabilized_through,
        "top_dim": sp.top_dim,
        "top_simple_over_F": a_base["simple"],
        "top_simple_over_K": a_ext["simple"],
        "top_method": a_ext["method"],
        "top_commutant_dim_over_K": endoK.commutant_dim,
        "top_image_blocks_over_K": blocks,
        "module_proxy_over_K": b,
        "agree": a_ext["simple"] == b["irreducible"],
    }
