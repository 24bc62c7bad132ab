"""Fixed battery of small fixtures behind ``zhukit selftest``.

Every entry is deterministic (exact arithmetic, fixed probe seed), so two
runs produce byte-identical reports.
"""
from __future__ import annotations

from .assoc import MatrixModule, SCAlgebra, block_count, endomorphisms, is_absolutely_simple, is_simple_module, regular_module
from .extension import extend_module, lemma36_check, make_extension, voa_extension_check
from .fields import QQ, parse_field
from .linalg import Matrix
from .modes import VOA, ModuleConfig, VOAConfig, check_axioms
from .zhu import c2_algebra, commutator_congruence_check, phi_check, zhu_algebra


def _entry(name: str, ok: bool, **detail) -> dict:
    return {"name": name, "pass": bool(ok), **detail}


def run_selftest(seed: int) -> dict:
    F5 = parse_field("F5")
    F7 = parse_field("F7")
    F25 = make_extension(F5, "t^2-2")
    out = []

    for cfg, depth in [
        (VOAConfig(family="virasoro", field=QQ, c=QQ("1/2"), truncation=5), 5),
        (VOAConfig(family="heisenberg", field=F7, rank=2, truncation=4), 4),
        (VOAConfig(family="affine_sl2", field=F25, level=F25(1), truncation=3), 3),
    ]:
        r = check_axioms(VOA(cfg), depth)
        out.append(_entry(f"axioms {cfg.family}/{cfg.field}", r["pass"], depth=depth,
                          checked=sum(c["checked"] for c in r["checks"])))

    vir = zhu_algebra(VOAConfig(family="virasoro", field=QQ, c=QQ("1/2")), 0, 6)
    out.append(_entry("zhu virasoro gr dims", vir.gr_dims == [1, 0, 1, 0, 1, 0, 1] and vir.checks["commutative"]["value"],
                      gr_dims=vir.gr_dims))
    heis = zhu_algebra(VOAConfig(family="heisenberg", field=F5, rank=2), 0, 3)
    cc = commutator_congruence_check(heis)
    out.append(_entry("zhu heisenberg rank 2 gr dims", heis.gr_dims == [1, 2, 3, 4], gr_dims=heis.gr_dims))
    out.append(_entry("zhu associativity and identity", heis.checks["associativity"]["pass"] and heis.checks["identity"]["pass"]))
    out.append(_entry("commutator congruence", cc["pass"], checked=cc["checked"]))
    R = c2_algebra(heis.voa, 3)
    ph = phi_check(heis, R)
    out.append(_entry("phi epimorphism", ph["pass"], r_dims=R.dims))

    A = SCAlgebra.polynomial_quotient(F5, [-2, 0, 1])
    M = regular_module(A)
    e = endomorphisms(A, M, seed)
    s = is_simple_module(A, M, seed)
    a = is_absolutely_simple(A, M, seed)
    MK = extend_module(M, F25)
    sK = is_simple_module(None, MK, seed)
    blocks = block_count(MK.image_algebra(), seed)
    out.append(_entry("F5[x]/(x^2-2) module", s["simple"] and e.commutant_dim == 2 and not a["absolutely_simple"]
                      and not sK["simple"] and blocks == 2, commutant_dim=e.commutant_dim, blocks_over_F25=blocks))

    comp = Matrix.from_values(F5, [[0, 2], [1, 0]])
    cfg = VOAConfig(family="heisenberg", field=F5, truncation=8)
    lem = lemma36_check(cfg, ModuleConfig("fock", (comp,), 4), F25, seed=seed)
    out.append(_entry("top simplicity vs module proxy over F25", lem["agree"] and not lem["top_simple_over_K"]))
    ve = voa_extension_check(VOAConfig(family="virasoro", field=F5, c=F5(3)), F25, 4)
    out.append(_entry("mode constants under extension", ve["pass"], checked=ve["checked"]))

    return {"command": "selftest", "seed": hex(seed), "entries": out, "pass": all(x["pass"] for x in out)}
