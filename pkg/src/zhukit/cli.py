"""Command line front end.

    zhukit describe --config v.cfg [--module fock:1]
    zhukit zhu      --config v.cfg [--n 0] [--max-degree 4]
    zhukit c2       --config v.cfg [--max-degree 4]
    zhukit endo     --config v.cfg --module fock:0 2;1 0
    zhukit extend   --config v.cfg --ext "t^2-2" [--module fock:1]
    zhukit selftest

A config file holds ``key=value`` lines: family (virasoro, heisenberg,
affine_sl2), field (Q, F7, F5[t]/(t^2-2), ...), c, rank, k, truncate.
Reports are JSON with every exact scalar written as a string.

Exit codes: 0 ok, 1 a verification check failed, 2 usage error,
3 unsupported request.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assoc import (
    DEFAULT_SEED,
    MatrixModule,
    UnsupportedError,
    block_count,
    endomorphisms,
    is_absolutely_simple,
    is_simple_module,
)
from .extension import extend_voa, lemma36_check, make_extension, voa_extension_check, zhu_extension_check
from .fields import FieldError, parse_field
from .linalg import Matrix
from .modes import VOA, ModuleConfig, TruncationError, VOAConfig, check_axioms
from .zhu import (
    DEFAULT_BUDGET,
    c2_algebra,
    build_O,
    commutator_congruence_check,
    containment_check,
    generation_check,
    o_kills_O_check,
    omega_central_check,
    phi_check,
    zero_mode_matrices,
    zhu_algebra,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

_FAMILY_ALIASES = {
    "virasoro": "virasoro",
    "vir": "virasoro",
    "heisenberg": "heisenberg",
    "heis": "heisenberg",
    "affine_sl2": "affine_sl2",
    "affine": "affine_sl2",
    "sl2": "affine_sl2",
}
_CONFIG_KEYS = {"family", "field", "c", "rank", "k", "level", "truncate"}


class UsageError(Exception):
    pass


# --- parsing ---------------------------------------------------------------------


def parse_config_text(text: str, truncate: int | None = None) -> VOAConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value
    if "family" not in values:
        raise UsageError("config needs family=")
    family = _FAMILY_ALIASES.get(values["family"].lower())
    if family is None:
        raise UsageError(f"unknown family {values['family']!r}")
    try:
        F = parse_field(values.get("field", "Q"))
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    try:
        N = int(values.get("truncate", 12)) if truncate is None else truncate
        rank = int(values.get("rank", 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    level = values.get("k", values.get("level"))
    try:
        return VOAConfig(family=family, field=F, truncation=N, rank=rank,
                         c=F(values["c"]) if "c" in values else None,
                         level=F(level) if level is not None else None)
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def parse_module(text: str, config: VOAConfig, truncation: int | None = None) -> ModuleConfig:
    """``vacuum``, ``fock:l1,l2`` (h_0 eigenvalues), ``fock:a b;c d`` (h_0
    matrix, several separated by ``|``), ``verma:h``, ``weyl:d``.  An optional
    ``@T`` suffix sets the module truncation (default 4)."""
    F = config.field
    T = 4 if truncation is None else truncation
    if "@" in text:
        text, t = text.rsplit("@", 1)
        try:
            T = int(t)
        except ValueError as exc:
            raise UsageError(f"bad module truncation {t!r}") from exc
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    arg = arg.strip()
    try:
        if kind == "vacuum":
            return ModuleConfig("vacuum", (), T)
        if kind == "fock":
            if ";" in arg or " " in arg:
                mats = []
                for block in arg.split("|"):
                    rows = [r.split() for r in block.split(";")]
                    mats.append(Matrix.from_values(F, rows))
                return ModuleConfig("fock", tuple(mats), T)
            return ModuleConfig("fock", tuple(F(x) for x in arg.split(",")), T)
        if kind == "verma":
            return ModuleConfig("verma", (F(arg),), T)
        if kind == "weyl":
            return ModuleConfig("weyl", (int(arg),), T)
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad module spec {text!r}: {exc}") from exc
    raise UsageError(f"unknown module kind {kind!r}")


def _budget(N: int) -> tuple[int, ...]:
    return tuple(sorted({b for b in DEFAULT_BUDGET if b < N} | {N}))


def _default_degree(config: VOAConfig) -> int:
    return 2 if config.family == "affine_sl2" else 4


# --- commands ----------------------------------------------------------------------


def _module_space(voa: VOA, spec: str | None):
    if not spec:
        return None
    mc = parse_module(spec, voa.config)
    try:
        return voa.module(mc)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def cmd_describe(config: VOAConfig, args) -> tuple[dict, bool]:
    voa = VOA(config)
    depth = min(config.truncation, 6) if args.max_degree is None else args.max_degree
    spaces = []
    sp = _module_space(voa, args.module)
    if sp is not None and sp is not voa.vacuum:
        spaces.append(sp)
    axioms = check_axioms(voa, depth, spaces)
    report = {
        "command": "describe",
        "config": config.describe(),
        "central_charge": config.field.fmt(voa.central_charge),
        "graded_dims": voa.dims(config.truncation),
        "axioms": axioms,
    }
    if sp is not None:
        report["module"] = {"spec": args.module, "graded_dims": sp.dims(sp.truncation)}
    return report, axioms["pass"]


def _zhu_checks_ok(checks: dict) -> bool:
    return all(v.get("pass", True) for v in checks.values() if isinstance(v, dict))


def cmd_zhu(config: VOAConfig, args) -> tuple[dict, bool]:
    n = args.n
    deg = args.max_degree if args.max_degree is not None else _default_degree(config) + 2 * n
    Z = zhu_algebra(config, n, deg, budget=_budget(config.truncation))
    report = {"command": "zhu", **Z.report()}
    ok = _zhu_checks_ok(Z.checks)
    if Z.stabilized_through >= 0:
        extra: dict = {"omega_central": omega_central_check(Z)}
        if n == 0:
            extra["commutator_congruence"] = commutator_congruence_check(Z)
            ok = ok and extra["commutator_congruence"]["pass"]
        else:
            low = build_O(Z.voa, 0, Z.builder.N)
            extra["contained_in_O0"] = containment_check(Z.builder, low)
            ok = ok and extra["contained_in_O0"]["pass"]
        if config.family == "virasoro":
            extra["generated_by_omega"] = generation_check(Z, [Z.voa.omega.terms])
        report["extra_checks"] = extra
    return report, ok


def cmd_c2(config: VOAConfig, args) -> tuple[dict, bool]:
    deg = args.max_degree if args.max_degree is not None else _default_degree(config)
    Z = zhu_algebra(config, 0, deg, budget=_budget(config.truncation))
    R = c2_algebra(Z.voa, deg)
    report = {"command": "c2", **R.report()}
    ok = _zhu_checks_ok(R.checks)
    if Z.stabilized_through >= 0:
        ph = phi_check(Z, R)
        report["phi"] = ph
        report["gr_dims"] = Z.gr_dims
        report["stabilized_through"] = Z.stabilized_through
        ok = ok and ph["pass"]
    return report, ok


def _top_module(Z, sp) -> MatrixModule:
    return MatrixModule(Z.field, zero_mode_matrices(Z, sp, 0), label="M(0)")


def cmd_endo(config: VOAConfig, args) -> tuple[dict, bool]:
    if not args.module:
        raise UsageError("endo needs --module")
    deg = args.max_degree if args.max_degree is not None else _default_degree(config)
    Z = zhu_algebra(config, 0, deg, budget=_budget(config.truncation), tables=False)
    sp = _module_space(Z.voa, args.module)
    M = _top_module(Z, sp)
    endo = endomorphisms(None, M, args.seed)
    simple = is_simple_module(None, M, args.seed)
    absolute = is_absolutely_simple(None, M, args.seed)
    endo.absolutely_simple = absolute["absolutely_simple"]
    B = M.image_algebra()
    report = {
        "command": "endo",
        "config": config.describe(),
        "module": {"spec": args.module, **(sp.config.describe() if sp.config else {"kind": "vacuum"})},
        "zhu_degree": Z.stabilized_through,
        "top_dim": M.dim,
        "image_algebra_dim": B.dim,
        "o_kills_O": o_kills_O_check(Z, sp),
        "endomorphisms": endo.as_dict(),
        "simple": simple,
        "absolutely_simple": absolute["absolutely_simple"],
        "seed": hex(args.seed),
    }
    if simple["simple"] and "radical_dim" in simple:
        report["image_blocks"] = block_count(B, args.seed)
    ok = report["o_kills_O"]["pass"] and report["endomorphisms"]["algebraic"]
    return report, ok


def cmd_extend(config: VOAConfig, args) -> tuple[dict, bool]:
    if not args.ext:
        raise UsageError("extend needs --ext POLY")
    try:
        K = make_extension(config.field, args.ext)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    depth = min(config.truncation, 4)
    vcheck = voa_extension_check(config, K, depth)
    axioms = check_axioms(VOA(extend_voa(config, K).with_truncation(depth)), depth)
    report = {
        "command": "extend",
        "config": config.describe(),
        "extension": str(K),
        "separable": True,
        "mode_constants": vcheck,
        "axioms_over_K": {"depth": depth, "pass": axioms["pass"], "checks": axioms["checks"]},
    }
    ok = vcheck["pass"] and axioms["pass"]
    deg = args.max_degree if args.max_degree is not None else _default_degree(config)
    func = zhu_extension_check(config, K, args.n, deg, budget=_budget(config.truncation))
    report["zhu_functoriality"] = func
    ok = ok and func["pass"]
    if args.module:
        mc = parse_module(args.module, config)
        report["lemma36"] = lemma36_check(config, mc, K, seed=args.seed)
        ok = ok and report["lemma36"]["agree"]
    return report, ok


def cmd_selftest(config: VOAConfig | None, args) -> tuple[dict, bool]:
    from .selftest import run_selftest

    report = run_selftest(args.seed)
    return report, report["pass"]


COMMANDS = {
    "describe": cmd_describe,
    "zhu": cmd_zhu,
    "c2": cmd_c2,
    "endo": cmd_endo,
    "extend": cmd_extend,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zhukit", description="Exact computations with truncated vertex operator algebras and their Zhu algebras.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", metavar="PATH", help="key=value configuration file")
    p.add_argument("--n", type=int, default=0, help="Zhu level n (default 0)")
    p.add_argument("--truncate", type=int, help="weight cutoff; overrides truncate= in the config")
    p.add_argument("--max-degree", type=int, dest="max_degree", help="filtration degree to stabilize / check depth")
    p.add_argument("--module", metavar="SPEC", help="fock:1 | fock:0 2;1 0 | verma:1/16 | weyl:2 (optional @T)")
    p.add_argument("--ext", metavar="POLY", help="minimal polynomial of the extension, e.g. t^2-2")
    p.add_argument("--seed", type=lambda s: int(s, 16), default=DEFAULT_SEED, help="probe seed, hex (default 5EED)")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    return p


def dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.n < 0:
            raise UsageError("--n must be >= 0")
        config = None
        if args.command != "selftest":
            if not args.config:
                raise UsageError(f"{args.command} needs --config")
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read config: {exc}") from exc
            config = parse_config_text(text, args.truncate)
        report, ok = COMMANDS[args.command](config, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (FieldError, TruncationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dump(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
