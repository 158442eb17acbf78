"""
quasiarr 的命令行入口。

子命令：
    group      构造反射群并列出超平面与轨道
    quasi      拟不变量的逐次维数表
    free       自由基的构造与 Saito 证书
    primitive  原始导子的降阶与双射性检查
    reproduce  重新推导内置算例并逐行给出 PASS/FAIL
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import config
from .catalan import affine_free_check, bc_catalan_pipeline, catalan_pipeline, coned_free_check, load_arrangement_file
from .config import FORMATS, MODULES, JobConfig
from .errors import QuasiArrError, UnsupportedGroupError
from .group_loader import resolve_group
from .groups import BCMult, Family, MultFn, c_v
from .invariants import basic_invariants
from .logder import GroupContext, free_basis_dm, free_basis_dtilde
from .primitive import PrimitiveDerivation, dihedral_index_set, graded_bijectivity, lowering_check
from .quasi import is_quasi_invariant, isotypic_graded, quasi_graded, vector_quasi_space
from .report import Report, certificate_entries, dims_entries, group_report
from .reproduce import EXAMPLES, run_example
from .trig import bc_trig_quasi_space, leading_term_space, trig_quasi_space

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

logger = logging.getLogger(__name__)


def _job(args) -> JobConfig:
    cfg = JobConfig(
        group=getattr(args, "group", ""),
        rank=getattr(args, "rank", None),
        k=getattr(args, "k", None),
        m=getattr(args, "m", "1"),
        cutoff=getattr(args, "cutoff", None),
        module=getattr(args, "module", "Dm"),
        fmt=args.format,
        seed=args.seed,
        threads=args.threads,
    )
    config.settings.threads = cfg.threads
    return cfg


def _emit(rep: Report, cfg: JobConfig) -> None:
    sys.stdout.write(rep.render(cfg.fmt))


# -- subcommands ---------------------------------------------------------------


def cmd_group(args) -> int:
    cfg = _job(args)
    group = resolve_group(cfg.group, cfg.rank, cfg.k)
    _emit(group_report(group), cfg)
    return 0


def _closure_spot_check(group, m, graded, rng, samples: int = 5) -> bool:
    """Products of random pairs of basis elements stay in Q_m."""
    pool = [p for d in graded.degrees() for p in graded.basis(d)]
    if len(pool) < 2:
        return True
    for _ in range(samples):
        i, j = rng.integers(0, len(pool), size=2)
        if not is_quasi_invariant(group, pool[i] * pool[j], m):
            return False
    return True


def cmd_quasi(args) -> int:
    cfg = _job(args)
    group = resolve_group(cfg.group, cfg.rank, cfg.k)
    cutoff = cfg.resolved_cutoff(group.rank)
    rep = Report(f"quasi-invariants of {group.label}, kind {args.kind}, m = {cfg.m}")
    if args.kind == "bc":
        m = BCMult.parse(cfg.m)
        filtered = bc_trig_quasi_space(group.rank, m, cutoff, group.field)
        dims_entries(rep, "filtered", filtered.dims())
        dims_entries(rep, "gr", leading_term_space(filtered).dims())
        _emit(rep, cfg)
        return 0
    m = MultFn.parse(cfg.m, group)
    rep.add("c_V", c_v(group, m))
    if args.kind == "trig":
        filtered = trig_quasi_space(group, m, cutoff)
        dims_entries(rep, "filtered", filtered.dims())
        dims_entries(rep, "gr", leading_term_space(filtered).dims())
    elif args.kind == "vector":
        dims_entries(rep, "Q_m(V)", {d: len(vector_quasi_space(group, m, d)) for d in range(cutoff + 1)})
    else:
        graded = isotypic_graded(group, m, cutoff) if args.kind == "isotypic" else quasi_graded(group, m, cutoff)
        dims_entries(rep, "dims", graded.dims())
        rep.section("first_nonzero").add("degree", graded.first_nonzero())
        if args.bases:
            rep.section("bases")
            for d in graded.degrees():
                for k, p in enumerate(graded.basis(d), 1):
                    rep.add(f"deg{d}.{k}", p)
        if args.kind == "plain":
            rng = np.random.default_rng(cfg.seed)
            rep.section("checks").add("ring_closure_spot_check", _closure_spot_check(group, m, graded, rng))
    _emit(rep, cfg)
    return 0


def _resolve_arrangement_file(target: str) -> Path:
    if target.startswith("fixture-"):
        return FIXTURES / f"{target[len('fixture-'):]}.arr"
    return Path(target)


def cmd_free(args) -> int:
    cfg = _job(args)
    if cfg.module == "cone":
        arr, fields = load_arrangement_file(_resolve_arrangement_file(cfg.group))
        rep = Report(f"freeness of {arr.name} and its cone")
        affine = affine_free_check(arr, fields)
        coned = coned_free_check(arr, fields)
        certificate_entries(rep, affine, "affine")
        certificate_entries(rep, coned, "coned")
        _emit(rep, cfg)
        return 0 if coned.passed else 1

    group = resolve_group(cfg.group, cfg.rank, cfg.k)
    cutoff = cfg.resolved_cutoff(group.rank)
    rep = Report(f"{cfg.module} for {group.label}, m = {cfg.m}")
    if cfg.module == "Dtilde":
        cert = free_basis_dtilde(group, MultFn.parse(cfg.m, group), cutoff)
        certificate_entries(rep, cert)
        _emit(rep, cfg)
        return 0 if cert.passed else 1

    ctx = GroupContext.of(group)
    rep.add("basic_invariant_degrees", ctx.basic.degrees)
    if cfg.module == "Dm":
        m = MultFn.parse(cfg.m, group)
        cert = free_basis_dm(ctx, m, cutoff)
        certificate_entries(rep, cert)
        rep.add("exponent_shifts", cert.exponent_shift(c_v(group, m)))
        _emit(rep, cfg)
        return 0 if cert.passed else 1

    if cfg.module in ("BCCat", "cBCCat"):
        if group.family is not Family.B:
            raise UnsupportedGroupError(f"BC Catalan arrangements are built over B_N, not {group.label}")
        result = bc_catalan_pipeline(ctx, BCMult.parse(cfg.m), cutoff)
    else:
        result = catalan_pipeline(ctx, MultFn.parse(cfg.m, group), cutoff)
    certificate_entries(rep, result.affine, "affine")
    certificate_entries(rep, result.coned, "coned")
    if result.leading is not None:
        certificate_entries(rep, result.leading, "leading_terms")
    cert = result.coned if cfg.module.startswith("c") else result.affine
    _emit(rep, cfg)
    return 0 if cert.passed else 1


def cmd_primitive(args) -> int:
    cfg = _job(args)
    group = resolve_group(cfg.group, cfg.rank, cfg.k)
    cutoff = cfg.resolved_cutoff(group.rank)
    m = MultFn.parse(cfg.m, group)
    basic = basic_invariants(group)
    D = PrimitiveDerivation.of(basic)
    rep = Report(f"primitive derivation of {group.label}, m = {m}")
    rep.add("basic_invariant_degrees", basic.degrees)
    for k, y in enumerate(basic.polys, 1):
        rep.add(f"y{k}", y)
    rep.add("jacobian_scalar", basic.jacobian_scalar())
    lowered = lowering_check(D, m, cutoff)
    rep.section("lowering").extend((f"deg{d}", ok) for d, ok in lowered.items())
    table = graded_bijectivity(D, m, cutoff)
    rep.section("bijectivity")
    for row in table:
        rep.add(f"deg{row.degree}", f"{row.source_dim} -> {row.target_dim} rank {row.rank} ok {row.ok}")
    ok = all(lowered.values()) and all(row.ok for row in table) and basic.jacobian_scalar() is not None
    if group.family is Family.I2C and len(m.values) == 2 and m.values[0] >= m.values[1]:
        admissible = dihedral_index_set(group.params[0] // 2, m.values, group)
        rep.section("dihedral").add("index_set", admissible.indices).add("convention", admissible.convention)
        for name, passed in admissible.checks.items():
            rep.add(f"check.{name}", passed)
    rep.section("").add("verdict", "PASS" if ok else "FAIL")
    _emit(rep, cfg)
    return 0 if ok else 1


def cmd_reproduce(args) -> int:
    cfg = _job(args)
    names = list(EXAMPLES) if args.example == "all" else [args.example]
    failed = 0
    for name in names:
        rep = Report(f"reproduce {name}: {EXAMPLES[name][0]}")
        for row in run_example(name):
            rep.add(row.name, f"{row.verdict} {row.detail}".strip())
            failed += not row.passed
        _emit(rep, cfg)
    return 1 if failed else 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="Output format (default: text)")
    common.add_argument("--threads", type=int, default=1, help="Worker threads for per-hyperplane systems (default: 1)")
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized spot checks (default: 0)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument("group", help="Family tag (B2, I2, G3_1_2, ...) or group description file")
    group_opts.add_argument("--rank", type=int, help="Rank for bare classical tags such as 'B'")
    group_opts.add_argument("--k", type=int, help="Order parameter for I2 / I2C")
    group_opts.add_argument("--m", default="1", help="Orbit-wise multiplicities, e.g. '1' or '2,1' (BC: m1,m2,m3)")
    group_opts.add_argument("--cutoff", type=int, help="Degree cutoff (default: 12 / 8 / 6 by rank)")

    parser = argparse.ArgumentParser(
        prog="quasiarr",
        description="Quasi-invariants, logarithmic derivations and freeness certificates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # 群的阶、超平面与轨道
    python -m quasiarr group G3_1_2
    python -m quasiarr group I2 --k 6

    # 拟不变量维数表
    python -m quasiarr quasi G3_1_2 --m 1 --kind isotypic --cutoff 10
    python -m quasiarr quasi B2 --kind bc --m 1,1,1 --cutoff 9

    # 自由性证书
    python -m quasiarr free G3_1_2 --m 1 --module Dm
    python -m quasiarr free B2 --m 2,1 --module cCat
    python -m quasiarr free fixture-deconing --module cone

    # 内置算例
    python -m quasiarr reproduce all
""",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="Build a group and list its hyperplanes")
    p.add_argument("group", help="Family tag or group description file")
    p.add_argument("--rank", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("quasi", parents=[common, group_opts], help="Dimension tables of quasi-invariants")
    p.add_argument(
        "--kind",
        choices=("plain", "isotypic", "vector", "trig", "bc"),
        default="plain",
        help="Which space to tabulate (default: plain)",
    )
    p.add_argument("--bases", action="store_true", help="Also print the canonical bases")
    p.set_defaults(func=cmd_quasi)

    p = sub.add_parser("free", parents=[common, group_opts], help="Free basis and Saito certificate")
    p.add_argument("--module", choices=MODULES, default="Dm", help="Which module to certify (default: Dm)")
    p.set_defaults(func=cmd_free)

    p = sub.add_parser("primitive", parents=[common, group_opts], help="Primitive derivation checks")
    p.set_defaults(func=cmd_primitive)

    p = sub.add_parser("reproduce", parents=[common], help="Re-derive a built-in example")
    p.add_argument("example", choices=list(EXAMPLES) + ["all"])
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        return args.func(args)
    except (QuasiArrError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("\ninterrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
