"""Declarative code specs, the report pipeline, twist search, and the CLI.

Spec files are TOML with four sections: [group], [base], [fiber], [twists],
plus optional [options]. Matrix literals are nested arrays of element-grammar
strings. Reports are JSON with sorted keys and are byte-identical across runs
for identical inputs and options; timing goes to stderr only.

Exit codes: 0 success, 1 validation error (bad spec or arguments),
2 construction failure (non-flat twists, orthogonality violation).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import __version__
from .binlin import expand_bientry_matrix, matrix_to_text
from .css import (
    DistanceResult,
    IsoReport,
    assemble_css,
    check_weights,
    min_distance,
    verify_chain_iso,
)
from .errors import (
    ConstructionError,
    ElementParseError,
    GroupValidationError,
    SpecError,
    ValidationError,
)
from .group_algebra import AlgElem, parse_element
from .group_core import Group, build_cyclic, build_dihedral, build_from_table
from .rchain import (
    RMatrix,
    TwistData,
    TwistPair,
    build_lifted_product,
    build_twisted_complex,
    check_flatness,
    connection_from_group,
    is_invertible_twist,
    rmat_identity,
    rmat_scalar,
    rmat_to_strings,
)

__all__ = [
    "CodeSpec",
    "SpecOptions",
    "parse_code_spec",
    "load_code_spec",
    "resolve_twists",
    "run_report",
    "report_to_json",
    "search_twists",
    "export_matrices",
    "fixture_path",
    "main",
]

_TWIST_MODES = ("identity", "columns", "per_entry", "connection")
_EXPORT_TARGETS = ("hx", "hz", "d1", "d2")
_SEARCH_POOLS = ("group_scalars", "low_weight", "pool_file")
_DISTANCE_TOP = 3


@dataclass(frozen=True)
class SpecOptions:
    weight_cap: int = 6
    full_enumeration: bool = False
    flatness_override: bool = False
    lp_transpose: Optional[str] = None


@dataclass(frozen=True)
class CodeSpec:
    """A fully validated code specification plus its source text."""

    group: Group
    base: RMatrix
    fiber: RMatrix
    twist_mode: str
    twists: Optional[TwistData]
    connection: Optional[Tuple[Tuple[str, ...], ...]]
    options: SpecOptions
    source_text: str


def _require_table(doc: dict, key: str) -> dict:
    if key not in doc:
        raise SpecError(f"missing [{key}] section")
    if not isinstance(doc[key], dict):
        raise SpecError(f"[{key}] must be a table")
    return doc[key]


def _parse_group(section: dict) -> Group:
    kind = section.get("kind")
    if kind == "cyclic":
        order = section.get("order")
        if not isinstance(order, int) or isinstance(order, bool):
            raise SpecError("group.order must be an integer for kind = 'cyclic'")
        return build_cyclic(order)
    if kind == "dihedral":
        n = section.get("n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise SpecError("group.n must be an integer for kind = 'dihedral'")
        return build_dihedral(n)
    if kind == "table":
        names = section.get("element_names")
        table = section.get("mul_table")
        if not isinstance(names, list) or not isinstance(table, list):
            raise SpecError("group kind 'table' needs element_names and mul_table")
        return build_from_table(names, table)
    raise SpecError(f"unknown group kind {kind!r}: expected cyclic, dihedral, or table")


def _parse_matrix(group: Group, section: str, literal: object) -> RMatrix:
    if (
        not isinstance(literal, list)
        or not literal
        or not all(isinstance(row, list) and row for row in literal)
    ):
        raise SpecError(f"{section} must be a nonempty nested array of element strings")
    width = len(literal[0])
    entries = []
    for i, row in enumerate(literal):
        if len(row) != width:
            raise SpecError(f"{section} row {i} has {len(row)} entries, expected {width}")
        parsed_row = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise SpecError(f"{section}[{i}][{j}] must be a string, got {cell!r}")
            try:
                parsed_row.append(parse_element(group, cell))
            except ElementParseError as exc:
                raise SpecError(f"{section}[{i}][{j}]: {exc}") from exc
        entries.append(tuple(parsed_row))
    return RMatrix(group, len(literal), width, tuple(entries))


def _parse_twist_pair(group: Group, where: str, item: object, p: int, q: int) -> TwistPair:
    if not isinstance(item, dict) or set(item) - {"phi1", "phi0", "i", "j"}:
        raise SpecError(f"{where} must be a table with phi1 and phi0 matrices")
    if "phi1" not in item or "phi0" not in item:
        raise SpecError(f"{where} needs both phi1 and phi0")
    phi1 = _parse_matrix(group, f"{where}.phi1", item["phi1"])
    phi0 = _parse_matrix(group, f"{where}.phi0", item["phi0"])
    if phi1.rows != p or phi1.cols != p:
        raise SpecError(f"{where}.phi1 must be {p}x{p} (fiber columns), got {phi1.rows}x{phi1.cols}")
    if phi0.rows != q or phi0.cols != q:
        raise SpecError(f"{where}.phi0 must be {q}x{q} (fiber rows), got {phi0.rows}x{phi0.cols}")
    return TwistPair(phi1, phi0)


def _parse_twists(
    group: Group, base: RMatrix, fiber: RMatrix, section: dict
) -> Tuple[str, Optional[TwistData], Optional[Tuple[Tuple[str, ...], ...]]]:
    present = [mode for mode in _TWIST_MODES if mode in section]
    if len(present) != 1:
        raise SpecError(
            f"[twists] must use exactly one of {', '.join(_TWIST_MODES)}; found {present or 'none'}"
        )
    mode = present[0]
    extra = set(section) - {mode}
    if extra:
        raise SpecError(f"[twists] has stray keys {sorted(extra)} alongside {mode!r}")
    m, n = base.cols, base.rows
    p, q = fiber.cols, fiber.rows

    if mode == "identity":
        if section["identity"] is not True:
            raise SpecError("twists.identity must be true when present")
        return mode, TwistData.identity(group, m, p, q), None

    if mode == "columns":
        items = section["columns"]
        if not isinstance(items, list) or len(items) != m:
            raise SpecError(f"twists.columns must list {m} entries (one per base column)")
        pairs = [
            _parse_twist_pair(group, f"twists.columns[{j}]", item, p, q)
            for j, item in enumerate(items)
        ]
        return mode, TwistData.from_columns(pairs), None

    if mode == "per_entry":
        items = section["per_entry"]
        if not isinstance(items, list) or not items:
            raise SpecError("twists.per_entry must be a nonempty list of {i, j, phi1, phi0} tables")
        ident = TwistPair(rmat_identity(group, p), rmat_identity(group, q))
        table: List[List[TwistPair]] = [[ident] * n for _ in range(m)]
        seen = set()
        for idx, item in enumerate(items):
            where = f"twists.per_entry[{idx}]"
            if not isinstance(item, dict) or "i" not in item or "j" not in item:
                raise SpecError(f"{where} needs integer coordinates i and j")
            i, j = item["i"], item["j"]
            if not isinstance(i, int) or not isinstance(j, int) or not (0 <= i < n and 0 <= j < m):
                raise SpecError(f"{where} coordinates (i={i!r}, j={j!r}) outside {n}x{m} base")
            if (i, j) in seen:
                raise SpecError(f"{where} repeats coordinates (i={i}, j={j})")
            seen.add((i, j))
            table[j][i] = _parse_twist_pair(group, where, item, p, q)
        return mode, TwistData.from_per_entry(table), None

    grid = section["connection"]
    if (
        not isinstance(grid, list)
        or len(grid) != n
        or not all(isinstance(row, list) and len(row) == m for row in grid)
    ):
        raise SpecError(f"twists.connection must be an {n}x{m} grid of group-element strings")
    for i, row in enumerate(grid):
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise SpecError(f"twists.connection[{i}][{j}] must be a string, got {cell!r}")
    return mode, None, tuple(tuple(row) for row in grid)


def _parse_options(section: dict) -> SpecOptions:
    known = {"weight_cap", "full_enumeration", "flatness_override", "lp_transpose"}
    extra = set(section) - known
    if extra:
        raise SpecError(f"[options] has unknown keys {sorted(extra)}")
    opts = SpecOptions()
    if "weight_cap" in section:
        cap = section["weight_cap"]
        if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
            raise SpecError(f"options.weight_cap must be a positive integer, got {cap!r}")
        opts = replace(opts, weight_cap=cap)
    for key in ("full_enumeration", "flatness_override"):
        if key in section:
            if not isinstance(section[key], bool):
                raise SpecError(f"options.{key} must be a boolean")
            opts = replace(opts, **{key: section[key]})
    if "lp_transpose" in section:
        mode = section["lp_transpose"]
        if mode not in ("plain", "antipode"):
            raise SpecError(f"options.lp_transpose must be plain or antipode, got {mode!r}")
        opts = replace(opts, lp_transpose=mode)
    return opts


def parse_code_spec(text: str) -> CodeSpec:
    """Parse and fully validate a TOML code spec."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"spec syntax: {exc}") from exc
    known = {"group", "base", "fiber", "twists", "options"}
    extra = set(doc) - known
    if extra:
        raise SpecError(f"unknown top-level sections {sorted(extra)}")
    try:
        group = _parse_group(_require_table(doc, "group"))
    except GroupValidationError as exc:
        raise SpecError(f"[group]: {exc}") from exc
    base_sec = _require_table(doc, "base")
    fiber_sec = _require_table(doc, "fiber")
    if "matrix" not in base_sec or "matrix" not in fiber_sec:
        raise SpecError("[base] and [fiber] each need a matrix key")
    base = _parse_matrix(group, "base.matrix", base_sec["matrix"])
    fiber = _parse_matrix(group, "fiber.matrix", fiber_sec["matrix"])
    mode, twists, connection = _parse_twists(group, base, fiber, _require_table(doc, "twists"))
    options = _parse_options(doc.get("options", {}))
    return CodeSpec(group, base, fiber, mode, twists, connection, options, text)


def load_code_spec(path: Union[str, Path]) -> CodeSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read spec file {path}: {exc}") from exc
    return parse_code_spec(text)


def resolve_twists(spec: CodeSpec) -> TwistData:
    """Materialize TwistData; connection mode builds (and checks) scalar twists."""
    if spec.twists is not None:
        return spec.twists
    return connection_from_group(spec.base, spec.fiber, spec.connection)


def _merged_options(
    spec: CodeSpec,
    weight_cap: Optional[int],
    full_enum: Optional[bool],
    allow_nonflat: Optional[bool],
    lp_transpose: Optional[str],
) -> SpecOptions:
    opts = spec.options
    if weight_cap is not None:
        if weight_cap < 1:
            raise ValidationError(f"weight cap must be >= 1, got {weight_cap}")
        opts = replace(opts, weight_cap=weight_cap)
    if full_enum is not None:
        opts = replace(opts, full_enumeration=full_enum)
    if allow_nonflat is not None:
        opts = replace(opts, flatness_override=allow_nonflat)
    if lp_transpose is not None:
        if lp_transpose not in ("plain", "antipode"):
            raise ValidationError(f"lp transpose must be plain or antipode, got {lp_transpose!r}")
        opts = replace(opts, lp_transpose=lp_transpose)
    return opts


def _input_digest(text: str, opts: SpecOptions) -> str:
    blob = json.dumps(
        {
            "flatness_override": opts.flatness_override,
            "full_enumeration": opts.full_enumeration,
            "lp_transpose": opts.lp_transpose,
            "weight_cap": opts.weight_cap,
        },
        sort_keys=True,
    )
    return hashlib.sha256(text.encode() + b"\x00" + blob.encode()).hexdigest()


def _dims(spec: CodeSpec) -> Dict[str, int]:
    return {
        "l": spec.group.order,
        "m": spec.base.cols,
        "n": spec.base.rows,
        "p": spec.fiber.cols,
        "q": spec.fiber.rows,
    }


def _distance_json(dist: DistanceResult) -> dict:
    def side(d: Optional[int], exact: bool, completed: int) -> object:
        if d is not None:
            return d
        if exact:
            return None
        return f"> {completed}"

    return {
        "cap": dist.weight_cap,
        "d_x": side(dist.d_x, dist.exact_x, dist.completed_x),
        "d_z": side(dist.d_z, dist.exact_z, dist.completed_z),
        "exact_x": dist.exact_x,
        "exact_z": dist.exact_z,
    }


def _iso_json(iso: IsoReport) -> dict:
    return {
        "applicable": iso.applicable,
        "invertible_per_twist": {label: ok for label, ok in iso.invertible},
        "monomial_per_twist": {label: ok for label, ok in iso.monomial},
        "squares_commute": iso.squares_commute,
    }


def _invertibility(twists: TwistData) -> Dict[str, bool]:
    out = {}
    for label, pair in twists.labeled_pairs():
        out[f"phi1[{label}]"] = is_invertible_twist(pair.phi1)
        out[f"phi0[{label}]"] = is_invertible_twist(pair.phi0)
    return out


def run_report(
    spec: CodeSpec,
    weight_cap: Optional[int] = None,
    full_enum: Optional[bool] = None,
    allow_nonflat: Optional[bool] = None,
    lp_transpose: Optional[str] = None,
) -> dict:
    """Run the full pipeline and return the deterministic report dictionary."""
    opts = _merged_options(spec, weight_cap, full_enum, allow_nonflat, lp_transpose)
    twists = resolve_twists(spec)
    flat = check_flatness(spec.fiber, twists)
    lp_block = None
    if opts.lp_transpose is not None:
        if not twists.is_identity():
            raise ValidationError(
                "lp_transpose applies only to identity twists (the untwisted product)"
            )
        build_lifted_product(spec.base, spec.fiber, opts.lp_transpose)
        lp_block = {"mode": opts.lp_transpose, "orthogonal": True}
    total = build_twisted_complex(
        spec.base, spec.fiber, twists, allow_nonflat=opts.flatness_override
    )
    code = assemble_css(total)
    dist = min_distance(code, opts.weight_cap, full_enum=opts.full_enumeration)
    iso = verify_chain_iso(spec.base, spec.fiber, twists)
    wx, wz = check_weights(code)
    return {
        "css": {
            "check_weights": {"max_row_weight_hx": wx, "max_row_weight_hz": wz},
            "css_ok": True,
            "distance": _distance_json(dist),
            "iso": _iso_json(iso),
            "k": code.k,
            "n": code.n,
            "rank_hx": code.rank_hx,
            "rank_hz": code.rank_hz,
        },
        "digest": _input_digest(spec.source_text, opts),
        "dims": _dims(spec),
        "flatness": {"flat": flat.flat, "per_twist": flat.as_dict()},
        "invertibility": _invertibility(twists),
        "lp_literal": lp_block,
        "tool_version": __version__,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def export_matrices(spec: CodeSpec, target: str, allow_nonflat: Optional[bool] = None) -> str:
    """Dense text export of hx, hz, or the raw d1/d2 expansions."""
    if target not in _EXPORT_TARGETS:
        raise ValidationError(f"export target must be one of {_EXPORT_TARGETS}, got {target!r}")
    opts = _merged_options(spec, None, None, allow_nonflat, None)
    twists = resolve_twists(spec)
    total = build_twisted_complex(
        spec.base, spec.fiber, twists, allow_nonflat=opts.flatness_override
    )
    if target in ("hx", "hz"):
        code = assemble_css(total)
        return matrix_to_text(code.hx if target == "hx" else code.hz)
    grid = total.d1 if target == "d1" else total.d2
    return matrix_to_text(expand_bientry_matrix(grid, spec.group))


def _twist_pair_strings(pair: TwistPair) -> dict:
    return {"phi0": rmat_to_strings(pair.phi0), "phi1": rmat_to_strings(pair.phi1)}


def _candidate_encoding(pairs: Sequence[TwistPair]) -> str:
    return json.dumps([_twist_pair_strings(p) for p in pairs], sort_keys=True)


def _scalar_pool(group: Group, p: int, q: int) -> List[TwistPair]:
    pool = []
    for g in range(group.order):
        elem = AlgElem(group, 1 << g)
        pool.append(TwistPair(rmat_scalar(group, elem, p), rmat_scalar(group, elem, q)))
    return pool


def _file_pool(group: Group, p: int, q: int, pool_text: str) -> List[TwistPair]:
    try:
        doc = tomllib.loads(pool_text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"pool file syntax: {exc}") from exc
    items = doc.get("pool")
    if not isinstance(items, list):
        raise SpecError("pool file needs a top-level 'pool' array")
    pairs = []
    for idx, item in enumerate(items):
        where = f"pool[{idx}]"
        if isinstance(item, dict):
            pairs.append(_parse_twist_pair(group, where, item, p, q))
        elif isinstance(item, list):
            if p != q:
                raise SpecError(
                    f"{where}: a single matrix pool entry needs p = q, got p={p}, q={q}"
                )
            mat = _parse_matrix(group, where, item)
            if mat.rows != p or mat.cols != p:
                raise SpecError(f"{where} must be {p}x{p}, got {mat.rows}x{mat.cols}")
            pairs.append(TwistPair(mat, mat))
        else:
            raise SpecError(f"{where} must be a matrix literal or a {{phi1, phi0}} table")
    return pairs


def _random_rmatrix(rng: random.Random, group: Group, size: int, max_support: int) -> RMatrix:
    rows = []
    for _ in range(size):
        row = []
        for _ in range(size):
            k = rng.randint(0, max_support)
            support = 0
            for i in rng.sample(range(group.order), min(k, group.order)):
                support |= 1 << i
            row.append(AlgElem(group, support))
        rows.append(tuple(row))
    return RMatrix(group, size, size, tuple(rows))


def _mixed_radix(index: int, radix: int, width: int) -> List[int]:
    digits = []
    for _ in range(width):
        digits.append(index % radix)
        index //= radix
    return digits


def search_twists(
    spec: CodeSpec,
    pool: str = "group_scalars",
    pool_text: Optional[str] = None,
    max_support: int = 2,
    max_candidates: int = 256,
    seed: Optional[int] = None,
    weight_cap: Optional[int] = None,
    top: int = _DISTANCE_TOP,
) -> dict:
    """Generate per-column twist candidates, filter by flatness, rank by k.

    Candidates are ordered by (k descending, canonical encoding); distance is
    evaluated only for the leading `top` survivors. Unseeded runs derive the
    seed from the input digest, so results are reproducible either way.
    """
    if pool not in _SEARCH_POOLS:
        raise ValidationError(f"pool must be one of {_SEARCH_POOLS}, got {pool!r}")
    if max_candidates < 1:
        raise ValidationError(f"max_candidates must be >= 1, got {max_candidates}")
    if max_support < 0:
        raise ValidationError(f"max_support must be >= 0, got {max_support}")
    cap = weight_cap if weight_cap is not None else spec.options.weight_cap
    group, base, fiber = spec.group, spec.base, spec.fiber
    m, p, q = base.cols, fiber.cols, fiber.rows
    if seed is None:
        material = spec.source_text + f"\x00{pool}\x00{max_support}\x00{max_candidates}"
        seed = int.from_bytes(hashlib.sha256(material.encode()).digest()[:8], "big")
    rng = random.Random(seed)

    candidates: List[Tuple[TwistPair, ...]] = []
    partial = False
    if pool in ("group_scalars", "pool_file"):
        base_pool = (
            _scalar_pool(group, p, q)
            if pool == "group_scalars"
            else _file_pool(group, p, q, pool_text or "")
        )
        if not base_pool:
            raise ValidationError("empty twist pool")
        space = len(base_pool) ** m
        if space <= max_candidates:
            indices = range(space)
        else:
            partial = True
            indices = sorted(rng.sample(range(space), max_candidates))
        for index in indices:
            digits = _mixed_radix(index, len(base_pool), m)
            candidates.append(tuple(base_pool[d] for d in digits))
    else:
        partial = True
        seen = set()
        for _ in range(max_candidates):
            tup = tuple(
                TwistPair(
                    _random_rmatrix(rng, group, p, max_support),
                    _random_rmatrix(rng, group, q, max_support),
                )
                for _ in range(m)
            )
            enc = _candidate_encoding(tup)
            if enc not in seen:
                seen.add(enc)
                candidates.append(tup)

    survivors = []
    for tup in candidates:
        twists = TwistData.from_columns(tup)
        if not check_flatness(fiber, twists).flat:
            continue
        code = assemble_css(build_twisted_complex(base, fiber, twists))
        survivors.append(
            {
                "encoding": _candidate_encoding(tup),
                "k": code.k,
                "rank_d1": code.rank_hx,
                "rank_d2": code.rank_hz,
                "twists": [_twist_pair_strings(pair) for pair in tup],
                "_code": code,
            }
        )
    survivors.sort(key=lambda c: (-c["k"], c["encoding"]))
    for pos, cand in enumerate(survivors):
        code = cand.pop("_code")
        cand["distance"] = _distance_json(min_distance(code, cap)) if pos < top else None
    return {
        "candidates": survivors,
        "examined": len(candidates),
        "partial": partial,
        "pool": pool,
        "seed": seed,
        "survivors": len(survivors),
    }


def fixture_path(name: str) -> Path:
    """Path of a bundled spec fixture, e.g. fixture_path('case1')."""
    path = Path(__file__).resolve().parent / "fixtures" / f"{name}.toml"
    if not path.exists():
        raise ValidationError(f"no bundled fixture named {name!r}")
    return path


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; bad arguments are
    # validation errors here, so remap to exit code 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_params(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    start = time.monotonic()
    report = run_report(
        spec,
        weight_cap=args.cap,
        full_enum=True if args.full_enum else None,
        allow_nonflat=True if args.allow_nonflat else None,
        lp_transpose=args.lp_transpose,
    )
    elapsed = time.monotonic() - start
    _emit(report_to_json(report), args.out)
    print(f"timing: {elapsed * 1000.0:.1f} ms", file=sys.stderr)
    return 0


def _cmd_check_flat(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    twists = resolve_twists(spec)
    flat = check_flatness(spec.fiber, twists)
    _emit(
        json.dumps({"flat": flat.flat, "per_twist": flat.as_dict()}, sort_keys=True, indent=2)
        + "\n",
        args.out,
    )
    return 0 if flat.flat else 2


def _cmd_expand(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    text = export_matrices(
        spec, args.target, allow_nonflat=True if args.allow_nonflat else None
    )
    _emit(text, args.out)
    return 0


def _cmd_distance(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    opts = _merged_options(
        spec,
        args.cap,
        True if args.full_enum else None,
        True if args.allow_nonflat else None,
        None,
    )
    twists = resolve_twists(spec)
    total = build_twisted_complex(
        spec.base, spec.fiber, twists, allow_nonflat=opts.flatness_override
    )
    code = assemble_css(total)
    dist = min_distance(code, opts.weight_cap, budget=args.budget, full_enum=opts.full_enumeration)
    payload = _distance_json(dist)
    payload["witness_x"] = list(dist.witness_x) if dist.witness_x is not None else None
    payload["witness_z"] = list(dist.witness_z) if dist.witness_z is not None else None
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    pool_text = None
    if args.pool == "pool_file":
        if not args.pool_file:
            raise ValidationError("--pool pool_file requires --pool-file")
        try:
            pool_text = Path(args.pool_file).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read pool file {args.pool_file}: {exc}") from exc
    result = search_twists(
        spec,
        pool=args.pool,
        pool_text=pool_text,
        max_support=args.max_support,
        max_candidates=args.max_candidates,
        seed=args.seed,
        weight_cap=args.cap,
        top=args.top,
    )
    _emit(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_verify_iso(args: argparse.Namespace) -> int:
    spec = load_code_spec(args.specfile)
    twists = resolve_twists(spec)
    iso = verify_chain_iso(spec.base, spec.fiber, twists)
    payload = _iso_json(iso)
    payload["rank_d1"] = {"twisted": iso.rank_d1_twisted, "untwisted": iso.rank_d1_untwisted}
    payload["rank_d2"] = {"twisted": iso.rank_d2_twisted, "untwisted": iso.rank_d2_untwisted}
    payload["k"] = {"twisted": iso.k_twisted, "untwisted": iso.k_untwisted}
    payload["reason"] = iso.reason
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="twistbundle",
        description="Twisted fiber-bundle CSS codes over group algebras F2[G]",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser, cap: bool = False, nonflat: bool = False) -> None:
        sp.add_argument("specfile", help="path to a TOML code spec")
        sp.add_argument("--out", help="write output to this path instead of stdout")
        if cap:
            sp.add_argument("--cap", type=int, help="distance search weight cap")
            sp.add_argument(
                "--full-enum", action="store_true",
                help="certify distance by full kernel enumeration (n <= 28)",
            )
        if nonflat:
            sp.add_argument(
                "--allow-nonflat", action="store_true",
                help="build despite failing flatness (orthogonality stays fatal)",
            )

    sp = sub.add_parser("params", help="full report: dimensions, ranks, k, distance, iso")
    common(sp, cap=True, nonflat=True)
    sp.add_argument("--lp-transpose", choices=("plain", "antipode"),
                    help="also verify the literal product Z checks (identity twists only)")
    sp.set_defaults(func=_cmd_params)

    sp = sub.add_parser("check-flat", help="report per-generator chain compatibility")
    common(sp)
    sp.set_defaults(func=_cmd_check_flat)

    sp = sub.add_parser("expand", help="export a binary matrix as dense text")
    common(sp, nonflat=True)
    sp.add_argument("--target", choices=_EXPORT_TARGETS, required=True)
    sp.set_defaults(func=_cmd_expand)

    sp = sub.add_parser("distance", help="distance search only")
    common(sp, cap=True, nonflat=True)
    sp.add_argument("--budget", type=int, help="max candidates examined per side")
    sp.set_defaults(func=_cmd_distance)

    sp = sub.add_parser("search-twists", help="rank flat twist candidates by k")
    common(sp, cap=True)
    sp.add_argument("--pool", choices=_SEARCH_POOLS, default="group_scalars")
    sp.add_argument("--pool-file", help="TOML pool file (used with --pool pool_file)")
    sp.add_argument("--max-support", type=int, default=2)
    sp.add_argument("--max-candidates", type=int, default=256)
    sp.add_argument("--seed", type=int, help="search seed (default: derived from input digest)")
    sp.add_argument("--top", type=int, default=_DISTANCE_TOP,
                    help="how many leading candidates get a distance evaluation")
    sp.set_defaults(func=_cmd_search)

    sp = sub.add_parser("verify-iso", help="invertibility, commuting squares, rank comparison")
    common(sp)
    sp.set_defaults(func=_cmd_verify_iso)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
