"""Command-line front end.

Every command reads a JSON group descriptor (``--config``), prints one JSON
report envelope (or DOT text for ``export-dot``) on stdout and exits with

* 0 when the check passes,
* 1 when it finds violations,
* 2 on malformed input,
* 3 when a computation would exceed the word-length cap.

Descriptors are either ``{"type": "coxeter", "generators": [...], "matrix":
[[...]]}`` (or ``{"type": "coxeter", "named": "dinf"}``) or ``{"type":
"graph_product", "vertices": [{"name": "a", "order": 2}, ...], "edges":
[["a", "b"], ...]}``. A descriptor may carry a ``"parameters"`` object with
defaults for the command-line flags, and for ``axioms`` a list of
``"corruptions"`` ``{"C": ..., "D": ..., "distance": ...}``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .buildings import (
    BuildingHandle,
    building_symbol,
    check_axioms,
    finer_symbol,
    theorem_c_subgroup,
)
from .coxeter import CoxeterSystem, default_max_word_len, named_system, validate_system
from .errors import ConfigError, ConstraintViolated, CotlarError, NestedConditionViolated, WordTooLong
from .geometry import classify, halfspace_side, nested_offenders, root_relation_check
from .graph_product import GraphProduct, graph_product_descriptor
from .multipliers import mw_symbol, verify_cotlar
from .ncalgebra import cotlar_residual, random_element, ratio_report

SCHEMA_VERSION = 1
log = logging.getLogger("cotlar")

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    descriptor: dict
    group: Any
    kind: str  # "coxeter" or "graph_product"
    parameters: dict = field(default_factory=dict)

    @property
    def type_system(self) -> CoxeterSystem:
        return self.group if self.kind == "coxeter" else self.group.type_system()

    def handle(self) -> BuildingHandle:
        if self.kind == "coxeter":
            return BuildingHandle.thin(self.group)
        return BuildingHandle.graph_product(self.group)


def load_descriptor(data: dict, max_word_len: int | None = None):
    """``(kind, group)`` from a parsed JSON descriptor."""
    if not isinstance(data, dict):
        raise ConfigError("descriptor must be a JSON object")
    kind = data.get("type")
    if kind == "coxeter":
        if "named" in data:
            return "coxeter", named_system(str(data["named"]), max_word_len)
        if "matrix" not in data:
            raise ConfigError("coxeter descriptor needs 'matrix' or 'named'")
        return "coxeter", validate_system(data["matrix"], data.get("generators"), max_word_len)
    if kind == "graph_product":
        desc = graph_product_descriptor(data.get("vertices", []), data.get("edges", []))
        bound = data.get("integer_exponent_bound", 1)
        if not isinstance(bound, int) or bound < 1:
            raise ConfigError("integer_exponent_bound must be a positive integer")
        return "graph_product", GraphProduct(desc, bound, max_word_len)
    raise ConfigError(f"descriptor type must be 'coxeter' or 'graph_product', got {kind!r}")


def read_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}")
    kind, group = load_descriptor(data)
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be an object")
    return RunConfig(data, group, kind, params)


# -- parameter resolution -----------------------------------------------

def _param(args, cfg: RunConfig, name: str, default=None):
    value = getattr(args, name, None)
    if value is None:
        value = cfg.parameters.get(name, default)
    return value


def _radius(args, cfg, default):
    r = _param(args, cfg, "radius", default)
    if not isinstance(r, int) or r < 0:
        raise ConfigError(f"radius must be a nonnegative integer, got {r!r}")
    cap = default_max_word_len()
    if r > cap:
        raise WordTooLong(f"radius {r} exceeds max_word_len={cap}")
    return r


def _generator(args, cfg, required=True):
    name = _param(args, cfg, "generator")
    if name is None:
        if required:
            raise ConfigError("--generator is required for this command")
        return None
    return cfg.type_system.index(name)


def _g0(args, cfg: RunConfig, s: int):
    """Membership test and label for the subgroup chosen by ``--g0``."""
    mode = _param(args, cfg, "g0", "parabolic")
    t = cfg.type_system
    if mode == "trivial":
        identity = cfg.group.identity
        return (lambda g: g == identity), "{e}"
    if mode == "parabolic":
        if cfg.kind == "coxeter":
            T = t.commuting(s)
            names = ",".join(t.generators[x] for x in sorted(T))
            return (lambda g: t.in_parabolic(T, g)), f"W_{{{names}}}"
        return theorem_c_subgroup(cfg.handle(), s)
    if isinstance(mode, str) and mode.startswith("list:"):
        names = [x for x in mode[5:].split(",") if x]
        T = frozenset(t.index(x) for x in names)
        label = f"W_{{{','.join(t.generators[x] for x in sorted(T))}}}"
        if cfg.kind == "coxeter":
            return (lambda g: t.in_parabolic(T, g)), label
        handle = cfg.handle()
        base = handle.base_chamber
        return (lambda g: t.in_parabolic(T, handle.weyl_distance(base, g))), label
    raise ConfigError(f"--g0 must be 'parabolic', 'trivial' or 'list:NAME,...', got {mode!r}")


def _values(args, cfg):
    raw = _param(args, cfg, "values")
    if raw is None:
        return None
    items = raw.split(",") if isinstance(raw, str) else list(raw)
    out = []
    for x in items:
        try:
            out.append(int(x))
        except (TypeError, ValueError):
            try:
                out.append(complex(str(x).replace(" ", "").replace("i", "j")))
            except ValueError:
                raise ConfigError(f"cannot parse value {x!r}")
    return out


def _symbol(args, cfg, s):
    """Symbol for ``s``: the half-space symbol on Coxeter groups, the
    building symbol (or the finer model with ``--values``) on graph products."""
    values = _values(args, cfg)
    if cfg.kind == "coxeter":
        if values is not None:
            raise ConfigError("--values only applies to graph products")
        return mw_symbol(cfg.group, s), None
    if values is not None:
        radius = _radius(args, cfg, 4)
        sym, model = finer_symbol(cfg.group, s, values, radius, strict=False)
        return sym, model
    return building_symbol(cfg.handle(), s), None


# -- commands ------------------------------------------------------------

def cmd_nested(args, cfg: RunConfig):
    t = cfg.type_system
    s = _generator(args, cfg, required=False)
    gens = range(t.n) if s is None else [s]
    rows = []
    for x in gens:
        bad = nested_offenders(t, x)
        rows.append({
            "generator": t.generators[x],
            "nested": not bad,
            "offenders": [[t.generators[u], m] for u, m in bad],
        })
    ok = all(r["nested"] for r in rows)
    return (EXIT_OK if ok else EXIT_VIOLATION), {"results": rows}


def cmd_verify_cotlar(args, cfg: RunConfig):
    s = _generator(args, cfg)
    radius = _radius(args, cfg, 4)
    member, label = _g0(args, cfg, s)
    symbol, model = _symbol(args, cfg, s)
    report = verify_cotlar(cfg.group, symbol, member, radius, label)
    payload = report.to_json(cfg.group)
    payload["symbol"] = dict(symbol.descriptor)
    ok = report.ok
    if model is not None:
        payload["finer_model"] = model.to_json(cfg.group)
        ok = ok and model.ok
    return (EXIT_OK if ok else EXIT_VIOLATION), payload


def cmd_residual(args, cfg: RunConfig):
    s = _generator(args, cfg)
    radius = _radius(args, cfg, 3)
    member, label = _g0(args, cfg, s)
    symbol, _ = _symbol(args, cfg, s)
    seed = _param(args, cfg, "seed", 0)
    samples = _param(args, cfg, "samples", 100)
    exact = _param(args, cfg, "numeric", "exact") == "exact"
    children = np.random.SeedSequence(seed).spawn(samples)
    rows = []
    nonzero = 0
    for i, child in enumerate(children):
        f = random_element(cfg.group, radius, np.random.default_rng(child), exact=exact)
        rep = cotlar_residual(symbol, member, f, tolerance=0.0 if exact else 1e-9)
        row = {"sample": i, "support_size": len(f)}
        row.update(rep.to_json())
        rows.append(row)
        nonzero += not rep.is_zero
    payload = {
        "subgroup": label,
        "support_radius": radius,
        "seed": seed,
        "samples": samples,
        "nonzero_count": nonzero,
        "residuals": rows,
    }
    return (EXIT_OK if nonzero == 0 else EXIT_VIOLATION), payload


def cmd_lp_ratio(args, cfg: RunConfig):
    s = _generator(args, cfg)
    radius = _radius(args, cfg, 3)
    symbol, _ = _symbol(args, cfg, s)
    k = _param(args, cfg, "k", 2)
    if not isinstance(k, int) or k < 1:
        raise ConfigError("--k must be a positive integer")
    rep = ratio_report(cfg.group, symbol, k, radius, _param(args, cfg, "samples", 100), _param(args, cfg, "seed", 0))
    return EXIT_OK, rep.to_json()


def cmd_axioms(args, cfg: RunConfig):
    radius = _radius(args, cfg, 4)
    triple = _param(args, cfg, "triple_radius", min(radius, 3))
    handle = cfg.handle()
    t = handle.type_system
    for item in cfg.descriptor.get("corruptions", []):
        try:
            c = cfg.group.from_json(item["C"])
            d = cfg.group.from_json(item["D"])
            w = t.reduce(t.word(item["distance"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad corruption entry {item!r}: {exc}")
        handle = handle.with_corrupted_distance(c, d, w)
    report = check_axioms(handle, radius, triple)
    return (EXIT_OK if report.ok else EXIT_VIOLATION), report.to_json(handle)


def cmd_classify(args, cfg: RunConfig):
    t = cfg.type_system
    s = _generator(args, cfg)
    radius = _radius(args, cfg, 4)
    rows = []
    if not nested_offenders(t, s):
        for g in t.ball(radius):
            c = classify(t, s, g)
            rows.append({"g": t.to_json(g), "class": c.name, "relation": c.relation})
        return EXIT_OK, {"generator": t.generators[s], "method": "descents", "table": rows}
    check = _param(args, cfg, "check_radius", 4)
    unresolved = 0
    for g in t.ball(radius):
        w = root_relation_check(t, s, g, check)
        rows.append({"g": t.to_json(g), "class": None if w.relation is None else w.relation.name,
                     "evidence": w.to_json(t)})
        unresolved += w.relation is None
    payload = {"generator": t.generators[s], "method": "scan", "nested": False,
               "unresolved_count": unresolved, "table": rows}
    return (EXIT_OK if unresolved == 0 else EXIT_VIOLATION), payload


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


PALETTE = ["#4e79a7", "#e15759", "#59a14f", "#f28e2b", "#b07aa1", "#76b7b2", "#edc948", "#9c755f"]


def cmd_export_dot(args, cfg: RunConfig):
    radius = _radius(args, cfg, 3)
    color = _param(args, cfg, "color", "symbol")
    group = cfg.group
    ball = group.ball(radius)
    index = {g: i for i, g in enumerate(ball)}
    s = _generator(args, cfg, required=color != "none")
    t = cfg.type_system
    if color == "symbol":
        symbol, _ = _symbol(args, cfg, s)
        label = lambda g: str(symbol(g))
    elif color == "side":
        if cfg.kind == "coxeter":
            label = lambda g: halfspace_side(t, s, g).value
        else:
            sym = building_symbol(cfg.handle(), s)
            label = lambda g: "+" if sym(g) == 1 else "-"
    elif color == "class":
        if cfg.kind != "coxeter":
            raise ConfigError("--color class needs a Coxeter descriptor")
        label = lambda g: classify(t, s, g).name
    elif color == "none":
        label = lambda g: ""
    else:
        raise ConfigError(f"--color must be symbol, side, class or none, got {color!r}")
    classes = sorted({label(g) for g in ball})
    colors = {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(classes)}
    lines = ["graph chambers {", "  node [style=filled];"]
    for i, g in enumerate(ball):
        c = label(g)
        attrs = f"label={_dot_quote(group.format(g))}"
        if color != "none":
            attrs += f", class={_dot_quote(c)}, fillcolor={_dot_quote(colors[c])}"
        lines.append(f"  n{i} [{attrs}];")
    edges = set()
    for g in ball:
        if cfg.kind == "coxeter":
            steps = [((x,), t.generators[x]) for x in range(t.n)]
        else:
            steps = [(((v, e),), group.names[v]) for v in range(group.n) for e in group.syllable_values(v)]
        for x, name in steps:
            h = group.multiply(g, x)
            if h in index:
                a, b = sorted((index[g], index[h]))
                edges.add((a, b, name))
    for a, b, name in sorted(edges):
        lines.append(f"  n{a} -- n{b} [label={_dot_quote(name)}];")
    lines.append("}")
    return EXIT_OK, "\n".join(lines) + "\n"


COMMANDS = {
    "nested": cmd_nested,
    "verify-cotlar": cmd_verify_cotlar,
    "residual": cmd_residual,
    "lp-ratio": cmd_lp_ratio,
    "axioms": cmd_axioms,
    "classify": cmd_classify,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cotlar", description="Brute-force checks of Cotlar identities for Hilbert transforms on groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON group descriptor")
        p.add_argument("--generator", help="generator or vertex name")
        p.add_argument("--radius", type=int)
        p.add_argument("--g0", help="parabolic | trivial | list:NAME,...")
        p.add_argument("--seed", type=int)
        p.add_argument("--numeric", choices=["exact", "float"])
        p.add_argument("--values", help="comma-separated component values for the finer model")
        p.add_argument("--samples", type=int)
        p.add_argument("--k", type=int, help="even exponent p = 2k")
        p.add_argument("--triple-radius", dest="triple_radius", type=int)
        p.add_argument("--check-radius", dest="check_radius", type=int)
        p.add_argument("--color", choices=["symbol", "side", "class", "none"])
        p.add_argument("--timing", action="store_true", help="include wall-clock seconds (breaks byte-identical output)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _config_echo(args, cfg: RunConfig) -> dict:
    flags = {}
    for key in ("generator", "radius", "g0", "seed", "numeric", "values", "samples", "k",
                "triple_radius", "check_radius", "color"):
        value = getattr(args, key, None)
        if value is not None:
            flags[key] = value
    return {"descriptor": cfg.descriptor, "flags": flags, "max_word_len": default_max_word_len()}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        cfg = read_config(args.config)
        code, payload = COMMANDS[args.command](args, cfg)
    except (ConfigError, NestedConditionViolated, ConstraintViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WordTooLong as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CotlarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if isinstance(payload, str):
        sys.stdout.write(payload)
        return code
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args, cfg),
        "exit_code": code,
        "result": payload,
    }
    if args.timing:
        envelope["wall_clock_seconds"] = round(time.perf_counter() - start, 6)
    json.dump(envelope, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    return code
