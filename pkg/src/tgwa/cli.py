"""Command-line front end.

A session is described by a TOML file::

    [algebra]
    preset = "qwa2"          # qwa2, qwa_n or ccr
    N = 12                   # cyclotomic order; e below is e^(2 pi i / N)
    [algebra.bindings]
    q1 = "e^4"
    q2 = "e^3"
    l12 = "e^2"

    [point]
    preset = "n2(a)"         # or: vector = ["a1", "a2"]

    [module]
    rho = "rho"
    mu = "mu"
    basis = [[2, -2], [3, 2]]   # optional basis of G_m
    # case = "N2_RANK2"         # optional; classified when absent
    # fixture = "proper_break"  # or "sign_flip": a built-in module

    [window]
    B = 3

Exit status: 0 pass, 2 verification failure, 3 configuration error,
4 mathematical precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .bm import bm_presentation, torus_decompose
from .errors import ConfigError, MathError
from .module import WeightModule, module_from_json
from .orbit import (WeightPoint, break_exponents, g_m, g_tilde, gamma_sequence, isotropy,
                    parse_point)
from .qwa import build_module, classify_case, example_proper_break_module, example_sign_flip_module
from .scalars import ParameterEnv, Scalar, format_scalar, parse_scalar
from .verify import default_window, verify_module

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MATH = 0, 2, 3, 4
PRESETS = ("qwa2", "qwa_n", "ccr")
FIXTURES = {"proper_break": example_proper_break_module, "sign_flip": example_sign_flip_module}


@dataclass
class SessionConfig:
    preset: str = "qwa2"
    n: int = 2
    N: int = 1
    bindings: Dict[str, str] = field(default_factory=dict)
    point: object = None
    rho: str = "rho"
    mu: str = "mu"
    case: Optional[str] = None
    basis: Optional[List[List[int]]] = None
    fixture: Optional[str] = None
    window: Optional[int] = None
    source: str = "<config>"

    def env(self) -> ParameterEnv:
        try:
            return ParameterEnv(self.N, self.bindings)
        except ValueError as exc:
            raise ConfigError("%s: [algebra.bindings]: %s" % (self.source, exc))

    def weight_point(self, env: ParameterEnv) -> WeightPoint:
        if self.point is None:
            raise ConfigError("%s: [point] is missing" % self.source)
        try:
            pt = parse_point(self.point, env, self.n)
        except ValueError as exc:
            raise ConfigError("%s: [point]: %s" % (self.source, exc))
        if pt.n != self.n:
            raise ConfigError("%s: [point] has %d coordinates, algebra rank is %d"
                              % (self.source, pt.n, self.n))
        return pt

    def scalar(self, key: str, env: ParameterEnv) -> Scalar:
        try:
            return parse_scalar(getattr(self, key), env.N)
        except ValueError as exc:
            raise ConfigError("%s: [module].%s: %s" % (self.source, key, exc))


def _get(table, key, kind, where, default=None):
    if key not in table:
        return default
    value = table[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        names = " or ".join(k.__name__ for k in (kind if isinstance(kind, tuple) else (kind,)))
        raise ConfigError("%s: %s must be %s" % (where, key, names))
    return value


def config_from_dict(data, source: str = "<config>") -> SessionConfig:
    known = {"algebra", "point", "module", "window", "cyclotomic_order"}
    extra = set(data) - known
    if extra:
        raise ConfigError("%s: unknown section(s) %s" % (source, ", ".join(sorted(extra))))
    alg = data.get("algebra", {})
    cfg = SessionConfig(source=source)
    cfg.preset = _get(alg, "preset", str, source + ": [algebra]", "qwa2")
    if cfg.preset not in PRESETS:
        raise ConfigError("%s: [algebra].preset must be one of %s" % (source, ", ".join(PRESETS)))
    cfg.n = _get(alg, "n", int, source + ": [algebra]", 2)
    if cfg.preset == "qwa2" and cfg.n != 2:
        raise ConfigError("%s: preset qwa2 has n = 2" % source)
    if cfg.n < 1:
        raise ConfigError("%s: [algebra].n must be positive" % source)
    cfg.N = _get(alg, "N", int, source + ": [algebra]",
                 _get(data, "cyclotomic_order", int, source, 1))
    if cfg.N < 1:
        raise ConfigError("%s: cyclotomic order must be positive" % source)
    binds = alg.get("bindings", {})
    if not isinstance(binds, dict):
        raise ConfigError("%s: [algebra.bindings] must be a table" % source)
    cfg.bindings = {str(k): str(v) for k, v in binds.items()}
    pt = data.get("point", {})
    if "vector" in pt:
        cfg.point = [str(x) for x in pt["vector"]]
    elif "preset" in pt:
        cfg.point = str(pt["preset"])
    mod = data.get("module", {})
    where = source + ": [module]"
    cfg.rho = str(_get(mod, "rho", (str, int), where, "rho"))
    cfg.mu = str(_get(mod, "mu", (str, int), where, "mu"))
    cfg.case = _get(mod, "case", str, where)
    cfg.fixture = _get(mod, "fixture", str, where)
    if cfg.fixture is not None and cfg.fixture not in FIXTURES:
        raise ConfigError("%s: fixture must be one of %s" % (where, ", ".join(sorted(FIXTURES))))
    basis = mod.get("basis")
    if basis is not None:
        if not (isinstance(basis, list) and all(isinstance(r, list) and len(r) == cfg.n
                                                and all(isinstance(x, int) for x in r)
                                                for r in basis)):
            raise ConfigError("%s: basis must be a list of integer rows of length %d"
                              % (where, cfg.n))
        cfg.basis = [list(r) for r in basis]
    win = data.get("window", {})
    cfg.window = _get(win, "B", int, source + ": [window]")
    if cfg.window is not None and cfg.window <= 0:
        raise ConfigError("%s: [window].B must be positive" % source)
    return cfg


def load_config(path: str) -> SessionConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc.strerror))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("%s: %s" % (path, exc))
    return config_from_dict(data, path)


# ---------------------------------------------------------------------------
# analyses


def _require_qwa(cfg: SessionConfig):
    if cfg.preset == "ccr":
        raise ConfigError("%s: orbit and module analysis is implemented for the quantized "
                          "Weyl algebra presets only" % cfg.source)


def _rank_two(cfg: SessionConfig):
    if cfg.n != 2:
        raise ConfigError("%s: module construction needs n = 2" % cfg.source)


def orbit_data(cfg: SessionConfig):
    _require_qwa(cfg)
    env = cfg.env()
    pt = cfg.weight_point(env)
    breaks = {"t%d" % j: break_exponents(pt, j, env).describe() for j in range(1, pt.n + 1)}
    return {
        "point": pt.to_json(env.N),
        "gamma": [env.fmt(g) for g in gamma_sequence(pt, env)],
        "breaks": breaks,
        "isotropy": isotropy(pt, env).to_json(),
    }


def gtilde_data(cfg: SessionConfig):
    _require_qwa(cfg)
    env = cfg.env()
    gt = g_tilde(cfg.weight_point(env), env)
    return {"intervals": gt.to_json(), "text": str(gt)}


def gm_data(cfg: SessionConfig):
    _require_qwa(cfg)
    env = cfg.env()
    lat = g_m(cfg.weight_point(env), env)
    return {"basis": lat.to_json(), "rank": lat.rank}


def bm_data(cfg: SessionConfig):
    _require_qwa(cfg)
    env = cfg.env()
    pt = cfg.weight_point(env)
    try:
        pres = bm_presentation(pt, env, cfg.basis)
    except ValueError as exc:
        raise ConfigError("%s: [module].basis: %s" % (cfg.source, exc))
    out = {"presentation": pres.to_json(env.N)}
    if pres.basis:
        out["torus"] = torus_decompose(pres.lam, env).to_json(env.N)
    return out


def classify_data(cfg: SessionConfig):
    _require_qwa(cfg)
    _rank_two(cfg)
    env = cfg.env()
    return {"case": classify_case(cfg.weight_point(env), env)}


def make_module(cfg: SessionConfig) -> WeightModule:
    if cfg.fixture == "sign_flip":
        return example_sign_flip_module()
    if cfg.fixture == "proper_break":
        return example_proper_break_module()
    _require_qwa(cfg)
    _rank_two(cfg)
    env = cfg.env()
    pt = cfg.weight_point(env)
    case = cfg.case or classify_case(pt, env)
    try:
        return build_module(case, pt, env, cfg.scalar("rho", env), cfg.scalar("mu", env),
                            basis=cfg.basis)
    except (KeyError, ValueError) as exc:
        raise ConfigError("%s: [module]: %s" % (cfg.source, exc))


# ---------------------------------------------------------------------------
# DOT


def _quote(s: str) -> str:
    return '"%s"' % s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def emit_dot(m: WeightModule, window: Optional[int] = None) -> str:
    """Weight diagram: one node per support point, X_1 edges solid, X_2 edges
    drawn as double lines.  Edges between the same points are merged."""
    N = m.env.N
    labels = m.labels(None if m.finite else window)
    nodes: Dict[WeightPoint, str] = {}
    degree_of: Dict[WeightPoint, tuple] = {}
    for lab in labels:
        pt = m.point_of(lab)
        if pt not in nodes:
            nodes[pt] = "n%d" % len(nodes)
            degree_of[pt] = lab[0]
    edges = []
    seen = set()
    for lab in labels:
        src = m.point_of(lab)
        for i in range(1, m.n + 1):
            e = m.x(i, lab)
            if e is None:
                continue
            tgt = m.point_of(e[0])
            if tgt not in nodes:
                continue
            key = (nodes[src], nodes[tgt], i)
            if key not in seen:
                seen.add(key)
                edges.append(key)
    lines = ["digraph weights {", "  node [shape=circle];"]
    for pt, name in nodes.items():
        g = degree_of[pt]
        text = "(%s)\n%s" % (",".join(str(x) for x in g),
                              ", ".join(format_scalar(a, N) for a in pt.alpha))
        lines.append("  %s [label=%s, pos=\"%d,%d!\"];" % (name, _quote(text), g[0], g[-1]))
    for src, tgt, i in edges:
        if i == 1:
            style = 'label="X1"'
        else:
            style = 'color="black:invis:black", label="X%d"' % i
        lines.append("  %s -> %s [%s];" % (src, tgt, style))
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# output


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _to_text(data, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v and not all(
                    not isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                lines.append("%s%s:" % (pad, k))
                lines.append(_to_text(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, json.dumps(v, sort_keys=True)))
    elif isinstance(data, list):
        for v in data:
            lines.append("%s- %s" % (pad, json.dumps(v, sort_keys=True)))
    else:
        lines.append(pad + str(data))
    return "\n".join(lines)


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(data, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(data)
    if fmt == "text":
        return _to_text(data) + "\n"
    raise ConfigError("format %s is only available for the diagram command" % fmt)


ANALYSES = {"orbit": orbit_data, "gtilde": gtilde_data, "gm": gm_data, "bm": bm_data,
            "classify": classify_data}


def _load_module(args, cfg: Optional[SessionConfig]):
    """The module and the window stored with it (if read from JSON)."""
    if args.module:
        try:
            with open(args.module) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError("cannot read %s: %s" % (args.module, exc.strerror))
        except json.JSONDecodeError as exc:
            raise ConfigError("%s: %s" % (args.module, exc))
        try:
            return module_from_json(data), data.get("window")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("%s: malformed module table: %s" % (args.module, exc))
    if cfg is None:
        raise ConfigError("give --config or --module")
    return make_module(cfg), None


def _window(args, cfg: Optional[SessionConfig], m: Optional[WeightModule] = None,
            stored: Optional[int] = None) -> Optional[int]:
    if args.window is not None:
        if args.window <= 0:
            raise ConfigError("--window must be positive")
        return args.window
    if stored is not None:
        return stored
    if cfg is not None and cfg.window is not None:
        return cfg.window
    return default_window(m) if m is not None else None


def run(args) -> int:
    cfg = load_config(args.config) if args.config else None
    cmd = args.command
    if cmd in ANALYSES:
        if cfg is None:
            raise ConfigError("%s needs --config" % cmd)
        data = ANALYSES[cmd](cfg)
        if cmd == "classify" and args.format == "text":
            _write(data["case"] + "\n", args.out)
        else:
            _write(_render(data, args.format), args.out)
        return EXIT_OK
    m, stored = _load_module(args, cfg)
    window = _window(args, cfg, m, stored)
    if cmd == "build":
        if args.format != "json":
            raise ConfigError("build writes JSON")
        _write(_dump_json(m.to_json(None if m.finite else window)), args.out)
        return EXIT_OK
    if cmd == "diagram":
        if not m.finite and window is None:
            raise ConfigError("diagram of an infinite module needs a window")
        _write(emit_dot(m, window), args.out)
        return EXIT_OK
    if cmd == "verify":
        report = verify_module(m, window)
        if args.format == "text":
            _write(report.to_text() + "\n", args.out)
        else:
            _write(_dump_json(report.to_json()), args.out)
        return EXIT_OK if report.ok and not report.proper_breaks else EXIT_FAIL
    raise ConfigError("unknown command %s" % cmd)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgwa", description="Weight modules over twisted generalized Weyl algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML session file")
    common.add_argument("--window", metavar="B", type=int, help="window for infinite supports")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text", "dot"), default=None,
                        help="output format")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "orbit": "gamma sequence, breaks and isotropy group of the point",
        "gtilde": "the set G-tilde as a product of intervals",
        "gm": "basis of the lattice G_m",
        "bm": "commutation scalars of B_m and their torus decomposition",
        "classify": "family of the point in the rank-two classification",
        "build": "module action tables as JSON",
        "verify": "check relations, grading, simplicity and breaks",
        "diagram": "weight diagram in graphviz DOT",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name in ("verify", "diagram"):
            p.add_argument("--module", metavar="PATH", help="module JSON written by build")
        else:
            p.set_defaults(module=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "dot" if args.command == "diagram" else "json"
    if args.command == "diagram" and args.format != "dot":
        print("error: diagram writes DOT", file=sys.stderr)
        return EXIT_CONFIG
    if args.command != "diagram" and args.format == "dot":
        print("error: --format dot is for the diagram command", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except MathError as exc:
        print("math error (%s): %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
