"""Monomial weight modules: basis labels, lazy action, and JSON tables.

A basis label is ``(g, k)``: the degree g in Z^n of the coset representative
a_g (so the vector sits in the weight space of the point g(m) for the base
point m) and an index k into the weight space M_m.  Every action map sends a
basis vector to a multiple of at most one basis vector, so the action is a
function ``label -> (label, coefficient) | None``.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import TgwaPresentation, qwa_presentation, sign_flip_presentation
from .errors import ConfigError, WindowRequired
from .linear import Vector, vec_add
from .orbit import WeightPoint, sigma_action
from .scalars import ParameterEnv, Scalar, as_scalar, format_scalar

Label = Tuple[Tuple[int, ...], int]
Edge = Optional[Tuple[Label, Scalar]]
ActionFn = Callable[[int, Label], Edge]


def label_key(label: Label):
    g, k = label
    return (tuple(g), k)


def label_str(label: Label) -> str:
    g, k = label
    return "(%s;%d)" % (",".join(str(x) for x in g), k)


def in_box(g: Sequence[int], window: int) -> bool:
    return all(abs(x) <= window for x in g)


class WeightModule:
    """A weight module given by closed-form coefficient functions.

    ``reps(window)`` lists the degrees of S (all of them when ``finite``).
    """

    def __init__(self, case: str, env: ParameterEnv, p: TgwaPresentation, base: WeightPoint,
                 dim_m: int, reps: Callable[[Optional[int]], List[Tuple[int, ...]]],
                 finite: bool, x_action: ActionFn, y_action: ActionFn,
                 params: Optional[Dict[str, Scalar]] = None, algebra: str = "qwa",
                 gm_basis: Sequence[Sequence[int]] = (), index_set: str = "",
                 points: Optional[Dict[Label, WeightPoint]] = None,
                 scale: Optional[Callable[[Label], Scalar]] = None):
        self.case = case
        self.env = env
        self.p = p
        self.base = base
        self.dim_m = dim_m
        self._reps = reps
        self.finite = finite
        self._x = x_action
        self._y = y_action
        self.params = dict(params or {})
        self.algebra = algebra
        self.gm_basis = [tuple(s) for s in gm_basis]
        self.index_set = index_set
        self._points: Dict[Label, WeightPoint] = dict(points or {})
        self.point_overrides: Dict[Label, WeightPoint] = {}
        self.scale = scale
        self._cache: Dict[Tuple[str, int, Label], Edge] = {}

    @property
    def n(self) -> int:
        return self.p.n

    # basis ------------------------------------------------------------------
    def labels(self, window: Optional[int] = None) -> List[Label]:
        if not self.finite and window is None:
            raise WindowRequired("%s has infinite support; give a window" % self.case)
        reps = self._reps(None if self.finite else window)
        return [(tuple(g), k) for g in reps for k in range(self.dim_m)]

    @property
    def dim(self) -> Optional[int]:
        return len(self.labels()) if self.finite else None

    def point_of(self, label: Label) -> WeightPoint:
        if label in self.point_overrides:
            return self.point_overrides[label]
        if label not in self._points:
            self._points[label] = sigma_action(label[0], self.base, self.env)
        return self._points[label]

    # action -----------------------------------------------------------------
    def act(self, letter: str, i: int, label: Label) -> Edge:
        key = (letter, i, label)
        if key not in self._cache:
            fn = self._x if letter == "X" else self._y
            out = fn(i, label)
            if out is not None:
                tgt, c = out
                c = as_scalar(c)
                out = None if c.is_zero() else ((tuple(tgt[0]), tgt[1]), c)
            self._cache[key] = out
        return self._cache[key]

    def x(self, i: int, label: Label) -> Edge:
        return self.act("X", i, label)

    def y(self, i: int, label: Label) -> Edge:
        return self.act("Y", i, label)

    def apply(self, letter: str, i: int, vec: Vector) -> Vector:
        out: Vector = {}
        for label, c in vec.items():
            e = self.act(letter, i, label)
            if e is not None:
                out = vec_add(out, {e[0]: e[1]}, c)
        return out

    def apply_word(self, word, vec: Vector) -> Vector:
        """Apply a word (tuple of letters, leftmost acts last)."""
        for letter, i in reversed(word):
            vec = self.apply(letter, i, vec)
            if not vec:
                break
        return vec

    # serialization ------------------------------------------------------------
    def to_json(self, window: Optional[int] = None, margin: int = 2):
        """Tabulate the action.  Infinite modules are tabulated on the box
        [-(window + margin), window + margin] so relation checks on the window
        only need tabulated entries."""
        N = self.env.N
        box = None if self.finite else window + margin
        labels = self.labels(box)
        windows = None
        if box is not None:
            # smallest window in which each degree appears; families bound only
            # their infinite directions, so this is not max |g_i| in general
            first: Dict[Tuple[int, ...], int] = {}
            for w in range(box + 1):
                for g in self._reps(w):
                    first.setdefault(tuple(g), w)
            windows = [first[g] for g in dict.fromkeys(lab[0] for lab in labels)]
        action = {}
        for letter in "XY":
            for i in range(1, self.n + 1):
                rows = []
                for lab in labels:
                    e = self.act(letter, i, lab)
                    if e is not None:
                        rows.append([label_json(lab), label_json(e[0]), format_scalar(e[1], N)])
                action["%s%d" % (letter, i)] = rows
        return {
            "case": self.case,
            "algebra": self.algebra,
            "N": N,
            "bindings": {k: format_scalar(v, N) for k, v in sorted(self.env.bindings.items())},
            "params": {k: format_scalar(v, N) for k, v in sorted(self.params.items())},
            "base": self.base.to_json(N),
            "finite": self.finite,
            "window": window,
            "tabulated_box": box,
            "dim_weight_space": self.dim_m,
            "index_set": self.index_set,
            "gm_basis": [list(s) for s in self.gm_basis],
            "degree_windows": windows,
            "basis": [label_json(l) for l in labels],
            "support": [self.point_of(l).to_json(N) for l in labels],
            "action": action,
        }


def label_json(label: Label):
    return list(label[0]) + [label[1]]


def label_from_json(row) -> Label:
    return (tuple(int(x) for x in row[:-1]), int(row[-1]))


def presentation_for(algebra: str, n: int, env: ParameterEnv) -> TgwaPresentation:
    if algebra == "qwa":
        return qwa_presentation(n, env)
    if algebra == "signflip":
        return sign_flip_presentation()
    raise ConfigError("unknown algebra %r" % algebra)


def module_from_json(data) -> WeightModule:
    """Rebuild a tabulated module from ``WeightModule.to_json`` output."""
    N = int(data["N"])
    env = ParameterEnv(N, data.get("bindings", {}))
    labels = [label_from_json(r) for r in data["basis"]]
    points = {lab: WeightPoint(tuple(env.parse(x) for x in pt))
              for lab, pt in zip(labels, data["support"])}
    n = len(data["base"])
    p = presentation_for(data["algebra"], n, env)
    base = WeightPoint(tuple(env.parse(x) for x in data["base"]))
    tables: Dict[Tuple[str, int], Dict[Label, Tuple[Label, Scalar]]] = {}
    for name, rows in data["action"].items():
        tab = {}
        for src, tgt, c in rows:
            tab[label_from_json(src)] = (label_from_json(tgt), env.parse(c))
        tables[(name[0], int(name[1:]))] = tab
    finite = bool(data["finite"])
    box = data.get("tabulated_box")
    degrees = list(dict.fromkeys(lab[0] for lab in labels))
    windows = data.get("degree_windows") or [max(map(abs, g), default=0) for g in degrees]

    def reps(window):
        if window is None:
            return degrees
        return [g for g, w in zip(degrees, windows) if w <= window]

    def missing(label):
        if box is not None and not in_box(label[0], box):
            raise KeyError("label %s lies outside the tabulated box" % label_str(label))
        return None

    def xa(i, label):
        tab = tables.get(("X", i), {})
        return tab[label] if label in tab else missing(label)

    def ya(i, label):
        tab = tables.get(("Y", i), {})
        return tab[label] if label in tab else missing(label)

    params = {k: env.parse(v) for k, v in data.get("params", {}).items()}
    dim_m = int(data.get("dim_weight_space", 1))
    m = WeightModule(data["case"], env, p, base, dim_m, reps, finite, xa, ya, params,
                     data["algebra"], data.get("gm_basis", []), data.get("index_set", ""),
                     points)
    return m
