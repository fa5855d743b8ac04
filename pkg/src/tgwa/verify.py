"""Checks on weight modules: defining relations, weight grading, simplicity
and inner breaks.

Every check works on basis labels inside a window for modules with infinite
support; words of length two reach at most two steps beyond the window, and
tabulated modules carry that margin.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .core import canonical_letters, evaluate_r, pair_at
from .errors import InfiniteDimension
from .linear import RowSpace, Vector, vec_add
from .module import Label, WeightModule, label_str
from .orbit import WeightPoint, g_tilde, sigma_action_iterated
from .scalars import ONE, ZERO, Scalar, format_scalar

RelationId = Tuple
# a relation is a list of (coefficient, word); words act right to left
Relation = List[Tuple[Scalar, tuple]]


def _unit(n: int, i: int, sign: int = 1) -> Tuple[int, ...]:
    return tuple(sign if k == i - 1 else 0 for k in range(n))


def qwa_relations(m: WeightModule) -> Dict[RelationId, Relation]:
    """Defining relations of the quantized Weyl algebra as word combinations."""
    env, n = m.env, m.n
    rels: Dict[RelationId, Relation] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            qi, lij, lji = env.q(i), env.lam(i, j), env.lam(j, i)
            X, Y = ("X", i), ("Y", i)
            Xj, Yj = ("X", j), ("Y", j)
            rels[("xx", i, j)] = [(ONE, (X, Xj)), (-qi * lij, (Xj, X))]
            rels[("yy", i, j)] = [(ONE, (Y, Yj)), (-lij, (Yj, Y))]
            rels[("xy", i, j)] = [(ONE, (X, Yj)), (-lji, (Yj, X))]
            rels[("xy", j, i)] = [(ONE, (Xj, Y)), (-qi * lij, (Y, Xj))]
    for i in range(1, n + 1):
        qi = env.q(i)
        rel = [(ONE, (("X", i), ("Y", i))), (-qi, (("Y", i), ("X", i))), (-ONE, ())]
        for k in range(1, i):
            rel.append((-(env.q(k) - 1), (("Y", k), ("X", k))))
        rels[("xy", i, i)] = rel
    return rels


def tgwa_relations(m: WeightModule) -> Dict[RelationId, Relation]:
    """Commutation relations of a twisted generalized Weyl construction that
    do not involve the base ring (the ring relations are weight checks)."""
    p, n = m.p, m.n
    rels: Dict[RelationId, Relation] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            X, Yj = ("X", i), ("Y", j)
            rels[("xy", i, j)] = [(ONE, (X, Yj)), (-p.swap_scalar(X, Yj), (Yj, X))]
            if i < j and p.scalar_graded():
                rels[("xx", i, j)] = [(ONE, (X, ("X", j))),
                                      (-p.swap_scalar(X, ("X", j)), (("X", j), X))]
                rels[("yy", i, j)] = [(ONE, (("Y", i), Yj)),
                                      (-p.swap_scalar(("Y", i), Yj), (Yj, ("Y", i)))]
    return rels


def relations_for(m: WeightModule) -> Dict[RelationId, Relation]:
    return qwa_relations(m) if m.algebra == "qwa" else tgwa_relations(m)


def apply_relation(m: WeightModule, rel: Relation, label: Label) -> Vector:
    out: Vector = {}
    for c, word in rel:
        out = vec_add(out, m.apply_word(word, {label: ONE}), c)
    return out


def relation_id_str(rid: RelationId) -> str:
    return rid[0] + "".join(str(x) for x in rid[1:])


@dataclass
class Failure:
    check: str
    label: Label
    detail: str

    def to_json(self):
        return {"check": self.check, "label": label_str(self.label), "detail": self.detail}


def check_relations(m: WeightModule, window: Optional[int] = None,
                    relations: Optional[Dict[RelationId, Relation]] = None) -> Dict[str, List[Failure]]:
    rels = relations if relations is not None else relations_for(m)
    out: Dict[str, List[Failure]] = {}
    labels = m.labels(window)
    N = m.env.N
    for rid, rel in rels.items():
        name = relation_id_str(rid)
        fails = []
        for lab in labels:
            res = apply_relation(m, rel, lab)
            if res:
                tgt, c = next(iter(res.items()))
                fails.append(Failure(name, lab, "residual %s on %s"
                                     % (format_scalar(c, N), label_str(tgt))))
        out[name] = fails
    return out


def check_weight_grading(m: WeightModule, window: Optional[int] = None) -> List[Failure]:
    """X_i moves the weight point m to sigma_i(m), Y_i to sigma_i^{-1}(m), and
    Y_i X_i, X_i Y_i act by t_i and sigma_i(t_i) evaluated at the point."""
    fails = []
    n, p, N = m.n, m.p, m.env.N
    for lab in m.labels(window):
        pt = m.point_of(lab)
        for i in range(1, n + 1):
            for letter, sign in (("X", 1), ("Y", -1)):
                e = m.act(letter, i, lab)
                if e is None:
                    continue
                want = sigma_action_iterated(_unit(n, i, sign), pt, p)
                got = m.point_of(e[0])
                if got != want:
                    fails.append(Failure("grading", lab, "%s%d lands at %s, expected %s"
                                         % (letter, i, got, want)))
            for word, r in (((("Y", i), ("X", i)), p.t[i - 1]), ((("X", i), ("Y", i)), p.sigma_t(i))):
                value = evaluate_r(r, pt.alpha)
                res = vec_add(m.apply_word(word, {lab: ONE}), {lab: value}, -ONE)
                if res:
                    fails.append(Failure("grading", lab, "%s%d %s%d does not act by %s"
                                         % (word[0][0], i, word[1][0], i, format_scalar(value, N))))
    return fails


# ---------------------------------------------------------------------------
# simplicity


@dataclass
class SimplicityResult:
    simple: Optional[bool]
    method: str
    witness: Optional[List[Label]] = None
    detail: str = ""

    def to_json(self):
        return {"simple": self.simple, "method": self.method, "detail": self.detail,
                "witness": None if self.witness is None else [label_str(l) for l in self.witness]}


def _word_on(m: WeightModule, word, lab: Label):
    """The image of a basis vector under a word, as (label, coeff) or None."""
    vec = m.apply_word(word, {lab: ONE})
    if not vec:
        return None
    (tgt, c), = vec.items()
    return tgt, c


def separating_eigenvalues(m: WeightModule, box: int = 4) -> Dict[Label, tuple]:
    """Joint eigenvalues of basis vectors under words that act diagonally on
    their weight space; the weight point itself comes first."""
    labels = m.labels()
    groups: Dict[WeightPoint, List[Label]] = {}
    for lab in labels:
        groups.setdefault(m.point_of(lab), []).append(lab)
    degrees = [tuple(s) for s in m.gm_basis]
    degrees += [g for g in itertools.product(range(-box, box + 1), repeat=m.n) if any(g)]
    sig: Dict[Label, list] = {lab: [m.point_of(lab).alpha] for lab in labels}
    for members in groups.values():
        if len(members) == 1:
            continue
        for g in degrees:
            word = canonical_letters(g)
            images = [_word_on(m, word, lab) for lab in members]
            if all(im is None or im[0] == lab for im, lab in zip(images, members)):
                for im, lab in zip(images, members):
                    sig[lab].append(ZERO if im is None else im[1])
    return {lab: tuple(v) for lab, v in sig.items()}


def _reachable(m: WeightModule, start: Label) -> List[Label]:
    seen = {start}
    stack = [start]
    while stack:
        lab = stack.pop()
        for letter in "XY":
            for i in range(1, m.n + 1):
                e = m.act(letter, i, lab)
                if e is not None and e[0] not in seen:
                    seen.add(e[0])
                    stack.append(e[0])
    return sorted(seen)


def _dense_generators(m: WeightModule, labels: List[Label]):
    index = {lab: k for k, lab in enumerate(labels)}
    d = len(labels)
    mats = []
    for letter in "XY":
        for i in range(1, m.n + 1):
            mat = [[ZERO] * d for _ in range(d)]
            for lab in labels:
                e = m.act(letter, i, lab)
                if e is not None:
                    mat[index[e[0]]][index[lab]] = e[1]
            mats.append(mat)
    return mats


def _mat_mul(a, b):
    d = len(a)
    out = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        for k in range(d):
            if not a[i][k].is_zero():
                aik = a[i][k]
                row = b[k]
                for j in range(d):
                    if not row[j].is_zero():
                        out[i][j] = out[i][j] + aik * row[j]
    return out


def burnside_span_dim(m: WeightModule, labels: List[Label]) -> int:
    """Dimension of the span of all word operators (breadth first)."""
    d = len(labels)
    gens = _dense_generators(m, labels)
    ident = [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]
    space = RowSpace()
    space.add([x for row in ident for x in row])
    frontier = [ident]
    while frontier and space.dim < d * d:
        new = []
        for mat in frontier:
            for g in gens:
                prod = _mat_mul(g, mat)
                if space.add([x for row in prod for x in row]):
                    new.append(prod)
        frontier = new
    return space.dim


def cyclic_span_dim(m: WeightModule, labels: List[Label], start: int) -> int:
    """Dimension of the submodule generated by the basis vector ``labels[start]``."""
    d = len(labels)
    gens = _dense_generators(m, labels)
    vec = [ONE if i == start else ZERO for i in range(d)]
    space = RowSpace()
    space.add(vec)
    frontier = [vec]
    while frontier and space.dim < d:
        new = []
        for v in frontier:
            for g in gens:
                w = [sum((g[i][j] * v[j] for j in range(d) if not v[j].is_zero()), ZERO)
                     for i in range(d)]
                if space.add(w):
                    new.append(w)
        frontier = new
    return space.dim


def check_simplicity(m: WeightModule, box: int = 4, burnside_limit: int = 12) -> SimplicityResult:
    if not m.finite:
        raise InfiniteDimension("simplicity is only decided for finite-dimensional modules")
    labels = m.labels()
    sig = separating_eigenvalues(m, box)
    distinct = len(set(sig.values())) == len(labels)
    if distinct:
        for lab in labels:
            reach = _reachable(m, lab)
            if len(reach) < len(labels):
                return SimplicityResult(False, "graph", reach,
                                        "submodule generated by %s" % label_str(lab))
        return SimplicityResult(True, "graph", None,
                                "joint eigenvalues separate the basis; graph strongly connected")
    if len(labels) <= burnside_limit:
        dim = burnside_span_dim(m, labels)
        d = len(labels)
        if dim == d * d:
            return SimplicityResult(True, "burnside", None, "word operators span End(M)")
        for k, lab in enumerate(labels):
            sub = cyclic_span_dim(m, labels, k)
            if sub < d:
                return SimplicityResult(False, "burnside", [lab],
                                        "%s generates a submodule of dimension %d of %d"
                                        % (label_str(lab), sub, d))
        # a smaller span only rules out absolute simplicity over this field
        return SimplicityResult(None, "undecided", None,
                                "word operators span %d of %d dimensions" % (dim, d * d))
    return SimplicityResult(None, "undecided", None, "basis not separated and dimension too large")


# ---------------------------------------------------------------------------
# inner breaks


@dataclass
class InnerBreak:
    point: WeightPoint
    direction: int
    side: str

    def to_json(self, N=None):
        return {"point": self.point.to_json(N), "direction": self.direction, "side": self.side}


def inner_breaks(m: WeightModule, window: Optional[int] = None) -> List[InnerBreak]:
    """Points n of the support with t_i(n) = 0 and sigma_i(n) in the support,
    or sigma_i(t_i)(n) = 0 and sigma_i^{-1}(n) in the support."""
    p, n = m.p, m.n
    support = {m.point_of(lab) for lab in m.labels(window)}
    out = []
    for pt in sorted(support, key=str):
        for i in range(1, n + 1):
            if evaluate_r(p.t[i - 1], pt.alpha).is_zero():
                if sigma_action_iterated(_unit(n, i), pt, p) in support:
                    out.append(InnerBreak(pt, i, "t"))
            if evaluate_r(p.sigma_t(i), pt.alpha).is_zero():
                if sigma_action_iterated(_unit(n, i, -1), pt, p) in support:
                    out.append(InnerBreak(pt, i, "sigma(t)"))
    return out


@dataclass
class ProperBreak:
    point: WeightPoint
    degree: Tuple[int, ...]

    def to_json(self, N=None):
        return {"point": self.point.to_json(N), "degree": list(self.degree)}


def proper_inner_breaks(m: WeightModule, box: int = 2, window: Optional[int] = None) -> List[ProperBreak]:
    """Pairs (n, g) with a_g M_n != 0 although a_g^* a_g vanishes at n."""
    out = []
    by_point: Dict[WeightPoint, List[Label]] = {}
    for lab in m.labels(window):
        by_point.setdefault(m.point_of(lab), []).append(lab)
    for pt, members in sorted(by_point.items(), key=lambda kv: str(kv[0])):
        for g in itertools.product(range(-box, box + 1), repeat=m.n):
            if not any(g):
                continue
            if not pair_at(g, pt.alpha, m.p).is_zero():
                continue
            word = canonical_letters(g)
            if any(m.apply_word(word, {lab: ONE}) for lab in members):
                out.append(ProperBreak(pt, tuple(g)))
    return out


# ---------------------------------------------------------------------------
# report


def default_window(m: WeightModule) -> Optional[int]:
    if m.finite:
        return None
    bound = None
    if m.algebra == "qwa":
        bound = g_tilde(m.base, m.env).finite_bound()
    return 4 if bound is None else 2 * (bound + 1)


@dataclass
class VerificationReport:
    case: str
    window: Optional[int]
    n_labels: int
    relations: Dict[str, List[Failure]]
    grading: List[Failure]
    simplicity: Optional[SimplicityResult] = None
    breaks: List[InnerBreak] = field(default_factory=list)
    proper_breaks: List[ProperBreak] = field(default_factory=list)
    N: Optional[int] = None

    @property
    def relations_ok(self) -> bool:
        return not any(self.relations.values())

    @property
    def ok(self) -> bool:
        simple_ok = self.simplicity is None or self.simplicity.simple is not False
        return self.relations_ok and not self.grading and simple_ok

    def to_json(self):
        return {
            "case": self.case,
            "window": self.window,
            "labels_checked": self.n_labels,
            "ok": self.ok,
            "relations": {k: [f.to_json() for f in v] for k, v in self.relations.items()},
            "grading": [f.to_json() for f in self.grading],
            "simplicity": None if self.simplicity is None else self.simplicity.to_json(),
            "inner_breaks": [b.to_json(self.N) for b in self.breaks],
            "proper_inner_breaks": [b.to_json(self.N) for b in self.proper_breaks],
        }

    def to_text(self) -> str:
        lines = ["module %s: %d basis vectors checked%s" % (
            self.case, self.n_labels, "" if self.window is None else " (window %d)" % self.window)]
        for name, fails in self.relations.items():
            lines.append("  relation %-6s %s" % (name, "ok" if not fails else
                                                   "FAIL (%d), e.g. %s: %s" % (
                                                       len(fails), label_str(fails[0].label),
                                                       fails[0].detail)))
        lines.append("  grading         %s" % ("ok" if not self.grading else
                                              "FAIL (%d), e.g. %s" % (len(self.grading),
                                                                      self.grading[0].detail)))
        if self.simplicity is not None:
            s = self.simplicity
            verdict = {True: "simple", False: "NOT simple", None: "undecided"}[s.simple]
            lines.append("  simplicity      %s [%s] %s" % (verdict, s.method, s.detail))
        if self.breaks:
            lines.append("  inner breaks    %d" % len(self.breaks))
        if self.proper_breaks:
            lines.append("  proper breaks   %s" % ", ".join(
                str(b.degree) for b in self.proper_breaks))
        result = "PASS" if self.ok else "FAIL"
        if self.ok and self.proper_breaks:
            result += " (proper inner breaks flagged)"
        lines.append("  result          %s" % result)
        return "\n".join(lines)


def verify_module(m: WeightModule, window: Optional[int] = None, simplicity: bool = True,
                  breaks: bool = True) -> VerificationReport:
    if window is None:
        window = default_window(m)
    w = None if m.finite else window
    rels = check_relations(m, w)
    grading = check_weight_grading(m, w)
    simp = check_simplicity(m) if (simplicity and m.finite) else None
    br = inner_breaks(m, w) if breaks else []
    pbr = proper_inner_breaks(m, window=w) if breaks and m.finite else []
    return VerificationReport(m.case, w, len(m.labels(w)), rels, grading, simp, br, pbr, m.env.N)
