"""TST surface syntax: parsing, stratification, interpretation and typical ambiguity.

    formula ::= unary [ '->' formula ]
    unary   ::= 'bot' | 'forall' var '.' formula | '(' formula ')'
              | term 'in' term | term '=' term
    term    ::= var | '{' var '|' formula '}'
    var     ::= name [ '@' level ]

A bare ``name`` leaves its level to inference.
"""

from __future__ import annotations

from dataclasses import dataclass

from .atoms import Atom, fresh, name_to_index, theta_power
from .errors import NotClosed, NotStratifiable, NotStratified, ParseError
from .sugar import teq, tin
from .syntax import tokenize
from .terms import All, And, Atm, BOT, Comp, Elt, Neg, Pred, SetTerm, imp, permute


# abstract syntax -------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    level: int | None = None

    @property
    def atom(self) -> Atom:
        if self.level is None:
            raise NotStratified(f"variable {self.name} has no level", self)
        return Atom(self.level, name_to_index(self.name))

    @classmethod
    def of(cls, a: Atom) -> "Var":
        return cls(a.name, a.level)

    def __str__(self):
        return self.name if self.level is None else f"{self.name}@{self.level}"


@dataclass(frozen=True)
class SComp:
    binder: Var
    body: "Formula"

    def __str__(self):
        return f"{{ {self.binder} | {self.body} }}"


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "bot"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        lhs = f"({self.left})" if isinstance(self.left, (Imp, Forall)) else str(self.left)
        return f"{lhs} -> {self.right}"


@dataclass(frozen=True)
class Forall:
    binder: Var
    body: "Formula"

    def __str__(self):
        return f"forall {self.binder}. {self.body}"


@dataclass(frozen=True)
class Eq:
    left: "STerm"
    right: "STerm"

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class In:
    elem: "STerm"
    coll: "STerm"

    def __str__(self):
        return f"{self.elem} in {self.coll}"


STerm = Var | SComp
Formula = Bot | Imp | Forall | Eq | In


# parsing ---------------------------------------------------------------------

_KEYWORDS = {"bot", "forall", "in"}


class _SurfaceParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, v, k=0):
        kind, val, _ = self.peek(k)
        return kind != "eof" and val == v

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def expect(self, v):
        if not self.at(v):
            self.error(f"expected {v!r}, found {self.peek()[1] or 'end of input'!r}")
        self.i += 1

    def accept(self, v):
        if self.at(v):
            self.i += 1
            return True
        return False

    def var(self) -> Var:
        kind, val, _ = self.peek()
        if kind != "ident" or val in _KEYWORDS:
            self.error(f"expected a variable, found {val or 'end of input'!r}")
        try:
            name_to_index(val)
        except ValueError:
            self.error(f"bad variable name {val!r} (use a letter and optional digits)")
        self.i += 1
        if self.accept("@"):
            kind, lv, _ = self.peek()
            if kind != "int":
                self.error("expected a level")
            self.i += 1
            return Var(val, int(lv))
        return Var(val)

    def term(self):
        if self.accept("{"):
            v = self.var()
            self.expect("|")
            body = self.formula()
            self.expect("}")
            return SComp(v, body)
        return self.var()

    def formula(self):
        left = self.unary()
        if self.accept("->"):
            return Imp(left, self.formula())
        return left

    def unary(self):
        if self.accept("bot"):
            return Bot()
        if self.accept("forall"):
            v = self.var()
            self.expect(".")
            return Forall(v, self.formula())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        t = self.term()
        if self.accept("in"):
            return In(t, self.term())
        if self.accept("="):
            return Eq(t, self.term())
        self.error("expected 'in' or '='")

    def done(self):
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")


def parse(text: str):
    """A formula, or a term when the whole input is a single term."""
    p = _SurfaceParser(text)
    save = p.i
    try:
        out = p.formula()
        p.done()
        return out
    except ParseError as first:
        p.i = save
        try:
            out = p.term()
            p.done()
            return out
        except ParseError:
            raise first from None


def parse_formula(text: str):
    p = _SurfaceParser(text)
    out = p.formula()
    p.done()
    return out


# traversal helpers -------------------------------------------------------------

def free_vars(x) -> set[Var]:
    if isinstance(x, Var):
        return {x}
    if isinstance(x, (SComp, Forall)):
        return free_vars(x.body) - {x.binder}
    if isinstance(x, Imp):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, Eq):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, In):
        return free_vars(x.elem) | free_vars(x.coll)
    return set()


def all_vars(x) -> set[Var]:
    if isinstance(x, Var):
        return {x}
    if isinstance(x, (SComp, Forall)):
        return all_vars(x.body) | {x.binder}
    if isinstance(x, Imp):
        return all_vars(x.left) | all_vars(x.right)
    if isinstance(x, Eq):
        return all_vars(x.left) | all_vars(x.right)
    if isinstance(x, In):
        return all_vars(x.elem) | all_vars(x.coll)
    return set()


def size(x) -> int:
    if isinstance(x, (Var, Bot)):
        return 1
    if isinstance(x, (SComp, Forall)):
        return size(x.body) + 1
    if isinstance(x, Imp):
        return size(x.left) + size(x.right) + 1
    if isinstance(x, Eq):
        return size(x.left) + size(x.right) + 1
    if isinstance(x, In):
        return size(x.elem) + size(x.coll) + 1
    raise TypeError(x)


def term_level(t) -> int:
    if isinstance(t, Var):
        return t.atom.level
    return t.binder.atom.level + 1


# stratification ----------------------------------------------------------------

def check_stratified(phi, tst: bool = False):
    """Raise ``NotStratified`` at the first ill-leveled subformula."""
    def go(x):
        if isinstance(x, Var):
            lv = x.atom.level
            if tst and lv < 1:
                raise NotStratified(f"{x}: levels start at 1", x)
            return
        if isinstance(x, (SComp, Forall)):
            go(x.binder)
            go(x.body)
        elif isinstance(x, Imp):
            go(x.left)
            go(x.right)
        elif isinstance(x, Eq):
            go(x.left)
            go(x.right)
            if term_level(x.left) != term_level(x.right):
                raise NotStratified(f"{x}: sides have levels {term_level(x.left)} and {term_level(x.right)}", x)
        elif isinstance(x, In):
            go(x.elem)
            go(x.coll)
            if term_level(x.coll) != term_level(x.elem) + 1:
                raise NotStratified(
                    f"{x}: level {term_level(x.coll)} is not one above {term_level(x.elem)}", x)
    go(phi)


def is_stratified(phi, tst: bool = False) -> bool:
    try:
        check_stratified(phi, tst)
        return True
    except NotStratified:
        return False


class _OffsetUF:
    """Union-find where each node stores its level relative to its parent."""

    def __init__(self):
        self.parent: dict = {}
        self.off: dict = {}
        self.why: dict = {}

    def add(self, n):
        if n not in self.parent:
            self.parent[n] = n
            self.off[n] = 0

    def find(self, n):
        p = self.parent[n]
        if p == n:
            return n, 0
        root, o = self.find(p)
        self.parent[n] = root
        self.off[n] += o
        return root, self.off[n]

    def union(self, a, b, k, why: str):
        """Impose ``level(b) = level(a) + k``; returns a conflict description or ``None``."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            if ob - oa != k:
                return why
            return None
        # level(rb) = level(ra) + oa + k - ob
        self.parent[rb] = ra
        self.off[rb] = oa + k - ob
        return None


@dataclass
class LevelAssignment:
    levels: dict
    formula: object

    def __str__(self):
        return ", ".join(f"{k}: {v}" for k, v in self.levels.items())


_ZERO = ("zero",)


def infer_stratification(phi, anchor: int = 1) -> LevelAssignment:
    """Solve the level constraints of ``phi``; explicit levels are honoured.

    Each component of unconstrained variables is placed so that its lowest
    level is ``anchor``.
    """
    uf = _OffsetUF()
    uf.add(_ZERO)
    occ_node: dict = {}   # id of each Var occurrence -> node
    counter = [0]
    order: list = []

    def node_for(v: Var, scope: dict):
        n = scope.get(v.name)
        if n is None:
            n = ("free", v.name)
            scope[v.name] = n
        uf.add(n)
        if n not in order:
            order.append(n)
        if v.level is not None:
            bad = uf.union(_ZERO, n, v.level, f"{v} conflicts with other uses of {v.name}")
            if bad:
                raise NotStratifiable(bad, [str(v)])
        return n

    def term(t, scope):
        """Node and offset of the level of ``t``."""
        if isinstance(t, Var):
            n = node_for(t, scope)
            occ_node[id(t)] = n
            return n, 0
        b, inner = binder(t.binder, scope)
        occ_node[id(t.binder)] = b
        formula(t.body, inner)
        return b, 1

    def binder(v: Var, scope):
        counter[0] += 1
        n = ("bound", v.name, counter[0])
        inner = dict(scope)
        inner[v.name] = n
        uf.add(n)
        order.append(n)
        if v.level is not None:
            uf.union(_ZERO, n, v.level, "")
        return n, inner

    def relate(x, s, t, k, scope):
        (ns, os_), (nt, ot) = term(s, scope), term(t, scope)
        # level(t) + ot = level(s) + os_ + k
        bad = uf.union(ns, nt, os_ + k - ot, f"{x} closes a cycle with nonzero level offset")
        if bad:
            raise NotStratifiable(bad, [str(x)])

    def formula(x, scope):
        if isinstance(x, Imp):
            formula(x.left, scope)
            formula(x.right, scope)
        elif isinstance(x, Forall):
            b, inner = binder(x.binder, scope)
            occ_node[id(x.binder)] = b
            formula(x.body, inner)
        elif isinstance(x, Eq):
            relate(x, x.left, x.right, 0, scope)
        elif isinstance(x, In):
            relate(x, x.elem, x.coll, 1, scope)

    formula(phi, {})

    # a component touching ZERO is pinned; others are shifted to the anchor
    comps: dict = {}
    for n in order:
        root, o = uf.find(n)
        comps.setdefault(root, []).append((n, o))
    zroot, zoff = uf.find(_ZERO)
    level_of = {}
    for root, members in comps.items():
        if root == zroot:
            for n, o in members:
                level_of[n] = o - zoff
        else:
            lo = min(o for _, o in members)
            for n, o in members:
                level_of[n] = anchor + o - lo

    def annotate(x):
        if isinstance(x, Var):
            return Var(x.name, level_of[occ_node[id(x)]])
        if isinstance(x, SComp):
            return SComp(annotate(x.binder), annotate(x.body))
        if isinstance(x, Forall):
            return Forall(annotate(x.binder), annotate(x.body))
        if isinstance(x, Imp):
            return Imp(annotate(x.left), annotate(x.right))
        if isinstance(x, Eq):
            return Eq(annotate(x.left), annotate(x.right))
        if isinstance(x, In):
            return In(annotate(x.elem), annotate(x.coll))
        return x

    annotated = annotate(phi)
    levels: dict = {}
    for n in order:
        name = n[1]
        key = name
        while key in levels and levels[key] != level_of[n]:
            key += "'"
        levels[key] = level_of[n]
    return LevelAssignment(levels, annotated)


# interpretation ---------------------------------------------------------------

def interp(phi, tst: bool = False) -> Pred:
    check_stratified(phi, tst)
    return _interp(phi)


def interp_term(t, tst: bool = False) -> SetTerm:
    check_stratified(t, tst)
    return _interp(t)


def _interp(x):
    if isinstance(x, Var):
        return Atm(x.atom)
    if isinstance(x, SComp):
        return Comp(x.binder.atom, _interp(x.body))
    if isinstance(x, Bot):
        return BOT
    if isinstance(x, Imp):
        return imp(_interp(x.left), _interp(x.right))
    if isinstance(x, Forall):
        return All(x.binder.atom, _interp(x.body))
    if isinstance(x, Eq):
        return teq(_interp(x.left), _interp(x.right))
    if isinstance(x, In):
        return tin(_interp(x.elem), _interp(x.coll))
    raise TypeError(x)


# substitution and typical ambiguity ---------------------------------------------

def substitute(x, b: Var, t):
    """Capture-avoiding ``x[b := t]`` on leveled surface syntax."""
    avoid = {v.atom for v in all_vars(x) | free_vars(t)} | {b.atom}

    def go(x):
        if isinstance(x, Var):
            return t if x == b else x
        if isinstance(x, (SComp, Forall)):
            if x.binder == b:
                return x
            v, body = x.binder, x.body
            if v in free_vars(t):
                nv = Var.of(fresh(v.level, avoid))
                avoid.add(nv.atom)
                body = substitute(body, v, nv)
                v = nv
            return type(x)(v, go(body))
        if isinstance(x, Imp):
            return Imp(go(x.left), go(x.right))
        if isinstance(x, Eq):
            return Eq(go(x.left), go(x.right))
        if isinstance(x, In):
            return In(go(x.elem), go(x.coll))
        return x

    return go(x)


def plus(phi):
    """``phi`` with the level of every bound variable raised by one."""
    check_stratified(phi)
    fv = free_vars(phi)
    if fv:
        raise NotClosed(f"{phi} has free variables {', '.join(sorted(map(str, fv)))}")

    def up(v: Var) -> Var:
        return Var(v.name, v.level + 1)

    def go(x):
        if isinstance(x, Var):
            return up(x)
        if isinstance(x, SComp):
            return SComp(up(x.binder), go(x.body))
        if isinstance(x, Forall):
            return Forall(up(x.binder), go(x.body))
        if isinstance(x, Imp):
            return Imp(go(x.left), go(x.right))
        if isinstance(x, Eq):
            return Eq(go(x.left), go(x.right))
        if isinstance(x, In):
            return In(go(x.elem), go(x.coll))
        return x

    return go(phi)


def theta_interp(phi) -> Pred:
    """The canonical shift applied to the interpretation of ``phi``."""
    return permute(theta_power(1), interp(phi))


# tree serialisation -------------------------------------------------------------

def to_tree(x):
    """Nested lists of tagged nodes for surface or internal syntax."""
    if isinstance(x, Var):
        return ["var", x.name, x.level]
    if isinstance(x, SComp):
        return ["comp", to_tree(x.binder), to_tree(x.body)]
    if isinstance(x, Bot):
        return ["bot"]
    if isinstance(x, Imp):
        return ["imp", to_tree(x.left), to_tree(x.right)]
    if isinstance(x, Forall):
        return ["forall", to_tree(x.binder), to_tree(x.body)]
    if isinstance(x, Eq):
        return ["eq", to_tree(x.left), to_tree(x.right)]
    if isinstance(x, In):
        return ["in", to_tree(x.elem), to_tree(x.coll)]
    if isinstance(x, Atom):
        return ["atom", x.name, x.level]
    if isinstance(x, Atm):
        return ["atm", to_tree(x.atom)]
    if isinstance(x, Comp):
        return ["abs", to_tree(x.binder), to_tree(x.body)]
    if isinstance(x, Elt):
        return ["elt", to_tree(x.body), to_tree(x.target)]
    if isinstance(x, Neg):
        return ["neg", to_tree(x.body)]
    if isinstance(x, And):
        return ["and", *[to_tree(y) for y in x.args]]
    if isinstance(x, All):
        return ["all", to_tree(x.binder), to_tree(x.body)]
    raise TypeError(x)
