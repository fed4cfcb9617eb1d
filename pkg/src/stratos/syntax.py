"""Concrete text syntax for internal predicates and sets.

    pred ::= unary [ '->' pred | '<->' pred ]
    unary ::= 'neg' unary | 'all' '[' ATOM ']' pred | '(' pred ')'
            | 'top' | 'bot' | 'and' '{' preds '}' | 'or' '{' preds '}'
            | ('or' | 'imp' | 'iff') '(' pred ',' pred ')'
            | 'elt' '(' set ',' ATOM ')' | 'tin' '(' set ',' set ')'
            | 'teq' '(' set ',' set ')' | GEN
    set  ::= 'atm' '(' ATOM ')' | '[' ATOM ']' pred | ATOM | '(' set ')'
            | 'empty@' INT | 'full@' INT | 'num(' INT ')@' INT
            | 'contains' '(' set ')' | 'complement' '(' set ')'
            | ('intersect' | 'union') '{' sets '}' '@' INT
            | 'every' '[' ATOM ']' set

``preds`` and ``sets`` are ``;``-separated.  An upper-case generator such as
``X`` abbreviates ``elt(atm(x@0), x@1)``; it gives proof search a supply of
distinct propositional letters.
"""

from __future__ import annotations

import re

from .atoms import Atom, name_to_index
from .errors import ParseError
from .sigma import SmallSubst, theta_subst
from .sugar import complement, every, intersect, tin, teq, union
from .terms import (
    All, And, Atm, BOT, Comp, Elt, Neg, Pred, SetTerm, TOP, contains, empty, full,
    iff, imp, numeral, or_,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<punct><->|->|<-|\|-|::|:=|==|[()\[\]{},;|=@.])"
    r"|(?P<int>-?\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


def generator(name: str) -> Pred:
    i = name_to_index(name.lower())
    return Elt(Atm(Atom(0, i)), Atom(1, i))


_GEN_RE = re.compile(r"^[A-Z]\d*$")


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str, k: int = 0) -> bool:
        kind, v, _ = self.peek(k)
        return kind != "eof" and v == value

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.peek()[2])

    def expect(self, value: str):
        if not self.at(value):
            self.error(f"expected {value!r}, found {self.peek()[1] or 'end of input'!r}")
        return self.take()

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def done(self):
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")

    def int_(self) -> int:
        kind, v, _ = self.peek()
        if kind != "int":
            self.error("expected an integer")
        self.take()
        return int(v)

    def atom(self) -> Atom:
        kind, v, _ = self.peek()
        if kind != "ident" or not re.match(r"^[a-z]\d*$", v) or not self.at("@", 1):
            self.error("expected an atom name@level")
        self.take()
        self.take()
        return Atom(self.int_(), name_to_index(v))

    def is_atom_ahead(self) -> bool:
        kind, v, _ = self.peek()
        return kind == "ident" and bool(re.match(r"^[a-z]\d*$", v)) and self.at("@", 1)

    # predicates
    def pred(self) -> Pred:
        left = self.unary()
        if self.accept("->"):
            return imp(left, self.pred())
        if self.accept("<->"):
            return iff(left, self.pred())
        return left

    def preds_in(self, close: str) -> list[Pred]:
        out = []
        if not self.at(close):
            out.append(self.pred())
            while self.accept(";"):
                out.append(self.pred())
        self.expect(close)
        return out

    def unary(self) -> Pred:
        kind, v, _ = self.peek()
        if self.accept("("):
            p = self.pred()
            self.expect(")")
            return p
        if kind != "ident":
            self.error("expected a predicate")
        if _GEN_RE.match(v):
            self.take()
            return generator(v)
        if v == "neg":
            self.take()
            return Neg(self.unary())
        if v == "all":
            self.take()
            self.expect("[")
            a = self.atom()
            self.expect("]")
            return All(a, self.pred())
        if v == "top":
            self.take()
            return TOP
        if v == "bot":
            self.take()
            return BOT
        if v in ("and", "or") and self.at("{", 1):
            self.take()
            self.take()
            xs = self.preds_in("}")
            return And(xs) if v == "and" else Neg(And(Neg(x) for x in xs))
        if v in ("or", "imp", "iff"):
            self.take()
            self.expect("(")
            x = self.pred()
            self.expect(",")
            y = self.pred()
            self.expect(")")
            return {"or": or_, "imp": imp, "iff": iff}[v](x, y)
        if v == "elt":
            self.take()
            self.expect("(")
            s = self.set_()
            self.expect(",")
            a = self.atom()
            self.expect(")")
            return Elt(s, a)
        if v in ("tin", "teq"):
            self.take()
            self.expect("(")
            s = self.set_()
            self.expect(",")
            t = self.set_()
            self.expect(")")
            return tin(s, t) if v == "tin" else teq(s, t)
        self.error(f"unknown predicate form {v!r}")

    # sets
    def set_(self) -> SetTerm:
        kind, v, _ = self.peek()
        if self.accept("("):
            s = self.set_()
            self.expect(")")
            return s
        if self.accept("["):
            a = self.atom()
            self.expect("]")
            return Comp(a, self.pred())
        if self.is_atom_ahead():
            return Atm(self.atom())
        if kind != "ident":
            self.error("expected a set")
        self.take()
        if v == "atm":
            self.expect("(")
            a = self.atom()
            self.expect(")")
            return Atm(a)
        if v in ("empty", "full"):
            self.expect("@")
            i = self.int_()
            return empty(i) if v == "empty" else full(i)
        if v == "num":
            self.expect("(")
            n = self.int_()
            self.expect(")")
            self.expect("@")
            return numeral(n, self.int_())
        if v in ("contains", "complement"):
            self.expect("(")
            s = self.set_()
            self.expect(")")
            return contains(s) if v == "contains" else complement(s)
        if v in ("intersect", "union"):
            self.expect("{")
            zs = []
            if not self.at("}"):
                zs.append(self.set_())
                while self.accept(";"):
                    zs.append(self.set_())
            self.expect("}")
            level = None
            if self.accept("@"):
                level = self.int_()
            return intersect(zs, level) if v == "intersect" else union(zs, level)
        if v == "every":
            self.expect("[")
            c = self.atom()
            self.expect("]")
            return every(c, self.set_())
        self.i -= 1
        self.error(f"unknown set form {v!r}")

    def term(self):
        """A set if the input starts like one, else a predicate."""
        kind, v, _ = self.peek()
        if self.at("[") or self.is_atom_ahead() or (kind == "ident" and v in _SET_WORDS):
            return self.set_()
        return self.pred()

    # substitutions and sequents
    def subst_blocks(self) -> list[SmallSubst]:
        out = []
        while self.at("[") and self.peek(2)[1] == "@" and self.at(":=", 4):
            self.expect("[")
            a = self.atom()
            self.expect(":=")
            theta = False
            if self.at("theta"):
                self.take()
                theta = True
            x = self.set_()
            self.expect("]")
            out.append(theta_subst(a, x) if theta else SmallSubst(((a, x),)))
        return out

    def pred_list(self, stop: tuple[str, ...]) -> list[Pred]:
        out = []
        if any(self.at(s) for s in stop) or self.peek()[0] == "eof":
            return out
        out.append(self.pred())
        while self.accept(","):
            out.append(self.pred())
        return out

    def sequent(self):
        left = self.pred_list(("|-",))
        self.expect("|-")
        right = self.pred_list(())
        return left, right


_SET_WORDS = {"atm", "empty", "full", "num", "contains", "complement", "intersect", "union", "every"}


def parse_pred(text: str) -> Pred:
    p = Parser(text)
    out = p.pred()
    p.done()
    return out


def parse_set(text: str) -> SetTerm:
    p = Parser(text)
    out = p.set_()
    p.done()
    return out


def parse_term(text: str):
    p = Parser(text)
    out = p.term()
    p.done()
    return out


def parse_atom(text: str) -> Atom:
    p = Parser(text)
    out = p.atom()
    p.done()
    return out


def parse_subst_expr(text: str):
    """``<term> [a@1 := x] [b@0 :=theta y] ...`` -> ``(term, [SmallSubst, ...])``."""
    p = Parser(text)
    t = p.term()
    blocks = p.subst_blocks()
    p.done()
    return t, blocks


def parse_sequent(text: str):
    p = Parser(text)
    out = p.sequent()
    p.done()
    return out
