"""Symbolic expression kernel: AST, parser, differentiation, evaluation.

Expressions are immutable, hash-consed trees over named symbols with exact
rational constants and rational exponents.  Construction always canonicalizes
(sums and products flattened and sorted, like terms collected, trivial powers
removed), so structural identity doubles as canonical-form equality.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

import mpmath

FUNCTIONS = ("sin", "cos", "tan", "cot", "sqrt", "exp", "log", "abs")

_KIND_RANK = {"const": 0, "sym": 1, "call": 2, "pow": 3, "mul": 4, "add": 5}


class ExprError(Exception):
    """Base class for expression construction errors."""


class ParseError(ExprError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownSymbolError(ParseError):
    pass


class EvalError(ExprError):
    """Base class for evaluation failures."""


class UnboundSymbolError(EvalError):
    def __init__(self, name: str):
        super().__init__(f"symbol '{name}' is not bound")
        self.name = name


class DomainError(EvalError):
    """Raised when a sub-expression is evaluated outside its domain."""

    def __init__(self, message: str, subexpr: "Expr", value):
        super().__init__(f"{message} in {to_string(subexpr)} (argument {value})")
        self.subexpr = subexpr
        self.value = value


class Expr:
    """A node of the expression tree.  Never construct directly; use the
    factory functions (const, sym, add, mul, powr, call, div)."""

    __slots__ = ("kind", "value", "name", "fname", "exponent", "children",
                 "_key", "_hash", "_free")

    def __init__(self, kind, value=None, name=None, fname=None,
                 exponent=None, children=()):
        self.kind = kind
        self.value = value          # Fraction, for const nodes
        self.name = name            # str, for sym nodes
        self.fname = fname          # str, for call nodes
        self.exponent = exponent    # Fraction, for pow nodes
        self.children = children    # tuple of Expr
        self._key = None
        self._hash = None
        self._free = None

    # interned nodes: structural equality is identity
    def __eq__(self, other):
        return self is other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key())
        return self._hash

    def sort_key(self):
        if self._key is None:
            k = self.kind
            if k == "const":
                self._key = (0, self.value.numerator, self.value.denominator)
            elif k == "sym":
                self._key = (1, self.name)
            elif k == "call":
                self._key = (2, self.fname, self.children[0].sort_key())
            elif k == "pow":
                self._key = (3, self.children[0].sort_key(),
                             self.exponent.numerator, self.exponent.denominator)
            else:
                rank = _KIND_RANK[k]
                self._key = (rank, len(self.children)) + tuple(
                    c.sort_key() for c in self.children)
        return self._key

    def free_symbols(self) -> frozenset:
        if self._free is None:
            if self.kind == "sym":
                self._free = frozenset((self.name,))
            elif self.kind == "const":
                self._free = frozenset()
            else:
                acc = frozenset()
                for c in self.children:
                    acc = acc | c.free_symbols()
                self._free = acc
        return self._free

    def is_zero(self) -> bool:
        return self.kind == "const" and self.value == 0

    def is_one(self) -> bool:
        return self.kind == "const" and self.value == 1

    # arithmetic sugar so tensor code reads naturally
    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, p):
        return powr(self, p)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"Expr({to_string(self)})"


_INTERN: Dict[tuple, Expr] = {}


def _intern(node: Expr) -> Expr:
    key = node.sort_key()
    got = _INTERN.get(key)
    if got is None:
        _INTERN[key] = node
        return node
    return got


def _coerce(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return const(v)
    raise TypeError(f"cannot use {type(v).__name__} in a symbolic expression")


ZERO: "Expr"
ONE: "Expr"


def const(v) -> Expr:
    """Exact rational constant."""
    return _intern(Expr("const", value=Fraction(v)))


def sym(name: str) -> Expr:
    return _intern(Expr("sym", name=name))


def _nth_root_exact(k: int, n: int) -> Optional[int]:
    if k < 0:
        return None
    r = round(k ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** n == k:
            return cand
    return None


def _const_pow(base: Fraction, exp: Fraction) -> Optional[Fraction]:
    """Exact rational value of base**exp, or None if not rational."""
    if exp.denominator == 1:
        p = exp.numerator
        if base == 0 and p <= 0:
            return None
        return base ** p
    if base < 0:
        return None
    num = _nth_root_exact(base.numerator, exp.denominator)
    den = _nth_root_exact(base.denominator, exp.denominator)
    if num is None or den is None:
        return None
    root = Fraction(num, den)
    return root ** exp.numerator


def powr(base: Expr, exp) -> Expr:
    """Power with an exact rational exponent."""
    base = _coerce(base)
    exp = Fraction(exp)
    if exp == 0:
        return ONE
    if exp == 1:
        return base
    if base.kind == "const":
        if base.value == 0:
            if exp < 0:
                raise ExprError("zero raised to a negative power")
            return ZERO
        folded = _const_pow(base.value, exp)
        if folded is not None:
            return const(folded)
    if base.kind == "pow":
        # valid for the positive quantities this kernel targets
        return powr(base.children[0], base.exponent * exp)
    if base.kind == "mul" and exp.denominator == 1:
        return mul(*[powr(c, exp) for c in base.children])
    return _intern(Expr("pow", exponent=exp, children=(base,)))


def call(fname: str, arg) -> Expr:
    arg = _coerce(arg)
    if fname not in FUNCTIONS:
        raise ExprError(f"unknown function '{fname}'")
    if fname == "sqrt":
        return powr(arg, Fraction(1, 2))
    if arg.kind == "const":
        v = arg.value
        if fname == "abs":
            return const(abs(v))
        if fname == "exp" and v == 0:
            return ONE
        if fname == "log" and v == 1:
            return ZERO
        if fname in ("sin", "tan") and v == 0:
            return ZERO
        if fname == "cos" and v == 0:
            return ONE
    return _intern(Expr("call", fname=fname, children=(arg,)))


def _split_coeff(term: Expr) -> Tuple[Fraction, Optional[Expr]]:
    """term -> (rational coefficient, monomial or None for pure constants)."""
    if term.kind == "const":
        return term.value, None
    if term.kind == "mul" and term.children[0].kind == "const":
        coeff = term.children[0].value
        rest = term.children[1:]
        if len(rest) == 1:
            return coeff, rest[0]
        return coeff, _intern(Expr("mul", children=rest))
    return Fraction(1), term


def add(*terms) -> Expr:
    flat = []
    for t in terms:
        t = _coerce(t)
        if t.kind == "add":
            flat.extend(t.children)
        else:
            flat.append(t)
    const_acc = Fraction(0)
    monoms: Dict[Expr, Fraction] = {}
    order: list = []
    for t in flat:
        coeff, monom = _split_coeff(t)
        if monom is None:
            const_acc += coeff
            continue
        if monom not in monoms:
            monoms[monom] = Fraction(0)
            order.append(monom)
        monoms[monom] += coeff
    out = []
    for monom in order:
        coeff = monoms[monom]
        if coeff == 0:
            continue
        if coeff == 1:
            out.append(monom)
        else:
            out.append(mul(const(coeff), monom))
    if const_acc != 0:
        out.append(const(const_acc))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=Expr.sort_key)
    return _intern(Expr("add", children=tuple(out)))


def mul(*factors) -> Expr:
    flat = []
    for f in factors:
        f = _coerce(f)
        if f.kind == "mul":
            flat.extend(f.children)
        else:
            flat.append(f)
    coeff = Fraction(1)
    exps: Dict[Expr, Fraction] = {}
    order: list = []
    for f in flat:
        if f.kind == "const":
            coeff *= f.value
            continue
        if f.kind == "pow":
            base, e = f.children[0], f.exponent
        else:
            base, e = f, Fraction(1)
        if base not in exps:
            exps[base] = Fraction(0)
            order.append(base)
        exps[base] += e
    if coeff == 0:
        return ZERO
    out = []
    for base in order:
        e = exps[base]
        if e == 0:
            continue
        if base.kind == "const":
            folded = _const_pow(base.value, e)
            if folded is not None:
                coeff *= folded
                continue
        out.append(powr(base, e))
    out.sort(key=Expr.sort_key)
    if not out:
        return const(coeff)
    if len(out) == 1 and out[0].kind == "add" and coeff != 1:
        # distribute a rational coefficient over a lone sum so that like
        # terms collect across nested negations; term count is unchanged
        c = const(coeff)
        return add(*[mul(c, t) for t in out[0].children])
    if coeff != 1:
        out.insert(0, const(coeff))
    if len(out) == 1:
        return out[0]
    return _intern(Expr("mul", children=tuple(out)))


def neg(f) -> Expr:
    return mul(const(-1), _coerce(f))


def div(a, b) -> Expr:
    b = _coerce(b)
    if b.is_zero():
        raise ExprError("division by zero")
    return mul(_coerce(a), powr(b, -1))


ZERO = const(0)
ONE = const(1)


def simplify(f: Expr) -> Expr:
    """Recursively re-canonicalize.  Construction already canonicalizes, so
    this is idempotent and cheap; it exists to normalize trees assembled by
    hand or deserialized."""
    if f.kind in ("const", "sym"):
        return _intern(f)
    if f.kind == "call":
        return call(f.fname, simplify(f.children[0]))
    if f.kind == "pow":
        return powr(simplify(f.children[0]), f.exponent)
    parts = [simplify(c) for c in f.children]
    if f.kind == "mul":
        return mul(*parts)
    return add(*parts)


# ---------------------------------------------------------------------------
# differentiation

def differentiate(f: Expr, var) -> Expr:
    """Exact partial derivative with respect to a symbol."""
    name = var.name if isinstance(var, Expr) else var
    memo: Dict[Expr, Expr] = {}
    return _diff(f, name, memo)


_DIFF_TABLE = {
    "sin": lambda u: call("cos", u),
    "cos": lambda u: neg(call("sin", u)),
    "tan": lambda u: add(ONE, powr(call("tan", u), 2)),
    "cot": lambda u: neg(add(ONE, powr(call("cot", u), 2))),
    "exp": lambda u: call("exp", u),
    "log": lambda u: powr(u, -1),
    "abs": lambda u: mul(call("abs", u), powr(u, -1)),
}


def _diff(f: Expr, name: str, memo: Dict[Expr, Expr]) -> Expr:
    if name not in f.free_symbols():
        return ZERO
    got = memo.get(f)
    if got is not None:
        return got
    k = f.kind
    if k == "sym":
        out = ONE if f.name == name else ZERO
    elif k == "add":
        out = add(*[_diff(c, name, memo) for c in f.children])
    elif k == "mul":
        terms = []
        kids = f.children
        for i, c in enumerate(kids):
            dc = _diff(c, name, memo)
            if dc.is_zero():
                continue
            terms.append(mul(dc, *[kids[j] for j in range(len(kids)) if j != i]))
        out = add(*terms)
    elif k == "pow":
        base, p = f.children[0], f.exponent
        out = mul(const(p), powr(base, p - 1), _diff(base, name, memo))
    else:  # call
        u = f.children[0]
        out = mul(_DIFF_TABLE[f.fname](u), _diff(u, name, memo))
    memo[f] = out
    return out


# ---------------------------------------------------------------------------
# evaluation

class Binding:
    """Immutable map of symbol names to numeric values used for evaluation."""

    __slots__ = ("values",)

    def __init__(self, values: Mapping[str, object]):
        self.values = dict(values)

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def items(self):
        return self.values.items()


EVAL_PRECISION_BITS = 100  # well above the 80-bit contract


def evaluate(f: Expr, binding) -> mpmath.mpf:
    """High-precision numeric value of f under a binding of all free symbols."""
    values = binding.values if isinstance(binding, Binding) else dict(binding)
    with mpmath.workprec(EVAL_PRECISION_BITS):
        memo: Dict[Expr, mpmath.mpf] = {}
        return _eval_mp(f, values, memo)


def _eval_mp(f: Expr, values, memo):
    got = memo.get(f)
    if got is not None:
        return got
    k = f.kind
    if k == "const":
        out = mpmath.mpf(f.value.numerator) / f.value.denominator
    elif k == "sym":
        if f.name not in values:
            raise UnboundSymbolError(f.name)
        out = mpmath.mpf(values[f.name])
    elif k == "add":
        out = mpmath.fsum(_eval_mp(c, values, memo) for c in f.children)
    elif k == "mul":
        out = mpmath.mpf(1)
        for c in f.children:
            out = out * _eval_mp(c, values, memo)
    elif k == "pow":
        b = _eval_mp(f.children[0], values, memo)
        p = f.exponent
        if b == 0 and p < 0:
            raise DomainError("division by zero", f, b)
        if b < 0 and p.denominator != 1:
            raise DomainError("fractional power of a negative value", f, b)
        if p.denominator == 1:
            out = b ** p.numerator
        else:
            out = mpmath.power(b, mpmath.mpf(p.numerator) / p.denominator)
    else:  # call
        u = _eval_mp(f.children[0], values, memo)
        fn = f.fname
        if fn == "log":
            if u <= 0:
                raise DomainError("log of a non-positive value", f, u)
            out = mpmath.log(u)
        elif fn == "sin":
            out = mpmath.sin(u)
        elif fn == "cos":
            out = mpmath.cos(u)
        elif fn == "tan":
            c = mpmath.cos(u)
            if c == 0:
                raise DomainError("tan at a pole", f, u)
            out = mpmath.sin(u) / c
        elif fn == "cot":
            s = mpmath.sin(u)
            if s == 0:
                raise DomainError("cot at a pole", f, u)
            out = mpmath.cos(u) / s
        elif fn == "abs":
            out = abs(u)
        else:
            out = mpmath.exp(u)
    memo[f] = out
    return out


def eval_float(f: Expr, values: Mapping[str, float], memo: dict) -> float:
    """Fast float64 evaluation sharing a memo across calls at one point."""
    got = memo.get(f)
    if got is not None:
        return got
    k = f.kind
    if k == "const":
        out = f.value.numerator / f.value.denominator
    elif k == "sym":
        try:
            out = values[f.name]
        except KeyError:
            raise UnboundSymbolError(f.name) from None
    elif k == "add":
        out = 0.0
        for c in f.children:
            out += eval_float(c, values, memo)
    elif k == "mul":
        out = 1.0
        for c in f.children:
            out *= eval_float(c, values, memo)
    elif k == "pow":
        b = eval_float(f.children[0], values, memo)
        p = f.exponent
        if b == 0.0 and p < 0:
            raise DomainError("division by zero", f, b)
        if b < 0 and p.denominator != 1:
            raise DomainError("fractional power of a negative value", f, b)
        out = b ** p.numerator if p.denominator == 1 else b ** float(p)
    else:
        u = eval_float(f.children[0], values, memo)
        fn = f.fname
        if fn == "sin":
            out = math.sin(u)
        elif fn == "cos":
            out = math.cos(u)
        elif fn == "tan":
            out = math.tan(u)
        elif fn == "cot":
            s = math.sin(u)
            if s == 0.0:
                raise DomainError("cot at a pole", f, u)
            out = math.cos(u) / s
        elif fn == "exp":
            out = math.exp(u)
        elif fn == "log":
            if u <= 0:
                raise DomainError("log of a non-positive value", f, u)
            out = math.log(u)
        else:
            out = abs(u)
    memo[f] = out
    return out


# ---------------------------------------------------------------------------
# probabilistic equality

def default_range(name: str) -> Tuple[float, float]:
    """Sampling window for a symbol; angle-like names stay inside (0, pi)."""
    if name.startswith("theta"):
        return (0.3, math.pi - 0.3)
    return (1.0, 3.0)


def sample_binding(names: Iterable[str], rng: random.Random,
                   ranges: Optional[Mapping[str, Tuple[float, float]]] = None):
    values = {}
    for name in sorted(names):
        lo, hi = (ranges or {}).get(name, default_range(name))
        values[name] = rng.uniform(lo, hi)
    return Binding(values)


def equal_probabilistic(f: Expr, g: Expr, trials: int = 8, seed: int = 0,
                        ranges: Optional[Mapping[str, Tuple[float, float]]] = None,
                        tol: float = 1e-10, retry_cap: int = 64) -> bool:
    """Numeric equality at deterministic random bindings.

    True iff |f-g| <= tol*(1+|f|+|g|) at every sampled binding; bindings that
    hit a domain error are resampled up to retry_cap times.
    """
    if trials < 8:
        raise ValueError("trials must be at least 8")
    names = f.free_symbols() | g.free_symbols()
    rng = random.Random(seed)
    done = 0
    failures = 0
    while done < trials:
        b = sample_binding(names, rng, ranges)
        try:
            fv = evaluate(f, b)
            gv = evaluate(g, b)
        except DomainError:
            failures += 1
            if failures > retry_cap:
                raise
            continue
        if abs(fv - gv) > tol * (1 + abs(fv) + abs(gv)):
            return False
        done += 1
    return True


# ---------------------------------------------------------------------------
# printing (round-trips through parse_expr for canonical expressions)

def _frac_str(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _exp_str(p: Fraction) -> str:
    if p.denominator == 1 and p >= 0:
        return str(p.numerator)
    return f"({p.numerator}/{p.denominator})" if p.denominator != 1 \
        else f"({p.numerator})"


def _pow_base_str(b: Expr) -> str:
    if b.kind in ("sym", "call") or (b.kind == "const" and b.value >= 0
                                     and b.value.denominator == 1):
        return to_string(b)
    return f"({to_string(b)})"


def _factor_str(f: Expr) -> str:
    if f.kind == "add":
        return f"({to_string(f)})"
    if f.kind == "const" and f.value < 0:
        return f"({to_string(f)})"
    return to_string(f)


def to_string(e: Expr) -> str:
    k = e.kind
    if k == "const":
        v = e.value
        return _frac_str(v) if v >= 0 else f"-{_frac_str(-v)}"
    if k == "sym":
        return e.name
    if k == "call":
        return f"{e.fname}({to_string(e.children[0])})"
    if k == "pow":
        return f"{_pow_base_str(e.children[0])}^{_exp_str(e.exponent)}"
    if k == "mul":
        kids = list(e.children)
        prefix = ""
        if kids[0].kind == "const" and kids[0].value < 0:
            if kids[0].value == -1 and len(kids) > 1:
                kids = kids[1:]
            else:
                kids[0] = const(-kids[0].value)
            prefix = "-"
        return prefix + "*".join(_factor_str(c) for c in kids)
    # add
    parts = []
    for i, t in enumerate(e.children):
        coeff, _ = _split_coeff(t)
        if i > 0 and coeff < 0:
            parts.append(" - " + to_string(neg(t)))
        elif i > 0:
            parts.append(" + " + to_string(t))
        else:
            parts.append(to_string(t))
    return "".join(parts)


# ---------------------------------------------------------------------------
# parser

class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ".":
            raise ParseError("decimal literals are not supported; "
                             "use exact rationals like 3/2", line, col)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise ParseError("decimal literals are not supported; "
                                 "use exact rationals like 3/2", line, col)
            tokens.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, allowed):
        self.tokens = tokens
        self.pos = 0
        self.allowed = allowed

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}",
                             t.line, t.col)
        return t

    def parse_expr(self):
        e = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.parse_term()
            e = add(e, rhs) if op == "+" else add(e, neg(rhs))
        return e

    def parse_term(self):
        # collect the whole factor chain before canonicalizing so the
        # result does not depend on association order of '*'
        t0 = self.peek()
        factors = [self.parse_unary()]
        while self.peek().kind in ("*", "/"):
            op = self.next().kind
            rhs = self.parse_unary()
            if op == "*":
                factors.append(rhs)
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", t0.line, t0.col)
                try:
                    factors.append(powr(rhs, -1))
                except ExprError as exc:
                    raise ParseError(str(exc), t0.line, t0.col) from None
        if len(factors) == 1:
            return factors[0]
        return mul(*factors)

    def parse_unary(self):
        if self.peek().kind == "-":
            self.next()
            return neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek().kind == "^":
            caret = self.next()
            p = self.parse_exponent(caret)
            try:
                return powr(base, p)
            except ExprError as exc:
                raise ParseError(str(exc), caret.line, caret.col) from None
        return base

    def parse_exponent(self, caret) -> Fraction:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Fraction(int(t.text))
        if t.kind == "-":
            self.next()
            return -self.parse_exponent(caret)
        if t.kind == "(":
            self.next()
            p = self.parse_exponent(caret)
            if self.peek().kind == "/":
                self.next()
                q = self.expect("num")
                p = p / int(q.text)
            self.expect(")")
            return p
        raise ParseError("exponent must be an integer or a rational like "
                         "(3/2)", t.line, t.col)

    def parse_atom(self):
        t = self.next()
        if t.kind == "num":
            return const(int(t.text))
        if t.kind == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.kind == "name":
            if self.peek().kind == "(":
                if t.text not in FUNCTIONS:
                    raise UnknownSymbolError(
                        f"unknown function '{t.text}'", t.line, t.col)
                self.next()
                arg = self.parse_expr()
                self.expect(")")
                return call(t.text, arg)
            if self.allowed is not None and t.text not in self.allowed:
                raise UnknownSymbolError(
                    f"unknown symbol '{t.text}'", t.line, t.col)
            return sym(t.text)
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)


def parse_expr(text: str, allowed_symbols: Optional[Iterable[str]] = None) -> Expr:
    """Parse an infix expression into canonical form.

    allowed_symbols restricts which names may appear as free symbols;
    None allows any name.
    """
    allowed = None if allowed_symbols is None else set(allowed_symbols)
    parser = _Parser(_tokenize(text), allowed)
    e = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}",
                         tail.line, tail.col)
    return e
