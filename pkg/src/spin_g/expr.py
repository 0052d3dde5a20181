"""Small symbolic kernel for chart fields: expression trees over named
coordinates with exact rational constants, closed under partial
differentiation, plus the infix parser used by scene files.

Node kinds: constant, variable, sum, product, integer power, sin, cos, exp,
sqrt, reciprocal.  Trees are immutable and hashable; smart constructors do
the cheap normalizations (flattening, constant folding, dropping units) so
derivatives stay reasonably small.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Env = Dict[str, float]


class Expr:
    __slots__ = ()

    def ev(self, env: Env) -> float:
        raise NotImplementedError

    def diff(self, var: str) -> "Expr":
        raise NotImplementedError

    # operator sugar, used heavily when building scenes in code
    def __add__(self, other):
        return add_(self, as_expr(other))

    def __radd__(self, other):
        return add_(as_expr(other), self)

    def __sub__(self, other):
        return add_(self, neg_(as_expr(other)))

    def __rsub__(self, other):
        return add_(as_expr(other), neg_(self))

    def __mul__(self, other):
        return mul_(self, as_expr(other))

    def __rmul__(self, other):
        return mul_(as_expr(other), self)

    def __truediv__(self, other):
        return mul_(self, recip_(as_expr(other)))

    def __rtruediv__(self, other):
        return mul_(as_expr(other), recip_(self))

    def __neg__(self):
        return neg_(self)

    def __pow__(self, k):
        return pow_(self, k)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, float):
            raise TypeError("exact rational constant required")
        object.__setattr__(self, "value", Fraction(value))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        return float(self.value)

    def diff(self, var):
        return ZERO

    def __eq__(self, other):
        return isinstance(other, Const) and self.value == other.value

    def __hash__(self):
        return hash(("c", self.value))

    def __repr__(self):
        return str(self.value)


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise KeyError(f"no value supplied for {self.name}") from None

    def diff(self, var):
        return ONE if var == self.name else ZERO

    def __eq__(self, other):
        return isinstance(other, Var) and self.name == other.name

    def __hash__(self):
        return hash(("v", self.name))

    def __repr__(self):
        return self.name


class Sum(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: Tuple[Expr, ...]):
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        return math.fsum(t.ev(env) for t in self.terms)

    def diff(self, var):
        return add_(*(t.diff(var) for t in self.terms))

    def __eq__(self, other):
        return isinstance(other, Sum) and self.terms == other.terms

    def __hash__(self):
        return hash(("s", self.terms))

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")"


class Prod(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: Tuple[Expr, ...]):
        object.__setattr__(self, "factors", factors)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        out = 1.0
        for f in self.factors:
            out *= f.ev(env)
        return out

    def diff(self, var):
        terms = []
        fs = self.factors
        for i, f in enumerate(fs):
            d = f.diff(var)
            if d is ZERO or d == ZERO:
                continue
            terms.append(mul_(*fs[:i], d, *fs[i + 1 :]))
        return add_(*terms)

    def __eq__(self, other):
        return isinstance(other, Prod) and self.factors == other.factors

    def __hash__(self):
        return hash(("p", self.factors))

    def __repr__(self):
        return "(" + "*".join(map(repr, self.factors)) + ")"


class Pow(Expr):
    """Integer power, exponent >= 2 after normalization."""

    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: int):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        return self.base.ev(env) ** self.exp

    def diff(self, var):
        return mul_(Const(self.exp), pow_(self.base, self.exp - 1), self.base.diff(var))

    def __eq__(self, other):
        return isinstance(other, Pow) and self.base == other.base and self.exp == other.exp

    def __hash__(self):
        return hash(("^", self.base, self.exp))

    def __repr__(self):
        return f"{self.base!r}^{self.exp}"


class Recip(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        v = self.arg.ev(env)
        if v == 0.0:
            raise ZeroDivisionError("reciprocal of zero during evaluation")
        return 1.0 / v

    def diff(self, var):
        return mul_(Const(-1), self.arg.diff(var), recip_(pow_(self.arg, 2)))

    def __eq__(self, other):
        return isinstance(other, Recip) and self.arg == other.arg

    def __hash__(self):
        return hash(("r", self.arg))

    def __repr__(self):
        return f"1/({self.arg!r})"


_FN_EVAL = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "sqrt": math.sqrt}


class Fn(Expr):
    __slots__ = ("kind", "arg")

    def __init__(self, kind: str, arg: Expr):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def ev(self, env):
        return _FN_EVAL[self.kind](self.arg.ev(env))

    def diff(self, var):
        d = self.arg.diff(var)
        if self.kind == "sin":
            outer: Expr = Fn("cos", self.arg)
        elif self.kind == "cos":
            outer = mul_(Const(-1), Fn("sin", self.arg))
        elif self.kind == "exp":
            outer = self
        else:  # sqrt
            outer = mul_(Const(Fraction(1, 2)), recip_(self))
        return mul_(outer, d)

    def __eq__(self, other):
        return isinstance(other, Fn) and self.kind == other.kind and self.arg == other.arg

    def __hash__(self):
        return hash((self.kind, self.arg))

    def __repr__(self):
        return f"{self.kind}({self.arg!r})"


ZERO = Const(0)
ONE = Const(1)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(x)


def add_(*terms: Expr) -> Expr:
    flat: List[Expr] = []
    const = Fraction(0)
    for t in terms:
        if isinstance(t, Sum):
            items: Iterable[Expr] = t.terms
        else:
            items = (t,)
        for u in items:
            if isinstance(u, Const):
                const += u.value
            else:
                flat.append(u)
    if const:
        flat.insert(0, Const(const))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def mul_(*factors: Expr) -> Expr:
    flat: List[Expr] = []
    const = Fraction(1)
    for f in factors:
        if isinstance(f, Prod):
            items: Iterable[Expr] = f.factors
        else:
            items = (f,)
        for u in items:
            if isinstance(u, Const):
                const *= u.value
            else:
                flat.append(u)
    if const == 0:
        return ZERO
    if const != 1:
        flat.insert(0, Const(const))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Prod(tuple(flat))


def neg_(x: Expr) -> Expr:
    return mul_(Const(-1), x)


def pow_(base: Expr, k: int) -> Expr:
    if not isinstance(k, int):
        raise TypeError("integer exponent required")
    if k < 0:
        return recip_(pow_(base, -k))
    if k == 0:
        return ONE
    if k == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**k)
    return Pow(base, k)


def recip_(x: Expr) -> Expr:
    if isinstance(x, Const):
        if x.value == 0:
            raise ZeroDivisionError("reciprocal of the zero constant")
        return Const(1 / x.value)
    if isinstance(x, Recip):
        return x.arg
    return Recip(x)


def fn_(kind: str, arg: Expr) -> Expr:
    if kind not in _FN_EVAL:
        raise ValueError(f"unknown function {kind!r}")
    if isinstance(arg, Const):
        if arg.value == 0:
            return {"sin": ZERO, "cos": ONE, "exp": ONE, "sqrt": ZERO}[kind]
        if kind == "sqrt":
            r = _exact_frac_sqrt(arg.value)
            if r is not None:
                return Const(r)
    return Fn(kind, arg)


def _exact_frac_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        raise ValueError("square root of a negative constant")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def derivative(e: Expr, var: str) -> Expr:
    """Memoized symbolic partial derivative."""
    key = (e, var)
    hit = _DIFF_CACHE.get(key)
    if hit is None:
        hit = e.diff(var)
        _DIFF_CACHE[key] = hit
    return hit


_DIFF_CACHE: Dict[Tuple[Expr, str], Expr] = {}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


_OPS = set("+-*/^(),")


def _tokenize(text: str):
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
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
        if ch in _OPS:
            toks.append(("op", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lit = text[i:j]
            toks.append(("num", lit, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(("end", "", line, col))
    return toks


def _num_to_fraction(lit: str) -> Fraction:
    if "." in lit:
        whole, frac = lit.split(".")
        denom = 10 ** len(frac)
        return Fraction(int(whole or "0") * denom + int(frac or "0"), denom)
    return Fraction(int(lit))


class _Parser:
    """Left-associative precedence climber: ^ binds tightest, then unary
    minus, then * and /, then + and -.  No implicit multiplication."""

    def __init__(self, toks, variables, params):
        self.toks = toks
        self.pos = 0
        self.variables = set(variables)
        self.params = dict(params)

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_op(self, ch):
        kind, val, line, col = self.take()
        if kind != "op" or val != ch:
            what = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {ch!r}, found {what}", line, col)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input starting at {val!r}", line, col)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, val, _l, _c = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = add_(e, rhs if val == "+" else neg_(rhs))
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, val, _l, _c = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                e = mul_(e, rhs if val == "*" else recip_(rhs))
            else:
                return e

    def unary(self) -> Expr:
        kind, val, _l, _c = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return neg_(self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        while True:
            kind, val, _l, _c = self.peek()
            if kind == "op" and val == "^":
                self.take()
                e = pow_(e, self.int_exponent())
            else:
                return e

    def int_exponent(self) -> int:
        sign = 1
        kind, val, line, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1
            kind, val, line, col = self.peek()
        if kind != "num" or "." in val:
            what = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"integer exponent expected, found {what}", line, col)
        self.take()
        return sign * int(val)

    def atom(self) -> Expr:
        kind, val, line, col = self.take()
        if kind == "num":
            return Const(_num_to_fraction(val))
        if kind == "ident":
            nk, nv, _l, _c = self.peek()
            if nk == "op" and nv == "(":
                if val not in _FN_EVAL:
                    raise ParseError(f"unknown function {val!r}", line, col)
                self.take()
                arg = self.expr()
                self.expect_op(")")
                return fn_(val, arg)
            if val in self.params:
                return Const(self.params[val])
            if val in self.variables:
                return Var(val)
            raise ParseError(f"unknown name {val!r}", line, col)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a value, found {what}", line, col)


def parse_expr(
    text: str,
    variables: Sequence[str],
    params: Optional[Dict[str, Fraction]] = None,
) -> Expr:
    """Parse the infix grammar over the given coordinate names; identifiers in
    params are substituted as exact constants.  Raises ParseError with a
    line/column position on any malformed input."""
    return _Parser(_tokenize(text), variables, params or {}).parse()


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

def to_source(e: Expr) -> str:
    """Render in the infix grammar; parsing the result over the same variable
    set reproduces the tree exactly, because the string re-drives the smart
    constructors through the same normalizations."""
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Fn):
        return f"{e.kind}({to_source(e.arg)})"
    if isinstance(e, Pow):
        b = to_source(e.base)
        if not isinstance(e.base, (Var, Fn)):
            b = f"({b})"
        return f"{b}^{e.exp}"
    if isinstance(e, Recip):
        return "1/" + _recip_arg_str(e.arg)
    if isinstance(e, Prod):
        return _prod_str(e.factors)
    if isinstance(e, Sum):
        parts = [to_source(e.terms[0])]
        for t in e.terms[1:]:
            if _leading_sign_negative(t):
                sub = neg_(t)
                s = to_source(sub)
                # negating -1*(a + b) strips the product wrapper entirely
                if isinstance(sub, Sum):
                    s = f"({s})"
                parts.append(" - " + s)
            else:
                parts.append(" + " + to_source(t))
        return "".join(parts)
    raise TypeError(f"not an expression node: {e!r}")


def _leading_sign_negative(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    return (
        isinstance(e, Prod)
        and isinstance(e.factors[0], Const)
        and e.factors[0].value < 0
    )


def _recip_arg_str(a: Expr) -> str:
    # after a '/' the parser runs unary -> power, so Var/Fn/Pow need no parens
    s = to_source(a)
    return s if isinstance(a, (Var, Fn, Pow)) else f"({s})"


def _prod_str(factors: Tuple[Expr, ...]) -> str:
    out: List[str] = []
    for f in factors:
        if isinstance(f, Recip):
            piece = "/" + _recip_arg_str(f.arg)
            if not out:
                piece = "1" + piece
        else:
            s = to_source(f)
            if isinstance(f, Sum):
                s = f"({s})"
            piece = s if not out else "*" + s
        out.append(piece)
    return "".join(out)
