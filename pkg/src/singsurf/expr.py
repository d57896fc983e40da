"""Closed-form expressions in two variables with exact second-order jets.

Metric coefficients, boundary curves and seam identification maps all enter
as small formula strings ("4/(1+u^2+v^2)^2", "cos(2*pi*u)").  This module
parses them into an immutable AST and evaluates values together with first
and second partial derivatives by forward propagation of truncated Taylor
jets, so nothing downstream ever needs finite differences.

Grammar
-------
    sum     := product (('+'|'-') product)*
    product := unary (('*'|'/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := number | 'u' | 'v' | 'pi' | name '(' sum (',' sum)* ')' | '(' sum ')'

'^' binds tighter than unary minus, so -u^2 means -(u^2).  The unicode
spellings ×, ÷ and − are accepted as aliases for *, / and -.

Evaluation never lets a NaN or infinity escape: out-of-domain arguments
raise DomainError instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier

__all__ = ["Expr", "Jet2", "parse", "eval_jet2"]

_FUNCTION_ARITY = {
    "sin": 1, "cos": 1, "tan": 1, "exp": 1, "log": 1, "sqrt": 1,
    "sinh": 1, "cosh": 1, "atan2": 2, "abs": 1,
}

_CONSTANTS = {"pi": math.pi}

_VARIABLES = ("u", "v")


class Jet2:
    """Second-order jet: value and partials (f_u, f_v, f_uu, f_uv, f_vv).

    Arithmetic implements the product/quotient/chain rules truncated at
    order two, which is exactly what curvature formulas need.
    """

    __slots__ = ("f", "fu", "fv", "fuu", "fuv", "fvv")

    def __init__(self, f, fu=0.0, fv=0.0, fuu=0.0, fuv=0.0, fvv=0.0):
        self.f = f
        self.fu = fu
        self.fv = fv
        self.fuu = fuu
        self.fuv = fuv
        self.fvv = fvv

    @staticmethod
    def constant(x: float) -> "Jet2":
        return Jet2(float(x))

    @staticmethod
    def var_u(x: float) -> "Jet2":
        return Jet2(float(x), 1.0, 0.0)

    @staticmethod
    def var_v(x: float) -> "Jet2":
        return Jet2(float(x), 0.0, 1.0)

    def is_constant(self) -> bool:
        return self.fu == 0.0 and self.fv == 0.0 and \
            self.fuu == 0.0 and self.fuv == 0.0 and self.fvv == 0.0

    def __repr__(self):
        return (f"Jet2(f={self.f!r}, fu={self.fu!r}, fv={self.fv!r}, "
                f"fuu={self.fuu!r}, fuv={self.fuv!r}, fvv={self.fvv!r})")

    # -- ring operations ---------------------------------------------------

    def __add__(self, o):
        return Jet2(self.f + o.f, self.fu + o.fu, self.fv + o.fv,
                    self.fuu + o.fuu, self.fuv + o.fuv, self.fvv + o.fvv)

    def __sub__(self, o):
        return Jet2(self.f - o.f, self.fu - o.fu, self.fv - o.fv,
                    self.fuu - o.fuu, self.fuv - o.fuv, self.fvv - o.fvv)

    def __neg__(self):
        return Jet2(-self.f, -self.fu, -self.fv, -self.fuu, -self.fuv, -self.fvv)

    def __mul__(self, o):
        a, b = self, o
        return Jet2(
            a.f * b.f,
            a.fu * b.f + a.f * b.fu,
            a.fv * b.f + a.f * b.fv,
            a.fuu * b.f + 2.0 * a.fu * b.fu + a.f * b.fuu,
            a.fuv * b.f + a.fu * b.fv + a.fv * b.fu + a.f * b.fuv,
            a.fvv * b.f + 2.0 * a.fv * b.fv + a.f * b.fvv,
        )

    def __truediv__(self, o):
        if o.f == 0.0:
            raise DomainError("/", o.f)
        return self * _compose1(o, 1.0 / o.f, -1.0 / o.f ** 2, 2.0 / o.f ** 3)


def _compose1(x: Jet2, w: float, dw: float, ddw: float) -> Jet2:
    """Jet of h = phi(x) given phi(x.f) = w, phi' = dw, phi'' = ddw."""
    return Jet2(
        w,
        dw * x.fu,
        dw * x.fv,
        ddw * x.fu * x.fu + dw * x.fuu,
        ddw * x.fu * x.fv + dw * x.fuv,
        ddw * x.fv * x.fv + dw * x.fvv,
    )


def _compose2(x: Jet2, y: Jet2, w, wx, wy, wxx, wxy, wyy) -> Jet2:
    """Jet of h = phi(x, y) given the value and all partials of phi."""
    return Jet2(
        w,
        wx * x.fu + wy * y.fu,
        wx * x.fv + wy * y.fv,
        wxx * x.fu ** 2 + 2.0 * wxy * x.fu * y.fu + wyy * y.fu ** 2
        + wx * x.fuu + wy * y.fuu,
        wxx * x.fu * x.fv + wxy * (x.fu * y.fv + x.fv * y.fu)
        + wyy * y.fu * y.fv + wx * x.fuv + wy * y.fuv,
        wxx * x.fv ** 2 + 2.0 * wxy * x.fv * y.fv + wyy * y.fv ** 2
        + wx * x.fvv + wy * y.fvv,
    )


def _jet_sin(x):
    s, c = math.sin(x.f), math.cos(x.f)
    return _compose1(x, s, c, -s)


def _jet_cos(x):
    s, c = math.sin(x.f), math.cos(x.f)
    return _compose1(x, c, -s, -c)


def _jet_tan(x):
    c = math.cos(x.f)
    if c == 0.0:
        raise DomainError("tan", x.f)
    t = math.tan(x.f)
    sec2 = 1.0 + t * t
    return _compose1(x, t, sec2, 2.0 * t * sec2)


def _jet_exp(x):
    try:
        e = math.exp(x.f)
    except OverflowError:
        raise DomainError("exp", x.f) from None
    return _compose1(x, e, e, e)


def _jet_log(x):
    if x.f <= 0.0:
        raise DomainError("log", x.f)
    return _compose1(x, math.log(x.f), 1.0 / x.f, -1.0 / x.f ** 2)


def _jet_sqrt(x):
    if x.f <= 0.0:
        # the value would be fine at exactly 0 but the jet is singular there
        raise DomainError("sqrt", x.f)
    r = math.sqrt(x.f)
    return _compose1(x, r, 0.5 / r, -0.25 / (x.f * r))


def _jet_sinh(x):
    return _compose1(x, math.sinh(x.f), math.cosh(x.f), math.sinh(x.f))


def _jet_cosh(x):
    return _compose1(x, math.cosh(x.f), math.sinh(x.f), math.cosh(x.f))


def _jet_abs(x):
    # kink at 0 resolved by the convention sign(0) = 0
    s = 0.0 if x.f == 0.0 else math.copysign(1.0, x.f)
    return _compose1(x, abs(x.f), s, 0.0)


def _jet_atan2(y, x):
    r2 = x.f * x.f + y.f * y.f
    if r2 == 0.0:
        raise DomainError("atan2", (y.f, x.f))
    w = math.atan2(y.f, x.f)
    wy, wx = x.f / r2, -y.f / r2
    wyy = -2.0 * x.f * y.f / r2 ** 2
    wxx = 2.0 * x.f * y.f / r2 ** 2
    wxy = (y.f * y.f - x.f * x.f) / r2 ** 2
    return _compose2(y, x, w, wy, wx, wyy, wxy, wxx)


_JET_FUNCS = {
    "sin": _jet_sin, "cos": _jet_cos, "tan": _jet_tan, "exp": _jet_exp,
    "log": _jet_log, "sqrt": _jet_sqrt, "sinh": _jet_sinh, "cosh": _jet_cosh,
    "abs": _jet_abs, "atan2": _jet_atan2,
}


def _zero_base_coeff(c: float, k: int) -> float:
    """Derivative coefficient c*(c-1)*...*(c-k+1) * 0^(c-k), handling the
    base-zero corner exactly for nonnegative powers."""
    fall = 1.0
    for i in range(k):
        fall *= c - i
    if fall == 0.0:
        return 0.0
    if c - k > 0.0:
        return 0.0
    if c - k == 0.0:
        return fall
    raise DomainError("^", 0.0)


def _jet_pow(base: Jet2, expo: Jet2) -> Jet2:
    if expo.is_constant():
        c = expo.f
        b = base.f
        if b > 0.0:
            w = b ** c
            return _compose1(base, w, c * b ** (c - 1.0), c * (c - 1.0) * b ** (c - 2.0))
        if b < 0.0:
            n = round(c)
            if abs(c - n) > 1e-12:
                raise DomainError("^", b)
            w = b ** n
            d = 0.0 if n == 0 else n * b ** (n - 1)
            dd = 0.0 if n in (0, 1) else n * (n - 1) * b ** (n - 2)
            return _compose1(base, w, d, dd)
        # base == 0
        if c <= 0.0:
            raise DomainError("^", 0.0)
        return _compose1(base, 0.0 if c > 0 else 1.0,
                         _zero_base_coeff(c, 1), _zero_base_coeff(c, 2))
    if base.f <= 0.0:
        raise DomainError("^", base.f)
    return _jet_exp(expo * _jet_log(base))


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    """Base class for expression nodes. Instances are immutable and
    comparable, so round-tripping through to_source() can be checked for
    exact tree equality."""

    def eval(self, u: float, v: float = 0.0) -> float:
        val = self._eval(float(u), float(v))
        if not math.isfinite(val):
            raise DomainError("eval", val)
        return val

    def jet(self, u: float, v: float = 0.0) -> Jet2:
        j = self._jet(Jet2.var_u(u), Jet2.var_v(v))
        for c in (j.f, j.fu, j.fv, j.fuu, j.fuv, j.fvv):
            if not math.isfinite(c):
                raise DomainError("jet", c)
        return j

    def variables(self) -> set:
        out = set()
        self._collect_vars(out)
        return out

    def to_source(self) -> str:
        return self._render()

    def __str__(self):
        return self._render()

    # subclass hooks
    def _eval(self, u, v):  # pragma: no cover - abstract
        raise NotImplementedError

    def _jet(self, ju, jv):  # pragma: no cover - abstract
        raise NotImplementedError

    def _collect_vars(self, out):
        pass

    def _prec(self) -> int:
        return 9

    def _render(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def _eval(self, u, v):
        return self.value

    def _jet(self, ju, jv):
        return Jet2.constant(self.value)

    def _render(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def _eval(self, u, v):
        return u if self.name == "u" else v

    def _jet(self, ju, jv):
        return ju if self.name == "u" else jv

    def _collect_vars(self, out):
        out.add(self.name)

    def _render(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def _eval(self, u, v):
        return -self.arg._eval(u, v)

    def _jet(self, ju, jv):
        return -self.arg._jet(ju, jv)

    def _collect_vars(self, out):
        self.arg._collect_vars(out)

    def _prec(self):
        return 2

    def _render(self):
        inner = self.arg._render()
        # keep the tree unambiguous: -(a*b) must not reparse as (-a)*b
        if self.arg._prec() <= 2 and not isinstance(self.arg, Neg):
            inner = f"({inner})"
        elif isinstance(self.arg, Neg):
            inner = f"({inner})"
        return "-" + inner


_BIN_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def _eval(self, u, v):
        a = self.left._eval(u, v)
        b = self.right._eval(u, v)
        op = self.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise DomainError("/", b)
            return a / b
        # power
        if a > 0.0:
            try:
                return a ** b
            except OverflowError:
                raise DomainError("^", a) from None
        if a == 0.0:
            if b <= 0.0:
                raise DomainError("^", a)
            return 0.0
        n = round(b)
        if abs(b - n) > 1e-12:
            raise DomainError("^", a)
        return a ** n

    def _jet(self, ju, jv):
        a = self.left._jet(ju, jv)
        b = self.right._jet(ju, jv)
        op = self.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a / b
        return _jet_pow(a, b)

    def _collect_vars(self, out):
        self.left._collect_vars(out)
        self.right._collect_vars(out)

    def _prec(self):
        return _BIN_PREC[self.op]

    def _render(self):
        p = self._prec()
        lhs = self.left._render()
        rhs = self.right._render()
        if self.op == "^":
            if self.left._prec() <= p:
                lhs = f"({lhs})"
            if self.right._prec() < p:
                rhs = f"({rhs})"
            return f"{lhs}^{rhs}"
        if self.left._prec() < p:
            lhs = f"({lhs})"
        if self.right._prec() <= p:
            rhs = f"({rhs})"
        if p == 1:
            return f"{lhs} {self.op} {rhs}"
        return f"{lhs}{self.op}{rhs}"


_EVAL_FUNCS = {
    "sin": math.sin, "cos": math.cos, "sinh": math.sinh, "cosh": math.cosh,
    "exp": math.exp, "abs": abs,
}


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    args: tuple

    def _eval(self, u, v):
        vals = [a._eval(u, v) for a in self.args]
        fn = self.fn
        if fn == "log":
            if vals[0] <= 0.0:
                raise DomainError("log", vals[0])
            return math.log(vals[0])
        if fn == "sqrt":
            if vals[0] < 0.0:
                raise DomainError("sqrt", vals[0])
            return math.sqrt(vals[0])
        if fn == "tan":
            if math.cos(vals[0]) == 0.0:
                raise DomainError("tan", vals[0])
            return math.tan(vals[0])
        if fn == "atan2":
            if vals[0] == 0.0 and vals[1] == 0.0:
                raise DomainError("atan2", (0.0, 0.0))
            return math.atan2(vals[0], vals[1])
        try:
            return _EVAL_FUNCS[fn](vals[0])
        except OverflowError:
            raise DomainError(fn, vals[0]) from None

    def _jet(self, ju, jv):
        jets = [a._jet(ju, jv) for a in self.args]
        return _JET_FUNCS[self.fn](*jets)

    def _collect_vars(self, out):
        for a in self.args:
            a._collect_vars(out)

    def _render(self):
        return f"{self.fn}(" + ", ".join(a._render() for a in self.args) + ")"


# -- tokenizer / parser -------------------------------------------------------

_ALIASES = str.maketrans({"×": "*", "÷": "/", "−": "-"})


def _tokenize(src: str):
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                if src[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    while k < n and src[k].isdigit():
                        k += 1
                    j = k
            text = src[i:j]
            try:
                value = float(text)
            except ValueError:
                raise ExprSyntaxError(f"bad number literal '{text}'", i) from None
            tokens.append(("num", value, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected '{kind}', found {tok[1]!r}", tok[2])
        return self.advance()

    def parse(self) -> Expr:
        e = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            e = BinOp(op, e, self.product())
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        kind, text, pos = tok
        if kind == "num":
            self.advance()
            return Num(text)
        if kind == "(":
            self.advance()
            e = self.sum()
            self.expect(")")
            return e
        if kind == "name":
            self.advance()
            if self.peek()[0] == "(":
                if text not in _FUNCTION_ARITY:
                    raise UnknownIdentifier(text, pos)
                self.advance()
                args = [self.sum()]
                while self.peek()[0] == ",":
                    self.advance()
                    args.append(self.sum())
                self.expect(")")
                want = _FUNCTION_ARITY[text]
                if len(args) != want:
                    raise ExprSyntaxError(
                        f"{text}() takes {want} argument(s), got {len(args)}", pos)
                return Call(text, tuple(args))
            if text in _VARIABLES:
                return Var(text)
            if text in _CONSTANTS:
                return Num(_CONSTANTS[text])
            raise UnknownIdentifier(text, pos)
        raise ExprSyntaxError(f"expected a value, found {text!r}", pos)


def parse(src: str) -> Expr:
    """Parse a formula string into an Expr tree.

    Raises ExprSyntaxError or UnknownIdentifier with the character offset of
    the problem.
    """
    return _Parser(src.translate(_ALIASES)).parse()


def eval_jet2(e: Expr, u: float, v: float = 0.0) -> Jet2:
    """Value and first/second partials of e at (u, v)."""
    return e.jet(u, v)
