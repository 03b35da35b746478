"""Sparse homogeneous polynomials with exact rational coefficients.

A :class:`Form` is a homogeneous polynomial in a fixed number of variables
``x0, ..., x{n-1}``.  Terms are stored in a dict mapping exponent tuples to
nonzero rationals; the zero form has no terms and is compatible with every
degree when adding.  Terms are ordered graded-lexicographically whenever an
ordering is observable (printing, serialization, iteration).

Example::

    >>> from cremona.poly import parse_form
    >>> f = parse_form("x1*x2 - x3^2", nvars=4)
    >>> f(["1", 1, 1, 0])
    Fraction(1, 1)
"""

from __future__ import annotations

import ast
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Exps = tuple  # tuple[int, ...]


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def qstr(x: Fraction) -> str:
    """Fraction as a ``"p/q"`` string (denominator always written)."""
    return f"{x.numerator}/{x.denominator}"


def grlex_key(e: Exps):
    return (sum(e), e)


def monomials(nvars: int, degree: int) -> list[Exps]:
    """All exponent vectors of total ``degree`` in ``nvars`` variables, grlex descending."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


class Form:
    """Homogeneous polynomial of fixed degree in ``nvars`` variables."""

    __slots__ = ("nvars", "degree", "terms", "_hash")

    def __init__(self, nvars: int, degree: int, terms: Mapping[Exps, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent vector {e} has wrong length for {nvars} variables")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            if sum(e) != degree:
                raise ValueError(f"term {e} is not of degree {degree}")
            c = Q(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.nvars = nvars
        self.degree = degree
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, degree: int, terms: dict) -> "Form":
        # trusted constructor: terms already canonical
        f = object.__new__(cls)
        f.nvars = nvars
        f.degree = degree
        f.terms = terms
        f._hash = None
        return f

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int = 0) -> "Form":
        return cls._raw(nvars, degree, {})

    @classmethod
    def const(cls, c, nvars: int) -> "Form":
        c = Q(c)
        return cls._raw(nvars, 0, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Form":
        if not 0 <= i < nvars:
            raise IndexError(f"variable x{i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, 1, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Form":
        exps = tuple(exps)
        return cls(len(exps), sum(exps), {exps: coeff})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Form":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Q(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(n, 1, terms)

    # -- basic protocol -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[Exps, Fraction]]:
        """Terms in grlex-descending order."""
        return sorted(self.terms.items(), reverse=True)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def leading_term(self) -> tuple[Exps, Fraction]:
        if not self.terms:
            raise ValueError("zero form has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            if self.nvars != other.nvars:
                return False
            if not self.terms and not other.terms:
                return True
            return self.degree == other.degree and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.degree == 0 and self.terms == {(0,) * self.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            deg = self.degree if self.terms else -1
            self._hash = hash((self.nvars, deg, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Form({self.nvars}, {self.degree}, {self!s})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                f"{var}{i}" if k == 1 else f"{var}{i}^{k}" for i, k in enumerate(e) if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    # -- arithmetic ---------------------------------------------------

    def _check_nvars(self, other: "Form") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Form.const(other, self.nvars)
        if not isinstance(other, Form):
            return NotImplemented
        self._check_nvars(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch in addition: {self.degree} vs {other.degree}")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v += c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return Form._raw(self.nvars, self.degree, terms)

    __radd__ = __add__

    def __neg__(self) -> "Form":
        return Form._raw(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Form.const(other, self.nvars)
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Form":
        c = Q(c)
        if not c:
            return Form.zero(self.nvars, self.degree)
        return Form._raw(self.nvars, self.degree, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, str)):
            return self.scale(other)
        if not isinstance(other, Form):
            return NotImplemented
        self._check_nvars(other)
        degree = self.degree + other.degree
        if not self.terms or not other.terms:
            return Form.zero(self.nvars, degree)
        a, da = _integer_terms(self.terms)
        b, db = _integer_terms(other.terms)
        if len(a) < len(b):
            a, b = b, a
        # exponent vectors packed into one integer in base degree+1 add without carries
        base = degree + 1
        pa = [(_pack(e, base), c) for e, c in a.items()]
        packed: dict = {}
        get = packed.get
        for eb, cb in b.items():
            kb = _pack(eb, base)
            for ka, ca in pa:
                k = ka + kb
                packed[k] = get(k, 0) + ca * cb
        terms = {_unpack(k, base, self.nvars): v for k, v in packed.items()}
        return Form._raw(self.nvars, degree, _from_integer_terms(terms, da * db))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, str)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Form":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Form.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- evaluation and substitution ----------------------------------

    def __call__(self, pt: Sequence) -> Fraction:
        return self.evaluate(pt)

    def evaluate(self, pt: Sequence) -> Fraction:
        if len(pt) != self.nvars:
            raise ValueError(f"point has {len(pt)} coordinates, form has {self.nvars} variables")
        vals = [Q(v) for v in pt]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
                    if not t:
                        break
            total += t
        return total

    def substitute(self, images: Sequence["Form"], _cache: dict | None = None) -> "Form":
        """Replace ``x_i`` by ``images[i]``; images share one degree and variable count."""
        return substitute_all([self], images, _cache)[0]

    def exact_div(self, other: "Form") -> "Form":
        """Exact quotient; raises ``ValueError`` if ``other`` does not divide ``self``."""
        from .gcd import exact_div

        self._check_nvars(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero form")
        q = exact_div(self.terms, other.terms)
        return Form._raw(self.nvars, self.degree - other.degree if self.terms else 0, q)

    def divides(self, other: "Form") -> bool:
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    def layers(self, i: int) -> dict[int, "Form"]:
        """Split as ``sum x_i^k * L_k``; each ``L_k`` is free of ``x_i`` (same nvars)."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(k, {})[e2] = c
        return {k: Form._raw(self.nvars, self.degree - k, t) for k, t in sorted(out.items())}

    def drop_var(self, i: int) -> "Form":
        """Delete variable ``x_i``, which must not occur."""
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                raise ValueError(f"x{i} occurs in {self}")
            terms[e[:i] + e[i + 1 :]] = c
        return Form._raw(self.nvars - 1, self.degree, terms)

    def embed(self, nvars: int, positions: Sequence[int]) -> "Form":
        """Rename ``x_k`` to ``x_{positions[k]}`` inside a ring of ``nvars`` variables."""
        if len(positions) != self.nvars:
            raise ValueError("one target position per variable required")
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for k, p in zip(e, positions):
                e2[p] += k
            terms[tuple(e2)] = c
        return Form._raw(nvars, self.degree, terms)

    def linear_coeffs(self) -> list[Fraction]:
        if self.terms and self.degree != 1:
            raise ValueError("not a linear form")
        out = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            out[e.index(1)] = c
        return out


def substitute_all(forms: Sequence[Form], images: Sequence[Form], cache: dict | None = None) -> list[Form]:
    """Substitute ``images`` into every form, sharing the power cache between forms."""
    if not forms:
        return []
    n = forms[0].nvars
    if len(images) != n:
        raise ValueError(f"need {n} images, got {len(images)}")
    nz = [g for g in images if g.terms]
    if not nz and not images:
        raise ValueError("empty image tuple")
    m = images[0].nvars
    e_deg = nz[0].degree if nz else 0
    for g in images:
        if g.nvars != m:
            raise ValueError("images must share a variable count")
        if g.terms and g.degree != e_deg:
            raise ValueError("images must share a degree")
    powers = cache if cache is not None else {}

    def power(i: int, k: int) -> Form:
        key = (i, k)
        p = powers.get(key)
        if p is None:
            if k == 0:
                p = Form.const(1, m)
            elif k == 1:
                p = images[i]
            else:
                p = power(i, k // 2) * power(i, k - k // 2)
            powers[key] = p
        return p

    # memoize partial products over exponent prefixes
    prefix: dict = {}

    def mono(e: Exps) -> Form:
        p = prefix.get(e)
        if p is not None:
            return p
        last = max((i for i, k in enumerate(e) if k), default=-1)
        if last < 0:
            p = Form.const(1, m)
        else:
            rest = e[:last] + (0,) * (len(e) - last)
            if any(rest):
                p = mono(rest) * power(last, e[last])
            else:
                p = power(last, e[last])
        prefix[e] = p
        return p

    out = []
    for f in forms:
        if f.nvars != n:
            raise ValueError("forms must share a variable count")
        deg = f.degree * e_deg
        fc, fden = _integer_terms(f.terms)
        acc: dict = {}
        get = acc.get
        den = 1
        for e, c in fc.items():
            mc, mden = _integer_terms(mono(e).terms)
            if mden != den:
                # bring the accumulator and this monomial to a common denominator
                l = den * mden // gcd(den, mden)
                if l != den:
                    k = l // den
                    acc = {key: v * k for key, v in acc.items()}
                    get = acc.get
                k2 = l // mden
                den = l
            else:
                k2 = 1
            ck = c * k2
            for e2, c2 in mc.items():
                acc[e2] = get(e2, 0) + ck * c2
        out.append(Form._raw(m, deg, _from_integer_terms(acc, den * fden)))
    return out


def _pack(e: Exps, base: int) -> int:
    k = 0
    for x in reversed(e):
        k = k * base + x
    return k


def _unpack(k: int, base: int, n: int) -> Exps:
    out = []
    for _ in range(n):
        k, x = divmod(k, base)
        out.append(x)
    return tuple(out)


def _integer_terms(terms: dict) -> tuple[dict, int]:
    """Numerators over a common denominator; plain ints multiply much faster than Fractions."""
    den = 1
    for c in terms.values():
        q = c.denominator
        if q != 1 and den % q:
            den = den * q // gcd(den, q)
    if den == 1:
        return {e: c.numerator for e, c in terms.items()}, 1
    return {e: c.numerator * (den // c.denominator) for e, c in terms.items()}, den


def _from_integer_terms(terms: dict, den: int) -> dict:
    if den == 1:
        return {e: Fraction(v) for e, v in terms.items() if v}
    return {e: Fraction(v, den) for e, v in terms.items() if v}


def check_tuple(forms: Sequence[Form]) -> tuple[Form, ...]:
    """Validate a form tuple: shared variable count and degree, not all zero."""
    forms = tuple(forms)
    if not forms:
        raise ValueError("empty form tuple")
    n = forms[0].nvars
    nz = [f for f in forms if f.terms]
    if not nz:
        raise ValueError("form tuple is identically zero")
    d = nz[0].degree
    for f in forms:
        if f.nvars != n:
            raise ValueError("forms in a tuple must share a variable count")
        if f.terms and f.degree != d:
            raise ValueError("forms in a tuple must share a degree")
    return tuple(f if f.terms or f.degree == d else Form.zero(n, d) for f in forms)


def tuple_degree(forms: Sequence[Form]) -> int:
    for f in forms:
        if f.terms:
            return f.degree
    return forms[0].degree


def linear_forms(matrix: Sequence[Sequence]) -> list[Form]:
    """Rows of a matrix as linear forms: ``y_i = sum_j M[i][j] x_j``."""
    return [Form.linear(row) for row in matrix]


def variables(nvars: int) -> list[Form]:
    return [Form.var(i, nvars) for i in range(nvars)]


# -- a tiny expression parser (tests and hand-written CLI input) -----------

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_form(text: str, nvars: int, var: str = "x") -> Form:
    """Parse ``"x0*x1 - 2*x2^2"`` style input; variables are ``x0..x{nvars-1}``."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith(var) and name[len(var):].isdigit():
                return Form.var(int(name[len(var):]), nvars)
            raise ValueError(f"unknown variable {name!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return _lift(a, nvars) + _lift(b, nvars) if isinstance(a, Form) or isinstance(b, Form) else a + b
            if isinstance(node.op, ast.Sub):
                return _lift(a, nvars) - _lift(b, nvars) if isinstance(a, Form) or isinstance(b, Form) else a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(b, Form):
                    raise ValueError("division by a polynomial")
                return a * (1 / b) if isinstance(a, Form) else a / b
            if isinstance(node.op, ast.Pow):
                if isinstance(b, Form) or b.denominator != 1:
                    raise ValueError("exponent must be an integer")
                return a ** int(b)
        raise ValueError(f"unsupported syntax in {text!r}")

    out = walk(tree)
    return _lift(out, nvars)


def _lift(v, nvars: int) -> Form:
    return v if isinstance(v, Form) else Form.const(v, nvars)


def forms_from(texts: Iterable[str], nvars: int) -> list[Form]:
    return [parse_form(t, nvars) for t in texts]


def form_gcd(a: Form, b: Form) -> Form:
    """Monic GCD of two forms (the zero form is the identity element)."""
    from .gcd import gcd

    a._check_nvars(b)
    if not a.terms and not b.terms:
        raise ValueError("gcd of two zero forms is undefined")
    g = gcd(a.terms, b.terms)
    deg = sum(next(iter(g)))
    return Form._raw(a.nvars, deg, g)


def tuple_gcd(forms: Sequence[Form]) -> Form:
    g = None
    for f in forms:
        if not f.terms:
            continue
        g = f.scale(1 / f.leading_term()[1]) if g is None else form_gcd(g, f)
        if g.degree == 0:
            break
    if g is None:
        raise ValueError("gcd of an all-zero tuple")
    return g


def coprime(a: Form, b: Form) -> bool:
    """True iff ``a`` and ``b`` share no nonconstant factor."""
    if not a.terms or not b.terms:
        raise ValueError("coprimality is undefined for the zero form")
    return form_gcd(a, b).degree == 0


def remove_common_factor(forms: Sequence[Form]) -> tuple[tuple[Form, ...], Form]:
    """Divide a tuple by the GCD of its entries; returns ``(reduced, gcd)``."""
    g = tuple_gcd(forms)
    return tuple(f.exact_div(g) if f.terms else Form.zero(f.nvars, f.degree - g.degree) for f in forms), g
