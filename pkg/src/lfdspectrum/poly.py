"""Sparse exact multivariate polynomials over Q.

Monomials are packed into a single int, 8 bits per variable, so a
monomial product is one integer addition and dict keys stay cheap to
hash.  Comparing packed keys as plain ints is itself a valid monomial
order (translation invariant, 1 is minimal), which is all exact
division needs; grevlex is unpacked only for display, parsing, and
leading-term queries.

The packing imposes a hard total-degree cap of 255.  Degrees in scope
here equal the ambient dimension (a couple dozen at most), but every
product checks the cap rather than silently wrapping lanes.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import (
    ExactDivisionError,
    NotHomogeneous,
    PolyParseError,
    ResourceCapExceeded,
)
from .rational import Q, QONE, QZERO, rat, rat_str

_BITS = 8
_MASK = 0xFF
MAX_TOTAL_DEGREE = 255


def _pack(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= e << (_BITS * i)
    return key


def _unpack(key: int, nvars: int) -> tuple:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


def _acc(d: dict, k: int, v) -> None:
    # accumulate coefficient, dropping exact zeros immediately
    cur = d.get(k)
    if cur is None:
        if v:
            d[k] = v
    else:
        cur = cur + v
        if cur:
            d[k] = cur
        else:
            del d[k]


def _grevlex_sort_key(exps):
    # tuples sort descending-grevlex when this key is used with reverse=True
    return (sum(exps), tuple(-e for e in reversed(exps)))


class SparsePoly:
    __slots__ = ("nvars", "terms", "_deg")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {k: c for k, c in terms.items() if c} if terms else {}
        self._deg = None

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePoly":
        return cls(nvars, {0: rat(value)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} vars")
        return cls(nvars, {1 << (_BITS * i): QONE})

    @classmethod
    def from_terms(cls, nvars: int, items) -> "SparsePoly":
        """Build from (exponent_tuple, coefficient) pairs; repeats accumulate."""
        terms: dict = {}
        for exps, value in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if sum(exps) > MAX_TOTAL_DEGREE:
                raise ResourceCapExceeded(
                    f"total degree {sum(exps)} exceeds the packing cap {MAX_TOTAL_DEGREE}"
                )
            _acc(terms, _pack(exps), rat(value))
        return cls(nvars, terms)

    # -- basic queries -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._deg is None:
            if not self.terms:
                self._deg = -1
            else:
                mask, bits = _MASK, _BITS
                best = 0
                for k in self.terms:
                    s = 0
                    while k:
                        s += k & mask
                        k >>= bits
                    if s > best:
                        best = s
                self._deg = best
        return self._deg

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(_unpack(k, self.nvars)) for k in self.terms}
        return len(degs) == 1

    def hom_degree(self) -> int:
        if not self.is_homogeneous():
            raise NotHomogeneous(f"polynomial is not homogeneous: {self!r}")
        return self.degree()

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        if not self.terms:
            return QZERO
        if self.is_constant():
            return self.terms[0]
        raise ValueError("not a constant polynomial")

    def coeff(self, exps):
        return self.terms.get(_pack(exps), QZERO)

    def vars_used(self) -> set:
        used = set()
        for k in self.terms:
            i = 0
            while k:
                if k & _MASK:
                    used.add(i)
                k >>= _BITS
                i += 1
        return used

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        text = emit(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"<SparsePoly n={self.nvars} deg={self.degree()} {text}>"

    # -- arithmetic ---------------------------------------------------

    def _check_same(self, other):
        if self.nvars != other.nvars:
            raise ValueError(f"mixed variable counts {self.nvars} vs {other.nvars}")

    def __add__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return SparsePoly(self.nvars, out)

    def __sub__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, -c)
        return SparsePoly(self.nvars, out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def scale(self, value) -> "SparsePoly":
        value = rat(value)
        if not value:
            return SparsePoly.zero(self.nvars)
        return SparsePoly(self.nvars, {k: c * value for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SparsePoly):
            self._check_same(other)
            if not self.terms or not other.terms:
                return SparsePoly.zero(self.nvars)
            if self.degree() + other.degree() > MAX_TOTAL_DEGREE:
                raise ResourceCapExceeded(
                    f"product degree {self.degree() + other.degree()} exceeds "
                    f"the packing cap {MAX_TOTAL_DEGREE}"
                )
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            out: dict = {}
            for k1, c1 in a.items():
                for k2, c2 in b.items():
                    _acc(out, k1 + k2, c1 * c2)
            return SparsePoly(self.nvars, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, exponent: int) -> "SparsePoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = SparsePoly.constant(self.nvars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def mul_var(self, i: int, e: int = 1) -> "SparsePoly":
        """Multiply by x_i^e (a key shift, no coefficient work)."""
        if self.degree() + e > MAX_TOTAL_DEGREE:
            raise ResourceCapExceeded("degree packing cap exceeded")
        shift = e << (_BITS * i)
        return SparsePoly(self.nvars, {k + shift: c for k, c in self.terms.items()})

    # -- calculus and substitution -------------------------------------

    def partial(self, i: int) -> "SparsePoly":
        shift = _BITS * i
        out = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                out[k - (1 << shift)] = c * e
        return SparsePoly(self.nvars, out)

    def gradient(self) -> list:
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point):
        """Exact value at a rational point (sequence of length nvars)."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong length")
        vals = [rat(v) for v in point]
        zero_mask = 0
        for i, v in enumerate(vals):
            if not v:
                zero_mask |= _MASK << (_BITS * i)
        powers = [[QONE] for _ in range(self.nvars)]
        total = QZERO
        for k, c in self.terms.items():
            if k & zero_mask:
                continue
            acc = c
            i = 0
            while k:
                e = k & _MASK
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * vals[i])
                    acc = acc * cache[e]
                k >>= _BITS
                i += 1
            total = total + acc
        return total

    def compose(self, subs) -> "SparsePoly":
        """Substitute polynomials for the variables.

        All entries of subs must share a variable count; that becomes the
        variable count of the result.  Cost grows quickly, callers keep
        this to small instances.
        """
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        m = subs[0].nvars
        for s in subs:
            if s.nvars != m:
                raise ValueError("substitutions disagree on variable count")
        caches = [{0: SparsePoly.constant(m, 1)} for _ in range(self.nvars)]

        def power(i, e):
            cache = caches[i]
            if e not in cache:
                best = max(x for x in cache if x <= e)
                cur = cache[best]
                while best < e:
                    cur = cur * subs[i]
                    best += 1
                    cache[best] = cur
            return cache[e]

        total = SparsePoly.zero(m)
        for k, c in self.terms.items():
            prod = SparsePoly.constant(m, c)
            i = 0
            while k:
                e = k & _MASK
                if e:
                    prod = prod * power(i, e)
                k >>= _BITS
                i += 1
            total = total + prod
        return total

    def subst_var_scaled(self, a: int, gamma, q: int):
        """Substitute x_a -> gamma*x_q, also returning the difference quotient.

        Returns (s, k) with  self = s + (x_a - gamma*x_q) * k  exactly,
        using per-monomial telescoping
        x_a^e = (g x_q)^e + (x_a - g x_q) * sum_{s<e} x_a^s (g x_q)^{e-1-s}.
        """
        if a == q:
            raise ValueError("substituted and replacement variable coincide")
        gamma = rat(gamma)
        sh_a = _BITS * a
        sh_q = _BITS * q
        gpow = [QONE]
        new_terms: dict = {}
        quot: dict = {}
        for k, c in self.terms.items():
            e = (k >> sh_a) & _MASK
            if e == 0:
                _acc(new_terms, k, c)
                continue
            while len(gpow) <= e:
                gpow.append(gpow[-1] * gamma)
            base = k - (e << sh_a)
            if gamma:
                _acc(new_terms, base + (e << sh_q), c * gpow[e])
            for s in range(e):
                coeff = c * gpow[e - 1 - s]
                if coeff:
                    _acc(quot, base + (s << sh_a) + ((e - 1 - s) << sh_q), coeff)
        return SparsePoly(self.nvars, new_terms), SparsePoly(self.nvars, quot)

    # -- ordering-aware views ------------------------------------------

    def terms_grevlex(self) -> list:
        """Terms as (exponent_tuple, coeff), descending grevlex."""
        items = [(_unpack(k, self.nvars), c) for k, c in self.terms.items()]
        items.sort(key=lambda t: _grevlex_sort_key(t[0]), reverse=True)
        return items

    def leading_grevlex(self):
        """(exponent_tuple, coeff) of the grevlex-leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        best_key = max(self.terms, key=lambda k: _grevlex_sort_key(_unpack(k, self.nvars)))
        return _unpack(best_key, self.nvars), self.terms[best_key]


def linear_form(nvars: int, coeffs) -> SparsePoly:
    coeffs = list(coeffs)
    if len(coeffs) != nvars:
        raise ValueError("coefficient vector has wrong length")
    terms = {}
    for i, c in enumerate(coeffs):
        c = rat(c)
        if c:
            terms[1 << (_BITS * i)] = c
    return SparsePoly(nvars, terms)


def poly_arith(a: SparsePoly, b, op: str) -> SparsePoly:
    """Named arithmetic dispatch: op in {add, sub, mul, scale}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def apply_derivation(A, p: SparsePoly) -> SparsePoly:
    """Apply the vector field whose coefficient of d/dx_j is row j of A
    dotted with the coordinate vector: xi(p) = sum_j (A x)_j dp/dx_j.

    A may be a RationalMatrix or any sequence of coefficient rows.
    """
    rows = getattr(A, "entries", A)
    n = p.nvars
    if len(rows) != n:
        raise ValueError("matrix size does not match variable count")
    acc: dict = {}
    for j in range(n):
        dj = p.partial(j)
        if dj.is_zero():
            continue
        row = rows[j]
        for kv in range(n):
            cjk = row[kv]
            if not cjk:
                continue
            shift = 1 << (_BITS * kv)
            for k, c in dj.terms.items():
                _acc(acc, k + shift, c * cjk)
    return SparsePoly(n, acc)


def exact_divide(p: SparsePoly, d: SparsePoly) -> SparsePoly:
    """Quotient p/d when division is exact; ExactDivisionError otherwise.

    Leading-term reduction in the packed-key order.  If p = q*d the
    reduction must succeed step by step under any monomial order, so a
    non-divisible leading term is proof of a remainder.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return SparsePoly.zero(p.nvars)
    p._check_same(d)
    nvars = p.nvars
    dk = max(d.terms)
    dc = d.terms[dk]
    dexp = _unpack(dk, nvars)
    dterms = list(d.terms.items())
    rem = dict(p.terms)
    quo: dict = {}
    while rem:
        lk = max(rem)
        lexp = _unpack(lk, nvars)
        if any(le < de for le, de in zip(lexp, dexp)):
            raise ExactDivisionError("division is not exact")
        qk = lk - dk
        qc = rem[lk] / dc
        quo[qk] = qc
        for tk, tc in dterms:
            _acc(rem, qk + tk, -(qc * tc))
    return SparsePoly(nvars, quo)


# -- text format ------------------------------------------------------
#
# Canonical emission: terms in descending grevlex, each rendered as
# coefficient-magnitude "*" variable factors "x<i>^<e>" (1-based, zero
# exponents omitted, exponent always written).  Signs live in the
# separators " + " / " - ", with a bare leading "-" for a negative
# first term.  The zero polynomial is "0".  parse() accepts terms in
# any order and merges repeats, but is strict about term syntax, so
# emit(parse(s)) == s exactly on canonical strings.


@lru_cache(maxsize=8)
def _factor_re(prefix: str):
    return re.compile(rf"^{re.escape(prefix)}([1-9]\d*)\^([1-9]\d*)$")


_COEFF_RE = re.compile(r"^\d+(?:/[1-9]\d*)?$")


def emit(p: SparsePoly, var_prefix: str = "x") -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for exps, c in p.terms_grevlex():
        mag = c if c > 0 else -c
        factors = [rat_str(mag)]
        for i, e in enumerate(exps):
            if e:
                factors.append(f"{var_prefix}{i + 1}^{e}")
        body = "*".join(factors)
        if not chunks:
            chunks.append(body if c > 0 else "-" + body)
        else:
            chunks.append((" + " if c > 0 else " - ") + body)
    return "".join(chunks)


def parse(text: str, nvars: int, var_prefix: str = "x") -> SparsePoly:
    s = text.strip()
    if not s:
        raise PolyParseError("empty polynomial text")
    if s == "0":
        return SparsePoly.zero(nvars)
    sign0 = 1
    if s.startswith("-"):
        sign0 = -1
        s = s[1:]
    pieces = re.split(r" ([+-]) ", s)
    if not pieces or any(not piece for piece in pieces):
        raise PolyParseError(f"malformed polynomial text: {text!r}")
    factor_re = _factor_re(var_prefix)
    items = []
    sign = sign0
    for idx, piece in enumerate(pieces):
        if idx % 2 == 1:
            sign = 1 if piece == "+" else -1
            continue
        parts = piece.split("*")
        if not _COEFF_RE.match(parts[0]):
            raise PolyParseError(f"bad coefficient {parts[0]!r} in {text!r}")
        coeff = rat(parts[0]) * sign
        if not coeff:
            raise PolyParseError(f"zero coefficient term in {text!r}")
        exps = [0] * nvars
        for factor in parts[1:]:
            m = factor_re.match(factor)
            if not m:
                raise PolyParseError(f"bad factor {factor!r} in {text!r}")
            vi = int(m.group(1)) - 1
            if vi >= nvars:
                raise PolyParseError(
                    f"variable {factor!r} out of range (nvars={nvars})"
                )
            exps[vi] += int(m.group(2))
        items.append((tuple(exps), coeff))
    try:
        return SparsePoly.from_terms(nvars, items)
    except ValueError as exc:
        raise PolyParseError(str(exc)) from exc


# -- univariate utilities ---------------------------------------------


def uni_from_coeffs(coeffs) -> SparsePoly:
    """Univariate polynomial from ascending coefficients."""
    return SparsePoly(1, {i: rat(c) for i, c in enumerate(coeffs) if rat(c)})


def uni_coeffs(p: SparsePoly) -> list:
    if p.nvars != 1:
        raise ValueError("not univariate")
    if p.is_zero():
        return [QZERO]
    d = max(p.terms)
    return [p.terms.get(i, QZERO) for i in range(d + 1)]


def _uni_gcd(a: list, b: list) -> list:
    """Monic gcd of ascending coefficient lists (Euclid over Q)."""

    def trim(c):
        while len(c) > 1 and not c[-1]:
            c.pop()
        return c

    a, b = trim(list(a)), trim(list(b))
    while len(b) > 1 or b[0]:
        # remainder of a modulo b
        r = list(a)
        while len(r) >= len(b) and (len(r) > 1 or r[0]):
            if not r[-1]:
                r.pop()
                continue
            shift = len(r) - len(b)
            factor = r[-1] / b[-1]
            for i in range(len(b)):
                r[shift + i] = r[shift + i] - factor * b[i]
            r.pop()
            if not r:
                r = [QZERO]
        a, b = b, trim(r)
    lead = a[-1]
    return [c / lead for c in a] if (len(a) > 1 or a[0]) else a


def squarefree_test(p: SparsePoly) -> bool:
    """Exact squarefreeness over Q.

    A repeated factor divides every partial derivative, so p is
    squarefree iff gcd(p, dp/dx_1, ..., dp/dx_n) is constant.  The
    univariate case uses the local Euclid; multivariate gcds are
    delegated to sympy's exact routines.
    """
    if p.is_zero():
        raise ValueError("squarefreeness of the zero polynomial is undefined")
    if p.degree() == 0:
        return True
    used = sorted(p.vars_used())
    if len(used) == 1:
        v = used[0]
        shift = _BITS * v
        uni = SparsePoly(1, {(k >> shift) & _MASK: c for k, c in p.terms.items()})
        g = _uni_gcd(uni_coeffs(uni), uni_coeffs(uni.partial(0)))
        return len(g) == 1

    import sympy

    gens = sympy.symbols(f"v0:{p.nvars}")
    rep = {
        _unpack(k, p.nvars): sympy.Rational(int(c.numerator), int(c.denominator))
        for k, c in p.terms.items()
    }
    P = sympy.Poly.from_dict(rep, *gens, domain="QQ")
    g = P
    for x in gens:
        dP = P.diff(x)
        if dP.is_zero:
            continue
        g = g.gcd(dP)
        if g.total_degree() == 0:
            return True
    return g.total_degree() == 0


def _divisors(m: int, cap: int = 200_000) -> list:
    import sympy

    fact = sympy.factorint(m)
    count = 1
    for e in fact.values():
        count *= e + 1
    if count > cap:
        raise ResourceCapExceeded(
            f"divisor enumeration of {m} needs {count} candidates (cap {cap})"
        )
    divs = [1]
    for prime, e in fact.items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return divs


def _roots_by_factorization(ints: list) -> dict:
    """Rational roots of an integer-coefficient polynomial, by exact
    factorization over Z.  Each linear factor a*x + b contributes the
    root -b/a with the factor's multiplicity."""
    import sympy

    x = sympy.Symbol("x")
    P = sympy.Poly(list(reversed(ints)), x, domain="ZZ")
    out: dict = {}
    for factor, mult in P.factor_list()[1]:
        if factor.degree() != 1:
            continue
        a, b = (int(v) for v in factor.all_coeffs())
        out[Q(-b, a)] = mult
    return out


def rational_roots(p: SparsePoly) -> dict:
    """All rational roots with multiplicities, as {root: multiplicity}.

    Candidates come from the classical divisor test on the primitive
    integer model; each is verified by exact Horner evaluation and
    multiplicities by repeated synthetic deflation.  When the leading or
    trailing coefficient is too composite for divisor enumeration, the
    roots are read off an exact integer factorization instead.
    """
    if p.nvars != 1:
        raise ValueError("rational_roots needs a univariate polynomial")
    if p.is_zero():
        raise ValueError("every rational is a root of the zero polynomial")
    coeffs = uni_coeffs(p)
    if len(coeffs) == 1:
        return {}
    from math import gcd, lcm

    den = lcm(*[int(c.denominator) for c in coeffs])
    ints = [int(c.numerator) * (den // int(c.denominator)) for c in coeffs]
    content = gcd(*[abs(v) for v in ints if v])
    ints = [v // content for v in ints]
    roots: dict = {}
    k = next(i for i, v in enumerate(ints) if v)
    if k:
        roots[QZERO] = k
        ints = ints[k:]
    if len(ints) == 1:
        return roots
    try:
        divs_p = _divisors(abs(ints[0]))
        divs_q = _divisors(abs(ints[-1]))
        if len(divs_p) * len(divs_q) > 200_000:
            raise ResourceCapExceeded("candidate grid too large")
    except ResourceCapExceeded:
        for r, m in _roots_by_factorization(ints).items():
            roots[r] = roots.get(r, 0) + m
        return roots
    candidates = set()
    for pn in divs_p:
        for qd in divs_q:
            candidates.add(Q(pn, qd))
            candidates.add(Q(-pn, qd))
    cur = [Q(v) for v in ints]

    def value(coeff_list, r):
        acc = QZERO
        for c in reversed(coeff_list):
            acc = acc * r + c
        return acc

    for r in sorted(candidates):
        while len(cur) > 1 and not value(cur, r):
            nxt = [QZERO] * (len(cur) - 1)
            nxt[-1] = cur[-1]
            for i in range(len(cur) - 3, -1, -1):
                nxt[i] = cur[i + 1] + r * nxt[i + 1]
            cur = nxt
            roots[r] = roots.get(r, 0) + 1
    return roots
