"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from typing import Mapping, Sequence

from .fields import QQ, parse_rational


class MissingAssignmentError(KeyError):
    """An evaluation point does not assign every variable."""


def degrevlex_key(e: tuple) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: tuple) -> tuple:
    return e


ORDERS = {"degrevlex": degrevlex_key, "lex": lex_key}


def order_key(order: str):
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}; use 'degrevlex' or 'lex'") from None


class MultiPoly:
    """Polynomial in a fixed ordered list of variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are treated
    as immutable; arithmetic returns new objects.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {n} variables")
            c = parse_rational(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, variables, c=1) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        k = variables.index(name)
        e = tuple(1 if i == k else 0 for i in range(len(variables)))
        return cls(variables, {e: 1})

    @classmethod
    def monomial(cls, variables, exponents, c=1) -> "MultiPoly":
        return cls(variables, {tuple(exponents): c})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def leading(self, order: str = "degrevlex"):
        """``(exponent, coefficient)`` of the leading term."""
        key = order_key(order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def degree_in(self, name: str) -> int:
        k = self.variables.index(name)
        return max((e[k] for e in self.terms), default=-1)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable lists")
            return other
        return MultiPoly.constant(self.variables, parse_rational(other))

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return MultiPoly._raw(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return MultiPoly._raw(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_term(self, e: tuple, c) -> "MultiPoly":
        return MultiPoly._raw(
            self.variables,
            {tuple(a + b for a, b in zip(e, f)): c * d for f, d in self.terms.items()},
        )

    def monic(self, order: str = "degrevlex") -> "MultiPoly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return MultiPoly._raw(self.variables, {e: v / c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading("lex")
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem, key=lex_key)
            if any(a < b for a, b in zip(e, le)):
                raise ArithmeticError("polynomial division is not exact")
            qe = tuple(a - b for a, b in zip(e, le))
            qc = rem[e] / lc
            quot[qe] = qc
            for f, d in other.terms.items():
                g = tuple(a + b for a, b in zip(qe, f))
                v = rem.get(g, 0) - qc * d
                if v:
                    rem[g] = v
                else:
                    rem.pop(g, None)
        return MultiPoly._raw(self.variables, quot)

    # -- evaluation / change of ring --------------------------------------

    def evaluate(self, point: Mapping[str, object], field=QQ):
        """Exact value at ``point`` (a mapping variable -> scalar) over ``field``."""
        missing = [v for v in self.variables if v not in point]
        if missing:
            raise MissingAssignmentError(f"no value for variable(s) {missing}")
        vals = [field(point[v]) for v in self.variables]
        p = getattr(field, "p", None)
        total = field.zero
        for e, c in self.terms.items():
            term = field(c)
            for x, k in zip(vals, e):
                if not k:
                    continue
                if p is None:
                    term *= x ** k
                else:
                    term = term * pow(x, k, p) % p
            total += term
        return total % p if p is not None else total

    def extend(self, variables: Sequence[str]) -> "MultiPoly":
        """Same polynomial viewed in a larger variable list containing ours."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            f = [0] * len(variables)
            for i, k in zip(idx, e):
                f[i] = k
            terms[tuple(f)] = c
        return MultiPoly._raw(variables, terms)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=degrevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_eval(f: MultiPoly, point: Mapping[str, object], field=QQ):
    return f.evaluate(point, field)
