"""Angular-momentum algebra for diagonal tensor light shifts.

Wigner 3j and 6j symbols are evaluated exactly with the Racah single-sum
formula in a sqrt-rational representation (value = r*sqrt(q) with r, q
rational), which avoids the catastrophic cancellation of naive factorial
formulas and lets the composite angular factors collapse to exact rational
numbers.

The angular factor A_k(term, M) is the coefficient multiplying the rank-k
radial integral in the diagonal matrix element of the intensity operator:

    <term, M| I |term, M> = sum_k A_k(term, M) * e_k(n*, L)

with e_k = Int r^2 R^2 f_k0 dr. It combines the Wigner-Eckart geometry
factor, the fine-structure (or LS) reduction 6j, and the orbital reduced
element:

    A_k = (-1)^(J-M) 3j(J k J; -M 0 M)
        * (-1)^(S+L+J+k) (2J+1) 6j{L J S; J L k}
        * (-1)^L (2L+1) 3j(L k L; 0 0 0)

For two-electron states with a closed-shell core in LS coupling the same
expression applies with the total quantum numbers (S, L, J, M); for a single
valence electron it applies with (1/2, l, j, m). A_0 = 1 for every state:
the monopole term is state independent.
"""

import math
import re
from fractions import Fraction
from functools import lru_cache


class UnsupportedTermError(ValueError):
    """Raised when a term symbol is outside the implemented coupling schemes."""


class HalfInt:
    """An exact integer or half-integer, stored as twice its value.

    Accepts ints, Fractions with denominator 1 or 2, floats equal to a
    multiple of 1/2, strings like "3/2", or another HalfInt.
    """

    __slots__ = ("twice",)

    def __init__(self, value):
        if isinstance(value, HalfInt):
            self.twice = value.twice
        elif isinstance(value, int):
            self.twice = 2 * value
        elif isinstance(value, Fraction):
            if value.denominator not in (1, 2):
                raise ValueError("not a half-integer: %r" % (value,))
            self.twice = int(value * 2)
        elif isinstance(value, str):
            frac = Fraction(value)
            if frac.denominator not in (1, 2):
                raise ValueError("not a half-integer: %r" % (value,))
            self.twice = int(frac * 2)
        elif isinstance(value, float):
            twice = 2 * value
            if twice != round(twice):
                raise ValueError("not a half-integer: %r" % (value,))
            self.twice = int(round(twice))
        else:
            raise TypeError("cannot interpret %r as half-integer" % (value,))

    @classmethod
    def from_twice(cls, twice):
        obj = cls.__new__(cls)
        obj.twice = int(twice)
        return obj

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_fraction(self):
        return Fraction(self.twice, 2)

    def __float__(self):
        return self.twice / 2.0

    def __int__(self):
        if not self.is_integer:
            raise ValueError("%s is not an integer" % self)
        return self.twice // 2

    def __add__(self, other):
        return HalfInt(Fraction(self.twice + HalfInt(other).twice, 2))

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(Fraction(self.twice - HalfInt(other).twice, 2))

    def __rsub__(self, other):
        return HalfInt(other).__sub__(self)

    def __neg__(self):
        return HalfInt(Fraction(-self.twice, 2))

    def __abs__(self):
        return HalfInt(Fraction(abs(self.twice), 2))

    def __eq__(self, other):
        try:
            return self.twice == HalfInt(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.twice < HalfInt(other).twice

    def __le__(self, other):
        return self.twice <= HalfInt(other).twice

    def __gt__(self, other):
        return self.twice > HalfInt(other).twice

    def __ge__(self, other):
        return self.twice >= HalfInt(other).twice

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def __repr__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return "%d/2" % self.twice


class SqrtRational:
    """Exact number of the form r * sqrt(q) with rational r and q >= 0."""

    __slots__ = ("r", "q")

    def __init__(self, r, q=Fraction(1)):
        self.r = Fraction(r)
        self.q = Fraction(q)
        if self.q < 0:
            raise ValueError("radicand must be nonnegative")
        if self.r == 0:
            self.q = Fraction(1)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.r * other.r, self.q * other.q)
        return SqrtRational(self.r * Fraction(other), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtRational(-self.r, self.q)

    def __float__(self):
        return float(self.r) * math.sqrt(float(self.q))

    @property
    def is_zero(self):
        return self.r == 0

    def to_fraction(self):
        """Collapse to an exact Fraction; requires sqrt(q) rational."""
        if self.r == 0:
            return Fraction(0)
        num, den = self.q.numerator, self.q.denominator
        root2 = num * den
        root = math.isqrt(root2)
        if root * root != root2:
            raise ValueError("value %s*sqrt(%s) is irrational" % (self.r, self.q))
        return self.r * Fraction(root, den)

    def __repr__(self):
        if self.q == 1:
            return "SqrtRational(%s)" % (self.r,)
        return "SqrtRational(%s, sqrt(%s))" % (self.r, self.q)


_ZERO = SqrtRational(0)


def _fact(n):
    if n < 0:
        raise ValueError("negative factorial")
    return math.factorial(n)


def _triangle_ok(a, b, c):
    # triangle inequality plus integer perimeter, on HalfInt arguments
    if (a.twice + b.twice + c.twice) % 2 != 0:
        return False
    return abs(a.twice - b.twice) <= c.twice <= a.twice + b.twice


def _delta_fraction(a, b, c):
    # Delta(abc) = (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!
    return Fraction(
        _fact((a.twice + b.twice - c.twice) // 2)
        * _fact((a.twice - b.twice + c.twice) // 2)
        * _fact((-a.twice + b.twice + c.twice) // 2),
        _fact((a.twice + b.twice + c.twice) // 2 + 1),
    )


@lru_cache(maxsize=100000)
def _wigner_3j_twice(tj1, tj2, tj3, tm1, tm2, tm3):
    j1, j2, j3 = HalfInt(Fraction(tj1, 2)), HalfInt(Fraction(tj2, 2)), HalfInt(Fraction(tj3, 2))
    m1, m2, m3 = HalfInt(Fraction(tm1, 2)), HalfInt(Fraction(tm2, 2)), HalfInt(Fraction(tm3, 2))
    if tm1 + tm2 + tm3 != 0:
        return _ZERO
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m.twice) > j.twice or (j.twice + m.twice) % 2 != 0:
            return _ZERO
    if not _triangle_ok(j1, j2, j3):
        return _ZERO

    # all of these are integers when the selection rules above hold
    jjj = (tj1 + tj2 - tj3) // 2          # j1+j2-j3
    j1m1 = (tj1 - tm1) // 2               # j1-m1
    j2m2 = (tj2 + tm2) // 2               # j2+m2
    a1 = (tj3 - tj2 + tm1) // 2           # j3-j2+m1
    a2 = (tj3 - tj1 - tm2) // 2           # j3-j1-m2

    t_min = max(0, -a1, -a2)
    t_max = min(jjj, j1m1, j2m2)
    if t_min > t_max:
        return _ZERO

    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (_fact(t) * _fact(jjj - t) * _fact(j1m1 - t)
               * _fact(j2m2 - t) * _fact(a1 + t) * _fact(a2 + t))
        total += Fraction((-1) ** t, den)
    if total == 0:
        return _ZERO

    radicand = _delta_fraction(j1, j2, j3)
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        radicand *= _fact((j.twice + m.twice) // 2) * _fact((j.twice - m.twice) // 2)
    phase = 1 if ((tj1 - tj2 - tm3) // 2) % 2 == 0 else -1
    return SqrtRational(phase * total, radicand)


@lru_cache(maxsize=100000)
def _wigner_6j_twice(tj1, tj2, tj3, tj4, tj5, tj6):
    js = [HalfInt(Fraction(t, 2)) for t in (tj1, tj2, tj3, tj4, tj5, tj6)]
    j1, j2, j3, j4, j5, j6 = js
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    for a, b, c in triads:
        if not _triangle_ok(a, b, c):
            return _ZERO

    radicand = Fraction(1)
    for a, b, c in triads:
        radicand *= _delta_fraction(a, b, c)

    a_sums = [(a.twice + b.twice + c.twice) // 2 for a, b, c in triads]
    b_sums = [
        (j1.twice + j2.twice + j4.twice + j5.twice) // 2,
        (j2.twice + j3.twice + j5.twice + j6.twice) // 2,
        (j3.twice + j1.twice + j6.twice + j4.twice) // 2,
    ]
    t_min = max(a_sums)
    t_max = min(b_sums)
    if t_min > t_max:
        return _ZERO

    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = Fraction(1)
        for a in a_sums:
            den *= _fact(t - a)
        for b in b_sums:
            den *= _fact(b - t)
        total += Fraction((-1) ** t * _fact(t + 1), den)
    if total == 0:
        return _ZERO
    return SqrtRational(total, radicand)


def wigner_3j_exact(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol as an exact SqrtRational.

    Invalid angular-momentum combinations (triangle violation, projection
    mismatch, |m| > j, parity mismatch) give exactly zero, not an error.
    """
    args = [HalfInt(x).twice for x in (j1, j2, j3, m1, m2, m3)]
    if any(t < 0 for t in args[:3]):
        return _ZERO
    return _wigner_3j_twice(*args)


def wigner_6j_exact(j1, j2, j3, j4, j5, j6):
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6} as an exact SqrtRational."""
    args = [HalfInt(x).twice for x in (j1, j2, j3, j4, j5, j6)]
    if any(t < 0 for t in args):
        return _ZERO
    return _wigner_6j_twice(*args)


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol as a float; zero for invalid combinations."""
    return float(wigner_3j_exact(j1, j2, j3, m1, m2, m3))


def wigner_6j(j1, j2, j3, j4, j5, j6):
    """Wigner 6j symbol as a float; zero for any violated triangle."""
    return float(wigner_6j_exact(j1, j2, j3, j4, j5, j6))


_L_LETTERS = "SPDF"
_TERM_RE = re.compile(r"^(\d+)([A-Z])(\d+(?:/2)?)$")


class Term:
    """Parsed coupling-scheme label: multiplicity, L letter, J.

    Two conventions are supported and distinguished by the multiplicity:
    odd multiplicity (1, 3) with integer J is a two-electron LS term like
    "3P2"; multiplicity 2 with half-integer J is a single-valence-electron
    fine-structure term like "2D5/2". In both cases the angular factors use
    the same reduction with (S, L, J).
    """

    __slots__ = ("label", "S", "L", "J", "scheme")

    def __init__(self, label):
        if isinstance(label, Term):
            label, parsed = label.label, label
            self.label = label
            self.S, self.L, self.J = parsed.S, parsed.L, parsed.J
            self.scheme = parsed.scheme
            return
        match = _TERM_RE.match(str(label).strip())
        if not match:
            raise UnsupportedTermError("cannot parse term symbol %r" % (label,))
        mult = int(match.group(1))
        letter = match.group(2)
        if letter not in _L_LETTERS:
            raise UnsupportedTermError(
                "orbital letter %r not supported (S, P, D, F only)" % letter)
        L = _L_LETTERS.index(letter)
        try:
            J = HalfInt(match.group(3))
        except ValueError:
            raise UnsupportedTermError("bad J in term symbol %r" % (label,))
        if mult < 1:
            raise UnsupportedTermError("bad multiplicity in %r" % (label,))
        S = HalfInt(Fraction(mult - 1, 2))
        scheme = "LS" if S.is_integer else "fine"
        # J must be consistent with |L-S| <= J <= L+S and integer parity of S
        if (J.twice + S.twice) % 2 != 0 or not _triangle_ok(HalfInt(L), S, J):
            raise UnsupportedTermError(
                "J=%s incompatible with S=%s, L=%d in %r" % (J, S, L, label))
        self.label = str(label).strip()
        self.S, self.L, self.J = S, L, J
        self.scheme = scheme

    def __repr__(self):
        return "Term(%r)" % self.label

    def __eq__(self, other):
        try:
            other = Term(other)
        except UnsupportedTermError:
            return NotImplemented
        return (self.S, self.L, self.J) == (other.S, other.L, other.J)

    def __hash__(self):
        return hash((self.S, self.L, self.J))


def angular_factor_exact(term, k, M):
    """Exact rational angular factor A_k(term, M).

    Returns the coefficient multiplying the rank-k radial integral e_k in
    the diagonal shift of sublevel M. Zero (exact) when k > 2J or k > 2L or
    k is odd; raises UnsupportedTermError for unparseable terms and
    ValueError for an invalid M.
    """
    term = Term(term)
    if term.L > 3:
        raise UnsupportedTermError("L > 3 not supported: %r" % term.label)
    k = int(k)
    if k < 0:
        raise ValueError("rank k must be >= 0")
    M = HalfInt(M)
    if abs(M.twice) > term.J.twice or (M.twice + term.J.twice) % 2 != 0:
        raise ValueError("M=%s invalid for J=%s" % (M, term.J))
    if k % 2 == 1 or k > min(term.J.twice, 2 * term.L):
        return Fraction(0)

    S, L, J = term.S, term.L, term.J
    geom = wigner_3j_exact(J, k, J, -M, 0, M)
    recoup = wigner_6j_exact(L, J, S, J, L, k)
    orbital = wigner_3j_exact(L, k, L, 0, 0, 0)
    # phase (-1)^(J-M) * (-1)^(S+L+J+k) * (-1)^L; the exponent sum is an integer
    phase_twice = (J.twice - M.twice) + (S.twice + 2 * L + J.twice + 2 * k) + 2 * L
    phase = 1 if (phase_twice // 2) % 2 == 0 else -1
    value = geom * recoup * orbital * Fraction(phase * (J.twice + 1) * (2 * L + 1))
    return value.to_fraction()


def angular_factor(term, k, M):
    """Angular factor A_k(term, M) as a float."""
    return float(angular_factor_exact(term, k, M))


# The 15 low-L terms tabulated for quick reference: 5 single-valence
# fine-structure terms and 10 two-electron LS terms.
TABLE_TERMS = (
    "2S1/2", "2P1/2", "2P3/2", "2D3/2", "2D5/2",
    "1S0", "3S1", "1P1", "3P0", "3P1", "3P2", "1D2", "3D1", "3D2", "3D3",
)


def reference_m(term):
    """Reference sublevel for tabulation: M=0 for integer J, else M=1/2."""
    term = Term(term)
    return HalfInt(0) if term.J.is_integer else HalfInt(Fraction(1, 2))


def angular_table(terms=TABLE_TERMS, ranks=(0, 2, 4)):
    """Rows (term, [A_k for k in ranks]) at the reference M, exact rationals."""
    rows = []
    for label in terms:
        m_ref = reference_m(label)
        rows.append((label, [angular_factor_exact(label, k, m_ref) for k in ranks]))
    return rows
