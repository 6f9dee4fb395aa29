"""Integer polynomials: parsing, invariants, irreducibility, Pisot tests and certified roots."""
import cmath
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_ddf_zassenhaus,
    gf_from_int_poly,
    gf_monic,
    gf_sqf_p,
)

from core.config import settings
from core.exceptions import (
    DomainError,
    ParseError,
    PrecisionError,
    RepeatedRootError,
    UnsupportedInputError,
)
from core.logging_config import logger
from schemas.models import SymmetricInvariants


X = sympy.Symbol("x")

_TERM = re.compile(r"^([+-]?)(\d*)(\*?x(?:\^(\d+))?)?$")
_ABERTH_BASE_ITERATIONS = 60


def is_square(value: int) -> bool:
    """Exact perfect-square test for integers."""
    return value >= 0 and isqrt(value) ** 2 == value


def mpf_to_fraction(value) -> Fraction:
    """Exact rational value of an mpmath real."""
    value = mpmath.mpf(value)
    if not value:
        return Fraction(0)
    man, exp = value.man_exp
    man = abs(int(man))
    exp = int(exp)
    sign = -1 if value < 0 else 1
    if exp >= 0:
        return Fraction(sign * man * (1 << exp))
    return Fraction(sign * man, 1 << -exp)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with coefficients stored by ascending power."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs or coeffs == [0]:
            raise DomainError("the zero polynomial has no conjugates")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """
        Parse "x^3+3x^2-6x+1" or the ascending list form "[1,-6,3,1]".

        Args:
            text: Polynomial text

        Returns:
            Parsed polynomial

        Raises:
            ParseError: If the text is not a polynomial in x
        """
        source = text.replace(" ", "")
        if not source:
            raise ParseError("empty polynomial")
        if source.startswith("["):
            try:
                values = json.loads(source)
            except json.JSONDecodeError as e:
                raise ParseError(f"bad coefficient list: {text}") from e
            if not isinstance(values, list) or not values or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in values
            ):
                raise ParseError(f"coefficient list must hold integers: {text}")
            try:
                return cls(tuple(values))
            except DomainError as e:
                raise ParseError(str(e)) from e

        terms: Dict[int, int] = {}
        for token in re.findall(r"[+-]?[^+-]+", source):
            match = _TERM.match(token)
            if not match or (not match.group(2) and not match.group(3)):
                raise ParseError(f"cannot parse term '{token}' in '{text}'")
            sign, digits, var, power = match.groups()
            if var is None:
                exponent = 0
            else:
                exponent = int(power) if power else 1
            if var is not None and var.startswith("*") and not digits:
                raise ParseError(f"cannot parse term '{token}' in '{text}'")
            value = int(digits) if digits else 1
            if sign == "-":
                value = -value
            terms[exponent] = terms.get(exponent, 0) + value
        if "".join(re.findall(r"[+-]?[^+-]+", source)) != source:
            raise ParseError(f"cannot parse '{text}'")
        degree = max(terms)
        try:
            return cls(tuple(terms.get(k, 0) for k in range(degree + 1)))
        except DomainError as e:
            raise ParseError(str(e)) from e

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def coeff(self, k: int) -> int:
        """Coefficient of x^k (zero outside the stored range)."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def descending(self) -> List[int]:
        return list(reversed(self.coeffs))

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def to_sympy(self, domain=ZZ) -> sympy.Poly:
        return sympy.Poly(self.descending(), X, domain=domain)

    def evaluate(self, value):
        """Horner evaluation; exact for int and Fraction arguments."""
        result = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise DomainError("derivative of a constant")
        return IntPolynomial(tuple(k * self.coeffs[k] for k in range(1, len(self.coeffs))))

    def is_reciprocal(self) -> bool:
        reverse = tuple(reversed(self.coeffs))
        return reverse == self.coeffs or reverse == tuple(-c for c in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                body = ("" if magnitude == 1 else str(magnitude)) + ("x" if k == 1 else f"x^{k}")
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        return text + "".join(sign + body for sign, body in parts[1:])


@dataclass(frozen=True)
class Irreducibility:
    """Tri-state irreducibility verdict with its witness."""

    value: Optional[bool]
    reason: str


@dataclass(frozen=True)
class RootSet:
    """
    Certified root approximations.

    Real roots come first in descending order, then conjugate pairs
    (upper half-plane member first). Every root lies within its radius.
    """

    roots: Tuple[mpmath.mpc, ...]
    radii: Tuple[mpmath.mpf, ...]
    real_count: int
    complex_pair_count: int
    precision: int

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def totally_real(self) -> bool:
        return self.complex_pair_count == 0

    def values(self) -> List[complex]:
        return [complex(z) for z in self.roots]

    def max_radius(self):
        return max(self.radii)


# Exact invariants

def discriminant(f: IntPolynomial) -> int:
    """
    Discriminant via the resultant of f and f'.

    Args:
        f: Polynomial of degree >= 2

    Returns:
        Exact integer discriminant
    """
    n = f.degree
    if n < 2:
        raise DomainError("discriminant needs degree >= 2")
    poly = f.to_sympy()
    resultant = int(poly.resultant(poly.diff(X)))
    if (n * (n - 1) // 2) % 2:
        resultant = -resultant
    quotient, remainder = divmod(resultant, f.leading)
    if remainder:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return quotient


def invariants(f: IntPolynomial) -> SymmetricInvariants:
    """Newton-identity invariants A, B and the root sum of a monic polynomial."""
    if not f.is_monic:
        raise UnsupportedInputError("invariants need a monic polynomial")
    n = f.degree
    a = f.coeff(n - 1)
    b = f.coeff(n - 2) if n >= 2 else 0
    return SymmetricInvariants(A=a * a - 2 * b, B=b, trace_e1=-a)


def perron_criterion(f: IntPolynomial) -> bool:
    """|a_{n-1}| > 1 + sum of the lower |a_k|."""
    if not f.is_monic:
        raise UnsupportedInputError("Perron criterion needs a monic polynomial")
    n = f.degree
    if n < 2:
        raise DomainError("Perron criterion needs degree >= 2")
    return abs(f.coeff(n - 1)) > 1 + sum(abs(f.coeff(k)) for k in range(n - 1))


def rational_roots(f: IntPolynomial) -> List[Fraction]:
    """All rational roots, ascending."""
    found = set()
    coeffs = list(f.coeffs)
    if coeffs[0] == 0:
        found.add(Fraction(0))
        while coeffs[0] == 0:
            coeffs.pop(0)
    if len(coeffs) > 1:
        reduced = IntPolynomial(tuple(coeffs))
        for p in sympy.divisors(abs(coeffs[0])):
            for q in sympy.divisors(abs(coeffs[-1])):
                for sign in (1, -1):
                    candidate = Fraction(sign * int(p), int(q))
                    if reduced.evaluate(candidate) == 0:
                        found.add(candidate)
    return sorted(found)


def degree_pattern(f: IntPolynomial, p: int) -> Optional[Tuple[int, ...]]:
    """
    Factor degrees of f over F_p by distinct-degree factorization.

    Args:
        f: Integer polynomial
        p: Prime

    Returns:
        Degrees in descending order, or None when p divides a_n or
        f is not squarefree mod p
    """
    if f.leading % p == 0:
        return None
    reduced = gf_from_int_poly(f.descending(), p)
    if not gf_sqf_p(reduced, p, ZZ):
        return None
    _, reduced = gf_monic(reduced, p, ZZ)
    pattern: List[int] = []
    for factor, degree in gf_ddf_zassenhaus(reduced, p, ZZ):
        pattern.extend([int(degree)] * ((len(factor) - 1) // int(degree)))
    return tuple(sorted(pattern, reverse=True))


def _subset_sums(pattern: Sequence[int]) -> set:
    sums = {0}
    for part in pattern:
        sums |= {s + part for s in sums}
    return sums


def is_irreducible(f: IntPolynomial) -> Irreducibility:
    """
    Decide irreducibility over Q where it can be certified.

    Degree <= 3 is exact. Higher degrees use the Perron criterion and
    degree patterns modulo small primes; otherwise undetermined.
    """
    n = f.degree
    if n < 1:
        raise DomainError("irreducibility needs degree >= 1")
    if n == 1:
        return Irreducibility(True, "linear")
    roots = rational_roots(f)
    if roots:
        root = min(roots, key=lambda r: (abs(r), r < 0))
        shown = str(root.numerator) if root.denominator == 1 else str(root)
        return Irreducibility(False, f"reducible (rational root {shown})")
    if n == 2:
        return Irreducibility(True, "discriminant is not a square")
    if n == 3:
        return Irreducibility(True, "no rational root")
    if f.is_monic and perron_criterion(f):
        return Irreducibility(True, "Perron criterion")

    possible = set(range(1, n))
    checked = 0
    p = 1
    while checked < settings.GALOIS_SAMPLE_PRIMES:
        p = int(sympy.nextprime(p))
        pattern = degree_pattern(f, p)
        if pattern is None:
            continue
        checked += 1
        if pattern == (n,):
            return Irreducibility(True, f"irreducible mod {p}")
        possible &= _subset_sums(pattern)
        if not possible:
            return Irreducibility(True, "factor degrees excluded by patterns mod primes")
    return Irreducibility(None, "undetermined")


# Certified roots

def _warm_start(f: IntPolynomial) -> List[complex]:
    n = f.degree
    try:
        start = [complex(z) for z in np.roots(np.array(f.descending(), dtype=float))]
    except (OverflowError, np.linalg.LinAlgError):
        start = []
    if len(start) != n or not all(cmath.isfinite(z) for z in start):
        radius = 1 + max(abs(c) for c in f.coeffs[:-1]) / abs(f.leading)
        start = [radius * cmath.exp(2j * cmath.pi * (k + 0.25) / n) for k in range(n)]
    for i in range(n):
        for j in range(i):
            if abs(start[i] - start[j]) <= 1e-12 * (1 + abs(start[i])):
                start[i] += 1e-7 * (1 + abs(start[i])) * cmath.exp(1j * (i + 1))
    return start


def _aberth(coeffs: List[mpmath.mpf], start: List[complex], bits: int) -> List[mpmath.mpc]:
    z = [mpmath.mpc(s) for s in start]
    n = len(z)
    tolerance = mpmath.mpf(2) ** (-bits - 8)
    for _ in range(_ABERTH_BASE_ITERATIONS + bits // 8):
        largest = mpmath.mpf(0)
        for i in range(n):
            value, slope = mpmath.polyval(coeffs, z[i], derivative=True)
            if value == 0:
                continue
            if slope == 0:
                raise PrecisionError("vanishing derivative during root refinement")
            ratio = value / slope
            try:
                repulsion = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
            except ZeroDivisionError as e:
                raise PrecisionError("coincident root approximations") from e
            denominator = 1 - ratio * repulsion
            step = ratio / denominator if denominator != 0 else ratio
            z[i] -= step
            largest = max(largest, abs(step) / (1 + abs(z[i])))
        if largest < tolerance:
            break
    return z


def _certify(coeffs, z: List[mpmath.mpc], bits: int):
    n = len(z)
    radii = []
    for zi in z:
        value, slope = mpmath.polyval(coeffs, zi, derivative=True)
        if slope == 0:
            raise PrecisionError("vanishing derivative at a root approximation")
        radii.append(n * abs(value) / abs(slope))
    limit = mpmath.mpf(2) ** (-(bits // 2))
    if any(r >= limit for r in radii):
        raise PrecisionError("root error radius above the certification limit")
    for i in range(n):
        for j in range(i):
            if abs(z[i] - z[j]) <= radii[i] + radii[j]:
                raise PrecisionError("root error disks overlap")
    return radii


def _arrange(z: List[mpmath.mpc], radii: List[mpmath.mpf]):
    n = len(z)
    real_indices = []
    for i in range(n):
        if abs(z[i].imag) > radii[i]:
            continue
        centre = mpmath.mpc(z[i].real, 0)
        if all(abs(centre - z[j]) > 2 * radii[i] + radii[j] for j in range(n) if j != i):
            real_indices.append(i)
    upper = [i for i in range(n) if i not in real_indices and z[i].imag > 0]
    lower = [i for i in range(n) if i not in real_indices and z[i].imag < 0]
    if len(real_indices) + len(upper) + len(lower) != n or len(upper) != len(lower):
        raise PrecisionError("could not separate real roots from conjugate pairs")

    reals = sorted(
        ((mpmath.mpc(z[i].real, 0), radii[i]) for i in real_indices),
        key=lambda item: item[0].real,
        reverse=True,
    )
    pairs = []
    unmatched = list(lower)
    for i in upper:
        partner = min(unmatched, key=lambda j: abs(mpmath.conj(z[i]) - z[j]))
        unmatched.remove(partner)
        root = (z[i] + mpmath.conj(z[partner])) / 2
        radius = max(radii[i], radii[partner]) + abs(z[i] - mpmath.conj(z[partner]))
        pairs.append((root, radius))
    pairs.sort(key=lambda item: (-item[0].real, -item[0].imag))

    roots = [r for r, _ in reals]
    out_radii = [r for _, r in reals]
    for root, radius in pairs:
        roots.extend([root, mpmath.conj(root)])
        out_radii.extend([radius, radius])
    return roots, out_radii, len(reals), len(pairs)


def find_roots(f: IntPolynomial, precision_bits: Optional[int] = None) -> RootSet:
    """
    Certified roots by Aberth-Ehrlich iteration.

    Args:
        f: Squarefree polynomial
        precision_bits: Working precision (defaults to CL_PRECISION)

    Returns:
        RootSet whose radii are below 2^-(precision/2)

    Raises:
        RepeatedRootError: If the discriminant vanishes
        PrecisionError: If the roots cannot be certified at this precision
    """
    bits = precision_bits or settings.CL_PRECISION
    if bits < 64:
        raise DomainError("root finding needs at least 64 bits")
    n = f.degree
    if n < 1:
        raise DomainError("root finding needs degree >= 1")
    if n >= 2 and discriminant(f) == 0:
        raise RepeatedRootError(f"{f} has a repeated root")

    with mpmath.workprec(bits + 32):
        coeffs = [mpmath.mpf(c) for c in f.descending()]
        if n == 1:
            root = mpmath.mpc(mpmath.mpf(-f.coeffs[0]) / f.coeffs[1], 0)
            return RootSet((root,), (mpmath.mpf(0),), 1, 0, bits)
        z = _aberth(coeffs, _warm_start(f), bits)
        radii = _certify(coeffs, z, bits)
        roots, radii, real_count, pair_count = _arrange(z, radii)
        limit = mpmath.mpf(2) ** (-(bits // 2))
        if any(r >= limit for r in radii):
            raise PrecisionError("conjugate pairing widened a root radius past the limit")

    logger.debug("Roots certified", polynomial=str(f), precision=bits, real_roots=real_count)
    return RootSet(tuple(roots), tuple(radii), real_count, pair_count, bits)


def refine_roots(f: IntPolynomial, roots: RootSet, precision_bits: int) -> RootSet:
    """Newton-refine an existing RootSet to a higher precision, keeping the order."""
    if precision_bits <= roots.precision:
        return roots
    with mpmath.workprec(precision_bits + 32):
        coeffs = [mpmath.mpf(c) for c in f.descending()]
        refined = []
        steps = 4 + max(1, (precision_bits // roots.precision).bit_length())
        for index, start in enumerate(roots.roots):
            z = mpmath.mpc(start)
            for _ in range(steps):
                value, slope = mpmath.polyval(coeffs, z, derivative=True)
                if value == 0:
                    break
                z -= value / slope
            if index < roots.real_count:
                z = mpmath.mpc(z.real, 0)
            refined.append(z)
        for k in range(roots.real_count, roots.degree, 2):
            refined[k + 1] = mpmath.conj(refined[k])
        radii = _certify(coeffs, refined, precision_bits)
    return RootSet(tuple(refined), tuple(radii), roots.real_count, roots.complex_pair_count, precision_bits)


def classify_pisot(f: IntPolynomial, roots: RootSet) -> bool:
    """
    Pisot test on certified roots.

    Exactly one root may lie outside the unit circle and it must be real;
    its sign is not constrained, so a dominant negative root counts
    (then -alpha is the Pisot number).

    Raises:
        PrecisionError: If an error disk straddles the unit circle
    """
    if not f.is_monic:
        raise UnsupportedInputError("Pisot test needs a monic polynomial")
    outside = []
    with mpmath.workprec(roots.precision):
        for index, (z, radius) in enumerate(zip(roots.roots, roots.radii)):
            modulus = abs(z)
            if modulus - radius > 1:
                outside.append(index)
            elif modulus + radius < 1:
                continue
            elif f.is_reciprocal():
                # an irreducible polynomial with a unimodular root is reciprocal
                return False
            else:
                raise PrecisionError("root error disk straddles the unit circle")
    return len(outside) == 1 and outside[0] < roots.real_count
