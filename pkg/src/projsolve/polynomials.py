"""Exact integer polynomials: dense univariate and sparse multivariate.

UniPoly is a dense coefficient tuple (constant term first) over the
integers; MultiPoly maps exponent vectors to nonzero integer
coefficients.  Multiplication goes through Kronecker substitution (pack
the coefficients into one big integer, multiply once, unpack) whenever
the products are dense enough to benefit, with plain sparse convolution
as the fallback.  Shears (substituting x_j - sum l_i x_i for x_j),
homogenization, and restriction to the hyperplane at infinity are the
coordinate transformations the rest of the pipeline is built on.

The canonical text syntax is one polynomial per line with terms like
``3*x1^2*x2 - 4*x2 + 1``; parse/format round-trips are bit exact.

All values are immutable and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .dyadic import ComplexBox, DyadicInterval, Dyadic
from .errors import NonSquareSystemError, PolynomialSyntaxError

__all__ = [
    "UniPoly",
    "MultiPoly",
    "Magnitude",
    "PolynomialSystem",
    "multiply",
    "shear",
    "homogenize",
    "restrict_to_infinity",
    "squarefree_part",
    "eval_interval",
    "parse_polynomial",
    "parse_system_text",
    "format_polynomial",
    "format_system",
]


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _kronecker_pack_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Multiply coefficient sequences by evaluating at 2**k for k large
    enough that signed digits of the product never collide."""
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    k = (
        max_a.bit_length()
        + max_b.bit_length()
        + min(len(a), len(b)).bit_length()
        + 2
    )
    pack_a = sum(c << (k * i) for i, c in enumerate(a))
    pack_b = sum(c << (k * i) for i, c in enumerate(b))
    packed = pack_a * pack_b
    n_out = len(a) + len(b) - 1
    out = []
    mask = (1 << k) - 1
    half = 1 << (k - 1)
    for _ in range(n_out):
        digit = packed & mask
        if digit >= half:
            digit -= 1 << k
        out.append(digit)
        packed = (packed - digit) >> k
    assert packed == 0, "Kronecker unpacking left a remainder"
    return tuple(out)


@dataclass(frozen=True, slots=True)
class UniPoly:
    """Dense integer polynomial; coeffs[k] is the coefficient of x**k.
    The zero polynomial is the empty tuple."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs) -> "UniPoly":
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c: int) -> "UniPoly":
        return cls((c,))

    @classmethod
    def x_power(cls, k: int, c: int = 1) -> "UniPoly":
        return cls((0,) * k + (c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def trailing(self) -> int:
        for c in self.coeffs:
            if c:
                return c
        return 0

    def norm_inf(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def two_norm_sq(self) -> int:
        return sum(c * c for c in self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(tuple(out))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(())
        if min(len(a), len(b)) <= 2:
            out = [0] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca:
                    for j, cb in enumerate(b):
                        out[i + j] += ca * cb
            return UniPoly(tuple(out))
        return UniPoly(_kronecker_pack_mul(a, b))

    def scale(self, c: int) -> "UniPoly":
        return UniPoly(tuple(c * k for k in self.coeffs))

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return UniPoly((0,) * k + self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "UniPoly":
        """Divide out the content; sign normalized so the leading
        coefficient is positive."""
        if self.is_zero():
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return UniPoly(tuple(c // g for c in self.coeffs))

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_box(self, z: ComplexBox) -> ComplexBox:
        """Enclosure of the image of the box; exact endpoints."""
        acc = ComplexBox.point(0)
        for c in reversed(self.coeffs):
            acc = acc * z + ComplexBox.point(c)
        return acc

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        """Exact polynomial division over the integers; raises if not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.leading
        out = [0] * max(0, len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            head = rem[k + db]
            if head % lb:
                raise ArithmeticError("polynomial division is not exact")
            q = head // lb
            out[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        if any(rem[: db] if db else rem):
            raise ArithmeticError("polynomial division left a remainder")
        return UniPoly(tuple(out))

    def pseudo_rem(self, other: "UniPoly") -> "UniPoly":
        """prem(self, other): remainder of lc(other)**(delta+1) * self by other."""
        da, db = self.degree, other.degree
        if da < db:
            return self
        lb = other.leading
        rem = list(self.coeffs)
        for k in range(da - db, -1, -1):
            head = rem[k + db]
            for i in range(len(rem)):
                rem[i] *= lb
            if head:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= head * c
            rem = rem[: k + db]
            rem += [0] * (k + db - len(rem))
        return UniPoly(tuple(rem))

    def __str__(self) -> str:
        return format_polynomial(self.to_multipoly(1))

    def to_multipoly(self, num_vars: int, var: int = 0) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * num_vars
                e[var] = k
                terms[tuple(e)] = c
        return MultiPoly(num_vars, terms)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Primitive gcd over the integers via the subresultant remainder
    sequence (keeps intermediate coefficients polynomially bounded
    without rational arithmetic)."""
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    f, g = a.primitive(), b.primitive()
    if f.degree < g.degree:
        f, g = g, f
    h_prev = 1
    gamma = 1
    while True:
        delta = f.degree - g.degree
        rem = f.pseudo_rem(g)
        if rem.is_zero():
            return g.primitive()
        if rem.degree == 0:
            return UniPoly((1,))
        divisor = gamma * h_prev**delta
        f, g = g, UniPoly(tuple(c // divisor for c in rem.coeffs))
        gamma = f.leading
        h_prev = h_prev if delta == 0 else (gamma**delta // h_prev ** (delta - 1))


def squarefree_part(f: UniPoly) -> UniPoly:
    """f / gcd(f, f'), primitive: same distinct roots, all simple."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    fp = f.primitive()
    if fp.degree <= 0:
        return UniPoly((1,))
    g = poly_gcd(fp, fp.derivative())
    if g.degree == 0:
        return fp
    return fp.exact_div(g).primitive()


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Full squarefree decomposition f ~ prod g_i**i with the g_i primitive,
    squarefree, and pairwise coprime; returns [(g_i, i)] skipping trivial
    factors (Musser's gcd chain)."""
    fp = f.primitive()
    if fp.degree <= 0:
        return []
    cofactor = poly_gcd(fp, fp.derivative())
    distinct = fp.exact_div(cofactor).primitive()
    out = []
    i = 1
    while distinct.degree > 0:
        higher = poly_gcd(distinct, cofactor)
        factor = distinct.exact_div(higher).primitive()
        if factor.degree > 0:
            out.append((factor, i))
        distinct = higher
        cofactor = cofactor.exact_div(higher).primitive()
        i += 1
    return out


# ---------------------------------------------------------------------------
# multivariate
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse integer polynomial in num_vars variables.

    terms maps exponent tuples to nonzero coefficients.  Instances are
    immutable by convention; equality and hashing go through a sorted
    canonical form.
    """

    __slots__ = ("num_vars", "terms", "_canon")

    def __init__(self, num_vars: int, terms: dict):
        self.num_vars = num_vars
        clean = {}
        for exps, c in terms.items():
            if c:
                if len(exps) != num_vars:
                    raise ValueError("exponent vector length mismatch")
                clean[tuple(exps)] = c
        self.terms = clean
        self._canon = None

    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, c: int) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars: int, idx: int, coeff: int = 1) -> "MultiPoly":
        e = [0] * num_vars
        e[idx] = 1
        return cls(num_vars, {tuple(e): coeff})

    def canonical(self):
        if self._canon is None:
            self._canon = tuple(sorted(self.terms.items()))
        return self._canon

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.num_vars == other.num_vars
            and self.canonical() == other.canonical()
        )

    def __hash__(self):
        return hash((self.num_vars, self.canonical()))

    def __repr__(self):
        return f"MultiPoly({self.num_vars}, {format_polynomial(self)!r})"

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, idx: int) -> int:
        return max((e[idx] for e in self.terms), default=-1)

    def max_coeff_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.terms.values()), default=0)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.num_vars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def scale(self, c: int) -> "MultiPoly":
        if c == 0:
            return MultiPoly.zero(self.num_vars)
        return MultiPoly(self.num_vars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        return multiply(self, other)

    def eval_fraction(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def eval_interval(self, point: list[ComplexBox]) -> ComplexBox:
        return eval_interval(self, point)

    def substitute_linear(self, pivot: int, coeffs) -> "MultiPoly":
        """Substitute x_pivot <- x_pivot - sum_{i != pivot} coeffs[i] * x_i."""
        n = self.num_vars
        replacement = MultiPoly.variable(n, pivot)
        for i, li in enumerate(coeffs):
            if i != pivot and li:
                replacement = replacement + MultiPoly.variable(n, i, -li)
        max_pow = self.degree_in(pivot)
        powers = [MultiPoly.constant(n, 1)]
        for _ in range(max(0, max_pow)):
            powers.append(multiply(powers[-1], replacement))
        out = MultiPoly.zero(n)
        grouped: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[pivot]
            rest = list(e)
            rest[pivot] = 0
            grouped.setdefault(k, {})[tuple(rest)] = c
        for k, terms in grouped.items():
            out = out + multiply(MultiPoly(n, terms), powers[k])
        return out

    def substitute_value_one(self, idx: int) -> "MultiPoly":
        """Set x_idx = 1 and drop the variable."""
        n = self.num_vars
        out: dict = {}
        for e, c in self.terms.items():
            reduced = tuple(v for i, v in enumerate(e) if i != idx)
            out[reduced] = out.get(reduced, 0) + c
        return MultiPoly(n - 1, out)

    def drop_unused_last_var(self) -> "MultiPoly":
        if any(e[-1] for e in self.terms):
            raise ValueError("last variable still occurs")
        return MultiPoly(
            self.num_vars - 1, {e[:-1]: c for e, c in self.terms.items()}
        )

    def to_unipoly(self) -> UniPoly:
        if self.num_vars != 1:
            raise ValueError("not univariate")
        out = [0] * (self.total_degree + 1) if self.terms else []
        for e, c in self.terms.items():
            out[e[0]] = c
        return UniPoly(tuple(out))

    def coefficients_in(self, pivot: int) -> dict[tuple[int, ...], UniPoly]:
        """View the polynomial over Z[x_pivot]: maps exponent tuples of the
        remaining variables (pivot slot removed) to coefficients in Z[x_pivot]."""
        grouped: dict[tuple[int, ...], dict[int, int]] = {}
        for e, c in self.terms.items():
            rest = tuple(v for i, v in enumerate(e) if i != pivot)
            grouped.setdefault(rest, {})[e[pivot]] = c
        out = {}
        for rest, coeffs in grouped.items():
            arr = [0] * (max(coeffs) + 1)
            for k, c in coeffs.items():
                arr[k] = c
            out[rest] = UniPoly(tuple(arr))
        return out


def multiply(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact product.  Dense pairs go through Kronecker substitution into a
    single univariate (then big-integer) multiplication; sparse pairs use
    direct convolution."""
    if a.num_vars != b.num_vars:
        raise ValueError("variable count mismatch")
    n = a.num_vars
    if a.is_zero() or b.is_zero():
        return MultiPoly.zero(n)
    na, nb = len(a.terms), len(b.terms)
    bounds = [a.degree_in(i) + b.degree_in(i) + 1 for i in range(n)]
    dense_size = prod(bounds)
    if na * nb <= 256 or dense_size > 1 << 22 or dense_size > 4 * na * nb:
        out: dict = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly(n, out)
    strides = [1] * n
    for i in range(1, n):
        strides[i] = strides[i - 1] * bounds[i - 1]

    def pack(p: MultiPoly) -> tuple[int, ...]:
        arr = [0] * dense_size
        for e, c in p.terms.items():
            arr[sum(x * s for x, s in zip(e, strides))] = c
        return tuple(arr)

    packed = _kronecker_pack_mul(pack(a), pack(b))
    out = {}
    for idx, c in enumerate(packed):
        if c:
            e = []
            rest = idx
            for i in range(n):
                e.append(rest % bounds[i])
                rest //= bounds[i]
            out[tuple(e)] = c
    return MultiPoly(n, out)


def shear(f: MultiPoly, pivot: int, coeffs) -> MultiPoly:
    """Substitute x_pivot <- x_pivot - sum_{i != pivot} coeffs[i] x_i
    (coeffs is a full-length vector; the pivot entry is ignored)."""
    return f.substitute_linear(pivot, coeffs)


def homogenize(f: MultiPoly, total_degree: int) -> MultiPoly:
    """Homogenize with one extra (last) variable to the given degree."""
    d = f.total_degree
    if total_degree < d:
        raise ValueError("homogenization degree below the degree of f")
    out = {}
    for e, c in f.terms.items():
        out[e + (total_degree - sum(e),)] = c
    return MultiPoly(f.num_vars + 1, out)


def restrict_to_infinity(f: MultiPoly) -> MultiPoly:
    """Drop all terms containing the homogenizing (last) variable."""
    kept = {e[:-1]: c for e, c in f.terms.items() if e[-1] == 0}
    return MultiPoly(f.num_vars - 1, kept)


def eval_interval(f: MultiPoly, point: list[ComplexBox]) -> ComplexBox:
    """Box enclosing f(p) for every p in the product of the input boxes."""
    if len(point) != f.num_vars:
        raise ValueError("point length mismatch")
    max_deg = [f.degree_in(i) for i in range(f.num_vars)]
    powers: list[list[ComplexBox]] = []
    for i, box in enumerate(point):
        row = [ComplexBox.point(1)]
        for _ in range(max(0, max_deg[i])):
            row.append(row[-1] * box)
        powers.append(row)
    total = ComplexBox.point(0)
    for e, c in sorted(f.terms.items()):
        term = ComplexBox.point(c)
        for i, k in enumerate(e):
            if k:
                term = term * powers[i][k]
        total = total + term
    return total


@dataclass(frozen=True, slots=True)
class Magnitude:
    """Degree bound d and coefficient bitsize bound tau (tau >= 1)."""

    degree: int
    bitsize: int

    def __post_init__(self):
        if self.degree < 0 or self.bitsize < 1:
            raise ValueError("invalid magnitude")


@dataclass(frozen=True)
class PolynomialSystem:
    """A square system: n polynomials in n variables.  Zero-dimensionality
    is not checked here; it surfaces downstream as a vanishing resultant."""

    polys: tuple[MultiPoly, ...]

    def __post_init__(self):
        if not self.polys:
            raise NonSquareSystemError("empty system")
        n = self.polys[0].num_vars
        if any(p.num_vars != n for p in self.polys):
            raise ValueError("inconsistent variable counts")
        if len(self.polys) != n:
            raise NonSquareSystemError(
                f"{len(self.polys)} polynomials in {n} variables"
            )

    @property
    def num_vars(self) -> int:
        return self.polys[0].num_vars

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.total_degree for p in self.polys)

    @property
    def magnitude(self) -> Magnitude:
        return Magnitude(
            max(max(d, 0) for d in self.degrees),
            max(1, max(p.max_coeff_bits() for p in self.polys)),
        )

    @property
    def bezout_bound(self) -> int:
        return prod(max(d, 0) for d in self.degrees)


# ---------------------------------------------------------------------------
# canonical text format
# ---------------------------------------------------------------------------


def format_polynomial(f: MultiPoly) -> str:
    if f.is_zero():
        return "0"
    items = sorted(
        f.terms.items(), key=lambda item: (-sum(item[0]), tuple(-e for e in item[0]))
    )
    pieces = []
    for e, c in items:
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i + 1}")
            elif k > 1:
                factors.append(f"x{i + 1}^{k}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(pieces)
    if text.startswith("+ "):
        return text[2:]
    return "-" + text[2:]


def format_system(system: PolynomialSystem) -> str:
    lines = [f"vars {system.num_vars}"]
    lines += [format_polynomial(p) for p in system.polys]
    return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def error(self, message):
        raise PolynomialSyntaxError(message, self.line_no, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def take_var(self) -> int:
        # assumes current char is 'x'
        self.pos += 1
        idx = self.take_int()
        if idx < 1:
            self.error("variable indices start at x1")
        return idx - 1

    def parse_terms(self) -> dict[tuple[int, ...], int]:
        raw: list[tuple[dict[int, int], int]] = []
        sign = 1
        first = True
        while True:
            ch = self.peek()
            if not ch:
                if first:
                    self.error("empty polynomial")
                break
            if ch in "+-":
                sign = 1 if ch == "+" else -1
                self.pos += 1
            elif not first:
                self.error("expected '+' or '-' between terms")
            coeff, exps = self.parse_term()
            raw.append((exps, sign * coeff))
            sign = 1
            first = False
        n = 0
        for exps, _ in raw:
            for idx in exps:
                n = max(n, idx + 1)
        terms: dict[tuple[int, ...], int] = {}
        for exps, c in raw:
            e = [0] * n
            for idx, k in exps.items():
                e[idx] = k
            key = tuple(e)
            terms[key] = terms.get(key, 0) + c
        return terms

    def parse_term(self) -> tuple[int, dict[int, int]]:
        coeff = 1
        exps: dict[int, int] = {}
        saw_factor = False
        while True:
            ch = self.peek()
            if ch.isdigit():
                coeff *= self.take_int()
                saw_factor = True
            elif ch == "x":
                idx = self.take_var()
                power = 1
                if self.peek() == "^":
                    self.pos += 1
                    power = self.take_int()
                exps[idx] = exps.get(idx, 0) + power
                saw_factor = True
            else:
                self.error("expected a coefficient or variable")
            if self.peek() == "*":
                self.pos += 1
                continue
            break
        if not saw_factor:
            self.error("empty term")
        return coeff, exps


def parse_polynomial(text: str, num_vars: int | None = None, line_no: int = 1) -> MultiPoly:
    parser = _Parser(text.strip(), line_no)
    terms = parser.parse_terms()
    n_seen = max((len(e) for e in terms), default=0)
    n = num_vars if num_vars is not None else n_seen
    if n_seen > n:
        raise PolynomialSyntaxError(
            f"variable x{n_seen} exceeds declared count {n}", line_no
        )
    padded = {e + (0,) * (n - len(e)): c for e, c in terms.items()}
    return MultiPoly(n, padded)


def parse_system_text(text: str) -> PolynomialSystem:
    """One polynomial per line; optional first line 'vars n'; '#' comments."""
    lines = text.splitlines()
    declared = None
    body: list[tuple[int, str]] = []
    for i, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if declared is None and not body and stripped.startswith("vars"):
            rest = stripped[4:].strip()
            if not rest.isdigit() or int(rest) < 1:
                raise PolynomialSyntaxError("bad 'vars' declaration", i)
            declared = int(rest)
            continue
        body.append((i, stripped))
    if not body:
        raise PolynomialSyntaxError("no polynomials in input", 1)
    n = declared
    if n is None:
        # infer from the highest variable index across all lines
        n = 0
        for line_no, text_line in body:
            n = max(n, parse_polynomial(text_line, None, line_no).num_vars)
    polys = [parse_polynomial(text_line, n, line_no) for line_no, text_line in body]
    if len(polys) != n:
        raise NonSquareSystemError(
            f"{len(polys)} polynomials in {n} variables"
        )
    return PolynomialSystem(tuple(polys))
