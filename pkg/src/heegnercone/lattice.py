"""Even lattices: Gram matrices, signatures, named constructors, and the
finite discriminant group with its Q-values in Q/Z.

Lattices carry their direct-sum block structure (recorded at construction,
never detected) so the counting engine can convolve per-block residue
histograms.  All values are immutable after construction and safe for
concurrent reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CongruenceError, LatticeError

# ---------------------------------------------------------------------------
# integer linear algebra


def det_exact(mat) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(mat):
    """Return (diag, U, V) with U*mat*V diagonal, d_i | d_{i+1}, U, V unimodular."""
    n = len(mat)
    m = len(mat[0]) if n else 0
    a = [list(map(int, row)) for row in mat]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]
    size = min(n, m)

    def row_op(i, j, c):  # row_i += c * row_j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, c):  # col_i += c * col_j
        for row in a:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    def reduce_from(t0):
        for t in range(t0, size):
            while True:
                best = None
                for i in range(t, n):
                    for j in range(t, m):
                        if a[i][j] != 0 and (best is None or abs(a[i][j]) < best[0]):
                            best = (abs(a[i][j]), i, j)
                if best is None:
                    return
                _, pi, pj = best
                if pi != t:
                    a[t], a[pi] = a[pi], a[t]
                    u[t], u[pi] = u[pi], u[t]
                if pj != t:
                    for row in a:
                        row[t], row[pj] = row[pj], row[t]
                    for row in v:
                        row[t], row[pj] = row[pj], row[t]
                done = True
                for i in range(t + 1, n):
                    q = a[i][t] // a[t][t]
                    if q:
                        row_op(i, t, -q)
                    if a[i][t]:
                        done = False
                for j in range(t + 1, m):
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(j, t, -q)
                    if a[t][j]:
                        done = False
                if done:
                    break
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]

    reduce_from(0)
    # enforce the divisibility chain by folding violating pairs
    while True:
        bad = None
        for i in range(size):
            if a[i][i] == 0:
                continue
            for j in range(i + 1, size):
                if a[j][j] % a[i][i]:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad is None:
            break
        i, j = bad
        col_op(i, j, 1)
        reduce_from(i)
    diag = [a[i][i] for i in range(size)]
    return diag, u, v


def signature_exact(gram):
    """(n_plus, n_minus) of a symmetric matrix via exact congruent diagonalization."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    plus = minus = 0
    for k in range(n):
        if a[k][k] == 0:
            swapped = False
            for i in range(k + 1, n):
                if a[i][i] != 0:
                    a[k], a[i] = a[i], a[k]
                    for row in a:
                        row[k], row[i] = row[i], row[k]
                    swapped = True
                    break
            if not swapped:
                hit = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if a[i][j] != 0:
                            hit = (i, j)
                            break
                    if hit:
                        break
                if hit is None:
                    break  # zero block: degenerate remainder
                i, j = hit
                for t in range(n):
                    a[i][t] += a[j][t]
                for t in range(n):
                    a[t][i] += a[t][j]
                if i != k:
                    a[k], a[i] = a[i], a[k]
                    for row in a:
                        row[k], row[i] = row[i], row[k]
        d = a[k][k]
        if d == 0:
            break
        if d > 0:
            plus += 1
        else:
            minus += 1
        for i in range(k + 1, n):
            c = a[i][k] / d
            if c:
                for j in range(k + 1, n):
                    a[i][j] -= c * a[k][j]
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
            a[k][i] = Fraction(0)
    return plus, minus


def _invert_unimodular(v):
    """Exact inverse of a unimodular integer matrix."""
    n = len(v)
    a = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(v)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = [row[n:] for row in a]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise LatticeError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# ---------------------------------------------------------------------------
# blocks and lattices


@dataclass(frozen=True)
class Block:
    offset: int
    size: int
    kind: str  # "U", "E8", "rank1", "bin", "generic" -- display only

    def slice(self):
        return slice(self.offset, self.offset + self.size)


class EvenLattice:
    """Immutable even lattice with recorded block decomposition."""

    def __init__(self, gram, sig_plus=None, sig_minus=None, declared_splits=0,
                 name=None, blocks=None):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(gram)
        for i, row in enumerate(gram):
            if len(row) != n:
                raise LatticeError("gram matrix must be square")
            if row[i] % 2:
                raise LatticeError("gram diagonal must be even")
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError("gram matrix must be symmetric")
        self.gram = gram
        self.rank = n
        self.det = det_exact(gram)
        if self.det == 0:
            raise LatticeError("gram matrix is degenerate")
        sp, sm = signature_exact(gram)
        if sig_plus is not None and (sp, sm) != (sig_plus, sig_minus):
            raise LatticeError("declared signature does not match gram")
        self.sig_plus, self.sig_minus = sp, sm
        if declared_splits > min(sp, sm):
            raise LatticeError("declared hyperbolic splits exceed min(b+, b-)")
        self.declared_splits = declared_splits
        self.name = name or "lattice(rank %d)" % n
        if blocks is None:
            blocks = (Block(0, n, "generic"),) if n else ()
        self.blocks = tuple(blocks)
        if sum(b.size for b in self.blocks) != n:
            raise LatticeError("blocks do not tile the gram matrix")
        self._disc = None

    def __repr__(self):
        return "EvenLattice(%s, sig=(%d,%d))" % (
            self.name,
            self.sig_plus,
            self.sig_minus,
        )

    def __eq__(self, other):
        return isinstance(other, EvenLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    @property
    def signature(self):
        return self.sig_plus, self.sig_minus

    def block_gram(self, block: Block):
        return tuple(row[block.slice()] for row in self.gram[block.slice()])

    def q_value(self, vec) -> Fraction:
        """Q(v) = (v, v)/2 for a rational coordinate vector."""
        return self.pairing(vec, vec) / 2

    def pairing(self, v, w) -> Fraction:
        v = [Fraction(x) for x in v]
        w = [Fraction(x) for x in w]
        total = Fraction(0)
        for i, row in enumerate(self.gram):
            vi = v[i]
            if vi:
                for j, g in enumerate(row):
                    if g and w[j]:
                        total += vi * g * w[j]
        return total

    def negated(self) -> "EvenLattice":
        return EvenLattice(
            tuple(tuple(-x for x in row) for row in self.gram),
            declared_splits=self.declared_splits,
            name="-" + self.name,
            blocks=self.blocks,
        )

    def discriminant_group(self) -> "DiscGroup":
        if self._disc is None:
            self._disc = DiscGroup(self)
        return self._disc

    def level(self) -> int:
        return self.discriminant_group().level

    def is_unimodular(self) -> bool:
        return abs(self.det) == 1


# ---------------------------------------------------------------------------
# discriminant groups


class DiscElement:
    """Element of a discriminant group in Smith-basis coordinates."""

    __slots__ = ("group", "coords", "_order", "_q")

    def __init__(self, group, coords):
        self.group = group
        self.coords = tuple(c % d for c, d in zip(coords, group.orders))
        self._order = None
        self._q = None

    def __repr__(self):
        return "DiscElement%r" % (self.coords,)

    def __eq__(self, other):
        return (
            isinstance(other, DiscElement)
            and self.coords == other.coords
            and self.group is other.group
        )

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        return DiscElement(
            self.group, [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self):
        return DiscElement(self.group, [-c for c in self.coords])

    def scale(self, r: int) -> "DiscElement":
        return DiscElement(self.group, [r * c for c in self.coords])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def order(self) -> int:
        if self._order is None:
            o = 1
            for c, d in zip(self.coords, self.group.orders):
                f = d // math.gcd(d, c)
                o = o * f // math.gcd(o, f)
            self._order = o
        return self._order

    @property
    def q_value(self) -> Fraction:
        """Q(mu) reduced to the canonical representative in [0, 1)."""
        if self._q is None:
            q = self.group.lattice.q_value(self.dual_vector())
            self._q = q - math.floor(q)
        return self._q

    def dual_vector(self):
        """The canonical rational representative in lattice coordinates."""
        gens = self.group.generators
        n = self.group.lattice.rank
        vec = [Fraction(0)] * n
        for c, g in zip(self.coords, gens):
            if c:
                for i in range(n):
                    vec[i] += c * g[i]
        return tuple(vec)

    def pairing(self, other: "DiscElement") -> Fraction:
        b = self.group.lattice.pairing(self.dual_vector(), other.dual_vector())
        return b - math.floor(b)


class DiscGroup:
    """The finite quadratic module (dual mod lattice) via integer Smith reduction."""

    def __init__(self, lattice: EvenLattice):
        self.lattice = lattice
        diag, _u, v = smith_normal_form(lattice.gram)
        n = lattice.rank
        self._vinv = _invert_unimodular(v) if n else []
        self._diag = [abs(d) for d in diag]
        orders = []
        generators = []
        for i in range(n):
            d = abs(diag[i])
            if d == 1:
                continue
            gen = tuple(Fraction(v[r][i], d) for r in range(n))
            orders.append(d)
            generators.append(gen)
        self.orders = tuple(orders)
        self.generators = tuple(generators)
        self.size = 1
        for d in orders:
            self.size *= d
        if self.size != abs(lattice.det):
            raise LatticeError("discriminant group order mismatch")
        self.level = self._level()

    def _level(self) -> int:
        n = 1
        gens = [
            self.element(tuple(int(i == j) for j in range(len(self.orders))))
            for i in range(len(self.orders))
        ]
        for i, g in enumerate(gens):
            d = g.q_value.denominator
            n = n * d // math.gcd(n, d)
            for h in gens[i + 1 :]:
                d = g.pairing(h).denominator
                n = n * d // math.gcd(n, d)
        return n

    def __repr__(self):
        if not self.orders:
            return "DiscGroup(trivial)"
        return "DiscGroup(%s)" % " x ".join("Z/%d" % d for d in self.orders)

    def __len__(self):
        return self.size

    @property
    def exponent(self) -> int:
        e = 1
        for d in self.orders:
            e = e * d // math.gcd(e, d)
        return e

    def zero(self) -> DiscElement:
        return DiscElement(self, (0,) * len(self.orders))

    def element(self, coords) -> DiscElement:
        if len(coords) != len(self.orders):
            raise LatticeError("coordinate length mismatch")
        return DiscElement(self, coords)

    def elements(self):
        """All elements in lexicographic coordinate order (canonical)."""
        if not self.orders:
            yield self.zero()
            return
        coords = [0] * len(self.orders)
        while True:
            yield DiscElement(self, tuple(coords))
            i = len(coords) - 1
            while i >= 0:
                coords[i] += 1
                if coords[i] < self.orders[i]:
                    break
                coords[i] = 0
                i -= 1
            if i < 0:
                return

    def element_from_dual_vector(self, vec) -> DiscElement:
        """Coordinates of a dual-lattice vector modulo the lattice."""
        n = self.lattice.rank
        vec = [Fraction(x) for x in vec]
        prods = [
            sum(self._vinv[i][r] * vec[r] for r in range(n)) for i in range(n)
        ]
        coords = []
        for i in range(n):
            d = self._diag[i]
            if d == 1:
                frac = prods[i] - math.floor(prods[i])
                if frac != 0:
                    raise LatticeError("vector is not in the dual lattice")
                continue
            c = prods[i] * d
            if c.denominator != 1:
                raise LatticeError("vector is not in the dual lattice")
            coords.append(int(c) % d)
        return DiscElement(self, tuple(coords))

    def kernel_of_mult(self, r: int, target: DiscElement = None):
        """Solutions sigma of r*sigma = target (default 0), one cyclic factor at a time."""
        if target is None:
            target = self.zero()
        sols = [[]]
        for d, c in zip(self.orders, target.coords):
            g = math.gcd(r, d)
            if c % g:
                return []
            step = d // g
            if step > 1:
                base = (pow((r // g) % step, -1, step) * ((c // g) % step)) % step
            else:
                base = 0
            choices = sorted((base + step * j) % d for j in range(g))
            sols = [s + [x] for s in sols for x in choices]
        return [DiscElement(self, tuple(s)) for s in sols]


# ---------------------------------------------------------------------------
# constructors

_E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


def hyperbolic_plane() -> EvenLattice:
    return EvenLattice(
        ((0, 1), (1, 0)), declared_splits=1, name="U", blocks=(Block(0, 2, "U"),)
    )


def e8_lattice(negative: bool = False) -> EvenLattice:
    gram = _E8_GRAM if not negative else tuple(tuple(-x for x in r) for r in _E8_GRAM)
    return EvenLattice(
        gram, name="E8-" if negative else "E8", blocks=(Block(0, 8, "E8"),)
    )


def rank1_lattice(d: int) -> EvenLattice:
    """The rank-one lattice with gram [[2d]] (d may be negative)."""
    if d == 0:
        raise LatticeError("need d != 0")
    return EvenLattice(
        ((2 * d,),), name="rank1(%d)" % (2 * d), blocks=(Block(0, 1, "rank1"),)
    )


def direct_sum(*lattices, name=None) -> EvenLattice:
    """Block-diagonal sum; signatures, splits, and block records add."""
    if not lattices:
        raise LatticeError("empty direct sum")
    n = sum(latt.rank for latt in lattices)
    gram = [[0] * n for _ in range(n)]
    blocks = []
    off = 0
    for latt in lattices:
        for i in range(latt.rank):
            for j in range(latt.rank):
                gram[off + i][off + j] = latt.gram[i][j]
        for b in latt.blocks:
            blocks.append(Block(off + b.offset, b.size, b.kind))
        off += latt.rank
    return EvenLattice(
        gram,
        declared_splits=sum(latt.declared_splits for latt in lattices),
        name=name or "+".join(latt.name for latt in lattices),
        blocks=blocks,
    )


@lru_cache(maxsize=None)
def k3_lattice(d: int) -> EvenLattice:
    """The degree-2d polarized K3 moduli lattice of signature (19, 2)."""
    if d < 1:
        raise LatticeError("need d >= 1")
    return direct_sum(
        rank1_lattice(d),
        hyperbolic_plane(),
        hyperbolic_plane(),
        e8_lattice(),
        e8_lattice(),
        name="K3(%d)" % d,
    )


def hilbert_lattice(field_disc: int, ideal_basis=None) -> EvenLattice:
    """Lattice of a Hilbert modular surface: ideal norm form plus a hyperbolic plane.

    field_disc is a positive non-square integer = 0 or 1 mod 4, and ideal_basis
    an integral 2x2 matrix whose rows give a Z-basis of the ideal in the
    (1, omega) coordinates of the quadratic order of that discriminant
    (default: the identity, i.e. the full ring of integers).
    """
    D = field_disc
    if D <= 0 or D % 4 in (2, 3) or math.isqrt(D) ** 2 == D:
        raise LatticeError("invalid real-quadratic discriminant %d" % D)
    if ideal_basis is None:
        ideal_basis = ((1, 0), (0, 1))
    m = [[int(x) for x in row] for row in ideal_basis]
    if len(m) != 2 or any(len(r) != 2 for r in m):
        raise LatticeError("ideal basis must be 2x2")
    det_m = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det_m == 0:
        raise LatticeError("singular ideal basis")
    # omega has trace t and norm nm in the quadratic order of discriminant D
    if D % 4 == 1:
        t, nm = D, (D * D - D) // 4
    else:
        t, nm = 0, -D // 4
    norm_ideal = abs(det_m)

    def pair(a1, b1, a2, b2):
        # trace form Tr(x * conj(y)) for x = a1 + b1*omega, y = a2 + b2*omega
        return 2 * a1 * a2 + t * (a1 * b2 + a2 * b1) + 2 * nm * b1 * b2

    gram2 = [[0, 0], [0, 0]]
    for i in range(2):
        for j in range(2):
            val = Fraction(pair(m[i][0], m[i][1], m[j][0], m[j][1]), norm_ideal)
            if val.denominator != 1:
                raise LatticeError("basis does not span an ideal (non-integral form)")
            gram2[i][j] = int(val)
    if gram2[0][0] % 2 or gram2[1][1] % 2:
        raise LatticeError("ideal norm form is not even")
    binary = EvenLattice(gram2, name="normform(%d)" % D, blocks=(Block(0, 2, "bin"),))
    return direct_sum(binary, hyperbolic_plane(), name="hilbert(%d)" % D)


def unimodular_hyperbolic(n_planes: int, name=None) -> EvenLattice:
    """U^n: the standard even unimodular lattice of signature (n, n)."""
    return direct_sum(
        *[hyperbolic_plane() for _ in range(n_planes)],
        name=name or ("U^%d" % n_planes),
    )


def build_named(spec: str) -> EvenLattice:
    """Parse a constructor expression: terms joined by '+', powers via '^'.

    Examples: "U", "E8", "E8-", "rank1(2)", "K3(1)", "hilbert(5)",
    "rank1(2)+U^2", "U^18".
    """
    spec = spec.strip()
    parts = [p.strip() for p in spec.split("+")]
    factors = []
    for part in parts:
        if "^" in part:
            base, _, power = part.partition("^")
            count = int(power)
        else:
            base, count = part, 1
        if count < 1:
            raise LatticeError("bad power in %r" % part)
        base = base.strip()
        if base == "U":
            latt = hyperbolic_plane()
        elif base == "U-":
            latt = hyperbolic_plane().negated()
        elif base == "E8":
            latt = e8_lattice()
        elif base == "E8-":
            latt = e8_lattice(negative=True)
        elif base.startswith("rank1(") and base.endswith(")"):
            two_d = int(base[6:-1])
            if two_d % 2 or two_d == 0:
                raise LatticeError("rank1 takes a nonzero even gram entry")
            latt = rank1_lattice(two_d // 2)
        elif base.startswith("K3(") and base.endswith(")"):
            latt = k3_lattice(int(base[3:-1]))
        elif base.startswith("hilbert(") and base.endswith(")"):
            latt = hilbert_lattice(int(base[8:-1]))
        else:
            raise LatticeError("unknown constructor %r" % base)
        factors.extend([latt] * count)
    if len(factors) == 1:
        return factors[0]
    return direct_sum(*factors, name=spec)


# ---------------------------------------------------------------------------
# weight validation


@dataclass(frozen=True)
class WeightInfo:
    k: Fraction
    weil_congruence: bool
    cone_congruence: bool
    is_geometric: bool


def validate_weight(latt: EvenLattice, k) -> WeightInfo:
    """Check the signature congruences for a half-integral weight k >= 2."""
    k = Fraction(k)
    if (2 * k).denominator != 1:
        raise CongruenceError("weight must be half-integral")
    if k < 2:
        raise CongruenceError("weight must be at least 2")
    two_k = int(2 * k)
    diff = latt.sig_plus - latt.sig_minus
    if (two_k - diff) % 4 != 0:
        raise CongruenceError(
            "2k = %d incompatible with signature (%d, %d) mod 4"
            % (two_k, latt.sig_plus, latt.sig_minus)
        )
    return WeightInfo(
        k=k,
        weil_congruence=True,
        cone_congruence=(two_k - diff) % 8 == 4,
        is_geometric=(2 * k == latt.rank),
    )
