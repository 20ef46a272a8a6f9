"""Frobenius-semisimple Weil-Deligne representations as block multisets.

A block (atom, m) stands for rec(atom) tensor Sp(m), with Sp(m) in the
ascending-weight convention: underlying Weil representation with weights
|.|^0, ..., |.|^(m-1) and N e_i = e_{i+1}.  Geometric Frobenius acts on
Sp(m) by diag(1, q^-1, ..., q^(1-m)); this is the only convention for which
the invariant line ker N carries the eigenvalue q^(1-m) of the Sp(m)
L-factor.

For fully unramified data the module also builds honest matrices over the
quadratic scalar ring Q(i)[v]/(v^2 - q) ("Laurent polynomials in v with
v^2 = q"), from which L-factors and epsilon determinants are recomputed by
plain linear algebra.  That oracle is what validates the structural
formulas, including the Clebsch-Gordan expansion of Sp(a) tensor Sp(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bzclass import (
    Atom,
    LabelRegistry,
    RegistryError,
    unramified_atom,
)
from .qexact import (
    ExactScalar,
    GaussianRational,
    LFactor,
    LocalFieldContext,
    QI_ONE,
    QI_ZERO,
    _half_integer,
    as_q_power,
    norm_is_one,
)


@dataclass(frozen=True)
class WDBlock:
    atom: Atom
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("Sp length m must be >= 1")

    @property
    def dimension(self) -> int:
        return self.atom.degree * self.m

    def key(self):
        return (self.atom.label.name, self.atom.x, self.m)


@dataclass(frozen=True)
class WDRep:
    blocks: Tuple[WDBlock, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("a Weil-Deligne representation needs at least one block")

    @property
    def dimension(self) -> int:
        return sum(b.dimension for b in self.blocks)

    def key(self):
        return tuple(sorted(b.key() for b in self.blocks))


def sp_block(atom: Atom, m: int) -> WDBlock:
    return WDBlock(atom, m)


def sp_rep(atom: Atom, m: int) -> WDRep:
    return WDRep((WDBlock(atom, m),))


def direct_sum(rho1: WDRep, rho2: WDRep) -> WDRep:
    return WDRep(rho1.blocks + rho2.blocks)


def wd_twist(rho: WDRep, y) -> WDRep:
    y = _half_integer(y, "twist")
    return WDRep(tuple(WDBlock(b.atom.twist(y), b.m) for b in rho.blocks))


def wd_dual(rho: WDRep) -> WDRep:
    """Blockwise contragredient: Sp(m)^vee = |.|^(1-m) tensor Sp(m), so the
    block (a, m) goes to (a^vee(1-m), m) -- the same formula as for
    segments."""
    return WDRep(tuple(WDBlock(b.atom.dual().twist(1 - b.m), b.m) for b in rho.blocks))


def wd_tensor_char(rho: WDRep, chi: Atom, ctx: LocalFieldContext,
                   registry: Optional[LabelRegistry] = None) -> WDRep:
    """Tensor with a one-dimensional atom; mirrors class_tensor_char."""
    if chi.degree != 1:
        raise ValueError("tensor character must have degree 1")
    if chi.label.is_unramified_char():
        w = as_q_power(chi.label.omega, ctx)
        if w is not None:
            return wd_twist(rho, chi.x - w)
        blocks = []
        for b in rho.blocks:
            if not b.atom.label.is_unramified_char():
                raise RegistryError(
                    "label registry incomplete: unramified twist with non-lattice unit part "
                    "needs declared product labels for symbolic blocks"
                )
            value = b.atom.value_at_uniformizer() * chi.value_at_uniformizer()
            blocks.append(WDBlock(unramified_atom(value, ctx), b.m))
        return WDRep(tuple(blocks))
    if registry is None:
        raise RegistryError("label registry incomplete: ramified twist needs a registry")
    blocks = []
    for b in rho.blocks:
        lab = registry.product(b.atom.label, chi.label)
        blocks.append(WDBlock(Atom(lab, b.atom.x + chi.x), b.m))
    return WDRep(tuple(blocks))


def nilpotent_partition(rho: WDRep) -> List[int]:
    """Jordan type of N: each block contributes m with multiplicity n."""
    parts: List[int] = []
    for b in rho.blocks:
        parts.extend([b.m] * b.atom.degree)
    return sorted(parts, reverse=True)


def _block_bounded(b: WDBlock, ctx: LocalFieldContext) -> bool:
    # eigenvalue norms of eta(Frobenius) are |omega|^(1/n) * q^(-x-(m-1)/2);
    # test |center value| = 1 with the center twist x + (m-1)/2
    center = b.atom.twist(Fraction(b.m - 1, 2))
    return norm_is_one(center.value_at_uniformizer(), ctx)


def wd_predicates(rho: WDRep, ctx: LocalFieldContext) -> Dict[str, bool]:
    single = len(rho.blocks) == 1
    irreducible = single and rho.blocks[0].m == 1
    indecomposable = single
    unramified = all(b.m == 1 and b.atom.label.is_unramified_char() for b in rho.blocks)
    ik_spherical = all(b.atom.label.is_unramified_char() for b in rho.blocks)
    bounded = all(_block_bounded(b, ctx) for b in rho.blocks)
    return {
        "irreducible": irreducible,
        "indecomposable": indecomposable,
        "unramified": unramified,
        "ik_spherical": ik_spherical,
        "bounded_frobenius": bounded,
    }


def clebsch_gordan(m1: int, m2: int) -> List[Tuple[int, int]]:
    """Sp(m1) tensor Sp(m2) = sum over j of |.|^j tensor Sp(m1+m2-1-2j),
    j = 0 .. min(m1,m2)-1; forced by the SL2 dictionary and validated
    against the matrix oracle."""
    if m1 < 1 or m2 < 1:
        raise ValueError("Sp lengths must be >= 1")
    return [(j, m1 + m2 - 1 - 2 * j) for j in range(min(m1, m2))]


# ---------------------------------------------------------------------------
# scalar ring Q(i)[v]/(v^2 - q) and the explicit matrix model


@dataclass(frozen=True)
class VScalar:
    """u + w*v with v^2 = q; a field since q is never a square in Q(i)
    unless it is a square in Q, in which case w is normalized away."""

    q: int
    sqrt_q: Optional[int]
    u: GaussianRational
    w: GaussianRational

    @staticmethod
    def make(ctx: LocalFieldContext, u: GaussianRational, w: GaussianRational = QI_ZERO) -> "VScalar":
        if ctx.sqrt_q is not None and not w.is_zero():
            u = u + w.scale(Fraction(ctx.sqrt_q))
            w = QI_ZERO
        return VScalar(ctx.q, ctx.sqrt_q, u, w)

    def __add__(self, other: "VScalar") -> "VScalar":
        return VScalar(self.q, self.sqrt_q, self.u + other.u, self.w + other.w)

    def __sub__(self, other: "VScalar") -> "VScalar":
        return VScalar(self.q, self.sqrt_q, self.u - other.u, self.w - other.w)

    def __neg__(self) -> "VScalar":
        return VScalar(self.q, self.sqrt_q, -self.u, -self.w)

    def __mul__(self, other: "VScalar") -> "VScalar":
        qq = GaussianRational.of(self.q)
        return VScalar(
            self.q,
            self.sqrt_q,
            self.u * other.u + self.w * other.w * qq,
            self.u * other.w + self.w * other.u,
        )

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.w.is_zero()

    def inverse(self) -> "VScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.w.is_zero():
            return VScalar(self.q, self.sqrt_q, self.u.inverse(), QI_ZERO)
        qq = GaussianRational.of(self.q)
        denom = self.u * self.u - self.w * self.w * qq
        # u^2 = q*w^2 in Q(i) would force sqrt(q) rational, which the
        # normalization in make() already excluded
        inv = denom.inverse()
        return VScalar(self.q, self.sqrt_q, self.u * inv, -(self.w * inv))

    def __truediv__(self, other: "VScalar") -> "VScalar":
        return self * other.inverse()

    def divide_int(self, n: int) -> "VScalar":
        r = Fraction(1, n)
        return VScalar(self.q, self.sqrt_q, self.u.scale(r), self.w.scale(r))

    def to_exact_scalar(self) -> ExactScalar:
        """Convert a monomial c or c*v back to an ExactScalar; mixed values
        are not scalar-model monomials."""
        if self.w.is_zero():
            return ExactScalar(self.u, 0)
        if self.u.is_zero():
            return ExactScalar(self.w, 1)
        raise ValueError("matrix-oracle value is not a monomial in v")

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if not self.u.is_zero():
            parts.append(str(self.u))
        if not self.w.is_zero():
            parts.append(f"({self.w})*v")
        return " + ".join(parts)


def _v_zero(ctx: LocalFieldContext) -> VScalar:
    return VScalar.make(ctx, QI_ZERO)


def _v_one(ctx: LocalFieldContext) -> VScalar:
    return VScalar.make(ctx, QI_ONE)


def scalar_to_v(x: ExactScalar, ctx: LocalFieldContext) -> VScalar:
    a, r = divmod(x.k, 2)
    c = x.c.scale(ctx.q_pow(a))
    if r:
        return VScalar.make(ctx, QI_ZERO, c)
    return VScalar.make(ctx, c)


@dataclass(frozen=True)
class UnramMatrixRep:
    """Explicit matrices: diagonal frobenius over the v-scalars and a 0/1
    nilpotent, satisfying r(Phi) N = q^(-1) N r(Phi) for geometric Phi."""

    ctx: LocalFieldContext
    frobenius: Tuple[Tuple[VScalar, ...], ...]
    nilpotent: Tuple[Tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.frobenius)

    def render_frobenius(self) -> str:
        """Dense matrix of v-polynomial strings, for debugging."""
        return "\n".join("  ".join(e.render() for e in row) for row in self.frobenius)

    def __post_init__(self):
        n = len(self.frobenius)
        if any(len(row) != n for row in self.frobenius) or len(self.nilpotent) != n:
            raise ValueError("matrix dimensions disagree")
        qinv = scalar_to_v(ExactScalar.q_power(-1), self.ctx)
        # Weil-Deligne relation at Frobenius: Phi N = q^(-1) N Phi
        for i in range(n):
            for j in range(n):
                left = _v_zero(self.ctx)
                right = _v_zero(self.ctx)
                for k in range(n):
                    left = left + self.frobenius[i][k] * _int_v(self.ctx, self.nilpotent[k][j])
                    right = right + _int_v(self.ctx, self.nilpotent[i][k]) * self.frobenius[k][j]
                if not (left - qinv * right).is_zero():
                    raise ValueError("matrices violate the Weil-Deligne relation")


def _int_v(ctx: LocalFieldContext, n: int) -> VScalar:
    return VScalar.make(ctx, GaussianRational.of(n))


def explicit_unramified(rho: WDRep, ctx: LocalFieldContext) -> UnramMatrixRep:
    """Assemble the block-diagonal matrix model of an I_K-spherical rho."""
    diag: List[VScalar] = []
    dim = 0
    nil_entries: List[Tuple[int, int]] = []
    for b in rho.blocks:
        if not b.atom.label.is_unramified_char():
            raise ValueError("oracle undefined: non-unramified atom present")
        alpha = scalar_to_v(b.atom.value_at_uniformizer(), ctx)
        qinv = scalar_to_v(ExactScalar.q_power(-1), ctx)
        val = alpha
        for i in range(b.m):
            diag.append(val)
            if i + 1 < b.m:
                nil_entries.append((dim + i + 1, dim + i))
            val = val * qinv
        dim += b.m
    zero = _v_zero(ctx)
    frob = tuple(
        tuple(diag[i] if i == j else zero for j in range(dim)) for i in range(dim)
    )
    nil = [[0] * dim for _ in range(dim)]
    for i, j in nil_entries:
        nil[i][j] = 1
    return UnramMatrixRep(ctx, frob, tuple(tuple(row) for row in nil))


def dual_matrix_rep(rep: UnramMatrixRep) -> UnramMatrixRep:
    """Contragredient in the matrix model: Phi -> Phi^(-T) and N -> N^T (the
    sign of -N^T does not change kernels or determinants, and dropping it
    keeps the 0/1 entry convention)."""
    ctx = rep.ctx
    n = rep.dimension
    zero = _v_zero(ctx)
    frob = tuple(
        tuple(rep.frobenius[i][i].inverse() if i == j else zero for j in range(n))
        for i in range(n)
    )
    nil = tuple(tuple(rep.nilpotent[j][i] for j in range(n)) for i in range(n))
    return UnramMatrixRep(ctx, frob, nil)


def tensor_matrix_rep(r1: UnramMatrixRep, r2: UnramMatrixRep) -> UnramMatrixRep:
    """Kronecker product of the Frobenii; N = N1 (x) 1 + 1 (x) N2."""
    ctx = r1.ctx
    n1, n2 = r1.dimension, r2.dimension
    n = n1 * n2
    zero = _v_zero(ctx)
    frob = [[zero] * n for _ in range(n)]
    nil = [[0] * n for _ in range(n)]
    for i1 in range(n1):
        for i2 in range(n2):
            col = i1 * n2 + i2
            frob[col][col] = r1.frobenius[i1][i1] * r2.frobenius[i2][i2]
            for j1 in range(n1):
                if r1.nilpotent[j1][i1]:
                    nil[j1 * n2 + i2][col] += 1
            for j2 in range(n2):
                if r2.nilpotent[j2][i2]:
                    nil[i1 * n2 + j2][col] += 1
    return UnramMatrixRep(ctx, tuple(tuple(r) for r in frob), tuple(tuple(r) for r in nil))


def _rational_nullspace(mat: Sequence[Sequence[int]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Kernel basis of an integer matrix over Q, plus the free-column
    indices; each basis vector has a unit at its own free index."""
    rows = [[Fraction(x) for x in row] for row in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, nrows):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            vec[pc] = -rows[pr][fc]
        basis.append(vec)
    return basis, free


def _charpoly(mat: List[List[VScalar]], ctx: LocalFieldContext) -> List[VScalar]:
    """Monic characteristic polynomial det(T I - M), coefficients ascending,
    via Faddeev-LeVerrier (valid over any Q-algebra)."""
    k = len(mat)
    one = _v_one(ctx)
    zero = _v_zero(ctx)
    if k == 0:
        return [one]
    coeffs = [zero] * (k + 1)
    coeffs[k] = one
    current = [list(row) for row in mat]
    for step in range(1, k + 1):
        trace = zero
        for i in range(k):
            trace = trace + current[i][i]
        c = (-(one)) * trace.divide_int(step)
        coeffs[k - step] = c
        if step == k:
            break
        # current <- M (current + c I)
        shifted = [[current[i][j] + (c if i == j else zero) for j in range(k)] for i in range(k)]
        nxt = [[zero] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                acc = zero
                for t in range(k):
                    acc = acc + mat[i][t] * shifted[t][j]
                nxt[i][j] = acc
        current = nxt
    return coeffs


def _poly_eval(coeffs: List[VScalar], x: VScalar, ctx: LocalFieldContext) -> VScalar:
    acc = _v_zero(ctx)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: List[VScalar], root: VScalar, ctx: LocalFieldContext) -> List[VScalar]:
    """Divide by (T - root); caller guarantees the remainder vanishes."""
    out = [None] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * root
    if not carry.is_zero():
        raise ValueError("deflation by a non-root")
    return out


def _frobenius_on_kernel(rep: UnramMatrixRep) -> Tuple[List[List[VScalar]], List[VScalar]]:
    """Matrix of Phi restricted to ker N (Phi-stable), in the reduced-echelon
    kernel basis; also returns the ambient diagonal as root candidates."""
    ctx = rep.ctx
    basis, free = _rational_nullspace(rep.nilpotent)
    k = len(basis)
    n = rep.dimension
    diag = [rep.frobenius[i][i] for i in range(n)]
    mat = [[_v_zero(ctx)] * k for _ in range(k)]
    for j, vec in enumerate(basis):
        image = [diag[i] * VScalar.make(ctx, GaussianRational.of(vec[i])) for i in range(n)]
        # a kernel vector is determined by its free coordinates, so the
        # expansion of Phi b_j in the basis can be read off there ...
        coeffs = [image[fr] for fr in free]
        mat_col = coeffs
        for r in range(k):
            mat[r][j] = mat_col[r]
        # ... provided Phi b_j really lands in the kernel span; verify.
        for i in range(n):
            acc = _v_zero(ctx)
            for r, bvec in enumerate(basis):
                acc = acc + coeffs[r] * VScalar.make(ctx, GaussianRational.of(bvec[i]))
            if not (acc - image[i]).is_zero():
                raise ValueError("Frobenius does not stabilize ker N")
    return mat, diag


def matrix_l(rep: UnramMatrixRep) -> LFactor:
    """L-factor from the matrices: det(1 - T Phi | ker N)^(-1), computed by
    factoring the characteristic polynomial of Phi on the kernel.  The
    candidate eigenvalues are the ambient diagonal entries, and every trial
    root is verified by exact evaluation before deflating."""
    ctx = rep.ctx
    mat, diag = _frobenius_on_kernel(rep)
    coeffs = _charpoly(mat, ctx)
    factors: List[Tuple[ExactScalar, int]] = []
    for cand in diag:
        while len(coeffs) > 1 and _poly_eval(coeffs, cand, ctx).is_zero():
            coeffs = _poly_deflate(coeffs, cand, ctx)
            factors.append((cand.to_exact_scalar(), 1))
    if len(coeffs) != 1:
        raise ValueError("oracle could not factor the kernel characteristic polynomial")
    return LFactor.of(factors)


def matrix_eps_det(rep: UnramMatrixRep) -> ExactScalar:
    """det(-Phi | V / ker N) via multiplicativity: det(-Phi|V) divided by
    det(-Phi|ker N)."""
    ctx = rep.ctx
    mat, diag = _frobenius_on_kernel(rep)
    k = len(mat)
    n = rep.dimension
    det_v = _v_one(ctx)
    for d in diag:
        det_v = det_v * d
    coeffs = _charpoly(mat, ctx)
    det_k = coeffs[0]
    if k % 2 == 1:
        det_k = -det_k
    sign = -1 if (n - k) % 2 == 1 else 1
    quotient = det_v / det_k
    out = quotient.to_exact_scalar()
    return -out if sign < 0 else out
