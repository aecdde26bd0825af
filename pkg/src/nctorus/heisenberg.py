"""The Heisenberg module over A_theta, realised on sampled functions on R^p x Z^q.

The exact layer builds the embedding matrices T and S from theta.  The numeric
layer samples functions on ``[-L, L]^p`` (step h) times the box ``[-K, K]^q``
and implements the right action of the unitaries U_l, the A_theta-valued inner
product and the metaplectic lift of a block-diagonal W.

Phase-space coordinates are ordered ``(x, xi, m, eta)`` with x, xi in R^p and
m, eta in R^q; ``T'`` picks the (x, m) rows of T and ``T''`` the (xi, eta) rows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np
from scipy import ndimage

from .action import CyclicAction, reduce_mod_one, split_block_diagonal
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    OutOfGrid,
    SingularBlock,
    UnsupportedInSymbolicMode,
    UnsupportedW1,
)
from .exact_arith import SYMBOLIC, to_float
from .linalg import (
    block,
    block_matrix,
    det_bareiss,
    identity,
    integer_inverse,
    inverse,
    mat_equal,
    matmul,
    matneg,
    matvec,
    scale,
    transpose,
    zeros,
)
from .skewmat import SkewMatrix, pfaffian

ALIGN_TOL = 1e-9


def standard_J0(p: int) -> list:
    """(0 id_p; -id_p 0)."""
    return block_matrix([[zeros(p, p), identity(p)], [matneg(identity(p)), zeros(p, p)]])


def standard_J(p: int, q: int) -> list:
    return block_matrix([
        [standard_J0(p), zeros(2 * p, 2 * q)],
        [zeros(2 * q, 2 * p), block_matrix([[zeros(q, q), identity(q)], [matneg(identity(q)), zeros(q, q)]])],
    ])


def positive_part(M) -> list:
    """M with its negative entries replaced by zero."""
    return [[a if a > 0 else 0 for a in r] for r in M]


def symplectic_basis(form) -> list:
    """Columns u_1..u_p, v_1..v_p with u_i^t form v_j = delta_ij and all other pairings 0.

    Exact symplectic Gram-Schmidt; raises SingularBlock if the form is degenerate.
    """
    k = len(form)
    if k % 2:
        raise SingularBlock("odd-sized block is never invertible")

    def omega(a, b):
        return sum((a[i] * form[i][j] * b[j] for i in range(k) for j in range(k) if a[i] != 0 and b[j] != 0),
                   Fraction(0))

    pool = [[Fraction(int(i == j)) for i in range(k)] for j in range(k)]
    us, vs = [], []
    while pool:
        u = pool.pop(0)
        partner = next((idx for idx, w in enumerate(pool) if omega(u, w) != 0), None)
        if partner is None:
            raise SingularBlock("theta_11 is singular")
        v = pool.pop(partner)
        c = omega(u, v)
        u = [a / c for a in u]
        rest = []
        for w in pool:
            a, b = omega(w, v), omega(w, u)
            rest.append([wi - a * ui + b * vi for wi, ui, vi in zip(w, u, v)])
        pool = rest
        us.append(u)
        vs.append(v)
    return transpose(us + vs)


@dataclass(frozen=True)
class ModuleGeometry:
    """Exact T, S, J, J' for theta split at 2p."""

    n: int
    p: int
    q: int
    theta: SkewMatrix
    T11: tuple
    T: tuple
    S: tuple
    J: tuple
    Jprime: tuple

    def T_of(self, l: Sequence[int]) -> list:
        return matvec(self.T, list(l))

    def translation(self, l: Sequence[int]):
        """T'(l): the continuous shift (floats) and the lattice shift (ints)."""
        t = self.T_of(l)
        p, q = self.p, self.q
        return [to_float(a) for a in t[:p]], [int(a) for a in t[2 * p:2 * p + q]]

    def frequency(self, l: Sequence[int]):
        """T''(l) as floats: the xi part then the eta part."""
        t = self.T_of(l)
        p, q = self.p, self.q
        return [to_float(a) for a in t[p:2 * p]] + [to_float(a) for a in t[2 * p + q:]]

    def phase_exponent(self, l: Sequence[int]):
        """Exact <-T(l), J' T(l)/2>."""
        t = self.T_of(l)
        jt = matvec(self.Jprime, t)
        return -sum((a * b for a, b in zip(t, jt)), Fraction(0)) / 2

    def to_json(self) -> dict:
        return {
            "n": self.n, "p": self.p, "q": self.q,
            "T11": [[str(a) for a in r] for r in self.T11],
            "T": [[str(a) for a in r] for r in self.T],
            "S": [[str(a) for a in r] for r in self.S],
        }


def build_geometry(theta: SkewMatrix, p: int, t11=None) -> ModuleGeometry:
    """T and S for the module with a 2p x 2p continuous block; ``t11`` overrides the default T11."""
    if theta.mode == SYMBOLIC:
        raise UnsupportedInSymbolicMode("the module geometry needs numeric theta")
    n = theta.n
    if not 1 <= 2 * p <= n:
        raise DimensionMismatch(f"need 1 <= 2p <= n (p={p}, n={n})")
    q = n - 2 * p
    th11, th12, th21, th22 = theta.blocks(2 * p)
    pf = pfaffian(SkewMatrix(th11))
    if pf == 0:
        raise SingularBlock("pf(theta_11) = 0")
    J0 = standard_J0(p)
    if t11 is None:
        T11 = inverse(symplectic_basis(th11))
    else:
        T11 = [[a for a in r] for r in t11]
    if not mat_equal(matmul(matmul(transpose(T11), J0), T11), th11):
        raise InvariantViolation("T11^t J0 T11 != theta_11")
    d = det_bareiss(T11)
    if d != pf and d != -pf:
        raise InvariantViolation("|det T11| != |pf(theta_11)|")

    half = Fraction(1, 2)
    T32 = scale(th22, half) if q else []
    T = block_matrix([
        [T11, zeros(2 * p, q)],
        [zeros(q, 2 * p), identity(q)],
        [th21, T32],
    ]) if q else [list(r) for r in T11]

    A = matmul(J0, inverse(transpose(T11)))
    if q:
        S = block_matrix([
            [A, matneg(matmul(A, transpose(th21)))],
            [zeros(q, 2 * p), identity(q)],
            [zeros(q, 2 * p), transpose(T32)],
        ])
    else:
        S = A
    J = standard_J(p, q)
    if not mat_equal(matmul(matmul(transpose(T), J), T), theta.rows()):
        raise InvariantViolation("T^t J T != theta")
    freeze = lambda M: tuple(tuple(r) for r in M)
    return ModuleGeometry(n, p, q, theta, freeze(T11), freeze(T), freeze(S), freeze(J), freeze(positive_part(J)))


# ---------------------------------------------------------------------------
# sampled functions


@dataclass(frozen=True)
class Grid:
    """``[-L, L]^p`` with step h, times the lattice box ``[-K, K]^q``."""

    p: int
    q: int
    L: float
    h: float
    K: int

    def __post_init__(self):
        if self.L <= 0 or self.h <= 0 or self.K < 0 or self.p < 0 or self.q < 0:
            raise ValueError("grid needs L, h > 0 and K >= 0")
        steps = 2 * self.L / self.h
        if abs(steps - round(steps)) > ALIGN_TOL:
            raise ValueError("2L must be a multiple of h")

    @property
    def M(self) -> int:
        return int(round(2 * self.L / self.h)) + 1

    @property
    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.M)

    @property
    def box(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    @property
    def shape(self) -> tuple:
        return (self.M,) * self.p + (2 * self.K + 1,) * self.q

    @property
    def weight(self) -> float:
        # trapezoid rule on the continuous axes; the end corrections vanish for functions decaying at +-L
        return self.h ** self.p

    def coordinates(self) -> list:
        """Broadcastable coordinate arrays, continuous axes first."""
        axes = [self.axis] * self.p + [self.box.astype(float)] * self.q
        return np.meshgrid(*axes, indexing="ij", sparse=True) if axes else []


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise DimensionMismatch(f"values have shape {v.shape}, grid expects {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function has non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def norm(self) -> float:
        return math.sqrt(l2_inner(self, self).real)


def gaussian(grid: Grid, center: Sequence[float] = None, width: float = 1.0, freq: Sequence[float] = None,
             lattice: str = "delta") -> GridFunction:
    """exp(-pi |x - c|^2 / width) e(freq . x) on the continuous part.

    On the lattice part, ``lattice`` is "delta" (supported at m = 0) or "gaussian" (exp(-pi |m|^2)).
    """
    p, q = grid.p, grid.q
    center = [0.0] * p if center is None else list(center)
    freq = [0.0] * p if freq is None else list(freq)
    coords = grid.coordinates()
    vals = np.ones(grid.shape, dtype=complex)
    for a in range(p):
        x = coords[a]
        vals = vals * np.exp(-math.pi * (x - center[a]) ** 2 / width) * np.exp(2j * math.pi * freq[a] * x)
    for b in range(q):
        m = coords[p + b]
        if lattice == "delta":
            vals = vals * (m == 0)
        elif lattice == "gaussian":
            vals = vals * np.exp(-math.pi * m ** 2)
        else:
            raise ValueError(f"unknown lattice profile {lattice!r}")
    return GridFunction(grid, vals)


def l2_inner(f: GridFunction, g: GridFunction) -> complex:
    """<f, g> = integral of f conj(g)."""
    if f.grid != g.grid:
        raise DimensionMismatch("functions live on different grids")
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.weight)


def _e(x):
    return np.exp(2j * math.pi * x)


def _shift(values: np.ndarray, grid: Grid, cont: Sequence[float], disc: Sequence[int]) -> np.ndarray:
    """g(x) = f(x - shift), zero outside the grid."""
    out = values
    for a, s in enumerate(cont):
        if abs(s) > grid.L + ALIGN_TOL:
            raise OutOfGrid(f"continuous shift {s} exceeds the grid extent {grid.L}")
        k = s / grid.h
        if abs(k - round(k)) < ALIGN_TOL:
            out = _int_shift(out, a, int(round(k)))
        else:
            shift = [0.0] * out.ndim
            shift[a] = k
            out = (ndimage.shift(out.real, shift, order=1, mode="constant", cval=0.0)
                   + 1j * ndimage.shift(out.imag, shift, order=1, mode="constant", cval=0.0))
    for b, m in enumerate(disc):
        if abs(m) > grid.K:
            raise OutOfGrid(f"lattice shift {m} exceeds the box [-{grid.K}, {grid.K}]")
        out = _int_shift(out, grid.p + b, int(m))
    return out


def _int_shift(values: np.ndarray, axis: int, k: int) -> np.ndarray:
    if k == 0:
        return values
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if k > 0:
        src[axis], dst[axis] = slice(0, -k), slice(k, None)
    else:
        src[axis], dst[axis] = slice(-k, None), slice(0, k)
    out[tuple(dst)] = values[tuple(src)]
    return out


def _modulation(grid: Grid, freq: Sequence[float]) -> np.ndarray:
    coords = grid.coordinates()
    phase = np.zeros(grid.shape)
    for c, xi in zip(coords, freq):
        if xi:
            phase = phase + c * xi
    return _e(phase)


def _check_l(l, geom: ModuleGeometry) -> list:
    l = [int(a) for a in l]
    if len(l) != geom.n:
        raise DimensionMismatch(f"l has length {len(l)}, expected {geom.n}")
    return l


def _check_grid(f: GridFunction, geom: ModuleGeometry):
    if (f.grid.p, f.grid.q) != (geom.p, geom.q):
        raise DimensionMismatch("grid dimensions do not match the module geometry")


def act_U(f: GridFunction, l: Sequence[int], geom: ModuleGeometry) -> GridFunction:
    """(f U_l)(x) = e(<-T(l), J'T(l)/2>) e(x . T''(l)) f(x - T'(l))."""
    _check_grid(f, geom)
    l = _check_l(l, geom)
    cont, disc = geom.translation(l)
    shifted = _shift(f.values, f.grid, cont, disc)
    c = float(reduce_mod_one(geom.phase_exponent(l)))
    return f.with_values(_e(c) * _modulation(f.grid, geom.frequency(l)) * shifted)


def inner_A(f: GridFunction, g: GridFunction, l: Sequence[int], geom: ModuleGeometry) -> complex:
    """<f, g>(l) = e(<-T(l), J'T(l)/2>) integral of e(-x . T''(l)) g(x + T'(l)) conj(f(x))."""
    _check_grid(f, geom)
    l = _check_l(l, geom)
    cont, disc = geom.translation(l)
    shifted = _shift(g.values, g.grid, [-s for s in cont], [-m for m in disc])
    freq = [-x for x in geom.frequency(l)]
    c = float(reduce_mod_one(geom.phase_exponent(l)))
    integrand = _modulation(f.grid, freq) * shifted * np.conj(f.values)
    return complex(_e(c) * np.sum(integrand) * f.grid.weight)


# ---------------------------------------------------------------------------
# metaplectic lift of W = diag(W1, W4)

IDENTITY, PARITY, FOURIER, INVERSE_FOURIER = "identity", "parity", "fourier", "inverse_fourier"
_INVERSE_KIND = {IDENTITY: IDENTITY, PARITY: PARITY, FOURIER: INVERSE_FOURIER, INVERSE_FOURIER: FOURIER}


@dataclass(frozen=True)
class MetaplecticOp:
    kind: str
    phase: complex = 1.0

    def __post_init__(self):
        if self.kind not in _INVERSE_KIND:
            raise UnsupportedW1(f"unknown metaplectic kind {self.kind!r}")
        if abs(abs(self.phase) - 1) > 1e-12:
            raise ValueError("the metaplectic phase must be a unit complex number")


def metaplectic_kind(geom: ModuleGeometry, W1) -> str:
    """Catalog lookup for the symplectic matrix T11 W1^{-1} T11^{-1} that the lift must implement."""
    W1_inv = integer_inverse(W1)
    if W1_inv is None:
        raise UnsupportedW1("W1 is not unimodular")
    A = matmul(matmul(geom.T11, W1_inv), inverse(geom.T11))
    k = 2 * geom.p
    if mat_equal(A, identity(k)):
        return IDENTITY
    if mat_equal(A, matneg(identity(k))):
        return PARITY
    if geom.p == 1 and mat_equal(A, [[0, 1], [-1, 0]]):
        return FOURIER
    if geom.p == 1 and mat_equal(A, [[0, -1], [1, 0]]):
        return INVERSE_FOURIER
    raise UnsupportedW1(f"no metaplectic operator in the catalog for T11 W1^-1 T11^-1 = {A}")


def _fourier_axis0(values: np.ndarray, grid: Grid, sign: int) -> np.ndarray:
    x = grid.axis
    kernel = grid.h * _e(sign * np.outer(x, x))
    return np.tensordot(kernel, values, axes=([1], [0]))


def _apply_kind(values: np.ndarray, grid: Grid, kind: str) -> np.ndarray:
    if kind == IDENTITY:
        return values
    if kind == PARITY:
        return values[(slice(None, None, -1),) * grid.p]
    if kind == FOURIER:
        return _fourier_axis0(values, grid, -1)
    return _fourier_axis0(values, grid, +1)


def _sharp(values: np.ndarray, grid: Grid, W4) -> np.ndarray:
    """f#(x1, x2) = f(x1, W4 x2), zero where W4 x2 leaves the box."""
    q, K = grid.q, grid.K
    if q == 0:
        return values
    out = np.zeros_like(values)
    for m in product(range(-K, K + 1), repeat=q):
        target = matvec(W4, list(m))
        if all(abs(t) <= K for t in target):
            dst = (Ellipsis,) + tuple(a + K for a in m)
            src = (Ellipsis,) + tuple(int(t) + K for t in target)
            out[dst] = values[src]
    return out


def _blocks(act: CyclicAction, geom: ModuleGeometry):
    if act.theta != geom.theta:
        raise DimensionMismatch("the action and the geometry use different theta")
    return split_block_diagonal(act.W, 2 * geom.p)


def sqrt_det(W4) -> complex:
    """Principal square root of det(W4) (1 for the empty block)."""
    return cmath.sqrt(det_bareiss(W4)) if W4 else 1.0


def act_W(f: GridFunction, act: CyclicAction, geom: ModuleGeometry, op: MetaplecticOp = None) -> GridFunction:
    """(fW)(x1, x2) = phase * sqrt(det W4) * (f# W1)(x1)."""
    _check_grid(f, geom)
    W1, W4 = _blocks(act, geom)
    kind = metaplectic_kind(geom, W1)
    if op is None:
        op = MetaplecticOp(kind)
    elif op.kind != kind:
        raise UnsupportedW1(f"W1 needs the {kind} operator, got {op.kind}")
    vals = _apply_kind(_sharp(f.values, f.grid, W4), f.grid, kind)
    return f.with_values(op.phase * sqrt_det(W4) * vals)


def act_W_inverse(f: GridFunction, act: CyclicAction, geom: ModuleGeometry, op: MetaplecticOp = None) -> GridFunction:
    """The inverse operator of ``act_W`` (same branch of the square root, inverted)."""
    _check_grid(f, geom)
    W1, W4 = _blocks(act, geom)
    kind = metaplectic_kind(geom, W1)
    op = MetaplecticOp(kind) if op is None else op
    W4_inv = integer_inverse(W4) if W4 else W4
    vals = _sharp(_apply_kind(f.values, f.grid, _INVERSE_KIND[kind]), f.grid, W4_inv)
    return f.with_values(vals / (op.phase * sqrt_det(W4)))


# ---------------------------------------------------------------------------
# residuals


def _rel(diff: np.ndarray, f: GridFunction) -> float:
    nf = f.norm()
    return math.sqrt(float(np.sum(np.abs(diff) ** 2)) * f.grid.weight) / nf


def commutation_residual(f: GridFunction, geom: ModuleGeometry, i: int, j: int) -> float:
    """|| (f U_i) U_j - e(theta_ij) (f U_j) U_i || / ||f|| for 1-based generator indices."""
    ei = [int(k == i - 1) for k in range(geom.n)]
    ej = [int(k == j - 1) for k in range(geom.n)]
    left = act_U(act_U(f, ei, geom), ej, geom).values
    right = act_U(act_U(f, ej, geom), ei, geom).values
    c = float(reduce_mod_one(geom.theta.entries[i - 1][j - 1]))
    return _rel(left - _e(c) * right, f)


def inner_identity_residual(f: GridFunction, g: GridFunction, l, geom: ModuleGeometry) -> float:
    """|<f, g>(l) - <g U_{-l}, f>_{L2}| / (||f|| ||g||)."""
    lhs = inner_A(f, g, l, geom)
    rhs = l2_inner(act_U(g, [-a for a in l], geom), f)
    return abs(lhs - rhs) / (f.norm() * g.norm())


def verify_covariance(f: GridFunction, act: CyclicAction, l, geom: ModuleGeometry, op: MetaplecticOp = None) -> float:
    """|| (fW) U_l - (f U_{Wl}) W || / ||f||."""
    Wl = matvec(act.W, list(l))
    lhs = act_U(act_W(f, act, geom, op), l, geom)
    rhs = act_W(act_U(f, Wl, geom), act, geom, op)
    return _rel(lhs.values - rhs.values, f)


def verify_unitarity(f: GridFunction, g: GridFunction, act: CyclicAction, geom: ModuleGeometry,
                     op: MetaplecticOp = None) -> float:
    """|<fW, g> - <f, g W^{-1}>| / (||f|| ||g||)."""
    lhs = l2_inner(act_W(f, act, geom, op), g)
    rhs = l2_inner(f, act_W_inverse(g, act, geom, op))
    return abs(lhs - rhs) / (f.norm() * g.norm())


def verify_inner_compat(f: GridFunction, g: GridFunction, act: CyclicAction, ls, geom: ModuleGeometry,
                        op: MetaplecticOp = None) -> float:
    """max over l of |<f, gW>(l) - <f W^{-1}, g>(W l)| / (||f|| ||g||).

    The right side is alpha_{W^{-1}} applied to the coefficient function l -> <f W^{-1}, g>(l).
    """
    gW = act_W(g, act, geom, op)
    fWi = act_W_inverse(f, act, geom, op)
    scale_ = f.norm() * g.norm()
    worst = 0.0
    for l in ls:
        lhs = inner_A(f, gW, l, geom)
        rhs = inner_A(fWi, g, matvec(act.W, list(l)), geom)
        worst = max(worst, abs(lhs - rhs) / scale_)
    return worst


def fourier_fixed_point_residual(grid: Grid) -> float:
    """|| F g - g || / ||g|| for the self-dual Gaussian g = exp(-pi x^2), p = 1."""
    if grid.p != 1:
        raise UnsupportedW1("the Fourier operator is only catalogued for p = 1")
    g = gaussian(grid)
    return _rel(_apply_kind(g.values, grid, FOURIER) - g.values, g)
