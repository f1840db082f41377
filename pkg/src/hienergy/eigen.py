"""Spectral machinery: the pattern Gram |(B-y) n (B-y')|^k on A x A, its
eigenvalues, lower bounds for magnification ratios, and the convolution
operator whose eigenfunctions on a multiplicative subgroup are the
multiplicative characters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import groups, moments
from .groups import GroupSpec
from .gset import GSet
from .setops import CapExceededError, Caps, DEFAULT_CAPS

INVARIANT_RTOL = 1e-8
EIG_SLACK = 1e-9


class EigenConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Jacobi eigensolver


def jacobi_eigenvalues(matrix: np.ndarray, rel_tol: float = 1e-10,
                       max_sweeps: int = 64) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic-by-rows Jacobi.

    Deterministic sweep order; stops when the off-diagonal Frobenius mass
    drops below rel_tol * ||matrix||_F.  Returns values sorted descending.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return a.ravel().copy()
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.zeros(n)
    thresh = rel_tol * norm
    rotate_floor = thresh / (n * n)
    for _ in range(max_sweeps):
        hollow = a.copy()
        np.fill_diagonal(hollow, 0.0)
        if float(np.linalg.norm(hollow)) <= thresh:
            return np.sort(np.diag(a))[::-1].copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= rotate_floor:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    raise EigenConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


# ---------------------------------------------------------------------------
# pattern Gram


@dataclass
class PatternGram:
    a: GSet
    b: GSet
    k: int
    gram: np.ndarray  # |A| x |A| symmetric nonnegative integers


def build_gram(a: GSet, b: GSet, k: int, caps: Caps = DEFAULT_CAPS) -> PatternGram:
    """Gram(y, y') = |(B-y) n (B-y')|^k = (B o B)(y'-y)^k on A x A.

    Validates trace = |A||B|^k and squared Frobenius norm = E_{2k+1}(A, B)
    at construction.
    """
    if a.group != b.group:
        raise groups.GroupError("pattern Gram needs sets in one group")
    if k < 1:
        raise ValueError("pattern depth k must be >= 1")
    if not a or not b:
        raise ValueError("pattern Gram needs nonempty sets")
    n = len(a)
    if n > caps.gram:
        raise CapExceededError(f"|A| = {n} exceeds Gram cap {caps.gram}")
    corr = moments.correlate(b, b)
    g = a.group
    gram = np.zeros((n, n), dtype=np.int64)
    for i, y in enumerate(a.elems):
        for j in range(i, n):
            v = corr.value(groups.op_sub(g, a.elems[j], y)) ** k
            gram[i, j] = v
            gram[j, i] = v
    trace = int(np.trace(gram.astype(object)))
    if trace != n * len(b) ** k:
        raise AssertionError(f"Gram trace {trace} != |A||B|^k = {n * len(b) ** k}")
    frob = int(sum(int(v) ** 2 for v in gram.ravel()))
    expected = moments.energy_k_pair(a, b, 2 * k + 1)
    if frob != expected:
        raise AssertionError(f"Gram Frobenius^2 {frob} != E_(2k+1)(A,B) = {expected}")
    return PatternGram(a=a, b=b, k=k, gram=gram)


def singular_spectrum(pg: PatternGram) -> np.ndarray:
    """Descending eigenvalues lambda_j^2 of the Gram; invariants re-checked."""
    lam2 = np.clip(jacobi_eigenvalues(pg.gram.astype(np.float64)), 0.0, None)
    n = len(pg.a)
    trace = float(n * len(pg.b) ** pg.k)
    if not math.isclose(float(lam2.sum()), trace, rel_tol=INVARIANT_RTOL):
        raise AssertionError("sum of lambda^2 drifted from |A||B|^k")
    frob = float(moments.energy_k_pair(pg.a, pg.b, 2 * pg.k + 1))
    if not math.isclose(float((lam2 ** 2).sum()), frob, rel_tol=INVARIANT_RTOL):
        raise AssertionError("sum of lambda^4 drifted from E_(2k+1)(A,B)")
    floor = float(moments.energy_k_pair(pg.a, pg.b, pg.k + 1)) / n
    if lam2[0] < floor * (1 - EIG_SLACK) - EIG_SLACK:
        raise AssertionError(f"lambda_1^2 = {lam2[0]} below E_(k+1)(A,B)/|A| = {floor}")
    return lam2


def spectrum_report(pg: PatternGram, lam2: np.ndarray | None = None) -> dict:
    if lam2 is None:
        lam2 = singular_spectrum(pg)
    return {
        "a_size": len(pg.a),
        "b_size": len(pg.b),
        "k": pg.k,
        "lambdas_sq": [float(v) for v in lam2],
        "trace_check": float(lam2.sum()) ,
        "frobenius_check": float((lam2 ** 2).sum()),
    }


def magnification_lower_bounds(a: GSet, b: GSet, k: int,
                               caps: Caps = DEFAULT_CAPS) -> dict[str, float]:
    """|B|^2k / lambda_1^2 and |B|^2k / sqrt(E_(2k+1)(A,B)); the first
    dominates the second."""
    pg = build_gram(a, b, k, caps)
    lam2 = singular_spectrum(pg)
    bk = float(len(b)) ** (2 * k)
    bound_eig = bk / float(lam2[0])
    bound_energy = bk / math.sqrt(float(moments.energy_k_pair(a, b, 2 * k + 1)))
    assert bound_eig >= bound_energy * (1 - EIG_SLACK)
    return {"bound_eig": bound_eig, "bound_energy": bound_energy}


def union_family_lower_bound(a1: GSet, family_sizes: Sequence[int], a: GSet, b: GSet,
                             k: int) -> float:
    """(sum_y |B^(y)|)^2 / E_(k+1)(A, B), a lower bound for the union of the
    diagonal translates B^(y) +- Delta(y) over y in A1 <= A."""
    if not a1.issubset(a):
        raise ValueError("A1 must be a subset of A")
    if len(family_sizes) != len(a1):
        raise ValueError("need one family size per element of A1")
    total = float(sum(family_sizes))
    denom = float(moments.energy_k_pair(a, b, k + 1))
    return total ** 2 / denom


# ---------------------------------------------------------------------------
# the operator f -> psi . (phi^c^ * f)


def _flat_function(g: GroupSpec, f) -> np.ndarray:
    """Coerce a GSet / ConvTable / array / callable to a dense complex vector."""
    n = g.order
    if isinstance(f, GSet):
        out = np.zeros(n, dtype=np.complex128)
        out[f.flat_indices()] = 1.0
        return out
    if isinstance(f, moments.ConvTable):
        return f.array.astype(np.complex128).ravel()
    if callable(f):
        return np.array([f(x) for x in groups.enumerate_elements(g)], dtype=np.complex128)
    arr = np.asarray(f, dtype=np.complex128).ravel()
    if arr.size != n:
        raise ValueError(f"dense function must have {n} entries")
    return arr


def _group_fft(g: GroupSpec, flat: np.ndarray) -> np.ndarray:
    return np.fft.fftn(flat.reshape(g.moduli)).ravel()


def _group_ifft(g: GroupSpec, flat: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(flat.reshape(g.moduli)).ravel()


def _reflect_flat(g: GroupSpec, flat: np.ndarray) -> np.ndarray:
    idx = np.arange(g.order)
    neg = np.array([groups.flat_index(g, groups.op_neg(g, x))
                    for x in groups.enumerate_elements(g)], dtype=np.int64)
    out = np.empty_like(flat)
    out[neg] = flat[idx]
    return out


def operator_apply(g: GroupSpec, phi, psi, f) -> np.ndarray:
    """(T^phi_psi f)(x) = psi(x) (phi^c^ * f)(x) as a dense vector."""
    if not g.is_cyclic:
        raise groups.GroupError("operator needs a finite cyclic product")
    phi_v = _flat_function(g, phi)
    psi_v = _flat_function(g, psi)
    f_v = _flat_function(g, f)
    kernel = _group_fft(g, _reflect_flat(g, phi_v))  # phi^c^
    conv = _group_ifft(g, _group_fft(g, kernel) * _group_fft(g, f_v))
    return psi_v * conv


def restricted_matrix(g: GroupSpec, phi, e_set: GSet) -> np.ndarray:
    """Matrix of the operator restricted to functions supported on E."""
    kernel = _group_fft(g, _reflect_flat(g, _flat_function(g, phi)))
    idx = e_set.flat_indices()
    n = g.order
    diff = (idx[:, None] - idx[None, :]) % n
    return kernel[diff]


def bilinear_residual(g: GroupSpec, phi, e_set: GSet, u, v) -> float:
    """Relative residual of <T^phi_E u, v> = sum_x phi(x) u^(x) conj(v^(x))
    for u, v supported on E."""
    u_v = _flat_function(g, u)
    v_v = _flat_function(g, v)
    mask = np.ones(g.order, dtype=bool)
    mask[e_set.flat_indices()] = False
    if np.abs(u_v[mask]).max(initial=0.0) > 0 or np.abs(v_v[mask]).max(initial=0.0) > 0:
        raise ValueError("u and v must be supported on E")
    lhs = complex(np.vdot(v_v, operator_apply(g, phi, _indicator(g, e_set), u_v)))
    phi_v = _flat_function(g, phi)
    rhs = complex((phi_v * _group_fft(g, u_v) * np.conj(_group_fft(g, v_v))).sum())
    scale = max(1.0, abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


def _indicator(g: GroupSpec, a: GSet) -> np.ndarray:
    out = np.zeros(g.order, dtype=np.complex128)
    out[a.flat_indices()] = 1.0
    return out


# ---------------------------------------------------------------------------
# multiplicative subgroups


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


def multiplicative_order_elements(gamma: GSet) -> tuple[int, int]:
    """Validate that gamma is a multiplicative subgroup of Z/p^*; return (p, t)."""
    g = gamma.group
    if not (g.is_cyclic and len(g.moduli) == 1):
        raise ValueError("multiplicative subgroups live in a single Z/p")
    p = g.moduli[0]
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    vals = {e[0] for e in gamma.elems}
    if 0 in vals or 1 not in vals:
        raise ValueError("subgroup must contain 1 and avoid 0")
    for x in vals:
        for y in vals:
            if (x * y) % p not in vals:
                raise ValueError("set is not multiplicatively closed")
    return p, len(vals)


@dataclass
class SubgroupEigenReport:
    p: int
    t: int
    k: int
    eigenvalues: list[float]
    residuals: list[float]
    max_at_trivial: bool
    kernel_transform_nonneg: bool
    measured_max: float
    claimed_max: float | None
    claimed_ratio: float | None
    connected_ok: bool
    connected_equality_at_indicator: bool

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def subgroup_characters(gamma: GSet) -> np.ndarray:
    """t x N matrix of multiplicative characters chi_alpha supported on Gamma."""
    from .genset import primitive_root  # late import: genset depends on gset only

    p, t = multiplicative_order_elements(gamma)
    g = gamma.group
    root = primitive_root(p)
    h = pow(root, (p - 1) // t, p)
    order = [pow(h, l, p) for l in range(t)]
    if set(order) != {e[0] for e in gamma.elems}:
        raise ValueError("set is not the subgroup generated by a primitive-root power")
    chars = np.zeros((t, p), dtype=np.complex128)
    for alpha in range(t):
        for l, x in enumerate(order):
            chars[alpha, x] = np.exp(2j * np.pi * alpha * l / t)
    return chars


def subgroup_eigencheck(gamma: GSet, phi=None, k: int = 1, base_set: GSet | None = None,
                        seed: int = 7, residual_tol: float = 1e-8) -> SubgroupEigenReport:
    """Verify the character eigenfunction structure of the restricted operator.

    phi defaults to Gamma o Gamma.  When base_set B is given instead, phi is
    the kernel whose convolution transform is (B o B)^k, and the maximal
    eigenvalue is compared against E_(k+1)(Gamma, B)/|Gamma|.
    """
    p, t = multiplicative_order_elements(gamma)
    g = gamma.group
    n = g.order
    claimed = None
    if base_set is not None:
        corr = moments.correlate(base_set, base_set).array.astype(np.float64).ravel() ** k
        phi_v = _group_fft(g, corr.astype(np.complex128)) / n
        if np.abs(phi_v.imag).max() > 1e-9:
            raise AssertionError("kernel transform of a symmetric table must be real")
        phi_v = phi_v.real.astype(np.complex128)
        claimed = float(moments.energy_k_pair(gamma, base_set, k + 1)) / t
    elif phi is None:
        phi_v = _flat_function(g, moments.correlate(gamma, gamma))
    else:
        phi_v = _flat_function(g, phi)

    # Gamma-invariance of phi
    for gam in gamma.elems:
        perm = np.array([(gam[0] * x) % p for x in range(p)], dtype=np.int64)
        if np.abs(phi_v[perm] - phi_v).max() > 1e-9 * max(1.0, np.abs(phi_v).max()):
            raise ValueError("phi is not Gamma-invariant")

    mat = restricted_matrix(g, phi_v, gamma)
    idx = gamma.flat_indices()
    chars = subgroup_characters(gamma)[:, :]
    eigenvalues: list[float] = []
    residuals: list[float] = []
    for alpha in range(t):
        chi = chars[alpha][idx]
        w = mat @ chi
        mu = complex(np.vdot(chi, w)) / t
        res = float(np.linalg.norm(w - mu * chi) / (1.0 + np.linalg.norm(w)))
        eigenvalues.append(float(mu.real))
        residuals.append(res)

    kernel_ft = _group_fft(g, phi_v)
    nonneg = bool(kernel_ft.real.min() > -1e-6 * max(1.0, np.abs(kernel_ft).max())
                  and np.abs(kernel_ft.imag).max() < 1e-6 * max(1.0, np.abs(kernel_ft).max()))
    measured_max = max(eigenvalues)
    max_at_trivial = eigenvalues[0] >= measured_max - 1e-8 * max(1.0, abs(measured_max))

    # the quadratic-form inequality for kernels with nonnegative transform
    rng = np.random.default_rng(seed)
    psi_v = _flat_function(g, moments.correlate(gamma, gamma))
    connected_ok = True
    for trial in range(8):
        u = np.zeros(n)
        u[idx] = rng.integers(-3, 4, size=t).astype(np.float64)
        lhs = _quadratic_form(g, psi_v, u)
        corr_g = _quadratic_form(g, psi_v, _indicator(g, gamma).real)
        rhs = (u[idx].sum() ** 2 / t ** 2) * corr_g
        if lhs < rhs - 1e-6 * max(1.0, abs(rhs)):
            connected_ok = False
    u0 = _indicator(g, gamma).real
    lhs0 = _quadratic_form(g, psi_v, u0)
    rhs0 = (u0[idx].sum() ** 2 / t ** 2) * _quadratic_form(g, psi_v, u0)
    connected_equality = math.isclose(lhs0, rhs0, rel_tol=1e-9, abs_tol=1e-9)

    if max(residuals) >= residual_tol:
        raise AssertionError(f"character eigenfunction residual too large: {max(residuals)}")

    return SubgroupEigenReport(
        p=p, t=t, k=k,
        eigenvalues=eigenvalues,
        residuals=residuals,
        max_at_trivial=bool(max_at_trivial),
        kernel_transform_nonneg=nonneg,
        measured_max=float(measured_max),
        claimed_max=claimed,
        claimed_ratio=(float(measured_max) / claimed if claimed else None),
        connected_ok=connected_ok,
        connected_equality_at_indicator=connected_equality,
    )


def _quadratic_form(g: GroupSpec, psi_v: np.ndarray, u: np.ndarray) -> float:
    """sum_x psi(x) (u o u)(x) for a real vector u."""
    spec = _group_fft(g, u.astype(np.complex128))
    corr = _group_ifft(g, np.conj(spec) * spec).real  # (u o u) by inversion
    return float((psi_v.real * corr).sum())
