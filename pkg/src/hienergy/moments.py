"""Convolutions, correlations and energy functionals.

Tables are exact integer-valued finitely-supported functions.  Large cyclic
convolutions go through a mean-centered floating FFT whose output must land
within 1e-6 of integers (and reproduce the exact total mass); anything else
falls back to the direct path with a warning.

Moment notation used throughout: (f*g)(x) = sum_y f(y) g(x-y) and
(f o g)(x) = sum_y f(y) g(y+x); E_k(A) = sum_x (A o A)(x)^k; T_k(A) is the
square sum of the k-fold convolution; sigma_k(A) counts k-tuples summing to
zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import groups
from .groups import Elem, GroupSpec
from .gset import GSet

FFT_THRESHOLD = 1024          # dense size at which the FFT path takes over
FFT_INT_TOL = 1e-6            # max allowed distance from an integer
_MAX_PAIR_CHUNK = 4_000_000   # direct-path scratch bound


class ConvTable:
    """Finitely-supported function on a group, stored as a dense window.

    ``offset`` is the coordinate of the window's [0,...,0] cell; cyclic
    tables use the full fundamental domain with zero offset.
    """

    __slots__ = ("group", "offset", "array")

    def __init__(self, group: GroupSpec, array: np.ndarray, offset: tuple[int, ...] | None = None):
        self.group = group
        self.array = array
        self.offset = offset if offset is not None else (0,) * group.dim

    # -- construction -------------------------------------------------

    @classmethod
    def from_gset(cls, a: GSet) -> "ConvTable":
        g = a.group
        if g.is_cyclic:
            return cls(g, a.indicator())
        mat = a.coord_matrix()
        if len(mat) == 0:
            return cls(g, np.zeros((1,) * g.dim, dtype=np.int64))
        lo = mat.min(axis=0)
        shape = tuple(int(h - l + 1) for l, h in zip(lo, mat.max(axis=0)))
        arr = np.zeros(shape, dtype=np.int64)
        arr[tuple((mat - lo).T)] = 1
        return cls(g, arr, tuple(int(v) for v in lo))

    # -- access -------------------------------------------------------

    def value(self, x) -> int:
        x = groups.as_elem(self.group, x)
        idx = tuple(c - o for c, o in zip(x, self.offset))
        if any(i < 0 or i >= s for i, s in zip(idx, self.array.shape)):
            return 0
        return self.array[idx].item()

    def support(self) -> Iterator[tuple[Elem, int]]:
        for idx in zip(*np.nonzero(self.array)):
            coords = tuple(int(i + o) for i, o in zip(idx, self.offset))
            yield coords, self.array[idx].item()

    def support_size(self) -> int:
        return int(np.count_nonzero(self.array))

    def total(self) -> int:
        return int(self.array.sum(dtype=object)) if self.array.dtype == np.int64 else float(self.array.sum())

    def values(self) -> np.ndarray:
        return self.array.ravel()

    def trimmed(self) -> "ConvTable":
        if self.group.is_cyclic:
            return self
        nz = np.nonzero(self.array)
        if len(nz[0]) == 0:
            return ConvTable(self.group, np.zeros((1,) * self.group.dim, dtype=self.array.dtype))
        slices = tuple(slice(int(i.min()), int(i.max()) + 1) for i in nz)
        off = tuple(int(s.start + o) for s, o in zip(slices, self.offset))
        return ConvTable(self.group, self.array[slices].copy(), off)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvTable) or self.group != other.group:
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.offset == b.offset and a.array.shape == b.array.shape and bool((a.array == b.array).all())

    def __hash__(self):
        raise TypeError("ConvTable is not hashable")

    def to_csv(self) -> str:
        lines = ["element,count"]
        for elem, v in sorted(self.support()):
            lines.append(f"\"{groups.format_elem(elem)}\",{v}")
        return "\n".join(lines) + "\n"


def as_table(x) -> ConvTable:
    if isinstance(x, ConvTable):
        return x
    if isinstance(x, GSet):
        return ConvTable.from_gset(x)
    raise TypeError(f"expected GSet or ConvTable, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# convolution engine


def _direct_cyclic(fa: np.ndarray, ga: np.ndarray, moduli: tuple[int, ...]) -> np.ndarray:
    n = math.prod(moduli)
    fidx = np.flatnonzero(fa.ravel())
    gidx = np.flatnonzero(ga.ravel())
    if len(fidx) > len(gidx):
        fidx, gidx, fa, ga = gidx, fidx, ga, fa
    out = np.zeros(n, dtype=np.int64)
    if len(fidx) == 0 or len(gidx) == 0:
        return out.reshape(moduli)
    fvals = fa.ravel()[fidx]
    gvals = ga.ravel()[gidx]
    fco = np.array(np.unravel_index(fidx, moduli), dtype=np.int64)
    gco = np.array(np.unravel_index(gidx, moduli), dtype=np.int64)
    unit = bool((fvals == 1).all() and (gvals == 1).all())
    chunk = max(1, _MAX_PAIR_CHUNK // max(1, len(gidx)))
    for i0 in range(0, len(fidx), chunk):
        i1 = min(i0 + chunk, len(fidx))
        flat = np.zeros((i1 - i0, len(gidx)), dtype=np.int64)
        for ax, mod in enumerate(moduli):
            s = (fco[ax, i0:i1, None] + gco[ax, None, :]) % mod
            flat = flat * mod + s
        if unit:
            out += np.bincount(flat.ravel(), minlength=n)
        else:
            w = fvals[i0:i1, None] * gvals[None, :]
            np.add.at(out, flat.ravel(), w.ravel())
    return out.reshape(moduli)


def _fft_cyclic(fa: np.ndarray, ga: np.ndarray, moduli: tuple[int, ...]) -> np.ndarray | None:
    n = math.prod(moduli)
    mass_f = int(fa.sum())
    mass_g = int(ga.sum())
    cf = fa - mass_f / n
    cg = ga - mass_g / n
    conv = np.fft.ifftn(np.fft.fftn(cf) * np.fft.fftn(cg)).real
    res = conv + (mass_f * mass_g) / n
    rounded = np.rint(res)
    if np.abs(res - rounded).max() > FFT_INT_TOL:
        return None
    out = rounded.astype(np.int64)
    if int(out.sum()) != mass_f * mass_g:
        return None
    return out


def _conv_dense_cyclic(fa: np.ndarray, ga: np.ndarray, moduli: tuple[int, ...]) -> np.ndarray:
    n = math.prod(moduli)
    if n < FFT_THRESHOLD:
        return _direct_cyclic(fa, ga, moduli)
    out = _fft_cyclic(fa, ga, moduli)
    if out is None:
        warnings.warn("FFT convolution failed integer validation; using the direct path",
                      RuntimeWarning, stacklevel=3)
        out = _direct_cyclic(fa, ga, moduli)
    return out


def _direct_lattice(fa: np.ndarray, ga: np.ndarray) -> np.ndarray:
    out_shape = tuple(int(a + b - 1) for a, b in zip(fa.shape, ga.shape))
    fidx = np.flatnonzero(fa.ravel())
    gidx = np.flatnonzero(ga.ravel())
    out = np.zeros(out_shape, dtype=np.int64).ravel()
    if len(fidx) == 0 or len(gidx) == 0:
        return out.reshape(out_shape)
    if len(fidx) > len(gidx):
        fidx, gidx, fa, ga = gidx, fidx, ga, fa
        out_shape = tuple(int(a + b - 1) for a, b in zip(fa.shape, ga.shape))
    fvals = fa.ravel()[fidx]
    gvals = ga.ravel()[gidx]
    fco = np.array(np.unravel_index(fidx, fa.shape), dtype=np.int64)
    gco = np.array(np.unravel_index(gidx, ga.shape), dtype=np.int64)
    unit = bool((fvals == 1).all() and (gvals == 1).all())
    size = math.prod(out_shape)
    chunk = max(1, _MAX_PAIR_CHUNK // max(1, len(gidx)))
    for i0 in range(0, len(fidx), chunk):
        i1 = min(i0 + chunk, len(fidx))
        flat = np.zeros((i1 - i0, len(gidx)), dtype=np.int64)
        for ax, dim in enumerate(out_shape):
            s = fco[ax, i0:i1, None] + gco[ax, None, :]
            flat = flat * dim + s
        if unit:
            out += np.bincount(flat.ravel(), minlength=size)
        else:
            w = fvals[i0:i1, None] * gvals[None, :]
            np.add.at(out, flat.ravel(), w.ravel())
    return out.reshape(out_shape)


def _fft_lattice(fa: np.ndarray, ga: np.ndarray) -> np.ndarray | None:
    out_shape = tuple(int(a + b - 1) for a, b in zip(fa.shape, ga.shape))
    pad = tuple(1 << (s - 1).bit_length() for s in out_shape)
    conv = np.fft.irfftn(np.fft.rfftn(fa, pad) * np.fft.rfftn(ga, pad), pad)
    res = conv[tuple(slice(0, s) for s in out_shape)]
    rounded = np.rint(res)
    if np.abs(res - rounded).max() > FFT_INT_TOL:
        return None
    out = rounded.astype(np.int64)
    if int(out.sum()) != int(fa.sum()) * int(ga.sum()):
        return None
    return out


def _conv_lattice(fa: np.ndarray, ga: np.ndarray) -> np.ndarray:
    if fa.size * ga.size < 1 << 22:
        return _direct_lattice(fa, ga)
    out = _fft_lattice(fa, ga)
    if out is None:
        warnings.warn("FFT convolution failed integer validation; using the direct path",
                      RuntimeWarning, stacklevel=3)
        out = _direct_lattice(fa, ga)
    return out


def convolve(f, g) -> ConvTable:
    """(f * g)(x) = sum_y f(y) g(x - y), exact integers."""
    tf, tg = as_table(f), as_table(g)
    if tf.group != tg.group:
        raise groups.GroupError("convolution operands live in different groups")
    grp = tf.group
    if grp.is_cyclic:
        return ConvTable(grp, _conv_dense_cyclic(tf.array, tg.array, grp.moduli))
    arr = _conv_lattice(tf.array, tg.array)
    off = tuple(a + b for a, b in zip(tf.offset, tg.offset))
    return ConvTable(grp, arr, off).trimmed()


def _reflect(t: ConvTable) -> ConvTable:
    g = t.group
    if g.is_cyclic:
        arr = t.array
        out = arr.copy()
        for ax in range(arr.ndim):
            out = np.flip(out, axis=ax)
            out = np.roll(out, 1, axis=ax)  # index negation: -i mod n
        return ConvTable(g, out)
    flipped = t.array
    for ax in range(flipped.ndim):
        flipped = np.flip(flipped, axis=ax)
    off = tuple(-(o + s - 1) for o, s in zip(t.offset, t.array.shape))
    return ConvTable(g, flipped.copy(), off)


def correlate(f, g) -> ConvTable:
    """(f o g)(x) = sum_y f(y) g(y + x); for sets, counts of x = b - a."""
    tf, tg = as_table(f), as_table(g)
    out = convolve(_reflect(tf), tg)
    if isinstance(f, GSet) and isinstance(g, GSet):
        assert out.total() == len(f) * len(g), "correlation mass must equal |A||B|"
    return out


def conv_power(a, k: int) -> ConvTable:
    """k-fold convolution power (k factors); k = 1 returns the table itself."""
    if k < 1:
        raise ValueError("conv_power needs k >= 1")
    t = as_table(a)
    out = t
    for _ in range(k - 1):
        out = convolve(out, t)
    return out


# ---------------------------------------------------------------------------
# energies


def _power_sum(values: np.ndarray, k) -> int | float:
    pos = values[values > 0]
    if len(pos) == 0:
        return 0 if float(k).is_integer() else 0.0
    vals, cnts = np.unique(pos, return_counts=True)
    if float(k).is_integer():
        ki = int(k)
        return sum(int(c) * int(v) ** ki for v, c in zip(vals, cnts))
    return float(sum(float(c) * float(v) ** k for v, c in zip(vals, cnts)))


def energy_k(a: GSet, k) -> int | float:
    """E_k(A) = sum_x (A o A)(x)^k; exact for integer k, E_1(A) = |A|^2."""
    if k < 1:
        raise ValueError("energy order must be >= 1")
    if not a:
        return 0 if float(k).is_integer() else 0.0
    return _power_sum(correlate(a, a).values(), k)


def energy_pair(a: GSet, b: GSet) -> int:
    """Additive energy E(A, B) = sum_x (A * B)(x)^2."""
    if not a or not b:
        return 0
    return _power_sum(convolve(a, b).values(), 2)


def energy_k_pair(a: GSet, b: GSet, k) -> int | float:
    """E_k(A, B) = sum_x (A o A)(x) (B o B)(x)^(k-1); E_2(A, B) = E(A, B)."""
    if a.group != b.group:
        raise groups.GroupError("energy operands live in different groups")
    if k < 1:
        raise ValueError("energy order must be >= 1")
    if not a:
        return 0 if float(k).is_integer() else 0.0
    ta = correlate(a, a)
    tb = correlate(b, b)
    exact = float(k).is_integer()
    km1 = (int(k) if exact else k) - 1
    total = 0 if exact else 0.0
    for elem, v in ta.support():
        if km1 == 0:
            total += v
            continue
        w = tb.value(elem)
        if w == 0:
            continue
        total += v * w ** km1 if exact else float(v) * float(w) ** km1
    return total


def t_k(a: GSet, k: int) -> int:
    """T_k(A) = sum_x (A *_(k-1) A)(x)^2, cross-checked on the dual side."""
    if k < 1:
        raise ValueError("T_k needs k >= 1")
    if not a:
        return 0
    table = conv_power(a, k)
    result = _power_sum(table.values(), 2)
    if a.group.is_cyclic:
        spec = np.abs(np.fft.fftn(ConvTable.from_gset(a).array)) ** (2 * k)
        fourier = float(spec.sum()) / a.group.order
        if not math.isclose(fourier, float(result), rel_tol=FFT_INT_TOL):
            raise AssertionError(f"T_k Fourier cross-check failed: {fourier} vs {result}")
    return result


def sigma_k(a: GSet, k: int) -> int:
    """sigma_k(A) = number of k-tuples of A summing to zero."""
    if k < 1:
        raise ValueError("sigma_k needs k >= 1")
    if not a:
        return 0
    return conv_power(a, k).value(groups.zero(a.group))


def level_sequence(a: GSet) -> list[int]:
    """Positive values of A o A sorted descending; length |A - A|."""
    if not a:
        return []
    vals = correlate(a, a).values()
    return sorted((int(v) for v in vals[vals > 0]), reverse=True)


# ---------------------------------------------------------------------------
# multiplicative energies of integer sets


def _as_int_set(a) -> list[int]:
    if isinstance(a, GSet):
        if a.group.dim != 1:
            raise ValueError("multiplicative energies need 1-dimensional integer sets")
        return [e[0] for e in a.elems]
    return sorted(set(int(x) for x in a))


def quotient_counts(a) -> dict[Fraction, int]:
    xs = _as_int_set(a)
    if 0 in xs:
        raise ValueError("quotient set needs 0 not in A")
    counts: dict[Fraction, int] = {}
    for x in xs:
        for y in xs:
            q = Fraction(x, y)
            counts[q] = counts.get(q, 0) + 1
    return counts


def mult_energy_k(a, k: int = 2) -> int:
    """E^x_k(A) = sum over quotients q of r_{A/A}(q)^k."""
    if k < 2:
        raise ValueError("multiplicative energy order must be >= 2")
    return sum(c ** k for c in quotient_counts(a).values())


def prodset_size(a) -> int:
    xs = _as_int_set(a)
    return len({x * y for x in xs for y in xs})


def quotset_size(a) -> int:
    return len(quotient_counts(a))


# ---------------------------------------------------------------------------
# normalized profile


@dataclass
class EnergyProfile:
    """Normalized invariants: kappa_k = E_k/|A|^(k+1), delta = |A|/N,
    K = |A-A|/|A|, L = |A+A|/|A|."""

    set_id: str
    size: int
    kappa: dict[int, float]
    delta: float | None
    doubling_minus: float
    doubling_plus: float

    @classmethod
    def from_set(cls, a: GSet, ks: Iterable[int] = (2, 3, 4), set_id: str = "") -> "EnergyProfile":
        from .setops import diffset, sumset  # local import to avoid a cycle

        if not a:
            raise ValueError("profile needs a nonempty set")
        n = len(a)
        kappa = {int(k): float(energy_k(a, int(k))) / n ** (k + 1) for k in ks}
        delta = n / a.group.order if a.group.is_cyclic else None
        return cls(set_id=set_id, size=n, kappa=kappa, delta=delta,
                   doubling_minus=len(diffset(a, a)) / n,
                   doubling_plus=len(sumset(a, a)) / n)

    def as_dict(self) -> dict:
        return {
            "set_id": self.set_id,
            "size": self.size,
            "kappa": {str(k): v for k, v in sorted(self.kappa.items())},
            "delta": self.delta,
            "K": self.doubling_minus,
            "L": self.doubling_plus,
        }
