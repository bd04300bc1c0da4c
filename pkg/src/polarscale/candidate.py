"""Construction of the exact-rational candidate eigenfunction.

The candidate h is assembled from a converged sample vector:

* on [0, 1/ns] it *is* the left power tail b0(x) = v0 * (ns*x/mbar)^eta,
* on [1-1/ns, 1] it is the right tail b1(x) = v1 * (ns*(1-x)/mbar)^eta,
* in between it is the piecewise-linear interpolant of rational breakpoints.

Breakpoints in [1/ns, mbar/ns] and [1-mbar/ns, 1-1/ns] carry values of the
tails rounded *down* to dyadics (so the interpolant stays below the concave
tails, which the edge bounds of the certification rely on); the middle carries
the iteration samples snapped to denominator 2^53.  Extra breakpoints are
inserted until every adjacent pair of values is within a factor 1+delta_s:
on tail segments new values are taken from the tail itself, on middle
segments the midpoint lies on the chord so the function is unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactmath import rational_power_bound
from .iteration import SampledFunction

__all__ = ["CandidateFunction", "build_candidate"]

_SNAP = 1 << 53
_MAX_SPLIT_DEPTH = 64


def _snap(x: float) -> Fraction:
    return Fraction(round(x * _SNAP), _SNAP)


def _round_down(v: Fraction) -> Fraction:
    return Fraction((v.numerator * _SNAP) // v.denominator, _SNAP)


@dataclass
class CandidateFunction:
    """Piecewise candidate: power tails plus a rational linear interpolant.

    ``xs``/``vs`` are the interior breakpoints and values with
    xs[0] = 1/ns and xs[-1] = 1 - 1/ns; ``v0``/``v1`` are the junction values
    h(mbar/ns) and h(1 - mbar/ns) defining the tail coefficients.
    """

    ns: int
    eta: Fraction
    m_bar: int
    delta_s: Fraction
    xs: list[Fraction]
    vs: list[Fraction]
    v0: Fraction
    v1: Fraction

    def validate(self) -> None:
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if self.m_bar < 2 or 2 * self.m_bar >= self.ns:
            raise ValueError("need 2 <= mbar < ns/2")
        if self.delta_s <= 0:
            raise ValueError("delta_s must be positive")
        if self.xs[0] != Fraction(1, self.ns) or self.xs[-1] != 1 - Fraction(1, self.ns):
            raise ValueError("breakpoints must span [1/ns, 1-1/ns]")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v <= 0 or v > 1 for v in self.vs):
            raise ValueError("values must lie in (0, 1]")
        one_plus = 1 + self.delta_s
        for va, vb in zip(self.vs, self.vs[1:]):
            if max(va, vb) > one_plus * min(va, vb):
                raise ValueError("adjacent values violate the 1+delta_s rule")

    # -- tail evaluation (certified enclosures) ------------------------------

    def _tail_base0(self, x: Fraction) -> Fraction:
        return Fraction(self.ns, self.m_bar) * x

    def _tail_base1(self, x: Fraction) -> Fraction:
        return Fraction(self.ns, self.m_bar) * (1 - x)

    def b0_bound(self, x: Fraction, direction: str, bits: int = 96) -> Fraction:
        """Directed dyadic bound on b0(x) = v0 * (ns*x/mbar)^eta."""
        return self.v0 * rational_power_bound(self._tail_base0(x), self.eta, direction, bits)

    def b1_bound(self, x: Fraction, direction: str, bits: int = 96) -> Fraction:
        """Directed dyadic bound on b1(x) = v1 * (ns*(1-x)/mbar)^eta."""
        return self.v1 * rational_power_bound(self._tail_base1(x), self.eta, direction, bits)

    # -- float evaluation (reports, plots, the rhat cross-check) -------------

    def evaluate_float(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        xs = np.array([float(v) for v in self.xs])
        vs = np.array([float(v) for v in self.vs])
        out = np.interp(x, xs, vs)
        lo, hi = float(self.xs[0]), float(self.xs[-1])
        coef0 = float(self.v0) * (self.ns / self.m_bar) ** float(self.eta)
        coef1 = float(self.v1) * (self.ns / self.m_bar) ** float(self.eta)
        left = x < lo
        right = x > hi
        eta = float(self.eta)
        out[left] = coef0 * np.power(x[left], eta)
        out[right] = coef1 * np.power(1.0 - x[right], eta)
        return out

    def to_grid(self, ns: int | None = None) -> SampledFunction:
        """Float samples of the candidate on a uniform grid (max renormalized)."""
        ns = self.ns if ns is None else ns
        x = np.arange(ns + 1, dtype=np.float64) / ns
        s = self.evaluate_float(x)
        s[0] = 0.0
        s[ns] = 0.0
        return SampledFunction(ns, s / s.max())

    # -- serialization --------------------------------------------------------

    def write(self, csv_path, json_path) -> None:
        with open(csv_path, "w") as fh:
            fh.write("x_num,x_den,h_num,h_den\n")
            for x, v in zip(self.xs, self.vs):
                fh.write(f"{x.numerator},{x.denominator},{v.numerator},{v.denominator}\n")
        header = {
            "ns": self.ns,
            "eta": f"{self.eta.numerator}/{self.eta.denominator}",
            "m_bar": self.m_bar,
            "delta_s": f"{self.delta_s.numerator}/{self.delta_s.denominator}",
            "v0": f"{self.v0.numerator}/{self.v0.denominator}",
            "v1": f"{self.v1.numerator}/{self.v1.denominator}",
            "breakpoints": len(self.xs),
        }
        with open(json_path, "w") as fh:
            json.dump(header, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, csv_path, json_path) -> "CandidateFunction":
        with open(json_path) as fh:
            header = json.load(fh)
        xs: list[Fraction] = []
        vs: list[Fraction] = []
        with open(csv_path) as fh:
            next(fh)
            for line in fh:
                xn, xd, vn, vd = line.strip().split(",")
                xs.append(Fraction(int(xn), int(xd)))
                vs.append(Fraction(int(vn), int(vd)))
        cand = cls(
            ns=int(header["ns"]),
            eta=Fraction(header["eta"]),
            m_bar=int(header["m_bar"]),
            delta_s=Fraction(header["delta_s"]),
            xs=xs,
            vs=vs,
            v0=Fraction(header["v0"]),
            v1=Fraction(header["v1"]),
        )
        cand.validate()
        return cand


def _fill_segment(
    xa: Fraction,
    va: Fraction,
    xb: Fraction,
    vb: Fraction,
    value_at,
    one_plus: Fraction,
    out_x: list[Fraction],
    out_v: list[Fraction],
    depth: int = 0,
) -> None:
    """Emit (xa, va] ... (xb, vb] with midpoint insertions until adjacent values
    are within the 1+delta_s factor.  Appends everything after xa, including xb."""
    if max(va, vb) <= one_plus * min(va, vb):
        out_x.append(xb)
        out_v.append(vb)
        return
    if depth >= _MAX_SPLIT_DEPTH:
        raise ValueError("resampling did not converge; is the input positive?")
    xm = (xa + xb) / 2
    vm = value_at(xm, va, vb)
    _fill_segment(xa, va, xm, vm, value_at, one_plus, out_x, out_v, depth + 1)
    _fill_segment(xm, vm, xb, vb, value_at, one_plus, out_x, out_v, depth + 1)


def build_candidate(
    samples: SampledFunction | np.ndarray,
    eta: Fraction,
    m_bar: int,
    delta_s: Fraction,
    bits: int = 96,
) -> CandidateFunction:
    """Assemble the rational candidate from converged iteration samples.

    Parameters mirror the tail construction: ``eta`` is the tail growth
    exponent in (0,1), ``m_bar`` the grid index where the tails hand over to
    the sampled middle, ``delta_s`` the adjacent-value resampling factor.
    """
    arr = samples.samples if isinstance(samples, SampledFunction) else np.asarray(samples)
    ns = len(arr) - 1
    eta = Fraction(eta)
    delta_s = Fraction(delta_s)
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if delta_s <= 0:
        raise ValueError("delta_s must be positive")
    if m_bar < 2 or 2 * m_bar >= ns:
        raise ValueError("need 2 <= mbar < ns/2")
    middle = [_snap(float(arr[i])) for i in range(m_bar, ns - m_bar + 1)]
    if any(v <= 0 for v in middle):
        raise ValueError("interior samples must be positive")
    v0, v1 = middle[0], middle[-1]

    cand = CandidateFunction(
        ns=ns, eta=eta, m_bar=m_bar, delta_s=delta_s, xs=[], vs=[], v0=v0, v1=v1
    )
    one_plus = 1 + delta_s

    def b0_low(x: Fraction, _va=None, _vb=None) -> Fraction:
        v = _round_down(cand.b0_bound(x, "lower", bits))
        if v <= 0:
            raise ValueError("left tail value underflowed to zero")
        return v

    def b1_low(x: Fraction, _va=None, _vb=None) -> Fraction:
        v = _round_down(cand.b1_bound(x, "lower", bits))
        if v <= 0:
            raise ValueError("right tail value underflowed to zero")
        return v

    def chord(xm: Fraction, va: Fraction, vb: Fraction) -> Fraction:
        return (va + vb) / 2

    xs: list[Fraction] = [Fraction(1, ns)]
    vs: list[Fraction] = [b0_low(xs[0])]
    # left tail: b0 sampled on the grid cells 1/ns .. mbar/ns
    for i in range(1, m_bar):
        xa, xb = Fraction(i, ns), Fraction(i + 1, ns)
        vb = v0 if i + 1 == m_bar else b0_low(xb)
        _fill_segment(xa, vs[-1], xb, vb, b0_low, one_plus, xs, vs)
    # middle: snapped iteration samples on the uniform grid
    for i in range(m_bar, ns - m_bar):
        xa, xb = Fraction(i, ns), Fraction(i + 1, ns)
        _fill_segment(xa, vs[-1], xb, middle[i + 1 - m_bar], chord, one_plus, xs, vs)
    # right tail: b1 sampled on the grid cells (ns-mbar)/ns .. (ns-1)/ns
    for i in range(ns - m_bar, ns - 1):
        xa, xb = Fraction(i, ns), Fraction(i + 1, ns)
        vb = b1_low(xb)
        _fill_segment(xa, vs[-1], xb, vb, b1_low, one_plus, xs, vs)

    cand.xs = xs
    cand.vs = vs
    cand.validate()
    return cand
