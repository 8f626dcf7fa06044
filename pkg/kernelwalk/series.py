"""
Exact walk counting and truncated generating-series evaluation.

q_{i,j,k} is the total weight of k-step walks from (0,0) to (i,j) that
stay in the quarter plane. Tables are exact (Fraction); evaluation of
Q, F1, F2 is numeric with the tail bound t^(K+1)/(1-t).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import KernelWalkError, ModelError
from .model import WeightedModel, step_set

ORACLE_MAX_STEPS = 12

Layer = Tuple[Tuple[Fraction, ...], ...]


class SeriesError(KernelWalkError, ValueError):
    """Invalid series request (bad bound or point outside the polydisk)."""

    def __init__(self, message: str):
        super().__init__("series", message)


@dataclass(frozen=True)
class SeriesTable:
    """
    Exact coefficients q_{i,j,k} for 0 <= i, j <= k <= max_steps.

    layers[k][i][j] holds q_{i,j,k}.
    """
    max_steps: int
    layers: Tuple[Layer, ...]

    def q(self, i: int, j: int, k: int) -> Fraction:
        """Coefficient q_{i,j,k}; zero outside the stored triangle."""
        if k < 0 or k > self.max_steps or i < 0 or j < 0 or i > k or j > k:
            return Fraction(0)
        return self.layers[k][i][j]

    def entries(self) -> List[Tuple[int, int, int, Fraction]]:
        """Nonzero entries sorted by (k, i, j)."""
        out = []
        for k, layer in enumerate(self.layers):
            for i, row in enumerate(layer):
                for j, value in enumerate(row):
                    if value != 0:
                        out.append((i, j, k, value))
        return out

    def mass(self, k: int) -> Fraction:
        """Sum over (i,j) of q_{i,j,k}."""
        return sum((v for row in self.layers[k] for v in row), Fraction(0))

    def excursions(self) -> List[Fraction]:
        """q_{0,0,k} for k = 0..max_steps."""
        return [self.layers[k][0][0] for k in range(self.max_steps + 1)]

    def check_invariants(self) -> bool:
        """q_{0,0,0} = 1, entries nonnegative, masses <= 1 and nonincreasing."""
        if self.layers[0][0][0] != 1:
            return False
        previous = Fraction(1)
        for k in range(self.max_steps + 1):
            if any(v < 0 for row in self.layers[k] for v in row):
                return False
            m = self.mass(k)
            if m > previous:
                return False
            previous = m
        return True

    def replaced(self, i: int, j: int, k: int, value: Fraction) -> 'SeriesTable':
        """Copy with one entry replaced."""
        layers = [list(list(row) for row in layer) for layer in self.layers]
        layers[k][i][j] = Fraction(value)
        return SeriesTable(
            max_steps=self.max_steps,
            layers=tuple(tuple(tuple(row) for row in layer) for layer in layers)
        )


def _freeze(layer: List[List[Fraction]]) -> Layer:
    return tuple(tuple(row) for row in layer)


def count_walks(model: WeightedModel, max_steps: int) -> SeriesTable:
    """
    Dynamic programming over k.

    Args:
        model: Walk model
        max_steps: Largest k to tabulate (K >= 0)

    Returns:
        SeriesTable with all q_{i,j,k}, k <= K
    """
    if max_steps < 0:
        raise SeriesError(f"max_steps must be >= 0, got {max_steps}")
    steps = [(s, model.weights[s]) for s in sorted(step_set(model).steps)]

    layer: List[List[Fraction]] = [[Fraction(1)]]
    layers = [_freeze(layer)]
    for k in range(max_steps):
        size = k + 2
        new_layer = [[Fraction(0)] * size for _ in range(size)]
        for i in range(k + 1):
            row = layer[i]
            for j in range(k + 1):
                value = row[j]
                if value == 0:
                    continue
                for (a, b), w in steps:
                    ni, nj = i + a, j + b
                    if ni >= 0 and nj >= 0:
                        new_layer[ni][nj] += w * value
        layer = new_layer
        layers.append(_freeze(layer))
    return SeriesTable(max_steps=max_steps, layers=tuple(layers))


def enumerate_walks_oracle(model: WeightedModel, max_steps: int) -> SeriesTable:
    """
    Brute-force enumeration of step sequences (independent check).

    Walks leaving the quadrant are discarded as soon as they leave.

    Raises:
        SeriesError: if max_steps > 12
    """
    if max_steps < 0 or max_steps > ORACLE_MAX_STEPS:
        raise SeriesError(f"oracle bound is 0..{ORACLE_MAX_STEPS}, got {max_steps}")
    steps = [(s, model.weights[s]) for s in sorted(step_set(model).steps)]
    totals: Dict[Tuple[int, int, int], Fraction] = {(0, 0, 0): Fraction(1)}

    def walk(i: int, j: int, k: int, weight: Fraction):
        if k == max_steps:
            return
        for (a, b), w in steps:
            ni, nj = i + a, j + b
            if ni < 0 or nj < 0:
                continue
            nw = weight * w
            key = (ni, nj, k + 1)
            totals[key] = totals.get(key, Fraction(0)) + nw
            walk(ni, nj, k + 1, nw)

    walk(0, 0, 0, Fraction(1))

    layers = []
    for k in range(max_steps + 1):
        layers.append(tuple(
            tuple(totals.get((i, j, k), Fraction(0)) for j in range(k + 1))
            for i in range(k + 1)
        ))
    return SeriesTable(max_steps=max_steps, layers=tuple(layers))


def _check_disk(value: complex, name: str):
    if abs(value) > 1 + 1e-12:
        raise SeriesError(f"|{name}| = {abs(value):.6g} > 1 outside the convergence polydisk")


def _check_t(t_val: float):
    if not 0 < t_val < 1:
        raise SeriesError(f"t = {t_val} outside (0,1)")


def tail_bound(max_steps: int, t_val: float) -> float:
    """t^(K+1)/(1-t)."""
    return t_val ** (max_steps + 1) / (1.0 - t_val)


def eval_Q(table: SeriesTable, x: complex, y: complex, t_val: float) -> Tuple[complex, float]:
    """
    Truncated Q(x,y;t).

    Returns:
        (value, tail_bound)
    """
    x, y, t_val = complex(x), complex(y), float(t_val)
    _check_disk(x, "x")
    _check_disk(y, "y")
    _check_t(t_val)

    value = 0j
    for k, layer in enumerate(table.layers):
        size = k + 1
        matrix = np.array([[float(v) for v in row] for row in layer], dtype=float)
        xp = x ** np.arange(size)
        yp = y ** np.arange(size)
        value += (t_val ** k) * (xp @ matrix @ yp)
    return complex(value), tail_bound(table.max_steps, t_val)


@dataclass(frozen=True)
class SectionSeries:
    """
    F1(x) = K(x,0;t) Q(x,0;t) (axis 'x') or F2(y) = K(0,y;t) Q(0,y;t) (axis 'y').

    coefficients[n] is the coefficient of s^n of the truncated Q section;
    kernel_coefficients are those of K(s,0;t) (or K(0,s;t)).
    """
    axis: str
    coefficients: np.ndarray
    kernel_coefficients: Tuple[float, float, float]
    tail: float

    def kernel_value(self, s: complex) -> complex:
        k0, k1, k2 = self.kernel_coefficients
        return k0 + k1 * s + k2 * s * s

    def __call__(self, s: complex) -> Tuple[complex, float]:
        """Value at s and its tail bound |K| t^(K+1)/(1-t)."""
        s = complex(s)
        _check_disk(s, self.axis)
        q_value = np.polyval(self.coefficients[::-1], s)
        kernel = self.kernel_value(s)
        return complex(kernel * q_value), abs(kernel) * self.tail


def section_series(table: SeriesTable, model: WeightedModel, axis: str) -> SectionSeries:
    """Precompute the Q(x,0) or Q(0,y) section for repeated evaluation."""
    if axis not in ("x", "y"):
        raise SeriesError(f"axis must be 'x' or 'y', got {axis!r}")
    t = model.t
    sums = [Fraction(0)] * (table.max_steps + 1)
    t_power = Fraction(1)
    for k in range(table.max_steps + 1):
        for n in range(k + 1):
            value = table.q(n, 0, k) if axis == "x" else table.q(0, n, k)
            if value:
                sums[n] += value * t_power
        t_power *= t
    if axis == "x":
        kernel = (model.d(-1, -1), model.d(0, -1), model.d(1, -1))
    else:
        kernel = (model.d(-1, -1), model.d(-1, 0), model.d(-1, 1))
    return SectionSeries(
        axis=axis,
        coefficients=np.array([float(v) for v in sums], dtype=float),
        kernel_coefficients=tuple(float(-t * d) for d in kernel),
        tail=tail_bound(table.max_steps, float(t)),
    )


def eval_F1(table: SeriesTable, model: WeightedModel, x: complex) -> Tuple[complex, float]:
    """K(x,0;t) Q(x,0;t) with its tail bound."""
    return section_series(table, model, "x")(x)


def eval_F2(table: SeriesTable, model: WeightedModel, y: complex) -> Tuple[complex, float]:
    """K(0,y;t) Q(0,y;t) with its tail bound."""
    return section_series(table, model, "y")(y)


def origin_term(table: SeriesTable, model: WeightedModel) -> float:
    """Truncated K(0,0;t) Q(0,0;t)."""
    t = model.t
    value = sum((table.q(0, 0, k) * t ** k for k in range(table.max_steps + 1)), Fraction(0))
    return float(-t * model.d(-1, -1) * value)


def check_functional_equation(model: WeightedModel, N: int = 10,
                              table: Optional[SeriesTable] = None) -> bool:
    """
    Exact check of K Q = F1 + F2 - K(0,0) Q(0,0) + xy modulo t^(N+1).

    Args:
        model: Walk model
        N: Truncation order
        table: Table to check (computed with count_walks when omitted)

    Returns:
        True iff every coefficient agrees exactly
    """
    if N < 0:
        raise SeriesError(f"N must be >= 0, got {N}")
    if table is None:
        table = count_walks(model, N)
    if table.max_steps < N:
        raise SeriesError(f"table has max_steps={table.max_steps} < N={N}")

    R, X, Y, T = ring("x,y,t", QQ)
    weights = {s: QQ(w.numerator, w.denominator) for s, w in model.weights.items()}

    Q = R.from_dict({
        (i, j, k): QQ(v.numerator, v.denominator)
        for (i, j, k, v) in table.entries() if k <= N
    })
    Q_x0 = R.from_dict({m: c for m, c in Q.items() if m[1] == 0})
    Q_0y = R.from_dict({m: c for m, c in Q.items() if m[0] == 0})
    Q_00 = R.from_dict({m: c for m, c in Q.items() if m[0] == 0 and m[1] == 0})

    K = X * Y
    for (a, b), w in weights.items():
        if w:
            K = K - T * w * X ** (a + 1) * Y ** (b + 1)
    K_x0 = -T * (weights[(-1, -1)] + weights[(0, -1)] * X + weights[(1, -1)] * X ** 2)
    K_0y = -T * (weights[(-1, -1)] + weights[(-1, 0)] * Y + weights[(-1, 1)] * Y ** 2)
    K_00 = -T * weights[(-1, -1)]

    difference = K * Q - (K_x0 * Q_x0 + K_0y * Q_0y - K_00 * Q_00 + X * Y)
    return all(coeff == 0 for monom, coeff in difference.items() if monom[2] <= N)


def export_table(table: SeriesTable) -> str:
    """One line per nonzero entry: 'q <i> <j> <k> = <p>/<q>', sorted by (k,i,j)."""
    lines = [f"q {i} {j} {k} = {v.numerator}/{v.denominator}" for (i, j, k, v) in table.entries()]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_table(text: str) -> SeriesTable:
    """Inverse of export_table."""
    entries: Dict[Tuple[int, int, int], Fraction] = {}
    max_steps = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.replace("=", " = ").split()
        if len(parts) != 6 or parts[0] != "q" or parts[4] != "=":
            raise ModelError(f"bad table line {line!r}", line=lineno)
        i, j, k = int(parts[1]), int(parts[2]), int(parts[3])
        entries[(i, j, k)] = Fraction(parts[5])
        max_steps = max(max_steps, k)
    layers = tuple(
        tuple(tuple(entries.get((i, j, k), Fraction(0)) for j in range(k + 1)) for i in range(k + 1))
        for k in range(max_steps + 1)
    )
    return SeriesTable(max_steps=max_steps, layers=layers)
