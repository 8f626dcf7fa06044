"""
Weighted small-step models: parsing, validation, normalization.

A model is nine exact rational weights d_{i,j}, (i,j) in {-1,0,1}^2,
summing to 1, plus an evaluation point t in (0,1).

Model file grammar (line oriented, '#' comments):
    d <i> <j> = <p>/<q>
    d <i> <j> = <integer>
    t = <p>/<q>
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import pyparsing as pp

from .errors import ModelError

Step = Tuple[int, int]

STEPS: Tuple[Step, ...] = tuple((i, j) for i in (-1, 0, 1) for j in (-1, 0, 1))

COMPASS_NAMES: Dict[Step, str] = {
    (0, 1): "N", (0, -1): "S", (1, 0): "E", (-1, 0): "W",
    (1, 1): "NE", (-1, 1): "NW", (1, -1): "SE", (-1, -1): "SW",
    (0, 0): "O",
}

# The eight symmetries of the square as integer matrices acting on (i, j)
SQUARE_SYMMETRIES: Tuple[Tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1), (0, 1, 1, 0), (-1, 0, 0, 1), (1, 0, 0, -1),
    (-1, 0, 0, -1), (0, -1, 1, 0), (0, 1, -1, 0), (0, -1, -1, 0),
)


@dataclass(frozen=True)
class StepSet:
    """Support of the weight map."""
    steps: FrozenSet[Step]

    def __contains__(self, step: Step) -> bool:
        return step in self.steps

    def __iter__(self):
        return iter(sorted(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def nonzero(self) -> FrozenSet[Step]:
        """Steps other than (0,0); these carry all kernel-curve geometry."""
        return frozenset(s for s in self.steps if s != (0, 0))


@dataclass(frozen=True)
class WeightedModel:
    """
    A weighted walk model.

    weights is stored in STEPS order so that equality is structural.
    """
    weight_vector: Tuple[Fraction, ...]
    t: Fraction

    def __post_init__(self):
        if len(self.weight_vector) != len(STEPS):
            raise ModelError("expected nine weights")
        for step, w in zip(STEPS, self.weight_vector):
            if w < 0:
                raise ModelError(f"negative weight d {step[0]} {step[1]} = {w}")
            if w > 1:
                raise ModelError(f"weight out of range: d {step[0]} {step[1]} = {w}")
        if sum(self.weight_vector) != 1:
            raise ModelError(f"weights sum to {sum(self.weight_vector)}, expected 1 (use normalize)")
        if not 0 < self.t < 1:
            raise ModelError(f"t = {self.t} outside (0,1)")

    @classmethod
    def from_weights(cls, weights: Mapping[Step, Fraction], t: Fraction) -> 'WeightedModel':
        """Build from a step->weight map; missing steps default to 0."""
        for step in weights:
            if step not in STEPS:
                raise ModelError(f"step {step} outside {{-1,0,1}}^2")
        vector = tuple(Fraction(weights.get(step, 0)) for step in STEPS)
        return cls(weight_vector=vector, t=Fraction(t))

    @property
    def weights(self) -> Dict[Step, Fraction]:
        """Step -> weight map (all nine steps)."""
        return dict(zip(STEPS, self.weight_vector))

    def d(self, i: int, j: int) -> Fraction:
        """Weight d_{i,j}."""
        return self.weight_vector[STEPS.index((i, j))]

    def with_t(self, t: Fraction) -> 'WeightedModel':
        """Same weights at another evaluation point."""
        return WeightedModel(weight_vector=self.weight_vector, t=Fraction(t))


# Grammar
_INT = pp.Regex(r"[+-]?\d+")
_VALUE = _INT("num") + pp.Optional(pp.Suppress("/") + pp.Regex(r"[+-]?\d+")("den"))
_WEIGHT_LINE = pp.Keyword("d")("key") + _INT("i") + _INT("j") + pp.Suppress("=") + _VALUE
_T_LINE = pp.Keyword("t")("key") + pp.Suppress("=") + _VALUE
_LINE = (_WEIGHT_LINE | _T_LINE) + pp.StringEnd()


def _value_of(result: pp.ParseResults, lineno: int) -> Fraction:
    den = int(result.get("den", 1))
    if den == 0:
        raise ModelError("zero denominator", line=lineno)
    return Fraction(int(result["num"]), den)


def parse_raw(text: str) -> Tuple[Dict[Step, Fraction], Optional[Fraction]]:
    """
    Parse a model file without enforcing the sum-to-one invariant.

    Args:
        text: Model file contents

    Returns:
        (weights, t) with unlisted steps omitted; t is None without a t line

    Raises:
        ModelError: syntax error, step outside {-1,0,1}^2, duplicate key,
            or negative weight
    """
    weights: Dict[Step, Fraction] = {}
    t_value: Optional[Fraction] = None

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            result = _LINE.parse_string(line, parse_all=True)
        except pp.ParseException as e:
            offset = len(raw_line) - len(raw_line.lstrip())
            raise ModelError(f"syntax error near {line!r}", line=lineno, column=e.col + offset)

        value = _value_of(result, lineno)
        if result["key"] == "t":
            if t_value is not None:
                raise ModelError("duplicate t line", line=lineno)
            t_value = value
            continue

        step = (int(result["i"]), int(result["j"]))
        if step not in STEPS:
            raise ModelError(f"step {step} outside {{-1,0,1}}^2", line=lineno)
        if step in weights:
            raise ModelError(f"duplicate step key d {step[0]} {step[1]}", line=lineno)
        if value < 0:
            raise ModelError(f"negative weight d {step[0]} {step[1]} = {value}", line=lineno)
        weights[step] = value

    return weights, t_value


def parse_model(text: str) -> WeightedModel:
    """
    Parse and validate a model file.

    Raises:
        ModelError: on any grammar or validation failure
    """
    weights, t_value = parse_raw(text)
    for step, w in weights.items():
        if w > 1:
            raise ModelError(f"weight out of range: d {step[0]} {step[1]} = {w}")
    if t_value is None:
        raise ModelError("missing 't = <p>/<q>' line")
    if not 0 < t_value < 1:
        raise ModelError(f"t = {t_value} outside (0,1)")
    return WeightedModel.from_weights(weights, t_value)


def normalize(raw_weights: Mapping[Step, Fraction], t_raw: Fraction) -> Tuple[WeightedModel, Fraction]:
    """
    Rescale weights to sum 1, absorbing the scale into t.

    Returns:
        (model, scale) where model.t = t_raw * scale

    Raises:
        ModelError: zero total weight, negative weight, or rescaled t outside (0,1)
    """
    for step, w in raw_weights.items():
        if w < 0:
            raise ModelError(f"negative weight d {step[0]} {step[1]} = {w}")
    sigma = sum((Fraction(w) for w in raw_weights.values()), Fraction(0))
    if sigma == 0:
        raise ModelError("all weights are zero; cannot normalize")
    t = Fraction(t_raw) * sigma
    if not 0 < t < 1:
        raise ModelError(f"rescaled t = {t} outside (0,1)")
    scaled = {step: Fraction(w) / sigma for step, w in raw_weights.items()}
    return WeightedModel.from_weights(scaled, t), sigma


def step_set(model: WeightedModel) -> StepSet:
    """Exact support of the weight map."""
    return StepSet(frozenset(s for s, w in model.weights.items() if w != 0))


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def serialize_model(model: WeightedModel) -> str:
    """Canonical model-file text (nonzero weights only)."""
    lines = []
    for step, w in model.weights.items():
        if w != 0:
            lines.append(f"d {step[0]} {step[1]} = {_format_fraction(w)}")
    lines.append(f"t = {model.t.numerator}/{model.t.denominator}")
    return "\n".join(lines) + "\n"


def apply_symmetry(model: WeightedModel, index: int) -> WeightedModel:
    """Apply one of the eight symmetries of the square to the step set."""
    a, b, c, e = SQUARE_SYMMETRIES[index]
    moved = {(a * i + b * j, c * i + e * j): w for (i, j), w in model.weights.items()}
    return WeightedModel.from_weights(moved, model.t)


def reflect(model: WeightedModel) -> WeightedModel:
    """x <-> y reflection: d_{i,j} -> d_{j,i}."""
    return apply_symmetry(model, 1)


def describe(model: WeightedModel) -> str:
    """Compass listing of the support, e.g. 'N, S, E, W'."""
    order = ["N", "NE", "E", "SE", "S", "SW", "W", "NW", "O"]
    names = {COMPASS_NAMES[s] for s in step_set(model).steps}
    return ", ".join(n for n in order if n in names)


def model_to_dict(model: WeightedModel) -> Dict[str, object]:
    """JSON-ready echo of the model."""
    return {
        "weights": {f"{i},{j}": _format_fraction(w) for (i, j), w in model.weights.items() if w != 0},
        "t": _format_fraction(model.t),
        "steps": describe(model),
    }


def equal_weight_model(steps: Iterable[Step], t: Fraction = Fraction(1, 2)) -> WeightedModel:
    """Uniform weights on the given steps."""
    step_list: List[Step] = sorted(set(steps))
    if not step_list:
        raise ModelError("empty step list")
    w = Fraction(1, len(step_list))
    return WeightedModel.from_weights({s: w for s in step_list}, t)
