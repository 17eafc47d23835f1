"""
Experiment configuration: the validated record every experiment suite runs from.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from marshmallow import RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema

from .modules.domain import Domain
from .utils.validation import (
    validate_counterexample_orders,
    validate_domain_string,
    validate_epsilon_list,
    validate_fractional_order,
)

logger = logging.getLogger(__name__)

EXPERIMENTS = ("commutator-sweep", "lemmas", "hardy", "counterexample", "l1-theorem", "extension-convergence")
KIND_CHOICES = ("spectral", "fourier", "restricted", "regional")
MIN_GRID_N = 8


@dataclass
class ExperimentConfig:
    """
    One experiment run. Optional lists left as None take the experiment's own
    defaults (the counterexample runs at alpha = 0.3, sweeps at 0.25/0.5/0.75).
    """

    experiment: str
    out: str
    domain: str = "interval:-1,1"
    grid_n: Optional[List[int]] = None
    y_layers: int = 200
    alpha: Optional[List[float]] = None
    beta: Optional[List[float]] = None
    kinds: List[str] = field(default_factory=lambda: ["spectral", "fourier"])
    seed: int = 0
    corpus_size: int = 12
    eps_list: List[float] = field(default_factory=lambda: [0.08, 0.04, 0.02, 0.01])
    alpha0: float = 0.4
    alpha1: float = 0.35
    alpha2: float = 0.45
    delta_fraction: float = 0.125
    workers: Optional[int] = None

    def build_domain(self) -> Domain:
        kind, _, rest = self.domain.partition(":")
        values = [float(p) for p in rest.split(",") if p.strip()]
        if kind == "interval":
            return Domain.interval(*values)
        if kind == "rectangle":
            return Domain.rectangle(values[:2], values[2:])
        return Domain.ball(center=(0.0,) * int(values[1]), radius=values[0])


class CommaList(fields.Field):
    """List field that also accepts the comma-separated form used in key=value files."""

    def __init__(self, inner: fields.Field, **kwargs):
        super().__init__(**kwargs)
        self.inner = inner

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = [p.strip() for p in value.split(",") if p.strip()]
        if not isinstance(value, (list, tuple)):
            raise ValidationError("Expected a list or a comma-separated string.")
        return [self.inner.deserialize(v) for v in value]

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return ",".join(str(v) for v in value)


class ExperimentConfigSchema(Schema):
    """Coerces flat string values and checks every parameter ordering before dispatch."""

    class Meta:
        unknown = RAISE

    experiment = fields.String(required=True, validate=validate.OneOf(EXPERIMENTS))
    out = fields.String(required=True)
    domain = fields.String()
    grid_n = CommaList(fields.Integer(), allow_none=True)
    y_layers = fields.Integer(validate=validate.Range(min=6))
    alpha = CommaList(fields.Float(), allow_none=True)
    beta = CommaList(fields.Float(), allow_none=True)
    kinds = CommaList(fields.String(validate=validate.OneOf(KIND_CHOICES)))
    seed = fields.Integer()
    corpus_size = fields.Integer(validate=validate.Range(min=1))
    eps_list = CommaList(fields.Float())
    alpha0 = fields.Float()
    alpha1 = fields.Float()
    alpha2 = fields.Float()
    delta_fraction = fields.Float(validate=validate.Range(min=0.0, max=0.25, min_inclusive=False, max_inclusive=False))
    workers = fields.Integer(allow_none=True, validate=validate.Range(min=1))

    @validates_schema
    def check_orderings(self, data, **kwargs):
        errors = {}
        if "domain" in data:
            ok, message = validate_domain_string(data["domain"])
            if not ok:
                errors["domain"] = [message]
        if data.get("grid_n") and min(data["grid_n"]) < MIN_GRID_N:
            errors["grid_n"] = [f"Grid sizes must be at least {MIN_GRID_N} nodes per axis."]
        for alpha in data.get("alpha") or []:
            for beta in data.get("beta") or [None]:
                ok, message = validate_fractional_order(alpha, beta)
                if not ok:
                    errors.setdefault("beta" if beta is not None else "alpha", []).append(message)
        if data.get("experiment") == "counterexample":
            alpha = (data.get("alpha") or [0.3])[0]
            ok, message = validate_counterexample_orders(alpha, data.get("alpha0", 0.4),
                                                         data.get("alpha1", 0.35), data.get("alpha2", 0.45))
            if not ok:
                errors["alpha0"] = [message]
            ok, message = validate_epsilon_list(data.get("eps_list", [0.08, 0.04, 0.02, 0.01]))
            if not ok:
                errors["eps_list"] = [message]
        if errors:
            raise ValidationError(errors)

    @post_load
    def make_config(self, data, **kwargs):
        return ExperimentConfig(**data)
