"""
Command line entry point.

    python run.py --experiment hardy --out results/hardy
    python run.py --config sweep.env --grid-n 32,64 --alpha 0.25,0.5

A config file holds key=value lines using the flag names (dashes or
underscores). Flags override the file, the file overrides the defaults class.
"""
import argparse
import logging
import os
from typing import Dict, List, Optional

from dotenv import dotenv_values
from marshmallow import ValidationError

from . import create_app
from .config import select_config
from .errors import ConfigError, register_error_handlers
from .models import EXPERIMENTS, ExperimentConfig, ExperimentConfigSchema

logger = logging.getLogger(__name__)

# flag dest -> schema key
FLAG_KEYS = ("experiment", "out", "domain", "grid_n", "y_layers", "alpha", "beta", "seed", "corpus_size",
             "eps_list", "kinds", "workers", "alpha0", "alpha1", "alpha2", "delta_fraction")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fraclab", description="Numerical checks of fractional-Laplacian commutator estimates.")
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="Experiment to run")
    parser.add_argument("--config", help="key=value file with run parameters")
    parser.add_argument("--out", help="Output directory for report.csv, summary.txt and charts")
    parser.add_argument("--domain", help="interval:a,b | rectangle:a,b,c,d | ball:radius,dim")
    parser.add_argument("--grid-n", dest="grid_n", help="Comma-separated nodes per axis, one per level")
    parser.add_argument("--y-layers", dest="y_layers", help="Number of y-layers K")
    parser.add_argument("--alpha", help="Comma-separated orders in (0, 1)")
    parser.add_argument("--beta", help="Comma-separated Sobolev orders")
    parser.add_argument("--seed", help="Corpus seed")
    parser.add_argument("--corpus-size", dest="corpus_size", help="Number of (g, h) pairs")
    parser.add_argument("--eps-list", dest="eps_list", help="Comma-separated cutoff widths, strictly decreasing")
    parser.add_argument("--kinds", help="Comma-separated operator kinds")
    parser.add_argument("--workers", help="Thread pool size for sweeps")
    parser.add_argument("--alpha0", help="Counterexample: proven decay order")
    parser.add_argument("--alpha1", help="Counterexample: seminorm order")
    parser.add_argument("--alpha2", help="Counterexample: comparison order")
    parser.add_argument("--delta-fraction", dest="delta_fraction", help="L1 bound: delta as a fraction of alpha")
    return parser


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a key=value file, normalising keys to schema names."""
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise ConfigError(f"Config key '{key}' has no value.")
        values[key.strip().lower().replace("-", "_")] = value
    return values


def _defaults(defaults) -> Dict[str, object]:
    values = {
        "out": defaults.OUT_DIR,
        "domain": defaults.DOMAIN,
        "y_layers": defaults.Y_LAYERS,
        "seed": defaults.SEED,
        "corpus_size": defaults.CORPUS_SIZE,
        "kinds": list(defaults.KINDS),
    }
    if defaults.WORKERS is not None:
        values["workers"] = defaults.WORKERS
    return values


def parse_config(argv: Optional[List[str]] = None, defaults=None) -> ExperimentConfig:
    """
    Merge defaults, config file and flags into a validated ExperimentConfig.

    Raises:
        ConfigError: bad flags, unreadable file, unknown keys or invalid values
    """
    defaults = defaults or select_config()
    args = build_parser().parse_args(argv)

    data = _defaults(defaults)
    if args.config:
        data.update(read_config_file(args.config))
    for key in FLAG_KEYS:
        value = getattr(args, key)
        if value is not None:
            data[key] = value

    if "experiment" not in data:
        raise ConfigError("No experiment given; pass --experiment or set experiment= in the config file.")
    try:
        return ExperimentConfigSchema().load(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid configuration: {exc.messages}") from exc


def _run(argv: Optional[List[str]] = None) -> int:
    defaults = select_config()
    config = parse_config(argv, defaults)
    app = create_app(defaults)
    logger.info(f"Running {config.experiment} into {config.out}")
    return app.run(config)


main = register_error_handlers(_run)
