# fraclab/app/config.py
# Environment-overridable defaults for experiment runs
import os
from pathlib import Path
from dotenv import load_dotenv

# Base directory (parent of app folder, i.e., fraclab/)
BASEDIR = Path(__file__).resolve().parent.parent

# Load .env from the package root, falling back to the repo root
env_path = BASEDIR / ".env"
if env_path.exists():
    load_dotenv(dotenv_path=env_path)
else:
    repo_root_env = BASEDIR.parent / ".env"
    if repo_root_env.exists():
        load_dotenv(dotenv_path=repo_root_env)
    else:
        load_dotenv()


def _env_int(name, default):
    return int(os.getenv(name, default))


def _env_flag(name, default="False"):
    return os.getenv(name, default).lower() in ("1", "true", "yes")


class Config:
    """Defaults used when neither a config file nor a flag sets a value."""

    # Refinement levels (nodes per axis) for sweeps
    GRID_N = tuple(int(n) for n in os.getenv("FRACLAB_GRID_N", "32,64").split(","))
    Y_LAYERS = _env_int("FRACLAB_Y_LAYERS", 200)
    SEED = _env_int("FRACLAB_SEED", 0)
    CORPUS_SIZE = _env_int("FRACLAB_CORPUS_SIZE", 12)
    OUT_DIR = os.getenv("FRACLAB_OUT", str(BASEDIR.parent / "results"))
    # None lets the thread pool pick min(32, cpu + 4)
    WORKERS = int(os.environ["FRACLAB_WORKERS"]) if os.getenv("FRACLAB_WORKERS") else None

    DEBUG = _env_flag("FRACLAB_DEBUG")
    LOG_DIR = os.getenv("FRACLAB_LOG_DIR", str(BASEDIR.parent / "logs"))

    DOMAIN = "interval:-1,1"
    ALPHAS = (0.25, 0.5, 0.75)
    KINDS = ("spectral", "fourier")

    # Appendix experiments
    COUNTEREXAMPLE_NODES = 4096
    L1_GRID_N = (256, 512)


class QuickConfig(Config):
    """Desk-check sizes for smoke runs and tests"""
    GRID_N = (16, 32)
    Y_LAYERS = 60
    CORPUS_SIZE = 3
    COUNTEREXAMPLE_NODES = 1024
    L1_GRID_N = (64, 128)


class FullConfig(Config):
    """Acceptance sizes"""
    GRID_N = (64, 128, 256)
    Y_LAYERS = 200
    CORPUS_SIZE = 12
    COUNTEREXAMPLE_NODES = 4096
    L1_GRID_N = (512, 1024)


def select_config():
    env = os.getenv("FRACLAB_ENV", "default")
    if env == "quick":
        return QuickConfig
    if env == "full":
        return FullConfig
    return Config
