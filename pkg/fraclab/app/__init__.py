from .config import Config


class FracLabApp:
    """Configured toolkit: the defaults class plus the experiment runner bound to it."""

    def __init__(self, config_class):
        self.config = config_class

    def run(self, experiment_config):
        from .services.experiment_service import ExperimentService
        return ExperimentService.run(experiment_config, defaults=self.config)


def create_app(config_class=Config):
    """Application factory for fraclab runs."""

    # Setup file logging (run log, error log; console in debug)
    from .utils.logging_config import setup_logging
    setup_logging(config_class)

    return FracLabApp(config_class)
