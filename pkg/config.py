import os
import logging
from dotenv import load_dotenv
from typing import Optional, Dict

logger = logging.getLogger(__name__)

class ConfigManager:
    """
    Manages loading and accessing run defaults (pressure schedule, budgets,
    parallel layout, GA parameters) from environment variables and .env files.
    Command-line flags always win over anything loaded here.
    """

    DEFAULTS: Dict[str, str] = {
        "LOG_LEVEL": "INFO",
        "GENE_MACHINE_BETA0": "1.0",
        "GENE_MACHINE_BETA1": "8.0",
        "GENE_MACHINE_BUDGET_EVALS": "10000",
        "GENE_MACHINE_MACHINES": "1",
        "GENE_MACHINE_CYCLES": "1",
        "GENE_MACHINE_MERGE_MODE": "one-way",
        "GENE_MACHINE_MAX_WORKERS": "",
        "GENE_MACHINE_TRACE_POINTS": "200",
        "GA_POPULATION": "50",
        "GA_TOURNAMENT": "3",
        "GA_CROSSOVER_RATE": "0.9",
        "GA_MUTATION_RATE": "0.2",
        "GA_ELITISM": "1",
    }

    EXPECTED_KEYS = list(DEFAULTS)

    def __init__(self, dotenv_path: Optional[str] = None, override_dotenv: bool = False):
        """
        Initializes the ConfigManager and loads configuration.
        Override is False: existing env vars take precedence over the .env file.
        """
        loaded_path = load_dotenv(dotenv_path=dotenv_path, override=override_dotenv)
        if loaded_path:
            logger.info(f"Configuration loaded from .env file: {dotenv_path or '.env'}")
        else:
            logger.debug("No .env file found. Using environment variables and built-in defaults.")

    def get_setting(self, key: str, default: Optional[str] = None) -> Optional[str]:
        """
        Retrieves a configuration setting by its key from environment variables,
        falling back to the given default and then to the built-in default.
        """
        value = os.getenv(key)
        if value is None or value == "":
            return default if default is not None else (self.DEFAULTS.get(key) or None)
        return value

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        raw = self.get_setting(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"Setting {key}='{raw}' is not an integer. Using default {default}.")
            return default

    def get_float(self, key: str, default: Optional[float] = None) -> Optional[float]:
        raw = self.get_setting(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            logger.warning(f"Setting {key}='{raw}' is not a number. Using default {default}.")
            return default

    def get_all_config_dict(self) -> Dict[str, Optional[str]]:
         """Returns a dictionary of the effective values for every recognised key."""
         return {key: self.get_setting(key) for key in self.EXPECTED_KEYS}
