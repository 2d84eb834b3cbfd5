import logging
import os
import re
import requests
from typing import Optional
from requests.exceptions import RequestException

from errors import InstanceLoadError, InvalidConfigError
from services.problem_service import (
    ProblemInstance,
    parse_cost_matrix,
    parse_distance_matrix,
    parse_tsplib_euc2d,
)

logger = logging.getLogger(__name__)

INSTANCE_KINDS = ("tsp-open", "assignment", "tsplib")


class InstanceService:
    """
    Reads problem instances from local files or plain http(s) URLs
    (e.g. a TSPLIB mirror) and hands the text to the matching parser.
    """
    URL_REGEX = re.compile(r'^https?://', re.IGNORECASE)

    def __init__(self, timeout: int = 30):
        self.timeout = timeout
        logger.debug("InstanceService initialized.")

    def _is_url(self, source: str) -> bool:
        return bool(self.URL_REGEX.match(source))

    def fetch_text(self, source: str) -> Optional[str]:
        """
        Returns the raw instance text from a path or URL, or None on failure.
        """
        if not source:
            logger.warning("Empty instance source given.")
            return None

        if not self._is_url(source):
            try:
                with open(source, encoding="utf-8") as handle:
                    text = handle.read()
                logger.info(f"Read instance file: {source} (Length: {len(text)})")
                return text
            except OSError as e:
                logger.error(f"Could not read instance file {source}: {e}", exc_info=True)
                return None
            except UnicodeDecodeError as e:
                logger.error(f"Instance file {source} is not UTF-8 text: {e}")
                return None

        logger.debug(f"Attempting to fetch instance from: {source}")
        try:
            response = requests.get(source, timeout=self.timeout)
            if response.status_code == 404:
                logger.error(f"Instance not found (404) at URL: {source}")
                return None
            if response.status_code == 403:
                logger.error(f"Permission denied (403) for instance URL: {source}")
                return None
            response.raise_for_status()
            response.encoding = response.apparent_encoding or 'utf-8'
            text = response.text
            logger.info(f"Fetched instance from {source} (Length: {len(text)})")
            return text
        except RequestException as e:
            logger.error(f"HTTP request failed for {source}: {e}", exc_info=True)
            return None

    def load_instance(self, source: str, kind: str = "tsp-open") -> ProblemInstance:
        """Fetches and parses an instance; `kind` is one of tsp-open, assignment, tsplib."""
        if kind not in INSTANCE_KINDS:
            raise InvalidConfigError(f"Unknown instance kind '{kind}'. Expected one of {', '.join(INSTANCE_KINDS)}")
        text = self.fetch_text(source)
        if text is None:
            raise InstanceLoadError(f"Could not load instance from '{source}'")
        name = os.path.splitext(os.path.basename(source))[0] or "instance"
        if kind == "assignment":
            return parse_cost_matrix(text, name=name)
        if kind == "tsplib":
            return parse_tsplib_euc2d(text, name=name)
        return parse_distance_matrix(text, name=name)
