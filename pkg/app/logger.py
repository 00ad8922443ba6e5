"""
Observer pattern for experiment logging and result persistence.

Experiments (GHZ trial batches, placements, spectra) publish events on an
ExperimentSubject. The LoggingObserver writes them through Python logging;
the ResultsObserver appends result rows to a pandas-backed CSV table.
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

from .exceptions import TopologyError
from .results import ResultsTable

# Type aliases
EventData = Dict[str, Any]

PACKAGE_LOGGER = "app"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str = "INFO", log_file: Optional[str] = None,
                      log_format: Optional[str] = None) -> logging.Logger:
    """
    Attach one handler to the package logger, replacing any earlier one.

    Args:
        level (str): Logging level name
        log_file (str, optional): Log to this file instead of stderr
        log_format (str, optional): Format string for records

    Returns:
        logging.Logger: The configured package logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = logging.FileHandler(log_file)
    else:
        handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(log_format or DEFAULT_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    return logger


class Observer(ABC):
    """Receives experiment events from a subject."""

    @abstractmethod
    def update(self, event_type: str, data: EventData) -> None:
        pass


class ExperimentSubject:
    """
    Publisher of experiment events.

    A failing observer is logged and skipped so the remaining observers
    still receive the event.
    """

    def __init__(self):
        self._observers: List[Observer] = []

    def attach(self, observer: Observer) -> None:
        """
        Raises:
            TopologyError: If the object has no callable ``update``
        """
        if not callable(getattr(observer, "update", None)):
            raise TopologyError(f"Invalid observer type: {type(observer).__name__}", "OBSERVER_ERROR")
        if observer not in self._observers:
            self._observers.append(observer)

    def detach(self, observer: Observer) -> None:
        if observer in self._observers:
            self._observers.remove(observer)

    def notify(self, event_type: str, data: EventData) -> None:
        for observer in self._observers:
            try:
                observer.update(event_type, data)
            except Exception as e:
                logging.getLogger(__name__).warning("Observer %s failed: %s", type(observer).__name__, e)

    def get_observer_count(self) -> int:
        return len(self._observers)


class LoggingObserver(Observer):
    """Observer that writes one log line per experiment event."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(f"{PACKAGE_LOGGER}.experiments")

    def update(self, event_type: str, data: EventData) -> None:
        if event_type == "ghz":
            self.logger.info(
                "GHZ: %s N=%s start=%s mean=%.3f prediction=%.3f seed=%s",
                data.get("graph"), data.get("N"), data.get("start"),
                data.get("mean", float("nan")), data.get("prediction", float("nan")), data.get("seed"),
            )
        elif event_type == "placement":
            self.logger.info(
                "PLACEMENT: %s qubits=%s gates=%s cost=%s naive=%s",
                data.get("graph"), data.get("qubits"), data.get("gates"), data.get("cost"), data.get("naive_cost"),
            )
        elif event_type == "error":
            self.logger.error("ERROR [%s]: %s", data.get("error_type", "Unknown"), data.get("error_message", ""))
        else:
            self.logger.info("Event: %s - Data: %s", event_type, data)


class ResultsObserver(Observer):
    """Observer that appends experiment rows to a results CSV."""

    def __init__(self, results_file: str):
        self.results_file = results_file
        self._tables: Dict[str, ResultsTable] = {}

    def _table(self, kind: str) -> ResultsTable:
        if kind not in self._tables:
            path = Path(self.results_file)
            target = path.with_name(f"{path.stem}_{kind}{path.suffix or '.csv'}")
            self._tables[kind] = ResultsTable(kind, str(target), auto_save=True)
        return self._tables[kind]

    def update(self, event_type: str, data: EventData) -> None:
        if event_type in ResultsTable.COLUMNS:
            self._table(event_type).add_row(data)
