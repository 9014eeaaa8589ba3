import logging
import os
from dataclasses import dataclass

from dataclasses_json import dataclass_json
from PySide6.QtCore import QObject, QSettings, Signal

from enums import OutputFormat

logger = logging.getLogger(__name__)

CACHE_ENV = "CHAINFORGE_CACHE"


@dataclass_json
@dataclass
class Preferences:
    """Typed snapshot of the persisted preferences."""
    output_format: str = OutputFormat.JSON.value
    jobs: int = 1
    block_size: int = 1 << 16
    oracle_order_cap: int = 5000
    lattice_join_budget: int = 10 ** 6
    cache_dir: str = ""


DEFAULTS = Preferences()


class PreferencesManager(QObject):
    """
    Loads and persists chainforge preferences.
    Values live under "preferences/<key>" in QSettings; CHAINFORGE_CACHE overrides cache_dir.
    """
    preferences_saved = Signal()

    def __init__(self, parent=None, settings: QSettings | None = None):
        super().__init__(parent)
        self.settings = settings if settings is not None else QSettings("Chainforge", "chainforge")

    def _int(self, key: str, default: int) -> int:
        try:
            return int(self.settings.value(f"preferences/{key}", default))
        except (TypeError, ValueError):
            logger.warning("[Preferences] Ignoring malformed value for %s", key)
            return default

    def load(self) -> Preferences:
        fmt = str(self.settings.value("preferences/output_format", DEFAULTS.output_format))
        if fmt not in {f.value for f in OutputFormat}:
            logger.warning("[Preferences] Unknown output format '%s', using %s", fmt, DEFAULTS.output_format)
            fmt = DEFAULTS.output_format
        prefs = Preferences(
            output_format=fmt,
            jobs=max(1, self._int("jobs", DEFAULTS.jobs)),
            block_size=max(1024, self._int("block_size", DEFAULTS.block_size)),
            oracle_order_cap=self._int("oracle_order_cap", DEFAULTS.oracle_order_cap),
            lattice_join_budget=self._int("lattice_join_budget", DEFAULTS.lattice_join_budget),
            cache_dir=str(self.settings.value("preferences/cache_dir", DEFAULTS.cache_dir) or ""),
        )
        env_cache = os.environ.get(CACHE_ENV)
        if env_cache:
            prefs.cache_dir = env_cache
        return prefs

    def save_defaults(self, output_format: str | None = None, jobs: int | None = None) -> None:
        """Persist the run's --format / --jobs choices."""
        if output_format is not None:
            self.settings.setValue("preferences/output_format", output_format)
        if jobs is not None:
            self.settings.setValue("preferences/jobs", int(jobs))
        self.settings.sync()
        logger.info("[Preferences] Saved defaults (format=%s, jobs=%s)", output_format, jobs)
        self.preferences_saved.emit()

    def reset_to_defaults(self) -> None:
        for key, value in DEFAULTS.to_dict().items():
            self.settings.setValue(f"preferences/{key}", value)
        self.settings.sync()
        self.preferences_saved.emit()
