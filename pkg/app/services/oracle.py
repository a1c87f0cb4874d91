"""Memoized character-table oracle."""

from __future__ import annotations

import logging

from app.config import OracleConfig
from app.core.dixon import CharacterTable, character_table
from app.core.group import SubgroupHandle

logger = logging.getLogger(__name__)


class OracleService:
    """Compute and cache character tables keyed by the subgroup's element codes."""

    def __init__(self, config: OracleConfig, seed: int) -> None:
        self._config = config
        self._seed = seed
        self._tables: dict[tuple[int, bytes], CharacterTable] = {}

    def table(self, group: SubgroupHandle) -> CharacterTable:
        """Return the character table of ``group``, computing it on first use."""

        key = (id(group.group), group.key)
        cached = self._tables.get(key)
        if cached is not None:
            return cached
        logger.info("Computing character table of %r", group)
        table = self.fresh_table(group, seed=self._seed)
        self._tables[key] = table
        return table

    def fresh_table(self, group: SubgroupHandle, *, seed: int) -> CharacterTable:
        """Compute a table without touching the cache."""

        return character_table(
            group,
            seed=seed,
            prime_bound=self._config.prime_bound,
            max_attempts=self._config.max_attempts,
        )


__all__ = ["OracleService"]
