"""Decomposition, verification and oracle services."""

from .decomposition import DecompositionService, LevelRecord, MonomialPair, PhiMap, ScalarLevel
from .oracle import OracleService
from .verification import (
    CharacterCertificate,
    TheoremReport,
    VerificationService,
    verify_theorem,
)

__all__ = [
    "DecompositionService",
    "LevelRecord",
    "MonomialPair",
    "PhiMap",
    "ScalarLevel",
    "OracleService",
    "CharacterCertificate",
    "TheoremReport",
    "VerificationService",
    "verify_theorem",
]
