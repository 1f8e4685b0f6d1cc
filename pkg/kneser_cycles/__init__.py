"""Constructive Hamilton cycles in bipartite Kneser graphs, Kneser graphs and hypercube levels."""

from .bitcore import GraphFamily, GraphKind, Vertex
from .certificate import HCycleCertificate
from .derive import bipartite_hamilton, coverage_fraction, kneser_cycle, qnk_cycle
from .exceptions import (
    BaseCaseUnavailableError,
    BudgetExhaustedError,
    CertificateParseError,
    CertificateValidationError,
    InvariantViolationError,
    KneserError,
    ParameterError,
    SelfVerificationError,
)
from .factory import (
    create_base_provider,
    create_lemma_builder,
    create_pipeline,
    create_store,
)
from .lemma_engine import LemmaBuilder, LemmaStructure, build
from .middle_levels import MiddleLevelsCycle, normalize_anchor, solve_base
from .providers import (
    BaseCaseProvider,
    DirectoryBaseProvider,
    FallbackBaseProvider,
    SearchBaseProvider,
)
from .verify import VerificationReport, verify_certificate, verify_lemma_structure

__version__ = "0.1.0"
__all__ = [
    "Vertex",
    "GraphKind",
    "GraphFamily",
    "HCycleCertificate",
    "LemmaStructure",
    "LemmaBuilder",
    "MiddleLevelsCycle",
    "VerificationReport",
    "build",
    "solve_base",
    "normalize_anchor",
    "bipartite_hamilton",
    "kneser_cycle",
    "qnk_cycle",
    "coverage_fraction",
    "verify_certificate",
    "verify_lemma_structure",
    # Providers
    "BaseCaseProvider",
    "SearchBaseProvider",
    "DirectoryBaseProvider",
    "FallbackBaseProvider",
    # Factory functions
    "create_base_provider",
    "create_lemma_builder",
    "create_pipeline",
    "create_store",
    # Errors
    "KneserError",
    "ParameterError",
    "CertificateParseError",
    "CertificateValidationError",
    "BaseCaseUnavailableError",
    "BudgetExhaustedError",
    "InvariantViolationError",
    "SelfVerificationError",
]
