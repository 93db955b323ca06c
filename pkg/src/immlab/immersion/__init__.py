"""Exact complete-graph immersion search, certificates, pods and refutations."""

from .certificate import CertificateCheck, ImmersionCertificate, verify_certificate
from .search import (
    IMMERSED,
    NOT_IMMERSED,
    UNKNOWN,
    SearchOptions,
    SearchVerdict,
    corner_split_infeasible,
    find_immersion,
)

__all__ = [
    "CertificateCheck",
    "ImmersionCertificate",
    "verify_certificate",
    "IMMERSED",
    "NOT_IMMERSED",
    "UNKNOWN",
    "SearchOptions",
    "SearchVerdict",
    "corner_split_infeasible",
    "find_immersion",
]
