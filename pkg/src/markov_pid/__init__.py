"""Unique information, redundancy and synergy with explicit extractors.

Two definitions are supported, each a maximum over extractors ``T`` that are
independent of the protected variable ``Y``:

* ``tmxy``: ``T`` is a noisy function of the message ``M``; maximize ``I(T; X)``.
* ``myxt``: ``T`` is a noisy function of the source ``X``; maximize ``I(T; M)``.

Gaussian joints have a closed form; finite alphabets are solved by vertex
enumeration of the feasible channel polytope.
"""

__version__ = "0.1.0"

from .discrete_ui import (
    CANONICAL,
    DiscreteUIResult,
    Method,
    Mode,
    canonical_example,
    decompose_discrete,
    lemma_b1_verify,
    pid_terms_discrete,
    ui_discrete,
)
from .exceptions import (
    DomainError,
    EnumerationCapError,
    IllConditionedError,
    NegativeInformationError,
    UsageError,
    ValidationError,
)
from .gaussian_ui import (
    GaussianUIResult,
    counterexample_family,
    kernel_basis,
    numeric_ui_verify,
    optimal_extractor,
    pid_terms_gaussian,
    ui_gaussian,
)
from .io import read_discrete, read_gaussian
from .joint import DiscreteJoint, GaussianJoint, whiten
from .measures import (
    conditional_mutual_information,
    entropy,
    gaussian_conditional_mi,
    gaussian_mi,
    markov_check_gaussian,
    mutual_information,
)
from .pid import Definition, PIDTerms
from .polytope import Channel, build_polytope, enumerate_vertices
from .units import InfoUnit

__all__ = [
    "CANONICAL",
    "Channel",
    "Definition",
    "DiscreteJoint",
    "DiscreteUIResult",
    "DomainError",
    "EnumerationCapError",
    "GaussianJoint",
    "GaussianUIResult",
    "IllConditionedError",
    "InfoUnit",
    "Method",
    "Mode",
    "NegativeInformationError",
    "PIDTerms",
    "UsageError",
    "ValidationError",
    "build_polytope",
    "canonical_example",
    "conditional_mutual_information",
    "counterexample_family",
    "decompose_discrete",
    "entropy",
    "enumerate_vertices",
    "gaussian_conditional_mi",
    "gaussian_mi",
    "kernel_basis",
    "lemma_b1_verify",
    "markov_check_gaussian",
    "mutual_information",
    "numeric_ui_verify",
    "optimal_extractor",
    "pid_terms_discrete",
    "pid_terms_gaussian",
    "read_discrete",
    "read_gaussian",
    "ui_discrete",
    "ui_gaussian",
    "whiten",
]
