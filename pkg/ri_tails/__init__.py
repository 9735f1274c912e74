__version__ = "0.3.0"

from .exceptions import (
    ConfigurationError,
    DomainError,
    NumericalError,
    ParseError,
    RangeError,
    RiTailsError,
    UsageError,
    ValidationError,
)
from .random_variables import AnalyticRV, DiscreteRV
from .tail_calculus import (
    EquivalenceWitness,
    Provenance,
    TailFunction,
    dilate,
    equivalence_check,
    left_inverse,
    order_check,
    tail_of_rv,
    vee,
)
from .spaces import SpaceDescriptor, SpaceFamily, characteristic, fundamental, norm

def __getattr__(name):
    if name in ('parse_space_spec', 'SpaceFactory'):
        from .spaces import factory
        return getattr(factory, name)
    raise AttributeError(f"module 'ri_tails' has no attribute '{name}'")

__all__ = [
    '__version__',
    'RiTailsError', 'ConfigurationError', 'DomainError', 'NumericalError', 'ParseError',
    'RangeError', 'UsageError', 'ValidationError',
    'AnalyticRV', 'DiscreteRV',
    'EquivalenceWitness', 'Provenance', 'TailFunction',
    'dilate', 'equivalence_check', 'left_inverse', 'order_check', 'tail_of_rv', 'vee',
    'SpaceDescriptor', 'SpaceFamily', 'characteristic', 'fundamental', 'norm',
    'parse_space_spec', 'SpaceFactory',
]
