from .base import (
    FundamentalFunction,
    MeasureKind,
    MeasureModel,
    SpaceDescriptor,
    SpaceFamily,
    characteristic,
    fundamental,
    norm,
)
from .functions import (
    PsiForm,
    PsiFunction,
    WeightForm,
    WeightFunction,
    YoungForm,
    YoungFunction,
    conjugate_young,
    young_max,
)

def __getattr__(name):
    if name == 'LpSpace':
        from .lp import LpSpace
        return LpSpace
    elif name == 'LorentzSpace':
        from .lorentz import LorentzSpace
        return LorentzSpace
    elif name == 'OrliczSpace':
        from .orlicz import OrliczSpace
        return OrliczSpace
    elif name in ('GlsSpace', 'natural_psi', 'natural_psi_family'):
        from . import gls
        return getattr(gls, name)
    elif name in ('SpaceFactory', 'parse_space_spec'):
        from . import factory
        return getattr(factory, name)
    raise AttributeError(f"module 'ri_tails.spaces' has no attribute '{name}'")

__all__ = [
    'FundamentalFunction', 'MeasureKind', 'MeasureModel', 'SpaceDescriptor', 'SpaceFamily',
    'characteristic', 'fundamental', 'norm',
    'PsiForm', 'PsiFunction', 'WeightForm', 'WeightFunction', 'YoungForm', 'YoungFunction',
    'conjugate_young', 'young_max',
    'LpSpace', 'LorentzSpace', 'OrliczSpace', 'GlsSpace', 'natural_psi', 'natural_psi_family',
    'SpaceFactory', 'parse_space_spec',
]
