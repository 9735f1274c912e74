import logging
import math
from typing import Any, Dict, Optional, Tuple

from ..exceptions import DomainError, ParseError, UsageError, ValidationError
from .base import MeasureKind, MeasureModel, SpaceDescriptor, SpaceFamily
from .functions import PsiFunction, WeightFunction, YoungFunction
from .gls import GlsSpace
from .lorentz import LorentzSpace
from .lp import LpSpace
from .orlicz import OrliczSpace

logger = logging.getLogger(__name__)


class SpaceFactory:
    """Factory class for creating catalog spaces."""

    @staticmethod
    def create_space(
        family: SpaceFamily,
        measure: Optional[MeasureModel] = None,
        **kwargs: Any
    ) -> SpaceDescriptor:
        """Create a space descriptor.

        Args:
            family: Catalog family to build
            measure: Underlying measure, probabilistic by default
            **kwargs: Family-specific parameters

        Returns:
            SpaceDescriptor instance

        Raises:
            UsageError: If required parameters are missing
            DomainError: If a parameter is out of range
        """
        measure = measure or MeasureModel.probabilistic()

        if family == SpaceFamily.LP:
            if 'p' not in kwargs:
                raise UsageError("Missing required Lp parameter. Required keys: ['p']")
            return LpSpace(p=float(kwargs['p']), measure=measure)

        elif family == SpaceFamily.LORENTZ:
            weight = kwargs.get('w', 'power')
            if weight != 'power':
                raise UsageError(f"Unsupported Lorentz weight: {weight}")
            if 'p' not in kwargs:
                raise UsageError("Missing required Lorentz parameter. Required keys: ['p']")
            return LorentzSpace(w=WeightFunction.power(float(kwargs['p'])), measure=measure)

        elif family == SpaceFamily.ORLICZ:
            form = kwargs.get('form', 'powerlog' if 'q' in kwargs else 'power')
            if 'p' not in kwargs:
                raise UsageError("Missing required Orlicz parameter. Required keys: ['p']")
            p = float(kwargs['p'])
            c = float(kwargs.get('c', 1.0))
            if form == 'power':
                N = YoungFunction.power(p, c=c)
            elif form == 'powerlog':
                N = YoungFunction.power_log(p, float(kwargs.get('q', 0.0)), c=c)
            else:
                raise UsageError(f"Unsupported Orlicz form: {form}")
            return OrliczSpace(N=N, measure=measure)

        elif family == SpaceFamily.GLS:
            form = kwargs.get('form') or _infer_gls_form(kwargs)
            if form == 'gridblowup':
                required_keys = ['B', 'beta']
                if not all(key in kwargs for key in required_keys):
                    raise UsageError(f"Missing required GLS parameter. Required keys: {required_keys}")
                psi = PsiFunction.grid_blowup(float(kwargs['B']), float(kwargs['beta']))
            elif form == 'powerroot':
                if 'm' not in kwargs:
                    raise UsageError("Missing required GLS parameter. Required keys: ['m']")
                psi = PsiFunction.power_root(float(kwargs['m']))
            elif form == 'degenerate':
                if 'r' not in kwargs:
                    raise UsageError("Missing required GLS parameter. Required keys: ['r']")
                psi = PsiFunction.degenerate(float(kwargs['r']))
            else:
                raise UsageError(f"Unsupported GLS form: {form}")
            return GlsSpace(psi=psi, measure=measure)

        else:
            raise UsageError(f"Unsupported space family: {family}")


def _infer_gls_form(kwargs: Dict) -> str:
    if 'm' in kwargs:
        return 'powerroot'
    if 'r' in kwargs:
        return 'degenerate'
    return 'gridblowup'


_KEY_ALIASES = {'b': 'B'}
_ALLOWED_KEYS = {
    SpaceFamily.LP: {'p'},
    SpaceFamily.LORENTZ: {'w', 'p'},
    SpaceFamily.ORLICZ: {'form', 'p', 'q', 'c'},
    SpaceFamily.GLS: {'form', 'B', 'beta', 'm', 'r'},
}
_TEXT_KEYS = ('form', 'w', 'measure')


def _split_pairs(body: str, text: str) -> Dict[str, Tuple[str, str]]:
    """key -> (value, original token)."""
    pairs: Dict[str, Tuple[str, str]] = {}
    if not body.strip():
        return pairs
    for token in body.split(','):
        token = token.strip()
        if '=' not in token:
            raise ParseError(f"expected key=value in {text!r}, got {token!r}", token=token)
        key, value = (part.strip() for part in token.split('=', 1))
        key = _KEY_ALIASES.get(key, key)
        if not key or not value:
            raise ParseError(f"empty key or value in {text!r}: {token!r}", token=token)
        if key in pairs:
            raise ParseError(f"duplicate key {key!r} in {text!r}", token=token)
        pairs[key] = (value, token)
    return pairs


def parse_space_spec(text: str) -> SpaceDescriptor:
    """Parse ``family:key=value,...`` into a space descriptor.

    Families are lp, linf, lorentz, orlicz and gls; ``measure=prob|infinite``
    may be added to any of them.

    Raises:
        ParseError: On unknown families, malformed pairs or out-of-range parameters;
            ``token`` names the offending piece of text
    """
    head, _, body = text.strip().partition(':')
    family_token = head.strip().lower()
    pairs = _split_pairs(body, text)

    measure = MeasureModel.probabilistic()
    measure_token = 'measure'
    if 'measure' in pairs:
        value, token = pairs.pop('measure')
        measure_token = token
        try:
            measure = MeasureModel(MeasureKind(value.lower()))
        except ValueError:
            raise ParseError(f"unknown measure {value!r}; expected prob or infinite", token=token)

    if family_token == 'linf':
        pairs.setdefault('p', ('inf', 'linf'))
        family_token = 'lp'
    try:
        family = SpaceFamily(family_token)
    except ValueError:
        raise ParseError(f"unknown space family {head.strip()!r}", token=head.strip())

    kwargs: Dict[str, Any] = {}
    for key, (value, token) in pairs.items():
        if key not in _ALLOWED_KEYS[family]:
            raise ParseError(f"unknown parameter {key!r} for {family.value}", token=token)
        if key in _TEXT_KEYS:
            kwargs[key] = value.lower()
            continue
        try:
            number = float(value)
        except ValueError:
            raise ParseError(f"parameter {key!r} is not a number: {value!r}", token=token)
        if math.isnan(number):
            raise ParseError(f"parameter {key!r} is NaN", token=token)
        kwargs[key] = number

    try:
        space = SpaceFactory.create_space(family, measure=measure, **kwargs)
    except (DomainError, UsageError, ValidationError) as e:
        raise ParseError(f"{text!r}: {e}", token=_blame(str(e), pairs, head.strip(), measure_token))
    logger.debug("parsed %r as %s", text, space.label)
    return space


def _blame(message: str, pairs: Dict[str, Tuple[str, str]], fallback: str, measure_token: str) -> str:
    """Pick the token whose key the error message mentions."""
    for key, (_, token) in pairs.items():
        if f"{key}=" in message or f"{key} " in message:
            return token
    if 'measure' in message:
        return measure_token
    return fallback
