from typing import Tuple, Union
from ..descriptors.string_descriptor import StringDescriptor
from ..descriptors.float_descriptor import FloatDescriptor
from ..exceptions import InvalidParameterError

class ClusteringParameter:
    """A clustering function parameter, described by a name, a default and constraints

    Constraints:
    - min: The minimum allowed value
    - max: The maximum allowed value
    """
    name = StringDescriptor()
    """The parameter name"""

    min = FloatDescriptor()
    """The minimum allowed value"""

    max = FloatDescriptor()
    """The maximum allowed value"""

    def __init__(
        self,
        name : str,
        default : Union[int,float],
        constraints : Tuple[float,float] = (None, None),
        integer : bool = False
        ):
        """
        name : str

            The name of the parameter

        default : int or float

            Value used when the parameter is not set

        constraints : Tuple[float,float] = (None, None)

            tuple(min, max). None means unbounded

        integer : bool = False

            The value must be integral
        """
        if not isinstance(constraints, (list, tuple)) or len(constraints) < 2:
            raise ValueError("constraints must be a 2-length list or tuple")
        self.name = name
        self.min = constraints[0]
        self.max = constraints[1]
        self.integer = integer
        self.default = default

    def check(
        self,
        value : Union[int,float,str]
        ) -> Union[int,float]:
        """Coerce value and check constraints. The string "inf" is accepted for unbounded float parameters

        Raises:
        -------
        InvalidParameterError"""
        if value is None:
            return self.default
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise InvalidParameterError('"%s" must be a number, got %r' % (self.name, value)) from None
        if value != value:
            raise InvalidParameterError('"%s" must not be NaN' % self.name)
        if self.integer:
            if not value.is_integer():
                raise InvalidParameterError('"%s" must be an integer, got %s' % (self.name, value))
            value = int(value)
        if self.min is not None and value < self.min:
            raise InvalidParameterError('"%s" must be >= %s, got %s' % (self.name, self.min, value))
        if self.max is not None and value > self.max:
            raise InvalidParameterError('"%s" must be <= %s, got %s' % (self.name, self.max, value))
        return value

    def toDict(self) -> dict:
        return {
            "name": self.name,
            "default": self.default,
            "min": self.min,
            "max": self.max
        }
