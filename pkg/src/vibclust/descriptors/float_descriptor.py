import math

class FloatDescriptor:
    """A float descriptor with default None and optional bounds.

    min_exclusive makes the lower bound strict. NaN is always rejected, infinity only when allow_inf is False"""
    def __init__(
        self,
        min_value : float = None,
        max_value : float = None,
        min_exclusive : bool = False,
        allow_inf : bool = True
        ):
        self._min_value = min_value
        self._max_value = max_value
        self._min_exclusive = min_exclusive
        self._allow_inf = allow_inf

    def __set_name__(self, owner, name):
        self._name = name

    def __get__(self, instance, owner):
        if instance is None:
            return self
        return instance.__dict__[self._name]

    def __set__(self, instance, value):
        if value is None:
            instance.__dict__[self._name] = None
            return
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValueError(f'"{self._name}" must be a float') from None
        if math.isnan(value) or (not self._allow_inf and math.isinf(value)):
            raise ValueError(f'"{self._name}" must be a finite float')
        if self._min_value is not None:
            if self._min_exclusive and value <= self._min_value:
                raise ValueError(f'"{self._name}" must be > {self._min_value}, got {value}')
            if not self._min_exclusive and value < self._min_value:
                raise ValueError(f'"{self._name}" must be >= {self._min_value}, got {value}')
        if self._max_value is not None and value > self._max_value:
            raise ValueError(f'"{self._name}" must be <= {self._max_value}, got {value}')
        instance.__dict__[self._name] = value
