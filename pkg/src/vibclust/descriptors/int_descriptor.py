class IntDescriptor:
    """Integer attribute with an optional lower bound. None is stored as None"""
    def __init__(self, min_value : int = None):
        self._min_value = min_value

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
        if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
            raise ValueError(f'"{self._name}" must be an integer')
        try:
            value = int(value)
        except (TypeError, ValueError):
            raise ValueError(f'"{self._name}" must be an integer') from None
        if self._min_value is not None and value < self._min_value:
            raise ValueError(f'"{self._name}" must be >= {self._min_value}, got {value}')
        instance.__dict__[self._name] = value
