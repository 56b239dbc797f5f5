from typing import Callable

class ListDescriptor:
    """List descriptor with default None. Items are coerced with item_type when given"""
    def __init__(self, item_type : Callable = None, min_length : int = 0):
        self._item_type = item_type
        self._min_length = min_length

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
        if isinstance(value, (str, bytes, dict)):
            raise ValueError(f'"{self._name}" must be a list')
        try:
            items = list(value)
            if self._item_type is not None:
                items = [self._item_type(v) for v in items]
        except (TypeError, ValueError):
            raise ValueError(f'"{self._name}" must be a list') from None
        if len(items) < self._min_length:
            raise ValueError(f'"{self._name}" must have at least {self._min_length} item(s)')
        instance.__dict__[self._name] = items
