from typing import Sequence

class StringDescriptor:
    """A string descriptor with default None. If choices is set, the value must be one of them"""
    def __init__(self, choices : Sequence[str] = None):
        self._choices = tuple(choices) if choices is not None else None

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
        value = str(value)
        if self._choices is not None and value not in self._choices:
            raise ValueError(f'"{self._name}" must be one of {", ".join(self._choices)}, got {value}')
        instance.__dict__[self._name] = value
