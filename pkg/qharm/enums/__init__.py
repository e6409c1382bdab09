from argparse import ArgumentTypeError
from enum import Enum
from typing import Callable, Type


def case_insensitive_enum(enum_class: Type[Enum]) -> Callable[[str], Enum]:
    """
    argparse `type=` converter for an enum flag.

    Accepts the member name in any case, with '-' standing in for '_'
    ('json', 'Silent', 'circle-trapezoid'), or the integer value ('1').

    Raises:
        ArgumentTypeError: Listing the valid names.
    """

    def converter(value: str) -> Enum:
        text = value.strip()
        try:
            if text.isdigit():
                return enum_class(int(text))
            return enum_class[text.replace("-", "_").upper()]
        except (KeyError, ValueError):
            names = ", ".join(e.name.lower() for e in enum_class)
            raise ArgumentTypeError(f"Invalid choice: {value} (choose from {names})")

    return converter


def enum_choices(enum_class: Type[Enum]) -> str:
    """Metavar such as {TEXT[0],JSON[1],CSV[2]}"""
    return "{" + ",".join(f"{e.name}[{e.value}]" for e in enum_class) + "}"
