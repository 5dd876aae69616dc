import json
import math

from services.errors import DataError


def to_json(obj: dict | list) -> str:
    """
    Converts a dictionary to a JSON string with indentation.
    Args:
        obj (dict | list): The object to convert to JSON.
    Returns:
        str: The JSON string representation of the object.
    """
    return json.dumps(obj, indent=4)


def format_real(value: float) -> str:
    """Certification margins are printed with 17 significant digits."""
    return format(value, ".17g")


def real_field(value: float) -> float | str:
    """
    JSON-safe real: 17 significant digits when finite, its name otherwise.
    """
    if not math.isfinite(value):
        return str(value)
    return float(format_real(value))


def to_float(*values: str) -> list[float]:
    """
    Converts strings to floats, accepting a decimal comma.
    Args:
        values (str): A variable number of string values to be converted to floats.
    Returns:
        list[float]: The converted values.
    Raises:
        DataError: If a value is not a number.
    """
    float_values = []
    for value in values:
        try:
            float_values.append(float(value.strip().replace(",", ".")))
        except ValueError:
            raise DataError(f"'{value}' is not a number")
    return float_values


def parse_vector(text: str, size: int = 3) -> list[float]:
    """
    Parses ``"vx,vy,vz"`` (or ``;``-separated, for decimal commas).
    Raises:
        DataError: If the text does not hold ``size`` numbers.
    """
    separator = ";" if ";" in text else ","
    parts = [p for p in text.split(separator) if p.strip()]
    if len(parts) != size:
        raise DataError(f"Expected {size} components in '{text}', got {len(parts)}")
    return to_float(*parts)


def keyed(mapping: dict) -> dict[str, int]:
    """JSON objects need string keys; degrees are sorted numerically first."""
    return {str(key): value for key, value in sorted(mapping.items())}
