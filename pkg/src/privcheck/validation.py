"""Input validation for the estimator interface."""

import numpy as np

from .model import FACTORS


def _coerce(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    if isinstance(value, str):
        token = value.strip()
        for member in enum_cls:
            if token.lower() in (member.value, member.name.lower()):
                return member
    raise ValueError(
        f"{value!r} is not a valid {enum_cls.__name__} "
        f"(expected one of {', '.join(m.value for m in enum_cls)})"
    )


def check_triples(X) -> list:
    """Validate an (n_samples, 3) array of factor values.

    Columns are information type, trust source and recipient role; cells may
    be enum members, canonical tokens (``"health"``, ``"self"``) or member
    names (``"SELF_SEARCH"``).
    """
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an array of shape (n_samples, 3), got {arr.shape}")
    return [tuple(_coerce(cls, cell) for cls, cell in zip(FACTORS, row)) for row in arr]


def check_decisions(y, n_samples: int) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 1 or arr.shape[0] != n_samples:
        raise ValueError(f"y must be 1-d with {n_samples} entries, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(int)
    values = set(arr.tolist())
    if not values <= {0, 1}:
        raise ValueError(f"decisions must be 0/1 or boolean, got {sorted(values, key=str)}")
    return arr.astype(int)
