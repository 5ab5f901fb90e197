"""Systems with families of invariant Kronecker tori: exact construction,
classification, simulation and claim verification."""

from ._core import (
    Expr,
    KronError,
    System,
    __version__,
    diophantine,
    exceptional_period,
    frequencies,
    integrate,
    plan_ham,
    plan_rev,
    recurrence_time,
    uniqueness_scan,
    verify_ham,
    verify_rev,
)

__all__ = [
    "Expr",
    "KronError",
    "System",
    "__version__",
    "diophantine",
    "exceptional_period",
    "frequencies",
    "integrate",
    "plan_ham",
    "plan_rev",
    "recurrence_time",
    "uniqueness_scan",
    "verify_ham",
    "verify_rev",
]
