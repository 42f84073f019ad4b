"""Shared tolerances and output formatting."""

MERGE_TOL = 1e-9
"""Support points (and coupling atoms, componentwise) closer than this are one atom."""

CMP_TOL = 1e-12
"""Slack for comparisons of derived quantities (CDF levels, quantile lookups)."""

ORDER_TOL = 1e-9
"""Slack for stop-loss / TVaR / risk-measure inequalities."""


def sig12(value: float) -> float:
    """Round to 12 significant digits so that printed output is stable."""
    if value == 0:
        return 0.0
    return float(format(value, ".12g"))
