"""Ergodicity checks for stochastic reaction networks.

The heavy lifting lives in the compiled ``_ergocheck`` extension; this
module re-exports it and adds a dictionary view of reports.
"""

import json

from ._ergocheck import (
    DimensionMismatch,
    ErgocheckError,
    InputError,
    Network,
    OverlappingConservation,
    ParseError,
    Report,
    StateSpaceTooLarge,
    UnsupportedReactionOrder,
    WitnessRejected,
    __version__,
    analyze,
    analyze_text,
    conservation_relations,
    hermite_normal_form,
    parse_network,
    simulate,
    solve_lfp,
    stationary_distribution,
    verify,
)


def report_dict(report):
    """The JSON report as nested Python objects."""
    return json.loads(report.to_json())


__all__ = [
    "DimensionMismatch",
    "ErgocheckError",
    "InputError",
    "Network",
    "OverlappingConservation",
    "ParseError",
    "Report",
    "StateSpaceTooLarge",
    "UnsupportedReactionOrder",
    "WitnessRejected",
    "__version__",
    "analyze",
    "analyze_text",
    "conservation_relations",
    "hermite_normal_form",
    "parse_network",
    "report_dict",
    "simulate",
    "solve_lfp",
    "stationary_distribution",
    "verify",
]
