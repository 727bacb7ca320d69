"""
Built-in benchmark corpus P1..P8 and named bound overrides
"""
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import pandas as pd

from sgprelax.exceptions import SgpRelaxError
from sgprelax.model import Interval, SgpProblem
from sgprelax.parser import parse_problem

logger = logging.getLogger(__name__)


P1_TEXT = """\
problem P1
var x1 in [1, 10]
var x2 in [1, 10]
minimize 6*x1^2 + 4*x2^2 - 2.5*x1*x2
subject to
  c1: -x1*x2 <= -8
"""

P2_TEXT = """\
problem P2
var x1 in [40, 44]
var x2 in [40, 45]
var x3 in [60, 70]
var x4 in [0.1, 1.4]
minimize 168*x1*x2 + 3651.2*x1*x2*x3^(-1) + 40000*x4^(-1)
subject to
  c1: 1.0425*x1*x2^(-1) <= 1
  c2: 0.00035*x1*x2 <= 1
  c3: 1.25*x1^(-1)*x4 + 41.63*x1^(-1) <= 1
"""

P3_TEXT = """\
problem P3
var x1 in [0.1, 10]
var x2 in [0.1, 10]
var x3 in [0.1, 10]
var x4 in [0.1, 10]
var x5 in [0.1, 10]
var x6 in [0.1, 10]
var x7 in [0.1, 10]
var x8 in [0.1, 10]
minimize 0.4*x1^0.67*x7^(-0.67) + 0.4*x2^0.67*x8^(-0.67) + 10 - x1 - x2
subject to
  c1: 0.0588*x5*x7 + 0.1*x1 <= 1
  c2: 0.0588*x6*x8 + 0.1*x1 + 0.1*x2 <= 1
  c3: 4*x3*x5^(-1) + 2*x3^(-0.71)*x5^(-1) + 0.0588*x3^(-1.3)*x7 <= 1
  c4: 4*x4*x6^(-1) + 2*x4^(-0.71)*x6^(-1) + 0.0588*x4^(-1.3)*x8 <= 1
"""

P4_TEXT = """\
problem P4
var x1 in [100, 10000]
var x2 in [1000, 10000]
var x3 in [1000, 10000]
var x4 in [10, 1000]
var x5 in [10, 1000]
var x6 in [10, 1000]
var x7 in [10, 1000]
var x8 in [10, 1000]
minimize x1 + x2 + x3
subject to
  c1: 833.33252*x1^(-1)*x4*x6^(-1) - 833.333*x1^(-1)*x6^(-1) + 100*x6^(-1) <= 1
  c2: 1250*x2^(-1)*x5*x7^(-1) - 1250*x2^(-1)*x4*x7^(-1) + x4*x7^(-1) <= 1
  c3: 1250000*x3^(-1)*x8^(-1) - 2500*x3^(-1)*x5*x8^(-1) + x5*x8^(-1) <= 1
  c4: 0.0025*x4 + 0.0025*x6 <= 1
  c5: -0.0025*x4 + 0.0025*x5 + 0.0025*x7 <= 1
  c6: 0.01*x8 - 0.01*x5 <= 1
"""

P5_TEXT = """\
problem P5
var x1 in [1, 220]
var x2 in [1, 220]
var x3 in [1, 220]
minimize 5*x1 + 50000*x1^(-1) + 46.2*x2 + 72000*x2^(-1) + 144000*x3^(-1)
subject to
  c1: 4*x1^(-1) + 32*x2^(-1) + 120*x3^(-1) <= 1
"""

P6_TEXT = """\
problem P6
var x1 in [78, 102]
var x2 in [33, 45]
var x3 in [27, 45]
var x4 in [27, 45]
var x5 in [27, 45]
minimize 5.3578*x3^2 + 0.8357*x1*x5 + 37.2392*x1
subject to
  c1: 0.00002584*x3*x5 - 0.00006663*x2*x5 - 0.0000734*x1*x4 <= 1
  c2: 0.00085307*x2*x5 + 0.00009395*x1*x4 - 0.00033085*x3*x5 <= 1
  c3: 1330.3294*x2^(-1)*x5^(-1) - 0.42*x1*x5^(-1) - 0.30586*x2^(-1)*x3^2*x5^(-1) <= 1
  c4: 0.00024186*x2*x5 + 0.00010159*x1*x2 + 0.00007379*x3^2 <= 1
  c5: 2275.1327*x3^(-1)*x5^(-1) - 0.2668*x1*x5^(-1) - 0.40584*x4*x5^(-1) <= 1
  c6: 0.00029955*x3*x5 + 0.00007992*x1*x3 - 0.00012157*x3*x4 <= 1
"""

# Reported optimum lies above feasible points of this data; kept verbatim
P7_TEXT = """\
problem P7
var x1 in [70, 150]
var x2 in [1, 30]
var x3 in [0.5, 21]
minimize 0.5*x1*x2^(-1) - x1 - 5*x2^(-1)
subject to
  c1: 0.01*x2*x3^(-1) + 0.01*x2 + 0.0005*x1*x3 <= 1
"""

P8_TEXT = """\
problem P8
var x1 in [0.5, 10]
var x2 in [0.5, 10]
var x3 in [0.5, 10]
minimize x1 + x2 + x3
subject to
  c1: 1 <= x1*x2 + x1*x3
"""


@dataclass(frozen=True)
class CorpusEntry:
    """One built-in instance with its reported optimum"""
    name: str
    problem: SgpProblem
    known_optimum: Optional[float]
    optimal_point: Optional[Tuple[float, ...]] = None
    note: str = ""


_SOURCES = [
    ("P1", P1_TEXT, 58.38488, (2.5558, 3.1302), ""),
    ("P2", P2_TEXT, 468479.9969, None, ""),
    ("P3", P3_TEXT, 3.95116, None, ""),
    ("P4", P4_TEXT, 7049.24803, None, ""),
    ("P5", P5_TEXT, 6217.46549, None, ""),
    ("P6", P6_TEXT, 10122.85643, None, ""),
    ("P7", P7_TEXT, -83.66157, None, "exempt: reported z* above feasible points of the data"),
    ("P8", P8_TEXT, 2.0, (1.0, 0.5, 0.5), ""),
]

# Named overrides for concise-form variables (aux variables included)
BOUND_OVERRIDES: Dict[str, Dict[str, Interval]] = {
    "P1paper": {"x3": Interval(7.5, 750.0)},
}
BOUND_OVERRIDES["P1published"] = BOUND_OVERRIDES["P1paper"]

_CACHE: List[CorpusEntry] = []


def builtin_corpus() -> List[CorpusEntry]:
    """The eight built-in instances, in order P1..P8"""
    if not _CACHE:
        for name, text, z_star, point, note in _SOURCES:
            _CACHE.append(CorpusEntry(name, parse_problem(text), z_star, point, note))
        logger.debug(f"📊 Loaded {len(_CACHE)} built-in instances")
    return list(_CACHE)


def get_entry(name: str) -> CorpusEntry:
    for entry in builtin_corpus():
        if entry.name.lower() == name.lower():
            return entry
    raise SgpRelaxError(f"no built-in instance named {name}")


def load_source(source: str) -> Tuple[SgpProblem, Optional[CorpusEntry]]:
    """Resolve `builtin:<name>` or a file path to a problem"""
    if source.startswith("builtin:"):
        entry = get_entry(source.split(":", 1)[1])
        return entry.problem, entry
    with open(source, encoding="utf-8") as handle:
        return parse_problem(handle.read()), None


def load_bound_overrides(spec: Optional[str]) -> Dict[str, Interval]:
    """Named override set or a CSV file with columns name,lo,hi"""
    if not spec:
        return {}
    if spec in BOUND_OVERRIDES:
        return dict(BOUND_OVERRIDES[spec])
    if not os.path.exists(spec):
        raise SgpRelaxError(f"unknown bound override {spec}")
    frame = pd.read_csv(spec)
    missing = {"name", "lo", "hi"} - set(frame.columns)
    if missing:
        raise SgpRelaxError(f"bound override file {spec} lacks columns {sorted(missing)}")
    return {str(row.name): Interval(float(row.lo), float(row.hi)) for row in frame.itertuples()}
