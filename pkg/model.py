# --- START OF FILE chainforge/model.py ---

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from dataclasses_json import config, dataclass_json
from PySide6.QtCore import QObject, Signal

from enums import (CheckStatus, DepthProvenance, LengthProvenance, OutputFormat, ValueKind,
                   VerdictKind)
from errors import InternalInconsistencyError

logger = logging.getLogger(__name__)


def _int_str(value: int | None) -> str | None:
    return None if value is None else str(value)

def _str_int(value: str | int | None) -> int | None:
    return None if value is None else int(value)

def _frac_str(value: Fraction | None) -> str | None:
    return None if value is None else str(value)

def _str_frac(value: str | None) -> Fraction | None:
    return None if value is None else Fraction(value)

# Big integers travel as decimal strings in every JSON payload.
BIG_INT = config(encoder=_int_str, decoder=_str_int)
BIG_FRACTION = config(encoder=_frac_str, decoder=_str_frac)


@dataclass_json
@dataclass(frozen=True)
class ValueOrRange:
    """Exact value, or a closed interval [low, high]; high=None means unbounded."""
    kind: ValueKind
    low: int = field(metadata=BIG_INT)
    high: int | None = field(metadata=BIG_INT)

    def __post_init__(self):
        if self.high is not None and self.low > self.high:
            raise InternalInconsistencyError(f"Empty interval [{self.low}, {self.high}]")
        if self.kind is ValueKind.EXACT and self.low != self.high:
            raise InternalInconsistencyError(f"Exact value with low={self.low} high={self.high}")

    @classmethod
    def exact(cls, value: int) -> "ValueOrRange":
        return cls(ValueKind.EXACT, value, value)

    @classmethod
    def between(cls, low: int, high: int | None = None) -> "ValueOrRange":
        if high is not None and low == high:
            return cls.exact(low)
        return cls(ValueKind.RANGE, low, high)

    @property
    def is_exact(self) -> bool:
        return self.kind is ValueKind.EXACT

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError(f"{self} is not exact")
        return self.low

    def contains(self, v: int) -> bool:
        return self.low <= v and (self.high is None or v <= self.high)

    def intersect(self, other: "ValueOrRange") -> "ValueOrRange":
        low = max(self.low, other.low)
        highs = [h for h in (self.high, other.high) if h is not None]
        high = min(highs) if highs else None
        if high is not None and low > high:
            raise InternalInconsistencyError(f"Disjoint intervals {self} and {other}")
        return ValueOrRange.between(low, high)

    def __add__(self, other: "ValueOrRange | int") -> "ValueOrRange":
        if isinstance(other, int):
            other = ValueOrRange.exact(other)
        high = None if self.high is None or other.high is None else self.high + other.high
        return ValueOrRange.between(self.low + other.low, high)

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.low)
        return f"[{self.low}, {'inf' if self.high is None else self.high}]"


@dataclass_json
@dataclass
class LengthResult:
    value: ValueOrRange
    provenance: LengthProvenance
    anchors: list[str] = field(default_factory=list)


@dataclass_json
@dataclass
class DepthResult:
    value: ValueOrRange
    provenance: DepthProvenance
    anchors: list[str] = field(default_factory=list)


@dataclass_json
@dataclass
class ChainReport:
    """l, depth, cd and cr of one group, with the rules behind them."""
    group: str
    length: ValueOrRange
    depth: ValueOrRange
    cd: ValueOrRange
    cr_low: Fraction = field(metadata=BIG_FRACTION)
    cr_high: Fraction | None = field(default=None, metadata=BIG_FRACTION)
    chief_length: ValueOrRange | None = None
    soluble: bool | None = None
    supersoluble: bool | None = None
    provenance: list[str] = field(default_factory=list)

    @property
    def is_exact(self) -> bool:
        return self.length.is_exact and self.depth.is_exact

    @property
    def cr(self) -> Fraction:
        if not self.is_exact:
            raise ValueError(f"cr of {self.group} is only known as an interval")
        return self.cr_low


@dataclass_json
@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    group: str
    detail: str = ""
    operands: dict[str, str] = field(default_factory=dict)


@dataclass_json
@dataclass
class ClassificationRecord:
    tag: str
    group: str
    witnesses: dict[str, str] = field(default_factory=dict)


@dataclass_json
@dataclass
class PrimeRecord:
    p: int = field(metadata=BIG_INT)
    condition: str = ""
    witnesses: dict[str, str] = field(default_factory=dict)


@dataclass_json
@dataclass
class AppendixRecord:
    """One appendix prime with the divisibility and omega deductions evaluated."""
    p: int = field(metadata=BIG_INT)
    quotient: str = ""              # factorization of (p^2-1)/24
    omega_quotient: int = 0
    omega_minus: int = 0
    omega_plus: int = 0
    gcd_minus: int = 0
    gcd_plus: int = 0
    omega_minus_part: int = 0       # Omega((p-1)/4)
    omega_plus_part: int = 0        # Omega((p+1)/6)
    divisible_by_24: bool = False
    max_omega_ok: bool = False
    split_ok: bool = False


@dataclass_json
@dataclass
class OracleReport:
    group: str
    order: int
    length: int
    depth: int
    cd: int
    chief_length: int
    soluble: bool
    supersoluble: bool
    radical_order: int
    socle_order: int
    composition_factors: list[str] = field(default_factory=list)
    subgroup_count: int = 0


@dataclass_json
@dataclass
class Verdict:
    group: str
    kind: VerdictKind
    agreements: list[str] = field(default_factory=list)
    containments: list[str] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)
    uncovered: list[str] = field(default_factory=list)


@dataclass_json
@dataclass
class OutputRecord:
    """One CLI result: the echoed query, an engine payload and the rules applied."""
    command: str
    query: str
    result: dict[str, Any]
    provenance: list[str] = field(default_factory=list)
    format: OutputFormat = OutputFormat.JSON


class ResultsModel(QObject):
    """
    Holds the records produced during one CLI run.
    Services append to it; the export service renders it.
    """
    records_changed = Signal(int)   # number of records held
    model_reset = Signal()

    def __init__(self, parent=None):
        super().__init__(parent)
        self._records: list[OutputRecord] = []

    @property
    def records(self) -> list[OutputRecord]:
        return list(self._records)

    def add_record(self, record: OutputRecord) -> None:
        self._records.append(record)
        logger.debug("[Model] Added %s record for %s", record.command, record.query)
        self.records_changed.emit(len(self._records))

    def extend(self, records: list[OutputRecord]) -> None:
        if not records:
            return
        self._records.extend(records)
        self.records_changed.emit(len(self._records))

    def reset(self) -> None:
        self._records.clear()
        logger.debug("[Model] Cleared records")
        self.model_reset.emit()

    def __len__(self) -> int:
        return len(self._records)

# --- END OF FILE chainforge/model.py ---
