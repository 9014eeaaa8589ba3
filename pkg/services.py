# --- START OF FILE chainforge/services.py ---

import json
import logging
import multiprocessing
import sys
import time
from fractions import Fraction
from typing import Any, Iterable

import pandas as pd
from PySide6.QtCore import QObject, Signal

import catalog
import chains
import depth
import length
import oracle
import primes
from arithmetic import distinct_prime_factors
from catalog import GroupId
from enums import ClassifyTag, Family, OutputFormat
from errors import ChainforgeError, NotCentralExtensionError, NotCoveredError, UnsupportedFamilyError
from lattice import SubgroupLattice, export_lattice
from model import ClassificationRecord, OracleReport, OutputRecord, PrimeRecord, Verdict

logger = logging.getLogger(__name__)


# --- Classification ---

def _central_candidates(t: GroupId) -> list[GroupId]:
    """Central extensions p.T worth testing for the depth-4 quasisimple list."""
    if t.family is Family.LINEAR and t.n > 2:
        return [catalog.central(t.n, t)]
    if t.family is Family.ALTERNATING or (t.family is Family.LINEAR and t.n == 2 and (t.q % 2 or t.q == 4)):
        return [catalog.central(2, t)]
    if t in (catalog.suzuki(8), catalog.sporadic("B")):
        return [catalog.central(2, t)]
    return []


def classify_group(tag: ClassifyTag, g: GroupId, l_filter: int | None = None) -> list[ClassificationRecord]:
    """Records for the members of the `tag` classification found at the simple group g."""
    name = catalog.render(g)
    members: list[tuple[str, dict[str, str]]] = []
    if tag is ClassifyTag.DEPTH3:
        if depth.depth3_simple(g):
            members.append((name, {}))
    elif tag is ClassifyTag.DEPTH4_QUASISIMPLE:
        for cover in _central_candidates(g):
            try:
                if depth.quasisimple_depth4(cover):
                    members.append((catalog.render(cover), {}))
            except NotCentralExtensionError:
                continue
    elif tag is ClassifyTag.TABLE3:
        outer = catalog.outer_order(g)
        for p in sorted(distinct_prime_factors(outer)) if outer > 1 else ():
            if depth.table3_membership(g, p):
                members.append((catalog.render(catalog.extension(g, p)), {"extension": str(p)}))
    elif tag is ClassifyTag.TABLE4:
        maximals = depth.table4_membership(g)
        if maximals:
            members.append((name, {"soluble maximal": ", ".join(maximals)}))
    elif tag is ClassifyTag.LENGTH_AT_MOST_9:
        l = length.table5_length(g)
        if l is not None and (l_filter is None or l == l_filter):
            members.append((name, {"l": str(l)}))
    elif tag is ClassifyTag.CD1:
        if chains.cd1_simple(g):
            members.append((name, {}))
    elif tag is ClassifyTag.CD2:
        if chains.cd2_simple(g):
            members.append((name, {}))
    elif tag is ClassifyTag.CR_EQUALITY:
        if chains.cr5over4_equality(g):
            members.append((name, {}))
    records = []
    for member, extra in members:
        witnesses = depth.depth_witnesses(g)
        witnesses.update(extra)
        records.append(ClassificationRecord(tag.value, member, witnesses))
    return records


def _classify_worker(args: tuple[ClassifyTag, GroupId, int | None]) -> tuple[str, list[ClassificationRecord], str | None]:
    """Worker for parallel classification scans (must stay top-level for pickling)."""
    tag, g, l_filter = args
    try:
        return catalog.render(g), classify_group(tag, g, l_filter), None
    except (NotCoveredError, UnsupportedFamilyError) as e:
        return catalog.render(g), [], str(e)


class ClassificationService(QObject):
    """Runs one classification tag over the catalog enumeration."""
    scan_started = Signal(int)
    scan_progress = Signal(int, str)
    scan_finished = Signal(bool, int)
    scan_failed = Signal(str)

    def scan(self, tag: ClassifyTag, q_max: int | None = None, max_order: int | None = None,
             families: Iterable[str] | None = None, l_filter: int | None = None,
             jobs: int = 1) -> list[ClassificationRecord]:
        try:
            groups = list(catalog.iter_simple_groups(q_max=q_max, max_order=max_order, families=families))
        except (ValueError, ChainforgeError) as e:
            logger.info("[ClassificationService] Cannot enumerate groups: %s", e)
            self.scan_failed.emit(str(e))
            raise
        self.scan_started.emit(len(groups))
        logger.info("[ClassificationService] %s over %d groups, %d job(s)", tag.value, len(groups), jobs)
        start_time = time.time()
        tasks = [(tag, g, l_filter) for g in groups]
        records: list[ClassificationRecord] = []
        skipped = 0
        try:
            if jobs > 1 and len(tasks) > 1:
                chunksize = max(1, len(tasks) // (jobs * 4))
                with multiprocessing.Pool(processes=jobs) as pool:
                    results = pool.imap(_classify_worker, tasks, chunksize=chunksize)
                    skipped = self._collect(results, records)
            else:
                skipped = self._collect(map(_classify_worker, tasks), records)
        except ChainforgeError as e:
            logger.info("[ClassificationService] Scan stopped: %s", e)
            self.scan_failed.emit(str(e))
            raise
        except Exception as e:
            logger.exception("[ClassificationService] Scan failed")
            self.scan_failed.emit(f"Classification scan failed: {e}")
            raise
        logger.info("[ClassificationService] %d members, %d groups skipped, %.2fs", len(records), skipped,
                    time.time() - start_time)
        self.scan_finished.emit(True, len(records))
        return records

    def _collect(self, results, records: list[ClassificationRecord]) -> int:
        skipped = 0
        for done, (name, found, error) in enumerate(results, start=1):
            if error is not None:
                skipped += 1
                logger.info("[ClassificationService] Skipped %s: %s", name, error)
            records.extend(found)
            self.scan_progress.emit(done, name)
        return skipped


# --- Prime searches ---

class PrimeSearchService(QObject):
    """Sharded prime-family searches with progress per block."""
    search_started = Signal(int)
    search_progress = Signal(int, int)      # blocks done, hits so far
    search_finished = Signal(bool, int)
    search_failed = Signal(str)

    def search(self, name: str, limit: int, jobs: int = 1,
               block_size: int = primes.DEFAULT_BLOCK_SIZE) -> list[Any]:
        """PrimeRecords for `name`, or AppendixRecords for the appendix family."""
        try:
            cond = primes.get_condition(name)
            total = len(primes.blocks(limit, block_size))
        except (ValueError, KeyError, ChainforgeError) as e:
            logger.info("[PrimeSearchService] %s", e)
            self.search_failed.emit(str(e))
            raise
        self.search_started.emit(total)
        found: list[int] = []
        try:
            for done, (_, hits) in enumerate(primes.iter_search(cond, limit, jobs, block_size), start=1):
                found.extend(hits)
                self.search_progress.emit(done, len(found))
                logger.debug("[PrimeSearchService] block %d/%d done", done, total)
        except Exception as e:
            logger.exception("[PrimeSearchService] Search failed")
            self.search_failed.emit(f"Prime search failed: {e}")
            raise
        if name == "appendix":
            records = [primes.appendix_record(p) for p in found]
        else:
            records = [PrimeRecord(p, cond.name, cond.witnesses(p)) for p in found]
        self.search_finished.emit(True, len(records))
        return records


# --- Oracle ---

class OracleService(QObject):
    """Builds a permutation group, its subgroup lattice and the engine verdict."""
    lattice_started = Signal(str)
    lattice_finished = Signal(bool, int)
    oracle_failed = Signal(str)

    def __init__(self, parent=None, order_cap: int = oracle.ORDER_CAP, join_budget: int = oracle.JOIN_BUDGET):
        super().__init__(parent)
        self.order_cap = order_cap
        self.join_budget = join_budget
        self.last_lattice: SubgroupLattice | None = None

    def run(self, g: GroupId, verify: bool = True) -> tuple[OracleReport, Verdict | None]:
        name = catalog.render(g)
        self.lattice_started.emit(name)
        try:
            _, lattice, report = oracle.analyse(g, self.order_cap, self.join_budget)
            verdict = oracle.verify_against_engines(g, facts=report) if verify else None
        except ChainforgeError as e:
            logger.info("[OracleService] %s: %s", name, e)
            self.oracle_failed.emit(str(e))
            self.lattice_finished.emit(False, 0)
            raise
        except Exception as e:
            logger.exception("[OracleService] Unexpected failure on %s", name)
            self.oracle_failed.emit(f"Oracle failed on {name}: {e}")
            self.lattice_finished.emit(False, 0)
            raise
        self.last_lattice = lattice
        self.lattice_finished.emit(True, len(lattice))
        return report, verdict

    def export_lattice(self, file_path: str) -> str:
        if self.last_lattice is None:
            msg = "No lattice computed yet"
            self.oracle_failed.emit(msg)
            raise ValueError(msg)
        try:
            return export_lattice(self.last_lattice, file_path)
        except OSError as e:
            logger.info("[OracleService] Lattice export failed: %s", e)
            self.oracle_failed.emit(f"Lattice export failed: {e}")
            raise


# --- Export ---

def _decimal_strings(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {k: _decimal_strings(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_decimal_strings(v) for v in value]
    return value


def record_payload(record: OutputRecord) -> dict[str, Any]:
    payload = record.to_dict(encode_json=True)
    payload["result"] = _decimal_strings(payload["result"])
    return payload


class ExportService(QObject):
    """Renders OutputRecords as JSON, CSV or text, to stdout or a file."""
    export_complete = Signal(str)
    export_failed = Signal(str)

    def render(self, records: list[OutputRecord], fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            payloads = [record_payload(r) for r in records]
            return json.dumps(payloads[0] if len(payloads) == 1 else payloads, indent=2) + "\n"
        if fmt is OutputFormat.CSV:
            return self._to_frame(records).to_csv(index=False)
        return "\n\n".join(self._to_text(r) for r in records) + "\n"

    def _to_frame(self, records: list[OutputRecord]) -> pd.DataFrame:
        rows = []
        for record in records:
            result = _decimal_strings(record.result)
            for row in result.get("rows") or [result]:
                rows.append({"command": record.command, "query": record.query, **row})
        return pd.json_normalize(rows)

    @staticmethod
    def _to_text(record: OutputRecord) -> str:
        lines = [f"{record.command} {record.query}"]
        result = _decimal_strings(record.result)
        for key, value in result.items():
            if key == "rows":
                lines.extend(f"  {json.dumps(row, ensure_ascii=False)}" for row in value)
            else:
                lines.append(f"  {key}: {value}")
        if record.provenance:
            lines.append("  why:")
            lines.extend(f"    - {anchor}" for anchor in record.provenance)
        return "\n".join(lines)

    def write(self, records: list[OutputRecord], fmt: OutputFormat, file_path: str | None = None) -> str:
        text = self.render(records, fmt)
        if file_path is None:
            sys.stdout.write(text)
            self.export_complete.emit("stdout")
            return "stdout"
        try:
            with open(file_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            logger.info("[ExportService] Export to %s failed: %s", file_path, e)
            self.export_failed.emit(f"Export failed: {e}")
            raise
        logger.info("[ExportService] Wrote %d record(s) to %s", len(records), file_path)
        self.export_complete.emit(file_path)
        return file_path

# --- END OF FILE chainforge/services.py ---
