"""Dataset readers and writers: the native `@ITEM` format and SPMF HUIM import.

Native format (UTF-8, LF):

    # comment
    @ITEM <id> <external-utility> [label]
    <item>:<qty> <item>:<qty> ...      one transaction per line, tids 1..n

An empty line after the header is an empty transaction.
"""

import logging
import os
from decimal import Decimal, InvalidOperation
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import DatasetParseError, SpmfImportError
from .models import QuantitativeDatabase, UtilityTable

logger = logging.getLogger("frequtil")

HEADER = "@ITEM"


def _decoded_lines(path: str, error=DatasetParseError) -> Iterator[Tuple[int, str]]:
    """(line_no, text) per line; undecodable bytes raise `error` carrying the line number."""
    with open(path, "rb") as f:
        data = f.read()
    for line_no, raw in enumerate(data.splitlines(), start=1):
        try:
            yield line_no, raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise error(f"invalid UTF-8 at byte {e.start}: {raw[e.start:e.end]!r}", path, line_no) from None


def _read_native(path: str) -> Tuple[UtilityTable, List[List[Tuple[int, int]]]]:
    amounts: Dict[int, Decimal] = {}
    labels: Dict[int, str] = {}
    rows: List[List[Tuple[int, int]]] = []

    for line_no, raw in _decoded_lines(path):
        line = raw.strip()
        if line.startswith("#"):
            continue

        if line.split(None, 1)[:1] == [HEADER]:
            if rows:
                raise DatasetParseError("@ITEM declaration after the first transaction", path, line_no)
            parts = line.split(None, 3)
            if len(parts) < 3:
                raise DatasetParseError("expected '@ITEM <id> <external-utility> [label]'", path, line_no)
            try:
                item = int(parts[1])
                amount = Decimal(parts[2])
            except (ValueError, InvalidOperation):
                raise DatasetParseError(f"malformed @ITEM line: {line!r}", path, line_no) from None
            if item < 0:
                raise DatasetParseError(f"item id must be non-negative, got {item}", path, line_no)
            if item in amounts:
                raise DatasetParseError(f"duplicate @ITEM {item}", path, line_no)
            if not amount.is_finite() or amount <= 0:
                raise DatasetParseError(f"external utility of item {item} must be positive", path, line_no)
            amounts[item] = amount
            if len(parts) == 4:
                labels[item] = parts[3].strip()
            continue

        row: List[Tuple[int, int]] = []
        seen = set()
        for token in line.split():
            item_s, sep, qty_s = token.partition(":")
            try:
                item, qty = int(item_s), int(qty_s)
            except ValueError:
                raise DatasetParseError(f"malformed entry {token!r}, expected <item>:<qty>", path, line_no) from None
            if not sep:
                raise DatasetParseError(f"malformed entry {token!r}, expected <item>:<qty>", path, line_no)
            if item not in amounts:
                raise DatasetParseError(f"undeclared item {item}", path, line_no)
            if qty < 1:
                raise DatasetParseError(f"quantity of item {item} must be >= 1, got {qty}", path, line_no)
            if item in seen:
                raise DatasetParseError(f"duplicate item {item} in transaction", path, line_no)
            seen.add(item)
            row.append((item, qty))
        rows.append(row)

    return UtilityTable.from_amounts(amounts, labels), rows


def parse_native(path: str) -> QuantitativeDatabase:
    table, rows = _read_native(path)
    db = QuantitativeDatabase.from_rows(rows, table)
    logger.debug(f"Parsed {path}: {len(db)} transactions, {len(table)} declared items")
    return db


def parse_utility_table(path: str) -> UtilityTable:
    """Read just the `@ITEM` header of a native file."""
    table, _ = _read_native(path)
    return table


def write_native(db: QuantitativeDatabase, path: str):
    table = db.utilities
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for item in table.items():
            line = f"{HEADER} {item} {table.amount(table[item]):f}"
            if item in table.labels:
                line += f" {table.labels[item]}"
            f.write(line + "\n")
        for t in db:
            f.write(" ".join(f"{item}:{qty}" for item, qty in t.entries) + "\n")


def _spmf_units(text: str, table: UtilityTable, path: str, line_no: int) -> int:
    try:
        units = Decimal(text.strip()) * table.scale
    except InvalidOperation:
        raise SpmfImportError(f"malformed utility {text!r}", path, line_no) from None
    if not units.is_finite() or units != units.to_integral_value():
        raise SpmfImportError(f"utility {text!r} is finer than the table's money unit", path, line_no)
    return int(units)


def import_spmf_huim(path: str, table: UtilityTable) -> QuantitativeDatabase:
    """Recover quantities from an SPMF HUIM file (`items:TU:utilities`) as q = u / v."""
    rows: List[List[Tuple[int, int]]] = []

    for line_no, raw in _decoded_lines(path, SpmfImportError):
        line = raw.strip()
        if not line or line[0] in "#%@":
            continue

        parts = line.split(":")
        if len(parts) != 3:
            raise SpmfImportError("expected '<items>:<TU>:<utilities>'", path, line_no)
        items = parts[0].split()
        utils = parts[2].split()
        if len(items) != len(utils):
            raise SpmfImportError(
                f"{len(items)} items but {len(utils)} utilities", path, line_no
            )
        tu = _spmf_units(parts[1], table, path, line_no)

        row: List[Tuple[int, int]] = []
        seen = set()
        total = 0
        for item_s, util_s in zip(items, utils):
            try:
                item = int(item_s)
            except ValueError:
                raise SpmfImportError(f"malformed item {item_s!r}", path, line_no) from None
            if item in seen:
                raise SpmfImportError(f"duplicate item {item} in transaction", path, line_no)
            if item not in table:
                raise SpmfImportError(f"item {item} missing from the utility table", path, line_no)
            seen.add(item)
            units = _spmf_units(util_s, table, path, line_no)
            v = table[item]
            if units <= 0 or units % v:
                raise SpmfImportError(
                    f"utility {util_s} of item {item} is not a positive multiple of "
                    f"its external utility {table.amount(v)}",
                    path, line_no,
                )
            row.append((item, units // v))
            total += units

        if total != tu:
            raise SpmfImportError(
                f"TU field {parts[1].strip()} does not match the sum of utilities "
                f"{table.amount(total)}",
                path, line_no,
            )
        rows.append(row)

    db = QuantitativeDatabase.from_rows(rows, table)
    logger.debug(f"Imported SPMF {path}: {len(db)} transactions")
    return db


def load_dataset(path: str, spmf_utilities: Optional[str] = None) -> QuantitativeDatabase:
    if spmf_utilities:
        return import_spmf_huim(path, parse_utility_table(spmf_utilities))
    return parse_native(path)
