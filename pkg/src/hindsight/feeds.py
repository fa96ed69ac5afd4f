"""Feed parsing, validation, and serialization.

Two CSV schemas, UTF-8, comma-separated, one mandatory header row, with
optional ``# key = value`` metadata lines above the header:

* event feeds:  ``ts_ns,action,order_id,side,price_ticks,qty``
  actions A (add), X (cancel), R (reduce), E (execute); side/price only on
  A; qty on A, R, E; unused fields are left empty.
* quote feeds:  ``ts_ns,symbol,venue,bid_ticks,bid_size,ask_ticks,ask_size``

Paths ending in ``.gz`` are compressed/decompressed transparently (written
with a zeroed mtime so identical inputs give identical bytes).
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from .errors import FeedFormatError, FeedIntegrityError

EVENT_HEADER = "ts_ns,action,order_id,side,price_ticks,qty"
QUOTE_HEADER = "ts_ns,symbol,venue,bid_ticks,bid_size,ask_ticks,ask_size"
ACTIONS = ("A", "X", "R", "E")
VENUES = ("primary", "composite")
DEFAULT_TICK_SIZE = 0.001

_META_KEYS = ("symbol", "date", "tick_size", "mode")


@dataclass(slots=True, frozen=True)
class MarketEvent:
    """One exchange message: add, cancel, reduce, or execute."""

    ts_ns: int
    action: str
    order_id: int
    side: str | None = None   # "B" or "S", adds only
    price: int | None = None  # ticks, adds only
    qty: int | None = None    # shares, A/R/E


@dataclass(slots=True, frozen=True)
class QuoteRecord:
    """Top-of-book snapshot: inside prices and the shares resting there."""

    ts_ns: int
    symbol: str
    venue: str
    bid: int
    bid_size: int
    ask: int
    ask_size: int


@dataclass(slots=True)
class FeedMeta:
    """Per-feed metadata carried in leading comment lines."""

    symbol: str = "SYN"
    date: str | None = None
    tick_size: float = DEFAULT_TICK_SIZE
    mode: str | None = None   # "match" or "log"; event feeds only
    record_count: int = 0
    crossed_dropped: int = 0


def _open_read(path):
    path = str(path)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8",
                                newline="")
    return open(path, "r", encoding="utf-8", newline="")


def _open_write(path):
    path = str(path)
    if path.endswith(".gz"):
        raw = gzip.GzipFile(path, "wb", mtime=0)
        return io.TextIOWrapper(raw, encoding="utf-8", newline="")
    return open(path, "w", encoding="utf-8", newline="")


def _int_field(raw, name, line_no):
    try:
        return int(raw)
    except ValueError:
        raise FeedFormatError(f"{name} is not an integer: {raw!r}", line_no) from None


def _parse_event_line(parts, line_no):
    if len(parts) != 6:
        raise FeedFormatError(f"expected 6 fields, got {len(parts)}", line_no)
    ts = _int_field(parts[0], "ts_ns", line_no)
    action = parts[1]
    if action not in ACTIONS:
        raise FeedFormatError(f"unknown action {action!r}", line_no)
    order_id = _int_field(parts[2], "order_id", line_no)
    side = price = qty = None
    if action == "A":
        if parts[3] not in ("B", "S"):
            raise FeedFormatError(f"side must be B or S, got {parts[3]!r}", line_no)
        side = parts[3]
        price = _int_field(parts[4], "price_ticks", line_no)
        if price <= 0:
            raise FeedFormatError(f"price_ticks must be positive, got {price}", line_no)
    elif parts[3] or parts[4]:
        raise FeedFormatError(f"action {action} takes no side/price", line_no)
    if action in ("A", "R", "E"):
        qty = _int_field(parts[5], "qty", line_no)
        if qty <= 0:
            raise FeedFormatError(f"qty must be positive, got {qty}", line_no)
    elif parts[5]:
        raise FeedFormatError("action X takes no qty", line_no)
    return MarketEvent(ts, action, order_id, side, price, qty)


def _parse_quote_line(parts, line_no):
    if len(parts) != 7:
        raise FeedFormatError(f"expected 7 fields, got {len(parts)}", line_no)
    ts = _int_field(parts[0], "ts_ns", line_no)
    symbol = parts[1]
    if not symbol:
        raise FeedFormatError("empty symbol", line_no)
    venue = parts[2]
    if venue not in VENUES:
        raise FeedFormatError(f"venue must be one of {VENUES}, got {venue!r}", line_no)
    bid = _int_field(parts[3], "bid_ticks", line_no)
    bid_size = _int_field(parts[4], "bid_size", line_no)
    ask = _int_field(parts[5], "ask_ticks", line_no)
    ask_size = _int_field(parts[6], "ask_size", line_no)
    if bid <= 0 or ask <= 0:
        raise FeedFormatError("prices must be positive ticks", line_no)
    if bid_size <= 0 or ask_size <= 0:
        raise FeedFormatError("sizes must be positive", line_no)
    return QuoteRecord(ts, symbol, venue, bid, bid_size, ask, ask_size)


def _read_preamble(fh, kind, path):
    """Consume metadata comments and the header; returns (meta, line_no)."""
    expected = EVENT_HEADER if kind == "event" else QUOTE_HEADER
    meta = FeedMeta(mode="match" if kind == "event" else None)
    line_no = 0
    for line in fh:
        line_no += 1
        line = line.rstrip("\n")
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                raise FeedFormatError(f"bad metadata comment: {line!r}", line_no)
            key, _, value = body.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "symbol":
                meta.symbol = value
            elif key == "date":
                meta.date = value
            elif key == "tick_size":
                meta.tick_size = float(value)
            elif key == "mode":
                if value not in ("match", "log"):
                    raise FeedFormatError(f"mode must be match or log, got {value!r}",
                                          line_no)
                meta.mode = value
            else:
                raise FeedFormatError(f"unknown metadata key {key!r}", line_no)
            continue
        if line != expected:
            raise FeedFormatError(
                f"{path}: header does not match {kind} schema: {line!r}", line_no)
        return meta, line_no
    raise FeedFormatError(f"{path}: missing header row", line_no)


def parse_feed(path, kind, keep_crossed=False, meta_out=None):
    """Stream records from a feed file.

    Yields MarketEvent (kind="event") or QuoteRecord (kind="quote") in file
    order using constant memory.  Crossed quotes (bid >= ask) are dropped
    and counted unless ``keep_crossed``.  Raises FeedFormatError on a
    malformed line and FeedIntegrityError on a timestamp regression.

    Pass a FeedMeta as ``meta_out`` to receive metadata; counts are final
    only once the stream is exhausted.
    """
    if kind not in ("event", "quote"):
        raise ValueError(f"kind must be 'event' or 'quote', got {kind!r}")
    meta = meta_out if meta_out is not None else FeedMeta()

    def gen():
        with _open_read(path) as fh:
            preamble, line_no = _read_preamble(fh, kind, path)
            meta.symbol = preamble.symbol
            meta.date = preamble.date
            meta.tick_size = preamble.tick_size
            meta.mode = preamble.mode
            meta.record_count = 0
            meta.crossed_dropped = 0
            last_ts = None
            for line in fh:
                line_no += 1
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split(",")
                if kind == "event":
                    rec = _parse_event_line(parts, line_no)
                else:
                    rec = _parse_quote_line(parts, line_no)
                if last_ts is not None and rec.ts_ns < last_ts:
                    raise FeedIntegrityError(
                        f"timestamp regression: {rec.ts_ns} after {last_ts}",
                        line_no)
                last_ts = rec.ts_ns
                if kind == "quote" and rec.bid >= rec.ask and not keep_crossed:
                    meta.crossed_dropped += 1
                    continue
                meta.record_count += 1
                yield rec

    return gen()


def _event_row(ev: MarketEvent) -> str:
    side = ev.side or ""
    price = "" if ev.price is None else str(ev.price)
    qty = "" if ev.qty is None else str(ev.qty)
    return f"{ev.ts_ns},{ev.action},{ev.order_id},{side},{price},{qty}"


def _quote_row(q: QuoteRecord) -> str:
    return (f"{q.ts_ns},{q.symbol},{q.venue},{q.bid},{q.bid_size},"
            f"{q.ask},{q.ask_size}")


def write_feed(records, path, kind, meta: FeedMeta | None = None) -> FeedMeta:
    """Serialize records to a feed file; returns the final metadata.

    Records must satisfy their invariants (quotes with bid >= ask or a
    nonpositive size are rejected).  parse_feed(write_feed(r)) round-trips
    bit-exactly.
    """
    if kind not in ("event", "quote"):
        raise ValueError(f"kind must be 'event' or 'quote', got {kind!r}")
    meta = replace(meta) if meta is not None else FeedMeta(
        mode="match" if kind == "event" else None)
    header = EVENT_HEADER if kind == "event" else QUOTE_HEADER
    count = 0
    with _open_write(path) as fh:
        if meta.symbol != "SYN":
            fh.write(f"# symbol = {meta.symbol}\n")
        if meta.date is not None:
            fh.write(f"# date = {meta.date}\n")
        if meta.tick_size != DEFAULT_TICK_SIZE:
            fh.write(f"# tick_size = {meta.tick_size!r}\n")
        if kind == "event" and meta.mode is not None and meta.mode != "match":
            fh.write(f"# mode = {meta.mode}\n")
        fh.write(header + "\n")
        for rec in records:
            if kind == "event":
                if not isinstance(rec, MarketEvent):
                    raise TypeError(f"expected MarketEvent, got {type(rec).__name__}")
                fh.write(_event_row(rec) + "\n")
            else:
                if not isinstance(rec, QuoteRecord):
                    raise TypeError(f"expected QuoteRecord, got {type(rec).__name__}")
                if rec.bid >= rec.ask:
                    raise ValueError(
                        f"crossed quote rejected: bid {rec.bid} >= ask {rec.ask}")
                if rec.bid_size <= 0 or rec.ask_size <= 0:
                    raise ValueError("quote sizes must be positive")
                fh.write(_quote_row(rec) + "\n")
            count += 1
    meta.record_count = count
    meta.crossed_dropped = 0
    return meta


@dataclass(slots=True)
class Violation:
    line_no: int
    code: str
    message: str


@dataclass(slots=True)
class ValidationReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)
    records: int = 0
    crossed: int = 0

    def count(self, code: str) -> int:
        return sum(1 for v in self.violations if v.code == code)


def validate_feed(path, kind) -> ValidationReport:
    """Check a feed without mutating anything; violations are data.

    Event feeds: monotone timestamps, fresh ids on A, live references on
    X/R/E, no over-reduction, positive quantities.  Quote feeds: monotone
    timestamps, positive sizes, uncrossed quotes (crossed ones are counted
    and reported, matching the parser's default drop).
    """
    report = ValidationReport(ok=True)
    live: dict[int, int] = {}
    last_ts = None
    try:
        fh = _open_read(path)
    except OSError as exc:
        report.ok = False
        report.violations.append(Violation(0, "unreadable", str(exc)))
        return report
    with fh:
        try:
            _, line_no = _read_preamble(fh, kind, path)
        except FeedFormatError as exc:
            report.ok = False
            report.violations.append(Violation(exc.line_no or 0, "header", str(exc)))
            return report
        for line in fh:
            line_no += 1
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            try:
                if kind == "event":
                    rec = _parse_event_line(parts, line_no)
                else:
                    rec = _parse_quote_line(parts, line_no)
            except FeedFormatError as exc:
                report.violations.append(Violation(line_no, "malformed", str(exc)))
                continue
            report.records += 1
            if last_ts is not None and rec.ts_ns < last_ts:
                report.violations.append(Violation(
                    line_no, "ts_regression",
                    f"timestamp {rec.ts_ns} after {last_ts}"))
            last_ts = rec.ts_ns
            if kind == "event":
                _check_event_refs(rec, live, line_no, report)
            elif rec.bid >= rec.ask:
                report.crossed += 1
                report.violations.append(Violation(
                    line_no, "crossed_quote",
                    f"bid {rec.bid} >= ask {rec.ask}"))
    report.ok = not report.violations
    return report


def _check_event_refs(ev, live, line_no, report):
    if ev.action == "A":
        if ev.order_id in live:
            report.violations.append(Violation(
                line_no, "duplicate_id", f"order id {ev.order_id} already live"))
        else:
            live[ev.order_id] = ev.qty
    else:
        remaining = live.get(ev.order_id)
        if remaining is None:
            report.violations.append(Violation(
                line_no, "dangling_reference",
                f"{ev.action} references unknown order id {ev.order_id}"))
            return
        if ev.action == "X":
            del live[ev.order_id]
        else:
            if ev.qty > remaining:
                report.violations.append(Violation(
                    line_no, "over_reduction",
                    f"{ev.action} qty {ev.qty} exceeds remaining {remaining}"))
                del live[ev.order_id]
            elif ev.qty == remaining:
                del live[ev.order_id]
            else:
                live[ev.order_id] = remaining - ev.qty


def read_events(path, meta_out=None) -> Iterator[MarketEvent]:
    return parse_feed(path, "event", meta_out=meta_out)


def read_quotes(path, keep_crossed=False, meta_out=None) -> Iterator[QuoteRecord]:
    return parse_feed(path, "quote", keep_crossed=keep_crossed, meta_out=meta_out)
