"""Pure-Python order-book kernel.

Reference implementation of the kernel contract shared with the compiled
backend (``hindsight._core``): a two-sided price-time-priority book over
integer tick prices, plus the greedy entry/exit share-pairing used to find
the most profitable round trip between two book states.

All prices are integer tick counts and all cash amounts are integer
"tick-cash" (shares times price ticks), so every result is exact.

Kernel errors are raised as ``ValueError``; the public layer in
``hindsight.book`` translates them into package exception types.
"""

from bisect import bisect_left, insort
from collections import deque

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


class _Level:
    __slots__ = ("total", "count", "fifo")

    def __init__(self):
        self.total = 0
        self.count = 0
        self.fifo = deque()


class Book:
    """Two-sided limit order book keyed by integer tick prices.

    ``match_mode=True``: an incoming add that crosses the opposing best is
    matched immediately (best price first, FIFO within a level) and only
    the remainder rests.  ``match_mode=False`` ("log" mode): adds rest
    verbatim and executions arrive as explicit events; a crossing add is
    rejected as corrupt input.
    """

    __slots__ = ("match_mode", "_buy_levels", "_sell_levels", "_buy_prices",
                 "_sell_prices", "_live")

    def __init__(self, match_mode=True):
        self.match_mode = match_mode
        self._buy_levels = {}
        self._sell_levels = {}
        self._buy_prices = []   # ascending; best bid is the last entry
        self._sell_prices = []  # ascending; best ask is the first entry
        self._live = {}         # order_id -> [is_buy, price, qty]

    # -- mutation ---------------------------------------------------------

    def add(self, order_id, is_buy, price, qty):
        """Apply an add; returns the fills it produced as (id, price, qty)."""
        if order_id in self._live:
            raise ValueError(f"duplicate live order id {order_id}")
        if price <= 0:
            raise ValueError(f"order {order_id}: price must be positive ticks")
        if qty <= 0:
            raise ValueError(f"order {order_id}: qty must be positive")
        fills = []
        remaining = qty
        if self.match_mode:
            remaining = self._match(is_buy, price, qty, fills)
        elif self._crosses(is_buy, price):
            raise ValueError(
                f"order {order_id}: add at {price} crosses the book in log mode"
            )
        if remaining > 0:
            levels = self._buy_levels if is_buy else self._sell_levels
            level = levels.get(price)
            if level is None:
                level = _Level()
                levels[price] = level
                insort(self._buy_prices if is_buy else self._sell_prices, price)
            level.fifo.append(order_id)
            level.total += remaining
            level.count += 1
            self._live[order_id] = [is_buy, price, remaining]
        return fills

    def _crosses(self, is_buy, price):
        if is_buy:
            return bool(self._sell_prices) and price >= self._sell_prices[0]
        return bool(self._buy_prices) and price <= self._buy_prices[-1]

    def _match(self, is_buy, price, qty, fills):
        remaining = qty
        opp_levels = self._sell_levels if is_buy else self._buy_levels
        opp_prices = self._sell_prices if is_buy else self._buy_prices
        while remaining > 0 and opp_prices:
            lvl_price = opp_prices[0] if is_buy else opp_prices[-1]
            if (price < lvl_price) if is_buy else (price > lvl_price):
                break
            level = opp_levels[lvl_price]
            fifo = level.fifo
            while remaining > 0 and fifo:
                resting_id = fifo[0]
                info = self._live[resting_id]
                take = min(remaining, info[2])
                fills.append((resting_id, lvl_price, take))
                remaining -= take
                info[2] -= take
                level.total -= take
                if info[2] == 0:
                    fifo.popleft()
                    level.count -= 1
                    del self._live[resting_id]
            if level.total == 0:
                del opp_levels[lvl_price]
                opp_prices.pop(0 if is_buy else -1)
        return remaining

    def _remove_shares(self, order_id, amount, verb):
        info = self._live.get(order_id)
        if info is None:
            raise ValueError(f"{verb} references unknown order id {order_id}")
        if amount <= 0:
            raise ValueError(f"{verb} of order {order_id}: qty must be positive")
        if amount > info[2]:
            raise ValueError(
                f"{verb} of order {order_id}: qty {amount} exceeds remaining {info[2]}"
            )
        is_buy, price = info[0], info[1]
        levels = self._buy_levels if is_buy else self._sell_levels
        level = levels[price]
        level.total -= amount
        if amount == info[2]:
            level.fifo.remove(order_id)
            level.count -= 1
            del self._live[order_id]
        else:
            info[2] -= amount
        if level.total == 0:
            del levels[price]
            prices = self._buy_prices if is_buy else self._sell_prices
            prices.pop(bisect_left(prices, price))

    def cancel(self, order_id):
        info = self._live.get(order_id)
        if info is None:
            raise ValueError(f"cancel references unknown order id {order_id}")
        self._remove_shares(order_id, info[2], "cancel")

    def reduce(self, order_id, qty):
        self._remove_shares(order_id, qty, "reduce")

    def execute(self, order_id, qty):
        self._remove_shares(order_id, qty, "execute")

    # -- queries ----------------------------------------------------------

    def inside(self):
        """(bid, bid_depth, bid_count, ask, ask_depth, ask_count); absent
        sides are (None, 0, 0)."""
        if self._buy_prices:
            bid = self._buy_prices[-1]
            lvl = self._buy_levels[bid]
            b = (bid, lvl.total, lvl.count)
        else:
            b = (None, 0, 0)
        if self._sell_prices:
            ask = self._sell_prices[0]
            lvl = self._sell_levels[ask]
            a = (ask, lvl.total, lvl.count)
        else:
            a = (None, 0, 0)
        return b + a

    def depth(self, side_is_buy):
        levels = self._buy_levels if side_is_buy else self._sell_levels
        return sum(lvl.total for lvl in levels.values())

    def ladder(self, side_is_buy, cap=-1):
        """(price, level_qty) pairs best-first, stopping once the running
        total reaches ``cap`` (cap < 0 means the whole side)."""
        out = []
        cum = 0
        if side_is_buy:
            prices = reversed(self._buy_prices)
            levels = self._buy_levels
        else:
            prices = iter(self._sell_prices)
            levels = self._sell_levels
        for price in prices:
            qty = levels[price].total
            out.append((price, qty))
            cum += qty
            if 0 <= cap <= cum:
                break
        return out

    def sweep(self, action_is_buy, v):
        """Cash to trade ``v`` shares right now: a buy walks the asks, a
        sell walks the bids.  Returns (cash, shares_filled); the caller
        checks for shortfall.  Pure query."""
        if v < 0:
            raise ValueError("sweep volume must be >= 0")
        cash = 0
        left = v
        for price, qty in self.ladder(not action_is_buy, v):
            take = min(left, qty)
            cash += price * take
            left -= take
            if left == 0:
                break
        return cash, v - left

    def has_order(self, order_id):
        return order_id in self._live

    def order_qty(self, order_id):
        info = self._live.get(order_id)
        if info is None:
            raise ValueError(f"unknown order id {order_id}")
        return info[2]

    def live_count(self):
        return len(self._live)

    def live_ids(self):
        """Live order ids in ascending order (deterministic)."""
        return sorted(self._live)

    def checksum(self):
        """64-bit FNV-1a over "side,price,qty,id;" entries, best-to-worst,
        FIFO within level, buy side then sell side."""
        h = FNV_OFFSET
        for is_buy, tag in ((True, "B"), (False, "S")):
            levels = self._buy_levels if is_buy else self._sell_levels
            prices = self._buy_prices if is_buy else self._sell_prices
            ordered = reversed(prices) if is_buy else iter(prices)
            for price in ordered:
                for oid in levels[price].fifo:
                    entry = f"{tag},{price},{self._live[oid][2]},{oid};"
                    for byte in entry.encode("ascii"):
                        h = ((h ^ byte) * FNV_PRIME) & _U64
        return h


def _greedy(pay_ladder, recv_ladder, fee2, cap):
    """Pair the v-th cheapest share to pay for with the v-th best share to
    receive, taking whole level chunks while the per-share margin
    (recv - pay - fee2) stays positive.  Margins are nonincreasing, so the
    first nonpositive chunk ends the optimum at the smallest maximizing v.

    Returns (v, pay_cash, recv_cash); v == 0 means no profitable volume.
    """
    v = 0
    pay_cash = 0
    recv_cash = 0
    i = j = 0
    pay_left = recv_left = 0
    pay_price = recv_price = 0
    while v < cap:
        if pay_left == 0:
            if i >= len(pay_ladder):
                break
            pay_price, pay_left = pay_ladder[i]
            i += 1
        if recv_left == 0:
            if j >= len(recv_ladder):
                break
            recv_price, recv_left = recv_ladder[j]
            j += 1
        if recv_price - pay_price - fee2 <= 0:
            break
        take = min(pay_left, recv_left, cap - v)
        v += take
        pay_cash += pay_price * take
        recv_cash += recv_price * take
        pay_left -= take
        recv_left -= take
    return v, pay_cash, recv_cash


def best_trade(entry, exit_book, fee2, max_volume=-1):
    """Most profitable round trip between two book states.

    Buy: pay entry asks, receive exit bids.  Sell: receive entry bids, pay
    exit asks.  ``fee2`` is the round-trip fee per share in tick-cash.
    Returns (is_buy, v, entry_cash, exit_cash, profit) or None when no
    volume in either direction has positive profit.  Exact ties prefer buy.
    """
    big = 1 << 62
    cap_limit = max_volume if max_volume >= 0 else big

    cap_buy = min(entry.depth(False), exit_book.depth(True), cap_limit)
    vb, pay_b, recv_b = _greedy(
        entry.ladder(False, cap_buy), exit_book.ladder(True, cap_buy),
        fee2, cap_buy)
    profit_buy = recv_b - pay_b - fee2 * vb

    cap_sell = min(entry.depth(True), exit_book.depth(False), cap_limit)
    vs, pay_s, recv_s = _greedy(
        exit_book.ladder(False, cap_sell), entry.ladder(True, cap_sell),
        fee2, cap_sell)
    profit_sell = recv_s - pay_s - fee2 * vs

    if vb == 0 and vs == 0:
        return None
    if vb > 0 and (vs == 0 or profit_buy >= profit_sell):
        return True, vb, pay_b, recv_b, profit_buy
    return False, vs, recv_s, pay_s, profit_sell
