# distutils: language = c++
"""Compiled order-book kernel.

C++ twin of ``hindsight._pycore`` behind the same contract: identical
matching semantics, identical checksums, identical greedy pairing, bit for
bit.  Parity is enforced by tests/test_backends.py; keep the two in sync.
"""

from libcpp cimport bool as cbool
from libcpp.string cimport string
from libcpp.vector cimport vector

cdef extern from *:
    """
    #include <cstdint>
    #include <cstdio>
    #include <algorithm>
    #include <deque>
    #include <map>
    #include <string>
    #include <unordered_map>
    #include <vector>

    namespace lobkernel {

    struct OrderInfo { bool is_buy; int64_t price; int64_t qty; };
    struct Level { int64_t total = 0; int64_t count = 0; std::deque<int64_t> fifo; };
    struct Fill { int64_t oid; int64_t price; int64_t qty; };
    struct LadderRung { int64_t price; int64_t qty; };

    class BookImpl {
    public:
        bool match_mode;
        // Both sides iterate begin()->end() best first: bids are keyed by
        // negated price, asks by price.
        std::map<int64_t, Level> bids;
        std::map<int64_t, Level> asks;
        std::unordered_map<int64_t, OrderInfo> live;

        explicit BookImpl(bool m) : match_mode(m) {}

        static int64_t level_price(bool is_buy, int64_t key) {
            return is_buy ? -key : key;
        }

        bool crosses(bool is_buy, int64_t price) const {
            if (is_buy)
                return !asks.empty() && price >= asks.begin()->first;
            return !bids.empty() && price <= -bids.begin()->first;
        }

        int add(int64_t oid, bool is_buy, int64_t price, int64_t qty,
                std::vector<Fill>& fills, std::string& err) {
            char buf[96];
            if (live.count(oid)) {
                snprintf(buf, sizeof buf, "duplicate live order id %lld", (long long)oid);
                err = buf; return 1;
            }
            if (price <= 0) {
                snprintf(buf, sizeof buf, "order %lld: price must be positive ticks", (long long)oid);
                err = buf; return 1;
            }
            if (qty <= 0) {
                snprintf(buf, sizeof buf, "order %lld: qty must be positive", (long long)oid);
                err = buf; return 1;
            }
            int64_t remaining = qty;
            if (match_mode) {
                auto& opp = is_buy ? asks : bids;
                while (remaining > 0 && !opp.empty()) {
                    auto it = opp.begin();
                    int64_t lvl_price = level_price(!is_buy, it->first);
                    if (is_buy ? (price < lvl_price) : (price > lvl_price))
                        break;
                    Level& lvl = it->second;
                    while (remaining > 0 && !lvl.fifo.empty()) {
                        int64_t rid = lvl.fifo.front();
                        OrderInfo& info = live[rid];
                        int64_t take = std::min(remaining, info.qty);
                        fills.push_back({rid, lvl_price, take});
                        remaining -= take;
                        info.qty -= take;
                        lvl.total -= take;
                        if (info.qty == 0) {
                            lvl.fifo.pop_front();
                            lvl.count -= 1;
                            live.erase(rid);
                        }
                    }
                    if (lvl.total == 0) opp.erase(it);
                }
            } else if (crosses(is_buy, price)) {
                snprintf(buf, sizeof buf,
                         "order %lld: add at %lld crosses the book in log mode",
                         (long long)oid, (long long)price);
                err = buf; return 1;
            }
            if (remaining > 0) {
                auto& own = is_buy ? bids : asks;
                Level& lvl = own[is_buy ? -price : price];
                lvl.fifo.push_back(oid);
                lvl.total += remaining;
                lvl.count += 1;
                live[oid] = {is_buy, price, remaining};
            }
            return 0;
        }

        int remove_shares(int64_t oid, int64_t amount, const char* verb,
                          std::string& err) {
            char buf[96];
            auto it = live.find(oid);
            if (it == live.end()) {
                snprintf(buf, sizeof buf, "%s references unknown order id %lld",
                         verb, (long long)oid);
                err = buf; return 1;
            }
            if (amount <= 0) {
                snprintf(buf, sizeof buf, "%s of order %lld: qty must be positive",
                         verb, (long long)oid);
                err = buf; return 1;
            }
            if (amount > it->second.qty) {
                snprintf(buf, sizeof buf,
                         "%s of order %lld: qty %lld exceeds remaining %lld",
                         verb, (long long)oid, (long long)amount,
                         (long long)it->second.qty);
                err = buf; return 1;
            }
            bool is_buy = it->second.is_buy;
            int64_t key = is_buy ? -it->second.price : it->second.price;
            auto& own = is_buy ? bids : asks;
            auto lit = own.find(key);
            Level& lvl = lit->second;
            lvl.total -= amount;
            if (amount == it->second.qty) {
                lvl.fifo.erase(std::find(lvl.fifo.begin(), lvl.fifo.end(), oid));
                lvl.count -= 1;
                live.erase(it);
            } else {
                it->second.qty -= amount;
            }
            if (lvl.total == 0) own.erase(lit);
            return 0;
        }

        int cancel(int64_t oid, std::string& err) {
            auto it = live.find(oid);
            if (it == live.end()) {
                char buf[96];
                snprintf(buf, sizeof buf,
                         "cancel references unknown order id %lld", (long long)oid);
                err = buf; return 1;
            }
            return remove_shares(oid, it->second.qty, "cancel", err);
        }

        void inside(bool& has_bid, int64_t& bp, int64_t& bd, int64_t& bc,
                    bool& has_ask, int64_t& ap, int64_t& ad, int64_t& ac) const {
            has_bid = !bids.empty();
            if (has_bid) {
                auto it = bids.begin();
                bp = -it->first; bd = it->second.total; bc = it->second.count;
            } else { bp = bd = bc = 0; }
            has_ask = !asks.empty();
            if (has_ask) {
                auto it = asks.begin();
                ap = it->first; ad = it->second.total; ac = it->second.count;
            } else { ap = ad = ac = 0; }
        }

        int64_t depth(bool side_is_buy) const {
            const auto& side = side_is_buy ? bids : asks;
            int64_t total = 0;
            for (const auto& kv : side) total += kv.second.total;
            return total;
        }

        void ladder(bool side_is_buy, int64_t cap,
                    std::vector<LadderRung>& out) const {
            const auto& side = side_is_buy ? bids : asks;
            int64_t cum = 0;
            for (const auto& kv : side) {
                int64_t price = level_price(side_is_buy, kv.first);
                out.push_back({price, kv.second.total});
                cum += kv.second.total;
                if (cap >= 0 && cum >= cap) break;
            }
        }

        void sweep(bool action_is_buy, int64_t v, int64_t& cash,
                   int64_t& filled) const {
            const auto& side = action_is_buy ? asks : bids;
            cash = 0;
            int64_t left = v;
            for (const auto& kv : side) {
                if (left == 0) break;
                int64_t price = level_price(!action_is_buy, kv.first);
                int64_t take = std::min(left, kv.second.total);
                cash += price * take;
                left -= take;
            }
            filled = v - left;
        }

        uint64_t checksum() const {
            uint64_t h = 0xcbf29ce484222325ULL;
            char buf[96];
            for (int pass = 0; pass < 2; ++pass) {
                bool is_buy = (pass == 0);
                const auto& side = is_buy ? bids : asks;
                for (const auto& kv : side) {
                    int64_t price = level_price(is_buy, kv.first);
                    for (int64_t oid : kv.second.fifo) {
                        int64_t qty = live.at(oid).qty;
                        int n = snprintf(buf, sizeof buf, "%c,%lld,%lld,%lld;",
                                         is_buy ? 'B' : 'S', (long long)price,
                                         (long long)qty, (long long)oid);
                        for (int k = 0; k < n; ++k) {
                            h ^= (uint64_t)(unsigned char)buf[k];
                            h *= 0x100000001b3ULL;
                        }
                    }
                }
            }
            return h;
        }

        bool has(int64_t oid) const { return live.count(oid) != 0; }
        int64_t qty_of(int64_t oid) const { return live.at(oid).qty; }
        int64_t live_size() const { return (int64_t)live.size(); }

        void live_ids(std::vector<int64_t>& out) const {
            out.reserve(live.size());
            for (const auto& kv : live) out.push_back(kv.first);
            std::sort(out.begin(), out.end());
        }
    };

    struct GreedyResult { int64_t v; int64_t pay_cash; int64_t recv_cash; };

    // Chunked walk pairing the v-th cheapest pay share with the v-th best
    // receive share; stops at the first nonpositive margin, which is the
    // smallest maximizing v because margins are nonincreasing.
    inline GreedyResult greedy_pair(const std::vector<LadderRung>& pay,
                                    const std::vector<LadderRung>& recv,
                                    int64_t fee2, int64_t cap) {
        GreedyResult r{0, 0, 0};
        size_t i = 0, j = 0;
        int64_t pay_left = 0, recv_left = 0, pay_price = 0, recv_price = 0;
        while (r.v < cap) {
            if (pay_left == 0) {
                if (i >= pay.size()) break;
                pay_price = pay[i].price; pay_left = pay[i].qty; ++i;
            }
            if (recv_left == 0) {
                if (j >= recv.size()) break;
                recv_price = recv[j].price; recv_left = recv[j].qty; ++j;
            }
            if (recv_price - pay_price - fee2 <= 0) break;
            int64_t take = std::min(std::min(pay_left, recv_left), cap - r.v);
            r.v += take;
            r.pay_cash += pay_price * take;
            r.recv_cash += recv_price * take;
            pay_left -= take;
            recv_left -= take;
        }
        return r;
    }

    }  // namespace lobkernel
    """
    cdef cppclass Fill "lobkernel::Fill":
        long long oid
        long long price
        long long qty
    cdef cppclass LadderRung "lobkernel::LadderRung":
        long long price
        long long qty
    cdef cppclass GreedyResult "lobkernel::GreedyResult":
        long long v
        long long pay_cash
        long long recv_cash
    cdef cppclass BookImpl "lobkernel::BookImpl":
        cbool match_mode
        BookImpl(cbool m) except +
        int add(long long oid, cbool is_buy, long long price, long long qty,
                vector[Fill]& fills, string& err)
        int remove_shares(long long oid, long long amount, const char* verb,
                          string& err)
        int cancel(long long oid, string& err)
        void inside(cbool& has_bid, long long& bp, long long& bd, long long& bc,
                    cbool& has_ask, long long& ap, long long& ad, long long& ac)
        long long depth(cbool side_is_buy)
        void ladder(cbool side_is_buy, long long cap, vector[LadderRung]& out)
        void sweep(cbool action_is_buy, long long v, long long& cash,
                   long long& filled)
        unsigned long long checksum()
        cbool has(long long oid)
        long long qty_of(long long oid)
        long long live_size()
        void live_ids(vector[long long]& out)
    cdef GreedyResult greedy_pair "lobkernel::greedy_pair"(
        const vector[LadderRung]& pay, const vector[LadderRung]& recv,
        long long fee2, long long cap)


cdef class Book:
    """Compiled two-sided book; see hindsight._pycore.Book for semantics."""

    cdef BookImpl* impl

    def __cinit__(self, match_mode=True):
        self.impl = new BookImpl(bool(match_mode))

    def __dealloc__(self):
        del self.impl

    @property
    def match_mode(self):
        return self.impl.match_mode

    def add(self, long long order_id, is_buy, long long price, long long qty):
        cdef vector[Fill] fills
        cdef string err
        if self.impl.add(order_id, bool(is_buy), price, qty, fills, err):
            raise ValueError(err.decode("ascii"))
        return [(f.oid, f.price, f.qty) for f in fills]

    def cancel(self, long long order_id):
        cdef string err
        if self.impl.cancel(order_id, err):
            raise ValueError(err.decode("ascii"))

    def reduce(self, long long order_id, long long qty):
        cdef string err
        if self.impl.remove_shares(order_id, qty, "reduce", err):
            raise ValueError(err.decode("ascii"))

    def execute(self, long long order_id, long long qty):
        cdef string err
        if self.impl.remove_shares(order_id, qty, "execute", err):
            raise ValueError(err.decode("ascii"))

    def inside(self):
        cdef cbool has_bid = False, has_ask = False
        cdef long long bp = 0, bd = 0, bc = 0, ap = 0, ad = 0, ac = 0
        self.impl.inside(has_bid, bp, bd, bc, has_ask, ap, ad, ac)
        return (bp if has_bid else None, bd, bc,
                ap if has_ask else None, ad, ac)

    def depth(self, side_is_buy):
        return self.impl.depth(bool(side_is_buy))

    def ladder(self, side_is_buy, long long cap=-1):
        cdef vector[LadderRung] rungs
        self.impl.ladder(bool(side_is_buy), cap, rungs)
        return [(r.price, r.qty) for r in rungs]

    def sweep(self, action_is_buy, long long v):
        if v < 0:
            raise ValueError("sweep volume must be >= 0")
        cdef long long cash = 0, filled = 0
        self.impl.sweep(bool(action_is_buy), v, cash, filled)
        return cash, filled

    def has_order(self, long long order_id):
        return bool(self.impl.has(order_id))

    def order_qty(self, long long order_id):
        if not self.impl.has(order_id):
            raise ValueError(f"unknown order id {order_id}")
        return self.impl.qty_of(order_id)

    def live_count(self):
        return self.impl.live_size()

    def live_ids(self):
        cdef vector[long long] ids
        self.impl.live_ids(ids)
        return [i for i in ids]

    def checksum(self):
        return self.impl.checksum()


def best_trade(Book entry, Book exit_book, long long fee2,
               long long max_volume=-1):
    """Most profitable round trip between two compiled book states; same
    contract and tie rules as hindsight._pycore.best_trade."""
    cdef long long big = <long long>1 << 62
    cdef long long cap_limit = max_volume if max_volume >= 0 else big
    cdef long long cap_buy = min(entry.impl.depth(False),
                                 exit_book.impl.depth(True), cap_limit)
    cdef long long cap_sell = min(entry.impl.depth(True),
                                  exit_book.impl.depth(False), cap_limit)
    cdef vector[LadderRung] pay_b, recv_b, pay_s, recv_s
    entry.impl.ladder(False, cap_buy, pay_b)
    exit_book.impl.ladder(True, cap_buy, recv_b)
    cdef GreedyResult rb = greedy_pair(pay_b, recv_b, fee2, cap_buy)
    cdef long long profit_buy = rb.recv_cash - rb.pay_cash - fee2 * rb.v

    exit_book.impl.ladder(False, cap_sell, pay_s)
    entry.impl.ladder(True, cap_sell, recv_s)
    cdef GreedyResult rs = greedy_pair(pay_s, recv_s, fee2, cap_sell)
    cdef long long profit_sell = rs.recv_cash - rs.pay_cash - fee2 * rs.v

    if rb.v == 0 and rs.v == 0:
        return None
    if rb.v > 0 and (rs.v == 0 or profit_buy >= profit_sell):
        return True, rb.v, rb.pay_cash, rb.recv_cash, profit_buy
    return False, rs.v, rs.recv_cash, rs.pay_cash, profit_sell
