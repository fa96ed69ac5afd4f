"""Limit-order-book reconstruction and hindsight-optimal trading bounds.

Rebuilds price-time-priority books from event feeds, simulates the most
profitable aggressive round trips available at fixed short holding periods
with full knowledge of the future book, restricts the same idea to
top-of-quote feeds, and extrapolates profits across a stock universe with
a power-law fit.  Everything is exact-integer tick arithmetic and fully
deterministic under a seed.
"""

from .backend import backend_name
from .book import InsideQuote, OrderBook, apply_event, inside_quote, sweep
from .engine import (OtmConfig, SimulationResult, TradeRecord,
                     decision_instants, optimal_trade, simulate,
                     simulate_variable_holding)
from .feeds import (FeedMeta, MarketEvent, QuoteRecord, parse_feed,
                    validate_feed, write_feed)
from .powerlaw import (PowerLawModel, UniverseEstimate, extrapolate_universe,
                       fit_power_law)
from .quotes import (composite_ratio, count_quotes, optimal_quote_trade,
                     simulate_quotes)
from .synth import SynthConfig, derive_quotes, generate_events, tighten_composite

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "InsideQuote", "OrderBook", "apply_event", "inside_quote", "sweep",
    "OtmConfig", "SimulationResult", "TradeRecord", "decision_instants",
    "optimal_trade", "simulate", "simulate_variable_holding",
    "FeedMeta", "MarketEvent", "QuoteRecord", "parse_feed", "validate_feed",
    "write_feed",
    "PowerLawModel", "UniverseEstimate", "extrapolate_universe",
    "fit_power_law",
    "composite_ratio", "count_quotes", "optimal_quote_trade",
    "simulate_quotes",
    "SynthConfig", "derive_quotes", "generate_events", "tighten_composite",
]
