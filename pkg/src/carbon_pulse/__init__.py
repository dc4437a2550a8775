"""Daily, sector-resolved fossil CO2 emission estimation from activity proxies.

The package turns heterogeneous activity feeds (power generation, road
congestion, industrial production, flight tracks, shipping volumes,
temperature reanalysis) into daily national CO2 emission series against an
annual inventory baseline, with propagated uncertainty.
"""

__version__ = "0.1.0"
