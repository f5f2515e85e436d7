"""
Runtime configuration
Budgets, tolerances and logging settings; every value can be overridden
through the environment or a .env file
"""

import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

# Exact arithmetic
ARITHMETIC_CONFIG = {
    # re-check gcd = 1 inside the unchecked Fraction constructor
    'debug_checks': os.getenv('MINKOWSKI_DEBUG_CHECKS', '0') == '1',
}

# Partition traversal and materialisation
PARTITION_CONFIG = {
    'max_materialized_level': int(os.getenv('MINKOWSKI_MAX_LEVEL', 26)),
    'split_depth': int(os.getenv('MINKOWSKI_SPLIT_DEPTH', 4)),
    'threads': int(os.getenv('MINKOWSKI_THREADS', 1)),
}

# Bounded searches of the regularity module
SEARCH_CONFIG = {
    'k_search_cap': int(os.getenv('MINKOWSKI_K_SEARCH_CAP', 10**6)),
}

# Quadrature against the question mark measure
QUADRATURE_CONFIG = {
    'max_intervals': int(os.getenv('MINKOWSKI_MAX_INTERVALS', 2_000_000)),
    'leaf_level': int(os.getenv('MINKOWSKI_LEAF_LEVEL', 20)),
    'moment_level': int(os.getenv('MINKOWSKI_MOMENT_LEVEL', 22)),
    'series_order': int(os.getenv('MINKOWSKI_SERIES_ORDER', 200)),
}

# Discretised measures and recurrence coefficients
SPECTRAL_CONFIG = {
    'max_atom_level': int(os.getenv('MINKOWSKI_MAX_ATOM_LEVEL', 22)),
    'resolution_tol': float(os.getenv('MINKOWSKI_RESOLUTION_TOL', 1e-6)),
    'exact_max_count': 30,
}

# Output documents
OUTPUT_CONFIG = {
    'schema': 1,
    'significant_digits': 17,
}

# Logging
LOGGING_CONFIG = {
    'log_level': os.getenv('MINKOWSKI_LOG_LEVEL', 'INFO'),
    'log_format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
}


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging to stderr so stdout stays machine readable"""
    logging.basicConfig(
        level=getattr(logging, (level or LOGGING_CONFIG['log_level']).upper(), logging.INFO),
        format=LOGGING_CONFIG['log_format'],
        stream=sys.stderr,
    )
