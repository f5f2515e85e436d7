"""
Output documents
JSON / CSV rendering; exact values travel as strings next to a fixed
precision decimal
"""

import json
import logging
import sys
from typing import Any, Dict, Optional

import pandas as pd

from .config import OUTPUT_CONFIG

logger = logging.getLogger(__name__)


def decimal(value) -> str:
    return format(float(value), f".{OUTPUT_CONFIG['significant_digits']}g")


def exact(value) -> Dict[str, str]:
    """{"exact": "p/q", "decimal": "0.xxx"} for any exact quantity"""
    return {'exact': str(value), 'decimal': decimal(value)}


def to_json(document: Dict[str, Any]) -> str:
    payload = {'schema': OUTPUT_CONFIG['schema']}
    payload.update(document)
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def emit(text: str, output: Optional[str] = None) -> None:
    """Write to `output` or to stdout"""
    if output:
        with open(output, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info("wrote %s", output)
    else:
        sys.stdout.write(text)
