"""
Command line front end
Subcommands eval | invert | partition | census | pipeline | lambda-star |
dimension | jacobi | verify
"""

import argparse
import logging
from dataclasses import dataclass
from fractions import Fraction as Rational
from typing import List, Optional

import pandas as pd

from .config import PARTITION_CONFIG, configure_logging
from .errors import BudgetExceededError, DomainError, MinkowskiError
from .exact_arithmetic import Fraction
from .partition import collect_level
from .question_mark import DyadicRational, qm_inverse_dyadic, qm_rational, qm_real
from .regularity import large_census, lambda_star_report, parse_alpha, prop1_pipeline
from .reporting import decimal, emit, exact, to_csv, to_json
from .spectral import (discretize, kinney_dimension, recurrence_coeffs, regularity_diagnostic,
                       resolved_recurrence)
from .verification import InvariantSuite

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    alpha: Optional[Rational] = None
    eps: Optional[float] = None
    method: str = 'moment'
    format: str = 'json'
    threads: int = 1
    output: Optional[str] = None
    level: Optional[int] = None
    count: Optional[int] = None
    tol: Optional[float] = None
    max_level: Optional[int] = None
    x: Optional[str] = None
    y: Optional[str] = None
    log_level: Optional[str] = None


def _alpha(text: str) -> Rational:
    try:
        return parse_alpha(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--threads', type=int, default=1, help="worker processes for traversals (default: 1)")
    shared.add_argument('--output', type=str, default=None, help="write to this file instead of stdout")
    shared.add_argument('--log-level', type=str, default=None, dest='log_level', help="logging level")

    parser = argparse.ArgumentParser(prog='minkowski',
                                     description="Question mark measure: exact partitions and regularity certificates")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', parents=[shared], help="?(x) for a rational P/Q or a decimal")
    p.add_argument('--x', required=True)
    p.add_argument('--eps', type=_positive_float, default=1e-9)

    p = sub.add_parser('invert', parents=[shared], help="x with ?(x) = y for a dyadic y")
    p.add_argument('--y', required=True)

    p = sub.add_parser('partition', parents=[shared], help="intervals of one level")
    p.add_argument('--level', type=_non_negative_int, required=True)
    p.add_argument('--format', choices=['csv', 'json'], default='csv')

    p = sub.add_parser('census', parents=[shared], help="large intervals L^n(alpha)")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--alpha', type=_alpha, required=True)
    p.add_argument('--format', choices=['csv', 'json'], default='json')

    p = sub.add_parser('pipeline', parents=[shared], help="levels n1, n2, n3 and the bound l(alpha)")
    p.add_argument('--alpha', type=_alpha, required=True)

    p = sub.add_parser('lambda-star', parents=[shared], help="exact lower bound for the measure of Lambda^n(alpha)")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--alpha', type=_alpha, required=True)

    p = sub.add_parser('dimension', parents=[shared], help="Kinney dimension of the measure")
    p.add_argument('--eps', type=_positive_float, required=True)
    p.add_argument('--method', choices=['moment', 'adaptive'], default='moment')

    p = sub.add_parser('jacobi', parents=[shared], help="recurrence coefficients of a discretisation")
    p.add_argument('--level', type=_non_negative_int, required=True)
    p.add_argument('--count', type=int, required=True)
    p.add_argument('--format', choices=['csv', 'json'], default='csv')
    p.add_argument('--tol', type=_positive_float, default=None,
                   help="resolution tolerance against level+2 (default from config)")
    p.add_argument('--no-resolution', action='store_true', dest='no_resolution',
                   help="skip the comparison with level+2")

    p = sub.add_parser('verify', parents=[shared], help="exact invariant suite")
    p.add_argument('--max-level', type=_non_negative_int, default=12, dest='max_level')
    p.add_argument('--format', choices=['table', 'json'], default='table')
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    fields = RunConfig.__dataclass_fields__
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in fields})
    if getattr(args, 'no_resolution', False):
        config.tol = 0.0
    return config


def _run_eval(config: RunConfig) -> str:
    text = config.x.strip()
    if '/' in text or text in ('0', '1'):
        x = Fraction.parse(text)
        return to_json({'command': 'eval', 'x': exact(x), 'value': exact(qm_rational(x))})
    value = qm_real(float(text), config.eps)
    return to_json({'command': 'eval', 'x': text, 'eps': config.eps, 'value': decimal(value)})


def _run_invert(config: RunConfig) -> str:
    y = DyadicRational.parse(config.y)
    return to_json({'command': 'invert', 'y': exact(y), 'x': exact(qm_inverse_dyadic(y))})


def _run_partition(config: RunConfig) -> str:
    budget = PARTITION_CONFIG['max_materialized_level']
    if config.level > budget:
        raise BudgetExceededError(f"level {config.level} exceeds the materialisation budget {budget}")
    rows = [{
        'word': iv.word.bits,
        'theta': iv.word.theta,
        'left': str(iv.left),
        'right': str(iv.right),
        'length': str(iv.length),
        'measure': str(iv.measure),
        'left_decimal': decimal(iv.left),
        'right_decimal': decimal(iv.right),
        'length_decimal': decimal(iv.length),
        'measure_decimal': decimal(iv.measure),
    } for iv in collect_level(config.level, threads=config.threads)]
    if config.format == 'json':
        return to_json({'command': 'partition', 'level': config.level, 'intervals': rows})
    return to_csv(pd.DataFrame(rows, columns=list(rows[0])))


def _run_census(config: RunConfig) -> str:
    census = large_census(config.n, config.alpha, threads=config.threads)
    if config.format == 'csv':
        return to_csv(census.to_frame())
    return to_json({
        'command': 'census',
        'n': census.n,
        'alpha': exact(census.alpha),
        'threshold': exact(census.alpha / census.n),
        'count': census.count,
        'members': [{'word': w.bits, 'theta': w.theta, 'length': exact(length)} for w, length in census.members],
    })


def _run_pipeline(config: RunConfig) -> str:
    report = prop1_pipeline(config.alpha)
    document = report.summary()
    document['alpha'] = exact(report.alpha)
    document['command'] = 'pipeline'
    return to_json(document)


def _run_lambda_star(config: RunConfig) -> str:
    report = lambda_star_report(config.n, config.alpha, threads=config.threads)
    return to_json({
        'command': 'lambda-star',
        'n': report.n,
        'alpha': exact(report.alpha),
        'complement': report.complement,
        'complement_size': len(report.complement),
        'census_count': report.census_count,
        'lower_bound': exact(report.lower_bound),
        'ceiling': exact(report.ceiling),
        'holds': report.holds,
    })


def _run_dimension(config: RunConfig) -> str:
    estimate = kinney_dimension(config.eps, method=config.method)
    return to_json({
        'command': 'dimension',
        'eps': config.eps,
        'method': estimate.method,
        'dimension': decimal(estimate.dimension),
        'error_bound': decimal(estimate.error_bound),
        'integral': decimal(estimate.integral),
        'integral_error': decimal(estimate.integral_error),
    })


def _run_jacobi(config: RunConfig) -> str:
    if config.tol == 0.0:
        coeffs = recurrence_coeffs(discretize(config.level), config.count)
    else:
        coeffs = resolved_recurrence(config.level, config.count, config.tol)
    trend = regularity_diagnostic(coeffs)
    frame = coeffs.to_frame()
    if config.format == 'csv':
        return to_csv(frame)
    return to_json({
        'command': 'jacobi',
        'level': config.level,
        'requested': config.count,
        'resolved': len(coeffs),
        'final_gap': decimal(trend.final_gap) if len(coeffs) else None,
        'rows': [{'j': int(r.j), 'a': decimal(r.a), 'b': decimal(r.b), 'geo_mean': decimal(r.geo_mean)}
                 for r in frame.itertuples()],
    })


def _run_verify(config: RunConfig):
    suite = InvariantSuite(max_level=config.max_level)
    suite.run()
    if config.format == 'json':
        document = suite.get_summary()
        document['command'] = 'verify'
        document['checks'] = [{'name': r.name, 'passed': r.passed, 'detail': r.detail} for r in suite.results]
        text = to_json(document)
    else:
        text = suite.render() + "\n"
    return text, suite.passed


def run(config: RunConfig) -> int:
    """Dispatch one subcommand; 0 ok, 1 failed check or tolerance, 2 bad input"""
    if config.threads is not None:
        PARTITION_CONFIG['threads'] = max(1, config.threads)
    handlers = {
        'eval': _run_eval,
        'invert': _run_invert,
        'partition': _run_partition,
        'census': _run_census,
        'pipeline': _run_pipeline,
        'lambda-star': _run_lambda_star,
        'dimension': _run_dimension,
        'jacobi': _run_jacobi,
    }
    try:
        if config.command == 'verify':
            text, passed = _run_verify(config)
            emit(text, config.output)
            if not passed:
                logger.error("verification failed")
                return 1
            return 0
        emit(handlers[config.command](config), config.output)
        return 0
    except ValueError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return 2
    except MinkowskiError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return 1


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(config.log_level)
    return run(config)
