# app/cli.py
import argparse
import logging
import sys
from typing import List, Optional

from app.core.config import settings
from app.core.exceptions import ConfigError, IngestionError
from app.core.experiment_config import parse_schemes, resolve_experiment_config
from app.services.experiment_service import run_experiment
from app.services.report_writer import emit_report

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m app.cli",
        description="Simulate non-cooperative, fully cooperative and bargaining energy purchase of two MNOs",
    )
    parser.add_argument("--config", help="flat key=value config file; flags override its values")
    parser.add_argument("--seed", type=int, help="root seed of all random streams")
    parser.add_argument("--bs-pairs", type=int, dest="k_pairs", help="number of co-located BS pairs K")
    parser.add_argument("--slots", type=int, dest="n_slots", help="time slots per day N")
    parser.add_argument("--mc-samples", type=int, dest="m_samples", help="Monte-Carlo samples M per slot")
    parser.add_argument("--realizations", type=int, help="scenario realizations R")
    parser.add_argument("--traffic", help="symmetric | asymmetric | file:<theta csv>")
    parser.add_argument("--prices", help="price curve CSV (slot,alpha,alpha_buy_pred,alpha_sell_pred)")
    parser.add_argument("--scheme", type=parse_schemes, dest="schemes", help="noncoop | fullcoop | bargain | all")
    parser.add_argument("--out", help="output directory for CSV reports")
    parser.add_argument("--workers", type=int, help="processes used for realizations")
    parser.add_argument("--traffic-err", type=float, dest="traffic_err_frac", help="traffic error half-width")
    parser.add_argument("--price-err", type=float, dest="price_err_frac", help="real-time price error half-width")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="logging level")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "log_level")}

    try:
        cfg = resolve_experiment_config(args.config, overrides)
        report = run_experiment(cfg)
        paths = emit_report(report, cfg.out)
    except (ConfigError, IngestionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"Experiment failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1

    for row in report.summary:
        print(f"{row.scheme:>9} {row.mno:>5} total={row.total:12.2f} reduction={row.reduction_pct:6.2f}%")
    logger.info(f"Reports: {', '.join(str(p) for p in paths)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
