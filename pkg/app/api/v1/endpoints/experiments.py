from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool
from app.core.cache import cache_manager
from app.core.exceptions import ConfigError, DomainError, IngestionError
from app.core.experiment_config import resolve_experiment_config
from app.models.schemas import CostReport, ExperimentRequest
from app.services.experiment_service import run_experiment
from app.services.report_writer import emit_report
import logging

router = APIRouter()
logger = logging.getLogger(__name__)


@router.post("", response_model=CostReport)
async def create_experiment(request: ExperimentRequest):
    """Run the three schemes over common scenarios and return the cost report"""
    overrides = request.model_dump(exclude={"write_reports"}, exclude_none=True)
    try:
        cfg = resolve_experiment_config(overrides=overrides)
    except ConfigError as e:
        raise HTTPException(status_code=400, detail=str(e))

    report = cache_manager.get(cfg)
    try:
        if report is None:
            # experiments are CPU bound; keep the event loop free
            report = await run_in_threadpool(run_experiment, cfg)
            cache_manager.set(cfg, report)
        else:
            logger.info(f"Cache hit for experiment seed={cfg.seed}, traffic={cfg.traffic}")
        if request.write_reports:
            await run_in_threadpool(emit_report, report, cfg.out)
    except (ConfigError, IngestionError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except OSError as e:
        raise HTTPException(status_code=500, detail=f"could not write reports: {e}")

    return report
