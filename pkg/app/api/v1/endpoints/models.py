# app/api/v1/endpoints/models.py
from fastapi import APIRouter, HTTPException
from app.core.exceptions import DomainError
from app.models.schemas import PairDecision, PairShareRequest, TradeDecision, TradeRequest
from app.services.load_sharing import optimal_pair_share
from app.services.realtime_trading import individual_trade

router = APIRouter()


@router.post("/pair-share", response_model=PairDecision)
async def pair_share(request: PairShareRequest):
    """Optimal offload between one co-located BS pair"""
    try:
        return optimal_pair_share(request.d1, request.d2, request.p1, request.p2)
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.post("/trade", response_model=TradeDecision)
async def trade(request: TradeRequest):
    """Optimal real-time trade for a commitment and a realized demand"""
    try:
        return individual_trade(request.commitment, request.demand.zeta, request.prices)
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))
