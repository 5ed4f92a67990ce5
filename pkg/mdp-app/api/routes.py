"""
REST API routes for the vanishing-discount toolkit
"""
from fastapi import APIRouter, Request
from fastapi.responses import JSONResponse

from catalog.examples import CATALOG, build_model
from core.config import MDP_DEFAULT_SCHEDULE, MDP_SOLVER_TOL
from core.errors import ExtractionError, ModelError, SolverError
from core.io import load_model, load_policy, model_to_dict, policy_to_dict, to_jsonable
from core.logger import logger
from core.validation import validate_model
from sim.simulate import simulate_average_cost
from solvers.discounted import relative_value
from vanish.diagnostics import load_diagnostics
from vanish.pipeline import vanish_pipeline
from vanish.schedule import DiscountSchedule
from verify.suite import run_suite

# Create API router
router = APIRouter(prefix="/api", tags=["mdp"])

STATUS_CODES = {ModelError: 400, SolverError: 422, ExtractionError: 409, ValueError: 400, TypeError: 400}


def _success(data, message: str = None) -> JSONResponse:
    body = {"status": "success", "data": to_jsonable(data)}
    if message:
        body["message"] = message
    return JSONResponse(body)


def _error(e: Exception, where: str) -> JSONResponse:
    status = next((code for cls, code in STATUS_CODES.items() if isinstance(e, cls)), 500)
    if status == 500:
        logger.error(f"Error in {where}: {e}", exc_info=True)
    else:
        logger.warning(f"{where}: {e}")
    return JSONResponse({"status": "error", "message": str(e)}, status_code=status)


def _inline(data: dict, key: str) -> dict:
    """Documents travel inline; a string would be read as a server path"""
    if key not in data:
        raise ModelError(f"request body needs a '{key}' document")
    if not isinstance(data[key], dict):
        raise ModelError(f"'{key}' must be an inline JSON object")
    return data[key]


def _validated_model(data: dict):
    model = load_model(_inline(data, "model"))
    report = validate_model(model)
    if not report.ok:
        raise ModelError(f"invalid model: {'; '.join(report.violations)}")
    return model


@router.get("/health")
async def health_check():
    """Health check endpoint"""
    return JSONResponse({"status": "healthy", "service": "mdp-vanishing-discount-api"})


@router.get("/catalog/{name}")
async def get_catalog_model(name: str, request: Request):
    """Build a catalog model; query parameters are passed to its constructor"""
    try:
        if name not in CATALOG:
            return JSONResponse({
                "status": "error",
                "message": f"Unknown catalog model {name!r}"
            }, status_code=404)
        model = build_model(name, dict(request.query_params))
        return _success(model_to_dict(model))
    except Exception as e:
        return _error(e, "get_catalog_model")


@router.post("/solve")
async def solve_api(request: Request):
    """Discounted solve: v_alpha, m_alpha, u_alpha"""
    try:
        data = await request.json()
        model = _validated_model(data)
        if "alpha" not in data:
            raise ModelError("alpha is required")
        rv = relative_value(model, float(data["alpha"]), float(data.get("tol", MDP_SOLVER_TOL)))
        return _success({
            "alpha": rv.alpha,
            "m": rv.m,
            "gain": rv.gain,
            "v": rv.v.values,
            "u": rv.u.values,
            "iterations": rv.iterations,
            "residual": rv.residual,
        })
    except Exception as e:
        return _error(e, "solve API")


@router.post("/vanish")
async def vanish_api(request: Request):
    """Full pipeline: diagnostics and extracted policy"""
    try:
        data = await request.json()
        model = _validated_model(data)
        schedule = DiscountSchedule.parse(data.get("schedule", MDP_DEFAULT_SCHEDULE))
        diag, policy = vanish_pipeline(
            model,
            schedule,
            construction=data.get("construction", "pointwise"),
            tol=float(data.get("tol", MDP_SOLVER_TOL)),
            refine=bool(data.get("refine", False)),
            seed=int(data.get("seed", 0)),
        )
        if policy is None:
            raise ExtractionError(f"A*(x) empty at states {diag.empty_states}", state=diag.empty_states[0])
        return _success({"diagnostics": diag.to_dict(), "policy": policy_to_dict(policy)})
    except Exception as e:
        return _error(e, "vanish API")


@router.post("/verify")
async def verify_api(request: Request):
    """Run the verification suite on a model and saved diagnostics"""
    try:
        data = await request.json()
        model = _validated_model(data)
        diag = load_diagnostics(_inline(data, "diagnostics"))
        report = run_suite(model, diag, checks=data.get("checks"), seed=int(data.get("seed", 0)))
        return _success(report.to_dict(), message="all exact/residual checks pass" if report.passed else "verification failed")
    except Exception as e:
        return _error(e, "verify API")


@router.post("/simulate")
async def simulate_api(request: Request):
    """Monte Carlo average cost of a stationary policy"""
    try:
        data = await request.json()
        model = _validated_model(data)
        estimate = simulate_average_cost(
            model,
            load_policy(_inline(data, "policy")),
            x0=int(data.get("x0", 0)),
            horizon=int(data.get("horizon", 10000)),
            replications=int(data.get("replications", 1)),
            seed=int(data.get("seed", 0)),
        )
        return _success(estimate.to_dict())
    except Exception as e:
        return _error(e, "simulate API")
