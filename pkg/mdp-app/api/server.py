"""
FastAPI application serving the report API
"""
from fastapi import FastAPI

from api.routes import router
from core.config import MDP_API_HOST, MDP_API_PORT
from core.logger import logger

app = FastAPI(title="MDP vanishing-discount API")
app.include_router(router)
logger.info("✅ REST API routes added from api/routes.py")
logger.info("   - GET /api/health")
logger.info("   - GET /api/catalog/{name}")
logger.info("   - POST /api/solve, /api/vanish, /api/verify, /api/simulate")


def serve(host: str = MDP_API_HOST, port: int = MDP_API_PORT):
    import uvicorn

    logger.info(f"🚀 Serving on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port)
