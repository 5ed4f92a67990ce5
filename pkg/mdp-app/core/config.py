"""
Configuration loaded from environment variables (.env supported)
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
env_path = Path(__file__).parent.parent.parent / '.env'
load_dotenv(env_path)

# Logging
MDP_LOG_LEVEL = os.getenv("MDP_LOG_LEVEL", "INFO")

# Worker threads for per-alpha solves and simulation replications
MDP_THREADS = int(os.getenv("MDP_THREADS", "4"))

# Solver settings
MDP_SOLVER_TOL = float(os.getenv("MDP_SOLVER_TOL", "1e-10"))
MDP_MAX_ITERATIONS = int(os.getenv("MDP_MAX_ITERATIONS", "200000"))
MDP_ITERATION_MARGIN = int(os.getenv("MDP_ITERATION_MARGIN", "100"))

# Vanishing-discount pipeline
MDP_DEFAULT_SCHEDULE = os.getenv("MDP_DEFAULT_SCHEDULE", "geometric:0.5:30")
MDP_ASTAR_TOL = float(os.getenv("MDP_ASTAR_TOL", "1e-7"))

# Model loading / validation
MDP_STOCHASTIC_TOL = float(os.getenv("MDP_STOCHASTIC_TOL", "1e-12"))
MDP_NORMALIZE_TOL = float(os.getenv("MDP_NORMALIZE_TOL", "1e-6"))

# Report API
MDP_API_HOST = os.getenv("MDP_API_HOST", "0.0.0.0")
MDP_API_PORT = int(os.getenv("MDP_API_PORT", "8000"))
