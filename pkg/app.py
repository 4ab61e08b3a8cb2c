from nozzle_solver.cli import app
from nozzle_solver.core.config import get_settings
from nozzle_solver.core.logger import setup_logger

# Get settings
settings = get_settings()

# Setup logger
logger = setup_logger(__name__)

if __name__ == "__main__":
    logger.debug(f"Starting nozzle solver ({settings.ENVIRONMENT})")
    app()
