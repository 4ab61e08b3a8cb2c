from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from nozzle_solver.background.hamiltonian import hamiltonian  # noqa: E402
from nozzle_solver.background.integrator import classify_orbit  # noqa: E402
from nozzle_solver.core.logger import setup_logger  # noqa: E402
from nozzle_solver.model.models import GasParams  # noqa: E402

logger = setup_logger(__name__)

# keeps element ids stable between runs
matplotlib.rcParams["svg.hashsalt"] = "nozzle-solver"


def _level_set(gp: GasParams, d: float, rho: np.ndarray):
    e_sq = 2.0 * (d + hamiltonian(gp, rho))
    keep = e_sq >= 0.0
    e = np.sqrt(np.where(keep, e_sq, np.nan))
    return e, keep


def phase_portrait(gp: GasParams, path: Union[str, Path], n: int = 600) -> Path:
    """Draw the (rho, E) phase plane: orbit through the inlet state, separatrix, sonic line, equilibrium."""
    path = Path(path)
    orbit = classify_orbit(gp)
    rs = gp.rho_s
    rho = np.linspace(0.05 * rs, rs, n)

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    sep, _ = _level_set(gp, 0.0, rho)
    ax.plot(rho, sep, color="0.4", lw=1.0, ls="--", label="separatrix")
    ax.plot(rho, -sep, color="0.4", lw=1.0, ls="--")
    e, _ = _level_set(gp, orbit.discriminant, rho)
    ax.plot(rho, e, color="C0", lw=1.5, label=f"orbit ({orbit.orbit.value})")
    ax.plot(rho, -e, color="C0", lw=1.5)
    ax.axvline(rs, color="C3", lw=1.0, label=r"$\rho_s$")
    ax.plot([gp.b0], [0.0], marker="o", color="k", ls="none", label="equilibrium")
    ax.plot([gp.rho0], [gp.E0], marker="x", color="C1", ls="none", label="inlet state")
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel(r"$E$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Phase portrait written to {path}")
    return path
