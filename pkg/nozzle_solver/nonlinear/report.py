import numpy as np
import orjson
import pandas as pd

from nozzle_solver.nonlinear.models import SolutionBundle

FIELD_COLUMNS = ("rho", "u1", "u2", "p", "S", "Phi", "K", "omega_curl")


def fields_frame(bundle: SolutionBundle) -> pd.DataFrame:
    """Long-format table of the physical fields, one row per grid node."""
    X1, X2 = np.meshgrid(bundle.x1, bundle.x2, indexing="ij")
    columns = {"x1": X1.ravel(), "x2": X2.ravel()}
    columns.update({name: bundle.fields[name].ravel() for name in FIELD_COLUMNS})
    columns["psi"] = bundle.psi.values(bundle.x2).ravel()
    columns["Psi"] = bundle.Psi.values(bundle.x2).ravel()
    columns["phi"] = bundle.phi.values(bundle.x2).ravel()
    return pd.DataFrame(columns)


def diagnostics_json(bundle: SolutionBundle) -> bytes:
    summary = bundle.diagnostics.as_dict()
    summary["norms"] = {
        "psi": bundle.psi.h1_norm(),
        "Psi": bundle.Psi.h1_norm(),
        "phi": bundle.phi.h1_norm(),
        "Y": bundle.Y.h1_norm(),
    }
    summary["grid"] = {"n1": int(bundle.x1.size), "n2": int(bundle.x2.size), "m": bundle.psi.n_modes - 1}
    return orjson.dumps(
        summary,
        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY,
    )
