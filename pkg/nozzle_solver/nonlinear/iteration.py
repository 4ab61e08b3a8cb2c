"""Picard iterations for the irrotational and rotational nozzle problems.

Each step freezes the second-order coefficients and the sources at the current
iterate, solves the linear (psi, Psi) problem, and, for rotational flow, the
stream-potential Poisson problem. The rotational solver nests this inner map
inside an outer map on the entropy perturbation Y, which is advanced by
transporting the inlet entropy along the streamlines of the inner fixed point.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from nozzle_solver.background.models import Background1D
from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import IterateEscapedSet, LengthExceedsCritical, MaxIterExceeded, ValidationError
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linearize import (
    BarCoeffs,
    irrotational_coeffs,
    rhs_f1,
    rhs_f2,
    rotational_coeffs,
    rotational_rhs,
)
from nozzle_solver.linsolve import LinearProblem, solve_linear, solve_poisson_phi
from nozzle_solver.multiplier import constants_for, critical_length
from nozzle_solver.nonlinear.models import (
    BoundaryData,
    Diagnostics,
    IterationConfig,
    LagrangianMap,
    SolutionBundle,
)
from nozzle_solver.nonlinear.reconstruct import perturbation_point, reconstruct, residuals
from nozzle_solver.nonlinear.transport import transport_solve
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D, check_compatibility, phi_en, project, x2_grid

settings = get_settings()
logger = setup_logger(__name__)


@dataclass
class Iterate:
    psi: Field2D
    Psi: Field2D
    phi: Field2D

    def distance(self, other: "Iterate") -> float:
        return (
            (self.psi - other.psi).h1_norm()
            + (self.Psi - other.Psi).h1_norm()
            + (self.phi - other.phi).h1_norm()
        )

    def norms(self) -> Tuple[float, float]:
        return self.psi.h1_norm() + self.Psi.h1_norm(), self.phi.h1_norm()


class FixedPointSolver:
    def __init__(
        self,
        bg: Background1D,
        data: BoundaryData,
        cfg: Optional[IterationConfig] = None,
        x2: Optional[np.ndarray] = None,
    ):
        """
        Prepare the iterations on the background grid

        Args:
            bg (Background1D): Background sampled on the x1 grid of the solve
            data (BoundaryData): Boundary-data perturbations with truncation data.m
            cfg (IterationConfig): Radii and tolerances
            x2 (np.ndarray): Uniform x2 grid, settings.DEFAULT_N2 nodes by default
        """
        self.bg = bg
        self.bar = BarCoeffs.from_background(bg)
        self.col = self.bar.column()
        self.data = data
        self.cfg = cfg or IterationConfig(fp_tol=settings.FP_TOL, max_iter=settings.MAX_ITER)
        self.x2 = x2_grid() if x2 is None else x2
        self.m = data.m
        self.x1 = self.bar.x1
        self.b_delta = data.b_delta(self.x1, self.x2)
        self.logger = logger

    def _check_length(self) -> None:
        if not self.cfg.check_length:
            return
        rc = constants_for(self.bg.gas, 0.0, self.cfg.eps0)
        limit = critical_length(rc).length
        if self.bg.L > limit:
            raise LengthExceedsCritical(
                f"L exceeds the critical length {limit:.6g}; no weight makes the linear problem well posed",
                L=self.bg.L,
                limit=limit,
            )

    def _check_compatibility(self) -> None:
        report = check_compatibility(self.data.compatibility_data())
        if not report.passed:
            names = sorted({c.name for c in report.failures()})
            raise ValidationError(f"boundary data violate the wall compatibility conditions: {', '.join(names)}")

    def _zero(self) -> Iterate:
        return Iterate(
            psi=Field2D.zeros(BasisKind.COSINE, self.m + 1, self.x1),
            Psi=Field2D.zeros(BasisKind.COSINE, self.m + 1, self.x1),
            phi=Field2D.zeros(BasisKind.SINE, 2 * self.m, self.x1),
        )

    def _zero_Y(self) -> Field2D:
        return Field2D.zeros(BasisKind.COSINE, self.m + 1, self.x1)

    def _project(self, values: np.ndarray, kind: BasisKind = BasisKind.COSINE, m: Optional[int] = None) -> Field2D:
        full = np.broadcast_to(values, (self.x1.size, self.x2.size))
        return Field2D.from_grid(full, self.x1, self.x2, kind, self.m if m is None else m)

    def _linear_step(self, a12, a22, f1, f2, g1: CosineSeries, psi0: Optional[CosineSeries]):
        shape = (self.x1.size, self.x2.size)
        problem = LinearProblem(
            bar=self.bar,
            x2=self.x2,
            a12=np.broadcast_to(a12, shape).copy(),
            a22=np.broadcast_to(a22, shape).copy(),
            f1=self._project(f1),
            f2=self._project(f2),
            g1=g1,
            g2=self.data.dE_en,
            psi_ex=self.data.dPhi_ex,
            m=self.m,
            psi0=psi0,
        )
        return solve_linear(problem)

    def _irrotational_map(self, it: Iterate) -> Iterate:
        pt = perturbation_point(it.psi, it.Psi, it.phi, self._zero_Y(), self.x2)
        a12, a22 = irrotational_coeffs(pt, self.col)
        f1 = rhs_f1(pt, self.col)
        f2 = rhs_f2(pt, self.col, self.b_delta)
        solution = self._linear_step(a12, a22, f1, f2, self.data.du_en, None)
        return Iterate(solution.psi, solution.Psi, it.phi)

    def _rotational_map(self, it: Iterate, Y: Field2D) -> Iterate:
        pt = perturbation_point(it.psi, it.Psi, it.phi, Y, self.x2)
        a12, a22, _, _ = rotational_coeffs(pt, self.col)
        f1, f2, f3 = rotational_rhs(pt, self.col, self.b_delta)

        phi = solve_poisson_phi(self._project(f3, BasisKind.SINE, 2 * self.m))
        # the inlet slope of psi absorbs the rotational part of u1
        inlet = self.data.du_en.evaluate(self.x2) - phi.trace(0).evaluate(self.x2, 1)
        g1 = project(inlet, self.x2, BasisKind.COSINE, self.m)
        psi0 = phi_en(self.data.v_en, self.x2, self.m)
        solution = self._linear_step(a12, a22, f1, f2, g1, psi0)
        return Iterate(solution.psi, solution.Psi, phi)

    def _guard(self, it: Iterate, Y: Optional[Field2D] = None) -> None:
        pair, phi = it.norms()
        radius = self.cfg.delta_p or self.cfg.delta
        if pair > radius:
            raise IterateEscapedSet(f"(psi, Psi) left the iteration set: H1 norm {pair:.4g} > {radius:.4g}", value=pair)
        if self.cfg.delta_v is not None and phi > self.cfg.delta_v:
            raise IterateEscapedSet(f"stream potential left its ball: {phi:.4g} > {self.cfg.delta_v:.4g}", value=phi)
        if Y is not None and self.cfg.delta_e is not None and Y.h1_norm() > self.cfg.delta_e:
            raise IterateEscapedSet(f"entropy iterate left its ball: {Y.h1_norm():.4g} > {self.cfg.delta_e:.4g}")

    def _picard(self, step, start: Iterate, label: str, Y: Optional[Field2D] = None) -> Tuple[Iterate, List[float]]:
        current = start
        history: List[float] = []
        for k in range(1, self.cfg.max_iter + 1):
            following = step(current)
            difference = following.distance(current)
            history.append(difference)
            self.logger.info(f"{label} iteration {k}: successive difference {difference:.3e}")
            self._guard(following, Y)
            current = following
            if difference < self.cfg.fp_tol:
                return current, history
        raise MaxIterExceeded(
            f"{label} iteration did not reach {self.cfg.fp_tol:.1e} in {self.cfg.max_iter} steps",
            last=history[-1],
        )

    def _bundle(
        self,
        it: Iterate,
        Y: Field2D,
        diagnostics: Diagnostics,
        transport: Optional[LagrangianMap] = None,
    ) -> SolutionBundle:
        fields = reconstruct(it.psi, it.Psi, it.phi, Y, self.x2, self.bar, transport)
        measured = residuals(fields, it.Psi, self.x2, self.bar, self.data)
        measured.iterations = diagnostics.iterations
        measured.outer_iterations = diagnostics.outer_iterations
        measured.history = diagnostics.history
        measured.outer_history = diagnostics.outer_history
        measured.constants = {
            name: value
            for name, value in (("C*", self.cfg.c_star), ("C**", self.cfg.c_2star), ("sigma", self.cfg.sigma))
            if value is not None
        }
        if not (measured.supersonic_margin > 0.0 and measured.min_u1 > 0.0 and measured.min_rho > 0.0):
            raise IterateEscapedSet(
                "the converged state is not supersonic with positive velocity and density",
                margin=measured.supersonic_margin,
            )
        return SolutionBundle(
            psi=it.psi,
            Psi=it.Psi,
            phi=it.phi,
            Y=Y,
            x2=self.x2,
            fields=fields,
            diagnostics=measured,
            labels=transport,
        )

    def _start(self, initial: Optional[Tuple[Field2D, Field2D]]) -> Iterate:
        start = self._zero()
        if initial is not None:
            start = Iterate(initial[0], initial[1], start.phi)
        return start

    def solve_irrotational(self, initial: Optional[Tuple[Field2D, Field2D]] = None) -> SolutionBundle:
        """
        Fixed point of (psi~, Psi~) -> solution of the linear problem frozen at (psi~, Psi~)

        Args:
            initial: Optional starting (psi, Psi); zero by default

        Returns:
            SolutionBundle with phi = 0 and Y = 0

        Raises:
            LengthExceedsCritical, IterateEscapedSet, MaxIterExceeded, SonicDenominator
        """
        try:
            self.logger.info(f"Irrotational solve: L={self.bg.L:.6g}, n1={self.x1.size}, n2={self.x2.size}, m={self.m}")
            self._check_length()
            self._check_compatibility()
            if not self.data.irrotational:
                self.logger.warning("entropy and tangential inlet data are ignored by the irrotational solve")
            fixed, history = self._picard(self._irrotational_map, self._start(initial), "irrotational")
            diagnostics = Diagnostics(iterations=len(history), history=history)
            bundle = self._bundle(fixed, self._zero_Y(), diagnostics)
            self.logger.info(f"Irrotational solve converged in {len(history)} iterations")
            return bundle
        except Exception as e:
            self.logger.error(f"Error in irrotational solve: {str(e)}")
            raise

    def solve_rotational(self, initial: Optional[Tuple[Field2D, Field2D]] = None) -> SolutionBundle:
        """
        Nested fixed point: the inner map on (psi, Psi, phi) for a frozen entropy iterate Y~,
        then Y = (S_en - S0) transported along the momentum of the inner fixed point

        Raises:
            LengthExceedsCritical, IterateEscapedSet, MaxIterExceeded, SonicDenominator,
            StagnationDenominator, NonMonotoneStream, DivergenceTooLarge
        """
        try:
            self.logger.info(f"Rotational solve: L={self.bg.L:.6g}, n1={self.x1.size}, n2={self.x2.size}, m={self.m}")
            self._check_length()
            self._check_compatibility()
            inner = self._start(initial)
            Y = self._zero_Y()
            inner_total: List[float] = []
            outer_history: List[float] = []
            transport = None
            for k in range(1, self.cfg.max_iter + 1):
                inner, history = self._picard(
                    lambda it, Y=Y: self._rotational_map(it, Y), inner, f"rotational inner (outer {k})", Y
                )
                inner_total.extend(history)
                pt = perturbation_point(inner.psi, inner.Psi, inner.phi, Y, self.x2)
                _, _, M, _ = rotational_coeffs(pt, self.col)
                M = tuple(np.broadcast_to(c, (self.x1.size, self.x2.size)) for c in M)
                following, transport = transport_solve(M, self.data.dS_en, self.x1, self.x2, self.m)
                difference = (following - Y).h1_norm()
                outer_history.append(difference)
                self.logger.info(f"rotational outer iteration {k}: successive difference {difference:.3e}")
                Y = following
                self._guard(inner, Y)
                if difference < self.cfg.fp_tol:
                    break
            else:
                raise MaxIterExceeded(
                    f"outer entropy iteration did not reach {self.cfg.fp_tol:.1e} in {self.cfg.max_iter} steps",
                    last=outer_history[-1],
                )
            diagnostics = Diagnostics(
                iterations=len(inner_total),
                outer_iterations=len(outer_history),
                history=inner_total,
                outer_history=outer_history,
            )
            bundle = self._bundle(inner, Y, diagnostics, transport)
            self.logger.info(f"Rotational solve converged in {len(outer_history)} outer iterations")
            return bundle
        except Exception as e:
            self.logger.error(f"Error in rotational solve: {str(e)}")
            raise


def solve_irrotational(
    data: BoundaryData,
    bg: Background1D,
    cfg: Optional[IterationConfig] = None,
    x2: Optional[np.ndarray] = None,
    initial: Optional[Tuple[Field2D, Field2D]] = None,
) -> SolutionBundle:
    return FixedPointSolver(bg, data, cfg, x2).solve_irrotational(initial)


def solve_rotational(
    data: BoundaryData,
    bg: Background1D,
    cfg: Optional[IterationConfig] = None,
    x2: Optional[np.ndarray] = None,
    initial: Optional[Tuple[Field2D, Field2D]] = None,
) -> SolutionBundle:
    return FixedPointSolver(bg, data, cfg, x2).solve_rotational(initial)
