"""Metric-level quantities of a Finsler structure at a chart point."""

from __future__ import annotations

import numpy as np

from .chart import ChartPoint
from .frame import point_frame


def lagrangian(F, p: ChartPoint) -> float:
    return point_frame(F, p).L


def energy(F, p: ChartPoint) -> float:
    return point_frame(F, p).E


def metric_tensor(F, p: ChartPoint) -> np.ndarray:
    """Fundamental tensor g_ij(x, y), symmetric positive definite."""
    return point_frame(F, p).g.copy()


def metric_inverse(F, p: ChartPoint) -> np.ndarray:
    return point_frame(F, p).g_inv.copy()


def cartan_tensor(F, p: ChartPoint) -> np.ndarray:
    """All-lower Cartan tensor C_ijk, totally symmetric, y-orthogonal."""
    return point_frame(F, p).C3.copy()


def ell_form(F, p: ChartPoint) -> np.ndarray:
    """Unit covector ell_i = dL/dy^i; satisfies ell_i y^i = L."""
    return point_frame(F, p).ell.copy()


def phi_map(F, p: ChartPoint) -> np.ndarray:
    """Projector phi^i_j onto the g-orthogonal complement of y."""
    return point_frame(F, p).phi.copy()
