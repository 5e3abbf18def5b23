"""Shared typing aliases."""

from __future__ import annotations

from collections.abc import Callable
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

RealVector: TypeAlias = npt.NDArray[np.float64]
RealMatrix: TypeAlias = npt.NDArray[np.float64]
ComplexVector: TypeAlias = npt.NDArray[np.complex128]
ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
LinearMap: TypeAlias = Callable[[ComplexVector], ComplexVector]
Evaluator: TypeAlias = Callable[[float], float]
