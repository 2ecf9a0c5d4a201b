import typing

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

BoolArray = npt.NDArray[np.bool_]

ScalarOrArray = typing.Union[float, FloatArray]

SimulationMode = typing.Literal[
    "full",
    "isothermal",
    "heat_only",
    "phase_only",
]

InitialConditionName = typing.Literal[
    "flat",
    "bubble",
    "stratified",
    "eigenmode-theta",
    "random",
    "perturbed-interface",
]

DecayModel = typing.Literal["exponential", "algebraic"]

EquilibriumMethod = typing.Literal["newton", "gradient_flow"]

BoundaryKind = typing.Literal["dirichlet", "neumann"]

# Manufactured field callable: f(x, y, t) evaluated on numpy arrays.
FieldFunction = typing.Callable[
    [FloatArray, FloatArray, float],
    FloatArray,
]
