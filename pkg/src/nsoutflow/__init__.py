"""Wave patterns, simulation and diagnostics for the 1-D compressible
Navier-Stokes outflow problem on the half-line."""

from .errors import (
    ConfigError, NSOutflowError, RootBracketError, ShootingError, SimulationAbort,
    StationaryDivergence, ValidationError,
)
from .gas import (
    EndStates, FluidState, GasModel, Profile, entropy, internal_energy, lambda3,
    mach_at_infinity, pressure, specific_total_energy,
)
from .burgers import BurgersProfile, exact_solution, initial_profile, normalization_constant
from .waves import (
    RarefactionWave, StationaryWave, SuperpositionWave, admissibility_check,
    stationary_solve, stationary_stable_boundary,
)
from .solver import Grid, Perturbation, Scenario, SimField, run

__version__ = "0.1.0"
