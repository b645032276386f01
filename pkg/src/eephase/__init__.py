"""Relativistic Born phase shifts for screened electron-electron scattering
in total-spin-zero channels."""

from .kinematics import CONSTANTS, ForwardSingularity, PhysicsConstants, build_kinematics
from .operator_amplitude import AmplitudeMode, Channels, ExchangeTreatment, Vertex
from .partial_wave import PhaseShiftRecord, phase_shift, yukawa_born_oracle
from .sweep import SweepConfig, run_sweep, write_output

__version__ = "0.1.0"
