"""Programmable quantum gate array: a step-and-shift machine over a finite
gate set, a search compiler that turns target unitaries into gate words,
and executable checks of the classical-program contract."""

from .errors import (
    ContractViolation,
    DimensionMismatch,
    IndexOutOfRange,
    NotBijective,
    NotNormalized,
    NotUnitary,
    ParseError,
    PqgaError,
    ProgramTooLong,
)
from .gateset import GateSet, load_gateset, standard_universal_set
from .registers import StateVector, decode_program, encode_program, schmidt_check
from .synth import SynthesisResult, compile_via_root, program_product, verify_program
from .vm import MachineConfig, RunResult, run, run_loop

__version__ = "0.1.0"
