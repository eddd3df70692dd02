"""Bounded C-like programs: parsing, unrolling per failing test,
relaxation and compilation to a weighted trace formula."""

from faultloc.minilang.ast import Program, render_program
from faultloc.minilang.compile import BITWIDTHS, TraceFormula, compile_trace_formula
from faultloc.minilang.instrument import (
    InstrumentedProgram,
    RelaxationMap,
    RelaxEntry,
    assign_weights,
    instrument_program,
)
from faultloc.minilang.interp import Stuck, run_program
from faultloc.minilang.parser import parse_program, read_program
from faultloc.minilang.unroll import TestCase, UnrolledProgram, dump_tests, load_tests, unroll_program

DEFAULT_UNWIND = 8
DEFAULT_BITWIDTH = 16
DEFAULT_IO_PENALTY = 1000


def build_trace_formula(program, tests, unwind: int = DEFAULT_UNWIND,
                        bitwidth: int = DEFAULT_BITWIDTH, weights: str = "hierarchical",
                        io_penalty: int = DEFAULT_IO_PENALTY, **weight_opts) -> TraceFormula:
    """Whole pipeline; ``program`` is source text or a parsed :class:`Program`."""
    if isinstance(program, str):
        program = parse_program(program)
    if weights not in ("flat", "hierarchical"):
        raise ValueError(f"unknown weight mode {weights!r}")
    unrolled = unroll_program(program, tests)
    inst, rmap = instrument_program(unrolled, unwind)
    rmap = assign_weights(rmap, weights == "hierarchical", io_penalty, **weight_opts)
    return compile_trace_formula(inst, rmap, unwind, bitwidth)


def program_problem(program, tests, **kw):
    tf = build_trace_formula(program, tests, **kw)
    return tf.problem()


__all__ = [
    "BITWIDTHS", "DEFAULT_BITWIDTH", "DEFAULT_IO_PENALTY", "DEFAULT_UNWIND",
    "InstrumentedProgram", "Program", "RelaxEntry", "RelaxationMap", "Stuck", "TestCase",
    "TraceFormula", "UnrolledProgram", "assign_weights", "build_trace_formula",
    "compile_trace_formula", "dump_tests", "instrument_program", "load_tests", "parse_program",
    "program_problem", "read_program", "render_program", "run_program", "unroll_program",
]
