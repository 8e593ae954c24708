"""``pqga`` command line: compile, run, verify, info.

Exit codes: 0 ok, 1 not achieved / verification failed, 2 unreadable or
malformed input, 3 well-formed but invalid input (non-unitary target,
program longer than its capacity).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileio, synth
from .errors import IndexOutOfRange, NotNormalized, NotUnitary, ParseError, ProgramTooLong
from .gateset import load_gateset, onehot_register_width, program_register_width
from .vm import MachineConfig, run_loop

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3
CHOP = 1e-12


def fmt(x: float) -> str:
    """12 significant digits; values below 1e-12 in magnitude print as 0."""
    x = float(x)
    if abs(x) < CHOP:
        x = 0.0
    return f"{x:.12g}"


def fmt_complex(z: complex) -> str:
    re, im = fmt(z.real), fmt(z.imag)
    sign = "-" if im.startswith("-") else "+"
    return f"{re} {sign} {im.lstrip('-')}i"


def _program_text(gs, words) -> str:
    return " ".join(gs.names[w] for w in words) or "(empty)"


def cmd_compile(args) -> int:
    gs = load_gateset(args.gateset)
    target = fileio.read_matrix(args.target)
    result = synth.compile(target, gs, args.epsilon, args.max_length)
    k = args.k or max(len(result.program), 1)
    print(f"achieved: {str(result.achieved).lower()}")
    print(f"distance: {fmt(result.distance)}")
    print(f"epsilon: {fmt(args.epsilon)}")
    print(f"length: {len(result.program)}")
    print(f"nodes_expanded: {result.nodes_expanded}")
    print(f"program: {_program_text(gs, result.program)}")
    if args.output:
        if len(result.program) > k:
            raise ProgramTooLong(f"program of length {len(result.program)} exceeds --k {k}")
        prog = fileio.ProgramFile(gs.label, k, tuple(result.names(gs)))
        fileio.write_program(prog, args.output)
        print(f"wrote: {args.output}")
    return EXIT_OK if result.achieved else EXIT_FAIL


def cmd_run(args) -> int:
    prog = fileio.read_program(args.program)
    gs, words = prog.resolve()
    k = args.k or prog.k
    if args.data is not None:
        data = fileio.read_vector(args.data)
        if data.size != gs.N:
            raise ParseError(f"data has {data.size} amplitudes, gate set acts on {gs.N}")
    else:
        if not 0 <= args.basis < gs.N:
            raise IndexOutOfRange(f"basis index {args.basis} outside [0, {gs.N})")
        data = np.zeros(gs.N, dtype=complex)
        data[args.basis] = 1.0
    cfg = MachineConfig(k, gs.M, gs.N)
    result = run_loop(cfg, gs, words, data, args.loop)

    print(f"gateset: {gs.label}")
    print(f"k: {k}  loop: {args.loop}  steps: {k * args.loop}")
    print(f"program: {_program_text(gs, words)}")
    if args.trace:
        for t, slots in enumerate(result.trace[:-1]):
            active = gs.names[slots[0]]
            shown = ",".join(gs.names[w] for w in reversed(slots))
            print(f"step {t}: slots(P_k..P_1)=[{shown}] active={active}")
    print("data:")
    for i, z in enumerate(result.data_state):
        print(f"  |{i}>  {fmt_complex(z)}")
    print(f"program_restored: {str(result.program_restored).lower()}")
    halt = "none" if result.halt_step is None else str(result.halt_step)
    print(f"halt_step: {halt}")
    return EXIT_OK


def cmd_verify(args) -> int:
    prog = fileio.read_program(args.program)
    gs, words = prog.resolve()
    target = fileio.read_matrix(args.target)
    if target.shape != (gs.N, gs.N):
        raise ParseError(f"target is {target.shape}, gate set acts on {gs.N} levels")
    check = synth.verify_program(words, gs, target, args.epsilon)
    print(f"distance: {fmt(check.distance)}")
    print(f"epsilon: {fmt(args.epsilon)}")
    print("ok" if check.ok else "fail")
    return EXIT_OK if check.ok else EXIT_FAIL


def cmd_info(args) -> int:
    spec = args.spec or args.gateset
    gs = load_gateset(spec)
    m = program_register_width(gs.M)
    print(f"gateset: {gs.label}")
    print(f"n: {gs.n}")
    print(f"N: {gs.N}")
    print(f"M: {gs.M}")
    print(f"m: {m}")
    print(f"onehot_width: {onehot_register_width(gs.M)} (one line per gate incl. idle: {gs.M})")
    if gs.M == 2 * gs.n + 2:
        print(f"note: M = 2n+2 here, so m = ceil(log2(2n+2)) = {m}")
    print("gates:")
    for i, name in enumerate(gs.names):
        print(f"  {i}: {name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pqga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="synthesize a program approximating a target unitary")
    p.add_argument("target", help="matrix file with the target unitary")
    p.add_argument("--gateset", default="std-1q")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--max-length", type=int, default=synth.DEFAULT_MAX_LENGTH)
    p.add_argument("--k", type=int, default=None, help="program capacity written to the file")
    p.add_argument("--output", "-o", default=None, help="where to write the program file")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="execute a program on the machine")
    p.add_argument("program")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", default=None, help="vector file with the data state")
    src.add_argument("--basis", type=int, default=0, help="data basis index (default 0)")
    p.add_argument("--k", type=int, default=None, help="override the file's capacity")
    p.add_argument("--loop", type=int, default=1, help="repeat the k-step cycle this many times")
    p.add_argument("--trace", action="store_true", help="print the slot contents per step")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check a program against a target")
    p.add_argument("program")
    p.add_argument("target")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("info", help="describe a gate set")
    p.add_argument("spec", nargs="?", default=None, help="builtin name or manifest path")
    p.add_argument("--gateset", default="std-1q")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotUnitary, NotNormalized, ProgramTooLong, IndexOutOfRange, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
