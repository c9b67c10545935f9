"""CNF encoding of k-colorability and decoding of solver models.

Variable ``x(v, i)`` (0-based vertex and color) is DIMACS variable
``v * k + i + 1``. Clauses: one "some color" clause per vertex and one
"not both" clause per edge and color. There are no at-most-one clauses, so a
model may give a vertex several colors; decoding keeps the lowest.

Solving is left to an external program, see :func:`solve_external`.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .coloring import verify_coloring
from .graph import ContractError, Graph


class DecodeError(ValueError):
    pass


class InconsistentModelError(RuntimeError):
    """A decoded model is not a proper coloring (encoder or solver bug)."""


@dataclass
class CnfFormula:
    variable_count: int
    clauses: list[list[int]]

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_dimacs())

    def is_satisfied_by(self, true_vars: set[int]) -> bool:
        return all(any((lit > 0) == (abs(lit) in true_vars) for lit in c) for c in self.clauses)


def variable(v: int, color: int, k: int) -> int:
    return v * k + color + 1


def encode_k_coloring(g: Graph, k: int) -> CnfFormula:
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    clauses = [[variable(v, i, k) for i in range(k)] for v in range(g.vertex_count)]
    for u, v in g.edges:
        clauses.extend([-variable(u, i, k), -variable(v, i, k)] for i in range(k))
    return CnfFormula(g.vertex_count * k, clauses)


def parse_model(text: str) -> tuple[bool | None, set[int]]:
    """Read solver output; return ``(satisfiable, true variables)``.

    Accepts the SAT-competition format (``s SATISFIABLE`` plus ``v`` lines)
    and MiniSat's result file (``SAT`` then a literal line). ``None`` means
    the output states neither result.
    """
    status = None
    true_vars: set[int] = set()
    for raw in text.splitlines():
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        head = parts[0]
        if head == "s":
            status = {"SATISFIABLE": True, "UNSATISFIABLE": False}.get(" ".join(parts[1:]))
            continue
        if head in ("SAT", "SATISFIABLE"):
            status = True
            continue
        if head in ("UNSAT", "UNSATISFIABLE", "INDET"):
            status = False if head != "INDET" else None
            continue
        if head == "v":
            parts = parts[1:]
        try:
            lits = [int(x) for x in parts]
        except ValueError:
            continue
        true_vars.update(lit for lit in lits if lit > 0)
    return status, true_vars


def decode_model(g: Graph, k: int, model: Iterable[int]) -> list[int]:
    """Color each vertex with its lowest true color variable.

    ``model`` holds literals or true variable numbers; negative entries are
    ignored.
    """
    true_vars = {lit for lit in model if lit > 0}
    colors = []
    for v in range(g.vertex_count):
        c = next((i for i in range(k) if variable(v, i, k) in true_vars), None)
        if c is None:
            raise DecodeError(f"model gives vertex {v + 1} no color")
        colors.append(c)
    check = verify_coloring(g, colors)
    if not check.proper:
        raise InconsistentModelError(
            f"decoded coloring has {check.monochromatic_edges} monochromatic edges; "
            "the model does not satisfy the encoding"
        )
    return colors


@dataclass
class ExternalResult:
    satisfiable: bool | None
    coloring: list[int] | None
    elapsed: float


def solve_external(g: Graph, k: int, command: str, timeout: float | None = None) -> ExternalResult:
    """Run a SAT solver through a command template.

    ``command`` is formatted with ``{cnf}`` and ``{out}`` (temporary file
    paths), e.g. ``"minisat {cnf} {out}"``. The model is read from ``{out}``
    when the solver wrote it, otherwise from stdout. Resource limits such as
    a memory cap belong in the template. A timeout is reported as an
    undecided result.
    """
    with tempfile.TemporaryDirectory() as tmp:
        cnf = Path(tmp) / "formula.cnf"
        out = Path(tmp) / "model.txt"
        encode_k_coloring(g, k).write(cnf)
        argv = shlex.split(command.format(cnf=cnf, out=out))
        start = time.perf_counter()
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return ExternalResult(None, None, time.perf_counter() - start)
        elapsed = time.perf_counter() - start
        text = out.read_text() if out.exists() and out.stat().st_size else proc.stdout
    status, true_vars = parse_model(text)
    if status:
        return ExternalResult(True, decode_model(g, k, true_vars), elapsed)
    return ExternalResult(status, None, elapsed)
