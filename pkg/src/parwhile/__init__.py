"""Semantics workbench for a shared-variable concurrent imperative
language: big-step, giant-step, small-step and trace-based operational
semantics over lazy computation trees, with bounded bisimilarity
checking and differential testing."""

from .bigstep import (
    COOPERATIVE,
    PREEMPTIVE,
    SchedMode,
    close,
    eval_stmt,
)
from .corpus import gen_corpus
from .equiv import (
    Verdict,
    converges,
    diverges,
    strong_bisim,
    strong_bisim_g,
    weak_bisim,
)
from .giantstep import close_g, default_probes, eval_g, flatten_yieldfree
from .lang import ParseError, State, Stmt, parse, parse_state, pretty
from .resumption import (
    Res,
    delta_inf,
    delta_n,
    prefix,
    prefix_g,
    render,
    to_record,
)
from .smallstep import gmmred, mmred, red
from .tracesem import (
    ResumeOracle,
    Schedule,
    close_trace,
    close_trace_g,
    is_path_of,
    is_path_of_g,
    trace_eval,
    trace_eval_g,
)

__all__ = [
    "COOPERATIVE",
    "PREEMPTIVE",
    "ParseError",
    "Res",
    "ResumeOracle",
    "SchedMode",
    "Schedule",
    "State",
    "Stmt",
    "Verdict",
    "close",
    "close_g",
    "close_trace",
    "close_trace_g",
    "converges",
    "default_probes",
    "delta_inf",
    "delta_n",
    "diverges",
    "eval_g",
    "eval_stmt",
    "flatten_yieldfree",
    "gen_corpus",
    "gmmred",
    "is_path_of",
    "is_path_of_g",
    "mmred",
    "parse",
    "parse_state",
    "prefix",
    "prefix_g",
    "pretty",
    "red",
    "render",
    "strong_bisim",
    "strong_bisim_g",
    "to_record",
    "trace_eval",
    "trace_eval_g",
    "weak_bisim",
]

__version__ = "0.1.0"
