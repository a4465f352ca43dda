"""Command-line entry point: ``thinplate <command> [options]``.

Options may also come from a JSON file passed with ``--config``; keys are
the long option names with dashes replaced by underscores.  Explicit flags
override the file.

Exit status: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O failure.
"""

import argparse
import contextlib
import json
import re
import sys
import warnings

import numpy as np

from . import io as tio
from ._validation import NonFiniteValueError
from .convergence import Experiment, convergence_report
from .eigenbasis import as_eps, ordered_spectrum
from .evolution import TruncationPolicy, TruncationWarning, solve, solve_physical
from .fd_oracle import FDConfig, discrete_l2, fd_solve
from .fields import PHYSICAL, GridField, sample
from .limit1d import evolve1d, sample1d
from .projection import project

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

DEFAULTS = {
    "eps": 0.5,
    "count": 16,
    "t": 0.1,
    "init": "constant",
    "nx1": 65,
    "nx2": 65,
    "nx": 129,
    "dt": 1e-4,
    "tol": 1e-10,
    "max_modes": 4096,
    "t_floor": 1e-6,
    "eps_list": "",
    "t0": 0.05,
    "t1": 0.5,
    "num_t": 64,
    "n_max": 10,
    "out": "-",
    "curves": None,
    "physical": False,
    "strict": False,
}


class ConfigError(ValueError):
    pass


class InputFileError(OSError):
    pass


_CALL = re.compile(r"^\s*(\w+)\s*(?:\(([^()]*)\))?\s*$")


def _split_top_level(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def _builtin(term, dims):
    """Callable for one selector term; ``dims`` is 1 or 2."""
    match = _CALL.match(term)
    if not match:
        return None
    name, args = match.group(1), match.group(2)
    try:
        nums = [float(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ConfigError(f"init: bad arguments in {term!r}") from None
    if name == "constant" and len(nums) <= 1:
        c = nums[0] if nums else 1.0
        return lambda *xs: np.full_like(xs[0], c)
    if name == "cos_x1" and len(nums) == 1:
        k = nums[0]
        return lambda *xs: np.cos(k * np.pi * xs[0])
    if dims == 2 and name == "cos_x2" and len(nums) == 1:
        k = nums[0]
        return lambda x1, x2: np.cos(k * np.pi * x2)
    if dims == 2 and name == "product" and len(nums) == 2:
        k, l = nums
        return lambda x1, x2: np.cos(k * np.pi * x1) * np.cos(l * np.pi * x2)
    return None


def init_function(selector, dims=2):
    """Parse a built-in initial-data selector, or return None if it is not one."""
    if selector.startswith("sum:"):
        terms = [_builtin(t, dims) for t in _split_top_level(selector[4:])]
        if not terms or any(t is None for t in terms):
            raise ConfigError(f"init: cannot parse sum selector {selector!r}")
        return lambda *xs: sum(t(*xs) for t in terms)
    return _builtin(selector, dims)


def load_init(cfg):
    f = init_function(cfg["init"], 2)
    if f is not None:
        return sample(f, cfg["nx1"], cfg["nx2"])
    with _reading(cfg["init"]) as fh:
        return tio.read_field_csv(fh)


def load_init1d(cfg):
    f = init_function(cfg["init"], 1)
    if f is not None:
        return sample1d(f, cfg["nx"])
    with _reading(cfg["init"]) as fh:
        return tio.read_field1d_csv(fh)


@contextlib.contextmanager
def _reading(path):
    try:
        fh = open(path)
    except OSError as exc:
        raise InputFileError(f"init: cannot read {path!r}: {exc.strerror}") from None
    with fh:
        try:
            yield fh
        except ValueError as exc:
            raise InputFileError(f"{path}: {exc}") from None


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise InputFileError(f"cannot write {path!r}: {exc.strerror}") from None
    with fh:
        yield fh


def _policy(cfg):
    return TruncationPolicy(cfg["tol"], cfg["max_modes"], cfg["t_floor"])


def cmd_eigen(cfg):
    with _output(cfg["out"]) as fh:
        tio.write_spectrum_csv(ordered_spectrum(cfg["eps"], cfg["count"]), fh)


def cmd_project(cfg):
    state = project(load_init(cfg), cfg["eps"], cfg["count"])
    with _output(cfg["out"]) as fh:
        tio.write_state_json(state, fh)


def cmd_solve(cfg):
    v0 = load_init(cfg)
    if cfg["physical"]:
        out = solve_physical(GridField(v0.values, PHYSICAL, cfg["eps"]), cfg["t"], _policy(cfg))
    else:
        out = solve(v0, cfg["eps"], cfg["t"], _policy(cfg))
    with _output(cfg["out"]) as fh:
        tio.write_field_csv(out, fh)


def cmd_solve1d(cfg):
    out = evolve1d(load_init1d(cfg), cfg["t"], _policy(cfg))
    with _output(cfg["out"]) as fh:
        tio.write_field1d_csv(out, fh)


def cmd_oracle(cfg):
    v0 = load_init(cfg)
    fd = fd_solve(v0, cfg["eps"], cfg["t"], FDConfig(cfg["dt"], v0.nx1, v0.nx2))
    spectral = solve(v0, cfg["eps"], cfg["t"], _policy(cfg))
    summary = {"eps": cfg["eps"], "t": cfg["t"], "dt": cfg["dt"], "l2_distance": discrete_l2(fd, spectral)}
    if cfg["out"] in (None, "-"):
        tio.write_field_csv(fd, sys.stdout)
        print(json.dumps(summary), file=sys.stderr)
    else:
        with _output(cfg["out"]) as fh:
            tio.write_field_csv(fd, fh)
        print(json.dumps(summary))


def cmd_converge(cfg):
    eps_list = cfg["eps_list"]
    if isinstance(eps_list, str):
        try:
            eps_list = [float(e) for e in eps_list.split(",") if e.strip()]
        except ValueError:
            raise ConfigError(f"eps_list: cannot parse {cfg['eps_list']!r}") from None
    for e in eps_list:
        as_eps(e)
    exp = Experiment(load_init(cfg), eps_list, cfg["t0"], cfg["t1"], cfg["num_t"], cfg["n_max"], _policy(cfg))
    report = convergence_report(exp)
    with _output(cfg["out"]) as fh:
        report.dump(fh)
    if cfg["curves"]:
        with _output(cfg["curves"]) as fh:
            report.write_curves(fh)


COMMANDS = {
    "eigen": (cmd_eigen, "print the first COUNT ordered eigenpairs as CSV", ["eps", "count"]),
    "project": (cmd_project, "write the spectral expansion of a field as JSON", ["eps", "count", "init", "nx1", "nx2"]),
    "solve": (
        cmd_solve,
        "solve the plate heat problem and write the field as CSV",
        ["eps", "t", "init", "nx1", "nx2", "policy", "physical"],
    ),
    "solve1d": (cmd_solve1d, "solve the 1-D limit problem", ["t", "init", "nx", "policy"]),
    "oracle": (
        cmd_oracle,
        "run the ADI finite-difference solver and report its distance to the spectral one",
        ["eps", "t", "init", "nx1", "nx2", "dt", "policy"],
    ),
    "converge": (
        cmd_converge,
        "eps sweep: eigenvalue gaps and 2-D vs 1-D solution errors",
        ["eps_list", "init", "nx1", "nx2", "t0", "t1", "num_t", "n_max", "policy", "curves"],
    ),
}

_OPTIONS = {
    "eps": dict(type=float, help="plate thickness"),
    "count": dict(type=int, help="number of ordered modes"),
    "t": dict(type=float, help="evolution time"),
    "init": dict(
        help="constant[(c)], cos_x1(k), cos_x2(k), product(k,l), sum:a,b,... or a CSV path"
    ),
    "nx1": dict(type=int, help="odd node count along x1"),
    "nx2": dict(type=int, help="odd node count along x2"),
    "nx": dict(type=int, help="odd node count of the 1-D grid"),
    "dt": dict(type=float, help="ADI time step"),
    "eps_list": dict(help="comma-separated thicknesses"),
    "t0": dict(type=float, help="first time of the geometric grid"),
    "t1": dict(type=float, help="last time of the geometric grid"),
    "num_t": dict(type=int, help="points in the time grid"),
    "n_max": dict(type=int, help="eigenvalues per thickness in the table"),
    "curves": dict(help="also write error curves as CSV here"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="thinplate", description="Spectral heat flow on thin Neumann plates.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, opts) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text, argument_default=None)
        p.add_argument("--config", help="JSON file with option values")
        p.add_argument("--out", help="output path (default: stdout)")
        for opt in opts:
            if opt == "policy":
                p.add_argument("--tol", type=float, help="L2 tail tolerance")
                p.add_argument("--max-modes", type=int, help="mode cap")
                p.add_argument("--t-floor", type=float, help="smallest time for decay-based truncation")
                p.add_argument("--strict", action="store_true", default=None, help="uncertified truncation is an error")
            elif opt == "physical":
                p.add_argument(
                    "--physical", action="store_true", default=None, help="treat the data as living on (0,1)x(0,eps)"
                )
            else:
                p.add_argument("--" + opt.replace("_", "-"), **_OPTIONS[opt])
    return parser


def resolve_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise InputFileError(f"config: cannot read {args.config!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {args.config}: {exc}") from None
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"config: unknown keys {sorted(unknown)}")
        cfg.update(file_cfg)
    for key, value in vars(args).items():
        if key in cfg and value is not None:
            cfg[key] = value
    if "eps" in cfg and cfg["eps"] is not None:
        cfg["eps"] = as_eps(cfg["eps"])
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        cfg = resolve_config(args)
        with warnings.catch_warnings():
            if cfg["strict"]:
                warnings.simplefilter("error", TruncationWarning)
            handler(cfg)
    except InputFileError as exc:
        print(f"thinplate: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"thinplate: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TruncationWarning, NonFiniteValueError, FloatingPointError) as exc:
        print(f"thinplate: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        print(f"thinplate: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
