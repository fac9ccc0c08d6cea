"""Command-line entry point: ``python -m reeb_dbar <verb> [--config run.json]``.

Verbs: ``obstruction``, ``decompose``, ``verify``, ``dump-cutoffs``.
Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 property-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass, fields

import numpy as np

from .approximation import GridSpec
from .cutoffs import CutoffFamily, phi, psi, rho0
from .errors import ConfigError, ReebError
from .geometry import FoliationParams, builtin_form, builtin_names, combine
from .properties import run_all, suggested_J_max
from .quadrature import PolarQuadSpec
from .solver import SolverConfig, decompose, obstruction

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PROPERTY = 0, 2, 3, 4
SIG_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; ``eps`` and ``R_out`` default to lambda-scaled values."""

    lam: float = 0.5
    R: float = 1.0
    eps: float | None = None
    R_out: float | None = None
    n_r: int = 256
    n_theta: int = 256
    r_max: float = 4.0
    J_max: int = 4
    tol: float = 1e-6
    residual_tol: float = 1e-3
    mode: str = "direct"
    t_window: float = 1.0
    n_t: int = 17
    grid_radial: int = 64
    grid_angular: int = 64
    fd_step: float = 1e-4
    form: str = "omega0"
    output: str | None = None
    csv: str | None = None
    dump_j_max: int = 3
    dump_points: int = 401

    # JSON key "lambda" maps to the field ``lam``
    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["eps"], d["R_out"] = self.family().eps, self.family().R_out
        return d

    def family(self) -> CutoffFamily:
        # lambda-scaled defaults reproduce eps = 0.25, R_out = 1.75 at lambda = 0.5
        gap = self.R * (1.0 / self.lam - 1.0) if 0 < self.lam < 1 else 0.0
        eps = self.eps if self.eps is not None else 0.25 * gap
        R_out = self.R_out if self.R_out is not None else self.R + 0.75 * gap
        return CutoffFamily(self.R, eps, R_out, self.lam)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            family=self.family(),
            quad=PolarQuadSpec(self.n_r, self.n_theta, self.r_max),
            grid=GridSpec(self.grid_radial, self.grid_angular, self.n_t, self.t_window),
            J_max=self.J_max, tol=self.tol, residual_tol=self.residual_tol, mode=self.mode,
            fd_step=self.fd_step)

    def validate(self) -> None:
        try:
            FoliationParams(self.lam)
            self.solver_config()
            parse_form(self.form)
        except ReebError as exc:
            raise ConfigError(str(exc)) from None
        if self.dump_j_max < 0 or self.dump_points < 2:
            raise ConfigError("dump_j_max must be >= 0 and dump_points >= 2")
        for path in (self.output, self.csv):
            if path is not None:
                parent = os.path.dirname(os.path.abspath(path))
                if not os.path.isdir(parent):
                    raise ConfigError(f"output directory does not exist: {parent}")


# form mini-language --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[jJ]?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"cannot parse form at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


class _Parser:
    """expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
    factor := ('+'|'-') factor | number | name | '(' expr ')'.

    Values are scalars or dicts {builtin name: coefficient}.
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = 1.0 if self.take()[1] == "+" else -1.0
            val = _add(val, _scale(sign, self.term()))
        return val

    def term(self):
        val = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            val = _mul(val, self.factor())
        return val

    def factor(self):
        kind, text = self.take()
        if kind == "op" and text in "+-":
            return _scale(1.0 if text == "+" else -1.0, self.factor())
        if kind == "num":
            return complex(text)
        if kind == "name":
            if text not in builtin_names():
                raise ConfigError(f"unknown form {text!r}; available: {', '.join(builtin_names())}")
            return {text: 1.0 + 0j}
        if (kind, text) == ("op", "("):
            val = self.expr()
            if self.take() != ("op", ")"):
                raise ConfigError("unbalanced parentheses in form")
            return val
        raise ConfigError(f"unexpected token {text!r} in form")


def _scale(c, v):
    return {k: c * x for k, x in v.items()} if isinstance(v, dict) else c * v


def _add(a, b):
    if isinstance(a, dict) and isinstance(b, dict):
        out = dict(a)
        for k, x in b.items():
            out[k] = out.get(k, 0) + x
        return out
    if isinstance(a, dict) or isinstance(b, dict):
        scalar = b if isinstance(a, dict) else a
        if scalar != 0:
            raise ConfigError("a form cannot contain a bare nonzero scalar term")
        return a if isinstance(a, dict) else b
    return a + b


def _mul(a, b):
    if isinstance(a, dict) and isinstance(b, dict):
        raise ConfigError("product of two forms is not a (0,1)-form")
    if isinstance(a, dict):
        return _scale(b, a)
    return _scale(a, b)


def parse_form(text: str):
    """Parse ``"c1*omega0 + c2*exact_g0"``-style linear combinations of built-in forms."""
    tokens = _tokenize(text)
    if not tokens:
        raise ConfigError("empty form")
    parser = _Parser(tokens)
    val = parser.expr()
    if parser.i != len(tokens):
        raise ConfigError(f"trailing input in form {text!r}")
    if not isinstance(val, dict):
        if val != 0:
            raise ConfigError("a bare nonzero scalar is not a form")
        return builtin_form("zero")
    for name in val:
        obj = builtin_form(name)
        if getattr(obj, "weight", 1) != 1:
            raise ConfigError(f"{name!r} has weight {obj.weight}; forms need weight 1")
    return combine([(c, builtin_form(name)) for name, c in val.items()])


# deterministic output ------------------------------------------------------

def _num(x: float):
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    x = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if x == 0 else x


def canonical(obj):
    """Round every float to 12 significant digits; complex numbers become {re, im}."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(canonical(obj), indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(_num(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


# verbs ---------------------------------------------------------------------

def cmd_obstruction(cfg: RunConfig) -> tuple[int, dict, str | None]:
    family, spec = cfg.family(), PolarQuadSpec(cfg.n_r, cfg.n_theta, cfg.r_max)
    f = parse_form(cfg.form)
    I_f = obstruction(f, family, spec)
    I_w = obstruction(builtin_form("omega0"), family, spec)
    return EXIT_OK, {"verb": "obstruction", "form": cfg.form, "I_f": I_f,
                     "I_omega0": I_w, "c": I_f / I_w}, None


def cmd_decompose(cfg: RunConfig) -> tuple[int, dict, str | None]:
    sc = cfg.solver_config()
    rep = decompose(parse_form(cfg.form), sc)
    accepted = rep.accepted(sc.residual_tol)
    record = {"verb": "decompose", "form": cfg.form, "class_coeff": rep.class_coeff,
              "residuals": rep.residuals, "accepted": accepted,
              "diagnostics": rep.diagnostics, "config": cfg.to_dict()}
    csv_text = None
    if cfg.csv is not None:
        grid, pde, inv = rep.fields["grid"], rep.fields["pde"], rep.fields["invariance"]
        h = rep.primitive(grid.z, grid.t)
        rows = zip(grid.z.real, grid.z.imag, grid.t, h.real, h.imag, pde, inv)
        csv_text = _csv_text(["re_z", "im_z", "t", "re_h", "im_h", "pde_residual",
                              "inv_residual"], rows)
    return (EXIT_OK if accepted else EXIT_NUMERIC), record, csv_text


def cmd_verify(cfg: RunConfig) -> tuple[int, dict, str | None]:
    family = cfg.family()
    results = run_all(family, PolarQuadSpec(cfg.n_r, cfg.n_theta, cfg.r_max))
    table = [{"name": r.name, "passed": r.passed, "value": r.value,
              "threshold": r.threshold, "detail": r.detail} for r in results]
    ok = all(r.passed for r in results)
    record = {"verb": "verify", "all_passed": ok, "properties": table,
              "diagnostics": {"suggested_J_max": suggested_J_max(cfg.lam)},
              "config": cfg.to_dict()}
    return (EXIT_OK if ok else EXIT_PROPERTY), record, None


def cmd_dump_cutoffs(cfg: RunConfig) -> tuple[int, dict, str | None]:
    family = cfg.family()
    J = cfg.dump_j_max
    r = np.linspace(0.0, 1.1 * family.outer_radius(J), cfg.dump_points)
    cols = [r, rho0(family, r)]
    header = ["r", "rho0"]
    for j in range(J + 1):
        cols += [phi(family, j, r), psi(family, j, r)]
        header += [f"phi_{j}", f"psi_{j}"]
    text = _csv_text(header, zip(*cols))
    record = {"verb": "dump-cutoffs", "rows": len(r), "columns": header,
              "config": cfg.to_dict()}
    return EXIT_OK, record, text


VERBS = {"obstruction": cmd_obstruction, "decompose": cmd_decompose,
         "verify": cmd_verify, "dump-cutoffs": cmd_dump_cutoffs}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="reeb_dbar", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--form", help="override the form, e.g. '2.5*omega0 + exact_g0'")
    ap.add_argument("--output", help="JSON output path (default: stdout)")
    ap.add_argument("--csv", help="CSV output path (decompose grid dump, dump-cutoffs)")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config, {"form": args.form, "output": args.output,
                                        "csv": args.csv})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code, record, csv_text = VERBS[args.verb](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ReebError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(record)
    if args.verb == "dump-cutoffs" and cfg.csv is None:
        sys.stdout.write(csv_text)
        csv_text = None
    if csv_text is not None:
        write_atomic(cfg.csv, csv_text)
    if cfg.output is not None:
        write_atomic(cfg.output, text)
    elif args.verb != "dump-cutoffs" or cfg.csv is not None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
