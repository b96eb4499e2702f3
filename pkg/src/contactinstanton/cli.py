"""Command line front end of the contact instanton workbench.

Every subcommand reads a :class:`RunConfig`, validates it completely before any
computation, writes its artifacts and a ``summary.json`` into the output directory
and exits with

* ``0`` if all checks of the command pass,
* ``2`` on usage errors (invalid configuration or input data),
* ``3`` if an iteration does not converge,
* ``4`` if an identity or a check fails.

The configuration file holds one ``key = value`` per line, ``#`` starts a comment and
nested keys are dotted, for example ``solver.tol_residual = 1e-9``.
"""

import argparse
import dataclasses
import json
import logging
import math
import pathlib
import sys
from typing import Dict, Optional, Tuple

import numpy as np

from contactinstanton import (
    config,
    cylfield,
    decay,
    errors,
    identities,
    instanton,
    reeb,
    triad,
    utils,
)

__all__ = [
    "RunConfig",
    "read_config_file",
    "cmd_triad_info",
    "cmd_orbits",
    "cmd_spectrum",
    "cmd_solve",
    "cmd_decay",
    "cmd_verify",
    "main",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3
EXIT_FAILURE = 4


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Settings of one command line run.

    ``decay_input`` is the map field analyzed by ``decay``; ``verify_inputs`` are the
    fields of ``verify``, which defaults to the flat oracle with amplitude
    ``oracle_amplitude`` on the resolutions ``verify_resolutions``.
    """

    triad: str = "ellipsoid"
    L: float = 6.0
    Ntau: int = 49
    Nt: int = 32
    orbit_index: int = 1
    tol_residual: float = 1e-8
    max_iters: int = 50
    method: str = "gauss-newton"
    amplitude: float = 1e-2
    gamma: Optional[float] = None
    charge_threshold: Optional[float] = None
    norm_safety: Optional[float] = None
    residual_floor: Optional[float] = None
    decay_input: Optional[str] = None
    verify_inputs: Tuple[str, ...] = ()
    verify_resolutions: Tuple[int, ...] = (32, 64, 128)
    oracle_amplitude: float = 0.3
    samples: int = 64
    out: str = "results"
    seed: int = 0
    threads: Optional[int] = None

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("The cylinder length has to be positive.")
        if self.Ntau < 8 or self.Nt < 8:
            raise ValueError("Grids need at least 8 nodes in each direction.")
        if self.orbit_index not in (1, 2):
            raise ValueError("The orbit index is 1 or 2.")
        if self.amplitude < 0 or not self.oracle_amplitude > 0:
            raise ValueError("Amplitudes cannot be negative.")
        if self.gamma is not None and not 0 < self.gamma < 0.5:
            raise ValueError("gamma has to lie in (0, 1/2).")
        resolutions = list(self.verify_resolutions)
        if len(resolutions) < 2 or resolutions != sorted(set(resolutions)) or resolutions[0] < 8:
            raise ValueError("verify.resolutions needs two or more increasing values of at least 8.")
        if self.samples < 8:
            raise ValueError("Orbits need at least 8 samples.")
        if self.seed < 0:
            raise ValueError("Seeds must be nonnegative.")
        if self.threads is not None and self.threads < 1:
            raise ValueError("The thread count has to be positive.")
        triad.triad_from_id(self.triad)
        self.solve_config()

    @property
    def grid(self):
        return cylfield.CylinderGrid(L=self.L, Ntau=self.Ntau, Nt=self.Nt)

    def solve_config(self):
        return instanton.SolveConfig(
            tol_residual=self.tol_residual,
            max_iters=self.max_iters,
            method=self.method,
            seed=self.seed,
        )

    def analysis_context(self):
        return config.analysis_context(
            gamma=self.gamma,
            charge_threshold=self.charge_threshold,
            norm_safety=self.norm_safety,
            residual_floor=self.residual_floor,
        )

    @classmethod
    def from_mapping(cls, values: Dict[str, str], **overrides):
        """Convert the dotted keys of a configuration file, then apply ``overrides``."""
        kwargs = {}
        for key, raw in values.items():
            if key not in _KEYS:
                raise ValueError(f"Unknown configuration key {key!r}.")
            field, convert = _KEYS[key]
            try:
                kwargs[field] = convert(raw)
            except ValueError as err:
                raise ValueError(f"Invalid value {raw!r} for {key!r}.") from err
        kwargs.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**kwargs)


def _int_tuple(raw):
    return tuple(int(item) for item in raw.split(",") if item.strip())


def _str_tuple(raw):
    return tuple(item.strip() for item in raw.split(",") if item.strip())


_KEYS = {
    "triad": ("triad", str),
    "grid.L": ("L", float),
    "grid.Ntau": ("Ntau", int),
    "grid.Nt": ("Nt", int),
    "orbit.index": ("orbit_index", int),
    "orbit.samples": ("samples", int),
    "solver.tol_residual": ("tol_residual", float),
    "solver.max_iters": ("max_iters", int),
    "solver.method": ("method", str),
    "solver.amplitude": ("amplitude", float),
    "analysis.gamma": ("gamma", float),
    "analysis.charge_threshold": ("charge_threshold", float),
    "analysis.norm_safety": ("norm_safety", float),
    "analysis.residual_floor": ("residual_floor", float),
    "decay.input": ("decay_input", str),
    "verify.inputs": ("verify_inputs", _str_tuple),
    "verify.resolutions": ("verify_resolutions", _int_tuple),
    "verify.amplitude": ("oracle_amplitude", float),
    "out": ("out", str),
    "seed": ("seed", int),
    "threads": ("threads", int),
}


def read_config_file(path) -> Dict[str, str]:
    """Raw ``key = value`` pairs of a configuration file.

    Examples
    --------
    >>> import tempfile, os
    >>> with tempfile.TemporaryDirectory() as folder:
    ...     path = os.path.join(folder, "run.cfg")
    ...     _ = open(path, "w").write("grid.Nt = 16  # circle\\n\\nseed=3\\n")
    ...     read_config_file(path)
    {'grid.Nt': '16', 'seed': '3'}
    """
    values = {}
    text = pathlib.Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"Line {number} of {path} is not of the form key = value.")
        values[key.strip()] = value.strip()
    return values


def _jsonable(value):
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return None if not math.isfinite(value) else float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _write_summary(out, command, passed, **entries):
    summary = dict(command=command, passed=bool(passed), **entries)
    path = out / "summary.json"
    path.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("%s: passed %s, summary in %s", command, passed, path)
    return summary


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_cell(value) for value in row) for row in rows]
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _orbit(cfg: RunConfig, model=None):
    model = triad.triad_from_id(cfg.triad) if model is None else model
    if not hasattr(model, "orbit_point"):
        raise ValueError(f"The triad {model.triad_id!r} has no closed Reeb orbits.")
    return reeb.coordinate_orbit(model, cfg.orbit_index, samples=cfg.samples)


def cmd_triad_info(cfg: RunConfig, out: pathlib.Path):
    """Invariants of the triad and the axioms of its connection at random points."""
    model = triad.triad_from_id(cfg.triad)
    rng = utils.named_generator(cfg.seed, "triad-info")
    points = model.sample_points(rng, 32)
    invariants, invariants_pass = triad.check_triad_invariants(model, points, rng)
    axioms = triad.axiom_check(model, points, rng=rng)
    rows = [("invariant", key, value) for key, value in invariants.items()]
    rows += [("axiom", key, value) for key, value in axioms.residuals.items()]
    _write_csv(out / "triad_info.csv", ["kind", "check", "residual"], rows)
    passed = invariants_pass and axioms.passed
    _write_summary(
        out,
        "triad-info",
        passed,
        triad=model.triad_id,
        invariants=invariants,
        axioms=axioms.residuals,
        axiom_tolerance=axioms.tolerance,
    )
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_orbits(cfg: RunConfig, out: pathlib.Path):
    """Both coordinate orbits, refined by the closed-orbit Newton iteration."""
    model = triad.triad_from_id(cfg.triad)
    if not hasattr(model, "orbit_point"):
        raise ValueError(f"The triad {model.triad_id!r} has no closed Reeb orbits.")
    rows, entries = [], {}
    for index in (1, 2):
        orbit = reeb.find_closed_orbit(
            model, model.orbit_point(index), model.orbit_period(index), samples=cfg.samples
        )
        report = reeb.nondegeneracy(orbit)
        rows.append(
            (index, orbit.period, report.margin, report.nondegenerate)
            + tuple(np.concatenate([report.floquet.real, report.floquet.imag]))
        )
        entries[f"orbit_{index}"] = dict(
            period=orbit.period, margin=report.margin, nondegenerate=report.nondegenerate
        )
    _write_csv(
        out / "orbits.csv",
        ["index", "period", "margin", "nondegenerate", "mu1_re", "mu2_re", "mu1_im", "mu2_im"],
        rows,
    )
    _write_summary(out, "orbits", True, triad=model.triad_id, **entries)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out: pathlib.Path):
    """Eigenvalues of the asymptotic operator and the kernel correspondence."""
    orbit = _orbit(cfg)
    spectrum = reeb.assemble_Az(orbit, cfg.Nt)
    kernel = reeb.kernel_correspondence_check(orbit, cfg.Nt)
    _write_csv(
        out / "spectrum.csv",
        ["index", "eigenvalue"],
        enumerate(spectrum.eigenvalues),
    )
    _write_summary(
        out,
        "spectrum",
        kernel.agree,
        triad=cfg.triad,
        period=orbit.period,
        gap=spectrum.gap,
        positive_gap=spectrum.positive_gap,
        holonomy=spectrum.holonomy,
        asymmetry=spectrum.asymmetry,
        kernel_dimension=kernel.kernel_dimension,
        floquet_count=kernel.floquet_count,
        conventions_agree=kernel.conventions_agree,
    )
    return EXIT_OK if kernel.agree else EXIT_FAILURE


def cmd_solve(cfg: RunConfig, out: pathlib.Path):
    """Solve from the trivial cylinder perturbed in the interior."""
    orbit = _orbit(cfg)
    trivial = instanton.trivial_cylinder(orbit, cfg.grid)
    w0 = instanton.perturb_interior(trivial, cfg.amplitude, seed=cfg.seed)
    try:
        result = instanton.solve(w0, cfg.solve_config())
    except errors.SolverStallError as err:
        result = err.result
        logger.warning("%s", err)
    instanton.write_history(out / "history.csv", result.history)
    cylfield.write_map_field(out / "field.txt", result.w)
    distance = float(np.max(np.linalg.norm(result.w.nodes - trivial.nodes, axis=-1)))
    _write_summary(
        out,
        "solve",
        result.converged,
        triad=cfg.triad,
        message=result.message,
        iterations=result.iterations,
        energies=result.report.as_dict(),
        distance_to_trivial=distance,
    )
    return EXIT_OK if result.converged else EXIT_NONCONVERGENCE


def cmd_decay(cfg: RunConfig, out: pathlib.Path):
    """Windowed decay analysis of the field in ``decay.input``."""
    if cfg.decay_input is None:
        raise ValueError("decay needs a field file in decay.input.")
    w = cylfield.read_map_field(cfg.decay_input)
    orbit = _orbit(cfg, w.triad) if hasattr(w.triad, "orbit_point") else None
    with cfg.analysis_context():
        report = decay.analyze_decay(w, orbit)
        spectrum = reeb.assemble_Az(orbit, w.grid.Nt) if orbit is not None else None
        try:
            theta_rate = decay.theta_component(w).rate
        except errors.ChargeNotVanishingError as err:
            logger.info("No theta component: %s", err)
            theta_rate = None
    decay.write_decay_report(out / "decay.csv", report, spectrum)
    passed = not report.three_interval_violations
    _write_summary(
        out,
        "decay",
        passed,
        triad=w.triad.triad_id,
        delta_fit=report.delta_fit,
        r2=report.r2,
        T_limit=report.T_limit,
        Q_limit=report.Q_limit,
        asymptotic=report.asymptotic,
        orbit_distance=report.orbit_distance,
        positive_gap=None if spectrum is None else spectrum.positive_gap,
        theta_rate=theta_rate,
        violations=report.three_interval_violations,
        details=report.details,
    )
    return EXIT_OK if passed else EXIT_FAILURE


def _verify_fields(cfg: RunConfig):
    if cfg.verify_inputs:
        return [cylfield.read_map_field(path) for path in cfg.verify_inputs]
    amplitude = cfg.oracle_amplitude

    def data(tau, t):
        return amplitude * np.exp(-2 * np.pi * (tau + 1j * t))

    fields = []
    for Nt in cfg.verify_resolutions:
        Ntau = int(round(cfg.L * Nt)) + 1
        grid = cylfield.CylinderGrid(L=cfg.L, Ntau=Ntau, Nt=Nt)
        fields.append(instanton.oracle_flat(grid, data))
    return fields


def cmd_verify(cfg: RunConfig, out: pathlib.Path):
    """The identity suite and the local coercive estimate on fields of increasing resolution."""
    fields = _verify_fields(cfg)
    L = fields[0].grid.L
    with cfg.analysis_context():
        reports = identities.run_suite(fields, max_workers=cfg.threads)
        reports.append(
            identities.coercive_estimate_check(fields, (0.3 * L, 0.7 * L), (0.1 * L, 0.9 * L))
        )
    identities.write_suite_csv(out / "identities.csv", reports)
    failed = [report.name for report in reports if not report.passed]
    _write_summary(
        out,
        "verify",
        not failed,
        resolutions=reports[0].resolutions,
        failed=failed,
        reports={
            report.name: dict(order=report.order, residuals=report.residuals, details=report.details)
            for report in reports
        },
    )
    return EXIT_FAILURE if failed else EXIT_OK


COMMANDS = {
    "triad-info": cmd_triad_info,
    "orbits": cmd_orbits,
    "spectrum": cmd_spectrum,
    "solve": cmd_solve,
    "decay": cmd_decay,
    "verify": cmd_verify,
}


def _parser():
    parser = argparse.ArgumentParser(
        prog="contactinstanton", description="Numerical workbench for contact instantons."
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=pathlib.Path, help="key = value configuration file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--triad", help="triad id, for example ellipsoid:a1=1,a2=2")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv=None):
    """Run a subcommand and return its exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    logging.basicConfig(level=max(logging.WARNING - 10 * args.verbose, logging.DEBUG))
    try:
        values = read_config_file(args.config) if args.config is not None else {}
        cfg = RunConfig.from_mapping(
            values, out=args.out, seed=args.seed, threads=args.threads, triad=args.triad
        )
    except (OSError, ValueError) as err:
        print(f"contactinstanton: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    out = pathlib.Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return COMMANDS[args.command](cfg, out)
    except (errors.NoOrbitFoundError, errors.IntegrationError, errors.AssemblyError) as err:
        print(f"contactinstanton: {err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (OSError, ValueError) as err:
        print(f"contactinstanton: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
