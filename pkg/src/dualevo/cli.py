"""Scenario runner.

    dualevo <scenario> [--config FILE] [--set key=value ...] [--seed N] [--out DIR]

Each scenario has a complete default parameter set (see ``SCENARIOS`` or
``dualevo <scenario> --show-defaults``). A config file holds flat
``key = value`` lines; ``#`` starts a comment. ``--set`` overrides the file.

Outputs in DIR: scenario CSVs, ``report.json`` with one entry per checked
invariant, and ``meta.txt``. Only ``meta.txt`` carries timestamps, so
identical (config, seed) pairs reproduce every other file byte for byte.

Exit status: 0 when every check passes, 1 when a check fails or the
numerics abort, 2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import json
import math
import operator
import platform
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .correspondence import match_ground_state, spread_compare
from .experiments import (
    TwoQubitState,
    Z,
    MeasurementSetting,
    chsh,
    correlation_E,
    lhv_bound,
    sample_chsh,
    sample_epr,
    two_slit_classical,
    two_slit_measured,
    two_slit_quantum,
    visibility,
    SlitGeometry,
)
from .fields import (
    DiscreteDistribution,
    Grid1D,
    ProbabilityField,
    distance,
    moment,
    normalize,
    variance,
    write_field_csv,
)
from .fokker_planck import (
    FPParams,
    diffusion_kernel,
    euler_maruyama,
    euler_maruyama_ensemble,
    gaussian_kernel,
    jump_moments,
    max_stable_dt,
    ou_mean_variance,
    ou_stationary,
    propagate_fp,
)
from .master_eq import (
    chapman_kolmogorov_check,
    empirical_distribution,
    gillespie_ensemble,
    gillespie_sample,
    propagate,
    random_generator,
    read_generator_csv,
    spectrum,
    validate_generator,
    write_generator_csv,
)
from .rng import root_stream
from .schrodinger import (
    GaussianPacket,
    IncompatibleOutcomeError,
    QuantumParams,
    born_probability,
    energy_expectation,
    harmonic_ground_state,
    measurement_trajectory,
    packet_field,
    propagate_cn,
    gamma_of_t,
)
from .stats import chi_square_against, standard_error_mean, standard_error_variance

__all__ = ["main", "run_scenario", "SCENARIOS", "ConfigError", "Check"]


class ConfigError(ValueError):
    pass


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    relation: str = "<"
    passed: bool = False

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": _json_number(self.value),
            "relation": self.relation,
            "tolerance": _json_number(self.tolerance),
            "pass": bool(self.passed),
        }


_RELATIONS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


def _json_number(v):
    if isinstance(v, str):
        return v
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def _fmt(v) -> str:
    return format(float(v), ".17g")


class Report:
    def __init__(self):
        self.checks: list[Check] = []
        self.values: dict[str, float] = {}
        self.error: str | None = None

    def add(self, name: str, value: float, tolerance: float, relation: str = "<") -> Check:
        value = float(value)
        ok = math.isfinite(value) and _RELATIONS[relation](value, tolerance)
        c = Check(name, value, float(tolerance), relation, bool(ok))
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _write_rows(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def _float_list(s: str) -> list[float]:
    try:
        return [float(v) for v in str(s).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {s!r}") from exc


# --------------------------------------------------------------------------
# scenarios; each takes (params, seed, out_dir, report)


def _diffuse(p, seed, out, rep):
    grid = Grid1D.symmetric(p["half_width"], p["dx"])
    fp = FPParams(a1=0.0, D=p["D"])
    s0 = p["sigma0_sq"]
    x = grid.points
    p0 = normalize(ProbabilityField(grid, np.exp(-x**2 / (2 * s0))))
    rows = []
    cur, t_prev = p0, 0.0
    for t in _float_list(p["times"]):
        cur = propagate_fp(cur, fp, t - t_prev, p["dt"])
        t_prev = t
        exact = s0 + 2 * fp.D * t
        num = variance(cur)
        rows.append((t, num, exact))
        rep.add(f"variance_rel_error_t={t:g}", abs(num - exact) / exact, 1e-3)
        rep.add(f"mass_error_t={t:g}", abs(cur.total() - 1.0), 1e-8, "<=")
        rep.add(f"min_density_t={t:g}", cur.values.min(), -1e-10, ">=")
    _write_rows(out / "variance.csv", ["t", "var_numeric", "var_exact"], rows)
    write_field_csv(cur, out / "density.csv")
    k = diffusion_kernel(0.0, 1.0, 1.0)
    rep.add("kernel3d_r0_D1_t1_abs_error", abs(k - (4 * math.pi) ** -1.5), 1e-12, "<=")


def _schrodinger_spread(p, seed, out, rep):
    q = QuantumParams(hbar=p["hbar"], m=p["m"])
    grid = Grid1D.symmetric(p["half_width"], p["dx"])
    psi0 = packet_field(GaussianPacket(alpha=p["alpha"]), grid, q)
    rows = []
    cur, t_prev = psi0, 0.0
    for t in _float_list(p["times"]):
        cur = propagate_cn(cur, q, t - t_prev)
        t_prev = t
        rho = born_probability(cur)
        g_num = 1.0 / (2.0 * variance(rho))
        g_exact = gamma_of_t(p["alpha"], t, q)
        rows.append((t, g_num, g_exact))
        rep.add(f"gamma_rel_error_t={t:g}", abs(g_num - g_exact) / g_exact, 1e-3)
        rep.add(f"norm_error_t={t:g}", abs(cur.norm2() - 1.0), 1e-9, "<=")
    _write_rows(out / "spread.csv", ["t", "gamma_numeric", "gamma_exact"], rows)
    write_field_csv(cur, out / "amplitude.csv")


def _master(p, seed, out, rep):
    if p["generator"]:
        try:
            g = read_generator_csv(p["generator"])
        except OSError as exc:
            raise ConfigError(f"cannot read generator file: {exc}") from exc
    else:
        g = random_generator(int(p["n_states"]), root_stream(seed))
    n = g.n_states
    x0 = int(p["x0"])
    if not 0 <= x0 < n:
        raise ConfigError(f"x0 = {x0} is not a state of a {n}-state chain")
    write_generator_csv(g, out / "generator.csv")
    diag = validate_generator(g)
    rep.add("max_abs_column_sum", np.max(np.abs(diag.column_sums)), 1e-12)
    sp = spectrum(g)
    rep.values["near_zero_eigenvalues"] = sp.n_zero
    rep.add("near_zero_eigenvalue_count_minus_1", abs(sp.n_zero - 1), 0, "<=")
    others = np.sort(sp.eigenvalues.real)[:-1]
    if others.size:
        rep.add("max_real_part_nonzero_eigenvalues", others.max(), 0.0)
    t = p["t"]
    exact = propagate(g, DiscreteDistribution.point(n, x0), t)
    rep.add("propagated_mass_error", abs(exact.probs.sum() - 1.0), 1e-10, "<=")
    rep.add("chapman_kolmogorov_gap", chapman_kolmogorov_check(g, 0.5 * t, t), 1e-8)
    states = gillespie_ensemble(g, x0, t, int(p["n_trajectories"]), seed)
    emp = empirical_distribution(states, n)
    rep.add("gillespie_tv", distance(emp, exact, "TV"), 0.01)
    _write_rows(out / "distribution.csv", ["state", "propagated", "empirical"],
                [(str(i), exact.probs[i], emp.probs[i]) for i in range(n)])
    gillespie_sample(g, x0, t, seed).write_csv(out / "trajectory.csv")


def _fokker_planck(p, seed, out, rep):
    fp = FPParams(a1=p["a1"], D=p["D"])
    k = gaussian_kernel(fp, tau=p["kernel_tau"])
    r = p["moment_r"]
    m1 = jump_moments(k, r, 1)
    m2 = jump_moments(k, 0.0, 2)
    rep.add("jump_moment_1_abs_error", abs(m1 + fp.a1 * r), 1e-8)
    rep.add("jump_moment_2_at_0_abs_error", abs(m2 - 2 * fp.D), 1e-8)

    grid = Grid1D.symmetric(p["half_width"], p["dx"])
    x = grid.points
    x0, s0, t = p["x0"], p["sigma0_sq"], p["t"]
    p0 = normalize(ProbabilityField(grid, np.exp(-(x - x0) ** 2 / (2 * s0))))
    dt = min(p["dt"], max_stable_dt(grid, fp))
    pt = propagate_fp(p0, fp, t, dt)
    mean_ex, var_ex = ou_mean_variance(fp, x0, t)
    var_ex += s0 * math.exp(-2 * fp.a1 * t)
    rep.add("fp_mean_abs_error", abs(moment(pt, 1) - mean_ex), 1e-3)
    rep.add("fp_variance_rel_error", abs(variance(pt) - var_ex) / var_ex, 1e-3)
    write_field_csv(pt, out / "density.csv")

    if fp.a1 > 0:
        relaxed = propagate_fp(pt, fp, p["t_relax"], dt)
        stat = ou_stationary(fp, grid)
        rep.add("relaxation_linf_gap", distance(relaxed, stat, "Linf"), 1e-3)
        rep.add("stationary_state_drift_linf",
                distance(propagate_fp(stat, fp, 1.0, dt), stat, "Linf"), 1e-4)

    ens = euler_maruyama_ensemble(fp, x0, t, p["em_dt"], int(p["em_paths"]), seed)
    em_mean_ex, em_var_ex = ou_mean_variance(fp, x0, t)
    se_m, se_v = standard_error_mean(ens), standard_error_variance(ens)
    rep.add("em_mean_error_in_se", abs(ens.mean() - em_mean_ex) / se_m, 3.0)
    rep.add("em_variance_error_in_se", abs(ens.var(ddof=1) - em_var_ex) / se_v, 3.0)
    _write_rows(out / "em_moments.csv", ["quantity", "sampled", "exact", "stderr"],
                [("mean", ens.mean(), em_mean_ex, se_m), ("variance", ens.var(ddof=1), em_var_ex, se_v)])
    euler_maruyama(fp, x0, t, p["em_dt"], seed).write_csv(out / "path.csv")


def _correspond(p, seed, out, rep):
    q = QuantumParams(hbar=p["hbar"], m=p["m"], b=p["b"])
    grid = Grid1D.symmetric(p["half_width"], p["dx"])
    res = match_ground_state(q, p["D"], grid)
    lam_ex = math.sqrt(4 * q.m * q.b) / q.hbar
    rep.values.update(lambda_=res.lambda_, a1=res.a1, kappa=res.kappa)
    rep.add("lambda_abs_error", abs(res.lambda_ - lam_ex), 1e-12, "<=")
    rep.add("a1_abs_error", abs(res.a1 - p["D"] * lam_ex), 1e-12, "<=")
    rep.add("kappa_minus_lambda", abs(res.kappa - res.lambda_), 1e-12, "<=")
    rep.add("density_gap_linf", res.linf_density_gap, 1e-10)

    psi0, gs = harmonic_ground_state(q, grid)
    rep.values["E0"] = gs.E0
    rep.add("E0_abs_error", abs(gs.E0 - 3 * q.hbar**2 * lam_ex / (4 * q.m)), 1e-12, "<=")
    rep.add("numerical_energy_per_axis_rel_error",
            abs(energy_expectation(psi0, q) - gs.energy_per_axis) / gs.energy_per_axis, 1e-3)

    fp = FPParams(a1=res.a1, D=p["D"])
    stat = ou_stationary(fp, grid)
    x = grid.points
    start = normalize(ProbabilityField(grid, np.exp(-(x - p["relax_x0"]) ** 2 / 0.5)))
    relaxed = propagate_fp(start, fp, p["t_relax"], max_stable_dt(grid, fp))
    rep.add("fp_relaxation_linf_gap", distance(relaxed, stat, "Linf"), 1e-3)
    _write_rows(out / "densities.csv", ["x", "ou_stationary", "ground_state_sq", "fp_relaxed"],
                zip(x, stat.values, born_probability(psi0).values, relaxed.values))

    times = _float_list(p["spread_times"])
    tab = spread_compare(p["alpha"], p["D"], q, times)
    tab.write_csv(out / "spread.csv")


def _two_slit(p, seed, out, rep):
    half = p["screen_half_width"]
    geom = SlitGeometry(d=p["d"], L=p["L"], k=2 * math.pi / p["wavelength"],
                        screen=Grid1D(-half, half, int(p["screen_points"])))
    rep.add("far_field_L_over_extent", geom.L / geom.screen_extent, 10.0, ">=")
    qf = two_slit_quantum(geom)
    cf = two_slit_classical(geom)
    rep.add("quantum_visibility", visibility(qf), 0.9, ">")
    rep.add("classical_min_density", cf.values.min(), 0.0, ">")
    rep.add("classical_visibility", visibility(cf), 0.05)
    rep.add("interference_gap_over_peak", distance(qf, cf, "Linf") / qf.values.max(), 0.2, ">")
    meas = two_slit_measured(geom, int(p["n_particles"]), seed, int(p["n_bins"]))
    rep.add("measured_tv_to_classical", meas.tv_to(cf), 0.01)
    rep.add("measured_tv_to_quantum", meas.tv_to(qf), 0.1, ">")
    _write_rows(out / "quantum.csv", ["x", "intensity"], zip(qf.x, qf.values))
    _write_rows(out / "classical.csv", ["x", "intensity"], zip(cf.x, cf.values))
    meas.write_csv(out / "measured.csv")


_STATES = {"triplet-zero": TwoQubitState.triplet_zero, "singlet": TwoQubitState.singlet}


def _epr_chsh(p, seed, out, rep):
    if p["state"] not in _STATES:
        raise ConfigError(f"state must be one of {sorted(_STATES)}, got {p['state']!r}")
    state = _STATES[p["state"]]()
    n = int(p["n_trials"])
    rep.add("E_zz_plus_1", abs(correlation_E(state, Z, Z) + 1.0), 1e-12, "<=")
    run = sample_epr(state, Z, Z, n, seed)
    run.write_csv(out / "epr_zz.csv")
    se = math.sqrt(0.25 / n)
    for which in (0, 1):
        rep.add(f"marginal_up_{'ab'[which]}_dev_in_sigma", abs(run.marginal_up(which) - 0.5) / se, 3.0, "<=")
    settings = tuple(MeasurementSetting(p[f"theta_{s}"], p[f"phi_{s}"]) for s in ("a", "a2", "b", "b2"))
    s_an = chsh(state, settings)
    target = p["expected_S"]
    rep.values.update(S_analytic=s_an, E_zz=correlation_E(state, Z, Z))
    rep.add("S_analytic_abs_error", abs(s_an - target), 1e-9, "<=")
    s_mc, s_se = sample_chsh(state, settings, n, seed)
    rep.values.update(S_sampled=s_mc, S_sampled_stderr=s_se)
    rep.add("S_sampled_dev_in_sigma", abs(s_mc - s_an) / s_se, 3.0, "<=")
    bound = lhv_bound(settings)
    rep.add("lhv_bound_minus_2", abs(bound - 2.0), 0.0, "<=")
    _write_rows(out / "chsh.csv", ["angle_config", "S"],
                [("analytic", s_an), ("sampled", s_mc), ("lhv_bound", bound)])


def _trajectory(p, seed, out, rep):
    q = QuantumParams(hbar=p["hbar"], m=p["m"], b=p["b"])
    grid = Grid1D.symmetric(p["half_width"], p["dx"])
    psi0, _ = harmonic_ground_state(q, grid)
    n_meas = int(p["n_measurements"])
    rec = measurement_trajectory(psi0, q, p["period"], p["alpha_meas"], (n_meas - 1) * p["period"], seed)
    rec.write_csv(out / "trajectory.csv", value_name="x")
    xs = rec.values
    chi = chi_square_against(xs, born_probability(psi0))
    rep.add("chi_square_p_value", chi.p_value, 1e-3, ">")
    rep.add("distinct_successive_fraction", float(np.mean(np.diff(xs) != 0)), 0.0, ">")


@dataclass(frozen=True)
class Scenario:
    run: Callable
    defaults: dict
    summary: str


SCENARIOS: dict[str, Scenario] = {
    "diffuse": Scenario(_diffuse, {
        "D": 1.0, "sigma0_sq": 0.5, "times": "0.5,1,2", "half_width": 20.0, "dx": 0.025, "dt": 0.01,
    }, "free diffusion: variance sigma0^2 + 2Dt and the 3-D kernel"),
    "schrodinger-spread": Scenario(_schrodinger_spread, {
        "hbar": 1.0, "m": 1.0, "alpha": 1.0, "times": "0.5,1,2", "half_width": 20.0, "dx": 0.025,
    }, "free Gaussian packet against gamma(t) = alpha / (alpha^2 + hbar^2 t^2 / m^2)"),
    "master": Scenario(_master, {
        "n_states": 5, "generator": "", "x0": 0, "t": 1.0, "n_trajectories": 100000,
    }, "generator structure, propagation and Gillespie sampling"),
    "fokker-planck": Scenario(_fokker_planck, {
        "a1": 1.0, "D": 1.0, "x0": 1.0, "sigma0_sq": 0.1, "t": 1.0, "dt": 0.001, "half_width": 10.0,
        "dx": 0.02, "t_relax": 20.0, "kernel_tau": 0.01, "moment_r": 1.0, "em_dt": 0.001, "em_paths": 100000,
    }, "Ornstein-Uhlenbeck density, jump moments and Euler-Maruyama ensemble"),
    "correspond": Scenario(_correspond, {
        "hbar": 1.0, "m": 1.0, "b": 1.0, "D": 1.0, "half_width": 8.0, "dx": 0.02, "t_relax": 20.0,
        "relax_x0": 1.0, "alpha": 1.0, "spread_times": "0,0.5,1,2,4,8",
    }, "ground state against OU stationary state, spreading laws"),
    "two-slit": Scenario(_two_slit, {
        "d": 1.0, "L": 100.0, "wavelength": 0.01, "screen_half_width": 5.0, "screen_points": 2001,
        "n_particles": 1000000, "n_bins": 200,
    }, "interference, additive pattern and which-slit sampling"),
    "epr-chsh": Scenario(_epr_chsh, {
        "state": "triplet-zero", "n_trials": 1000000,
        "theta_a": math.pi / 2, "phi_a": 0.0, "theta_a2": math.pi / 2, "phi_a2": math.pi / 2,
        "theta_b": math.pi / 2, "phi_b": math.pi / 4, "theta_b2": math.pi / 2, "phi_b2": 3 * math.pi / 4,
        "expected_S": 2 * math.sqrt(2),
    }, "spin-pair correlations and CHSH"),
    "trajectory": Scenario(_trajectory, {
        "hbar": 1.0, "m": 1.0, "b": 1.0, "half_width": 6.0, "dx": 0.025, "period": 1.0,
        "alpha_meas": 1e6, "n_measurements": 10000,
    }, "repeated weak position measurements in the harmonic ground state"),
}


# --------------------------------------------------------------------------
# configuration


def _coerce(key: str, raw, default):
    if isinstance(default, str):
        return str(raw)
    try:
        val = float(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc
    if isinstance(default, int):
        if not val.is_integer():
            raise ConfigError(f"{key}: expected an integer, got {raw!r}")
        return int(val)
    return val


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


def resolve_parameters(scenario: str, overrides: dict) -> dict:
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    defaults = SCENARIOS[scenario].defaults
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {scenario}: {', '.join(unknown)}")
    params = dict(defaults)
    for k, v in overrides.items():
        params[k] = _coerce(k, v, defaults[k])
    return params


def run_scenario(scenario: str, params: dict, seed: int, out_dir) -> Report:
    """Run one scenario, write its CSVs and report.json, and return the report.

    ``params`` must already be resolved. Numerical aborts are recorded as a
    failing check named after the exception.
    """
    out = Path(out_dir)
    rep = Report()
    try:
        SCENARIOS[scenario].run(params, seed, out, rep)
    except ConfigError:
        raise
    except (ArithmeticError, IncompatibleOutcomeError) as exc:
        c = Check(f"aborted:{type(exc).__name__}", math.nan, math.nan, "<", False)
        rep.checks.append(c)
        rep.error = str(exc)
    except ValueError as exc:
        # constructors reject nonphysical parameters with ValueError
        raise ConfigError(str(exc)) from exc
    doc = {
        "scenario": scenario,
        "seed": int(seed),
        "parameters": {k: _json_number(v) if not isinstance(v, str) else v for k, v in params.items()},
        "values": {k: _json_number(v) for k, v in rep.values.items()},
        "checks": [c.as_dict() for c in rep.checks],
        "pass": rep.passed,
    }
    if rep.error:
        doc["error"] = rep.error
    (out / "report.json").write_text(json.dumps(doc, indent=2) + "\n")
    return rep


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dualevo", description="Run a verification scenario.")
    ap.add_argument("scenario", choices=sorted(SCENARIOS))
    ap.add_argument("--config", metavar="FILE", help="flat key = value parameter file")
    ap.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                    help="override one parameter (repeatable)")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out", metavar="DIR", default=None, help="output directory (default: out/<scenario>)")
    ap.add_argument("--show-defaults", action="store_true", help="print the default parameters and exit")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        overrides = {}
        if args.config:
            try:
                overrides.update(parse_config_text(Path(args.config).read_text()))
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from exc
        for item in args.sets:
            if "=" not in item:
                raise ConfigError(f"--set expects key=value, got {item!r}")
            k, v = item.split("=", 1)
            overrides[k.strip()] = v.strip()
        params = resolve_parameters(args.scenario, overrides)
        if args.show_defaults:
            for k, v in params.items():
                print(f"{k} = {v}")
            return 0
        if args.seed < 0:
            raise ConfigError("seed must be nonnegative")
        out = Path(args.out) if args.out else Path("out") / args.scenario
        try:
            out.mkdir(parents=True, exist_ok=True)
            probe = out / ".write-test"
            probe.write_text("")
            probe.unlink()
        except OSError as exc:
            raise ConfigError(f"output directory is not writable: {exc}") from exc
        started = datetime.datetime.now(datetime.timezone.utc)
        rep = run_scenario(args.scenario, params, args.seed, out)
    except ConfigError as exc:
        print(f"dualevo: error: {exc}", file=sys.stderr)
        return 2
    finished = datetime.datetime.now(datetime.timezone.utc)
    (out / "meta.txt").write_text(
        f"started: {started.isoformat()}\nfinished: {finished.isoformat()}\n"
        f"dualevo: {__version__}\npython: {platform.python_version()}\nnumpy: {np.__version__}\n"
        f"argv: {' '.join(sys.argv[1:] if argv is None else argv)}\n"
    )
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.6g} {c.relation} {c.tolerance:.6g}")
    if rep.error:
        print(f"aborted: {rep.error}", file=sys.stderr)
    print(f"{args.scenario}: {'all checks passed' if rep.passed else 'CHECK FAILURE'}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
