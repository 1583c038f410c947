"""Command-line front end.

Subcommands: `fidelity` (one value), `curve` (CSV sweep over gamma),
`verify` (invariant suites), `channel` (density-matrix dump).  All
output is plain text with 12 significant digits, byte-deterministic for
fixed arguments, and every number printed is produced by the library
API directly.

Exit codes: 0 success, 2 usage or domain error, 3 accuracy failure
(including failed verify suites).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import closedform as cf
from .channel import McSpec, QuadratureSpec, apply_channel, apply_channel_mc
from .exceptions import AccuracyError
from .fidelity import (
    FidelityValue,
    bose_einstein_ensemble,
    check_scaling_law,
    ensemble_fidelity,
    entanglement_fidelity,
    entanglement_fidelity_via_purification,
    fidelity_a_gamma,
    fidelity_pure,
    fidelity_pure_direct,
    fidelity_pure_mc,
    fidelity_wigner,
)
from .fock import (
    DEFAULT_DIM,
    TruncatedPureState,
    coherent_state,
    number_state,
    squeezed_state,
    superposition01,
    thermal_state,
)
from .phasespace import ChannelNoise, PhaseGrid

_METHOD_CHOICES = [
    "weyl_quadrature",
    "direct_overlap",
    "wigner_overlap",
    "a_gamma",
    "closed_form",
    "monte_carlo",
]


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class CurveRequest:
    state_spec: str
    gamma_min: float
    gamma_max: float
    steps: int
    method: str

    def __post_init__(self):
        if not (0.0 <= self.gamma_min < self.gamma_max):
            raise ValueError("need 0 <= gamma-min < gamma-max")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")
        if self.method not in _METHOD_CHOICES:
            raise ValueError(f"unknown method {self.method!r}")


class _StateSpec:
    """Parsed --state value.

    Grammar: number:N | coherent:Z | squeezed:NBAR | superposition01
    | thermal:NBAR[:(entanglement|ensemble)].  Z parses as a python
    complex ("1", "0.3-0.2j"); the thermal flavor defaults to
    entanglement.
    """

    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        parts = text.split(":")
        kind = parts[0]
        self.kind = kind
        self.thermal_nbar = None
        self.thermal_flavor = None
        try:
            if kind == "number" and len(parts) == 2:
                self.param = int(parts[1])
                if self.param < 0:
                    raise ValueError
            elif kind == "coherent" and len(parts) == 2:
                self.param = complex(parts[1])
            elif kind == "squeezed" and len(parts) == 2:
                self.param = float(parts[1])
            elif kind == "superposition01" and len(parts) == 1:
                self.param = None
            elif kind == "thermal" and len(parts) in (2, 3):
                self.thermal_nbar = float(parts[1])
                flavor = parts[2] if len(parts) == 3 else "entanglement"
                if flavor not in ("entanglement", "ensemble"):
                    raise ValueError
                self.thermal_flavor = flavor
                self.param = self.thermal_nbar
            else:
                raise ValueError
        except ValueError:
            raise ValueError(
                f"bad state spec {text!r}; expected number:N, coherent:Z, "
                "squeezed:NBAR, superposition01, or thermal:NBAR[:(entanglement|ensemble)]"
            ) from None

    @property
    def is_thermal(self) -> bool:
        return self.kind == "thermal"

    def pure_state(self) -> TruncatedPureState:
        if self.kind == "number":
            return number_state(self.param, self.dim)
        if self.kind == "coherent":
            return coherent_state(self.param, self.dim)
        if self.kind == "squeezed":
            return squeezed_state(self.param, self.dim)
        return superposition01(self.dim)

    def closed_form(self, gamma: float) -> float:
        if self.kind == "number":
            return cf.fidelity_number(self.param, gamma)
        if self.kind == "coherent":
            return cf.max_fidelity(gamma)
        if self.kind == "squeezed":
            return cf.fidelity_squeezed(self.param, gamma)
        if self.kind == "superposition01":
            return cf.fidelity_superposition01(gamma)
        if self.thermal_flavor == "entanglement":
            return cf.thermal_entanglement_fidelity(self.thermal_nbar, gamma)
        return cf.thermal_ensemble_fidelity(self.thermal_nbar, gamma)


def _evaluate(spec: _StateSpec, gamma: float, args) -> FidelityValue:
    """One fidelity by the requested route; the CLI's only computation."""
    method = args.method
    quad = QuadratureSpec(args.quad_order)
    if method == "closed_form":
        return FidelityValue(spec.closed_form(gamma), "closed_form", 0.0)
    if spec.is_thermal:
        rho = thermal_state(spec.thermal_nbar, spec.dim)
        if spec.thermal_flavor == "ensemble":
            if method != "weyl_quadrature":
                raise ValueError("ensemble fidelity supports weyl_quadrature or closed_form")
            return ensemble_fidelity(bose_einstein_ensemble(spec.thermal_nbar, dim=spec.dim), gamma, quad)
        if method == "weyl_quadrature":
            return entanglement_fidelity(rho, gamma, quad)
        if method == "direct_overlap":
            return entanglement_fidelity_via_purification(rho, gamma, quad)
        raise ValueError("thermal entanglement fidelity supports weyl_quadrature, direct_overlap, or closed_form")
    psi = spec.pure_state()
    if method == "weyl_quadrature":
        return fidelity_pure(psi, gamma, quad)
    if method == "direct_overlap":
        return fidelity_pure_direct(psi, gamma, quad)
    if method == "wigner_overlap":
        return fidelity_wigner(psi, gamma)
    if method == "a_gamma":
        return fidelity_a_gamma(psi, gamma)
    return fidelity_pure_mc(psi, gamma, McSpec(args.samples, args.seed))


def _cmd_fidelity(args) -> int:
    spec = _StateSpec(args.state, args.dim)
    gamma = float(ChannelNoise(args.gamma))
    fv = _evaluate(spec, gamma, args)
    if args.json:
        print(json.dumps({
            "value": fv.value,
            "method": fv.method,
            "error_estimate": fv.error_estimate,
        }, sort_keys=True))
    else:
        print(f"{_fmt(fv.value)} {fv.method} {_fmt(fv.error_estimate)}")
    return 0


def _cmd_curve(args) -> int:
    req = CurveRequest(args.state, args.gamma_min, args.gamma_max, args.steps, args.method)
    spec = _StateSpec(req.state_spec, args.dim)
    gammas = np.linspace(req.gamma_min, req.gamma_max, req.steps)
    rows = []
    for g in gammas:
        fv = _evaluate(spec, float(g), args)
        rows.append((float(g), fv))
    if args.json:
        payload = [
            {"gamma": g, "fidelity": fv.value, "method": fv.method,
             "error_estimate": fv.error_estimate}
            for g, fv in rows
        ]
        text = json.dumps(payload, sort_keys=True)
    else:
        lines = ["gamma,fidelity,method,error_estimate"]
        lines += [f"{_fmt(g)},{_fmt(fv.value)},{fv.method},{_fmt(fv.error_estimate)}" for g, fv in rows]
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_channel(args) -> int:
    spec = _StateSpec(args.state, args.dim)
    gamma = float(ChannelNoise(args.gamma))
    if spec.is_thermal:
        rho = thermal_state(spec.thermal_nbar, spec.dim)
    else:
        rho = spec.pure_state().density_matrix()
    if args.method == "monte_carlo":
        out = apply_channel_mc(rho, gamma, McSpec(args.samples, args.seed))
    elif args.method == "weyl_quadrature":
        out = apply_channel(rho, gamma, QuadratureSpec(args.quad_order))
    else:
        raise ValueError("channel supports weyl_quadrature or monte_carlo")
    trace = float(np.trace(out.mat).real)
    min_eig = float(np.linalg.eigvalsh(out.mat)[0])
    if args.json:
        payload = {
            "dim": out.dim,
            "trace": trace,
            "min_eigenvalue": min_eig,
            "trace_deficit": out.trace_deficit,
            "elements": [
                [r, c, out.mat[r, c].real, out.mat[r, c].imag]
                for r in range(out.dim) for c in range(out.dim)
            ],
        }
        text = json.dumps(payload, sort_keys=True)
    else:
        lines = [
            f"# trace={_fmt(trace)}",
            f"# min_eigenvalue={_fmt(min_eig)}",
            f"# trace_deficit={_fmt(out.trace_deficit)}",
            "row,col,re,im",
        ]
        lines += [
            f"{r},{c},{_fmt(out.mat[r, c].real)},{_fmt(out.mat[r, c].imag)}"
            for r in range(out.dim) for c in range(out.dim)
        ]
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------


def _battery(dim: int) -> list[tuple[str, TruncatedPureState]]:
    return [
        ("number:0", number_state(0, dim)),
        ("number:1", number_state(1, dim)),
        ("number:2", number_state(2, dim)),
        ("coherent:1", coherent_state(1.0, dim)),
        ("squeezed:1", squeezed_state(1.0, dim, tail_tol=1e-4)),
        ("superposition01", superposition01(dim)),
    ]


def _suite_scaling(args) -> tuple[bool, str]:
    quad = QuadratureSpec(args.quad_order if args.quad_order != DEFAULT_ARGS["quad_order"] else 96, 0.35)
    if args.state is not None and args.gamma is not None:
        psi = _StateSpec(args.state, args.dim).pure_state()
        resid = check_scaling_law(psi, args.gamma, quad)
        return resid < 1e-7, f"residual {resid:.3e} for {args.state} at gamma={_fmt(args.gamma)}"
    worst = 0.0
    for g in (0.25, 0.5, 1.0, 4.0):
        for _, psi in _battery(args.dim):
            worst = max(worst, check_scaling_law(psi, g, quad))
    return worst < 1e-6, f"worst residual {worst:.3e}"


def _suite_bound(args) -> tuple[bool, str]:
    rng = np.random.default_rng(args.seed)
    worst = -1.0
    for g in (0.5, 1.0, 2.0):
        bound = cf.max_fidelity(g)
        for _ in range(args.trials):
            raw = rng.normal(size=32) + 1j * rng.normal(size=32)
            psi = TruncatedPureState(raw / np.linalg.norm(raw))
            f = fidelity_pure(psi, g, QuadratureSpec(48))
            worst = max(worst, f.value - bound)
        sat = fidelity_pure(coherent_state(1.0, DEFAULT_DIM), g)
        if abs(sat.value - bound) > 1e-8:
            return False, f"coherent saturation off by {abs(sat.value - bound):.3e} at gamma={g}"
    ok = worst <= 1e-9
    return ok, f"max excess over bound {worst:.3e} across {3 * args.trials} random states"


def _suite_route(args) -> tuple[bool, str]:
    # dim capped by the two-copy route; wide grid keeps the truncated
    # squeezed state's boundary mass off the lattice edge
    dim = min(args.dim, 24)
    quad = QuadratureSpec(64, 0.5)
    grid = PhaseGrid(12.0, 192)
    worst_tight = 0.0
    worst_grid = 0.0
    for g in (0.5, 1.0, 2.0):
        for _, psi in _battery(dim):
            a = fidelity_pure(psi, g, quad).value
            b = fidelity_pure_direct(psi, g, quad).value
            c = fidelity_a_gamma(psi, g).value
            d = fidelity_wigner(psi, g, grid).value
            worst_tight = max(worst_tight, abs(a - b), abs(a - c))
            worst_grid = max(worst_grid, abs(a - d))
    ok = worst_tight < 1e-6 and worst_grid < 1e-4
    return ok, f"worst spread {worst_tight:.3e} (quadrature routes), {worst_grid:.3e} (grid route)"


def _suite_generating(args) -> tuple[bool, str]:
    worst = 0.0
    for g in (0.5, 1.0, 2.0, 3.0):
        for lam in (0.2, 0.5):
            partial = sum(lam**n * cf.fidelity_number(n, g) for n in range(41))
            tail = lam**41 / (1.0 - lam)
            gap = abs(partial - cf.generating_function(g, lam))
            worst = max(worst, gap - tail)
    return worst < 1e-8, f"worst partial-sum gap beyond tail bound {worst:.3e}"


def _suite_thermal(args) -> tuple[bool, str]:
    # n = 40 ensemble members need the denser clustered rule at gamma = 2
    quad = QuadratureSpec(64, 0.5)
    worst = 0.0
    for nbar in (0.5, 1.0, 2.0):
        rho = thermal_state(nbar, DEFAULT_DIM, tail_tol=1e-6)
        ens = bose_einstein_ensemble(nbar)
        for g in (0.5, 1.0, 2.0):
            ent = entanglement_fidelity(rho, g, quad).value
            mean = ensemble_fidelity(ens, g, quad).value
            if not (ent < mean < cf.max_fidelity(g)):
                return False, f"ordering broken at nbar={nbar}, gamma={g}"
            worst = max(
                worst,
                abs(ent - cf.thermal_entanglement_fidelity(nbar, g)),
                abs(mean - cf.thermal_ensemble_fidelity(nbar, g)),
            )
    return worst < 1e-6, f"strict ordering holds; worst closed-form gap {worst:.3e}"


_SUITES = {
    "scaling": _suite_scaling,
    "bound": _suite_bound,
    "route": _suite_route,
    "generating": _suite_generating,
    "thermal": _suite_thermal,
}


def _cmd_verify(args) -> int:
    names = [args.suite] if args.suite else list(_SUITES)
    all_ok = True
    for name in names:
        ok, detail = _SUITES[name](args)
        all_ok = all_ok and ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all_ok else 3


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

DEFAULT_ARGS = {"quad_order": 40, "samples": 100000, "seed": 7}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gaussfock",
        description="Fidelity of bosonic states under Gaussian displacement noise.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, state_required=True):
        sp.add_argument("--state", required=state_required,
                        help="number:N | coherent:Z | squeezed:NBAR | superposition01 | thermal:NBAR[:(entanglement|ensemble)]")
        sp.add_argument("--dim", type=int, default=DEFAULT_DIM, help="Fock truncation")
        sp.add_argument("--quad-order", type=int, default=DEFAULT_ARGS["quad_order"],
                        dest="quad_order", help="Gauss-Hermite order per axis")
        sp.add_argument("--samples", type=int, default=DEFAULT_ARGS["samples"],
                        help="Monte-Carlo sample count")
        sp.add_argument("--seed", type=int, default=DEFAULT_ARGS["seed"], help="RNG seed")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to a file instead of stdout")

    sp = sub.add_parser("fidelity", help="one fidelity value")
    common(sp)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--method", choices=_METHOD_CHOICES, default="weyl_quadrature")
    sp.set_defaults(func=_cmd_fidelity)

    sp = sub.add_parser("curve", help="fidelity vs gamma as CSV")
    common(sp)
    sp.add_argument("--gamma-min", type=float, required=True, dest="gamma_min")
    sp.add_argument("--gamma-max", type=float, required=True, dest="gamma_max")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--method", choices=_METHOD_CHOICES, default="weyl_quadrature")
    sp.set_defaults(func=_cmd_curve)

    sp = sub.add_parser("channel", help="apply the channel, dump the density matrix")
    common(sp)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--method", choices=["weyl_quadrature", "monte_carlo"],
                    default="weyl_quadrature")
    sp.set_defaults(func=_cmd_channel)

    sp = sub.add_parser("verify", help="run invariant suites")
    common(sp, state_required=False)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--suite", choices=sorted(_SUITES), default=None)
    sp.add_argument("--trials", type=int, default=50, help="random states per gamma in the bound suite")
    sp.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
