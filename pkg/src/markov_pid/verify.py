"""Randomized and targeted verification suites.

Each suite returns a :class:`SuiteReport`.  Trial ``i`` draws from
``numpy.random.default_rng([seed, i])``, so a failure record (seed, trial,
fingerprint) is enough to rebuild the instance.  The independent-sums probe
only reports deviations; it never records failures.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .discrete_ui import (
    Mode,
    canonical_example,
    decompose_discrete,
    default_t_card,
    lemma_b1_verify,
    ui_discrete,
)
from .exceptions import UsageError
from .generators import (
    fingerprint,
    gaussian_product,
    lowrank_gaussian,
    random_discrete,
    structured_gaussian,
    wishart_gaussian,
)
from .gaussian_ui import (
    counterexample_family,
    numeric_ui_verify,
    optimal_extractor,
    pid_terms_gaussian,
    ui_gaussian,
)
from .joint import DiscreteJoint
from .measures import gaussian_mi, markov_check_gaussian
from .pid import Definition
from .units import InfoUnit, as_unit

NEG_TOL = 1e-9
DEFINITIONS = (Definition.TMXY, Definition.MYXT)


@dataclass
class SuiteReport:
    suite_name: str
    trials: int
    rng_seed: int
    failures: list[dict] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    #: False for report-only suites, whose outcome never fails a run
    assertable: bool = True
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, trial: int, fp: str, check: str, observed: float, bound: float, **extra) -> None:
        rec = {"trial": trial, "fingerprint": fp, "check": check, "observed": observed, "bound": bound}
        rec.update(extra)
        self.failures.append(rec)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "suite_name": self.suite_name,
            "trials": self.trials,
            "rng_seed": self.rng_seed,
            "assertable": self.assertable,
            "passed": self.passed,
            "failures": self.failures,
            "rows": self.rows,
        }
        if include_timing:
            d["elapsed"] = self.elapsed
        return d

    def summary_line(self) -> str:
        if not self.assertable:
            status = "REPORT"
        else:
            status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite_name}: {self.trials} trials, {len(self.failures)} failures (seed {self.rng_seed})"


def _rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _timed(fn: Callable[..., SuiteReport]) -> Callable[..., SuiteReport]:
    def wrapper(*args, **kwargs) -> SuiteReport:
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _check_pid(rep: SuiteReport, trial: int, fp: str, terms, definition: Definition) -> None:
    tag = definition.value
    pairs = [
        ("ui_x <= i_mx", terms.ui_x, terms.i_mx),
        ("ui_x <= i_mx_given_y", terms.ui_x, terms.i_mx_given_y),
        ("ui_y <= i_my", terms.ui_y, terms.i_my),
        ("ui_y <= i_my_given_x", terms.ui_y, terms.i_my_given_x),
    ]
    for name, lhs, rhs in pairs:
        if not lhs <= rhs + NEG_TOL:
            rep.fail(trial, fp, f"{tag}: {name}", lhs, rhs)
    for name, v in terms.values().items():
        if not v >= -NEG_TOL:
            rep.fail(trial, fp, f"{tag}: {name} >= 0", v, -NEG_TOL)


def _gaussian_instance(rng: np.random.Generator, trial: int, max_dim: int):
    dims = tuple(int(d) for d in rng.integers(1, max_dim + 1, size=3))
    kind = trial % 3
    if kind == 0:
        return structured_gaussian(rng, dims, parent=("M", "X")[trial // 3 % 2])
    if kind == 1:
        return wishart_gaussian(rng, dims)
    return lowrank_gaussian(rng, dims)


@_timed
def nonnegativity_suite(
    domain: str,
    trials: int,
    seed: int = 0,
    max_dim: int = 3,
    max_alphabet: int = 3,
    t_card: int = 4,
) -> SuiteReport:
    """Upper bounds ``UI <= I(M;X)``, ``UI <= I(M;X|Y)`` and non-negative PID terms.

    Checked for both definitions and both sources on every instance.
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if domain not in ("gaussian", "discrete"):
        raise UsageError(f"domain must be 'gaussian' or 'discrete', got {domain!r}")
    rep = SuiteReport(f"nonnegativity[{domain}]", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        if domain == "gaussian":
            g = _gaussian_instance(rng, i, max_dim)
            fp = fingerprint(g.cov)
            for d in DEFINITIONS:
                terms = pid_terms_gaussian(g, d, InfoUnit.NATS)
                _check_pid(rep, i, fp, terms, d)
        else:
            shape = rng.integers(2, max_alphabet + 1, size=3)
            joint = random_discrete(rng, shape, sparse=bool(i % 2))
            fp = fingerprint(joint.probs)
            for d in DEFINITIONS:
                terms = decompose_discrete(joint, d, t_card, Mode.EXACT, InfoUnit.NATS).terms
                _check_pid(rep, i, fp, terms, d)
    return rep


@_timed
def symmetry_counterexample_suite(
    unit: InfoUnit | str = InfoUnit.BITS,
    params: tuple[float, float] = (0.6, 0.3),
    min_gap_bits: float = 0.1,
) -> SuiteReport:
    """Both scalar families: zero unique information yet unequal redundancies."""
    unit = as_unit(unit)
    rep = SuiteReport("symmetry_counterexample", 2, 0)
    gap_floor = unit.from_nats(InfoUnit.BITS.to_nats(min_gap_bits))
    for i, d in enumerate(DEFINITIONS):
        g = counterexample_family(d, params)
        terms = pid_terms_gaussian(g, d, unit)
        gap = abs(terms.r_x - terms.r_y)
        rep.rows.append(
            {
                "definition": d.value,
                "params": list(params),
                "ui_x": terms.ui_x,
                "ui_y": terms.ui_y,
                "r_x": terms.r_x,
                "r_y": terms.r_y,
                "r_gap": gap,
                "unit": unit.value,
            }
        )
        fp = fingerprint(g.cov)
        for name in ("ui_x", "ui_y"):
            v = getattr(terms, name)
            if abs(v) > NEG_TOL:
                rep.fail(i, fp, f"{d.value}: {name} == 0", v, NEG_TOL)
        if params != (0.0, 0.0) and not gap > gap_floor:
            rep.fail(i, fp, f"{d.value}: |r_x - r_y| > {min_gap_bits} bits", gap, gap_floor)
    return rep


def _random_contraction(rng: np.random.Generator, p: int, t: int) -> np.ndarray:
    u, _ = np.linalg.qr(rng.standard_normal((p, p)))
    v, _ = np.linalg.qr(rng.standard_normal((t, t)))
    k = min(p, t)
    s = np.zeros((p, t))
    s[np.arange(k), np.arange(k)] = rng.uniform(0.0, 1.0, size=k)
    return u @ s @ v.T


@_timed
def determinant_step_suite(trials: int = 200, max_dim: int = 4, seed: int = 0) -> SuiteReport:
    """``det(I - S'AS) >= det(I - A)`` for ``0 <= A <= I`` and ``S'S <= I``.

    Also checks the intermediate superadditivity step and equality for an
    orthogonal ``S``.
    """
    if max_dim > 8 or max_dim < 1:
        raise UsageError("max_dim must be between 1 and 8")
    if trials < 1:
        raise UsageError("trials must be at least 1")
    rep = SuiteReport("determinant_step", trials, seed)
    slack = 1e-12
    for i in range(trials):
        rng = _rng(seed, i)
        p = int(rng.integers(1, max_dim + 1))
        t = int(rng.integers(1, max_dim + 1))
        q, _ = np.linalg.qr(rng.standard_normal((p, p)))
        a = (q * rng.uniform(0.0, 1.0, size=p)) @ q.T
        a = 0.5 * (a + a.T)
        s = _random_contraction(rng, p, t)
        fp = fingerprint(a, s)
        ip = np.eye(p)
        rhs = np.linalg.det(ip - a)
        lhs = np.linalg.det(np.eye(t) - s.T @ a @ s)
        if not lhs >= rhs - slack:
            rep.fail(i, fp, "det(I - S'AS) >= det(I - A)", lhs, rhs)
        sst = s @ s.T
        mid = np.linalg.det(ip - a + a @ (ip - sst))
        mid_bound = rhs + np.linalg.det(a) * np.linalg.det(ip - sst)
        if not mid >= mid_bound - slack:
            rep.fail(i, fp, "det(I - A + A(I - SS')) >= det(I - A) + det(A) det(I - SS')", mid, mid_bound)
        o, _ = np.linalg.qr(rng.standard_normal((p, p)))
        eq = np.linalg.det(ip - o.T @ a @ o)
        if not abs(eq - rhs) <= slack:
            rep.fail(i, fp, "equality at SS' = I", eq, rhs)
        rep.rows.append({"trial": i, "p": p, "t": t, "lhs": lhs, "rhs": rhs, "equality_lhs": eq})
    return rep


@_timed
def independent_sums_probe(
    domain: str,
    trials: int,
    seed: int = 0,
    unit: InfoUnit | str = InfoUnit.BITS,
    max_vars: int = 16,
    samples: int = 64,
) -> SuiteReport:
    """``UI(product) - UI(part 1) - UI(part 2)`` on independent pairs; report only.

    Gaussian trials stack two random instances block-diagonally.  Discrete
    trial 0 is RDN x UNQ over ``t_card = 2..5``; later trials pair random
    binary joints.  Discrete rows carry the certification flag of the
    product solve, since a deviation from an uncertified solve may just be
    solver slack.
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if domain not in ("gaussian", "discrete"):
        raise UsageError(f"domain must be 'gaussian' or 'discrete', got {domain!r}")
    unit = as_unit(unit)
    rep = SuiteReport(f"independent_sums[{domain}]", trials, seed, assertable=False)
    for i in range(trials):
        rng = _rng(seed, i)
        if domain == "gaussian":
            d1 = tuple(int(d) for d in rng.integers(1, 3, size=3))
            d2 = tuple(int(d) for d in rng.integers(1, 3, size=3))
            g1 = structured_gaussian(rng, d1, parent="M")
            g2 = structured_gaussian(rng, d2, parent="X")
            g = gaussian_product(g1, g2)
            for d in DEFINITIONS:
                whole = ui_gaussian(g, d, unit).value
                parts = ui_gaussian(g1, d, unit).value + ui_gaussian(g2, d, unit).value
                rep.rows.append(
                    {
                        "trial": i,
                        "definition": d.value,
                        "fingerprint": fingerprint(g.cov),
                        "ui_product": whole,
                        "ui_sum_of_parts": parts,
                        "deviation": whole - parts,
                        "unit": unit.value,
                    }
                )
            continue
        if i == 0:
            j1, j2 = canonical_example("RDN"), canonical_example("UNQ")
            t_cards = [2, 3, 4, 5]
        else:
            j1 = random_discrete(rng, (2, 2, 2))
            j2 = random_discrete(rng, (2, 2, 2))
            t_cards = [None]
        prod = j1.product(j2)
        for d in DEFINITIONS:
            parts = sum(
                ui_discrete(j, d, None, Mode.AUTO, unit, seed, samples, max_vars).value for j in (j1, j2)
            )
            for tc in t_cards:
                res = ui_discrete(prod, d, tc, Mode.AUTO, unit, seed, samples, max_vars)
                rep.rows.append(
                    {
                        "trial": i,
                        "definition": d.value,
                        "fingerprint": fingerprint(prod.probs),
                        "t_card": res.t_card,
                        "method": res.method.value,
                        "certified": res.certified,
                        "ui_product": res.value,
                        "ui_sum_of_parts": parts,
                        "deviation": res.value - parts,
                        "unit": unit.value,
                    }
                )
    return rep


@_timed
def gaussian_closed_form_vs_numeric_suite(
    trials: int = 50,
    dims: tuple[int, int, int] = (3, 3, 3),
    seed: int = 0,
    vary_dims: bool = False,
    restarts: int = 32,
    tol: float = 1e-6,
) -> SuiteReport:
    """Closed form against direct numerical maximization, both definitions, in nats.

    Passes when the numeric optimum lies in ``[closed - tol, closed + 1e-9]``.
    With ``vary_dims`` each trial draws its block sizes from ``1..dims``.
    Even trials use the latent-structure generator (non-trivial null space),
    odd trials the Wishart generator.
    """
    if any(d > 4 or d < 1 for d in dims):
        raise UsageError("block dims must lie in 1..4")
    rep = SuiteReport("closed_form_vs_numeric", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        dd = tuple(int(rng.integers(1, d + 1)) for d in dims) if vary_dims else tuple(dims)
        for k, d in enumerate(DEFINITIONS):
            parent = "M" if d is Definition.TMXY else "X"
            g = structured_gaussian(rng, dd, parent) if i % 2 == 0 else wishart_gaussian(rng, dd)
            fp = fingerprint(g.cov)
            nv = numeric_ui_verify(g, d, restarts=restarts, seed=seed * 1000 + i, unit=InfoUnit.NATS)
            kdim = ui_gaussian(g, d).kernel_dim
            rep.rows.append(
                {
                    "trial": i,
                    "definition": d.value,
                    "dims": list(dd),
                    "kernel_dim": kdim,
                    "closed_form": nv.closed_form,
                    "numeric": nv.value,
                    "gap": nv.gap,
                }
            )
            if not nv.within(tol, 1e-9):
                rep.fail(i, fp, f"{d.value}: numeric within [cf - {tol:g}, cf + 1e-9] nats", nv.value, nv.closed_form)
    return rep


@_timed
def extractor_suite(trials: int = 25, seed: int = 0, max_dim: int = 3) -> SuiteReport:
    """Closed-form extractors on instances whose null space is non-trivial.

    Checks ``|S_TY| <= 1e-9``, the Markov chain ``T - parent - rest`` and
    ``I(T; target)`` against the closed-form value (1e-9 nats).
    """
    rep = SuiteReport("extractor_validity", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        d = DEFINITIONS[i % 2]
        parent, target = ("M", "X") if d is Definition.TMXY else ("X", "M")
        while True:
            dims = [int(v) for v in rng.integers(1, max_dim + 1, size=3)]
            dims[0 if parent == "M" else 1] = max(dims[0 if parent == "M" else 1], 2)
            g = structured_gaussian(rng, tuple(dims), parent)
            if ui_gaussian(g, d).kernel_dim > 0:
                break
        fp = fingerprint(g.cov)
        ex = optimal_extractor(g, d, InfoUnit.NATS)
        j = ex.joint
        rest = tuple(n for n in ("M", "X", "Y") if n != parent)
        ty = float(np.max(np.abs(j.block("T", "Y"))))
        mk = markov_check_gaussian(j, ("T", parent, rest))
        info = gaussian_mi(j, "T", target, InfoUnit.NATS)
        rep.rows.append(
            {
                "trial": i,
                "definition": d.value,
                "t_dim": j.dim("T"),
                "sigma_ty_max": ty,
                "markov_residual": mk.residual,
                "mi_t_target": info,
                "closed_form": ex.value,
            }
        )
        if ty > 1e-9:
            rep.fail(i, fp, "|S_TY| <= 1e-9", ty, 1e-9)
        if not mk.holds:
            rep.fail(i, fp, f"T - {parent} - {rest} Markov", mk.residual, 1e-9)
        if abs(info - ex.value) > 1e-9:
            rep.fail(i, fp, "I(T; target) == closed form", info, ex.value)
    return rep


def _lattice_column(rng: np.random.Generator, size: int, grid: int) -> np.ndarray:
    cuts = np.sort(rng.integers(0, grid + 1, size=size - 1))
    counts = np.diff(np.concatenate([[0], cuts, [grid]]))
    return counts / grid


def random_binary_chain(rng: np.random.Generator, x_size: int, grid: int = 4) -> DiscreteJoint:
    """``p(x | y) p(y, z)`` with binary ``y, z`` and lattice-valued probabilities.

    Lattice values make exact independence a positive-probability event, so
    rejection sampling on ``X`` independent of ``Z`` terminates.
    """
    pxy = np.stack([_lattice_column(rng, x_size, grid) for _ in range(2)], axis=1)
    pyz = _lattice_column(rng, 4, grid).reshape(2, 2)
    p = pxy[:, :, None] * pyz[None, :, :]
    return DiscreteJoint(p, ("X", "Y", "Z"))


@_timed
def lemma_b1_suite(trials: int = 100, seed: int = 0, tol: float = 1e-9, max_tries: int = 100_000) -> SuiteReport:
    """Rejection-sample binary chains with X independent of Z and Y dependent on Z."""
    rep = SuiteReport("lemma_b1", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        x_size = int(rng.integers(2, 5))
        for tries in range(1, max_tries + 1):
            joint = random_binary_chain(rng, x_size)
            report = lemma_b1_verify(joint, tol)
            if report.hypothesis:
                break
        else:
            raise RuntimeError(f"trial {i}: no instance satisfied the hypothesis in {max_tries} draws")
        rep.rows.append(
            {
                "trial": i,
                "x_size": x_size,
                "tries": tries,
                "mi_xz": report.mi_xz,
                "mi_yz": report.mi_yz,
                "mi_xy": report.mi_xy,
            }
        )
        if report.mi_xy > 1e-6:
            rep.fail(i, fingerprint(joint.probs), "I(X;Y) <= 1e-6 bits", report.mi_xy, 1e-6)
    return rep


@_timed
def duality_suite(domain: str, trials: int = 25, seed: int = 0, t_card: int = 3) -> SuiteReport:
    """MYXT on a joint equals TMXY with M and X exchanged."""
    rep = SuiteReport(f"duality[{domain}]", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        if domain == "gaussian":
            dims = tuple(int(d) for d in rng.integers(1, 4, size=3))
            g = structured_gaussian(rng, dims, parent="X")
            fp = fingerprint(g.cov)
            a = ui_gaussian(g, Definition.MYXT, InfoUnit.NATS).value
            b = ui_gaussian(g.swap("M", "X"), Definition.TMXY, InfoUnit.NATS).value
            ok = a == b
        else:
            joint = random_discrete(rng, rng.integers(2, 4, size=3), sparse=bool(i % 3 == 2))
            fp = fingerprint(joint.probs)
            a = ui_discrete(joint, Definition.MYXT, t_card, unit=InfoUnit.NATS).value
            b = ui_discrete(joint.swap("M", "X"), Definition.TMXY, t_card, unit=InfoUnit.NATS).value
            ok = abs(a - b) <= 1e-9
        rep.rows.append({"trial": i, "myxt": a, "tmxy_swapped": b})
        if not ok:
            rep.fail(i, fp, "MYXT == TMXY(M <-> X)", a, b)
    return rep


#: Suites reachable from the command line, keyed by their CLI names.
CLI_SUITES = ("nonneg", "symmetry", "detstep", "sums", "closedform")


def run_named_suite(
    name: str, trials: int | None, seed: int, unit: InfoUnit, tol: float = 1e-6
) -> list[SuiteReport]:
    """Run a CLI suite; ``trials=None`` uses the acceptance-run trial counts."""
    if name == "nonneg":
        return [
            nonnegativity_suite("gaussian", trials or 100, seed),
            nonnegativity_suite("discrete", trials or 50, seed),
        ]
    if name == "symmetry":
        return [symmetry_counterexample_suite(unit)]
    if name == "detstep":
        return [determinant_step_suite(trials or 200, 4, seed)]
    if name == "sums":
        return [
            independent_sums_probe("gaussian", trials or 10, seed, unit),
            independent_sums_probe("discrete", trials or 3, seed, unit),
        ]
    if name == "closedform":
        return [gaussian_closed_form_vs_numeric_suite(trials or 50, (3, 3, 3), seed, vary_dims=True, tol=tol)]
    if name == "all":
        out = []
        for n in CLI_SUITES:
            out.extend(run_named_suite(n, trials, seed, unit, tol))
        return out
    raise UsageError(f"unknown suite {name!r}; choose from {', '.join(CLI_SUITES + ('all',))}")
