"""Thresholds, the end-to-end analysis of one instance, and density sweeps.

The analysis follows the argument for density above 4/5: bound the average
degree of the bow-tie graph from below, split it into components, and look
for a (k+3, k)-configuration either in one large component or among the
dense ones.  The astronomically large constants (``3**(10k^2)`` and the
auxiliary beta) only ever appear as base-3 exponents.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb
from typing import Any, Sequence

from . import bowtie as bt
from .bowtie import InternalConsistencyError
from .config_search import (
    UNLIMITED,
    SearchBudget,
    SearchResult,
    Status,
    component_guided_search,
    is_config,
)
from .graph_census import (
    count_cherries,
    goodman_slack,
    jensen_cherry_lower_bound,
    triad_census,
    underlying_graph,
)
from .triple_system import (
    LinearTripleSystem,
    RationalLike,
    as_fraction,
    dilute,
    generate_steiner,
    linear_density,
)

SCHEMA_VERSION = 1
FOUR_FIFTHS = Fraction(4, 5)
SWEEP_COLUMNS = ("delta", "trial", "n", "dB_avg", "witness_found", "k", "elapsed_ms")


class BadEps(ValueError):
    pass


class BadK(ValueError):
    pass


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Thresholds:
    eps: Fraction
    k: int
    delta: Fraction
    n1: int
    n3: int
    beta_log3: float
    component_bound_exponent: int
    n0_practical: int
    n2: None = None

    def to_json(self) -> dict:
        return {
            "eps": frac_str(self.eps),
            "k": self.k,
            "delta": frac_str(self.delta),
            "n1": self.n1,
            "n2": None,
            "n3": self.n3,
            "n0_practical": self.n0_practical,
            "beta_log3": self.beta_log3,
            "component_bound_exponent": self.component_bound_exponent,
        }


def _n3_ok(n: int, eps: Fraction) -> bool:
    return Fraction(n - 1, n) >= 1 - eps / (4 + 5 * eps) and Fraction(5, 4 * n) <= eps / 2


def compute_thresholds(eps: RationalLike, k: int) -> Thresholds:
    """Thresholds for density ``4/5 + eps`` and configuration size k.

    n1 = ceil(12/delta) makes the bow-tie size bound apply; n3 is the least n
    satisfying both conditions of the average-degree lemma, found by
    scanning upward; beta is stored as its base-3 logarithm.  n2 has no
    formula and stays None.
    """
    eps = as_fraction(eps)
    if not 0 < eps <= Fraction(1, 5):
        raise BadEps(f"eps must lie in (0, 1/5], got {eps}")
    if k < 3:
        raise BadK(f"k must be >= 3, got {k}")
    delta = FOUR_FIFTHS + eps
    n1 = ceil(Fraction(12) / delta)
    n3 = 1
    while not _n3_ok(n3, eps):
        n3 += 1
    beta_log3 = math.log(eps.numerator, 3) - math.log(eps.denominator, 3) - 11 * k * k
    return Thresholds(
        eps=eps,
        k=k,
        delta=delta,
        n1=n1,
        n3=n3,
        beta_log3=beta_log3,
        component_bound_exponent=10 * k * k,
        n0_practical=max(n1, n3),
    )


def default_component_bound(k: int) -> int:
    return 10 * (k + 3)


# -- report -----------------------------------------------------------------


@dataclass
class Check:
    name: str
    relation: str
    lhs: Any
    rhs: Any
    holds: bool
    applicable: bool = True
    # identities and proven bounds are hard; heuristic counting-chain checks are not
    hard: bool = True

    def to_json(self) -> dict:
        def enc(x):
            return frac_str(x) if isinstance(x, Fraction) else x

        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "holds": self.holds,
            "applicable": self.applicable,
            "hard": self.hard,
        }


def _check(name: str, lhs, relation: str, rhs, applicable: bool = True, hard: bool = True) -> Check:
    ops = {"==": lambda a, b: a == b, ">=": lambda a, b: a >= b, "<=": lambda a, b: a <= b}
    return Check(name, relation, lhs, rhs, bool(ops[relation](lhs, rhs)), applicable, hard)


@dataclass
class AnalysisReport:
    n: int
    m: int
    d_lin: Fraction
    k: int
    component_bound: int
    census: dict
    bowtie: dict
    components: dict
    regime: dict
    branch: str
    search: dict
    witness: dict | None
    checks: list[Check] = field(default_factory=list)
    timings: dict | None = None

    @property
    def failures(self) -> list[Check]:
        """Hard checks that were applicable and did not hold."""
        return [c for c in self.checks if c.applicable and c.hard and not c.holds]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "instance": {
                "n": self.n,
                "m": self.m,
                "d_lin": frac_str(self.d_lin),
                "d_lin_float": float(self.d_lin),
            },
            "k": self.k,
            "component_bound": self.component_bound,
            "census": self.census,
            "bowtie": self.bowtie,
            "components": self.components,
            "regime": self.regime,
            "branch": self.branch,
            "search": self.search,
            "witness": self.witness,
            "checks": [c.to_json() for c in self.checks],
            "all_checks_pass": self.ok,
            "timings": self.timings,
        }


def identity_checks(H: LinearTripleSystem, brute_force_limit: int = 50):
    """Build U and B and run every exact identity; returns ``(U, B, census, checks)``."""
    U = underlying_graph(H)
    census = triad_census(U)
    B = bt.build_bowtie(H)
    checks = [
        _check("e(U) = 3e(H)", U.e, "==", 3 * H.m),
        _check("census total = C(n,3)", census.total, "==", comb(H.n, 3)),
        _check("goodman slack = p1", goodman_slack(U), "==", census.p1),
        _check("p1 >= 0", census.p1, ">=", 0),
    ]
    if H.n <= brute_force_limit:
        slow = triad_census(U, brute_force=True)
        checks.append(
            _check(
                "fast census = brute force",
                [census.p0, census.p1, census.p2, census.p3],
                "==",
                [slow.p0, slow.p1, slow.p2, slow.p3],
            )
        )
    lhs, rhs = bt.edge_identity(H, B, U)
    checks.append(_check("e(B) = 3 triangles(U) - 3e(H)", lhs, "==", rhs))
    lhs, rhs = bt.cherry_pair_identity(H, B, U)
    checks.append(_check("4|B| + 3e(H) = cherries(U)", lhs, "==", rhs))
    checks.append(_check("|B| = sum_v C(deg_H(v), 2)", B.size, "==", bt.pair_count(H)))
    max_deg = int(B.degrees.max()) if B.size else 0
    checks.append(_check("max degree of B <= 8", max_deg, "<=", bt.MAX_DEGREE))
    if H.n >= 2:
        checks.append(
            _check("cherries(U) >= Jensen bound", count_cherries(U), ">=", jensen_cherry_lower_bound(H))
        )
    return U, B, census, checks


def theorem_pipeline(
    H: LinearTripleSystem,
    k: int,
    practical_component_bound: int | None = None,
    budget: SearchBudget = UNLIMITED,
    eps: RationalLike | None = None,
    timings: bool = False,
) -> AnalysisReport:
    """Analyse one instance and look for a verified (k+3, k)-configuration.

    ``eps`` defaults to ``d_lin - 4/5`` (capped at 1/5) when the density is
    above 4/5.  The search is attempted whatever the density: the large
    component first when one reaches ``practical_component_bound``,
    otherwise dense components by size, then every remaining component.
    """
    if k < 3:
        raise BadK(f"k must be >= 3, got {k}")
    bound = default_component_bound(k) if practical_component_bound is None else practical_component_bound
    clock: dict[str, float] = {}
    t0 = time.perf_counter()

    d = linear_density(H)
    U, B, census, checks = identity_checks(H)
    clock["census_and_bowtie_ms"] = (time.perf_counter() - t0) * 1000

    avg = bt.average_degree(B)
    max_deg = int(B.degrees.max()) if B.size else 0

    # lower bounds on the bow-tie graph
    denom = d * (H.n - 1) - 1
    if denom > 0 and B.size > 0:
        actual, lower = bt.avg_degree_bound(H, B)
        checks.append(_check("avg deg(B) >= 16 - 8n/(d(n-1)-1)", actual, ">=", lower))
    size, size_bound, applicable = bt.size_lower_bound(H, B)
    checks.append(_check("|B| >= d^2 n^3 / 16", Fraction(size), ">=", size_bound, applicable))

    if eps is None:
        eps_f = min(d - FOUR_FIFTHS, Fraction(1, 5)) if d > FOUR_FIFTHS else None
    else:
        eps_f = as_fraction(eps)
    regime: dict[str, Any] = {
        "eps": None,
        "n1": None,
        "n2": None,
        "n3": None,
        "n0_practical": None,
        "beta_log3": None,
        "component_bound_exponent": None,
        "provable": False,
    }
    thr = None
    if eps_f is not None and 0 < eps_f <= Fraction(1, 5):
        thr = compute_thresholds(eps_f, k)
        dense_enough = d >= thr.delta
        regime.update(
            eps=frac_str(eps_f),
            n1=thr.n1,
            n3=thr.n3,
            n0_practical=thr.n0_practical,
            beta_log3=thr.beta_log3,
            component_bound_exponent=thr.component_bound_exponent,
            provable=dense_enough and H.n >= thr.n0_practical,
        )
        checks.append(
            _check(
                "avg deg(B) >= 6 + eps",
                avg,
                ">=",
                bt.DENSE_AVG_DEGREE + eps_f,
                applicable=dense_enough and H.n >= thr.n3 and B.size > 0,
            )
        )
        checks.append(
            _check(
                "|B| >= n^3/25",
                Fraction(B.size),
                ">=",
                Fraction(H.n**3, 25),
                applicable=dense_enough and H.n >= thr.n1,
            )
        )

    comps = bt.components(B)
    dc = bt.dense_census(B, bound, comps)
    lhs, rhs = bt.up_avg_check(B, dc)
    checks.append(_check("avg deg(B) <= 6 + 2 sum_I |C_i| / |B|", lhs, "<=", rhs, applicable=B.size > 0))
    clock["components_ms"] = (time.perf_counter() - t0) * 1000 - clock["census_and_bowtie_ms"]

    large = [c for c in comps if c.size >= bound]
    if not comps or B.e == 0:
        branch = "no_seeds"
        order = []
    elif large:
        branch = "large_component"
        order = large[:1]
    else:
        branch = "dense_components"
        order = [c for c in comps if c.dense]
        if eps_f is not None and B.size > 0:
            checks.append(
                _check(
                    "sum_I |C_i| >= eps|B|/2",
                    Fraction(dc.dense_total),
                    ">=",
                    eps_f * B.size / 2,
                    hard=False,
                )
            )
            if dc.dense_count > 0:
                lhs_log = math.log(dc.dense_count, 3)
                rhs_log = math.log(eps_f, 3) + math.log(B.size, 3) - (10 * k * k + 1)
                checks.append(_check("log3 |I| >= log3(eps|B|) - 10k^2 - 1", lhs_log, ">=", rhs_log, hard=False))
    picked = {c.id for c in order}
    rest = [c for c in comps if c.id not in picked]

    t1 = time.perf_counter()
    result: SearchResult | None = None
    fallback = False
    seeds = 0
    best = None
    for i, comp in enumerate(order + rest):
        if comp.edges == 0:
            continue
        res = component_guided_search(H, B, comp, k, budget)
        seeds += res.seeds_tried
        if res.config is not None and (best is None or res.config.k > best.k):
            best = res.config
        if res.found:
            result = res
            fallback = i >= len(order)
            break
    clock["search_ms"] = (time.perf_counter() - t1) * 1000

    witness = None
    if result is not None:
        c = result.config
        sound = is_config(H, c.edge_indices, k + 3, k)
        checks.append(_check("witness is a (k+3,k)-configuration", sound, "==", True))
        if not sound:
            raise InternalConsistencyError(f"unsound witness {sorted(c.edge_indices)}")
        witness = c.to_json(s=k + 3)
        status = Status.FOUND.value
    elif branch == "no_seeds":
        status = "no_seeds"
    else:
        status = Status.FAILED.value

    report = AnalysisReport(
        n=H.n,
        m=H.m,
        d_lin=d,
        k=k,
        component_bound=bound,
        census={
            "e_U": U.e,
            "kappa_triangle": census.kappa_triangle,
            "kappa_cherry": census.kappa_cherry,
            "p0": census.p0,
            "p1": census.p1,
            "p2": census.p2,
            "p3": census.p3,
        },
        bowtie={
            "size": B.size,
            "edges": B.e,
            "max_degree": max_deg,
            "avg_degree": frac_str(avg),
            "avg_degree_float": float(avg),
            "eps_slack": frac_str(avg - bt.DENSE_AVG_DEGREE) if B.size else None,
        },
        components={
            "count": len(comps),
            "largest": comps[0].size if comps else 0,
            "dense_count": dc.dense_count,
            "dense_small_count": dc.dense_small_count,
            "dense_total": dc.dense_total,
            "up_avg_slack": frac_str(rhs - lhs) if B.size else None,
        },
        regime=regime,
        branch=branch,
        search={
            "status": status,
            "seeds_tried": seeds,
            "fallback": fallback,
            "best_size": best.k if best is not None else 0,
        },
        witness=witness,
        checks=checks,
        timings={k_: round(v, 3) for k_, v in clock.items()} if timings else None,
    )
    return report


# -- sweeps -----------------------------------------------------------------


def _sweep_row(args) -> dict:
    n, k, delta, trial, seed, bound, budget, timings = args
    t = time.perf_counter()
    H = dilute(generate_steiner(n), delta, seed + trial)
    rep = theorem_pipeline(H, k, bound, budget)
    if not rep.ok:
        raise InternalConsistencyError(
            f"n={n} delta={delta} trial={trial}: " + "; ".join(c.name for c in rep.failures)
        )
    elapsed = (time.perf_counter() - t) * 1000
    return {
        "delta": f"{float(delta):.6g}",
        "trial": trial,
        "n": n,
        "dB_avg": rep.bowtie["avg_degree_float"],
        "witness_found": rep.witness is not None,
        "k": k,
        "elapsed_ms": round(elapsed, 1) if timings else "",
    }


def density_sweep(
    n: int,
    k: int,
    density_grid: Sequence[RationalLike],
    trials: int,
    seed: int,
    practical_component_bound: int | None = None,
    budget: SearchBudget = UNLIMITED,
    workers: int = 1,
    timings: bool = False,
) -> list[dict]:
    """Dilute STS(n) to each density, ``trials`` times (trial t uses seed + t), and run the pipeline.

    Rows come back in grid order then trial order regardless of ``workers``.
    ``elapsed_ms`` is left blank unless ``timings`` is set, keeping the
    output byte-reproducible.
    """
    grid = [as_fraction(x) for x in density_grid]
    generate_steiner(n)  # fail fast on inadmissible n
    jobs = [(n, k, delta, t, seed, practical_component_bound, budget, timings) for delta in grid for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_row, jobs))
    return [_sweep_row(j) for j in jobs]


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "dB_avg": f"{r['dB_avg']:.6f}", "witness_found": str(r["witness_found"]).lower()})
    return buf.getvalue()
