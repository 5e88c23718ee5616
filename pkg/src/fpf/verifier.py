"""Exhaustive and sampled campaigns checking "spectral <=> tiles" in Z_p^2,
pair certificates, and the search for a spectral non-tile in Z_3^5.

Campaign reports are deterministic: the JSON form depends only on the
configuration, never on the job count, the kernel backend, or timing.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from fpf import kernel
from fpf.core import Ambient, PointSet, orbit_masks, unrank_combination
from fpf.directions import graph_presentation
from fpf.errors import ConfigError, DimensionMismatchError
from fpf.fourier import convolve_indicator, hyperplane_profile
from fpf.setfile import format_set
from fpf.spectra import is_orthogonal_spectrum, is_spectral
from fpf.tiling import divisibility_obstruction, find_tiling_complement, is_tiling_pair, tiles

log = logging.getLogger(__name__)

REPORT_FORMAT = "fpf-verification-report/1"
RNG_ALGORITHM = "splitmix64-counter/v1"
CHUNK = 1 << 22
EXHAUSTIVE_MAX_P = 5


@dataclass(frozen=True)
class CampaignConfig:
    """mode is "exhaustive", "size" (with ``size``) or "sample" (with ``samples``)."""

    p: int
    mode: str = "exhaustive"
    size: int | None = None
    samples: int | None = None
    seed: int = 0
    jobs: int = 1
    audit: bool = False

    def __post_init__(self) -> None:
        Ambient(self.p, 2)
        p, n = self.p, self.p * self.p
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if p > kernel.MAX_KERNEL_PRIME:
            raise ConfigError(f"campaigns support p <= {kernel.MAX_KERNEL_PRIME}")
        if self.mode == "exhaustive":
            if p > EXHAUSTIVE_MAX_P:
                raise ConfigError(f"exhaustive campaigns need p <= {EXHAUSTIVE_MAX_P}; use size:{p}")
        elif self.mode == "size":
            if self.size is None or not 1 <= self.size <= n:
                raise ConfigError(f"size must be in [1, {n}]")
            if p > EXHAUSTIVE_MAX_P and self.size != p:
                raise ConfigError(f"for p = {p} only size:{p} is supported")
        elif self.mode == "sample":
            if self.samples is None or self.samples < 1:
                raise ConfigError("sample mode needs a positive sample count")
        else:
            raise ConfigError(f"unknown mode {self.mode!r}")

    @classmethod
    def from_mode_string(cls, p: int, mode: str, **kwargs: Any) -> CampaignConfig:
        """Parse ``exhaustive``, ``size:<k>`` or ``sample:<n>``."""
        name, _, arg = mode.partition(":")
        try:
            if name == "exhaustive" and not arg:
                return cls(p, "exhaustive", **kwargs)
            if name == "size":
                return cls(p, "size", size=int(arg), **kwargs)
            if name == "sample":
                return cls(p, "sample", samples=int(arg), **kwargs)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad mode {mode!r}: {exc}") from None
        raise ConfigError(f"bad mode {mode!r}")

    @property
    def mode_string(self) -> str:
        if self.mode == "size":
            return f"size:{self.size}"
        if self.mode == "sample":
            return f"sample:{self.samples}"
        return self.mode

    @property
    def pruned(self) -> bool:
        return not self.audit


def partition_work(total_ranks: int, jobs: int) -> list[tuple[int, int]]:
    """Contiguous, disjoint, covering ranges whose sizes differ by at most one."""
    if jobs < 1 or total_ranks < 0:
        raise ValueError("need jobs >= 1 and total_ranks >= 0")
    q, r = divmod(total_ranks, jobs)
    out = []
    start = 0
    for j in range(jobs):
        stop = start + q + (j < r)
        out.append((start, stop))
        start = stop
    return out


@dataclass(frozen=True)
class _Task:
    p: int
    mode: int
    k: int
    start: int
    stop: int
    seed: int
    audit: bool
    prune: bool
    collect: bool


def _run_task(task: _Task) -> dict:
    first = None
    if task.mode == 1 and task.start < task.stop:
        first = unrank_combination(task.start, task.k, task.p * task.p)
    return kernel.run_block(
        task.p, task.mode, task.k, task.start, task.stop,
        seed=task.seed, audit=task.audit, prune=task.prune, collect=task.collect,
        first_mask=first,
    )


def _tasks(config: CampaignConfig) -> tuple[list[_Task], dict[int, int]]:
    """Kernel tasks plus the sizes whose every set is tallied without a search."""
    p, n = config.p, config.p * config.p
    prune = config.pruned
    collect = config.mode != "sample"
    families: list[tuple[int, int, int, int]] = []  # (mode, k, lo, hi)
    skipped: dict[int, int] = {}
    if config.mode == "exhaustive":
        if config.audit:
            families.append((0, 0, 1, 2**n))
        else:
            for k in range(1, n + 1):
                if k in (1, p, n):
                    families.append((1, k, 0, math.comb(n, k)))
                else:
                    skipped[k] = math.comb(n, k)
    elif config.mode == "size":
        k = config.size
        if prune and k not in (1, p, n):
            skipped[k] = math.comb(n, k)
        else:
            families.append((1, k, 0, math.comb(n, k)))
    else:
        families.append((2, 0, 0, config.samples))
    tasks = []
    for mode, k, lo, hi in families:
        for start, stop in partition_work(hi - lo, config.jobs):
            for s in range(start, stop, CHUNK):
                tasks.append(_Task(p, mode, k, lo + s, lo + min(stop, s + CHUNK),
                                   config.seed, config.audit, prune, collect))
    return tasks, skipped


@dataclass
class VerificationReport:
    config: CampaignConfig
    sizes: list[dict[str, Any]]
    violations: list[dict[str, Any]]
    audit: dict[str, list[str]] | None
    orbits: dict[str, Any] | None
    runtime: dict[str, Any] = field(default_factory=dict)

    @property
    def examined(self) -> int:
        return sum(row["examined"] for row in self.sizes)

    def total(self, key: str) -> int:
        return sum(row[key] for row in self.sizes)

    @property
    def fuglede_holds(self) -> bool:
        return not any(v["spectral"] != v["tiles"] for v in self.violations)

    @property
    def ok(self) -> bool:
        audit_clean = not self.audit or not any(self.audit.values())
        orbit_clean = not self.orbits or self.orbits["affine_invariance_failures"] == 0
        return not self.violations and audit_clean and orbit_clean

    def to_dict(self, include_runtime: bool = False) -> dict[str, Any]:
        c = self.config
        p = c.p
        out: dict[str, Any] = {
            "format": REPORT_FORMAT,
            "p": p,
            "d": 2,
            "mode": c.mode_string,
            "audit": c.audit,
            "pruned": c.pruned,
            "examined": self.examined,
            "sizes": self.sizes,
            "totals": {
                "spectral": self.total("spectral"),
                "tiling": self.total("tiling"),
                "graph": self.total("graph"),
                "points": next((r["spectral"] for r in self.sizes if r["size"] == 1), 0),
                "full_plane": next((r["spectral"] for r in self.sizes if r["size"] == p * p), 0),
                "agree": self.total("agree"),
            },
            "violations": self.violations,
            "fuglede_holds": self.fuglede_holds,
        }
        if c.mode == "sample":
            out["seed"] = c.seed
            out["rng"] = RNG_ALGORITHM
            out["sample_sizes"] = "outside {1} and multiples of p" if c.audit else "all nonempty"
        if self.audit is not None:
            out["audit_findings"] = self.audit
        if self.orbits is not None:
            out["orbits"] = self.orbits
        if include_runtime:
            out["runtime"] = self.runtime
        return out

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_dict(include_runtime), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        c = self.config
        lines = [
            f"Fuglede campaign in Z_{c.p}^2, mode {c.mode_string}"
            + (", audit" if c.audit else ", pruned"),
            f"examined {self.examined} sets; spectral {self.total('spectral')}, "
            f"tiling {self.total('tiling')}, graph {self.total('graph')}",
            f"{'size':>5} {'examined':>12} {'spectral':>10} {'tiling':>10} {'graph':>10} {'agree':>12}",
        ]
        for row in self.sizes:
            lines.append(
                f"{row['size']:>5} {row['examined']:>12} {row['spectral']:>10} {row['tiling']:>10} "
                f"{row['graph']:>10} {row['agree']:>12}" + ("  (pruned)" if row["pruned"] else "")
            )
        if self.orbits is not None:
            lines.append(f"affine orbits of spectral sets by size: {self.orbits['by_size']}")
        if self.audit is not None:
            lines.append("audit: " + ", ".join(f"{k}={len(v)}" for k, v in sorted(self.audit.items())))
        lines.append(f"violations: {len(self.violations)}")
        if self.runtime:
            lines.append(
                f"backend {self.runtime.get('backend')}, jobs {self.runtime.get('jobs')}, "
                f"{self.runtime.get('tasks')} tasks, {self.runtime.get('wall_clock_s', 0):.2f} s"
            )
        lines.append("RESULT: " + ("OK" if self.ok else "VIOLATIONS FOUND"))
        return "\n".join(lines) + "\n"


def _mask_set(p: int, mask: int) -> PointSet:
    return PointSet.from_mask(Ambient(p, 2), int(mask))


def orbit_statistics(p: int, masks: np.ndarray) -> dict[str, Any]:
    """Count AGL(2, p) orbits among the given masks and check that every
    affine image of a member is itself a member."""
    S = np.unique(masks.astype(np.uint64))
    visited = np.zeros(len(S), dtype=bool)
    by_size: dict[int, int] = {}
    failures = 0
    sizes = np.array([int(m).bit_count() for m in S]) if len(S) < 4096 else _popcounts(S)
    for i in range(len(S)):
        if visited[i]:
            continue
        cells = [b for b in range(p * p) if int(S[i]) >> b & 1]
        orbit = np.unique(orbit_masks(p, cells))
        idx = np.searchsorted(S, orbit)
        inside = idx < len(S)
        inside[inside] = S[idx[inside]] == orbit[inside]
        failures += int((~inside).sum())
        visited[idx[inside]] = True
        k = int(sizes[i])
        by_size[k] = by_size.get(k, 0) + 1
    return {
        "by_size": {str(k): v for k, v in sorted(by_size.items())},
        "affine_invariance_failures": failures,
    }


def _popcounts(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    out = np.zeros(len(a), dtype=np.int64)
    while a.any():
        out += (a & np.uint64(1)).astype(np.int64)
        a >>= np.uint64(1)
    return out


def verify_fuglede(
    config: CampaignConfig,
    progress: Callable[[int, int], None] | None = None,
) -> VerificationReport:
    t0 = time.perf_counter()
    p, n = config.p, config.p * config.p
    tasks, skipped = _tasks(config)
    tallies = [[0] * 5 for _ in range(n + 1)]
    violations: list[tuple[int, bool, bool, bool]] = []
    findings: dict[str, list[int]] = {"divisibility": [], "density": [], "closure": []}
    masks: list[np.ndarray] = []

    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results: Iterable[dict] = pool.map(_run_task, tasks)
            _merge(results, tallies, violations, findings, masks, progress, len(tasks))
    else:
        _merge(map(_run_task, tasks), tallies, violations, findings, masks, progress, len(tasks))

    for k, count in skipped.items():
        tallies[k][0] += count
        tallies[k][4] += count

    pruned_sizes = set(skipped) | (
        {k for k in range(n + 1) if k not in (1, p, n)} if config.pruned else set()
    )
    sizes = [
        {
            "size": k,
            "examined": row[0],
            "spectral": row[1],
            "tiling": row[2],
            "graph": row[3],
            "agree": row[4],
            "pruned": k in pruned_sizes,
        }
        for k, row in enumerate(tallies)
        if row[0]
    ]
    violation_rows = [
        {
            "set": format_set(_mask_set(p, m)),
            "spectral": s,
            "tiles": t,
            "graph": g,
            "kind": "spectral-vs-tiles" if s != t else "structure",
        }
        for m, s, t, g in sorted(violations)
    ]
    audit = None
    if config.audit:
        audit = {
            f"{name}_exceptions": [format_set(_mask_set(p, m)) for m in sorted(found)]
            for name, found in findings.items()
        }
    orbits = None
    if config.mode != "sample":
        all_masks = np.concatenate(masks) if masks else np.zeros(0, dtype=np.uint64)
        orbits = orbit_statistics(p, all_masks)
    report = VerificationReport(config, sizes, violation_rows, audit, orbits)
    report.runtime = {
        "backend": kernel.BACKEND,
        "jobs": config.jobs,
        "tasks": len(tasks),
        "partition": [[t.start, t.stop] for t in tasks],
        "wall_clock_s": time.perf_counter() - t0,
    }
    return report


def _merge(results, tallies, violations, findings, masks, progress, total) -> None:
    for done, res in enumerate(results, 1):
        for k, row in enumerate(res["tallies"]):
            for j, v in enumerate(row):
                tallies[k][j] += v
        violations.extend(res["violations"])
        findings["divisibility"].extend(res["divisibility"])
        findings["density"].extend(res["density"])
        findings["closure"].extend(res["closure"])
        if len(res["spectral_masks"]):
            masks.append(res["spectral_masks"])
        if progress is not None:
            progress(done, total)


def spot_check(p: int, count: int, seed: int = 0) -> list[tuple[int, tuple, tuple]]:
    """Compare kernel verdicts with the general library on random nonempty sets.

    Returns the disagreements as (mask, kernel verdict, library verdict)."""
    rng = random.Random(seed)
    ambient = Ambient(p, 2)
    n = p * p
    bad = []
    for _ in range(count):
        mask = 0
        while not mask:
            mask = rng.getrandbits(n)
        E = PointSet.from_mask(ambient, mask)
        s, t, g, _ = kernel.classify(p, mask)
        G = graph_presentation(E)
        lib = (is_spectral(E), tiles(E), G is not None and len(G.support) == p)
        if (s, t, g) != lib:
            bad.append((mask, (s, t, g), lib))
    return bad


# -- pair certificates -----------------------------------------------------------


@dataclass(frozen=True)
class PairCertificate:
    E: PointSet
    other: PointSet
    spectral_pair: bool
    tiling_pair: bool
    tiles: bool | None
    obstruction: str | None
    zero_differences: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    """(difference a - a', hyperplane profile of E at it) for each checked difference."""
    convolution_sha256: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "E": format_set(self.E),
            "other": format_set(self.other),
            "verdicts": {
                "spectral_pair": self.spectral_pair,
                "tiling_pair": self.tiling_pair,
                "tiles": self.tiles,
                "divisibility_obstruction": self.obstruction,
            },
            "witness": {
                "zero_differences": [
                    {"difference": list(m), "profile": list(prof)} for m, prof in self.zero_differences
                ],
                "convolution_sha256": self.convolution_sha256,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        lines = [
            f"ambient: Z_{self.E.ambient.p}^{self.E.ambient.d}, |E| = {self.E.size}, |other| = {self.other.size}",
            f"spectral pair: {self.spectral_pair}",
            f"tiling pair: {self.tiling_pair}",
            f"E tiles: {'unknown' if self.tiles is None else self.tiles}",
        ]
        if self.obstruction:
            lines.append(f"obstruction: {self.obstruction}")
        return "\n".join(lines) + "\n"


def _difference_profiles(E: PointSet, A: PointSet) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    vecs = A.vectors()
    out = {}
    for i, a in enumerate(vecs):
        for b in vecs[i + 1 :]:
            m = a - b
            out.setdefault(m.coords, hyperplane_profile(E, m).counts)
    return sorted(out.items())


def check_pair(E: PointSet, other: PointSet, search_tiles: bool = True) -> PairCertificate:
    """Certify (E, other) both as a spectral pair and as a tiling pair."""
    if E.ambient != other.ambient:
        raise DimensionMismatchError(f"{E.ambient} vs {other.ambient}")
    spectral_pair = bool(E.cells) and bool(other.cells) and E.size == other.size and is_orthogonal_spectrum(E, other)
    tiling_pair = is_tiling_pair(E, other)
    obstruction = divisibility_obstruction(E) if E.cells else "E is empty"
    if tiling_pair:
        tiles_verdict: bool | None = True
    elif obstruction:
        tiles_verdict = False
    elif search_tiles:
        tiles_verdict = find_tiling_complement(E) is not None
    else:
        tiles_verdict = None
    conv = convolve_indicator(E, other)
    digest = hashlib.sha256(",".join(map(str, conv)).encode()).hexdigest()
    diffs = tuple(_difference_profiles(E, other)) if other.size > 1 else ()
    return PairCertificate(E, other, spectral_pair, tiling_pair, tiles_verdict, obstruction, diffs, digest)


def verify_certificate(data: dict[str, Any]) -> bool:
    """Recompute every verdict and witness of a serialized certificate from
    its two sets alone."""
    from fpf.setfile import parse_set

    E = parse_set(data["E"])
    other = parse_set(data["other"])
    fresh = check_pair(E, other, search_tiles=data["verdicts"]["tiles"] is not None).to_dict()
    return fresh == data


# -- spectral non-tile in Z_3^5 ----------------------------------------------------


def _balance_cost(cols: list[list[int]], pairs: list[tuple[int, int]]) -> int:
    cost = 0
    for a, b in pairs:
        counts = [0, 0, 0]
        ca, cb = cols[a], cols[b]
        for i in range(6):
            counts[(ca[i] - cb[i]) % 3] += 1
        cost += sum((c - 2) ** 2 for c in counts)
    return cost


def search_z35(budget_secs: float = 600.0, seed: int = 0) -> PairCertificate | None:
    """Local search for a 6-point spectral set in Z_3^5 with spectrum {0, e_1..e_5}.

    The state is the 5x6 matrix whose columns are the points of E.  With
    that spectrum, orthogonality asks every coordinate of E and every
    difference of two coordinates to take each residue exactly twice.
    """
    rng = random.Random(seed)
    ambient = Ambient(3, 5)
    A = PointSet.from_vectors(ambient, [(0,) * 5] + [tuple(int(i == j) for i in range(5)) for j in range(5)])
    # column 0 is the zero coordinate standing for the spectrum point 0
    pairs = [(a, b) for a in range(6) for b in range(a + 1, 6)]
    deadline = time.monotonic() + budget_secs
    while time.monotonic() < deadline:
        cols = [[0] * 6] + [[rng.randrange(3) for _ in range(6)] for _ in range(5)]
        cost = _balance_cost(cols, pairs)
        stale = 0
        while cost and stale < 2000 and time.monotonic() < deadline:
            j, i, v = rng.randrange(1, 6), rng.randrange(6), rng.randrange(3)
            old = cols[j][i]
            if v == old:
                continue
            cols[j][i] = v
            new = _balance_cost(cols, pairs)
            if new <= cost:
                stale = stale + 1 if new == cost else 0
                cost = new
            else:
                cols[j][i] = old
                stale += 1
        if cost:
            continue
        points = [tuple(cols[j][i] for j in range(1, 6)) for i in range(6)]
        if len(set(points)) != 6:
            continue
        E = PointSet.from_vectors(ambient, points)
        cert = check_pair(E, A)
        if cert.spectral_pair and cert.tiles is False:
            return cert
    return None
