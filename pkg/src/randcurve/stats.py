"""Random-walk and uniform-ball sampling, Monte Carlo experiment harness,
and scaling-law fits.

Reproducibility contract: every sample draws from its own RNG seeded by
(master seed, sample index), so results are bit-identical regardless of
worker count or scheduling.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

from . import __version__
from .intersect import EdgePath, intersection, self_intersection, spiraling
from .ribbon import SURFACE_PRESETS, surface
from .words import (BallSpec, CyclicWord, Word, alphabet_letters, ball_size,
                    conjugates_in_ball, cyclic_reduce, least_rotation,
                    sphere_size)


class ConfigError(ValueError):
    pass


def _rng(master_seed: int, *index) -> random.Random:
    key = f"{master_seed}/" + "/".join(str(i) for i in index)
    digest = hashlib.sha256(key.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass(frozen=True)
class WalkDistribution:
    """Step distribution on the symmetric alphabet; probabilities follow
    the letter order (1..r, -1..-r)."""

    rank: int
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) != 2 * self.rank:
            raise ConfigError("need one probability per letter")
        if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-12:
            raise ConfigError("probabilities must be nonnegative and sum to 1")
        letters = alphabet_letters(self.rank)
        for i in range(1, self.rank + 1):
            if self.probs[letters.index(i)] == 0 and self.probs[letters.index(-i)] == 0:
                raise ConfigError("support must generate: generator "
                                  f"{i} has zero weight in both directions")

    @classmethod
    def uniform(cls, rank: int) -> "WalkDistribution":
        return cls(rank, (1.0 / (2 * rank),) * (2 * rank))

    @property
    def is_uniform(self) -> bool:
        return all(abs(p - self.probs[0]) < 1e-15 for p in self.probs)

    @property
    def is_symmetric(self) -> bool:
        letters = alphabet_letters(self.rank)
        return all(abs(self.probs[letters.index(i)] - self.probs[letters.index(-i)]) < 1e-15
                   for i in range(1, self.rank + 1))


def random_walk(mu: WalkDistribution, n: int, seed: int) -> Word:
    """Word of n i.i.d. letters drawn from ``mu`` (not reduced)."""
    if n < 0:
        raise ConfigError("walk length must be nonnegative")
    rng = _rng(seed, "walk")
    letters = alphabet_letters(mu.rank)
    if n == 0:
        return Word((), mu.rank)
    draws = rng.choices(letters, weights=mu.probs, k=n)
    return Word(tuple(draws), mu.rank)


def sample_ball_uniform(rank: int, n: int, seed: int) -> Word:
    """Exactly uniform element of the radius-n ball: pick the length k with
    probability |S_k|/|B_n|, then a uniform reduced word of that length."""
    if rank < 2:
        raise ConfigError("ball sampling needs rank >= 2")
    rng = _rng(seed, "ball")
    cum = []
    total = 0
    for k in range(n + 1):
        total += sphere_size(BallSpec(rank, k))
        cum.append(total)
    u = rng.randrange(total)
    k = bisect.bisect_right(cum, u)
    if k == 0:
        return Word((), rank)
    letters = alphabet_letters(rank)
    first = rng.randrange(2 * rank)
    word = [letters[first]]
    for _ in range(k - 1):
        choices = [x for x in letters if x != -word[-1]]
        word.append(choices[rng.randrange(2 * rank - 1)])
    return Word(tuple(word), rank)


@dataclass(frozen=True)
class DriftEstimate:
    mean: float
    stderr: float
    ci95: tuple[float, float]
    samples: int


def drift_estimate(mu: WalkDistribution, n: int, samples: int, seed: int) -> DriftEstimate:
    """Mean of |reduce(w_n)|/n with a normal-approximation interval."""
    if n < 1 or samples < 1:
        raise ConfigError("need n >= 1 and samples >= 1")
    vals = []
    for idx in range(samples):
        rng = _rng(seed, "drift", idx)
        letters = alphabet_letters(mu.rank)
        stack = []
        for x in rng.choices(letters, weights=mu.probs, k=n):
            if stack and stack[-1] == -x:
                stack.pop()
            else:
                stack.append(x)
        vals.append(len(stack) / n)
    mean = statistics.fmean(vals)
    sd = statistics.pstdev(vals) if samples > 1 else 0.0
    se = sd / math.sqrt(samples)
    return DriftEstimate(mean, se, (mean - 1.96 * se, mean + 1.96 * se), samples)


# --- experiment harness ------------------------------------------------------

EXPERIMENTS = ("self-int", "fixed-curve-int", "lifting", "spiral", "minimizer",
               "conj-ball")

_CONFIG_KEYS = {"experiment", "sampler", "rank", "surface", "n_grid", "samples",
                "seed", "d_max", "retain_raw", "jobs", "alpha", "probs"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_grid: tuple[int, ...]
    samples: int
    seed: int = 0
    sampler: str = "walk"
    rank: int = 2
    surface: str = "punctured-torus"
    d_max: int = 6
    retain_raw: bool = False
    jobs: int = 1
    alpha: str = "a"
    probs: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose from {', '.join(EXPERIMENTS)}")
        if self.sampler not in ("walk", "ball"):
            raise ConfigError("sampler must be 'walk' or 'ball'")
        if self.surface not in SURFACE_PRESETS:
            raise ConfigError(f"unknown surface {self.surface!r}")
        if not self.n_grid or any(n < 0 for n in self.n_grid):
            raise ConfigError("n_grid must be nonempty and nonnegative")
        if self.samples < 1 or self.jobs < 1:
            raise ConfigError("samples and jobs must be positive")
        mu = self.distribution()
        if self.experiment == "lifting" and not mu.is_uniform:
            raise ConfigError("lifting-degree experiments require the uniform "
                              "distribution (equal weight on every generator)")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if "n_grid" in d:
            d["n_grid"] = tuple(int(v) for v in d["n_grid"])
        if "probs" in d and d["probs"] is not None:
            d["probs"] = tuple(float(v) for v in d["probs"])
        return cls(**d)

    def distribution(self) -> WalkDistribution:
        if self.probs is None:
            return WalkDistribution.uniform(self.rank)
        return WalkDistribution(self.rank, self.probs)


@dataclass(frozen=True)
class RowStats:
    n: int
    samples: int
    median: float
    q1: float
    q3: float
    mean: float
    max: float


@dataclass
class ExperimentTable:
    rows: list[RowStats]
    metadata: dict
    raw: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["n,samples,median,q1,q3,mean,max"]
        for r in self.rows:
            lines.append(f"{r.n},{r.samples},{r.median!r},{r.q1!r},{r.q3!r},"
                         f"{r.mean!r},{r.max!r}")
        return "\n".join(lines) + "\n"

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())
        with open(path + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(self.metadata, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _summarize(n: int, values) -> RowStats:
    values = sorted(values)
    if len(values) >= 2:
        q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
    else:
        q1 = med = q3 = float(values[0])
    return RowStats(n, len(values), float(med), float(q1), float(q3),
                    float(statistics.fmean(values)), float(values[-1]))


def _sample_word(cfg_sampler, rank, probs, n, seed, index) -> Word:
    if cfg_sampler == "walk":
        mu = WalkDistribution(rank, probs)
        letters = alphabet_letters(rank)
        rng = _rng(seed, "walk", n, index)
        return Word(tuple(rng.choices(letters, weights=mu.probs, k=n)), rank)
    rng_seed_key = ("ball", n, index)
    rng = _rng(seed, *rng_seed_key)
    # inline exact ball sampling with the per-sample stream
    cum = []
    total = 0
    for k in range(n + 1):
        total += sphere_size(BallSpec(rank, k))
        cum.append(total)
    u = rng.randrange(total)
    k = bisect.bisect_right(cum, u)
    if k == 0:
        return Word((), rank)
    letters = alphabet_letters(rank)
    word = [letters[rng.randrange(2 * rank)]]
    for _ in range(k - 1):
        choices = [x for x in letters if x != -word[-1]]
        word.append(choices[rng.randrange(2 * rank - 1)])
    return Word(tuple(word), rank)


def _measure_one(args):
    """One (n, index) measurement; top-level for pickling."""
    (family, sampler, rank, surface_name, probs, n, index, seed, d_max, alpha) = args
    g = surface(surface_name)
    w = _sample_word(sampler, rank, probs, n, seed, index)
    gamma = cyclic_reduce(w)
    out = {"n": n, "index": index}
    if family == "conj-ball":
        # exhaustive check is handled outside the per-sample path
        raise ConfigError("conj-ball experiment is exhaustive, not sampled")
    if len(gamma) == 0:
        out["skip"] = "trivial"
        return out
    path = EdgePath.from_word(gamma, g)
    if family == "self-int":
        i = self_intersection(path)
        assert i <= n * (n - 1) // 2, "quadratic bound violated"
        out["value"] = i
    elif family == "fixed-curve-int":
        alpha_c = CyclicWord.from_string(alpha, rank)
        root_g = gamma.primitive_root()[0]
        root_a = alpha_c.primitive_root()[0]
        if root_g.letters in (root_a.letters, root_a.inverse().letters):
            out["skip"] = "alpha-power"
            return out
        out["value"] = intersection(path, EdgePath.from_word(alpha_c, g))
    elif family == "lifting":
        from .covers import simple_lifting_degree

        i = self_intersection(path)
        res = simple_lifting_degree(gamma, g, d_max=d_max)
        if res.found:
            assert res.degree <= 5 * i + 5, "linear degree bound violated"
            out["value"] = res.degree
            out["deg_len_ratio"] = res.degree / len(gamma)
        out["found"] = res.found
        out["self_int"] = i
        sp = max(spiraling(gamma, CyclicWord((j,), rank), g)
                 for j in range(1, rank + 1)
                 if gamma.primitive_root()[0].letters not in
                 ((j,), (-j,)))
        out["spiral"] = sp
        if res.found:
            assert res.degree >= sp, "spiraling lower bound violated"
    elif family == "spiral":
        best = 0
        for j in range(1, rank + 1):
            root = gamma.primitive_root()[0].letters
            if root in ((j,), (-j,)):
                continue
            best = max(best, spiraling(gamma, CyclicWord((j,), rank), g))
        out["value"] = best
    elif family == "minimizer":
        from .fricke import distance_proxy, minimize_length, rose_minimizer

        res = minimize_length(gamma)
        out["status"] = res.status
        if res.status == "converged":
            assert res.grad_norm < 1e-6
            out["value"] = distance_proxy(res.point, rose_minimizer())
    else:
        raise ConfigError(f"unknown experiment family {family!r}")
    return out


def _run_conj_ball(config: ExperimentConfig) -> ExperimentTable:
    """Exhaustive check of the conjugacy-ball bound over every class with
    ||c|| <= max word length in the grid and every radius n in the grid."""
    from itertools import product as iproduct

    rank = config.rank
    max_len = max(config.n_grid)
    letters = alphabet_letters(rank)
    seen = set()
    classes = []
    for L in range(1, max_len + 1):
        for tup in iproduct(letters, repeat=L):
            if any(tup[i] == -tup[(i + 1) % L] for i in range(L)):
                continue
            k = least_rotation(tup)
            canon = tup[k:] + tup[:k]
            if canon in seen:
                continue
            seen.add(canon)
            classes.append(CyclicWord(canon, rank))
    rows = []
    raw = {}
    violations = 0
    for n in config.n_grid:
        slacks = []
        for c in classes:
            if len(c) > n:
                continue
            count = conjugates_in_ball(c, n)
            bound = n * ball_size(BallSpec(rank, (n - len(c)) // 2))
            if count > bound:
                violations += 1
            slacks.append(bound - count)
        if not slacks:
            slacks = [0]
        rows.append(_summarize(n, slacks))
        if config.retain_raw:
            raw[n] = slacks
    meta = _metadata(config)
    meta["violations"] = violations
    meta["classes_checked"] = len(classes)
    return ExperimentTable(rows, meta, raw)


def _metadata(config: ExperimentConfig) -> dict:
    d = asdict(config)
    d["version"] = f"randcurve-{__version__}"
    return d


def run_experiment(config: ExperimentConfig) -> ExperimentTable:
    """Monte Carlo table for one experiment family.

    Per-n summary statistics of the family's primary metric; extras
    (divergence counts, not-found counts, skip counts) go in the metadata.
    """
    if config.experiment == "conj-ball":
        return _run_conj_ball(config)
    probs = config.distribution().probs
    payloads = []
    for n in config.n_grid:
        for idx in range(config.samples):
            payloads.append((config.experiment, config.sampler, config.rank,
                             config.surface, probs, n, idx, config.seed,
                             config.d_max, config.alpha))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            results = list(ex.map(_measure_one, payloads,
                                  chunksize=max(1, len(payloads) // (config.jobs * 8))))
    else:
        results = [_measure_one(p) for p in payloads]
    by_n = {n: [] for n in config.n_grid}
    extras = {"skipped": 0, "diverged": 0, "budget": 0, "not_found": 0}
    max_deg_len_ratio = 0.0
    extra_by_n = {n: {"diverged": 0, "budget": 0, "converged": 0, "not_found": 0,
                      "found": 0, "deg2_or_more": 0}
                  for n in config.n_grid}
    for r in results:
        n = r["n"]
        if "skip" in r:
            extras["skipped"] += 1
            continue
        if "status" in r:
            extra_by_n[n][r["status"]] += 1
            if r["status"] != "converged":
                extras[r["status"]] += 1
                continue
        if "found" in r:
            if r["found"]:
                extra_by_n[n]["found"] += 1
                max_deg_len_ratio = max(max_deg_len_ratio, r["deg_len_ratio"])
                if r["value"] >= 2:
                    extra_by_n[n]["deg2_or_more"] += 1
            else:
                extras["not_found"] += 1
                extra_by_n[n]["not_found"] += 1
                extra_by_n[n]["deg2_or_more"] += 1
                continue
        by_n[n].append(r["value"])
    rows = []
    raw = {}
    for n in config.n_grid:
        vals = by_n[n] if by_n[n] else [0]
        rows.append(_summarize(n, vals))
        if config.retain_raw:
            raw[n] = sorted(by_n[n])
    meta = _metadata(config)
    meta["extras"] = extras
    meta["per_n"] = {str(n): extra_by_n[n] for n in config.n_grid}
    if config.experiment == "lifting":
        # recorded, not asserted: degree/length ratio for the linear
        # upper-bound regime
        meta["max_degree_to_length_ratio"] = max_deg_len_ratio
    return ExperimentTable(rows, meta, raw)


# --- fits ---------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    slope: float
    stderr: float
    intercept: float


def _least_squares(xs, ys) -> FitResult:
    m = len(xs)
    if m < 4:
        raise ConfigError("need at least 4 rows to fit")
    xbar = statistics.fmean(xs)
    ybar = statistics.fmean(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    if sxx == 0:
        raise ConfigError("degenerate data: no spread in n")
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    rss = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    se = math.sqrt(rss / (m - 2) / sxx) if m > 2 else 0.0
    return FitResult(slope, se, intercept)


def fit_power_law(table: ExperimentTable) -> FitResult:
    """Slope of log(median) against log(n): the growth exponent."""
    xs, ys = [], []
    for r in table.rows:
        if r.n <= 0 or r.median <= 0:
            raise ConfigError("power-law fit needs positive n and medians")
        xs.append(math.log(r.n))
        ys.append(math.log(r.median))
    return _least_squares(xs, ys)


def fit_log_law(table: ExperimentTable) -> FitResult:
    """Slope of median against log(n): logarithmic growth rate."""
    xs, ys = [], []
    for r in table.rows:
        if r.n <= 0:
            raise ConfigError("log fit needs positive n")
        xs.append(math.log(r.n))
        ys.append(r.median)
    return _least_squares(xs, ys)
