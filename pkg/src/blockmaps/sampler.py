"""Galton-Watson block-tree samplers and largest-block scaling experiments.

Size-conditioned trees are sampled as exchangeable degree vectors
conditioned on sum = n-1, then rotated to the unique valid depth-first
order by the cycle lemma.  Conditioning strategies:

  rejection   i.i.d. vectors, keep sum hits (critical/supercritical);
  dp          exact sequential conditionals from a convolution table of
              partial-sum distributions (subcritical condensation, where
              rejection would wait for the big jump);
  counts      multinomial occupancy rejection; returns the degree multiset
              only, which determines every block statistic (large n).

Tilting by y is immaterial after conditioning, so truncating the table at
k = n-1 keeps the conditioned law exact; the truncated mass is tracked and
bounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve

from . import schemes, transition

DP_MAX_VERTICES = 5000
FREE_TREE_CAP = 10_000_000
MODELED_TAIL_LIMIT = 1e-3


class SamplerError(RuntimeError):
    pass


def rng_for(seed: int, *stream) -> np.random.Generator:
    """Deterministic per-stream generator: (seed, stream...) derived keys."""
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence([int(seed) & 0xFFFFFFFF] + [int(s) for s in stream])))


# --------------------------------------------------------------- trees


@dataclass
class DegreeSequence:
    """Depth-first degree sequence of a plane tree (Lukasiewicz-valid)."""

    degrees: np.ndarray

    @property
    def n(self) -> int:
        return len(self.degrees)

    def is_valid(self) -> bool:
        x = self.degrees.astype(np.int64) - 1
        s = np.cumsum(x)
        return bool(s[-1] == -1 and (s[:-1] > -1).all())


def cycle_lemma_rotation(degrees: np.ndarray) -> np.ndarray:
    """Rotate a degree vector with sum n-1 to its unique valid DFS order."""
    x = degrees.astype(np.int64) - 1
    s = np.cumsum(x)
    if s[-1] != -1:
        raise SamplerError("degree sum must be n - 1")
    k = int(np.argmin(s)) + 1  # first prefix minimum; rotation starts after it
    if k == len(degrees):
        return degrees.copy()
    return np.concatenate([degrees[k:], degrees[:k]])


def _truncated_cdf(law: transition.OffspringLaw, k_max: int):
    """Renormalized law truncated at k_max.

    Conditioning on the total progeny makes the truncation at k_max = n-1
    exact (the tilt and normalization cancel), so no tail model is needed
    there; only the free sampler cares about the discarded mass.
    """
    p = np.asarray(law.probs[: k_max + 1], dtype=float)
    total = p.sum()
    if total <= 0:
        raise SamplerError("empty truncated law")
    return p / total, np.cumsum(p / total)


def sample_free_tree(law: transition.OffspringLaw, seed: int,
                     cap: int = FREE_TREE_CAP) -> DegreeSequence:
    """Unconditioned Galton-Watson tree in depth-first order (E <= 1)."""
    if law.mean > 1 + 1e-9:
        raise SamplerError("free tree requires E <= 1 (else survival is possible)")
    if law.tail_mass > MODELED_TAIL_LIMIT:
        raise SamplerError(
            f"law table covers only 1 - {law.tail_mass:.2e} of the mass; "
            "increase the table order for free sampling")
    rng = rng_for(seed)
    pdf, cdf = _truncated_cdf(law, law.k_max)
    out = []
    open_slots = 1
    while open_slots:
        batch = max(64, open_slots)
        draws = np.searchsorted(cdf, rng.random(batch), side="right")
        for d in draws:
            if not open_slots:
                break
            out.append(int(d))
            open_slots += int(d) - 1
        if len(out) > cap:
            raise SamplerError(f"free tree exceeded cap {cap}")
    return DegreeSequence(np.array(out, dtype=np.int64))


# ----------------------------------------------------- conditioned: DP


class _DPTable:
    """W[m][s] ~ P(sum of m i.i.d. degrees = s), rows max-normalized.

    Row scales cancel in the sequential conditionals, so no log bookkeeping
    is needed; entries below 1e-300 of the row max underflow to zero, which
    only removes states of vanishing conditional probability.
    """

    def __init__(self, pdf: np.ndarray, n: int):
        s_max = n - 1
        self.rows = np.zeros((n, s_max + 1))
        self.rows[1 - 1] = pdf[: s_max + 1]  # row index m-1 stores W[m]
        mx = self.rows[0].max()
        if mx > 0:
            self.rows[0] /= mx
        for m in range(2, n):
            full = fftconvolve(self.rows[m - 2], pdf[: s_max + 1])[: s_max + 1]
            np.maximum(full, 0.0, out=full)
            mx = full.max()
            if mx > 0:
                full /= mx
            full[full < 1e-280] = 0.0
            self.rows[m - 1] = full

    def row(self, m: int) -> np.ndarray:
        return self.rows[m - 1]


_dp_cache: dict = {}


def _dp_table(law: transition.OffspringLaw, n: int) -> tuple:
    key = (law.scheme_id, law.u, n)
    hit = _dp_cache.get(key)
    if hit is not None:
        return hit
    pdf, cdf = _truncated_cdf(law, min(law.k_max, n - 1))
    if len(pdf) < n:
        pdf = np.concatenate([pdf, np.zeros(n - len(pdf))])
    table = _DPTable(pdf, n)
    _dp_cache[key] = (pdf, table)
    if len(_dp_cache) > 4:
        _dp_cache.pop(next(iter(_dp_cache)))
    return pdf, table


def _sample_conditioned_dp(law, n: int, rng) -> np.ndarray:
    pdf, table = _dp_table(law, n)
    degs = np.empty(n, dtype=np.int64)
    s = n - 1
    for idx in range(n - 1):
        m = n - 1 - idx  # variables left after this draw
        w = pdf[: s + 1] * table.row(m)[s::-1]
        tot = w.sum()
        if tot <= 0:
            raise SamplerError("DP reached an impossible state")
        c = np.cumsum(w)
        k = int(np.searchsorted(c, rng.random() * c[-1], side="right"))
        degs[idx] = k
        s -= k
    if pdf[s] <= 0:
        raise SamplerError("DP final state impossible")
    degs[n - 1] = s
    return degs


# ----------------------------------------------- conditioned: rejection


def _sample_conditioned_rejection(law, n: int, rng,
                                  max_attempts: int = 20_000_000) -> np.ndarray:
    pdf, cdf = _truncated_cdf(law, min(law.k_max, n - 1))
    target = n - 1
    batch = max(4, min(512, 2_000_000 // n))
    attempts = 0
    while attempts < max_attempts:
        draws = np.searchsorted(cdf, rng.random((batch, n)), side="right")
        sums = draws.sum(axis=1)
        hits = np.nonzero(sums == target)[0]
        if hits.size:
            return draws[hits[0]].astype(np.int64)
        attempts += batch
    raise SamplerError(f"rejection failed after {max_attempts} attempts")


def _sample_counts_rejection(law, n: int, rng,
                             max_attempts: int = 50_000_000) -> np.ndarray:
    """Degree multiset via multinomial occupancy rejection: counts[k] nodes
    of degree k, conditioned on sum k*counts[k] = n-1. O(support) per try."""
    pdf, _ = _truncated_cdf(law, min(law.k_max, n - 1))
    ks = np.nonzero(pdf > 0)[0]
    probs = pdf[ks]
    probs = probs / probs.sum()
    target = n - 1
    attempts = 0
    while attempts < max_attempts:
        counts = rng.multinomial(n, probs)
        if int(counts @ ks) == target:
            full = np.zeros(len(pdf), dtype=np.int64)
            full[ks] = counts
            return full
        attempts += 1
    raise SamplerError(f"counts rejection failed after {max_attempts} attempts")


def sample_conditioned(law: transition.OffspringLaw, n: int, seed: int,
                       strategy: str = "auto") -> DegreeSequence:
    """Exact sample of the GW tree conditioned to n vertices (DFS degrees)."""
    stride = law.support_stride
    if n < 1 or (n - 1) % stride:
        raise SamplerError(
            f"tree size {n} incompatible with degree stride {stride}")
    rng = rng_for(seed)
    if n == 1:
        return DegreeSequence(np.zeros(1, dtype=np.int64))
    if strategy == "auto":
        strategy = "dp" if law.mean < 1 - 1e-9 else "rejection"
    if strategy == "dp":
        if n > DP_MAX_VERTICES:
            raise SamplerError(
                f"DP sampler capped at {DP_MAX_VERTICES} vertices (asked {n})")
        degs = _sample_conditioned_dp(law, n, rng)
    elif strategy == "rejection":
        if law.mean < 1 - 1e-6:
            raise SamplerError(
                "rejection sampling is infeasible under condensation; "
                "use the DP strategy")
        degs = _sample_conditioned_rejection(law, n, rng)
    else:
        raise SamplerError(f"unknown strategy {strategy!r}")
    seq = DegreeSequence(cycle_lemma_rotation(degs))
    if not seq.is_valid():
        raise SamplerError("cycle lemma produced an invalid tree")
    return seq


def sample_conditioned_counts(law: transition.OffspringLaw, n: int,
                              seed: int) -> np.ndarray:
    """Degree multiset of the conditioned tree (counts by degree)."""
    stride = law.support_stride
    if n < 1 or (n - 1) % stride:
        raise SamplerError(
            f"tree size {n} incompatible with degree stride {stride}")
    rng = rng_for(seed)
    if law.mean < 1 - 1e-9 and n > DP_MAX_VERTICES:
        raise SamplerError("condensation regime: counts rejection infeasible")
    if law.mean < 1 - 1e-9:
        degs = _sample_conditioned_dp(law, n, rng)
        return np.bincount(degs, minlength=law.k_max + 1)
    return _sample_counts_rejection(law, n, rng)


# ----------------------------------------------------------- decoration


@dataclass
class BlockRecord:
    node: int
    block_sizes: list


def _sequence_split_tables(scheme: schemes.SchemeSpec, u: Fraction, k_max: int):
    """q_k table and block weights for scheme 8 sequence peeling."""
    t3 = schemes.family_series_int(scheme.block_family, k_max // 2 + 1)
    u = Fraction(u)
    q = [Fraction(0)] * (k_max + 1)
    q[0] = Fraction(1)
    for k in range(2, k_max + 1, 2):
        s = Fraction(0)
        for i in range(1, k // 2 + 1):
            if t3[i]:
                s += t3[i] * q[k - 2 * i]
        q[k] = u * s
    return t3, q


_split_cache: dict = {}


def sequence_split_distribution(scheme, u, k: int):
    """Exact first-element law for a degree-k node of the sequence scheme:
    P(first block has size i) = u t3_i q_{k-2i} / q_k (i in T3-size units)."""
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    u = Fraction(u)
    key = (scheme.id, u)
    tab = _split_cache.get(key)
    if tab is None or len(tab[1]) <= k:
        tab = _sequence_split_tables(scheme, u, max(k, 64))
        _split_cache[key] = tab
    t3, q = tab
    if k % 2 or q[k] == 0:
        raise SamplerError(f"degree {k} impossible for the sequence scheme")
    out = []
    for i in range(1, k // 2 + 1):
        if t3[i] and q[k - 2 * i]:
            out.append((i, u * t3[i] * q[k - 2 * i] / q[k]))
    return out


def decorate_blocks(scheme, lagr_u, degrees, seed: int = 0):
    """Map node degrees to block sizes.

    Stride schemes are deterministic (size = degree/d in the scheme's size
    unit). The sequence scheme peels blocks one at a time with the exact
    q-table conditionals.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    degrees = np.asarray(degrees, dtype=np.int64)
    records = []
    if scheme.lagrangian_recipe != "sequence":
        d = scheme.h_exponent
        for node, k in enumerate(degrees):
            if k % d:
                raise SamplerError(f"degree {k} not divisible by stride {d}")
            records.append(BlockRecord(node, [int(k) // d] if k else []))
        return records
    rng = rng_for(seed)
    u = Fraction(lagr_u)
    for node, k in enumerate(degrees):
        k = int(k)
        sizes = []
        while k > 0:
            dist = sequence_split_distribution(scheme, u, k)
            weights = np.array([float(p) for _, p in dist])
            weights /= weights.sum()
            pick = int(rng.choice(len(dist), p=weights))
            i = dist[pick][0]
            sizes.append(i)
            k -= 2 * i
        records.append(BlockRecord(node, sizes))
    return records


def largest_blocks(records, j_max: int):
    """Descending order statistics of all block sizes, zero-padded."""
    sizes = sorted(
        (s for r in records for s in r.block_sizes), reverse=True)
    sizes += [0] * j_max
    return sizes[:j_max]


def _largest_from_counts(scheme, counts: np.ndarray, j_max: int):
    """Order statistics for stride schemes straight from the degree multiset."""
    d = scheme.h_exponent
    out = []
    for k in range(len(counts) - 1, 0, -1):
        c = int(counts[k])
        if c:
            out.extend([k // d] * min(c, j_max - len(out)))
            if len(out) >= j_max:
                break
    out += [0] * j_max
    return out[:j_max]


# ------------------------------------------------------ scaling reports


@dataclass
class ScalingReport:
    scheme_id: int
    u: Fraction
    n_grid: list                  # map sizes
    replicates: int
    seed: int
    regime: str
    mean_offspring: float
    stats: dict = field(default_factory=dict)   # n -> {Lj: summary}
    rows: list = field(default_factory=list)    # per-replicate CSV rows
    fits: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    j_max: int = 3


def interpolated_median(values) -> float:
    """Grouped-data median for integer-valued samples.

    Plain medians of integer data are quantized to halves, which is too
    coarse when the statistic itself is only a few units wide; the standard
    within-tie-class interpolation removes the quantization.
    """
    a = np.sort(np.asarray(values, dtype=float))
    n = len(a)
    med = float(np.median(a))
    v = round(med)
    below = float((a < v - 0.5).sum())
    at = float(((a >= v - 0.5) & (a <= v + 0.5)).sum())
    if at == 0:
        return med
    return v - 0.5 + (n / 2 - below) / at


def _summary(values):
    a = np.asarray(values, dtype=float)
    return {
        "mean": float(a.mean()),
        "median": float(np.median(a)),
        "imedian": interpolated_median(a),
        "q25": float(np.quantile(a, 0.25)),
        "q75": float(np.quantile(a, 0.75)),
    }


def scaling_experiment(scheme, u, n_grid, replicates: int, seed: int,
                       j_max: int = 3, law_order: int | None = None,
                       threads: int = 1) -> ScalingReport:
    """Largest-block statistics over a grid of map sizes.

    n_grid is in map-size units; tree sizes follow the scheme dictionary.
    Uses full tree samples when feasible and the exact counts sampler for
    large non-condensation sizes. Deterministic in (scheme, u, sizes,
    replicates, seed) regardless of the thread count: every replicate has
    its own derived stream and results are merged by index.
    """
    scheme = scheme if isinstance(scheme, schemes.SchemeSpec) else schemes.load_scheme(scheme)
    u = Fraction(u)
    if replicates < 30:
        raise SamplerError("fewer than 30 replicates is not a measurement")
    a, b = scheme.tree_size
    n_grid = sorted(int(x) for x in n_grid)
    max_tree = a * n_grid[-1] + b
    if law_order is None:
        tp = transition.singular_point(scheme, u, cross_check=False)
        if tp.regime == "supercritical":
            # geometric tail: a moderate table suffices; grow until the
            # truncated mass is negligible
            law_order = 512
            while True:
                law = transition.offspring_law(scheme, u, N=law_order)
                if law.tail_mass < 1e-15 or law_order >= max_tree - 1:
                    break
                law_order *= 2
        else:
            # power-law tail: exactness of the conditioned law needs the
            # table up to the largest possible degree
            law = transition.offspring_law(scheme, u, N=max_tree - 1)
    else:
        law = transition.offspring_law(scheme, u, N=law_order)
    report = ScalingReport(
        scheme_id=scheme.id, u=u, n_grid=list(n_grid), replicates=replicates,
        seed=seed, regime=law.regime, mean_offspring=law.mean, j_max=j_max)
    is_seq = scheme.lagrangian_recipe == "sequence"

    def one_replicate(n_map, n_tree, use_counts, rep):
        rep_seed_args = (scheme.id, n_map, rep)
        diag = None
        if use_counts:
            counts = sample_conditioned_counts(
                law, n_tree, _derive(seed, *rep_seed_args))
            L = _largest_from_counts(scheme, counts, j_max)
            blocks_total = int(counts[1:].sum())
            mass = sum(k * c for k, c in enumerate(counts)) // scheme.h_exponent
        else:
            seq = sample_conditioned(
                law, n_tree, _derive(seed, *rep_seed_args))
            recs = decorate_blocks(scheme, u, seq.degrees,
                                   _derive(seed, *rep_seed_args, 1))
            L = largest_blocks(recs, j_max)
            blocks_total = sum(len(r.block_sizes) for r in recs)
            mass = sum(s for r in recs for s in r.block_sizes)
            if is_seq:
                diag = sorted(
                    ((int(k), max(r.block_sizes))
                     for k, r in zip(seq.degrees, recs) if r.block_sizes),
                    reverse=True)[:3]
        if mass != n_map:
            raise SamplerError(
                f"mass conservation violated: blocks sum {mass}, map {n_map}")
        return L, blocks_total, diag

    for n_map in n_grid:
        n_tree = a * n_map + b
        use_counts = (not is_seq and law.regime != "subcritical"
                      and n_tree > 20_000)
        reps = range(replicates)
        if threads > 1:
            # warm the shared tables once, then fan out
            results = [one_replicate(n_map, n_tree, use_counts, 0)]
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results += list(ex.map(
                    lambda r: one_replicate(n_map, n_tree, use_counts, r),
                    range(1, replicates)))
        else:
            results = [one_replicate(n_map, n_tree, use_counts, r) for r in reps]
        Ls = []
        for rep, (L, blocks_total, diag) in enumerate(results):
            Ls.append(L)
            report.rows.append([n_map, rep] + list(L) + [n_map, blocks_total])
            if diag:
                report.diagnostics.setdefault("condensation", []).extend(diag)
        arr = np.asarray(Ls, dtype=float)
        stat = {f"L{j + 1}": _summary(arr[:, j]) for j in range(j_max)}
        report.stats[n_map] = stat
    _attach_fits(report)
    return report


def _derive(seed, *stream) -> int:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF] + [int(s) for s in stream])
    return int(ss.generate_state(1)[0])


def _attach_fits(report: ScalingReport) -> None:
    ns = report.n_grid
    med = [report.stats[n]["L1"]["median"] for n in ns]
    if report.regime == "subcritical":
        c = 1 - report.mean_offspring
        report.fits["center_slope"] = c
        report.fits["normalized_center"] = [m / n / c for m, n in zip(med, ns)]
        report.fits["fluct_scale"] = [
            (report.stats[n]["L1"]["q75"] - report.stats[n]["L1"]["q25"])
            / n ** (2 / 3) for n in ns]
        report.fits["L2_over_n23"] = [
            report.stats[n]["L2"]["median"] / n ** (2 / 3) for n in ns]
    elif report.regime == "critical":
        report.fits["L1_over_n23"] = [m / n ** (2 / 3) for m, n in zip(med, ns)]
    else:
        imed = [report.stats[n]["L1"]["imedian"] for n in ns]
        if len(ns) >= 2:
            lx = np.log(ns)
            slope, intercept = np.polyfit(lx, imed, 1)
            report.fits["log_slope"] = float(slope)
            report.fits["log_intercept"] = float(intercept)
            report.fits["efold_increments"] = [
                (imed[i + 1] - imed[i]) / (np.log(ns[i + 1]) - np.log(ns[i]))
                for i in range(len(ns) - 1)]
        report.fits["L1_over_n01"] = [m / n ** 0.1 for m, n in zip(med, ns)]


CSV_HEADER = "n,rep,L1,L2,L3,map_size,blocks_total"


def report_rows_csv(report: ScalingReport) -> str:
    lines = [CSV_HEADER]
    for row in report.rows:
        lines.append(",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
