"""Randomized construction of barycenter-at-origin simplices inside a body.

One trial: sample n uniform points X_1..X_n from the (isotropic) body, form
the raw simplex S(0, X_1, ..., X_n) with barycenter u, then slide it to the
origin with the homothety centered at w = -|w| u/|u| and ratio
lam = |w|/(|w| + |u|). The image vertex i is exactly lam * (v_i - u), so the
result barycenter is 0 to rounding. The homothety center is kept inside the
guaranteed inscribed ball of radius sqrt((n+2)/n) * l_hat, which is what
makes the construction succeed with overwhelming probability.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .bodies import (
    DEGENERACY_RTOL,
    DegenerateSimplexError,
    Simplex,
    simplex_barycenter,
    simplex_volume,
)
from .isotropy import kls_inradius
from .report import ExperimentReport, trial_aggregates
from .sampling import SamplerHandle

TRIAL_CHUNK = 20_000  # fixed so that rerun chunking (and RNG use) is identical


@dataclass
class CenterPolicy:
    """How to choose the homothety center.

    adaptive: w = -rho * r * u/|u| with r the guaranteed inradius; the largest
    admissible ratio the inclusion allows (rho = 1 is the default, rho < 1 is
    more conservative). fixed: the textbook w = -u/c1 with a user constant c1.
    """

    mode: str = "adaptive"
    rho: float = 1.0
    c1: float = None

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ValueError("mode must be adaptive or fixed")
        if self.mode == "adaptive" and not 0.0 < self.rho:
            raise ValueError("rho must be positive")
        if self.mode == "fixed" and (self.c1 is None or self.c1 <= 0):
            raise ValueError("fixed policy needs c1 > 0")

    @classmethod
    def parse(cls, text):
        """'adaptive' or 'fixed:C1' as accepted on the command line."""
        if text == "adaptive":
            return cls()
        if text.startswith("fixed:"):
            return cls(mode="fixed", c1=float(text.split(":", 1)[1]))
        raise ValueError("policy must be 'adaptive' or 'fixed:C1'")

    def describe(self):
        if self.mode == "adaptive":
            return "adaptive(rho=%g)" % self.rho
        return "fixed(c1=%g)" % self.c1


@dataclass
class CenteredSimplexTrial:
    raw: Simplex
    u: np.ndarray
    w: np.ndarray
    lam: float
    result: Simplex
    raw_volume: float
    result_volume: float
    inside: bool = None


def build_raw(points):
    """The simplex S(0, X_1, ..., X_n) from n sampled points (rows)."""
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("need n points in R^n, got shape %s" % (X.shape,))
    n = X.shape[1]
    return Simplex(np.vstack([np.zeros((1, n)), X]))


def recenter(raw, l_hat, policy=None):
    """Slide the raw simplex's barycenter to the origin by the homothety the
    policy prescribes. Raises DegenerateSimplexError for flat input."""
    if policy is None:
        policy = CenterPolicy()
    n = raw.dim
    raw_volume = simplex_volume(raw)  # raises on degenerate input
    u = simplex_barycenter(raw)
    u_norm = float(np.linalg.norm(u))
    if u_norm == 0.0:
        result = Simplex(raw.vertices.copy())
        return CenteredSimplexTrial(raw=raw, u=u, w=np.zeros(n), lam=1.0,
                                    result=result, raw_volume=raw_volume,
                                    result_volume=raw_volume)
    if policy.mode == "adaptive":
        w_norm = policy.rho * kls_inradius(l_hat, n)
    else:
        w_norm = u_norm / policy.c1
    w = -w_norm * u / u_norm
    lam = w_norm / (w_norm + u_norm)
    result = Simplex(lam * (raw.vertices - u))
    return CenteredSimplexTrial(raw=raw, u=u, w=w, lam=lam, result=result,
                                raw_volume=raw_volume,
                                result_volume=simplex_volume(result))


def certify_inside(trial, body):
    """Vertexwise membership of the recentered simplex (sufficient by
    convexity); records and returns the flag."""
    trial.inside = bool(np.all(body.contains_many(trial.result.vertices)))
    return trial.inside


def _policy_lambdas(u_norm, n, l_hat, policy):
    if policy.mode == "adaptive":
        w_norm = policy.rho * kls_inradius(l_hat, n)
        return w_norm / (w_norm + u_norm)
    return np.full_like(u_norm, 1.0 / (1.0 + policy.c1))


def run_trials(body, model, trials, policy=None, seed=0, sampler=None,
               keep_best=False, stamp=False, config_extra=None):
    """Monte Carlo over the construction: sample, build, recenter, certify.

    body must be the isotropic image the model describes (sampling and
    certification both happen there). Returns an ExperimentReport; with
    keep_best=True the report carries the largest certified trial as
    report.best (a CenteredSimplexTrial).
    """
    if policy is None:
        policy = CenterPolicy()
    trials = int(trials)
    if trials < 1:
        raise ValueError("need at least one trial")
    n = body.dim
    l_hat = float(model.l_hat)
    if sampler is None:
        sampler = SamplerHandle(body, seed=seed)

    u_norm_all = np.empty(trials)
    raw_vol_all = np.empty(trials)
    lam_all = np.empty(trials)
    inside_all = np.zeros(trials, dtype=bool)
    degen_all = np.zeros(trials, dtype=bool)

    best_logvol = -np.inf
    best = None

    done = 0
    while done < trials:
        m = min(TRIAL_CHUNK, trials - done)
        pts = sampler.draw(m * n).reshape(m, n, n)
        u = pts.sum(axis=1) / (n + 1.0)
        u_norm = np.linalg.norm(u, axis=1)
        sign, logdet = np.linalg.slogdet(pts)
        # scale-aware degeneracy cut; max row norm bounds the longest edge
        # within a factor of 2, enough for a probability-zero event
        max_norm = np.sqrt((pts ** 2).sum(axis=2)).max(axis=1)
        degen = (sign == 0) | (logdet < np.log(DEGENERACY_RTOL)
                               + n * np.log(np.maximum(max_norm, 1e-300)))
        lam = _policy_lambdas(u_norm, n, l_hat, policy)
        raw_vol = np.exp(logdet - gammaln(n + 1.0))

        verts = np.concatenate([np.zeros((m, 1, n)), pts], axis=1)
        verts = lam[:, None, None] * (verts - u[:, None, :])
        ok = body.contains_many(verts.reshape(-1, n)).reshape(m, n + 1)
        inside = ok.all(axis=1) & ~degen

        sl = slice(done, done + m)
        u_norm_all[sl] = u_norm
        raw_vol_all[sl] = raw_vol
        lam_all[sl] = lam
        inside_all[sl] = inside
        degen_all[sl] = degen

        if keep_best and inside.any():
            res_logvol = np.where(inside, logdet + n * np.log(lam), -np.inf)
            j = int(np.argmax(res_logvol))
            if res_logvol[j] > best_logvol:
                best_logvol = res_logvol[j]
                best = CenteredSimplexTrial(
                    raw=build_raw(pts[j]), u=u[j].copy(), w=None,
                    lam=float(lam[j]), result=Simplex(verts[j].copy()),
                    raw_volume=float(raw_vol[j]),
                    result_volume=float(raw_vol[j] * lam[j] ** n),
                    inside=True)
        done += m

    config = {
        "trials": trials,
        "seed": int(seed),
        "policy": policy.describe(),
        "dim": n,
        "l_hat": l_hat,
        "sampler": sampler.method,
        "body": getattr(body, "kind", "unknown"),
    }
    if config_extra:
        config.update(config_extra)
    records = {
        "u_norm": u_norm_all,
        "raw_volume": raw_vol_all,
        "lam": lam_all,
        "inside": inside_all,
        "degenerate": degen_all,
    }
    aggregates = trial_aggregates(records, l_hat=l_hat, dim=n)
    report = ExperimentReport(config=config, records=records,
                              aggregates=aggregates, stamp=stamp)
    report.best = best
    return report


# ---------------------------------------------------------------------------
# Tail-constant calibration
# ---------------------------------------------------------------------------


def tail_quantile(values, level, upper=True, anchor_count=100):
    """Quantile at tail probability `level`, extrapolating when the level is
    below the sample's resolution.

    For level >= 10/N the plain empirical quantile is returned. Beyond that
    the empirical quantile is undefined, so the tail is modeled with the
    standard peaks-over-threshold estimator with exponential excesses
    (anchored at the anchor_count-th extreme): the statistics involved here
    have sub-exponential tails, for which this is the textbook extrapolation.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    if not upper:
        return -tail_quantile(-x, level, upper=True, anchor_count=anchor_count)
    N = len(x)
    if level <= 0 or level >= 1:
        raise ValueError("level must be in (0, 1)")
    if level >= 10.0 / N:
        return float(np.quantile(x, 1.0 - level))
    k = min(anchor_count, N // 10)
    threshold = x[N - k - 1]
    beta = float(np.mean(x[N - k:] - threshold))
    return float(threshold + beta * np.log(k / (N * level)))


def positive_lower_quantile(values, level, anchor_count=100):
    """Lower-tail quantile of a strictly positive statistic.

    Extrapolation happens on the log scale: the volume statistic has a
    polynomial lower tail (P(v < t) ~ t^n near 0), which is exponential in
    log v, exactly the regime tail_quantile's excess model fits. Linear-scale
    extrapolation can cross zero and would produce a vacuous bound. Exact
    zeros (degenerate trials) fall back to the empirical quantile.
    """
    v = np.asarray(values, dtype=np.float64)
    if np.any(v <= 0):
        return float(np.quantile(v, level))
    return float(np.exp(tail_quantile(np.log(v), level, upper=False,
                                      anchor_count=anchor_count)))


def u_statistic(report):
    """Per-trial |bar(T)| / l_hat."""
    return report.records["u_norm"] / report.config["l_hat"]


def volume_statistic(report):
    """Per-trial (raw_volume * n^{n/2} / l_hat^n)^{1/n}: the n-th root of the
    scaled volume, comparable across dimensions."""
    n = report.config["dim"]
    l_hat = report.config["l_hat"]
    v = report.records["raw_volume"]
    return v ** (1.0 / n) * np.sqrt(n) / l_hat


def calibrate_tail_constants(body, model, trials, level, seed=0):
    """Empirical (c1, c2) for the barycenter and volume tail statements:
    c1 = upper tail_quantile of |bar(T)|/l_hat, c2 = lower tail quantile of
    the scaled volume statistic (log-scale extrapolation), both at the given
    tail probability."""
    rep = run_trials(body, model, trials, seed=seed)
    c1 = tail_quantile(u_statistic(rep), level, upper=True)
    c2 = positive_lower_quantile(volume_statistic(rep), level)
    return c1, c2
