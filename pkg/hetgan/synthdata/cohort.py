import warnings

import numpy as np

from ..tools import check_2d, check_positive_int, check_rng, check_unit_interval
from ._utils import _CheckInputs
from .base import VARIANTS, PatternSpec, SyntheticCohort

MEDIAN_RANGE = (2.0, 20.0)
LOG_SPREAD = 0.12
VOLUME_FLOOR = 1e-6


def generate_baseline(n, n_features, rng=None):
    r"""
    Generate healthy regional volumes.

    Region `j` is log-normal around a median :math:`m_j \sim U[2, 20]` with
    multiplicative spread :math:`\exp(\mathcal{N}(0, 0.12))`.

    Parameters
    ----------
    n : int
        Number of subjects.
    n_features : int
        Number of regions `S`.
    rng : None, int or Generator, default: None

    Returns
    -------
    volumes : ndarray of float
        Positive volumes of shape ``(n, S)``.

    Examples
    --------
    >>> from hetgan.synthdata import generate_baseline
    >>> v = generate_baseline(5, 3, rng=0)
    >>> v.shape, bool((v > 0).all())
    ((5, 3), True)
    """
    check_positive_int(n, "n")
    check_positive_int(n_features, "n_features")
    rng = check_rng(rng)
    medians = rng.uniform(*MEDIAN_RANGE, size=n_features)
    return medians * np.exp(rng.normal(0.0, LOG_SPREAD, size=(n, n_features)))


def build_pattern_spec(variant="basic", n_features=139, rng=None, n_patterns=3):
    """
    Pick the regions of each pattern for a named variant.

    Every pattern holds a core of shared regions (common to all patterns) and
    its own unique regions, so that any two patterns share exactly the core.

    Parameters
    ----------
    variant : {"basic", "large_overlap", "scarce", "noisy", "mild"}
    n_features : int, default: 139
    rng : None, int or Generator, default: None
        Region choice is a deterministic function of this stream.
    n_patterns : int, default: 3

    Returns
    -------
    spec : PatternSpec
    """
    if variant not in VARIANTS:
        raise ValueError(
            "Unknown variant {}, must be one of {}".format(variant, sorted(VARIANTS))
        )
    check_positive_int(n_features, "n_features")
    check_positive_int(n_patterns, "n_patterns")
    size, overlap, alpha, sigma = VARIANTS[variant]
    unique = size - overlap
    needed = overlap + n_patterns * unique
    if needed > n_features:
        raise ValueError(
            "Variant {} needs {} regions for {} patterns, only {} available".format(
                variant, needed, n_patterns, n_features
            )
        )

    order = check_rng(rng).permutation(n_features)
    core = order[:overlap]
    patterns = []
    for k in range(n_patterns):
        start = overlap + k * unique
        patterns.append(np.r_[core, order[start : start + unique]])
    return PatternSpec(patterns, overlap, alpha, sigma, n_features, variant)


def _clamp_volumes(volumes, stage):
    clamped = volumes <= 0
    if np.any(clamped):
        warnings.warn(
            "{} volumes dropped to zero or below {} and were set to {}".format(
                int(np.sum(clamped)), stage, VOLUME_FLOOR
            ),
            RuntimeWarning,
        )
        volumes[clamped] = VOLUME_FLOOR
    return volumes


def impose_patterns(baseline, spec, severity, rng=None):
    r"""
    Apply pattern-specific atrophy to baseline volumes.

    For subject `i`, pattern `k` and region `j` of that pattern,
    :math:`v_{ij} \leftarrow v_{ij} (1 - s_{ik} \epsilon \alpha)` with
    :math:`\epsilon \sim \mathcal{N}(1, \sigma)` drawn per entry. Regions in
    several patterns are reduced once per pattern, in pattern order.

    Parameters
    ----------
    baseline : ndarray of float
        Volumes of shape ``(n, S)``; not modified.
    spec : PatternSpec
    severity : ndarray of float
        Severities in [0, 1] of shape ``(n, M)``.
    rng : None, int or Generator, default: None

    Returns
    -------
    volumes : ndarray of float
        Patterned volumes. Entries that would drop to zero or below are set
        to ``1e-6`` with a ``RuntimeWarning``.
    """
    volumes = check_2d(
        np.asarray(baseline, dtype=np.float64), "baseline", spec.n_features
    )
    severity = check_2d(
        np.asarray(severity, dtype=np.float64), "severity", spec.n_patterns
    )
    if severity.shape[0] != volumes.shape[0]:
        raise ValueError(
            "severity must have {} rows, found {}".format(
                volumes.shape[0], severity.shape[0]
            )
        )
    check_unit_interval(severity, "severity")
    rng = check_rng(rng)

    volumes = volumes.copy()
    for k, regions in enumerate(spec.patterns):
        regions = list(regions)
        noise = rng.normal(1.0, spec.sigma, size=(volumes.shape[0], len(regions)))
        volumes[:, regions] *= 1.0 - severity[:, [k]] * noise * spec.alpha

    return _clamp_volumes(volumes, "after patterning")


def make_cohort(
    variant="basic",
    n_cn=492,
    n_pt=900,
    n_features=139,
    seed=None,
    n_patterns=3,
    n_covariates=0,
    covariate_effect=0.0,
):
    """
    Generate a semi-synthetic cohort with known pattern severities.

    ``n_cn + n_pt`` healthy baselines are drawn from one generator; the first
    ``n_cn`` rows become the CN group and the remaining rows are patterned
    with severities drawn i.i.d. from :math:`U[0, 1]^M`.

    Parameters
    ----------
    variant : str, default: "basic"
        One of ``"basic"``, ``"large_overlap"``, ``"scarce"``, ``"noisy"``,
        ``"mild"``.
    n_cn, n_pt : int, default: 492, 900
        Group sizes.
    n_features : int, default: 139
    seed : int or None, default: None
    n_patterns : int, default: 3
    n_covariates : int, default: 0
        Number of standard-normal covariates to plant.
    covariate_effect : float, default: 0.0
        Slope of every covariate on every region, added after patterning.
        Volumes the shift takes to zero or below are set to ``1e-6`` with a
        ``RuntimeWarning``.

    Returns
    -------
    cohort : SyntheticCohort

    Examples
    --------
    >>> from hetgan.synthdata import make_cohort
    >>> cohort = make_cohort(n_cn=20, n_pt=30, n_features=50, seed=1)
    >>> cohort.cn.shape, cohort.pt.shape, cohort.truth.shape
    ((20, 50), (30, 50), (30, 3))
    """
    _CheckInputs(variant, n_cn, n_pt, n_features, n_covariates)()
    spec_seq, base_seq, truth_seq, noise_seq, cov_seq = np.random.SeedSequence(
        seed
    ).spawn(5)

    spec = build_pattern_spec(variant, n_features, spec_seq, n_patterns)
    baseline = generate_baseline(n_cn + n_pt, n_features, base_seq)
    truth = np.random.default_rng(truth_seq).uniform(size=(n_pt, n_patterns))
    cn = baseline[:n_cn]
    pt = impose_patterns(baseline[n_cn:], spec, truth, noise_seq)

    cn_cov = pt_cov = None
    if n_covariates > 0:
        cov = np.random.default_rng(cov_seq).standard_normal(
            (n_cn + n_pt, n_covariates)
        )
        shift = covariate_effect * cov.sum(axis=1, keepdims=True)
        shifted = _clamp_volumes(
            np.vstack([cn, pt]) + shift, "after the covariate shift"
        )
        cn, pt = shifted[:n_cn], shifted[n_cn:]
        cn_cov, pt_cov = cov[:n_cn], cov[n_cn:]

    return SyntheticCohort(cn, pt, truth, spec, seed, cn_cov, pt_cov)
