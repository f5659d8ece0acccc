"""Concept-space document vectors and similarity diagnostics.

Each stratum becomes a vector of per-1,000-word concept frequencies, which
makes source and target strata directly comparable regardless of corpus size.
Cosine, Euclidean distance, and a two-component projection operate on these.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AnalysisError, ValidationError
from .ingest import CorpusStratum
from .lexicon import ConceptMap, Side

# Power iteration stops when the eigenvalue's relative change drops below
# EIGEN_TOL and the eigenpair residual drops below RESIDUAL_TOL.
EIGEN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
MAX_EIGEN_ITER = 10_000


@dataclass(frozen=True, eq=False)
class ConceptVector:
    stratum_label: str
    dims: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if len(self.dims) != values.shape[0]:
            raise ValidationError("dims and values differ in length")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValidationError("vector values must be finite and non-negative")


def concept_vector(stratum: CorpusStratum, cmap: ConceptMap, side: Side) -> ConceptVector:
    """Per-1,000-word token rate of each concept's lemmas, dims sorted by concept id."""
    expected_language = cmap.language_for(side)
    if stratum.language_code != expected_language:
        raise ValidationError(
            f"language mismatch: stratum is {stratum.language_code!r} but the "
            f"{side.value} side of the concept map is {expected_language!r}")
    total = stratum.total_word_count
    if total == 0:
        raise AnalysisError("empty stratum")
    counts = stratum.lemma_counts()
    dims = tuple(sorted(cmap.concepts))
    values = np.array([
        1000.0 * sum(counts[lem] for lem in cmap.concepts[cid].lemmas(side)) / total
        for cid in dims])
    return ConceptVector(stratum.label, dims, values)


def _check_dims(u: ConceptVector, v: ConceptVector) -> None:
    if u.dims != v.dims:
        raise ValidationError("vectors have different dims")


def cosine(u: ConceptVector, v: ConceptVector) -> float:
    """Cosine of the angle between two vectors; undefined for a zero vector."""
    _check_dims(u, v)
    nu = float(np.linalg.norm(u.values))
    nv = float(np.linalg.norm(v.values))
    if nu == 0.0 or nv == 0.0:
        raise AnalysisError("undefined cosine for a zero vector")
    return float(np.clip(np.dot(u.values, v.values) / (nu * nv), -1.0, 1.0))


def euclidean(u: ConceptVector, v: ConceptVector) -> float:
    """Straight-line distance between the two vectors."""
    _check_dims(u, v)
    return float(np.linalg.norm(u.values - v.values))


@dataclass(frozen=True, eq=False)
class Projection2D:
    labels: tuple[str, ...]
    coords: np.ndarray              # shape (n, 2)
    explained_variance: tuple[float, float]
    components: np.ndarray          # shape (2, d), orthonormal rows
    eigenvalues: tuple[float, float]


def _dominant_eigenpair(matrix: np.ndarray, rng: np.random.Generator,
                        orthogonal_to: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Largest eigenpair of a symmetric PSD matrix by power iteration.

    On a (numerically) zero matrix the eigenvalue is 0 and the vector is an
    arbitrary unit vector orthogonal to `orthogonal_to`.
    """
    n = matrix.shape[0]
    scale = float(np.abs(matrix).max())

    def orthogonalize(vec: np.ndarray) -> np.ndarray:
        if orthogonal_to is not None:
            vec = vec - np.dot(vec, orthogonal_to) * orthogonal_to
        return vec

    if scale == 0.0:
        for i in range(n):
            candidate = orthogonalize(np.eye(n)[i])
            norm = np.linalg.norm(candidate)
            if norm > 1e-12:
                return 0.0, candidate / norm
        raise AnalysisError("cannot build an orthogonal direction")

    v = orthogonalize(rng.standard_normal(n))
    v /= np.linalg.norm(v)
    lam_prev = 0.0
    lam = 0.0
    # the eigenvalue settles quadratically, so the relative-change test alone can
    # stop with the vector still off; require the residual to drop as well
    residual_tol = max(RESIDUAL_TOL, 100 * np.finfo(float).eps * scale)
    for _ in range(MAX_EIGEN_ITER):
        w = orthogonalize(matrix @ v)
        norm = float(np.linalg.norm(w))
        if norm <= scale * 1e-14:
            # deflated away: remaining spectrum is numerically zero
            return 0.0, v
        v = w / norm
        product = matrix @ v
        lam = float(v @ product)
        residual = float(np.linalg.norm(product - lam * v))
        if (abs(lam - lam_prev) <= EIGEN_TOL * max(abs(lam), 1e-300)
                and residual <= residual_tol):
            break
        lam_prev = lam
    return lam, v


def _orient(vec: np.ndarray) -> np.ndarray:
    # reproducible sign: the largest-magnitude loading points positive
    idx = int(np.argmax(np.abs(vec)))
    return -vec if vec[idx] < 0 else vec


def pca_2d(vectors: list[ConceptVector]) -> Projection2D:
    """Project vectors onto the top two principal axes of their sample covariance.

    Eigenpairs come from power iteration with deflation (fixed internal seed,
    so runs are reproducible). Explained-variance fractions are relative to
    the total variance; identical input vectors have no principal direction
    and raise an error.
    """
    if len(vectors) < 2:
        raise ValidationError("need at least 2 vectors")
    dims = vectors[0].dims
    for v in vectors[1:]:
        if v.dims != dims:
            raise ValidationError("vectors have different dims")
    X = np.vstack([v.values for v in vectors])
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / (X.shape[0] - 1)
    total_variance = float(np.trace(cov))
    if total_variance <= 0.0:
        raise AnalysisError("degenerate covariance: all vectors identical")

    rng = np.random.default_rng(0)
    lam1, w1 = _dominant_eigenpair(cov, rng)
    deflated = cov - lam1 * np.outer(w1, w1)
    lam2, w2 = _dominant_eigenpair(deflated, rng, orthogonal_to=w1)
    lam1, lam2 = max(lam1, 0.0), max(lam2, 0.0)
    if lam2 > lam1:
        lam1, lam2, w1, w2 = lam2, lam1, w2, w1
    w1, w2 = _orient(w1), _orient(w2)

    components = np.vstack([w1, w2])
    coords = centered @ components.T
    return Projection2D(
        labels=tuple(v.stratum_label for v in vectors),
        coords=coords,
        explained_variance=(lam1 / total_variance, lam2 / total_variance),
        components=components,
        eigenvalues=(lam1, lam2),
    )
